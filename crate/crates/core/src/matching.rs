//! Maximum-cardinality matching in general graphs (Edmonds' blossom search).

use std::collections::VecDeque;

use crate::error::Error;

const NONE: usize = usize::MAX;

/// Undirected simple graph on nodes `0..node_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    node_count: usize,
    links: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Rejects loops, out-of-range endpoints and repeated links.
    pub fn new(node_count: usize, links: &[(usize, usize)]) -> Result<Self, Error> {
        let mut adj = vec![Vec::new(); node_count];
        for &(a, b) in links {
            if a >= node_count || b >= node_count {
                return Err(Error::Precondition(format!(
                    "link ({a},{b}) out of range for {node_count} nodes"
                )));
            }
            if a == b {
                return Err(Error::Precondition(format!("loop at node {a}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Precondition(format!("repeated link at node {v}")));
            }
        }
        Ok(SimpleGraph {
            node_count,
            links: links.to_vec(),
            adj,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_link(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }
}

/// Node-disjoint set of links, stored as a mate table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<usize>,
}

impl Matching {
    pub fn empty(node_count: usize) -> Self {
        Matching {
            mate: vec![NONE; node_count],
        }
    }

    pub fn from_pairs(node_count: usize, pairs: &[(usize, usize)]) -> Result<Self, Error> {
        let mut m = Matching::empty(node_count);
        for &(a, b) in pairs {
            if a >= node_count || b >= node_count || a == b {
                return Err(Error::Precondition(format!("bad pair ({a},{b})")));
            }
            if m.mate[a] != NONE || m.mate[b] != NONE {
                return Err(Error::Precondition(format!(
                    "pair ({a},{b}) reuses a covered node"
                )));
            }
            m.mate[a] = b;
            m.mate[b] = a;
        }
        Ok(m)
    }

    pub fn mate(&self, v: usize) -> Option<usize> {
        match self.mate[v] {
            NONE => None,
            w => Some(w),
        }
    }

    pub fn is_covered(&self, v: usize) -> bool {
        self.mate[v] != NONE
    }

    /// Matched pairs (a, b) with a < b, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(a, &b)| b != NONE && a < b)
            .map(|(a, &b)| (a, b))
            .collect()
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|&&b| b != NONE).count() / 2
    }

    pub fn exposed(&self) -> Vec<usize> {
        (0..self.mate.len()).filter(|&v| self.mate[v] == NONE).collect()
    }

    /// Every pair is a link of `g` and the mate table is symmetric.
    pub fn is_valid_for(&self, g: &SimpleGraph) -> bool {
        if self.mate.len() != g.node_count() {
            return false;
        }
        self.mate.iter().enumerate().all(|(a, &b)| {
            b == NONE || (b < self.mate.len() && self.mate[b] == a && g.has_link(a, b))
        })
    }
}

enum Found {
    Exposed(usize),
    Target(usize),
}

struct Search<'a> {
    g: &'a SimpleGraph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    outer: Vec<bool>,
    in_blossom: Vec<bool>,
    stamp: Vec<usize>,
    clock: usize,
    queue: VecDeque<usize>,
}

impl<'a> Search<'a> {
    fn new(g: &'a SimpleGraph, mate: Vec<usize>) -> Self {
        let n = g.node_count();
        Search {
            g,
            mate,
            parent: vec![NONE; n],
            base: (0..n).collect(),
            outer: vec![false; n],
            in_blossom: vec![false; n],
            stamp: vec![0; n],
            clock: 0,
            queue: VecDeque::new(),
        }
    }

    fn lca(&mut self, mut a: usize, mut b: usize) -> usize {
        self.clock += 1;
        loop {
            a = self.base[a];
            self.stamp[a] = self.clock;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if self.stamp[b] == self.clock {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Grow an alternating tree from `root`. Stops at an exposed node
    /// (augmenting path) or, when `target` is given, at an outer node
    /// accepted by it (even alternating path).
    fn grow(&mut self, root: usize, target: Option<&dyn Fn(usize) -> bool>) -> Option<Found> {
        let n = self.g.node_count();
        self.parent.fill(NONE);
        self.outer.fill(false);
        for i in 0..n {
            self.base[i] = i;
        }
        self.queue.clear();
        self.outer[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            if v != root {
                if let Some(t) = target {
                    if t(v) {
                        return Some(Found::Target(v));
                    }
                }
            }
            for i in 0..self.g.adj[v].len() {
                let to = self.g.adj[v][i];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for j in 0..n {
                        if self.in_blossom[self.base[j]] {
                            self.base[j] = cur;
                            if !self.outer[j] {
                                self.outer[j] = true;
                                self.queue.push_back(j);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(Found::Exposed(to));
                    }
                    let u = self.mate[to];
                    self.outer[u] = true;
                    self.queue.push_back(u);
                }
            }
        }
        None
    }

    fn flip_from(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let next = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = next;
        }
    }
}

fn greedy(g: &SimpleGraph) -> Vec<usize> {
    let mut mate = vec![NONE; g.node_count()];
    for v in 0..g.node_count() {
        if mate[v] != NONE {
            continue;
        }
        if let Some(&w) = g.adj[v].iter().find(|&&w| mate[w] == NONE) {
            mate[v] = w;
            mate[w] = v;
        }
    }
    mate
}

/// Maximum-cardinality matching. Deterministic for a fixed link order.
pub fn max_matching(g: &SimpleGraph) -> Matching {
    let mut s = Search::new(g, greedy(g));
    for root in 0..g.node_count() {
        if s.mate[root] != NONE || g.adj[root].is_empty() {
            continue;
        }
        if let Some(Found::Exposed(end)) = s.grow(root, None) {
            s.flip_from(end);
        }
    }
    Matching { mate: s.mate }
}

/// Re-route a maximum matching so that the covered node set is best for the
/// given priority classes: class 0 first, then class 1, and so on. A node of
/// class c stays exposed only if covering it would uncover a node of a class
/// at most c that was already placed. Processing goes class by class, nodes in
/// id order, so the result is deterministic.
pub fn prioritize_cover(g: &SimpleGraph, m: &Matching, class: &[u8]) -> Matching {
    let n = g.node_count();
    assert_eq!(class.len(), n);
    let mut s = Search::new(g, m.mate.clone());
    let mut placed = vec![false; n];
    let top = class.iter().copied().max().unwrap_or(0);
    for c in 0..=top {
        for v in 0..n {
            if class[v] == c && s.mate[v] != NONE {
                placed[v] = true;
            }
        }
        for v in 0..n {
            if class[v] != c || s.mate[v] != NONE || g.adj[v].is_empty() {
                continue;
            }
            let snapshot = placed.clone();
            let mate_now = s.mate.clone();
            let accept = move |x: usize| mate_now[x] != NONE && !snapshot[x];
            match s.grow(v, Some(&accept)) {
                Some(Found::Exposed(end)) => {
                    s.flip_from(end);
                    placed[v] = true;
                }
                Some(Found::Target(t)) => {
                    let a = s.mate[t];
                    s.mate[t] = NONE;
                    s.flip_from(a);
                    placed[v] = true;
                }
                None => {}
            }
        }
    }
    Matching { mate: s.mate }
}
