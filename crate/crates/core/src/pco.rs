//! Parity-constrained orientation without conflicts: spanning-tree sweep.

use std::collections::VecDeque;

use crate::error::Error;
use crate::graph::{contract_forced, Instance, Orientation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PcoStatus {
    Feasible(Orientation),
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcoResult {
    pub status: PcoStatus,
    /// Satisfied parity constraints of the best orientation found.
    pub satisfied_count: usize,
    /// That orientation, also present when the instance is infeasible.
    pub orientation: Orientation,
}

impl PcoResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self.status, PcoStatus::Feasible(_))
    }

    pub fn feasible_orientation(&self) -> Option<&Orientation> {
        match &self.status {
            PcoStatus::Feasible(o) => Some(o),
            PcoStatus::Infeasible => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Decide,
    Maximize,
}

/// Decide feasibility; returns an orientation satisfying every parity
/// constraint when one exists.
pub fn solve_pco(inst: &Instance) -> Result<PcoResult, Error> {
    sweep(inst, Mode::Decide)
}

/// Maximize the number of satisfied parity constraints. Per component the
/// optimum misses at most one constraint, placed on the largest constrained id.
pub fn solve_pco_max(inst: &Instance) -> Result<PcoResult, Error> {
    sweep(inst, Mode::Maximize)
}

fn sweep(inst: &Instance, mode: Mode) -> Result<PcoResult, Error> {
    if !inst.conflicts.is_empty() {
        return Err(Error::Precondition(
            "base solver takes instances without conflicts".into(),
        ));
    }
    let contraction = contract_forced(inst)?;
    let sub = &contraction.instance;
    let g = &sub.graph;
    let n = g.vertex_count;
    let inc = g.incidence();

    let mut seen = vec![false; n];
    let mut in_tree = vec![false; n];
    let mut tree_parent_edge = vec![usize::MAX; n];
    let mut is_tree = vec![false; g.edge_count()];
    let mut head = vec![usize::MAX; g.edge_count()];
    let mut roots = Vec::new();
    let mut order = Vec::new();

    for start in 0..n {
        if seen[start] {
            continue;
        }
        // Collect the component first to pick the root.
        let mut comp = vec![start];
        seen[start] = true;
        let mut q = VecDeque::from([start]);
        while let Some(v) = q.pop_front() {
            for &e in &inc[v] {
                let w = g.other(e, v);
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    q.push_back(w);
                }
            }
        }
        let free = comp.iter().copied().filter(|v| !sub.parity.contains_key(v)).min();
        let root = match (free, mode) {
            (Some(v), _) => v,
            (None, Mode::Decide) => start,
            (None, Mode::Maximize) => comp.iter().copied().max().unwrap_or(start),
        };
        roots.push(root);
        // Breadth-first spanning tree from the root.
        let mut visited = vec![root];
        in_tree[root] = true;
        let mut q = VecDeque::from([root]);
        while let Some(v) = q.pop_front() {
            for &e in &inc[v] {
                let w = g.other(e, v);
                if !in_tree[w] {
                    in_tree[w] = true;
                    tree_parent_edge[w] = e;
                    is_tree[e] = true;
                    visited.push(w);
                    q.push_back(w);
                }
            }
        }
        order.push(visited);
    }

    for (e, &(u, v)) in g.edges.iter().enumerate() {
        if !is_tree[e] {
            head[e] = u.max(v);
        }
    }
    let mut indeg = vec![0usize; n];
    for &h in head.iter().filter(|&&h| h != usize::MAX) {
        indeg[h] += 1;
    }
    for visited in &order {
        for &x in visited.iter().skip(1).rev() {
            let e = tree_parent_edge[x];
            let parent = g.other(e, x);
            let want_in = match sub.parity.get(&x) {
                Some(&p) => indeg[x] % 2 != p as usize,
                None => false,
            };
            let h = if want_in { x } else { parent };
            head[e] = h;
            indeg[h] += 1;
        }
    }

    let mut feasible = true;
    for &r in &roots {
        if let Some(&p) = sub.parity.get(&r) {
            if indeg[r] % 2 != p as usize {
                feasible = false;
            }
        }
    }
    let o = contraction.lift(inst.edge_count(), &Orientation::new(head));
    let satisfied_count = crate::graph::satisfied_parities(inst, &o);
    let status = if feasible {
        PcoStatus::Feasible(o.clone())
    } else {
        PcoStatus::Infeasible
    };
    Ok(PcoResult {
        status,
        satisfied_count,
        orientation: o,
    })
}
