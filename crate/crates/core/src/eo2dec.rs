//! Even orientations with disjoint exact conflict pairs, via maximum matching
//! on the conflict-filtered line graph L′.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::graph::{
    normalize, satisfied_parities, verify, ConflictKind, EdgeId, Instance, Multigraph,
    Orientation, VertexId,
};
use crate::matching::{max_matching, prioritize_cover, Matching, SimpleGraph};
use crate::reduction::{pendant, pull_back, ConflictMode};

/// A link of L′ with the common endpoints where the pair is not a conflict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LLink {
    pub a: EdgeId,
    pub b: EdgeId,
    pub witnesses: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPrimeGraph {
    pub node_count: usize,
    pub links: Vec<LLink>,
}

impl LPrimeGraph {
    pub fn simple(&self) -> SimpleGraph {
        let pairs: Vec<_> = self.links.iter().map(|l| (l.a, l.b)).collect();
        SimpleGraph::new(self.node_count, &pairs).expect("L′ links are distinct")
    }

    pub fn witness(&self, a: EdgeId, b: EdgeId) -> Option<VertexId> {
        let (a, b) = (a.min(b), a.max(b));
        self.links
            .binary_search_by(|l| (l.a, l.b).cmp(&(a, b)))
            .ok()
            .map(|i| self.links[i].witnesses[0])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EoResult {
    pub orientation: Orientation,
    pub odd_vertices: Vec<VertexId>,
    pub t: usize,
}

/// Conflict pairs as (vertex, smaller edge, larger edge).
fn pair_set(g: &Multigraph, inst: &Instance) -> Result<BTreeSet<(VertexId, EdgeId, EdgeId)>, Error> {
    let mut set = BTreeSet::new();
    for (i, c) in inst.conflicts.iter().enumerate() {
        if c.kind != ConflictKind::Exact || c.size() != 2 {
            return Err(Error::Precondition(format!(
                "conflict {i} is not an exact pair"
            )));
        }
        if !g.is_incident(c.edges[0], c.vertex) || !g.is_incident(c.edges[1], c.vertex) {
            return Err(Error::Precondition(format!(
                "conflict {i}: edges must share vertex {}",
                c.vertex
            )));
        }
    }
    if !inst.pairwise_disjoint() {
        return Err(Error::Precondition("conflicts are not pairwise disjoint".into()));
    }
    for c in &inst.conflicts {
        set.insert((c.vertex, c.edges[0], c.edges[1]));
    }
    Ok(set)
}

pub fn build_lprime(inst: &Instance) -> Result<LPrimeGraph, Error> {
    let g = &inst.graph;
    let pairs = pair_set(g, inst)?;
    let inc = g.incidence();
    let mut links: BTreeMap<(EdgeId, EdgeId), Vec<VertexId>> = BTreeMap::new();
    for (v, list) in inc.iter().enumerate() {
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                let (a, b) = (list[i], list[j]);
                if pairs.contains(&(v, a, b)) {
                    continue;
                }
                links.entry((a, b)).or_default().push(v);
            }
        }
    }
    Ok(LPrimeGraph {
        node_count: g.edge_count(),
        links: links
            .into_iter()
            .map(|((a, b), mut w)| {
                w.sort_unstable();
                LLink { a, b, witnesses: w }
            })
            .collect(),
    })
}

/// Matched pairs go into their smallest witness; unmatched edges form paths
/// and circuits, each traversed forward so every one gets a distinct head.
pub fn matching_to_orientation(
    g: &Multigraph,
    lp: &LPrimeGraph,
    m: &Matching,
) -> Result<EoResult, Error> {
    let mut head = vec![usize::MAX; g.edge_count()];
    for (a, b) in m.pairs() {
        let w = lp.witness(a, b).ok_or_else(|| {
            Error::Precondition(format!("matched pair ({a},{b}) is not a link of L′"))
        })?;
        head[a] = w;
        head[b] = w;
    }
    let mut star: Vec<Vec<EdgeId>> = vec![Vec::new(); g.vertex_count];
    for e in 0..g.edge_count() {
        if head[e] == usize::MAX {
            let (u, v) = g.endpoints(e);
            star[u].push(e);
            star[v].push(e);
        }
    }
    if let Some(v) = (0..g.vertex_count).find(|&v| star[v].len() > 2) {
        return Err(Error::Precondition(format!(
            "vertex {v} has {} unmatched edges; the matching is not maximum",
            star[v].len()
        )));
    }
    // Paths from their smaller endpoint first, then circuits.
    let mut used = vec![false; g.edge_count()];
    let walk = |start: VertexId, first: EdgeId, head: &mut Vec<usize>, used: &mut Vec<bool>| {
        let mut at = start;
        let mut e = first;
        loop {
            used[e] = true;
            let next = g.other(e, at);
            head[e] = next;
            at = next;
            match star[at].iter().find(|&&f| !used[f]) {
                Some(&f) => e = f,
                None => break,
            }
        }
    };
    let ends: Vec<VertexId> = (0..g.vertex_count).filter(|&v| star[v].len() == 1).collect();
    for &v in &ends {
        let e = star[v][0];
        if !used[e] {
            walk(v, e, &mut head, &mut used);
        }
    }
    for v in 0..g.vertex_count {
        if let Some(&e) = star[v].iter().filter(|&&e| !used[e]).min_by_key(|&&e| (g.other(e, v), e)) {
            walk(v, e, &mut head, &mut used);
        }
    }
    let o = Orientation::new(head);
    let deg = o.indegrees(g.vertex_count);
    let odd_vertices: Vec<VertexId> = (0..g.vertex_count).filter(|&v| deg[v] % 2 == 1).collect();
    let t = odd_vertices.len();
    Ok(EoResult {
        orientation: o,
        odd_vertices,
        t,
    })
}

/// Minimum number of odd-indegree vertices over conflict-free orientations.
/// Parity entries in the instance are ignored: every vertex is treated as even.
pub fn solve_eo_2dec(inst: &Instance) -> Result<EoResult, Error> {
    if !inst.forced.is_empty() {
        return Err(Error::Precondition("forced edges are not supported here".into()));
    }
    let lp = build_lprime(inst)?;
    let m = max_matching(&lp.simple());
    matching_to_orientation(&inst.graph, &lp, &m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcoOptimum {
    pub orientation: Orientation,
    pub feasible: bool,
    pub satisfied: usize,
    pub constrained: usize,
    pub violated: Vec<VertexId>,
}

/// Parity-constrained orientation with disjoint exact conflict pairs. Returns
/// a conflict-free orientation with the maximum number of satisfied parity
/// constraints; `feasible` when all of them hold.
pub fn solve_pco_2dec(inst: &Instance) -> Result<PcoOptimum, Error> {
    if !inst.forced.is_empty() {
        return Err(Error::Precondition("forced edges are not supported here".into()));
    }
    pair_set(&inst.graph, inst)?;
    let norm = normalize(inst)?;
    let (reduced, map) = pendant::pco_to_eo(&norm, ConflictMode::Exact)?;
    let r = solve_eo_2dec(&reduced)?;
    let o = if r.t == 0 {
        pull_back(&r.orientation, &map)
    } else {
        optimize_pco_2dec(inst)?
    };
    let report = verify(inst, &o)?;
    debug_assert!(report.is_conflict_free());
    Ok(PcoOptimum {
        feasible: report.is_feasible(),
        satisfied: satisfied_parities(inst, &o),
        constrained: inst.parity.len(),
        violated: report.parity_violations,
        orientation: o,
    })
}

/// Line graph with one leftover token per vertex. Every edge node must be
/// covered: paired at a shared endpoint, or matched to the token of the
/// endpoint it enters. Odd vertices want their token used, even vertices
/// want it free (token matched to a private partner).
fn optimize_pco_2dec(inst: &Instance) -> Result<Orientation, Error> {
    let g = &inst.graph;
    let m = g.edge_count();
    let n = g.vertex_count;
    let lp = build_lprime(inst)?;
    let token = |v: VertexId| m + v;
    let mut class = vec![0u8; m];
    class.extend((0..n).map(|v| match inst.parity.get(&v) {
        Some(1) => 1,
        _ => 2,
    }));
    let mut links: Vec<(usize, usize)> = lp.links.iter().map(|l| (l.a, l.b)).collect();
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        links.push((e, token(u)));
        links.push((e, token(v)));
    }
    for (&v, &p) in &inst.parity {
        if p == 0 {
            let partner = class.len();
            class.push(1);
            links.push((token(v), partner));
        }
    }
    let h = SimpleGraph::new(class.len(), &links)?;
    let start = max_matching(&h);
    let best = prioritize_cover(&h, &start, &class);
    let mut head = vec![usize::MAX; m];
    for e in 0..m {
        match best.mate(e) {
            Some(f) if f < m => head[e] = lp.witness(e, f).expect("pair is a link"),
            Some(t) if t < m + n => head[e] = t - m,
            _ => {
                return Err(Error::Precondition(format!(
                    "edge {e} left without a head; no conflict-free orientation"
                )))
            }
        }
    }
    Ok(Orientation::new(head))
}
