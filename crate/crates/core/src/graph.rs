//! Multigraphs, parity maps, conflicts, instances and orientations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Undirected multigraph. Edge ids are positions in `edges`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Multigraph {
    pub vertex_count: usize,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl Multigraph {
    pub fn new(vertex_count: usize) -> Self {
        Multigraph {
            vertex_count,
            edges: Vec::new(),
        }
    }

    pub fn from_edges(vertex_count: usize, edges: &[(VertexId, VertexId)]) -> Self {
        Multigraph {
            vertex_count,
            edges: edges.to_vec(),
        }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        self.edges.push((u, v));
        self.edges.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn is_incident(&self, e: EdgeId, v: VertexId) -> bool {
        let (a, b) = self.edges[e];
        a == v || b == v
    }

    /// Incident edge ids per vertex, each list in increasing id order.
    pub fn incidence(&self) -> Vec<Vec<EdgeId>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if u < self.vertex_count {
                inc[u].push(e);
            }
            if v < self.vertex_count && v != u {
                inc[v].push(e);
            }
        }
        inc
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incidence().iter().map(Vec::len).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConflictKind {
    Exact,
    Subset,
}

impl fmt::Display for ConflictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConflictKind::Exact => write!(f, "exact"),
            ConflictKind::Subset => write!(f, "subset"),
        }
    }
}

/// A forbidden incoming configuration at `vertex`. `edges` is kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Conflict {
    pub vertex: VertexId,
    pub edges: Vec<EdgeId>,
    pub kind: ConflictKind,
}

impl Conflict {
    pub fn new(vertex: VertexId, edges: &[EdgeId], kind: ConflictKind) -> Self {
        let mut edges = edges.to_vec();
        edges.sort_unstable();
        Conflict {
            vertex,
            edges,
            kind,
        }
    }

    pub fn exact(vertex: VertexId, edges: &[EdgeId]) -> Self {
        Conflict::new(vertex, edges, ConflictKind::Exact)
    }

    pub fn subset(vertex: VertexId, edges: &[EdgeId]) -> Self {
        Conflict::new(vertex, edges, ConflictKind::Subset)
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

/// Parity constraints on a subset of the vertices: vertex -> 0 or 1.
pub type ParityMap = BTreeMap<VertexId, u8>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Instance {
    pub graph: Multigraph,
    pub parity: ParityMap,
    pub conflicts: Vec<Conflict>,
    /// Edges whose head is fixed in advance.
    pub forced: BTreeMap<EdgeId, VertexId>,
}

impl Instance {
    pub fn new(graph: Multigraph) -> Self {
        Instance {
            graph,
            ..Default::default()
        }
    }

    /// Every vertex constrained to even indegree.
    pub fn all_even(graph: Multigraph) -> Self {
        let parity = (0..graph.vertex_count).map(|v| (v, 0)).collect();
        Instance {
            graph,
            parity,
            ..Default::default()
        }
    }

    pub fn with_parity(mut self, v: VertexId, p: u8) -> Self {
        self.parity.insert(v, p);
        self
    }

    pub fn with_conflict(mut self, c: Conflict) -> Self {
        self.conflicts.push(c);
        self
    }

    pub fn with_forced(mut self, e: EdgeId, head: VertexId) -> Self {
        self.forced.insert(e, head);
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Conflicts sharing a vertex have disjoint edge sets.
    pub fn pairwise_disjoint(&self) -> bool {
        let mut seen: BTreeSet<(VertexId, EdgeId)> = BTreeSet::new();
        for c in &self.conflicts {
            for &e in &c.edges {
                if !seen.insert((c.vertex, e)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn has_kind(&self, kind: ConflictKind) -> bool {
        self.conflicts.iter().any(|c| c.kind == kind)
    }

    pub fn all_kind(&self, kind: ConflictKind) -> bool {
        self.conflicts.iter().all(|c| c.kind == kind)
    }
}

/// Head vertex per edge, indexed by EdgeId.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    pub head: Vec<VertexId>,
}

impl Orientation {
    pub fn new(head: Vec<VertexId>) -> Self {
        Orientation { head }
    }

    pub fn indegrees(&self, vertex_count: usize) -> Vec<usize> {
        let mut deg = vec![0; vertex_count];
        for &h in &self.head {
            deg[h] += 1;
        }
        deg
    }

    /// Incoming edge ids per vertex, sorted.
    pub fn incoming(&self, vertex_count: usize) -> Vec<Vec<EdgeId>> {
        let mut inc = vec![Vec::new(); vertex_count];
        for (e, &h) in self.head.iter().enumerate() {
            inc[h].push(e);
        }
        inc
    }

    /// Head is the larger endpoint for every edge.
    pub fn toward_larger(g: &Multigraph) -> Self {
        Orientation {
            head: g.edges.iter().map(|&(u, v)| u.max(v)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub parity_violations: Vec<VertexId>,
    pub conflict_violations: Vec<usize>,
    pub forced_violations: Vec<EdgeId>,
}

impl VerifyReport {
    pub fn is_feasible(&self) -> bool {
        self.parity_violations.is_empty()
            && self.conflict_violations.is_empty()
            && self.forced_violations.is_empty()
    }

    pub fn is_conflict_free(&self) -> bool {
        self.conflict_violations.is_empty() && self.forced_violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructuralError {
    EndpointOutOfRange { edge: EdgeId, vertex: VertexId },
    SelfLoop { edge: EdgeId, vertex: VertexId },
    ParityVertexOutOfRange { vertex: VertexId },
    BadParityValue { vertex: VertexId, value: u8 },
    ConflictVertexOutOfRange { conflict: usize, vertex: VertexId },
    EmptyConflict { conflict: usize },
    DuplicateConflictEdge { conflict: usize, edge: EdgeId },
    ConflictEdgeOutOfRange { conflict: usize, edge: EdgeId },
    EdgeNotIncident { conflict: usize, edge: EdgeId, vertex: VertexId },
    ForcedEdgeOutOfRange { edge: EdgeId },
    ForcedHeadNotEndpoint { edge: EdgeId, head: VertexId },
}

impl fmt::Display for StructuralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use StructuralError::*;
        match self {
            EndpointOutOfRange { edge, vertex } => {
                write!(f, "edge {edge}: endpoint {vertex} out of range")
            }
            SelfLoop { edge, vertex } => write!(f, "edge {edge}: self-loop at vertex {vertex}"),
            ParityVertexOutOfRange { vertex } => {
                write!(f, "parity: vertex {vertex} out of range")
            }
            BadParityValue { vertex, value } => {
                write!(f, "parity: vertex {vertex} has value {value}, expected 0 or 1")
            }
            ConflictVertexOutOfRange { conflict, vertex } => {
                write!(f, "conflict {conflict}: vertex {vertex} out of range")
            }
            EmptyConflict { conflict } => write!(f, "conflict {conflict}: empty edge set"),
            DuplicateConflictEdge { conflict, edge } => {
                write!(f, "conflict {conflict}: edge {edge} listed twice")
            }
            ConflictEdgeOutOfRange { conflict, edge } => {
                write!(f, "conflict {conflict}: edge {edge} out of range")
            }
            EdgeNotIncident {
                conflict,
                edge,
                vertex,
            } => write!(
                f,
                "conflict {conflict}: edge {edge} not incident to conflict vertex {vertex}"
            ),
            ForcedEdgeOutOfRange { edge } => write!(f, "forced: edge {edge} out of range"),
            ForcedHeadNotEndpoint { edge, head } => {
                write!(f, "forced: head {head} is not an endpoint of edge {edge}")
            }
        }
    }
}

pub fn validate_instance(inst: &Instance) -> Vec<StructuralError> {
    use StructuralError::*;
    let g = &inst.graph;
    let n = g.vertex_count;
    let m = g.edge_count();
    let mut errs = Vec::new();
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        for x in [u, v] {
            if x >= n {
                errs.push(EndpointOutOfRange { edge: e, vertex: x });
            }
        }
        if u == v {
            errs.push(SelfLoop { edge: e, vertex: u });
        }
    }
    for (&v, &p) in &inst.parity {
        if v >= n {
            errs.push(ParityVertexOutOfRange { vertex: v });
        }
        if p > 1 {
            errs.push(BadParityValue {
                vertex: v,
                value: p,
            });
        }
    }
    for (i, c) in inst.conflicts.iter().enumerate() {
        if c.vertex >= n {
            errs.push(ConflictVertexOutOfRange {
                conflict: i,
                vertex: c.vertex,
            });
        }
        if c.edges.is_empty() {
            errs.push(EmptyConflict { conflict: i });
        }
        let mut seen = BTreeSet::new();
        for &e in &c.edges {
            if !seen.insert(e) {
                errs.push(DuplicateConflictEdge { conflict: i, edge: e });
            }
            if e >= m {
                errs.push(ConflictEdgeOutOfRange { conflict: i, edge: e });
            } else if !g.is_incident(e, c.vertex) {
                errs.push(EdgeNotIncident {
                    conflict: i,
                    edge: e,
                    vertex: c.vertex,
                });
            }
        }
    }
    for (&e, &h) in &inst.forced {
        if e >= m {
            errs.push(ForcedEdgeOutOfRange { edge: e });
        } else if !g.is_incident(e, h) {
            errs.push(ForcedHeadNotEndpoint { edge: e, head: h });
        }
    }
    errs
}

pub fn check_orientation(g: &Multigraph, o: &Orientation) -> Result<(), Error> {
    if o.head.len() != g.edge_count() {
        return Err(Error::Orientation(format!(
            "orientation has {} heads, graph has {} edges",
            o.head.len(),
            g.edge_count()
        )));
    }
    for (e, &h) in o.head.iter().enumerate() {
        if !g.is_incident(e, h) {
            return Err(Error::Orientation(format!(
                "edge {e}: head {h} is not an endpoint"
            )));
        }
    }
    Ok(())
}

/// True when `conflict` is triggered by the sorted incoming list `incoming`.
pub fn conflict_violated(conflict: &Conflict, incoming: &[EdgeId]) -> bool {
    match conflict.kind {
        ConflictKind::Exact => incoming == conflict.edges.as_slice(),
        ConflictKind::Subset => conflict
            .edges
            .iter()
            .all(|e| incoming.binary_search(e).is_ok()),
    }
}

pub fn verify(inst: &Instance, o: &Orientation) -> Result<VerifyReport, Error> {
    check_orientation(&inst.graph, o)?;
    let n = inst.vertex_count();
    let incoming = o.incoming(n);
    let mut report = VerifyReport::default();
    for (&v, &p) in &inst.parity {
        if incoming[v].len() % 2 != p as usize {
            report.parity_violations.push(v);
        }
    }
    for (i, c) in inst.conflicts.iter().enumerate() {
        if conflict_violated(c, &incoming[c.vertex]) {
            report.conflict_violations.push(i);
        }
    }
    for (&e, &h) in &inst.forced {
        if o.head[e] != h {
            report.forced_violations.push(e);
        }
    }
    Ok(report)
}

/// Number of constrained vertices whose parity holds under `o`.
pub fn satisfied_parities(inst: &Instance, o: &Orientation) -> usize {
    let deg = o.indegrees(inst.vertex_count());
    inst.parity
        .iter()
        .filter(|(&v, &p)| deg[v] % 2 == p as usize)
        .count()
}

/// Drop exact conflicts that the parity at their vertex already rules out and
/// turn single-edge subset conflicts into forced orientations.
pub fn normalize(inst: &Instance) -> Result<Instance, Error> {
    let g = &inst.graph;
    let mut forced = inst.forced.clone();
    let mut conflicts = Vec::new();
    for c in &inst.conflicts {
        match c.kind {
            ConflictKind::Exact => {
                if let Some(&p) = inst.parity.get(&c.vertex) {
                    if c.size() % 2 != p as usize {
                        continue;
                    }
                }
                conflicts.push(c.clone());
            }
            ConflictKind::Subset if c.size() == 1 => {
                let e = c.edges[0];
                let away = g.other(e, c.vertex);
                match forced.get(&e) {
                    Some(&h) if h != away => {
                        return Err(Error::Infeasible(format!(
                            "edge {e} is forced both into and away from vertex {}",
                            c.vertex
                        )))
                    }
                    _ => {
                        forced.insert(e, away);
                    }
                }
            }
            ConflictKind::Subset => conflicts.push(c.clone()),
        }
    }
    Ok(Instance {
        graph: g.clone(),
        parity: inst.parity.clone(),
        conflicts,
        forced,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// Connected components ordered by smallest vertex; vertex and edge lists sorted.
pub fn components(g: &Multigraph) -> Vec<Component> {
    let inc = g.incidence();
    let mut comp = vec![usize::MAX; g.vertex_count];
    let mut out = Vec::new();
    for s in 0..g.vertex_count {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut vertices = vec![s];
        let mut edges = Vec::new();
        comp[s] = id;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &inc[v] {
                let w = g.other(e, v);
                if v < w {
                    edges.push(e);
                }
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    vertices.push(w);
                    queue.push_back(w);
                }
            }
        }
        vertices.sort_unstable();
        edges.sort_unstable();
        edges.dedup();
        out.push(Component { vertices, edges });
    }
    out
}

/// An instance with its forced edges removed.
#[derive(Clone, Debug)]
pub struct Contraction {
    /// Instance over the kept edges only, edges renumbered.
    pub instance: Instance,
    /// New edge id -> original edge id.
    pub kept: Vec<EdgeId>,
    /// Forced edges with their heads.
    pub fixed: BTreeMap<EdgeId, VertexId>,
}

impl Contraction {
    pub fn lift(&self, original_edges: usize, o: &Orientation) -> Orientation {
        let mut head = vec![usize::MAX; original_edges];
        for (i, &e) in self.kept.iter().enumerate() {
            head[e] = o.head[i];
        }
        for (&e, &h) in &self.fixed {
            head[e] = h;
        }
        Orientation { head }
    }
}

/// Delete forced edges, flip the parity of constrained heads, and simplify the
/// conflicts that mention them.
pub fn contract_forced(inst: &Instance) -> Result<Contraction, Error> {
    let g = &inst.graph;
    let mut parity = inst.parity.clone();
    for &h in inst.forced.values() {
        if let Some(p) = parity.get_mut(&h) {
            *p ^= 1;
        }
    }
    let mut new_id = vec![usize::MAX; g.edge_count()];
    let mut kept = Vec::new();
    let mut graph = Multigraph::new(g.vertex_count);
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        if !inst.forced.contains_key(&e) {
            new_id[e] = kept.len();
            kept.push(e);
            graph.add_edge(u, v);
        }
    }
    let mut conflicts = Vec::new();
    'next: for c in &inst.conflicts {
        let mut rest = Vec::new();
        for &e in &c.edges {
            match inst.forced.get(&e) {
                None => rest.push(new_id[e]),
                Some(&h) if h == c.vertex => {}
                Some(_) => continue 'next,
            }
        }
        if c.kind == ConflictKind::Exact {
            let extra_in = inst
                .forced
                .iter()
                .any(|(&e, &h)| h == c.vertex && c.edges.binary_search(&e).is_err());
            if extra_in {
                continue;
            }
        }
        if rest.is_empty() {
            match c.kind {
                ConflictKind::Subset => {
                    return Err(Error::Infeasible(format!(
                        "subset conflict at vertex {} is fully forced in",
                        c.vertex
                    )))
                }
                ConflictKind::Exact => {
                    return Err(Error::Unsupported(format!(
                        "exact conflict at vertex {} reduces to an empty set after forcing",
                        c.vertex
                    )))
                }
            }
        }
        conflicts.push(Conflict::new(c.vertex, &rest, c.kind));
    }
    Ok(Contraction {
        instance: Instance {
            graph,
            parity,
            conflicts,
            forced: BTreeMap::new(),
        },
        kept,
        fixed: inst.forced.clone(),
    })
}
