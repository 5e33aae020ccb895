//! Polynomial reductions to even orientation with disjoint exact conflict
//! pairs, and the pull-back of reduced solutions.

pub mod dec;
pub mod dsc;
pub mod pendant;
pub mod switching;

use crate::eo2dec::solve_eo_2dec;
use crate::error::Error;
use crate::graph::{contract_forced, normalize, verify, ConflictKind, EdgeId, Instance, Orientation, VertexId};

pub use dec::pco_dec_to_eo_2dec;
pub use dsc::eo_dsc_to_eo_2dec;
pub use pendant::pco_to_eo;
pub use switching::{build_switching_network, SwitchingNetwork};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConflictMode {
    None,
    Exact,
    Subset,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VertexRole {
    Original,
    /// Pendant that fixes the parity of an odd vertex.
    Dummy(VertexId),
    Hub,
    HubPendant,
    /// Second and third vertex of the path hung at an original vertex.
    PathSecond(VertexId),
    PathThird(VertexId),
    /// Internal vertex of a switching network; `side` 0 is the input side.
    Network { conflict: usize, copy: usize, side: u8 },
    GadgetCenter(usize),
    GadgetSlot { conflict: usize, index: usize },
    GadgetPendant(usize),
    OddPendant(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeRole {
    Original(EdgeId),
    Dummy(VertexId),
    Hub(VertexId),
    HubPendant,
    Path { vertex: VertexId, index: u8 },
    NetworkInternal { conflict: usize, index: usize },
    NetworkOutput { conflict: usize, index: usize },
    GadgetSpoke { conflict: usize, index: usize },
    GadgetToVertex(usize),
    GadgetToPendant(usize),
    OddPendant(usize),
}

/// Correspondence between an original instance and a reduced one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMap {
    pub original_vertices: usize,
    pub original_edges: usize,
    /// Original edge -> reduced edge.
    pub edge_map: Vec<EdgeId>,
    /// Reduced vertex -> the original vertex it stands for, if any.
    pub vertex_origin: Vec<Option<VertexId>>,
    pub vertex_roles: Vec<VertexRole>,
    pub edge_roles: Vec<EdgeRole>,
}

impl ReductionMap {
    pub fn identity(inst: &Instance) -> Self {
        let n = inst.vertex_count();
        let m = inst.edge_count();
        ReductionMap {
            original_vertices: n,
            original_edges: m,
            edge_map: (0..m).collect(),
            vertex_origin: (0..n).map(Some).collect(),
            vertex_roles: vec![VertexRole::Original; n],
            edge_roles: (0..m).map(EdgeRole::Original).collect(),
        }
    }

    pub fn added_vertices(&self) -> usize {
        self.vertex_origin.len() - self.original_vertices
    }

    pub fn added_edges(&self) -> usize {
        self.edge_roles.len() - self.original_edges
    }

    /// Chain `self` (original -> middle) with `next` (middle -> final).
    pub fn then(&self, next: &ReductionMap) -> ReductionMap {
        ReductionMap {
            original_vertices: self.original_vertices,
            original_edges: self.original_edges,
            edge_map: self.edge_map.iter().map(|&e| next.edge_map[e]).collect(),
            vertex_origin: next
                .vertex_origin
                .iter()
                .map(|o| o.and_then(|v| self.vertex_origin[v]))
                .collect(),
            vertex_roles: next.vertex_roles.clone(),
            edge_roles: next.edge_roles.clone(),
        }
    }
}

/// Orient each original edge like its image; heads on gadget vertices that
/// stand for an original vertex translate back to it.
pub fn pull_back(o: &Orientation, map: &ReductionMap) -> Orientation {
    let head = map
        .edge_map
        .iter()
        .map(|&e| {
            let h = o.head[e];
            map.vertex_origin[h].expect("image edge ends at a vertex with an origin")
        })
        .collect();
    Orientation::new(head)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub feasible: bool,
    pub orientation: Option<Orientation>,
}

impl Decision {
    fn infeasible() -> Self {
        Decision {
            feasible: false,
            orientation: None,
        }
    }
}

fn require_kind(inst: &Instance, kind: ConflictKind) -> Result<(), Error> {
    if let Some(i) = inst.conflicts.iter().position(|c| c.kind != kind) {
        return Err(Error::Precondition(format!("conflict {i} is not {kind}")));
    }
    if !inst.pairwise_disjoint() {
        return Err(Error::Precondition("conflicts are not pairwise disjoint".into()));
    }
    Ok(())
}

/// Disjoint exact conflicts of size at least two.
pub fn solve_pco_dec(inst: &Instance) -> Result<Decision, Error> {
    require_kind(inst, ConflictKind::Exact)?;
    if let Some(i) = inst.conflicts.iter().position(|c| c.size() == 1) {
        return Err(Error::Unsupported(format!(
            "conflict {i} is a single-edge exact conflict; this case is open for the polynomial route"
        )));
    }
    if !inst.forced.is_empty() {
        return Err(Error::Precondition("forced edges are not supported here".into()));
    }
    let norm = normalize(inst)?;
    let (reduced, map) = pco_dec_to_eo_2dec(&norm)?;
    let r = solve_eo_2dec(&reduced)?;
    if r.t != 0 {
        return Ok(Decision::infeasible());
    }
    let o = pull_back(&r.orientation, &map);
    debug_assert!(verify(inst, &o).map(|r| r.is_feasible()).unwrap_or(false));
    Ok(Decision {
        feasible: true,
        orientation: Some(o),
    })
}

/// Disjoint subset conflicts of any size.
pub fn solve_pco_dsc(inst: &Instance) -> Result<Decision, Error> {
    require_kind(inst, ConflictKind::Subset)?;
    let norm = match normalize(inst) {
        Ok(n) => n,
        Err(Error::Infeasible(_)) => return Ok(Decision::infeasible()),
        Err(e) => return Err(e),
    };
    let contraction = match contract_forced(&norm) {
        Ok(c) => c,
        Err(Error::Infeasible(_)) => return Ok(Decision::infeasible()),
        Err(e) => return Err(e),
    };
    let (mid, map1) = pco_to_eo(&contraction.instance, ConflictMode::Subset)?;
    let (reduced, map2) = eo_dsc_to_eo_2dec(&mid)?;
    let r = solve_eo_2dec(&reduced)?;
    if r.t != 0 {
        return Ok(Decision::infeasible());
    }
    let o = pull_back(&r.orientation, &map1.then(&map2));
    let o = contraction.lift(inst.edge_count(), &o);
    debug_assert!(verify(inst, &o).map(|r| r.is_feasible()).unwrap_or(false));
    Ok(Decision {
        feasible: true,
        orientation: Some(o),
    })
}
