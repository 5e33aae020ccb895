//! Parity-constrained orientation to even orientation: a pendant at every odd
//! vertex, and a hub joined to every unconstrained vertex.

use super::{ConflictMode, EdgeRole, ReductionMap, VertexRole};
use crate::error::Error;
use crate::graph::{Conflict, ConflictKind, Instance};

pub fn pco_to_eo(inst: &Instance, mode: ConflictMode) -> Result<(Instance, ReductionMap), Error> {
    for (i, c) in inst.conflicts.iter().enumerate() {
        let ok = match mode {
            ConflictMode::None => false,
            ConflictMode::Exact => c.kind == ConflictKind::Exact,
            ConflictMode::Subset => c.kind == ConflictKind::Subset,
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "conflict {i} ({}) does not match the requested mode {mode:?}",
                c.kind
            )));
        }
    }
    let n = inst.vertex_count();
    let mut map = ReductionMap::identity(inst);
    let mut g = inst.graph.clone();

    let mut dummy_edge = vec![None; n];
    for v in 0..n {
        if inst.parity.get(&v) == Some(&1) {
            let d = g.add_vertex();
            map.vertex_origin.push(None);
            map.vertex_roles.push(VertexRole::Dummy(v));
            dummy_edge[v] = Some(g.add_edge(v, d));
            map.edge_roles.push(EdgeRole::Dummy(v));
        }
    }

    let free: Vec<_> = (0..n).filter(|v| !inst.parity.contains_key(v)).collect();
    let mut hub_edge = vec![None; n];
    if !free.is_empty() {
        let w = g.add_vertex();
        map.vertex_origin.push(None);
        map.vertex_roles.push(VertexRole::Hub);
        for &v in &free {
            hub_edge[v] = Some(g.add_edge(v, w));
            map.edge_roles.push(EdgeRole::Hub(v));
        }
        if g.edge_count() % 2 == 1 {
            let w2 = g.add_vertex();
            map.vertex_origin.push(None);
            map.vertex_roles.push(VertexRole::HubPendant);
            g.add_edge(w, w2);
            map.edge_roles.push(EdgeRole::HubPendant);
        }
    }

    let conflicts = inst
        .conflicts
        .iter()
        .map(|c| {
            if c.kind == ConflictKind::Exact && c.size() % 2 == 1 {
                let extra = dummy_edge[c.vertex].or(hub_edge[c.vertex]);
                if let Some(x) = extra {
                    let mut edges = c.edges.clone();
                    edges.push(x);
                    return Conflict::new(c.vertex, &edges, c.kind);
                }
            }
            c.clone()
        })
        .collect();

    let parity = (0..g.vertex_count).map(|v| (v, 0)).collect();
    Ok((
        Instance {
            graph: g,
            parity,
            conflicts,
            forced: inst.forced.clone(),
        },
        map,
    ))
}
