//! Even orientation with disjoint subset conflicts to disjoint exact pairs.
//!
//! For a subset conflict ({e_1..e_k}, v): each e_i moves from v to a fresh
//! vertex u_i; a center u_0 is joined to every u_i, to v, and to a fresh
//! pendant w, with the exact pair ({u_0v, u_0w}, u_0). For odd k a pendant v′
//! hangs at v.

use super::{EdgeRole, ReductionMap, VertexRole};
use crate::error::Error;
use crate::graph::{Conflict, ConflictKind, Instance, Multigraph};

pub fn eo_dsc_to_eo_2dec(inst: &Instance) -> Result<(Instance, ReductionMap), Error> {
    if let Some(i) = inst.conflicts.iter().position(|c| c.kind != ConflictKind::Subset) {
        return Err(Error::Precondition(format!("conflict {i} is not a subset conflict")));
    }
    if !inst.pairwise_disjoint() {
        return Err(Error::Precondition("conflicts are not pairwise disjoint".into()));
    }
    if let Some(v) = (0..inst.vertex_count()).find(|v| inst.parity.get(v) != Some(&0)) {
        return Err(Error::Precondition(format!("vertex {v} is not even-constrained")));
    }
    if !inst.forced.is_empty() {
        return Err(Error::Precondition("forced edges are not supported here".into()));
    }
    let mut map = ReductionMap::identity(inst);
    let mut count = inst.vertex_count();
    let mut endpoints = inst.graph.edges.clone();
    struct Gadget {
        vertex: usize,
        center: usize,
        slots: Vec<usize>,
        pendant: usize,
        odd: Option<usize>,
    }
    let mut gadgets = Vec::new();
    for (ci, c) in inst.conflicts.iter().enumerate() {
        let mut fresh = |role: VertexRole, origin: Option<usize>| {
            map.vertex_origin.push(origin);
            map.vertex_roles.push(role);
            count += 1;
            count - 1
        };
        let center = fresh(VertexRole::GadgetCenter(ci), None);
        let slots: Vec<_> = (0..c.size())
            .map(|index| fresh(VertexRole::GadgetSlot { conflict: ci, index }, Some(c.vertex)))
            .collect();
        let pendant = fresh(VertexRole::GadgetPendant(ci), None);
        let odd = (c.size() % 2 == 1).then(|| fresh(VertexRole::OddPendant(ci), None));
        for (i, &e) in c.edges.iter().enumerate() {
            let (a, b) = endpoints[e];
            endpoints[e] = if a == c.vertex { (slots[i], b) } else { (a, slots[i]) };
        }
        gadgets.push(Gadget {
            vertex: c.vertex,
            center,
            slots,
            pendant,
            odd,
        });
    }
    let mut g = Multigraph::new(count);
    for &(a, b) in &endpoints {
        g.add_edge(a, b);
    }
    let mut conflicts = Vec::new();
    for (ci, gd) in gadgets.iter().enumerate() {
        for (index, &s) in gd.slots.iter().enumerate() {
            g.add_edge(gd.center, s);
            map.edge_roles.push(EdgeRole::GadgetSpoke { conflict: ci, index });
        }
        let to_v = g.add_edge(gd.center, gd.vertex);
        map.edge_roles.push(EdgeRole::GadgetToVertex(ci));
        let to_w = g.add_edge(gd.center, gd.pendant);
        map.edge_roles.push(EdgeRole::GadgetToPendant(ci));
        if let Some(p) = gd.odd {
            g.add_edge(p, gd.vertex);
            map.edge_roles.push(EdgeRole::OddPendant(ci));
        }
        conflicts.push(Conflict::exact(gd.center, &[to_v, to_w]));
    }
    let parity = (0..g.vertex_count).map(|v| (v, 0)).collect();
    Ok((
        Instance {
            graph: g,
            parity,
            conflicts,
            forced: Default::default(),
        },
        map,
    ))
}
