//! Disjoint exact conflicts to even orientation with disjoint exact pairs.
//!
//! Each vertex v keeps its id (as v1′) and gets a path v1′v2′ (odd or free v)
//! or v1′v2′v3′ (even v). Free vertices join a common hub through v2′. Pair
//! conflicts stay at v1′. A conflict of size k ≥ 3 is fed through a switching
//! network N_k whose first two outputs form a conflict pair at v1′ and whose
//! other outputs end at v2′.

use super::switching::{build_switching_network, place};
use super::{EdgeRole, ReductionMap, VertexRole};
use crate::error::Error;
use crate::graph::{Conflict, ConflictKind, Instance, Multigraph};

pub fn pco_dec_to_eo_2dec(inst: &Instance) -> Result<(Instance, ReductionMap), Error> {
    if let Some(i) = inst.conflicts.iter().position(|c| c.kind != ConflictKind::Exact) {
        return Err(Error::Precondition(format!("conflict {i} is not exact")));
    }
    if let Some(i) = inst.conflicts.iter().position(|c| c.size() < 2) {
        return Err(Error::Unsupported(format!(
            "conflict {i} has a single edge; the reduction needs size at least 2"
        )));
    }
    if !inst.pairwise_disjoint() {
        return Err(Error::Precondition("conflicts are not pairwise disjoint".into()));
    }
    if !inst.forced.is_empty() {
        return Err(Error::Precondition("forced edges are not supported here".into()));
    }
    let n = inst.vertex_count();
    let m = inst.edge_count();
    let mut map = ReductionMap::identity(inst);

    // Vertices: originals, then path vertices, hub, networks.
    let mut count = n;
    let mut second = vec![0; n];
    let mut third = vec![None; n];
    for v in 0..n {
        second[v] = count;
        count += 1;
        map.vertex_origin.push(None);
        map.vertex_roles.push(VertexRole::PathSecond(v));
        if inst.parity.get(&v) == Some(&0) {
            third[v] = Some(count);
            count += 1;
            map.vertex_origin.push(None);
            map.vertex_roles.push(VertexRole::PathThird(v));
        }
    }
    let free: Vec<_> = (0..n).filter(|v| !inst.parity.contains_key(v)).collect();
    let hub = if free.is_empty() {
        None
    } else {
        count += 1;
        map.vertex_origin.push(None);
        map.vertex_roles.push(VertexRole::Hub);
        Some(count - 1)
    };
    let mut networks = Vec::new();
    let mut endpoints = inst.graph.edges.clone();
    for (ci, c) in inst.conflicts.iter().enumerate() {
        if c.size() < 3 {
            continue;
        }
        let net = build_switching_network(c.size())?;
        let first = count;
        for copy in 0..net.copies() {
            for side in 0..2 {
                map.vertex_origin.push(Some(c.vertex));
                map.vertex_roles.push(VertexRole::Network {
                    conflict: ci,
                    copy,
                    side,
                });
            }
        }
        count += net.vertex_count;
        for (i, &e) in c.edges.iter().enumerate() {
            let (a, b) = endpoints[e];
            let attach = first + net.inputs[i];
            endpoints[e] = if a == c.vertex { (attach, b) } else { (a, attach) };
        }
        networks.push((ci, net, first));
    }

    let mut g = Multigraph::new(count);
    for &(a, b) in &endpoints {
        g.add_edge(a, b);
    }
    for v in 0..n {
        g.add_edge(v, second[v]);
        map.edge_roles.push(EdgeRole::Path { vertex: v, index: 0 });
        if let Some(t) = third[v] {
            g.add_edge(second[v], t);
            map.edge_roles.push(EdgeRole::Path { vertex: v, index: 1 });
        }
    }
    if let Some(h) = hub {
        for &v in &free {
            g.add_edge(second[v], h);
            map.edge_roles.push(EdgeRole::Hub(v));
        }
    }
    let mut conflicts: Vec<Conflict> = inst
        .conflicts
        .iter()
        .filter(|c| c.size() == 2)
        .cloned()
        .collect();
    for (ci, net, first) in &networks {
        let c = &inst.conflicts[*ci];
        let v = c.vertex;
        let sinks: Vec<_> = (0..net.k).map(|j| if j < 2 { v } else { second[v] }).collect();
        let before = g.edge_count();
        let (placed, inner) = place(net, &mut g, &c.edges, &sinks, *first);
        for index in 0..placed.internal.len() {
            map.edge_roles.push(EdgeRole::NetworkInternal { conflict: *ci, index });
        }
        for index in 0..placed.outputs.len() {
            map.edge_roles.push(EdgeRole::NetworkOutput { conflict: *ci, index });
        }
        debug_assert_eq!(g.edge_count() - before, placed.internal.len() + placed.outputs.len());
        conflicts.extend(inner);
        conflicts.push(Conflict::exact(v, &[placed.outputs[0], placed.outputs[1]]));
    }
    // Keep the hub side of the graph at an even edge count.
    if let Some(h) = hub {
        if g.edge_count() % 2 == 1 {
            let p = g.add_vertex();
            map.vertex_origin.push(None);
            map.vertex_roles.push(VertexRole::HubPendant);
            g.add_edge(h, p);
            map.edge_roles.push(EdgeRole::HubPendant);
        }
    }
    debug_assert_eq!(map.edge_roles.len(), g.edge_count());
    debug_assert!(m <= g.edge_count());
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
