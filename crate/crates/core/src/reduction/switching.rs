//! Switching networks N_k built from copies of the two-input gadget N_2.
//!
//! N_2: vertices u, w joined by parallel edges c1, c2; inputs a1, a2 enter at
//! u, outputs b1, b2 leave at w. Exact conflict pairs {a1,a2} and {c1,c2} at
//! u, {c1,c2} and {b1,b2} at w. Both vertices even.

use crate::error::Error;
use crate::graph::{Conflict, EdgeId, Instance, Multigraph, VertexId};

/// An edge end as seen from the network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Port {
    Input(usize),
    Internal(usize),
    Output(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchingNetwork {
    pub k: usize,
    /// Internal vertices are `0..vertex_count`; copy i owns 2i (u) and 2i+1 (w).
    pub vertex_count: usize,
    pub internal_edges: Vec<(VertexId, VertexId)>,
    /// Vertex where input i enters.
    pub inputs: Vec<VertexId>,
    /// Vertex where output j leaves.
    pub outputs: Vec<VertexId>,
    pub conflicts: Vec<(VertexId, [Port; 2])>,
    /// Copy indices per stage.
    pub stages: Vec<Vec<usize>>,
}

impl SwitchingNetwork {
    pub fn copies(&self) -> usize {
        self.vertex_count / 2
    }

    /// Vertices that are not leaves once inputs and outputs are attached.
    pub fn nonleaf_count(&self) -> usize {
        self.vertex_count
    }
}

pub fn build_switching_network(k: usize) -> Result<SwitchingNetwork, Error> {
    if k < 2 {
        return Err(Error::Precondition(format!(
            "a switching network needs at least 2 inputs, got {k}"
        )));
    }
    let mut net = SwitchingNetwork {
        k,
        vertex_count: 0,
        internal_edges: Vec::new(),
        inputs: vec![usize::MAX; k],
        outputs: vec![usize::MAX; k],
        conflicts: Vec::new(),
        stages: Vec::new(),
    };
    let mut live: Vec<Port> = (0..k).map(Port::Input).collect();
    let mut next_export = 2;
    while live.len() >= 2 {
        let last = live.len() == 2;
        let mut next = Vec::new();
        let mut stage = Vec::new();
        for chunk in live.chunks(2) {
            if chunk.len() == 1 {
                next.push(chunk[0]);
                continue;
            }
            let copy = net.vertex_count / 2;
            stage.push(copy);
            let u = net.vertex_count;
            let w = u + 1;
            net.vertex_count += 2;
            for &p in chunk {
                match p {
                    Port::Input(i) => net.inputs[i] = u,
                    Port::Internal(j) => net.internal_edges[j].1 = u,
                    Port::Output(_) => unreachable!(),
                }
            }
            let c1 = net.internal_edges.len();
            net.internal_edges.push((u, w));
            net.internal_edges.push((u, w));
            let (c1, c2) = (Port::Internal(c1), Port::Internal(c1 + 1));
            let (o1, o2) = if last {
                net.outputs[0] = w;
                net.outputs[1] = w;
                (Port::Output(0), Port::Output(1))
            } else {
                let f = net.internal_edges.len();
                net.internal_edges.push((w, usize::MAX));
                let x = next_export;
                next_export += 1;
                net.outputs[x] = w;
                next.push(Port::Internal(f));
                (Port::Internal(f), Port::Output(x))
            };
            net.conflicts.push((u, [chunk[0], chunk[1]]));
            net.conflicts.push((u, [c1, c2]));
            net.conflicts.push((w, [c1, c2]));
            net.conflicts.push((w, [o1, o2]));
        }
        net.stages.push(stage);
        live = next;
    }
    Ok(net)
}

/// A network placed inside a host instance: edge ids of its ports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placed {
    pub vertices: Vec<VertexId>,
    pub internal: Vec<EdgeId>,
    pub outputs: Vec<EdgeId>,
}

/// Add the network's internal vertices and edges to `g`. Input i's network
/// end is `placed.vertices[net.inputs[i]]`; output j runs from
/// `net.outputs[j]` to `sinks[j]`. Conflicts are returned with input ports
/// resolved through `input_edges`.
pub fn place(
    net: &SwitchingNetwork,
    g: &mut Multigraph,
    input_edges: &[EdgeId],
    sinks: &[VertexId],
    first_vertex: VertexId,
) -> (Placed, Vec<Conflict>) {
    let vertices: Vec<VertexId> = (0..net.vertex_count).map(|i| first_vertex + i).collect();
    let internal: Vec<EdgeId> = net
        .internal_edges
        .iter()
        .map(|&(a, b)| g.add_edge(vertices[a], vertices[b]))
        .collect();
    let outputs: Vec<EdgeId> = (0..net.k)
        .map(|j| g.add_edge(vertices[net.outputs[j]], sinks[j]))
        .collect();
    let resolve = |p: Port| match p {
        Port::Input(i) => input_edges[i],
        Port::Internal(j) => internal[j],
        Port::Output(j) => outputs[j],
    };
    let conflicts = net
        .conflicts
        .iter()
        .map(|&(v, [a, b])| Conflict::exact(vertices[v], &[resolve(a), resolve(b)]))
        .collect();
    (
        Placed {
            vertices,
            internal,
            outputs,
        },
        conflicts,
    )
}

/// Stand-alone instance: input i comes from leaf source i, output j goes to
/// leaf sink j. Network vertices are even, leaves unconstrained. Returns the
/// instance with input and output edge ids; an input is "right" when it
/// enters the network, an output when it enters its sink.
pub fn standalone(net: &SwitchingNetwork) -> (Instance, Vec<EdgeId>, Vec<EdgeId>) {
    let k = net.k;
    let total = net.vertex_count + 2 * k;
    let mut g = Multigraph::new(total);
    let sources: Vec<VertexId> = (0..k).map(|i| net.vertex_count + i).collect();
    let sinks: Vec<VertexId> = (0..k).map(|j| net.vertex_count + k + j).collect();
    let inputs: Vec<EdgeId> = (0..k).map(|i| g.add_edge(sources[i], net.inputs[i])).collect();
    let (placed, conflicts) = place(net, &mut g, &inputs, &sinks, 0);
    let mut inst = Instance::new(g);
    for v in 0..net.vertex_count {
        inst.parity.insert(v, 0);
    }
    inst.conflicts = conflicts;
    (inst, inputs, placed.outputs)
}
