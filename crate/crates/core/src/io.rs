//! JSON instance documents, orientation files and DOT export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{validate_instance, Conflict, ConflictKind, Instance, Multigraph, Orientation};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindDoc {
    Exact,
    Subset,
}

// Fields are declared in alphabetical order so serialized keys come out sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConflictDoc {
    edges: Vec<usize>,
    kind: KindDoc,
    vertex: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    #[serde(default)]
    conflicts: Vec<ConflictDoc>,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    forced: BTreeMap<usize, usize>,
    #[serde(default)]
    parity: BTreeMap<usize, u8>,
    version: u32,
    vertices: usize,
}

pub fn parse_instance(text: &str) -> Result<Instance, Error> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported version {}, expected {FORMAT_VERSION}",
            doc.version
        )));
    }
    let edges: Vec<(usize, usize)> = doc.edges.iter().map(|&[u, v]| (u, v)).collect();
    let inst = Instance {
        graph: Multigraph {
            vertex_count: doc.vertices,
            edges,
        },
        parity: doc.parity,
        conflicts: doc
            .conflicts
            .iter()
            .map(|c| {
                let kind = match c.kind {
                    KindDoc::Exact => ConflictKind::Exact,
                    KindDoc::Subset => ConflictKind::Subset,
                };
                Conflict::new(c.vertex, &c.edges, kind)
            })
            .collect(),
        forced: doc.forced,
    };
    let errs = validate_instance(&inst);
    if !errs.is_empty() {
        return Err(Error::Structural(errs));
    }
    Ok(inst)
}

pub fn serialize_instance(inst: &Instance) -> String {
    let doc = InstanceDoc {
        conflicts: inst
            .conflicts
            .iter()
            .map(|c| ConflictDoc {
                edges: c.edges.clone(),
                kind: match c.kind {
                    ConflictKind::Exact => KindDoc::Exact,
                    ConflictKind::Subset => KindDoc::Subset,
                },
                vertex: c.vertex,
            })
            .collect(),
        edges: inst.graph.edges.iter().map(|&(u, v)| [u, v]).collect(),
        forced: inst.forced.clone(),
        parity: inst.parity.clone(),
        version: FORMAT_VERSION,
        vertices: inst.graph.vertex_count,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("instance documents always serialize");
    s.push('\n');
    s
}

/// One head per line, in edge order.
pub fn serialize_orientation(o: &Orientation) -> String {
    o.head.iter().map(|h| format!("{h}\n")).collect()
}

pub fn parse_orientation(text: &str) -> Result<Orientation, Error> {
    let mut head = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let h = line
            .parse()
            .map_err(|_| Error::Parse(format!("orientation line {}: `{line}` is not a vertex id", no + 1)))?;
        head.push(h);
    }
    Ok(Orientation::new(head))
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz text. Directed when an orientation is given. Each edge is
/// labelled with its id and the conflicts it belongs to.
pub fn export_dot(inst: &Instance, o: Option<&Orientation>) -> String {
    let g = &inst.graph;
    let mut member: Vec<Vec<String>> = vec![Vec::new(); g.edge_count()];
    for (i, c) in inst.conflicts.iter().enumerate() {
        let tag = match c.kind {
            ConflictKind::Exact => format!("X{i}@{}", c.vertex),
            ConflictKind::Subset => format!("S{i}@{}", c.vertex),
        };
        for &e in &c.edges {
            if e < member.len() {
                member[e].push(tag.clone());
            }
        }
    }
    let (kw, arrow) = if o.is_some() { ("digraph", "->") } else { ("graph", "--") };
    let mut s = String::new();
    writeln!(s, "{kw} G {{").unwrap();
    for v in 0..g.vertex_count {
        let label = match inst.parity.get(&v) {
            Some(0) => format!("{v} even"),
            Some(_) => format!("{v} odd"),
            None => format!("{v}"),
        };
        writeln!(s, "  {v} [label=\"{}\"];", dot_escape(&label)).unwrap();
    }
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        let (tail, head) = match o {
            Some(o) if o.head.get(e) == Some(&a) => (b, a),
            _ => (a, b),
        };
        let mut label = format!("e{e}");
        if !member[e].is_empty() {
            label += &format!(" [{}]", member[e].join(","));
        }
        let mut attrs = format!("label=\"{}\"", dot_escape(&label));
        if inst.forced.contains_key(&e) {
            attrs += ", style=bold";
        }
        writeln!(s, "  {tail} {arrow} {head} [{attrs}];").unwrap();
    }
    s.push_str("}\n");
    s
}
