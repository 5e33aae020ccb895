//! Instance generators from exactly-one-in-three satisfiability: caterpillar
//! variable gadgets with exact conflict pairs, and circuit variable gadgets
//! with subset conflict pairs.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::graph::{Conflict, EdgeId, Instance, Multigraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    /// Zero-based.
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Lit { var, negated: true }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var as i64 + 1;
        write!(f, "{}", if self.negated { -v } else { v })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatInstance {
    pub variable_count: usize,
    pub clauses: Vec<[Lit; 3]>,
}

impl SatInstance {
    pub fn new(variable_count: usize, clauses: Vec<[Lit; 3]>) -> Self {
        SatInstance {
            variable_count,
            clauses,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        for (j, c) in self.clauses.iter().enumerate() {
            for l in c {
                if l.var >= self.variable_count {
                    return Err(Error::Formula(format!(
                        "clause {}: variable {} out of range 1..={}",
                        j + 1,
                        l.var + 1,
                        self.variable_count
                    )));
                }
            }
            if c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var {
                return Err(Error::Formula(format!(
                    "clause {}: variables must be distinct",
                    j + 1
                )));
            }
        }
        Ok(())
    }

    /// DIMACS-style text: `p cnf <vars> <clauses>` then one clause of three
    /// nonzero literals per line, each terminated by 0. Lines starting with
    /// `c` are comments.
    pub fn parse_dimacs(text: &str) -> Result<Self, Error> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut pending: Vec<i64> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |msg: String| Error::Formula(format!("line {}: {msg}", no + 1));
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if line.starts_with('p') {
                let parts: Vec<_> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" || header.is_some() {
                    return Err(err("expected a single header `p cnf <vars> <clauses>`".into()));
                }
                let n = parts[2].parse().map_err(|_| err("bad variable count".into()))?;
                let m = parts[3].parse().map_err(|_| err("bad clause count".into()))?;
                header = Some((n, m));
                continue;
            }
            let Some((n, _)) = header else {
                return Err(err("clause before header".into()));
            };
            for tok in line.split_whitespace() {
                let x: i64 = tok.parse().map_err(|_| err(format!("bad literal `{tok}`")))?;
                if x != 0 {
                    if x.unsigned_abs() as usize > n {
                        return Err(err(format!("literal {x} exceeds variable count {n}")));
                    }
                    pending.push(x);
                    continue;
                }
                if pending.len() != 3 {
                    return Err(err(format!("clause has {} literals, expected 3", pending.len())));
                }
                let lit = |x: i64| Lit {
                    var: x.unsigned_abs() as usize - 1,
                    negated: x < 0,
                };
                clauses.push([lit(pending[0]), lit(pending[1]), lit(pending[2])]);
                pending.clear();
            }
        }
        let Some((n, m)) = header else {
            return Err(Error::Formula("missing `p cnf` header".into()));
        };
        if !pending.is_empty() {
            return Err(Error::Formula("last clause is not terminated by 0".into()));
        }
        if clauses.len() != m {
            return Err(Error::Formula(format!(
                "header declares {m} clauses, found {}",
                clauses.len()
            )));
        }
        let f = SatInstance::new(n, clauses);
        f.validate()?;
        Ok(f)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.variable_count, self.clauses.len());
        for c in &self.clauses {
            s += &format!("{} {} {} 0\n", c[0], c[1], c[2]);
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Label {
    Vertex(VertexId),
    Edge(EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardnessArtifact {
    pub instance: Instance,
    /// Names use one-based indices: `x[i,l]`, `z[i,l]`, `y[i,l]`, `ybar[i,l]`,
    /// `leg[i,l,t]`, `spine[i,l]`, `c[j]`, `a[j]`, `b[j]`, `v0`, `v0'`.
    pub labels: BTreeMap<String, Label>,
    /// The formula actually encoded (with any padding clauses appended).
    pub formula: SatInstance,
    /// Indices into `formula.clauses` of padding clauses.
    pub padding: Vec<usize>,
}

impl HardnessArtifact {
    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        match self.labels.get(name) {
            Some(Label::Vertex(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn edge(&self, name: &str) -> Option<EdgeId> {
        match self.labels.get(name) {
            Some(Label::Edge(e)) => Some(*e),
            _ => None,
        }
    }
}

struct Builder {
    g: Multigraph,
    labels: BTreeMap<String, Label>,
}

impl Builder {
    fn vertex(&mut self, name: String) -> VertexId {
        let v = self.g.add_vertex();
        self.labels.insert(name, Label::Vertex(v));
        v
    }

    fn edge(&mut self, name: String, u: VertexId, v: VertexId) -> EdgeId {
        let e = self.g.add_edge(u, v);
        self.labels.insert(name, Label::Edge(e));
        e
    }

    /// Adds v0′ when needed and returns the all-even instance.
    fn finish(mut self, v0: VertexId, conflicts: Vec<Conflict>) -> (Instance, BTreeMap<String, Label>) {
        if self.g.edge_count() % 2 == 1 {
            let p = self.vertex("v0'".into());
            self.edge("v0v0'".into(), v0, p);
        }
        let mut inst = Instance::all_even(self.g);
        inst.conflicts = conflicts;
        (inst, self.labels)
    }
}

/// Exact-conflict-pair construction. Needs at least one clause.
pub fn reduce_to_pco_2ec(f: &SatInstance) -> Result<HardnessArtifact, Error> {
    f.validate()?;
    let m = f.clauses.len();
    if m == 0 {
        return Err(Error::Formula("the construction needs at least one clause".into()));
    }
    let mut b = Builder {
        g: Multigraph::new(0),
        labels: BTreeMap::new(),
    };
    let mut conflicts = Vec::new();
    let n = f.variable_count;
    // spine[i][l] for l in 0..2m
    let spine: Vec<Vec<VertexId>> = (0..n)
        .map(|i| (0..2 * m).map(|l| b.vertex(format!("x[{},{}]", i + 1, l + 1))).collect())
        .collect();
    let clause_v: Vec<VertexId> = (0..m).map(|j| b.vertex(format!("c[{}]", j + 1))).collect();
    let a: Vec<VertexId> = (0..m).map(|j| b.vertex(format!("a[{}]", j + 1))).collect();
    let bb: Vec<VertexId> = (0..m).map(|j| b.vertex(format!("b[{}]", j + 1))).collect();
    let v0 = b.vertex("v0".into());

    // Which clause takes a leg from spine vertex (i, l).
    let mut target: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (j, c) in f.clauses.iter().enumerate() {
        for l in c {
            let idx = if l.negated { 2 * j + 1 } else { 2 * j };
            target.insert((l.var, idx), j);
        }
    }
    let mut at: Vec<Vec<EdgeId>> = vec![Vec::new(); b.g.vertex_count];
    for i in 0..n {
        for l in 0..2 * m - 1 {
            let e = b.edge(format!("spine[{},{}]", i + 1, l + 1), spine[i][l], spine[i][l + 1]);
            at[spine[i][l]].push(e);
            at[spine[i][l + 1]].push(e);
        }
        for l in 0..2 * m {
            let legs = if l == 0 || l == 2 * m - 1 { 3 } else { 2 };
            let mut clause = target.get(&(i, l)).copied();
            for t in 0..legs {
                let other = match clause.take() {
                    Some(j) => clause_v[j],
                    None => v0,
                };
                let e = b.edge(format!("leg[{},{},{}]", i + 1, l + 1, t + 1), spine[i][l], other);
                at[spine[i][l]].push(e);
            }
        }
    }
    for j in 0..m {
        let ea = b.edge(format!("a[{}]c[{}]", j + 1, j + 1), a[j], clause_v[j]);
        let eb = b.edge(format!("b[{}]c[{}]", j + 1, j + 1), bb[j], clause_v[j]);
        conflicts.push(Conflict::exact(clause_v[j], &[ea, eb]));
    }
    let mut spine_conflicts = Vec::new();
    for row in &spine {
        for &x in row {
            let es = &at[x];
            for p in 0..es.len() {
                for q in p + 1..es.len() {
                    spine_conflicts.push(Conflict::exact(x, &[es[p], es[q]]));
                }
            }
        }
    }
    spine_conflicts.extend(conflicts);
    let (instance, labels) = b.finish(v0, spine_conflicts);
    Ok(HardnessArtifact {
        instance,
        labels,
        formula: f.clone(),
        padding: Vec::new(),
    })
}

/// Appends clauses over fresh variables until there are at least three.
pub fn pad_formula(f: &SatInstance) -> (SatInstance, Vec<usize>) {
    let mut out = f.clone();
    let mut padding = Vec::new();
    while out.clauses.len() < 3 {
        let v = out.variable_count;
        out.variable_count += 3;
        padding.push(out.clauses.len());
        out.clauses.push([Lit::pos(v), Lit::pos(v + 1), Lit::pos(v + 2)]);
    }
    (out, padding)
}

/// Subset-conflict-pair construction. Formulas with fewer than three clauses
/// are padded first.
pub fn reduce_to_pco_2sc(f: &SatInstance) -> Result<HardnessArtifact, Error> {
    f.validate()?;
    let (f, padding) = pad_formula(f);
    let m = f.clauses.len();
    let n = f.variable_count;
    let mut b = Builder {
        g: Multigraph::new(0),
        labels: BTreeMap::new(),
    };
    let x: Vec<Vec<VertexId>> = (0..n)
        .map(|i| (0..m).map(|l| b.vertex(format!("x[{},{}]", i + 1, l + 1))).collect())
        .collect();
    let clause_v: Vec<VertexId> = (0..m).map(|j| b.vertex(format!("c[{}]", j + 1))).collect();
    let a: Vec<VertexId> = (0..m).map(|j| b.vertex(format!("a[{}]", j + 1))).collect();
    let v0 = b.vertex("v0".into());

    let mut pos_target = BTreeMap::new();
    let mut neg_target = BTreeMap::new();
    for (j, c) in f.clauses.iter().enumerate() {
        for l in c {
            if l.negated {
                neg_target.insert((l.var, j), j);
            } else {
                pos_target.insert((l.var, j), j);
            }
        }
    }
    let mut conflicts = Vec::new();
    let mut at_clause: Vec<Vec<EdgeId>> = vec![Vec::new(); m];
    for i in 0..n {
        let z: Vec<EdgeId> = (0..m)
            .map(|l| b.edge(format!("z[{},{}]", i + 1, l + 1), x[i][l], x[i][(l + 1) % m]))
            .collect();
        let mut y = Vec::new();
        let mut ybar = Vec::new();
        for l in 0..m {
            let to = pos_target.get(&(i, l)).map_or(v0, |&j| clause_v[j]);
            let e = b.edge(format!("y[{},{}]", i + 1, l + 1), x[i][l], to);
            if let Some(&j) = pos_target.get(&(i, l)) {
                at_clause[j].push(e);
            }
            y.push(e);
            let to = neg_target.get(&(i, l)).map_or(v0, |&j| clause_v[j]);
            let e = b.edge(format!("ybar[{},{}]", i + 1, l + 1), x[i][l], to);
            if let Some(&j) = neg_target.get(&(i, l)) {
                at_clause[j].push(e);
            }
            ybar.push(e);
        }
        for l in 0..m {
            let next = (l + 1) % m;
            conflicts.push(Conflict::subset(x[i][next], &[z[l], z[next]]));
            conflicts.push(Conflict::subset(x[i][next], &[z[l], y[next]]));
            conflicts.push(Conflict::subset(x[i][l], &[z[l], ybar[l]]));
        }
    }
    for j in 0..m {
        let es = &at_clause[j];
        for p in 0..es.len() {
            for q in p + 1..es.len() {
                conflicts.push(Conflict::subset(clause_v[j], &[es[p], es[q]]));
            }
        }
        b.edge(format!("a[{}]c[{}]", j + 1, j + 1), a[j], clause_v[j]);
    }
    let (instance, mut labels) = b.finish(v0, conflicts);
    for &j in &padding {
        labels.insert(format!("pad[{}]", j + 1), Label::Vertex(clause_v[j]));
    }
    Ok(HardnessArtifact {
        instance,
        labels,
        formula: f,
        padding,
    })
}

/// Every clause of three distinct variables over `n` variables.
pub fn all_clauses(n: usize) -> Vec<[Lit; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for signs in 0..8u8 {
                    out.push([
                        Lit { var: a, negated: signs & 1 != 0 },
                        Lit { var: b, negated: signs & 2 != 0 },
                        Lit { var: c, negated: signs & 4 != 0 },
                    ]);
                }
            }
        }
    }
    out
}
