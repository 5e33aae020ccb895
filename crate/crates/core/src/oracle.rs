//! Brute-force ground truth.

use crate::error::Error;
use crate::graph::{check_orientation, conflict_violated, ConflictKind, EdgeId, Instance, Orientation};
use crate::hardness::SatInstance;

pub const DEFAULT_MAX_EDGES: usize = 20;
pub const MAX_SAT_VARIABLES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// Some conflict-free orientation satisfies every parity.
    pub feasible: bool,
    /// Over conflict-free orientations; 0 when there are none.
    pub best_satisfied_parities: usize,
    /// Fewest vertices of odd indegree over conflict-free orientations.
    pub min_odd_vertices: Option<usize>,
    /// First feasible orientation in enumeration order.
    pub witness: Option<Orientation>,
}

/// Tries all 2^|E| orientations. Bit i of the counter set means edge i points
/// to its larger endpoint. Forced edges are skipped.
pub fn enumerate_best(inst: &Instance, max_edges: usize) -> Result<OracleResult, Error> {
    let m = inst.edge_count();
    if m > max_edges {
        return Err(Error::TooLarge {
            edges: m,
            limit: max_edges,
        });
    }
    check_forced(inst)?;
    let g = &inst.graph;
    let n = g.vertex_count;
    let free: Vec<EdgeId> = (0..m).filter(|e| !inst.forced.contains_key(e)).collect();
    let mut head: Vec<usize> = (0..m)
        .map(|e| inst.forced.get(&e).copied().unwrap_or_else(|| g.edges[e].0.min(g.edges[e].1)))
        .collect();
    let mut res = OracleResult {
        feasible: false,
        best_satisfied_parities: 0,
        min_odd_vertices: None,
        witness: None,
    };
    let mut indeg = vec![0usize; n];
    let mut incoming = vec![Vec::new(); n];
    for mask in 0u64..(1u64 << free.len()) {
        for (i, &e) in free.iter().enumerate() {
            let (a, b) = g.edges[e];
            head[e] = if mask >> i & 1 == 1 { a.max(b) } else { a.min(b) };
        }
        indeg.iter_mut().for_each(|d| *d = 0);
        incoming.iter_mut().for_each(|l: &mut Vec<EdgeId>| l.clear());
        for (e, &h) in head.iter().enumerate() {
            indeg[h] += 1;
            incoming[h].push(e);
        }
        if inst
            .conflicts
            .iter()
            .any(|c| conflict_violated(c, &incoming[c.vertex]))
        {
            continue;
        }
        let satisfied = inst
            .parity
            .iter()
            .filter(|(&v, &p)| indeg[v] % 2 == p as usize)
            .count();
        let odd = indeg.iter().filter(|&&d| d % 2 == 1).count();
        res.best_satisfied_parities = res.best_satisfied_parities.max(satisfied);
        res.min_odd_vertices = Some(res.min_odd_vertices.map_or(odd, |x| x.min(odd)));
        if satisfied == inst.parity.len() && res.witness.is_none() {
            res.feasible = true;
            res.witness = Some(Orientation::new(head.clone()));
        }
    }
    Ok(res)
}

fn check_forced(inst: &Instance) -> Result<(), Error> {
    for (&e, &h) in &inst.forced {
        if e >= inst.edge_count() || !inst.graph.is_incident(e, h) {
            return Err(Error::Orientation(format!("forced edge {e} has invalid head {h}")));
        }
    }
    Ok(())
}

/// Order in which edges are decided: vertices in BFS order, each contributing
/// its not yet listed edges. Keeps vertices short-lived on the frontier.
fn edge_order(inst: &Instance) -> Vec<EdgeId> {
    let g = &inst.graph;
    let inc = g.incidence();
    let mut seen_v = vec![false; g.vertex_count];
    let mut seen_e = vec![false; g.edge_count()];
    let mut order = Vec::with_capacity(g.edge_count());
    for s in 0..g.vertex_count {
        if seen_v[s] {
            continue;
        }
        seen_v[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &inc[v] {
                if !seen_e[e] {
                    seen_e[e] = true;
                    order.push(e);
                }
                let w = g.other(e, v);
                if !seen_v[w] {
                    seen_v[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

/// Calls `visit` on every feasible orientation (parities, conflicts, forced
/// edges), in a fixed order, until it returns false. Returns the number of
/// orientations visited. Backtracking, so it copes with a few dozen edges on
/// sparse graphs.
pub fn for_each_feasible<F>(inst: &Instance, mut visit: F) -> Result<usize, Error>
where
    F: FnMut(&Orientation) -> bool,
{
    check_forced(inst)?;
    let g = &inst.graph;
    let n = g.vertex_count;
    let order = edge_order(inst);
    let inc = g.incidence();
    // Position after which a vertex is fully decided.
    let mut done_at: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    {
        let mut rem = g.degrees();
        for (i, &e) in order.iter().enumerate() {
            let (a, b) = g.edges[e];
            rem[a] -= 1;
            if a != b {
                rem[b] -= 1;
            }
            for v in [a, b] {
                if rem[v] == 0 && !done_at[i].contains(&v) {
                    done_at[i].push(v);
                }
            }
        }
    }
    let mut conflicts_at = vec![Vec::new(); n];
    for (i, c) in inst.conflicts.iter().enumerate() {
        conflicts_at[c.vertex].push(i);
    }
    let mut st = Bt {
        inst,
        order: &order,
        done_at: &done_at,
        conflicts_at: &conflicts_at,
        inc: &inc,
        head: vec![usize::MAX; g.edge_count()],
        indeg: vec![0; n],
        visit: &mut visit,
        count: 0,
        stop: false,
    };
    // Isolated vertices never appear in done_at.
    for v in 0..n {
        if inc[v].is_empty() {
            if inst.parity.get(&v) == Some(&1) {
                return Ok(0);
            }
            if conflicts_at[v]
                .iter()
                .any(|&c| conflict_violated(&inst.conflicts[c], &[]))
            {
                return Ok(0);
            }
        }
    }
    st.go(0);
    Ok(st.count)
}

/// First feasible orientation found by the backtracking search.
pub fn search_feasible(inst: &Instance) -> Result<Option<Orientation>, Error> {
    let mut found = None;
    for_each_feasible(inst, |o| {
        found = Some(o.clone());
        false
    })?;
    Ok(found)
}

struct Bt<'a, F> {
    inst: &'a Instance,
    order: &'a [EdgeId],
    done_at: &'a [Vec<usize>],
    conflicts_at: &'a [Vec<usize>],
    inc: &'a [Vec<EdgeId>],
    head: Vec<usize>,
    indeg: Vec<usize>,
    visit: &'a mut F,
    count: usize,
    stop: bool,
}

impl<F: FnMut(&Orientation) -> bool> Bt<'_, F> {
    fn incoming(&self, v: usize) -> Vec<EdgeId> {
        let mut inc: Vec<EdgeId> = self.inc[v].iter().copied().filter(|&e| self.head[e] == v).collect();
        inc.sort_unstable();
        inc.dedup();
        inc
    }

    /// Subset conflicts can fail before their vertex is complete.
    fn subset_ok(&self, v: usize) -> bool {
        self.conflicts_at[v].iter().all(|&i| {
            let c = &self.inst.conflicts[i];
            c.kind != ConflictKind::Subset || !c.edges.iter().all(|&e| self.head[e] == v)
        })
    }

    fn complete_ok(&self, v: usize) -> bool {
        if let Some(&p) = self.inst.parity.get(&v) {
            if self.indeg[v] % 2 != p as usize {
                return false;
            }
        }
        if self.conflicts_at[v].is_empty() {
            return true;
        }
        let inc = self.incoming(v);
        self.conflicts_at[v]
            .iter()
            .all(|&i| !conflict_violated(&self.inst.conflicts[i], &inc))
    }

    fn go(&mut self, i: usize) {
        if self.stop {
            return;
        }
        if i == self.order.len() {
            self.count += 1;
            let o = Orientation::new(self.head.clone());
            debug_assert!(check_orientation(&self.inst.graph, &o).is_ok());
            if !(self.visit)(&o) {
                self.stop = true;
            }
            return;
        }
        let e = self.order[i];
        let (a, b) = self.inst.graph.edges[e];
        let choices: Vec<usize> = match self.inst.forced.get(&e) {
            Some(&h) => vec![h],
            None if a == b => vec![a],
            None => vec![a.min(b), a.max(b)],
        };
        for h in choices {
            self.head[e] = h;
            self.indeg[h] += 1;
            let ok = self.subset_ok(h) && self.done_at[i].iter().all(|&v| self.complete_ok(v));
            if ok {
                self.go(i + 1);
            }
            self.indeg[h] -= 1;
            self.head[e] = usize::MAX;
            if self.stop {
                return;
            }
        }
    }
}

/// Exactly-one-true-literal satisfiability by trying every assignment.
pub fn sat_oracle(f: &SatInstance) -> Result<bool, Error> {
    f.validate()?;
    if f.variable_count > MAX_SAT_VARIABLES {
        return Err(Error::Formula(format!(
            "{} variables exceeds the oracle limit of {MAX_SAT_VARIABLES}",
            f.variable_count
        )));
    }
    Ok(sat_assignment(f).is_some())
}

/// Smallest satisfying assignment in counter order (bit i = variable i true).
pub fn sat_assignment(f: &SatInstance) -> Option<Vec<bool>> {
    (0u64..(1u64 << f.variable_count))
        .map(|mask| (0..f.variable_count).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .find(|a| {
            f.clauses
                .iter()
                .all(|c| c.iter().filter(|l| a[l.var] != l.negated).count() == 1)
        })
}
