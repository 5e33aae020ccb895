//! Branching solvers for arbitrary (overlapping) exact and subset conflicts.
//!
//! Every conflict at v is resolved by forcing edges: some member away from v,
//! or (exact conflicts only) every member into v plus one more incident edge
//! into v. Each leaf is a conflict-free instance for the base solver.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::graph::{verify, ConflictKind, EdgeId, Instance, VertexId};
use crate::pco::{solve_pco, PcoResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchChoice {
    AwayEdge(EdgeId),
    AllInPlusExtra(EdgeId),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FptStats {
    /// Leaves handed to the base solver.
    pub leaves: usize,
    /// Partial assignments dropped for contradictory forcing, or because the
    /// forcing alone already rules out every parity-feasible orientation.
    pub pruned: usize,
    /// Upper bound on leaves: product over conflicts of their option counts.
    pub bound: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FptResult {
    pub result: PcoResult,
    pub choices: Option<Vec<BranchChoice>>,
    pub stats: FptStats,
}

pub fn solve_pco_sc_fpt(inst: &Instance) -> Result<FptResult, Error> {
    if let Some(i) = inst.conflicts.iter().position(|c| c.kind != ConflictKind::Subset) {
        return Err(Error::Precondition(format!("conflict {i} is not a subset conflict")));
    }
    solve_fpt(inst)
}

pub fn solve_pco_ec_fpt(inst: &Instance) -> Result<FptResult, Error> {
    if let Some(i) = inst.conflicts.iter().position(|c| c.kind != ConflictKind::Exact) {
        return Err(Error::Precondition(format!("conflict {i} is not exact")));
    }
    solve_fpt(inst)
}

/// Options per conflict in exploration order.
pub fn branch_options(inst: &Instance) -> Vec<Vec<BranchChoice>> {
    let inc = inst.graph.incidence();
    inst.conflicts
        .iter()
        .map(|c| {
            let mut opts: Vec<_> = c.edges.iter().map(|&e| BranchChoice::AwayEdge(e)).collect();
            if c.kind == ConflictKind::Exact {
                opts.extend(
                    inc[c.vertex]
                        .iter()
                        .filter(|e| c.edges.binary_search(e).is_err())
                        .map(|&e| BranchChoice::AllInPlusExtra(e)),
                );
            }
            opts
        })
        .collect()
}

/// Mixed exact and subset conflicts.
pub fn solve_fpt(inst: &Instance) -> Result<FptResult, Error> {
    let options = branch_options(inst);
    let bound = options
        .iter()
        .fold(1u128, |acc, o| acc.saturating_mul(o.len() as u128));
    let mut search = Search {
        inst,
        options: &options,
        forced: inst.forced.clone(),
        chosen: Vec::new(),
        stats: FptStats {
            bound,
            ..Default::default()
        },
    };
    let found = search.descend(0)?;
    let stats = search.stats;
    let fallback = || -> Result<PcoResult, Error> {
        let mut bare = inst.clone();
        bare.conflicts.clear();
        let mut r = solve_pco(&bare)?;
        r.status = crate::pco::PcoStatus::Infeasible;
        Ok(r)
    };
    Ok(match found {
        Some((result, choices)) => FptResult {
            result,
            choices: Some(choices),
            stats,
        },
        None => FptResult {
            result: fallback()?,
            choices: None,
            stats,
        },
    })
}

struct Search<'a> {
    inst: &'a Instance,
    options: &'a [Vec<BranchChoice>],
    forced: BTreeMap<EdgeId, VertexId>,
    chosen: Vec<BranchChoice>,
    stats: FptStats,
}

impl Search<'_> {
    fn force(&mut self, e: EdgeId, h: VertexId, undo: &mut Vec<EdgeId>) -> bool {
        match self.forced.get(&e) {
            Some(&x) => x == h,
            None => {
                self.forced.insert(e, h);
                undo.push(e);
                true
            }
        }
    }

    fn relaxed(&self) -> Result<PcoResult, Error> {
        let leaf = Instance {
            graph: self.inst.graph.clone(),
            parity: self.inst.parity.clone(),
            conflicts: Vec::new(),
            forced: self.forced.clone(),
        };
        solve_pco(&leaf)
    }

    fn descend(&mut self, i: usize) -> Result<Option<(PcoResult, Vec<BranchChoice>)>, Error> {
        if i == self.options.len() {
            self.stats.leaves += 1;
            let r = self.relaxed()?;
            if let Some(o) = r.feasible_orientation() {
                debug_assert!(verify(self.inst, o)?.is_feasible());
                return Ok(Some((r, self.chosen.clone())));
            }
            return Ok(None);
        }
        let c = &self.inst.conflicts[i];
        let g = &self.inst.graph;
        for choice in &self.options[i] {
            let mut undo = Vec::new();
            let ok = match *choice {
                BranchChoice::AwayEdge(e) => self.force(e, g.other(e, c.vertex), &mut undo),
                BranchChoice::AllInPlusExtra(x) => {
                    c.edges.iter().all(|&e| self.force(e, c.vertex, &mut undo))
                        && self.force(x, c.vertex, &mut undo)
                }
            };
            // Forcing only grows below this node, so an infeasible relaxation
            // here is infeasible at every leaf.
            let ok = ok && (i + 1 == self.options.len() || self.relaxed()?.is_feasible());
            if ok {
                self.chosen.push(choice.clone());
                let found = self.descend(i + 1)?;
                self.chosen.pop();
                if found.is_some() {
                    return Ok(found);
                }
            } else {
                self.stats.pruned += 1;
            }
            for e in undo {
                self.forced.remove(&e);
            }
        }
        Ok(None)
    }
}
