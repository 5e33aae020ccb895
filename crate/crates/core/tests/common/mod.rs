//! Shared generators and cross-checks for the integration tests and the
//! acceptance runner.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use parorient::eo2dec::{build_lprime, solve_eo_2dec, solve_pco_2dec};
use parorient::fpt::{solve_pco_ec_fpt, solve_pco_sc_fpt};
use parorient::hardness::{all_clauses, reduce_to_pco_2ec, reduce_to_pco_2sc, Lit, SatInstance};
use parorient::io::serialize_instance;
use parorient::matching::{max_matching, SimpleGraph};
use parorient::oracle::{enumerate_best, for_each_feasible, sat_oracle, search_feasible, DEFAULT_MAX_EDGES};
use parorient::pco::{solve_pco, solve_pco_max};
use parorient::reduction::switching::standalone;
use parorient::reduction::{
    build_switching_network, pco_dec_to_eo_2dec, pco_to_eo, pull_back, solve_pco_dec, solve_pco_dsc,
    eo_dsc_to_eo_2dec, ConflictMode, ReductionMap,
};
use parorient::{normalize, verify, Conflict, ConflictKind, Instance, Multigraph, Orientation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Default)]
pub struct Tally {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }

    pub fn assert_ok(&self, name: &str) {
        assert!(
            self.ok(),
            "{name}: {} of {} checks failed; first: {:?}",
            self.failures.len(),
            self.cases,
            &self.failures[..self.failures.len().min(5)]
        );
    }
}

pub fn random_graph(r: &mut ChaCha8Rng, max_vertices: usize, max_edges: usize) -> Multigraph {
    let n = r.gen_range(2..=max_vertices);
    let m = r.gen_range(0..=max_edges);
    let mut g = Multigraph::new(n);
    for _ in 0..m {
        let u = r.gen_range(0..n);
        let mut v = r.gen_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        g.add_edge(u, v);
    }
    g
}

/// Each vertex even, odd or free with equal odds.
pub fn random_parity(r: &mut ChaCha8Rng, inst: Instance) -> Instance {
    let mut inst = inst;
    for v in 0..inst.vertex_count() {
        match r.gen_range(0..3) {
            0 => {}
            p => {
                inst.parity.insert(v, (p - 1) as u8);
            }
        }
    }
    inst
}

/// A conflict at a random vertex with a size in `sizes`; None when no vertex
/// has enough edges left. With `disjoint`, avoids edges already used by a
/// conflict at the same vertex.
pub fn random_conflict(
    r: &mut ChaCha8Rng,
    inst: &Instance,
    kind: ConflictKind,
    sizes: std::ops::RangeInclusive<usize>,
    disjoint: bool,
) -> Option<Conflict> {
    let inc = inst.graph.incidence();
    let mut candidates = Vec::new();
    for v in 0..inst.vertex_count() {
        let used: BTreeSet<usize> = if disjoint {
            inst.conflicts
                .iter()
                .filter(|c| c.vertex == v)
                .flat_map(|c| c.edges.iter().copied())
                .collect()
        } else {
            BTreeSet::new()
        };
        let free: Vec<usize> = inc[v].iter().copied().filter(|e| !used.contains(e)).collect();
        if free.len() >= *sizes.start() {
            candidates.push((v, free));
        }
    }
    let (v, mut free) = candidates.choose(r)?.clone();
    let k = r.gen_range(*sizes.start()..=(*sizes.end()).min(free.len()));
    free.shuffle(r);
    Some(Conflict::new(v, &free[..k], kind))
}

pub fn oracle_feasible(inst: &Instance) -> bool {
    if inst.edge_count() <= DEFAULT_MAX_EDGES {
        enumerate_best(inst, DEFAULT_MAX_EDGES).unwrap().feasible
    } else {
        search_feasible(inst).unwrap().is_some()
    }
}

// ---------------------------------------------------------------- base PCO

pub fn check_base_pco(count: usize, seed: u64) -> Tally {
    let mut r = rng(seed);
    let mut t = Tally::default();
    for i in 0..count {
        let g = random_graph(&mut r, 7, 12);
        let mut inst = random_parity(&mut r, Instance::new(g));
        if i % 2 == 1 {
            for e in 0..inst.edge_count() {
                if r.gen_bool(0.25) {
                    let (a, b) = inst.graph.edges[e];
                    inst.forced.insert(e, if r.gen_bool(0.5) { a } else { b });
                }
            }
        }
        let o = enumerate_best(&inst, DEFAULT_MAX_EDGES).unwrap();
        let dec = solve_pco(&inst).unwrap();
        let max = solve_pco_max(&inst).unwrap();
        t.check(dec.is_feasible() == o.feasible, || format!("decision differs on {inst:?}"));
        if let Some(w) = dec.feasible_orientation() {
            t.check(verify(&inst, w).unwrap().is_feasible(), || format!("bad witness on {inst:?}"));
        }
        t.check(max.satisfied_count == o.best_satisfied_parities, || {
            format!(
                "max {} vs oracle {} on {inst:?}",
                max.satisfied_count, o.best_satisfied_parities
            )
        });
        let rep = verify(&inst, &max.orientation).unwrap();
        t.check(
            rep.forced_violations.is_empty()
                && inst.parity.len() - rep.parity_violations.len() == max.satisfied_count,
            || format!("max orientation inconsistent on {inst:?}"),
        );
    }
    t
}

// ------------------------------------------------------------------ EO-2DEC

pub fn random_eo2dec(r: &mut ChaCha8Rng, max_edges: usize) -> Instance {
    let g = random_graph(r, 6, max_edges);
    let mut inst = Instance::all_even(g);
    let pairs = r.gen_range(0..=4);
    for _ in 0..pairs {
        if let Some(c) = random_conflict(r, &inst, ConflictKind::Exact, 2..=2, true) {
            inst.conflicts.push(c);
        }
    }
    inst
}

/// Maximum matching size by exhaustive search.
pub fn brute_matching(n: usize, links: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in links {
        adj[a].push(b);
        adj[b].push(a);
    }
    fn go(v: usize, used: &mut Vec<bool>, adj: &[Vec<usize>]) -> usize {
        let n = used.len();
        let mut v = v;
        while v < n && used[v] {
            v += 1;
        }
        if v == n {
            return 0;
        }
        used[v] = true;
        let mut best = go(v + 1, used, adj);
        for &w in &adj[v] {
            if !used[w] {
                used[w] = true;
                best = best.max(1 + go(v + 1, used, adj));
                used[w] = false;
            }
        }
        used[v] = false;
        best
    }
    go(0, &mut vec![false; n], &adj)
}

pub fn check_eo2dec(count: usize, seed: u64) -> Tally {
    let mut r = rng(seed);
    let mut t = Tally::default();
    for _ in 0..count {
        let inst = random_eo2dec(&mut r, 12);
        let res = solve_eo_2dec(&inst).unwrap();
        let o = enumerate_best(&inst, DEFAULT_MAX_EDGES).unwrap();
        let lp = build_lprime(&inst).unwrap();
        let links: Vec<_> = lp.links.iter().map(|l| (l.a, l.b)).collect();
        let exposed = inst.edge_count() - 2 * brute_matching(inst.edge_count(), &links);
        t.check(Some(res.t) == o.min_odd_vertices && res.t == exposed, || {
            format!("t {} oracle {:?} exposed {exposed} on {inst:?}", res.t, o.min_odd_vertices)
        });
        let rep = verify(&inst, &res.orientation).unwrap();
        t.check(
            rep.is_conflict_free() && rep.parity_violations.len() == res.t,
            || format!("orientation does not realise t on {inst:?}"),
        );
    }
    t
}

/// The optimization variant against the oracle on random parity maps.
pub fn check_pco_2dec(count: usize, seed: u64) -> Tally {
    let mut r = rng(seed);
    let mut t = Tally::default();
    for _ in 0..count {
        let base = random_eo2dec(&mut r, 12);
        let mut inst = random_parity(&mut r, Instance::new(base.graph.clone()));
        inst.conflicts = base.conflicts;
        let res = solve_pco_2dec(&inst).unwrap();
        let o = enumerate_best(&inst, DEFAULT_MAX_EDGES).unwrap();
        t.check(
            res.feasible == o.feasible && res.satisfied == o.best_satisfied_parities,
            || format!("2dec {}/{} oracle {}/{} on {inst:?}", res.feasible, res.satisfied, o.feasible, o.best_satisfied_parities),
        );
        t.check(verify(&inst, &res.orientation).unwrap().is_conflict_free(), || {
            format!("2dec orientation has conflicts on {inst:?}")
        });
    }
    t
}

// --------------------------------------------------------- switching networks

pub fn check_switching() -> Tally {
    let mut t = Tally::default();
    for k in 2..=6 {
        let net = build_switching_network(k).unwrap();
        let (base, inputs, outputs) = standalone(&net);
        let g = &base.graph;
        // Input i is "right" when it enters the network; output j when it
        // enters its sink.
        let input_right = |o: &Orientation, i: usize| o.head[inputs[i]] == net.inputs[i];
        let output_right = |o: &Orientation, j: usize| o.head[outputs[j]] != net.outputs[j];
        for pattern in 0u32..(1 << k) {
            let mut inst = base.clone();
            for (i, &e) in inputs.iter().enumerate() {
                let (a, b) = g.edges[e];
                let source = if a == net.inputs[i] { b } else { a };
                let head = if pattern >> i & 1 == 1 { net.inputs[i] } else { source };
                inst.forced.insert(e, head);
            }
            let ell = pattern.count_ones() as usize;
            let mut valid = 0;
            let mut p1 = true;
            let mut p2 = false;
            for_each_feasible(&inst, |o| {
                valid += 1;
                debug_assert_eq!((0..k).filter(|&i| input_right(o, i)).count(), ell);
                let right = (0..k).filter(|&j| output_right(o, j)).count();
                p1 &= right == ell;
                p2 |= output_right(o, 0) && !output_right(o, 1);
                true
            })
            .unwrap();
            t.check(valid > 0, || format!("N_{k}: input pattern {pattern:b} has no valid orientation"));
            t.check(p1, || format!("N_{k}: P1 fails for pattern {pattern:b}"));
            if ell != 0 && ell != k {
                t.check(p2, || format!("N_{k}: P2 fails for pattern {pattern:b}"));
            }
        }
    }
    let n8 = build_switching_network(8).unwrap();
    t.check(n8.copies() == 7, || format!("N_8 has {} copies", n8.copies()));
    for k in 2..=64 {
        let n = build_switching_network(k).unwrap();
        t.check(n.nonleaf_count() <= 6 * k, || format!("N_{k} has {} nonleaf vertices", n.nonleaf_count()));
    }
    t
}

// ---------------------------------------------------------------- reductions

/// Every multigraph on 4 labelled vertices with at most 6 edges, as a sorted
/// edge multiset.
pub fn small_graphs() -> Vec<Multigraph> {
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    fn rec(pairs: &[(usize, usize)], from: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Multigraph>) {
        out.push(Multigraph::from_edges(4, cur));
        if cur.len() == 6 {
            return;
        }
        for i in from..pairs.len() {
            cur.push(pairs[i]);
            rec(pairs, i, cur, out);
            cur.pop();
        }
    }
    rec(&pairs, 0, &mut Vec::new(), &mut out);
    out
}

/// Parity maps on 4 vertices: index in base 3, digit 0 free, 1 even, 2 odd.
pub fn parity_map(index: usize) -> BTreeMap<usize, u8> {
    let mut map = BTreeMap::new();
    let mut x = index;
    for v in 0..4 {
        match x % 3 {
            1 => {
                map.insert(v, 0);
            }
            2 => {
                map.insert(v, 1);
            }
            _ => {}
        }
        x /= 3;
    }
    map
}

/// Reduced side: every feasible orientation pulls back to a feasible one.
/// Returns (reduced feasible, all pull-backs verified).
fn reduced_side(orig: &Instance, reduced: &Instance, map: &ReductionMap) -> (bool, bool) {
    let mut any = false;
    let mut all_ok = true;
    for_each_feasible(reduced, |o| {
        any = true;
        let back = pull_back(o, map);
        all_ok &= verify(orig, &back).map(|r| r.is_feasible()).unwrap_or(false);
        all_ok
    })
    .unwrap();
    (any, all_ok)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Pendant reduction without conflicts.
    Plain,
    /// Pendant reduction with up to 2 exact conflicts (overlap allowed).
    ExactPendant,
    /// Pendant reduction with up to 2 subset conflicts (overlap allowed).
    SubsetPendant,
    /// Disjoint exact conflicts of size 2..=4 through the switching networks.
    Dec,
    /// All-even, disjoint subset conflicts of size 1..=4 through the gadget.
    Dsc,
}

/// Conflicts for the given family: the `variant`th of a deterministic list
/// built from every single conflict of the graph, plus pairs of them.
fn conflict_sets(g: &Multigraph, family: Family) -> Vec<Vec<Conflict>> {
    let (kind, smin, disjoint) = match family {
        Family::Plain => return vec![vec![]],
        Family::ExactPendant => (ConflictKind::Exact, 1, false),
        Family::SubsetPendant => (ConflictKind::Subset, 1, false),
        Family::Dec => (ConflictKind::Exact, 2, true),
        Family::Dsc => (ConflictKind::Subset, 1, true),
    };
    let inc = g.incidence();
    let mut singles = Vec::new();
    for v in 0..g.vertex_count {
        let es = &inc[v];
        for mask in 1u32..(1 << es.len()) {
            let size = mask.count_ones() as usize;
            if size < smin || size > 4 {
                continue;
            }
            let edges: Vec<usize> = (0..es.len()).filter(|i| mask >> i & 1 == 1).map(|i| es[i]).collect();
            singles.push(Conflict::new(v, &edges, kind));
        }
    }
    let mut sets = vec![vec![]];
    sets.extend(singles.iter().map(|c| vec![c.clone()]));
    for i in 0..singles.len() {
        for j in i + 1..singles.len() {
            let (a, b) = (&singles[i], &singles[j]);
            if disjoint && a.vertex == b.vertex && a.edges.iter().any(|e| b.edges.contains(e)) {
                continue;
            }
            sets.push(vec![a.clone(), b.clone()]);
        }
    }
    sets
}

pub struct FamilyReport {
    pub tally: Tally,
    pub instances: usize,
    pub feasible: usize,
}

fn keep(index: u64, stride: u64) -> bool {
    // splitmix64 finalizer
    let mut z = index.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    (z ^ (z >> 31)) % stride == 0
}

/// Runs one reduction over its family: every 4-vertex multigraph with an edge
/// count in `edges`, every parity map allowed by the reduction, and every set
/// of at most two conflicts of size at most 4. With `stride` > 1 a fixed
/// pseudo-random 1/stride of the members is kept.
pub fn check_reduction_family(
    family: Family,
    edges: std::ops::RangeInclusive<usize>,
    stride: u64,
) -> FamilyReport {
    let mut t = Tally::default();
    let mut instances = 0;
    let mut feasible = 0;
    let mut index = 0u64;
    let parity_maps: Vec<usize> = match family {
        Family::Dsc => vec![(0..4).map(|v| 3usize.pow(v)).sum()], // all even
        _ => (0..81).collect(),
    };
    for g in small_graphs().into_iter().filter(|g| edges.contains(&g.edge_count())) {
        let sets = conflict_sets(&g, family);
        for &pm in &parity_maps {
            for cs in &sets {
                index += 1;
                if stride > 1 && !keep(index, stride) {
                    continue;
                }
                let mut inst = Instance::new(g.clone());
                inst.parity = parity_map(pm);
                inst.conflicts = cs.clone();
                instances += 1;
                let orig = oracle_feasible(&inst);
                feasible += orig as usize;
                let (reduced, map) = match family {
                    Family::Plain => pco_to_eo(&inst, ConflictMode::None),
                    Family::ExactPendant => pco_to_eo(&inst, ConflictMode::Exact),
                    Family::SubsetPendant => pco_to_eo(&inst, ConflictMode::Subset),
                    Family::Dec => pco_dec_to_eo_2dec(&normalize(&inst).unwrap()),
                    Family::Dsc => eo_dsc_to_eo_2dec(&inst),
                }
                .unwrap();
                let (red, pulled) = reduced_side(&inst, &reduced, &map);
                t.check(red == orig && pulled, || {
                    format!("{family:?}: original {orig}, reduced {red}, pull-back ok {pulled} on {inst:?}")
                });
                let decision = match family {
                    Family::Dec => Some(solve_pco_dec(&inst).unwrap()),
                    Family::Dsc | Family::SubsetPendant if inst.pairwise_disjoint() => {
                        Some(solve_pco_dsc(&inst).unwrap())
                    }
                    _ => None,
                };
                if let Some(d) = decision {
                    t.check(d.feasible == orig, || format!("{family:?}: solver decision differs on {inst:?}"));
                    if let Some(o) = &d.orientation {
                        t.check(verify(&inst, o).unwrap().is_feasible(), || {
                            format!("{family:?}: solver witness fails on {inst:?}")
                        });
                    }
                }
            }
        }
    }
    FamilyReport {
        tally: t,
        instances,
        feasible,
    }
}

// ------------------------------------------------------------------ hardness

/// Every formula with at most 3 variables and one or two clauses. Clause
/// order matters to the construction, so pairs are ordered.
pub fn ec_formulas() -> Vec<SatInstance> {
    let cl = all_clauses(3);
    let mut out = Vec::new();
    for i in 0..cl.len() {
        out.push(SatInstance::new(3, vec![cl[i]]));
        for j in 0..cl.len() {
            out.push(SatInstance::new(3, vec![cl[i], cl[j]]));
        }
    }
    out
}

/// Three variables, three clauses: one fixed clause (all positive) followed
/// by every multiset of two further clauses.
pub fn sc_formulas() -> Vec<SatInstance> {
    let cl = all_clauses(3);
    let first = [Lit::pos(0), Lit::pos(1), Lit::pos(2)];
    let mut out = Vec::new();
    for i in 0..cl.len() {
        for j in i..cl.len() {
            out.push(SatInstance::new(3, vec![first, cl[i], cl[j]]));
        }
    }
    out
}

pub fn check_hardness_ec() -> Tally {
    let mut t = Tally::default();
    for f in ec_formulas() {
        let art = reduce_to_pco_2ec(&f).unwrap();
        let inst = &art.instance;
        let sat = sat_oracle(&f).unwrap();
        let witness = search_feasible(inst).unwrap();
        t.check(sat == witness.is_some(), || format!("EC: sat {sat} vs orientable on {f:?}"));
        let deg = inst.graph.degrees();
        for j in 0..f.clauses.len() {
            let c = art.vertex(&format!("c[{}]", j + 1)).unwrap();
            t.check(deg[c] == 5, || format!("EC: c[{}] has degree {}", j + 1, deg[c]));
            if let Some(o) = &witness {
                let d = o.indegrees(inst.vertex_count())[c];
                t.check(d == 4, || format!("EC: c[{}] has indegree {d}", j + 1));
            }
        }
        for (name, &label) in &art.labels {
            if let parorient::hardness::Label::Vertex(v) = label {
                let expect = if name.starts_with("x[") {
                    Some(4)
                } else if name.starts_with("a[") || name.starts_with("b[") || name == "v0'" {
                    Some(1)
                } else {
                    None
                };
                if let Some(d) = expect {
                    t.check(deg[v] == d, || format!("EC: {name} has degree {}", deg[v]));
                }
            }
        }
        t.check(inst.edge_count() % 2 == 0, || "EC: odd edge count".into());
    }
    t
}

pub fn check_hardness_sc() -> Tally {
    let mut t = Tally::default();
    for f in sc_formulas() {
        let art = reduce_to_pco_2sc(&f).unwrap();
        let inst = &art.instance;
        let sat = sat_oracle(&f).unwrap();
        let witness = search_feasible(inst).unwrap();
        t.check(sat == witness.is_some(), || format!("SC: sat {sat} vs orientable on {f:?}"));
        let deg = inst.graph.degrees();
        for j in 0..3 {
            let c = art.vertex(&format!("c[{}]", j + 1)).unwrap();
            t.check(deg[c] == 4, || format!("SC: c[{}] has degree {}", j + 1, deg[c]));
        }
        if let Some(o) = &witness {
            // Each variable circuit is oriented cyclically.
            for i in 1..=3 {
                let z: Vec<_> = (1..=3).map(|l| art.edge(&format!("z[{i},{l}]")).unwrap()).collect();
                let x: Vec<_> = (1..=3).map(|l| art.vertex(&format!("x[{i},{l}]")).unwrap()).collect();
                let forward = (0..3).all(|l| o.head[z[l]] == x[(l + 1) % 3]);
                let backward = (0..3).all(|l| o.head[z[l]] == x[l]);
                t.check(forward || backward, || format!("SC: circuit {i} not cyclic on {f:?}"));
            }
        }
        t.check(inst.edge_count() % 2 == 0, || "SC: odd edge count".into());
    }
    t
}

// ----------------------------------------------------------------------- FPT

pub fn check_fpt(count: usize, seed: u64) -> Tally {
    let mut r = rng(seed);
    let mut t = Tally::default();
    for i in 0..count {
        let g = random_graph(&mut r, 6, 10);
        let mut inst = random_parity(&mut r, Instance::new(g));
        let kind = if i % 2 == 0 { ConflictKind::Subset } else { ConflictKind::Exact };
        for _ in 0..r.gen_range(0..=3) {
            if let Some(c) = random_conflict(&mut r, &inst, kind, 1..=3, false) {
                inst.conflicts.push(c);
            }
        }
        let o = enumerate_best(&inst, DEFAULT_MAX_EDGES).unwrap();
        let res = match kind {
            ConflictKind::Subset => solve_pco_sc_fpt(&inst),
            ConflictKind::Exact => solve_pco_ec_fpt(&inst),
        }
        .unwrap();
        t.check(res.result.is_feasible() == o.feasible, || format!("FPT decision differs on {inst:?}"));
        if let Some(w) = res.result.feasible_orientation() {
            t.check(verify(&inst, w).unwrap().is_feasible(), || format!("FPT witness fails on {inst:?}"));
        }
        let deg = inst.graph.degrees();
        let stated: u128 = inst
            .conflicts
            .iter()
            .map(|c| (deg[c.vertex] + c.size()) as u128)
            .product();
        t.check(
            res.stats.leaves as u128 <= res.stats.bound && res.stats.bound <= stated,
            || format!("leaves {} bound {} stated {stated}", res.stats.leaves, res.stats.bound),
        );
    }
    t
}

// ------------------------------------------------------------------ matching

/// Canonical adjacency bitmask of a graph on n ≤ 8 nodes (minimum over
/// relabellings consistent with colour refinement).
fn canonical(n: usize, adj: &[u8]) -> u64 {
    // Colour refinement.
    let mut colour: Vec<u64> = (0..n).map(|v| adj[v].count_ones() as u64).collect();
    for _ in 0..n {
        let sig: Vec<(u64, Vec<u64>)> = (0..n)
            .map(|v| {
                let mut ns: Vec<u64> = (0..n).filter(|&w| adj[v] >> w & 1 == 1).map(|w| colour[w]).collect();
                ns.sort_unstable();
                (colour[v], ns)
            })
            .collect();
        let mut distinct = sig.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<u64> = sig.iter().map(|s| distinct.binary_search(s).unwrap() as u64).collect();
        let stable = {
            let a: BTreeSet<_> = colour.iter().collect();
            let b: BTreeSet<_> = next.iter().collect();
            a.len() == b.len()
        };
        colour = next;
        if stable {
            break;
        }
    }
    // Order vertices by colour; permute within colour classes.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| colour[v]);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match classes.last_mut() {
            Some(c) if colour[c[0]] == colour[v] => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best = u64::MAX;
    let mut perm = Vec::with_capacity(n);
    fn permutations(classes: &mut [Vec<usize>], i: usize, perm: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if i == classes.len() {
            f(perm);
            return;
        }
        let len = classes[i].len();
        heap(classes, i, len, perm, f);
    }
    fn heap(classes: &mut [Vec<usize>], i: usize, k: usize, perm: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if k <= 1 {
            let base = perm.len();
            perm.extend_from_slice(&classes[i]);
            permutations(classes, i + 1, perm, f);
            perm.truncate(base);
            return;
        }
        for j in 0..k {
            heap(classes, i, k - 1, perm, f);
            let swap = if k % 2 == 0 { j } else { 0 };
            classes[i].swap(swap, k - 1);
        }
    }
    permutations(&mut classes, 0, &mut perm, &mut |p: &[usize]| {
        let mut code = 0u64;
        let mut bit = 0;
        for a in 0..n {
            for b in a + 1..n {
                if adj[p[a]] >> p[b] & 1 == 1 {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(code);
    });
    best
}

fn decode(n: usize, code: u64) -> Vec<(usize, usize)> {
    let mut links = Vec::new();
    let mut bit = 0;
    for a in 0..n {
        for b in a + 1..n {
            if code >> bit & 1 == 1 {
                links.push((a, b));
            }
            bit += 1;
        }
    }
    links
}

/// One representative link list per isomorphism class of graphs on n nodes.
pub fn graph_classes(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut level: BTreeSet<u64> = BTreeSet::from([0u64]);
    for k in 2..=n {
        let mut next = BTreeSet::new();
        for &code in &level {
            let links = decode(k - 1, code);
            for mask in 0u32..(1 << (k - 1)) {
                let mut adj = vec![0u8; k];
                for &(a, b) in &links {
                    adj[a] |= 1 << b;
                    adj[b] |= 1 << a;
                }
                for w in 0..k - 1 {
                    if mask >> w & 1 == 1 {
                        adj[w] |= 1 << (k - 1);
                        adj[k - 1] |= 1 << w;
                    }
                }
                next.insert(canonical(k, &adj));
            }
        }
        level = next;
    }
    if n <= 1 {
        return vec![vec![]];
    }
    level.into_iter().map(|c| decode(n, c)).collect()
}

pub fn connected(n: usize, links: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in links {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Returns the tally and the number of connected classes per node count.
pub fn check_matching(random: usize, seed: u64) -> (Tally, Vec<usize>) {
    let mut t = Tally::default();
    let mut counts = Vec::new();
    for n in 1..=8 {
        let classes: Vec<_> = graph_classes(n).into_iter().filter(|l| connected(n, l)).collect();
        counts.push(classes.len());
        for links in classes {
            let g = SimpleGraph::new(n, &links).unwrap();
            let m = max_matching(&g);
            let want = brute_matching(n, &links);
            t.check(m.is_valid_for(&g) && m.size() == want, || {
                format!("n={n} links={links:?}: got {} want {want}", m.size())
            });
        }
    }
    let mut r = rng(seed);
    for _ in 0..random {
        let p: f64 = r.gen_range(0.1..0.7);
        let links: Vec<_> = (0..10)
            .flat_map(|a| (a + 1..10).map(move |b| (a, b)))
            .filter(|_| r.gen_bool(p))
            .collect();
        let g = SimpleGraph::new(10, &links).unwrap();
        let m = max_matching(&g);
        let want = brute_matching(10, &links);
        t.check(m.is_valid_for(&g) && m.size() == want, || format!("random: got {} want {want}", m.size()));
    }
    (t, counts)
}

// ------------------------------------------------------------------- scaling

/// Random 4-regular loopless multigraph with m edges (m even) and one
/// disjoint conflict pair at roughly half of the vertices.
pub fn four_regular(r: &mut ChaCha8Rng, m: usize) -> Instance {
    let n = m / 2;
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v; 4]).collect();
    stubs.shuffle(r);
    let mut pairs: Vec<(usize, usize)> = stubs.chunks(2).map(|c| (c[0], c[1])).collect();
    // Remove loops by swapping endpoints with random other pairs.
    let mut guard = 0;
    while let Some(i) = pairs.iter().position(|&(a, b)| a == b) {
        let j = r.gen_range(0..pairs.len());
        let (a, _) = pairs[i];
        let (c, d) = pairs[j];
        if c != a && d != a {
            pairs[i].1 = c;
            pairs[j].0 = a;
        }
        guard += 1;
        assert!(guard < 100_000, "could not remove loops");
    }
    let g = Multigraph::from_edges(n, &pairs);
    let mut inst = Instance::all_even(g);
    let inc = inst.graph.incidence();
    for v in 0..n {
        if r.gen_bool(0.5) {
            let mut es = inc[v].clone();
            es.shuffle(r);
            inst.conflicts.push(Conflict::exact(v, &es[..2]));
        }
    }
    inst
}

pub struct Scaling {
    pub sizes: Vec<usize>,
    pub times: Vec<Duration>,
    /// Log-log slope between the first and last size.
    pub exponent: f64,
}

pub fn measure_scaling(sizes: &[usize], seed: u64, repeats: usize) -> Scaling {
    let mut r = rng(seed);
    let mut times = Vec::new();
    for &m in sizes {
        let inst = four_regular(&mut r, m);
        let mut best = Duration::MAX;
        for _ in 0..repeats {
            let start = Instant::now();
            let res = solve_eo_2dec(&inst).unwrap();
            best = best.min(start.elapsed());
            assert!(verify(&inst, &res.orientation).unwrap().is_conflict_free());
        }
        times.push(best);
    }
    let floor = 1e-4;
    let t0 = times[0].as_secs_f64().max(floor);
    let t1 = times[times.len() - 1].as_secs_f64().max(floor);
    let exponent = (t1 / t0).ln() / (sizes[sizes.len() - 1] as f64 / sizes[0] as f64).ln();
    Scaling {
        sizes: sizes.to_vec(),
        times,
        exponent,
    }
}

// --------------------------------------------------------------- determinism

/// Every solver and generator run twice; outputs must render identically.
pub fn check_determinism(seed: u64) -> Tally {
    let mut t = Tally::default();
    let run = |seed: u64| -> Vec<String> {
        let mut r = rng(seed);
        let mut out = Vec::new();
        for _ in 0..30 {
            let g = random_graph(&mut r, 6, 10);
            let inst = random_parity(&mut r, Instance::new(g));
            out.push(format!("{:?}", solve_pco(&inst).unwrap()));
            out.push(format!("{:?}", solve_pco_max(&inst).unwrap()));
            out.push(format!("{:?}", enumerate_best(&inst, DEFAULT_MAX_EDGES).unwrap()));
            let mut e = inst.clone();
            if let Some(c) = random_conflict(&mut r, &e, ConflictKind::Exact, 2..=2, true) {
                e.conflicts.push(c);
            }
            out.push(format!("{:?}", solve_pco_2dec(&e).unwrap()));
            let mut even = Instance::all_even(e.graph.clone());
            even.conflicts = e.conflicts.clone();
            out.push(format!("{:?}", solve_eo_2dec(&even).unwrap()));
            out.push(serialize_instance(&e));
            let mut x = inst.clone();
            if let Some(c) = random_conflict(&mut r, &x, ConflictKind::Exact, 2..=4, true) {
                x.conflicts.push(c);
            }
            out.push(format!("{:?}", solve_pco_dec(&x)));
            out.push(format!("{:?}", pco_dec_to_eo_2dec(&normalize(&x).unwrap())));
            out.push(format!("{:?}", solve_pco_ec_fpt(&x).unwrap()));
            let mut s = inst.clone();
            if let Some(c) = random_conflict(&mut r, &s, ConflictKind::Subset, 1..=3, true) {
                s.conflicts.push(c);
            }
            out.push(format!("{:?}", solve_pco_dsc(&s)));
            out.push(format!("{:?}", solve_pco_sc_fpt(&s).unwrap()));
            out.push(format!("{:?}", pco_to_eo(&s, ConflictMode::Subset)));
        }
        for f in ec_formulas().iter().step_by(97) {
            out.push(serialize_instance(&reduce_to_pco_2ec(f).unwrap().instance));
            out.push(serialize_instance(&reduce_to_pco_2sc(f).unwrap().instance));
        }
        out.push(format!("{:?}", four_regular(&mut r, 200)));
        out
    };
    let a = run(seed);
    let b = run(seed);
    t.check(a.len() == b.len(), || "different output counts".into());
    for (i, (x, y)) in a.iter().zip(&b).enumerate() {
        t.check(x == y, || format!("output {i} differs"));
    }
    t
}
