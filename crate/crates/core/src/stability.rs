//! Partition diagnostics around Turán hypergraphs: the transversality
//! objective `f` with single-vertex local search, sparse/dense/bad pair
//! classification, missing and bad edge counts, edit distance between
//! k-graphs and distance to the nearest complete l-partite k-graph.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::canon::EXACT_CANON_LIMIT;
use crate::constructions::{complete_partite, PartSizes};
use crate::error::{Error, Result};
use crate::freeness::ForbiddenPattern;
use crate::hypergraph::{binomial, binomial_i, k_subsets, mask_vertices, Hypergraph};
use crate::search::ExtremalSolver;

/// Largest order for exact edit distance (bijection search).
pub const EXACT_EDIT_LIMIT: usize = 9;
/// Largest order for exact closeness (partition search).
pub const EXACT_CLOSENESS_LIMIT: usize = 12;

/// An ordered partition of `0..n` into `l` parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexPartition {
    #[serde(serialize_with = "ser_parts")]
    parts: Vec<u64>,
    part_of: Vec<usize>,
}

fn ser_parts<S: serde::Serializer>(parts: &[u64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(parts.iter().map(|&p| mask_vertices(p).collect::<Vec<_>>()))
}

impl VertexPartition {
    /// Builds the partition with `assignment[v]` as the part of `v`.
    pub fn from_assignment(l: usize, assignment: &[usize], allow_empty: bool) -> Result<Self> {
        if assignment.len() > 64 {
            return Err(Error::Capability(format!("{} vertices exceed 64", assignment.len())));
        }
        let mut parts = vec![0u64; l];
        for (v, &p) in assignment.iter().enumerate() {
            if p >= l {
                return Err(Error::Precondition(format!("vertex {v} assigned to part {p} of {l}")));
            }
            parts[p] |= 1 << v;
        }
        let part = VertexPartition {
            parts,
            part_of: assignment.to_vec(),
        };
        if !allow_empty && part.has_empty_parts() {
            return Err(Error::Precondition("partition has an empty part".into()));
        }
        Ok(part)
    }

    /// Builds the partition from explicit vertex lists covering `0..n` exactly once.
    pub fn from_parts(n: usize, parts: &[Vec<usize>], allow_empty: bool) -> Result<Self> {
        let mut assignment = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                if v >= n || assignment[v] != usize::MAX {
                    return Err(Error::Precondition(format!("vertex {v} is out of range or repeated")));
                }
                assignment[v] = i;
            }
        }
        if let Some(v) = assignment.iter().position(|&p| p == usize::MAX) {
            return Err(Error::Precondition(format!("vertex {v} is in no part")));
        }
        Self::from_assignment(parts.len(), &assignment, allow_empty)
    }

    pub fn n(&self) -> usize {
        self.part_of.len()
    }

    pub fn l(&self) -> usize {
        self.parts.len()
    }

    pub fn part_masks(&self) -> &[u64] {
        &self.parts
    }

    pub fn parts(&self) -> Vec<Vec<usize>> {
        self.parts.iter().map(|&p| mask_vertices(p).collect()).collect()
    }

    pub fn part_of(&self) -> &[usize] {
        &self.part_of
    }

    pub fn has_empty_parts(&self) -> bool {
        self.parts.contains(&0)
    }

    pub fn sizes(&self) -> PartSizes {
        PartSizes::from_sizes(self.parts.iter().map(|p| p.count_ones() as usize).collect())
    }

    /// Number of parts met by the vertex set `mask`.
    pub fn touched(&self, mask: u64) -> usize {
        self.parts.iter().filter(|&&p| p & mask != 0).count()
    }

    /// The complete `l`-partite `k`-graph on these parts.
    pub fn complete_partite(&self, k: usize) -> Hypergraph {
        complete_partite(self.n(), k, &self.parts)
    }
}

/// Which sparse-threshold formula to use, by how `l` is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdForm {
    /// `l` is the number of parts: `(C(l+1,2)(k-2) + l + 1)·C(n,k-3)`.
    #[default]
    Parts,
    /// `l` is the index of the forbidden expansion: `(l + (k-2)C(l,2))·C(n,k-3)`.
    Family,
}

pub fn sparse_threshold(n: usize, k: usize, l: usize, form: ThresholdForm) -> u64 {
    let factor = match form {
        ThresholdForm::Parts => binomial(l + 1, 2) * (k as u64).saturating_sub(2) + l as u64 + 1,
        ThresholdForm::Family => l as u64 + (k as u64).saturating_sub(2) * binomial(l, 2),
    };
    factor * binomial_i(n, k as i64 - 3)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionDiagnostics {
    pub k: usize,
    pub n: usize,
    pub l: usize,
    pub edges: usize,
    /// Sum over edges of the number of parts each edge meets.
    pub f_value: usize,
    /// `|T|` for the complete l-partite k-graph `T` on the parts.
    pub t_size: usize,
    /// `|T ∩ G|`.
    pub transversal: usize,
    /// `|T \ G|`.
    pub missing_edges: usize,
    /// `|G \ T|`.
    pub bad_edges: usize,
    /// Covered pairs inside a part.
    pub bad_pairs: Vec<[usize; 2]>,
    pub sparse_pairs: Vec<[usize; 2]>,
    pub dense_pairs: Vec<[usize; 2]>,
    pub threshold_m: u64,
    pub threshold_form: ThresholdForm,
    pub empty_parts: bool,
    pub bad_at_least_missing: bool,
}

impl PartitionDiagnostics {
    /// `|G Δ T|`.
    pub fn edits(&self) -> usize {
        self.missing_edges + self.bad_edges
    }
}

/// Sum over edges of the number of parts met.
pub fn f_value(g: &Hypergraph, part: &VertexPartition) -> usize {
    g.masks().iter().map(|&e| part.touched(e)).sum()
}

pub fn classify_pairs(g: &Hypergraph, part: &VertexPartition, form: ThresholdForm) -> Result<PartitionDiagnostics> {
    if part.n() != g.n() {
        return Err(Error::Precondition(format!(
            "partition covers {} vertices, graph has {}",
            part.n(),
            g.n()
        )));
    }
    let (n, k, l) = (g.n(), g.k(), part.l());
    let t = part.complete_partite(k);
    let in_g: HashSet<u64> = g.masks().iter().copied().collect();
    let missing = t.masks().iter().filter(|e| !in_g.contains(e)).count();
    let bad = g.masks().iter().filter(|&&e| part.touched(e) < k).count();
    let transversal = g.edge_count() - bad;

    let mut codeg = vec![0u64; n * n];
    for &e in g.masks() {
        for a in mask_vertices(e) {
            for b in mask_vertices(e >> (a + 1)) {
                codeg[a * n + a + 1 + b] += 1;
            }
        }
    }
    let m = sparse_threshold(n, k, l, form);
    let (mut bad_pairs, mut sparse, mut dense) = (Vec::new(), Vec::new(), Vec::new());
    for x in 0..n {
        for y in x + 1..n {
            let c = codeg[x * n + y];
            if part.part_of[x] == part.part_of[y] {
                if c > 0 {
                    bad_pairs.push([x, y]);
                }
            } else if c <= m {
                sparse.push([x, y]);
            } else {
                dense.push([x, y]);
            }
        }
    }
    Ok(PartitionDiagnostics {
        k,
        n,
        l,
        edges: g.edge_count(),
        f_value: f_value(g, part),
        t_size: t.edge_count(),
        transversal,
        missing_edges: missing,
        bad_edges: bad,
        bad_pairs,
        sparse_pairs: sparse,
        dense_pairs: dense,
        threshold_m: m,
        threshold_form: form,
        empty_parts: part.has_empty_parts(),
        bad_at_least_missing: bad >= missing,
    })
}

/// Per-vertex incidence used by the local search.
struct Incidence {
    by_vertex: Vec<Vec<u64>>,
}

impl Incidence {
    fn new(g: &Hypergraph) -> Self {
        let mut by_vertex = vec![Vec::new(); g.n()];
        for &e in g.masks() {
            for v in mask_vertices(e) {
                by_vertex[v].push(e);
            }
        }
        Incidence { by_vertex }
    }

    /// Change in `f` for each destination part if `v` moves out of its part.
    fn gains(&self, parts: &[u64], part_of: &[usize], v: usize) -> Vec<i64> {
        let a = part_of[v];
        let mut gain = vec![0i64; parts.len()];
        for &e in &self.by_vertex[v] {
            let rest = e & !(1u64 << v);
            let loss = i64::from(rest & parts[a] == 0);
            for (b, &p) in parts.iter().enumerate() {
                if b != a {
                    gain[b] += i64::from(rest & p == 0) - loss;
                }
            }
        }
        gain[a] = 0;
        gain
    }

    /// Best strictly improving move: highest gain, then lowest vertex, then lowest part.
    fn best_move(&self, parts: &[u64], part_of: &[usize]) -> Option<(usize, usize)> {
        let mut best: Option<(i64, usize, usize)> = None;
        for v in 0..part_of.len() {
            for (b, g) in self.gains(parts, part_of, v).into_iter().enumerate() {
                if b != part_of[v] && g > 0 && best.is_none_or(|(bg, _, _)| g > bg) {
                    best = Some((g, v, b));
                }
            }
        }
        best.map(|(_, v, b)| (v, b))
    }
}

/// A single-vertex move that strictly increases `f`, if one exists.
pub fn improving_move(g: &Hypergraph, part: &VertexPartition) -> Option<(usize, usize)> {
    Incidence::new(g).best_move(&part.parts, &part.part_of)
}

fn local_search(inc: &Incidence, n: usize, l: usize, rng: &mut ChaCha8Rng) -> (Vec<u64>, Vec<usize>) {
    let mut part_of: Vec<usize> = (0..n).map(|_| rng.gen_range(0..l)).collect();
    let mut parts = vec![0u64; l];
    for (v, &p) in part_of.iter().enumerate() {
        parts[p] |= 1 << v;
    }
    while let Some((v, b)) = inc.best_move(&parts, &part_of) {
        parts[part_of[v]] &= !(1u64 << v);
        parts[b] |= 1 << v;
        part_of[v] = b;
    }
    (parts, part_of)
}

/// Local maximum of `f` over `l`-partitions, best of `restarts` seeded runs.
/// Restart `i` draws its start from stream `i` of a generator seeded with `seed`.
pub fn max_f_partition(
    g: &Hypergraph,
    l: usize,
    restarts: usize,
    seed: u64,
) -> Result<(VertexPartition, PartitionDiagnostics)> {
    if l < 2 {
        return Err(Error::Precondition(format!("need at least 2 parts, got {l}")));
    }
    let inc = Incidence::new(g);
    let n = g.n();
    let runs: Vec<(usize, Vec<usize>)> = (0..restarts.max(1) as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let (parts, part_of) = local_search(&inc, n, l, &mut rng);
            let f = g.masks().iter().map(|&e| parts.iter().filter(|&&p| p & e != 0).count()).sum();
            (f, part_of)
        })
        .collect();
    // Highest f, earliest restart on ties.
    let (_, best) = runs
        .into_iter()
        .rev()
        .max_by_key(|(f, _)| *f)
        .expect("at least one restart");
    let part = VertexPartition::from_assignment(l, &best, true)?;
    let diag = classify_pairs(g, &part, ThresholdForm::default())?;
    Ok((part, diag))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMode {
    /// Exhaustive search; refuses beyond the exact size limit.
    Exact,
    /// Local improvement from a degree-matched start; an upper bound only.
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EditDistance {
    pub value: usize,
    /// True when `value` is the exact minimum, false for an upper bound.
    pub exact: bool,
    /// The bijection `v -> sigma[v]` from `F`'s vertices to `G`'s achieving `value`.
    pub sigma: Vec<usize>,
}

fn cost_under(f: &Hypergraph, g_set: &HashSet<u64>, g_len: usize, sigma: &[usize]) -> usize {
    let kept = f
        .masks()
        .iter()
        .filter(|&&e| g_set.contains(&mask_vertices(e).fold(0u64, |m, v| m | (1 << sigma[v]))))
        .count();
    f.edge_count() + g_len - 2 * kept
}

/// Pairwise-swap descent from the bijection matching degrees in sorted order.
fn edit_heuristic(f: &Hypergraph, g: &Hypergraph, g_set: &HashSet<u64>) -> (usize, Vec<usize>) {
    let n = f.n();
    let (df, dg) = (f.degrees(), g.degrees());
    let mut fv: Vec<usize> = (0..n).collect();
    let mut gv: Vec<usize> = (0..n).collect();
    fv.sort_by_key(|&v| (std::cmp::Reverse(df[v]), v));
    gv.sort_by_key(|&v| (std::cmp::Reverse(dg[v]), v));
    let mut sigma = vec![0; n];
    for (&a, &b) in fv.iter().zip(&gv) {
        sigma[a] = b;
    }
    let mut cost = cost_under(f, g_set, g.edge_count(), &sigma);
    loop {
        let mut improved = false;
        for a in 0..n {
            for b in a + 1..n {
                sigma.swap(a, b);
                let c = cost_under(f, g_set, g.edge_count(), &sigma);
                if c < cost {
                    cost = c;
                    improved = true;
                } else {
                    sigma.swap(a, b);
                }
            }
        }
        if !improved {
            return (cost, sigma);
        }
    }
}

struct EditSearch<'a> {
    n: usize,
    k: usize,
    order: Vec<usize>,
    f_set: HashSet<u64>,
    g_set: HashSet<u64>,
    g_edges: &'a [u64],
    f_edges: &'a [u64],
    df: Vec<usize>,
    dg: Vec<usize>,
    sigma: Vec<usize>,
    inverse: Vec<usize>,
    best: usize,
    best_sigma: Vec<usize>,
}

impl EditSearch<'_> {
    /// Lower bound from degrees: each edit changes `k` vertex degrees by one.
    fn degree_bound(&self, depth: usize) -> usize {
        let mut total = 0usize;
        let mut rest_f = Vec::new();
        for (i, &v) in self.order.iter().enumerate() {
            if i < depth {
                total += self.df[v].abs_diff(self.dg[self.sigma[v]]);
            } else {
                rest_f.push(self.df[v]);
            }
        }
        let mut rest_g: Vec<usize> = (0..self.n).filter(|&w| self.inverse[w] == usize::MAX).map(|w| self.dg[w]).collect();
        rest_f.sort_unstable();
        rest_g.sort_unstable();
        total += rest_f.iter().zip(&rest_g).map(|(a, b)| a.abs_diff(*b)).sum::<usize>();
        total.div_ceil(self.k)
    }

    /// Edits already forced among mapped vertices.
    fn settled_cost(&self, placed: u64, image: u64) -> usize {
        let map = |e: u64, m: &[usize]| mask_vertices(e).fold(0u64, |acc, v| acc | (1 << m[v]));
        let f_out = self
            .f_edges
            .iter()
            .filter(|&&e| e & placed == e && !self.g_set.contains(&map(e, &self.sigma)))
            .count();
        let g_out = self
            .g_edges
            .iter()
            .filter(|&&e| e & image == e && !self.f_set.contains(&map(e, &self.inverse)))
            .count();
        f_out + g_out
    }

    fn run(&mut self, depth: usize, placed: u64, image: u64) {
        let settled = self.settled_cost(placed, image);
        if settled.max(self.degree_bound(depth)) >= self.best {
            return;
        }
        if depth == self.n {
            self.best = settled;
            self.best_sigma = self.sigma.clone();
            return;
        }
        let v = self.order[depth];
        for w in 0..self.n {
            if self.inverse[w] != usize::MAX {
                continue;
            }
            self.sigma[v] = w;
            self.inverse[w] = v;
            self.run(depth + 1, placed | (1 << v), image | (1 << w));
            self.inverse[w] = usize::MAX;
            self.sigma[v] = usize::MAX;
        }
    }
}

/// Minimum over bijections `sigma` of `|sigma(F) Δ G|`, or an upper bound in heuristic mode.
pub fn edit_distance(f: &Hypergraph, g: &Hypergraph, mode: DistanceMode) -> Result<EditDistance> {
    if f.k() != g.k() || f.n() != g.n() {
        return Err(Error::Precondition(format!(
            "size mismatch: ({}, {}) vs ({}, {})",
            f.k(),
            f.n(),
            g.k(),
            g.n()
        )));
    }
    let g_set: HashSet<u64> = g.masks().iter().copied().collect();
    let (upper, sigma) = edit_heuristic(f, g, &g_set);
    if mode == DistanceMode::Heuristic {
        return Ok(EditDistance {
            value: upper,
            exact: false,
            sigma,
        });
    }
    let n = f.n();
    if n > EXACT_EDIT_LIMIT {
        return Err(Error::Capability(format!(
            "exact edit distance needs n <= {EXACT_EDIT_LIMIT}, got {n}; use heuristic mode"
        )));
    }
    let df = f.degrees();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(df[v]), v));
    let mut search = EditSearch {
        n,
        k: f.k(),
        order,
        f_set: f.masks().iter().copied().collect(),
        g_set,
        g_edges: g.masks(),
        f_edges: f.masks(),
        df,
        dg: g.degrees(),
        sigma: vec![usize::MAX; n],
        inverse: vec![usize::MAX; n],
        best: upper + 1,
        best_sigma: sigma,
    };
    search.run(0, 0, 0);
    Ok(EditDistance {
        value: search.best.min(upper),
        exact: true,
        sigma: search.best_sigma,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosenessMode {
    /// Exhaustive search over `l`-partitions (empty parts allowed).
    Exact,
    /// The partition found by `f`-maximizing local search.
    Heuristic { restarts: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Closeness {
    /// `|G Δ T|` for the best complete `l`-partite `T` found.
    pub value: usize,
    pub exact: bool,
    pub partition: VertexPartition,
}

/// `|G Δ T_P|` for the assignment `part_of`.
fn partition_cost(g: &Hypergraph, l: usize, part_of: &[usize]) -> usize {
    let part = VertexPartition::from_assignment(l, part_of, true).expect("valid assignment");
    let t = part.complete_partite(g.k());
    g.symmetric_difference(&t)
}

struct ClosenessSearch {
    n: usize,
    l: usize,
    g_set: HashSet<u64>,
    /// For each vertex `v`, the `k`-sets whose largest vertex is `v`.
    closing: Vec<Vec<u64>>,
    part_of: Vec<usize>,
    best: usize,
    best_assignment: Vec<usize>,
}

impl ClosenessSearch {
    /// Edits settled once `v` is placed: bad `G`-edges and missing transversal sets closing at `v`.
    fn closing_cost(&self, v: usize) -> usize {
        self.closing[v]
            .iter()
            .filter(|&&s| {
                let mut seen = 0u64;
                let transversal = mask_vertices(s).all(|u| {
                    let bit = 1u64 << self.part_of[u];
                    let fresh = seen & bit == 0;
                    seen |= bit;
                    fresh
                });
                transversal != self.g_set.contains(&s)
            })
            .count()
    }

    fn run(&mut self, v: usize, used_parts: usize, cost: usize) {
        if cost >= self.best {
            return;
        }
        if v == self.n {
            self.best = cost;
            self.best_assignment = self.part_of.clone();
            return;
        }
        // Parts are interchangeable: open at most one new part per step.
        for p in 0..(used_parts + 1).min(self.l) {
            self.part_of[v] = p;
            let c = self.closing_cost(v);
            self.run(v + 1, used_parts.max(p + 1), cost + c);
        }
        self.part_of[v] = usize::MAX;
    }
}

/// Edits to the nearest complete `l`-partite `k`-graph.
pub fn closeness_to_turan(g: &Hypergraph, l: usize, mode: ClosenessMode) -> Result<Closeness> {
    if l < 2 {
        return Err(Error::Precondition(format!("need at least 2 parts, got {l}")));
    }
    let (restarts, seed) = match mode {
        ClosenessMode::Heuristic { restarts, seed } => (restarts, seed),
        ClosenessMode::Exact => (8, 0),
    };
    let (start, diag) = max_f_partition(g, l, restarts, seed)?;
    if let ClosenessMode::Heuristic { .. } = mode {
        return Ok(Closeness {
            value: diag.edits(),
            exact: false,
            partition: start,
        });
    }
    let n = g.n();
    if n > EXACT_CLOSENESS_LIMIT {
        return Err(Error::Capability(format!(
            "exact closeness needs n <= {EXACT_CLOSENESS_LIMIT}, got {n}; use heuristic mode"
        )));
    }
    let k = g.k();
    let mut closing = vec![Vec::new(); n];
    for s in k_subsets(n, k) {
        closing[63 - s.leading_zeros() as usize].push(s);
    }
    let mut search = ClosenessSearch {
        n,
        l,
        g_set: g.masks().iter().copied().collect(),
        closing,
        part_of: vec![usize::MAX; n],
        best: diag.edits() + 1,
        best_assignment: start.part_of().to_vec(),
    };
    search.run(0, 0, 0);
    let value = search.best.min(diag.edits());
    let partition = VertexPartition::from_assignment(l, &search.best_assignment, true)?;
    debug_assert_eq!(partition_cost(g, l, partition.part_of()), value);
    Ok(Closeness {
        value,
        exact: true,
        partition,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    pub edges: usize,
    pub closeness: usize,
    pub graph: Hypergraph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub k: usize,
    pub pattern: String,
    pub slack: usize,
    pub l: usize,
    pub ex: usize,
    pub classes: Vec<SpectrumEntry>,
}

impl SpectrumReport {
    /// Distinct closeness values, ascending.
    pub fn closeness_values(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.classes.iter().map(|c| c.closeness).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Every `p`-free graph with at least `ex(n, p) - slack` edges, up to
/// isomorphism, with its exact distance to the nearest complete `l`-partite graph.
pub fn near_extremal_spectrum(
    solver: &mut ExtremalSolver,
    n: usize,
    p: &ForbiddenPattern,
    slack: usize,
    l: usize,
) -> Result<SpectrumReport> {
    if n > EXACT_CANON_LIMIT.min(EXACT_CLOSENESS_LIMIT) {
        return Err(Error::Capability(format!("spectrum needs n <= {EXACT_CLOSENESS_LIMIT}")));
    }
    let ex = solver.ex_value(n, p)?;
    if !ex.certified {
        return Err(Error::Budget(format!("ex({n}, {p}) was not certified")));
    }
    let graphs = solver.free_graphs_at_least(n, p, ex.value.saturating_sub(slack))?;
    let mut classes = graphs
        .into_iter()
        .map(|graph| {
            let c = closeness_to_turan(&graph, l, ClosenessMode::Exact)?;
            Ok(SpectrumEntry {
                edges: graph.edge_count(),
                closeness: c.value,
                graph,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    classes.sort_by_key(|c| std::cmp::Reverse(c.edges));
    Ok(SpectrumReport {
        n,
        k: p.k(),
        pattern: p.to_string(),
        slack,
        l,
        ex: ex.value,
        classes,
    })
}
