//! Exact Turán numbers by branch and bound over edge subsets.
//!
//! The k-subsets of `0..n` are decided in colex order, include-branch first.
//! An edge is only ever included when the result stays free, and the search
//! carries the set of still-addable undecided edges, which shrinks
//! monotonically and gives the main bound `current + addable`. Because colex
//! order finishes all edges inside `0..j` before touching vertex `j`, the
//! state at position `C(j, k)` is just a graph on `j` vertices; isomorphic
//! states there have isomorphic subtrees, which is where isomorph rejection
//! is applied.
//!
//! Freeness is hereditary, so exact values for smaller orders give two more
//! bounds: every `j`-vertex prefix holds at most `ex(j)` edges, and every
//! vertex of a graph with `T` edges has degree at least `T - ex(n - 1)`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::cache::ResultCache;
use crate::canon::{are_isomorphic, canonical_form, CanonicalForm, EXACT_CANON_LIMIT};
use crate::constructions::{complete_hypergraph, turan_count, turan_hypergraph};
use crate::error::{Error, Result};
use crate::freeness::{free_in, is_free, Checker, EdgeIndex, ForbiddenPattern, PatternKind};
use crate::hypergraph::{binomial, k_subsets, mask_vertices, Hypergraph};
use crate::VERSION;

/// Vertex boundaries (starting at `k + 1`) at which isomorph rejection runs.
pub const DEFAULT_ISO_LEVELS: usize = 4;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Enumerate every extremal graph up to isomorphism after the optimum is known.
    pub enumerate: bool,
    pub iso_levels: usize,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            enumerate: false,
            iso_levels: DEFAULT_ISO_LEVELS,
            node_budget: None,
            time_budget: None,
            workers: 1,
        }
    }
}

impl SearchOptions {
    pub fn enumerating() -> Self {
        SearchOptions {
            enumerate: true,
            ..Default::default()
        }
    }
}

/// Outcome of an exact search for `ex(n, p)`.
#[derive(Clone, Debug, Serialize)]
pub struct ExtremalRecord {
    pub n: usize,
    pub k: usize,
    pub pattern: String,
    pub value: usize,
    /// Extremal graphs, one per isomorphism class when `enumerated`.
    pub witnesses: Vec<Hypergraph>,
    pub unique: bool,
    pub enumerated: bool,
    /// False when a budget ran out: `value` is then only a lower bound.
    pub certified: bool,
    pub search_nodes: u64,
    #[serde(skip)]
    pub wall_time: Duration,
    pub version: String,
}

/// `num / den` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Ratio {
        assert!(den > 0, "zero denominator");
        let g = gcd(num, den);
        Ratio { num: num / g, den: den / g }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityPoint {
    pub n: usize,
    pub ratio: Ratio,
}

#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Bits {
        Bits(vec![0; len.div_ceil(64)])
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    /// Set positions at or after `from`.
    fn iter_from(&self, from: usize) -> impl Iterator<Item = usize> + '_ {
        let start = from / 64;
        self.0.iter().enumerate().skip(start).flat_map(move |(w, &word)| {
            let word = if w == start { word & (u64::MAX << (from % 64)) } else { word };
            mask_vertices(word).map(move |b| w * 64 + b)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Optimize,
    /// Every free graph with at least `target` edges, up to isomorphism.
    Collect { target: usize },
}

struct Problem {
    n: usize,
    k: usize,
    checker: Checker,
    edges: Vec<u64>,
    /// `block_start[j] = C(j, k)`: first position whose edge reaches vertex `j`.
    block_start: Vec<usize>,
    /// Certified `ex(j)` for `j < n`.
    sub_ex: Vec<Option<usize>>,
    iso_from: usize,
    iso_to: usize,
    mode: Mode,
}

struct Shared {
    incumbent: AtomicUsize,
    /// Optimization stops once the incumbent reaches this.
    ceiling: usize,
    best: Mutex<Option<Vec<u64>>>,
    found: Mutex<BTreeMap<CanonicalForm, Vec<u64>>>,
    seen: Vec<Mutex<HashSet<CanonicalForm>>>,
    nodes: AtomicU64,
    aborted: AtomicBool,
    node_budget: Option<u64>,
    deadline: Option<Instant>,
}

struct Frontier {
    edges: Vec<u64>,
    addable: Bits,
}

struct Worker<'a> {
    prob: &'a Problem,
    shared: &'a Shared,
    idx: EdgeIndex,
    local_nodes: u64,
    split_at: Option<usize>,
    frontier: Vec<Frontier>,
}

const FLUSH_EVERY: u64 = 1024;

impl<'a> Worker<'a> {
    fn new(prob: &'a Problem, shared: &'a Shared) -> Self {
        Worker {
            prob,
            shared,
            idx: EdgeIndex::new(prob.k, prob.n),
            local_nodes: 0,
            split_at: None,
            frontier: Vec::new(),
        }
    }

    fn flush(&mut self) {
        self.flush_count();
        let total = self.shared.nodes.load(Ordering::Relaxed);
        let over_nodes = self.shared.node_budget.is_some_and(|b| total > b);
        let over_time = self.shared.deadline.is_some_and(|d| Instant::now() > d);
        if over_nodes || over_time {
            self.shared.aborted.store(true, Ordering::Relaxed);
        }
    }

    /// Publishes the local node count without checking budgets.
    fn flush_count(&mut self) {
        self.shared.nodes.fetch_add(self.local_nodes, Ordering::Relaxed);
        self.local_nodes = 0;
    }

    fn threshold(&self) -> Option<usize> {
        match self.prob.mode {
            Mode::Optimize => {
                let inc = self.shared.incumbent.load(Ordering::Relaxed);
                (inc < self.shared.ceiling).then_some(inc + 1)
            }
            Mode::Collect { target } => Some(target),
        }
    }

    /// Whether the node can still reach `target` edges.
    fn feasible(&self, pos: usize, addable: &Bits, target: usize) -> bool {
        let prob = self.prob;
        let cur = self.idx.len();
        let mut per_block = vec![0usize; prob.n + 1];
        let mut deg = vec![0usize; prob.n];
        let mut total = 0usize;
        for q in addable.iter_from(pos) {
            total += 1;
            let e = prob.edges[q];
            per_block[63 - e.leading_zeros() as usize] += 1;
            for v in mask_vertices(e) {
                deg[v] += 1;
            }
        }
        if cur + total < target {
            return false;
        }
        // Prefix bound: edges inside 0..j stay within ex(j).
        let mut suffix = 0usize;
        for j in (1..prob.n).rev() {
            suffix += per_block[j];
            if prob.block_start[j] < pos {
                break;
            }
            if let Some(e) = prob.sub_ex[j] {
                if e + suffix < target {
                    return false;
                }
            }
        }
        // Degree bound from deleting one vertex.
        if let Some(Some(prev)) = prob.sub_ex.get(prob.n - 1) {
            if target > *prev {
                let need = target - prev;
                if (0..prob.n).any(|v| self.idx.degree(v) + deg[v] < need) {
                    return false;
                }
            }
        }
        true
    }

    fn reject_isomorph(&self, pos: usize) -> bool {
        let prob = self.prob;
        let Ok(j) = prob.block_start.binary_search(&pos) else {
            return false;
        };
        // block_start is constant (zero) below k; take the real boundary.
        let j = (j..=prob.n).rev().find(|&j| prob.block_start[j] == pos).unwrap_or(j);
        if j < prob.iso_from || j > prob.iso_to || j >= prob.n {
            return false;
        }
        let g = Hypergraph::from_masks_unchecked(prob.k, j, self.idx.edges().to_vec());
        let key = canonical_form(&g).expect("within canonical limit");
        let mut seen = self.shared.seen[j].lock().expect("seen lock");
        !seen.insert(key)
    }

    fn leaf(&mut self) {
        let cur = self.idx.len();
        match self.prob.mode {
            Mode::Optimize => {
                if cur > self.shared.incumbent.load(Ordering::Relaxed) {
                    let mut best = self.shared.best.lock().expect("best lock");
                    if cur > self.shared.incumbent.load(Ordering::Relaxed) {
                        self.shared.incumbent.store(cur, Ordering::Relaxed);
                        *best = Some(self.idx.edges().to_vec());
                    }
                }
            }
            Mode::Collect { target } => {
                if cur >= target {
                    let g = self.idx.to_graph();
                    let key = canonical_form(&g).expect("within canonical limit");
                    self.shared
                        .found
                        .lock()
                        .expect("found lock")
                        .entry(key)
                        .or_insert_with(|| self.idx.edges().to_vec());
                }
            }
        }
    }

    fn dfs(&mut self, pos: usize, addable: &mut Bits) {
        self.local_nodes += 1;
        if self.local_nodes >= FLUSH_EVERY {
            self.flush();
        }
        if self.shared.aborted.load(Ordering::Relaxed) {
            return;
        }
        let Some(target) = self.threshold() else {
            return;
        };
        if !self.feasible(pos, addable, target) {
            return;
        }
        if self.reject_isomorph(pos) {
            return;
        }
        if self.split_at == Some(pos) {
            self.frontier.push(Frontier {
                edges: self.idx.edges().to_vec(),
                addable: addable.clone(),
            });
            return;
        }
        let prob = self.prob;
        if pos == prob.edges.len() {
            self.leaf();
            return;
        }
        if !addable.get(pos) {
            self.dfs(pos + 1, addable);
            return;
        }
        let e = prob.edges[pos];
        addable.clear(pos);
        self.idx.push(e);
        let mut dropped = Vec::new();
        let later: Vec<usize> = addable.iter_from(pos + 1).collect();
        for q in later {
            let f = prob.edges[q];
            self.idx.push(f);
            if prob.checker.violated_through(&self.idx, f) {
                dropped.push(q);
            }
            self.idx.pop();
        }
        for &q in &dropped {
            addable.clear(q);
        }
        self.dfs(pos + 1, addable);
        for &q in &dropped {
            addable.set(q);
        }
        self.idx.pop();
        self.dfs(pos + 1, addable);
        addable.set(pos);
    }
}

struct SearchOutcome {
    incumbent: usize,
    best: Option<Vec<u64>>,
    found: BTreeMap<CanonicalForm, Vec<u64>>,
    nodes: u64,
    aborted: bool,
}

fn run_search(prob: &Problem, seed: usize, ceiling: usize, opts: &SearchOptions) -> SearchOutcome {
    let shared = Shared {
        incumbent: AtomicUsize::new(seed),
        ceiling,
        best: Mutex::new(None),
        found: Mutex::new(BTreeMap::new()),
        seen: (0..=prob.n).map(|_| Mutex::new(HashSet::new())).collect(),
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        node_budget: opts.node_budget,
        deadline: opts.time_budget.map(|d| Instant::now() + d),
    };
    let mut root = Bits::new(prob.edges.len());
    let mut probe = EdgeIndex::new(prob.k, prob.n);
    for (q, &e) in prob.edges.iter().enumerate() {
        probe.push(e);
        if !prob.checker.violated_through(&probe, e) {
            root.set(q);
        }
        probe.pop();
    }
    let mut worker = Worker::new(prob, &shared);
    let split_block = (prob.k + 3).min(prob.n.saturating_sub(1));
    if opts.workers > 1 && split_block > prob.k {
        worker.split_at = Some(prob.block_start[split_block]);
    }
    worker.dfs(0, &mut root);
    worker.flush_count();
    let frontier = std::mem::take(&mut worker.frontier);
    if !frontier.is_empty() {
        let split = worker.split_at.expect("split position");
        let expand = |f: &Frontier| {
            let mut w = Worker::new(prob, &shared);
            for &e in &f.edges {
                w.idx.push(e);
            }
            let mut addable = f.addable.clone();
            // The node at `split` was already counted and bounded.
            w.dfs_after_split(split, &mut addable);
            w.flush_count();
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .expect("thread pool");
        pool.install(|| frontier.par_iter().for_each(expand));
    }
    SearchOutcome {
        incumbent: shared.incumbent.load(Ordering::Relaxed),
        best: shared.best.into_inner().expect("best lock"),
        found: shared.found.into_inner().expect("found lock"),
        nodes: shared.nodes.load(Ordering::Relaxed),
        aborted: shared.aborted.load(Ordering::Relaxed),
    }
}

impl Worker<'_> {
    fn dfs_after_split(&mut self, pos: usize, addable: &mut Bits) {
        let prob = self.prob;
        if pos == prob.edges.len() {
            self.leaf();
            return;
        }
        if !addable.get(pos) {
            self.dfs(pos + 1, addable);
            return;
        }
        // Re-enter the normal recursion one level below the split point.
        let e = prob.edges[pos];
        addable.clear(pos);
        self.idx.push(e);
        let mut include = addable.clone();
        let later: Vec<usize> = include.iter_from(pos + 1).collect();
        for q in later {
            let f = prob.edges[q];
            self.idx.push(f);
            if prob.checker.violated_through(&self.idx, f) {
                include.clear(q);
            }
            self.idx.pop();
        }
        self.dfs(pos + 1, &mut include);
        self.idx.pop();
        self.dfs(pos + 1, addable);
    }
}

/// The Turán seed for `CoreFamily(l+1)` / `Expansion(l+1)` with `l >= k`.
fn turan_seed(n: usize, p: &ForbiddenPattern) -> Option<Hypergraph> {
    let l1 = match p.kind() {
        PatternKind::CoreFamily(l) | PatternKind::Expansion(l) => *l,
        _ => return None,
    };
    let l = l1.checked_sub(1)?;
    if l < p.k() || n < l {
        return None;
    }
    turan_hypergraph(n, l, p.k()).ok()
}

fn greedy_free(n: usize, p: &ForbiddenPattern) -> Vec<u64> {
    let checker = Checker::new(p);
    let mut idx = EdgeIndex::new(p.k(), n);
    for e in k_subsets(n, p.k()) {
        idx.push(e);
        if checker.violated_through(&idx, e) {
            idx.pop();
        }
    }
    idx.edges().to_vec()
}

/// Memoizing driver for exact Turán numbers, optionally backed by a result cache.
pub struct ExtremalSolver {
    opts: SearchOptions,
    memo: HashMap<(usize, usize, String), ExtremalRecord>,
    cache: Option<ResultCache>,
}

impl ExtremalSolver {
    pub fn new(opts: SearchOptions) -> Self {
        ExtremalSolver {
            opts,
            memo: HashMap::new(),
            cache: None,
        }
    }

    pub fn with_cache(mut self, cache: ResultCache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn options(&self) -> &SearchOptions {
        &self.opts
    }

    pub fn into_cache(self) -> Option<ResultCache> {
        self.cache
    }

    fn lookup(&self, n: usize, p: &ForbiddenPattern, enumerate: bool) -> Option<ExtremalRecord> {
        let key = (p.k(), n, p.to_string());
        if let Some(r) = self.memo.get(&key) {
            if r.enumerated || !enumerate {
                return Some(r.clone());
            }
        }
        self.cache
            .as_ref()
            .and_then(|c| c.lookup(p.k(), n, &p.to_string(), enumerate))
            .and_then(|rec| rec.to_record().ok())
    }

    /// `ex(n, p)` using the solver's options.
    pub fn ex_exact(&mut self, n: usize, p: &ForbiddenPattern) -> Result<ExtremalRecord> {
        let enumerate = self.opts.enumerate;
        self.solve(n, p, enumerate)
    }

    /// `ex(n, p)` without enumerating all extremal graphs.
    pub fn ex_value(&mut self, n: usize, p: &ForbiddenPattern) -> Result<ExtremalRecord> {
        self.solve(n, p, false)
    }

    fn solve(&mut self, n: usize, p: &ForbiddenPattern, enumerate: bool) -> Result<ExtremalRecord> {
        if let Some(r) = self.lookup(n, p, enumerate) {
            return Ok(r);
        }
        let rec = self.compute(n, p, enumerate)?;
        if rec.certified {
            self.memo.insert((p.k(), n, p.to_string()), rec.clone());
        }
        if let Some(cache) = self.cache.as_mut() {
            cache.append(&rec)?;
        }
        Ok(rec)
    }

    fn sub_bounds(&mut self, n: usize, p: &ForbiddenPattern) -> Result<Vec<Option<usize>>> {
        let mut sub = vec![None; n];
        for (j, slot) in sub.iter_mut().enumerate() {
            if j < p.k() {
                *slot = Some(0);
            } else {
                let r = self.ex_value(j, p)?;
                *slot = r.certified.then_some(r.value);
            }
        }
        Ok(sub)
    }

    fn compute(&mut self, n: usize, p: &ForbiddenPattern, enumerate: bool) -> Result<ExtremalRecord> {
        let started = Instant::now();
        let k = p.k();
        let empty = Hypergraph::empty(k, n)?;
        if !is_free(&empty, p) {
            return Err(Error::Precondition(format!("pattern {p} is contained in every {k}-graph on {n} vertices")));
        }
        let record = |value: usize, witnesses: Vec<Hypergraph>, enumerated: bool, certified: bool, nodes: u64| {
            ExtremalRecord {
                n,
                k,
                pattern: p.to_string(),
                value,
                unique: enumerated && witnesses.len() == 1,
                witnesses,
                enumerated,
                certified,
                search_nodes: nodes,
                wall_time: started.elapsed(),
                version: VERSION.to_string(),
            }
        };
        if n < k {
            return Ok(record(0, vec![empty], true, true, 0));
        }
        let sub_ex = self.sub_bounds(n, p)?;
        let total = binomial(n, k) as usize;
        let ceiling = match sub_ex[n - 1] {
            Some(prev) if n > k => total.min(prev * n / (n - k)),
            _ => total,
        };

        let mut best = greedy_free(n, p);
        if let Some(t) = turan_seed(n, p) {
            if t.edge_count() > best.len() && is_free(&t, p) {
                best = t.masks().to_vec();
            }
        }
        let iso_to = (k + self.opts.iso_levels).min(EXACT_CANON_LIMIT);
        let mut prob = Problem {
            n,
            k,
            checker: Checker::new(p),
            edges: k_subsets(n, k),
            block_start: (0..=n).map(|j| binomial(j, k) as usize).collect(),
            sub_ex,
            iso_from: k + 1,
            iso_to,
            mode: Mode::Optimize,
        };
        let mut nodes = 0;
        let mut certified = true;
        if best.len() < ceiling {
            let out = run_search(&prob, best.len(), ceiling, &self.opts);
            nodes += out.nodes;
            certified &= !out.aborted;
            if let Some(b) = out.best {
                if b.len() > best.len() {
                    best = b;
                }
            }
            debug_assert!(out.incumbent == best.len() || out.aborted);
        }
        let value = best.len();
        let best_graph = Hypergraph::from_masks_unchecked(k, n, best);
        if !is_free(&best_graph, p) {
            return Err(Error::Inconsistent(format!("incumbent for {p} at n={n} is not free")));
        }
        if !(enumerate && certified && n <= EXACT_CANON_LIMIT) {
            return Ok(record(value, vec![best_graph], false, certified, nodes));
        }
        prob.mode = Mode::Collect { target: value };
        let out = run_search(&prob, value, usize::MAX, &self.opts);
        nodes += out.nodes;
        if out.aborted {
            return Ok(record(value, vec![best_graph], false, false, nodes));
        }
        let witnesses: Vec<Hypergraph> = out
            .found
            .into_values()
            .map(|m| Hypergraph::from_masks_unchecked(k, n, m))
            .collect();
        if witnesses.iter().any(|w| w.edge_count() != value) || witnesses.is_empty() {
            return Err(Error::Inconsistent(format!(
                "enumeration at n={n} for {p} disagrees with optimum {value}"
            )));
        }
        Ok(record(value, witnesses, true, true, nodes))
    }

    /// All `p`-free graphs on `n` vertices with at least `target` edges, one per
    /// isomorphism class, in canonical-key order.
    pub fn free_graphs_at_least(&mut self, n: usize, p: &ForbiddenPattern, target: usize) -> Result<Vec<Hypergraph>> {
        let k = p.k();
        if n > EXACT_CANON_LIMIT {
            return Err(Error::Capability(format!("enumeration up to isomorphism needs n <= {EXACT_CANON_LIMIT}")));
        }
        if n < k {
            return Ok(if target == 0 { vec![Hypergraph::empty(k, n)?] } else { vec![] });
        }
        let sub_ex = self.sub_bounds(n, p)?;
        let prob = Problem {
            n,
            k,
            checker: Checker::new(p),
            edges: k_subsets(n, k),
            block_start: (0..=n).map(|j| binomial(j, k) as usize).collect(),
            sub_ex,
            iso_from: k + 1,
            iso_to: (k + self.opts.iso_levels).min(EXACT_CANON_LIMIT),
            mode: Mode::Collect { target },
        };
        let out = run_search(&prob, 0, usize::MAX, &self.opts);
        if out.aborted {
            return Err(Error::Budget(format!("enumeration for {p} at n={n} ran out of budget")));
        }
        Ok(out
            .found
            .into_values()
            .map(|m| Hypergraph::from_masks_unchecked(k, n, m))
            .collect())
    }
}

/// Convenience wrapper around a fresh [`ExtremalSolver`].
pub fn ex_exact(n: usize, p: &ForbiddenPattern, opts: &SearchOptions) -> Result<ExtremalRecord> {
    ExtremalSolver::new(opts.clone()).ex_exact(n, p)
}

/// Exact densities `ex(n, p) / C(n, k)` for `n` in `n_from..=n_to`.
pub fn density_sequence(
    solver: &mut ExtremalSolver,
    p: &ForbiddenPattern,
    n_from: usize,
    n_to: usize,
) -> Result<Vec<DensityPoint>> {
    let k = p.k();
    if n_from < k {
        return Err(Error::Precondition(format!("density needs n >= k = {k}")));
    }
    let mut points: Vec<DensityPoint> = Vec::new();
    for n in n_from..=n_to {
        let rec = solver.ex_value(n, p)?;
        if !rec.certified {
            return Err(Error::Budget(format!("ex({n}, {p}) not certified")));
        }
        let point = DensityPoint {
            n,
            ratio: Ratio::new(rec.value as u64, binomial(n, k)),
        };
        if let Some(prev) = points.last() {
            if point.ratio > prev.ratio {
                return Err(Error::Inconsistent(format!(
                    "density for {p} increased from {} at n={} to {} at n={n}",
                    prev.ratio, prev.n, point.ratio
                )));
            }
        }
        points.push(point);
    }
    Ok(points)
}

#[derive(Clone, Debug, Serialize)]
pub struct MubayiRow {
    pub n: usize,
    pub ex: usize,
    pub turan_count: u64,
    pub classes: usize,
    pub isomorphic_to_turan: bool,
    pub certified: bool,
    pub search_nodes: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MubayiReport {
    pub k: usize,
    pub l: usize,
    pub n_max: usize,
    pub rows: Vec<MubayiRow>,
    pub all_pass: bool,
    pub certified: bool,
}

/// Checks `ex(n, CoreFamily(l+1)) = |T(n,l)|` with `T(n,l)` the unique extremal
/// graph, for every `n` in `l..=n_max`.
pub fn verify_mubayi(solver: &mut ExtremalSolver, k: usize, l: usize, n_max: usize) -> Result<MubayiReport> {
    if k < 3 || l < k {
        return Err(Error::Precondition(format!("needs l >= k >= 3, got k={k}, l={l}")));
    }
    let p = ForbiddenPattern::core_family(k, l + 1)?;
    let mut rows = Vec::new();
    for n in l..=n_max {
        let rec = solver.solve(n, &p, true)?;
        let tc = turan_count(n, l, k)?;
        let t = turan_hypergraph(n, l, k)?;
        let iso = rec.enumerated && rec.witnesses.len() == 1 && are_isomorphic(&rec.witnesses[0], &t);
        rows.push(MubayiRow {
            n,
            ex: rec.value,
            turan_count: tc,
            classes: rec.witnesses.len(),
            isomorphic_to_turan: iso,
            certified: rec.certified,
            search_nodes: rec.search_nodes,
            pass: rec.certified && rec.value as u64 == tc && rec.unique && iso,
        });
    }
    Ok(MubayiReport {
        k,
        l,
        n_max,
        all_pass: rows.iter().all(|r| r.pass),
        certified: rows.iter().all(|r| r.certified),
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeMainRow {
    pub n: usize,
    pub ex_expansion: usize,
    pub ex_core_family: usize,
    /// `|T(n,l)|`, or `None` when `l < k` and the construction is undefined.
    pub turan_count: Option<u64>,
    /// `equal` or `greater` relative to the reference (Turán count, else 0).
    pub relation: String,
    pub expansion_classes: Option<usize>,
    pub turan_among_extremal: Option<bool>,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeMainReport {
    pub k: usize,
    pub l: usize,
    pub n_max: usize,
    pub rows: Vec<ProbeMainRow>,
    /// Lower bounds held everywhere: `ex_exp >= ex_core` and `ex_exp >= reference`.
    pub consistent: bool,
    pub certified: bool,
}

/// Tabulates `ex(n, Expansion(l+1))` against the Turán count and the core
/// family; never asserts equality.
pub fn probe_main(solver: &mut ExtremalSolver, k: usize, l: usize, n_max: usize) -> Result<ProbeMainReport> {
    if k < 3 || l < 2 {
        return Err(Error::Precondition(format!("needs k >= 3 and l >= 2, got k={k}, l={l}")));
    }
    let exp = ForbiddenPattern::expansion(k, l + 1)?;
    let core = ForbiddenPattern::core_family(k, l + 1)?;
    let enumerate = solver.opts.enumerate;
    let mut rows = Vec::new();
    for n in l.max(k)..=n_max {
        let re = solver.solve(n, &exp, enumerate)?;
        let rc = solver.ex_value(n, &core)?;
        let tc = if l >= k { Some(turan_count(n, l, k)?) } else { None };
        let reference = tc.unwrap_or(0) as usize;
        let relation = match re.value.cmp(&reference) {
            std::cmp::Ordering::Equal => "equal",
            std::cmp::Ordering::Greater => "greater",
            std::cmp::Ordering::Less => "less",
        };
        let turan_among = if re.enumerated && l >= k {
            let t = turan_hypergraph(n, l, k)?;
            Some(re.witnesses.iter().any(|w| are_isomorphic(w, &t)))
        } else {
            None
        };
        rows.push(ProbeMainRow {
            n,
            ex_expansion: re.value,
            ex_core_family: rc.value,
            turan_count: tc,
            relation: relation.to_string(),
            expansion_classes: re.enumerated.then_some(re.witnesses.len()),
            turan_among_extremal: turan_among,
            certified: re.certified && rc.certified,
        });
    }
    Ok(ProbeMainReport {
        k,
        l,
        n_max,
        consistent: rows
            .iter()
            .all(|r| r.ex_expansion >= r.ex_core_family && r.relation != "less"),
        certified: rows.iter().all(|r| r.certified),
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NonPrincipalityRow {
    pub n: usize,
    pub ex_pair: usize,
    pub ex_expansion: usize,
    pub ex_complete: usize,
    pub density_pair: Ratio,
    pub density_expansion: Ratio,
    pub density_complete: Ratio,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonPrincipalityReport {
    pub k: usize,
    pub n_max: usize,
    pub rows: Vec<NonPrincipalityRow>,
    /// `ex_pair <= min(ex_expansion, ex_complete)` at every `n`.
    pub consistent: bool,
    pub certified: bool,
}

/// Tabulates the pair `{Expansion(k+2), K_{k+1}}` against its members.
pub fn probe_nonprincipality(solver: &mut ExtremalSolver, k: usize, n_max: usize) -> Result<NonPrincipalityReport> {
    if k < 3 {
        return Err(Error::Precondition(format!("needs k >= 3, got {k}")));
    }
    let exp = ForbiddenPattern::expansion(k, k + 2)?;
    let complete = ForbiddenPattern::explicit(complete_hypergraph(k + 1, k)?);
    let pair = ForbiddenPattern::conjunction(vec![exp.clone(), complete.clone()])?;
    let mut rows = Vec::new();
    for n in (k + 1)..=n_max {
        let rp = solver.ex_value(n, &pair)?;
        let re = solver.ex_value(n, &exp)?;
        let rc = solver.ex_value(n, &complete)?;
        let c = binomial(n, k);
        rows.push(NonPrincipalityRow {
            n,
            ex_pair: rp.value,
            ex_expansion: re.value,
            ex_complete: rc.value,
            density_pair: Ratio::new(rp.value as u64, c),
            density_expansion: Ratio::new(re.value as u64, c),
            density_complete: Ratio::new(rc.value as u64, c),
            certified: rp.certified && re.certified && rc.certified,
        });
    }
    Ok(NonPrincipalityReport {
        k,
        n_max,
        consistent: rows.iter().all(|r| r.ex_pair <= r.ex_expansion.min(r.ex_complete)),
        certified: rows.iter().all(|r| r.certified),
        rows,
    })
}

/// Full-check helper used by reports and tests.
pub fn record_is_sound(rec: &ExtremalRecord, p: &ForbiddenPattern) -> bool {
    rec.witnesses.iter().all(|w| {
        let idx = EdgeIndex::from_graph(w);
        w.edge_count() == rec.value && w.n() == rec.n && free_in(&idx, p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn core(k: usize, l: usize) -> ForbiddenPattern {
        ForbiddenPattern::core_family(k, l).unwrap()
    }

    #[test]
    fn small_core_family_values() {
        let rec = ex_exact(5, &core(3, 4), &SearchOptions::enumerating()).unwrap();
        assert_eq!(rec.value, 4);
        assert!(rec.unique && rec.certified);
        assert!(are_isomorphic(&rec.witnesses[0], &turan_hypergraph(5, 3, 3).unwrap()));
        let rec = ex_exact(6, &core(3, 4), &SearchOptions::enumerating()).unwrap();
        assert_eq!(rec.value, 8);
        assert!(rec.unique);
        assert!(record_is_sound(&rec, &core(3, 4)));
    }

    #[test]
    fn triangle_family_forbids_everything() {
        let rec = ex_exact(5, &core(3, 3), &SearchOptions::enumerating()).unwrap();
        assert_eq!(rec.value, 0);
        assert!(rec.unique);
    }

    #[test]
    fn memo_separates_uniformities() {
        let mut solver = ExtremalSolver::new(SearchOptions::default());
        let p3 = ForbiddenPattern::core_family(3, 4).unwrap();
        let p4 = ForbiddenPattern::core_family(4, 4).unwrap();
        assert_eq!(solver.ex_value(4, &p3).unwrap().value, 2);
        assert_eq!(solver.ex_value(4, &p4).unwrap().value, 0);
    }

    #[test]
    fn single_edge_forbidden() {
        let p = ForbiddenPattern::explicit(Hypergraph::new(3, 3, &[[0, 1, 2]]).unwrap());
        let mut solver = ExtremalSolver::new(SearchOptions::default());
        let pts = density_sequence(&mut solver, &p, 3, 6).unwrap();
        assert!(pts.iter().all(|d| d.ratio.num == 0));
    }

    #[test]
    fn empty_pattern_rejected() {
        let p = ForbiddenPattern::explicit(Hypergraph::empty(3, 2).unwrap());
        assert!(matches!(ex_exact(4, &p, &SearchOptions::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn budget_marks_uncertified() {
        let opts = SearchOptions {
            node_budget: Some(10),
            iso_levels: 0,
            ..Default::default()
        };
        let p = ForbiddenPattern::explicit(complete_hypergraph(4, 3).unwrap());
        let rec = ex_exact(7, &p, &opts).unwrap();
        assert!(!rec.certified);
        assert!(record_is_sound(&rec, &p));
    }

    #[test]
    fn ratio_order() {
        assert!(Ratio::new(4, 10) > Ratio::new(8, 20 + 1));
        assert_eq!(Ratio::new(8, 20), Ratio::new(2, 5));
        assert_eq!(Ratio::new(0, 7).to_string(), "0/1");
    }

    #[test]
    fn workers_agree_with_single_worker() {
        let p = core(3, 4);
        let single = ex_exact(7, &p, &SearchOptions::enumerating()).unwrap();
        let multi = ex_exact(
            7,
            &p,
            &SearchOptions {
                workers: 3,
                ..SearchOptions::enumerating()
            },
        )
        .unwrap();
        assert_eq!(single.value, multi.value);
        assert_eq!(single.witnesses, multi.witnesses);
    }
}
