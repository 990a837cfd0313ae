//! Exact containment tests for the forbidden structures: members of the
//! core family (some `l`-set with every pair covered by an edge), the
//! expansion of `K_l`, arbitrary explicit subgraphs, and conjunctions.
//!
//! Containment is never induced. Containment of a core-family member reduces
//! to pair coverage: extra edges only help, so `G` contains a member iff some
//! `l`-set is a clique in the covered-pair graph of `G`.

use std::collections::HashSet;
use std::hash::{BuildHasherDefault, Hasher};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constructions::expansion_order;
use crate::error::{Error, Result};
use crate::hypergraph::{k_subsets, mask_from_vertices, mask_vertices, Hypergraph};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PatternKind {
    CoreFamily(usize),
    Expansion(usize),
    Explicit(Hypergraph),
    Conjunction(Vec<ForbiddenPattern>),
}

/// A freeness predicate over `k`-graphs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ForbiddenPattern {
    k: usize,
    kind: PatternKind,
}

impl ForbiddenPattern {
    pub fn core_family(k: usize, l: usize) -> Result<Self> {
        if k < 2 || l < 2 {
            return Err(Error::Pattern(format!("core family needs k >= 2 and l >= 2, got k={k}, l={l}")));
        }
        Ok(ForbiddenPattern {
            k,
            kind: PatternKind::CoreFamily(l),
        })
    }

    pub fn expansion(k: usize, l: usize) -> Result<Self> {
        if k < 3 || l < 2 {
            return Err(Error::Pattern(format!("expansion needs k >= 3 and l >= 2, got k={k}, l={l}")));
        }
        Ok(ForbiddenPattern {
            k,
            kind: PatternKind::Expansion(l),
        })
    }

    pub fn explicit(f: Hypergraph) -> Self {
        ForbiddenPattern {
            k: f.k(),
            kind: PatternKind::Explicit(f),
        }
    }

    pub fn conjunction(members: Vec<ForbiddenPattern>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::Pattern("conjunction must be non-empty".into()));
        };
        let k = first.k;
        if members.iter().any(|m| m.k != k) {
            return Err(Error::Pattern("conjunction members must share k".into()));
        }
        Ok(ForbiddenPattern {
            k,
            kind: PatternKind::Conjunction(members),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> &PatternKind {
        &self.kind
    }

    /// Parses `core:l`, `exp:l`, `file:PATH`, `graph:k:n:a-b-c+...` or
    /// `all(p1,p2,...)` for uniformity `k`.
    pub fn parse(spec: &str, k: usize) -> Result<Self> {
        let spec = spec.trim();
        let bad = |msg: &str| Error::Pattern(format!("{msg}: {spec:?}"));
        if let Some(inner) = spec.strip_prefix("all(").and_then(|s| s.strip_suffix(')')) {
            let members = split_top_level(inner)
                .into_iter()
                .map(|p| ForbiddenPattern::parse(p, k))
                .collect::<Result<Vec<_>>>()?;
            return ForbiddenPattern::conjunction(members);
        }
        let (tag, rest) = spec.split_once(':').ok_or_else(|| bad("expected tag:value"))?;
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad("expected integer"));
        match tag {
            "core" => ForbiddenPattern::core_family(k, int(rest)?),
            "exp" => ForbiddenPattern::expansion(k, int(rest)?),
            "file" => {
                let text = std::fs::read_to_string(Path::new(rest))?;
                let f = Hypergraph::from_edge_list(&text)?;
                if f.k() != k {
                    return Err(bad(&format!("file graph has k={}, expected {k}", f.k())));
                }
                Ok(ForbiddenPattern::explicit(f))
            }
            "graph" => {
                let mut parts = rest.splitn(3, ':');
                let fk = int(parts.next().unwrap_or(""))?;
                let fnn = int(parts.next().unwrap_or(""))?;
                let body = parts.next().ok_or_else(|| bad("graph needs k:n:edges"))?;
                let edges = if body.is_empty() {
                    Vec::new()
                } else {
                    body.split('+')
                        .map(|e| e.split('-').map(int).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()?
                };
                if fk != k {
                    return Err(bad(&format!("graph has k={fk}, expected {k}")));
                }
                Ok(ForbiddenPattern::explicit(Hypergraph::new(fk, fnn, &edges)?))
            }
            _ => Err(bad("unknown pattern tag")),
        }
    }
}

/// Canonical textual form; parses back with [`ForbiddenPattern::parse`].
impl fmt::Display for ForbiddenPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PatternKind::CoreFamily(l) => write!(f, "core:{l}"),
            PatternKind::Expansion(l) => write!(f, "exp:{l}"),
            PatternKind::Explicit(g) => {
                let edges: Vec<String> = g
                    .edge_tuples()
                    .map(|e| e.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-"))
                    .collect();
                write!(f, "graph:{}:{}:{}", g.k(), g.n(), edges.join("+"))
            }
            PatternKind::Conjunction(ms) => {
                let parts: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
                write!(f, "all({})", parts.join(","))
            }
        }
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairEdge {
    pub pair: (usize, usize),
    pub edge: Vec<usize>,
}

/// Certificate for containment: a core and one covering edge per core pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingWitness {
    pub core: Vec<usize>,
    pub pair_edges: Vec<PairEdge>,
    /// Whether the non-pair parts of the edges are pairwise disjoint and miss the core.
    pub disjoint: bool,
}

impl EmbeddingWitness {
    fn from_assignment(core: u64, assignment: &[(u64, u64)]) -> Self {
        let mut pair_edges: Vec<PairEdge> = assignment
            .iter()
            .map(|&(pair, edge)| {
                let mut it = mask_vertices(pair);
                PairEdge {
                    pair: (it.next().unwrap(), it.next().unwrap()),
                    edge: mask_vertices(edge).collect(),
                }
            })
            .collect();
        pair_edges.sort_by_key(|p| (p.pair.1, p.pair.0));
        EmbeddingWitness {
            core: mask_vertices(core).collect(),
            disjoint: extras_disjoint(core, assignment),
            pair_edges,
        }
    }

    /// Re-checks the witness against `g`: every core pair appears once and is
    /// covered by its `g`-edge; the disjointness flag is truthful.
    pub fn validate(&self, g: &Hypergraph) -> bool {
        let core = mask_from_vertices(&self.core);
        if core.count_ones() as usize != self.core.len() || self.core.iter().any(|&v| v >= g.n()) {
            return false;
        }
        let mut seen = HashSet::new();
        let mut assignment = Vec::new();
        for pe in &self.pair_edges {
            let (a, b) = pe.pair;
            if a == b || a >= g.n() || b >= g.n() || pe.edge.iter().any(|&v| v >= g.n()) {
                return false;
            }
            let pair = (1u64 << a) | (1u64 << b);
            let edge = mask_from_vertices(&pe.edge);
            if pair & !core != 0 || edge & pair != pair || !g.contains_edge(edge) || !seen.insert(pair) {
                return false;
            }
            assignment.push((pair, edge));
        }
        let l = self.core.len();
        seen.len() == l * (l.saturating_sub(1)) / 2 && self.disjoint == extras_disjoint(core, &assignment)
    }
}

fn extras_disjoint(core: u64, assignment: &[(u64, u64)]) -> bool {
    let mut used = core;
    let mut edges = HashSet::new();
    for &(pair, edge) in assignment {
        let extra = edge & !pair;
        if extra & used != 0 || edge & core != pair || !edges.insert(edge) {
            return false;
        }
        used |= extra;
    }
    true
}

/// Edge set with covered-pair adjacency, supporting push/pop for the search.
#[derive(Clone, Debug)]
/// Multiplicative hash for edge masks; the default hasher dominates lookups.
#[derive(Default)]
struct MaskHasher(u64);

impl Hasher for MaskHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(8) ^ b as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        }
    }

    fn write_u64(&mut self, x: u64) {
        self.0 = (self.0 ^ x).wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(29);
    }
}

type MaskSet = HashSet<u64, BuildHasherDefault<MaskHasher>>;

pub(crate) struct EdgeIndex {
    n: usize,
    k: usize,
    edges: Vec<u64>,
    set: MaskSet,
    pair_count: Vec<u32>,
    adj: Vec<u64>,
    deg: Vec<u32>,
}

impl EdgeIndex {
    pub(crate) fn new(k: usize, n: usize) -> Self {
        EdgeIndex {
            n,
            k,
            edges: Vec::new(),
            set: MaskSet::default(),
            pair_count: vec![0; n * n],
            adj: vec![0; n],
            deg: vec![0; n],
        }
    }

    pub(crate) fn from_graph(g: &Hypergraph) -> Self {
        let mut idx = EdgeIndex::new(g.k(), g.n());
        for &e in g.masks() {
            idx.push(e);
        }
        idx
    }

    pub(crate) fn push(&mut self, e: u64) {
        self.edges.push(e);
        self.set.insert(e);
        for a in mask_vertices(e) {
            self.deg[a] += 1;
            for b in mask_vertices(e & !((1u64 << (a + 1)) - 1)) {
                let c = &mut self.pair_count[a * self.n + b];
                *c += 1;
                if *c == 1 {
                    self.adj[a] |= 1 << b;
                    self.adj[b] |= 1 << a;
                }
            }
        }
    }

    pub(crate) fn pop(&mut self) -> Option<u64> {
        let e = self.edges.pop()?;
        self.set.remove(&e);
        for a in mask_vertices(e) {
            self.deg[a] -= 1;
            for b in mask_vertices(e & !((1u64 << (a + 1)) - 1)) {
                let c = &mut self.pair_count[a * self.n + b];
                *c -= 1;
                if *c == 0 {
                    self.adj[a] &= !(1 << b);
                    self.adj[b] &= !(1 << a);
                }
            }
        }
        Some(e)
    }

    pub(crate) fn edges(&self) -> &[u64] {
        &self.edges
    }

    pub(crate) fn degree(&self, v: usize) -> usize {
        self.deg[v] as usize
    }

    pub(crate) fn len(&self) -> usize {
        self.edges.len()
    }

    fn has(&self, e: u64) -> bool {
        self.set.contains(&e)
    }

    fn pair_covers(&self, a: usize, b: usize) -> u32 {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.pair_count[a * self.n + b]
    }

    pub(crate) fn to_graph(&self) -> Hypergraph {
        Hypergraph::from_masks_unchecked(self.k, self.n, self.edges.clone())
    }
}

/// Calls `f` on every clique of exactly `size` vertices that contains the
/// clique `required` and otherwise uses only vertices of `allowed`, in
/// ascending lexicographic order. Stops early when `f` returns true.
fn for_each_clique(adj: &[u64], required: u64, allowed: u64, size: usize, f: &mut impl FnMut(u64) -> bool) -> bool {
    let mut cand = allowed & !required;
    for v in mask_vertices(required) {
        cand &= adj[v];
    }
    clique_rec(adj, required, required.count_ones() as usize, cand, size, f)
}

fn clique_rec(adj: &[u64], r: u64, r_size: usize, mut cand: u64, size: usize, f: &mut impl FnMut(u64) -> bool) -> bool {
    if r_size == size {
        return f(r);
    }
    while cand != 0 {
        if r_size + (cand.count_ones() as usize) < size {
            return false;
        }
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        if clique_rec(adj, r | (1 << v), r_size + 1, cand & adj[v], size, f) {
            return true;
        }
    }
    false
}

fn first_cover(idx: &EdgeIndex, pair: u64) -> u64 {
    *idx.edges
        .iter()
        .filter(|&&e| e & pair == pair)
        .min()
        .expect("pair is covered")
}

fn core_witness(idx: &EdgeIndex, core: u64) -> EmbeddingWitness {
    let assignment: Vec<(u64, u64)> = pairs_of(core).map(|p| (p, first_cover(idx, p))).collect();
    EmbeddingWitness::from_assignment(core, &assignment)
}

fn pairs_of(mask: u64) -> impl Iterator<Item = u64> {
    let vs: Vec<usize> = mask_vertices(mask).collect();
    k_subsets(vs.len(), 2)
        .into_iter()
        .map(move |p| mask_vertices(p).fold(0u64, |m, i| m | (1 << vs[i])))
}

fn all_vertices(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn core_family_in(idx: &EdgeIndex, l: usize) -> Option<EmbeddingWitness> {
    let mut found = None;
    for_each_clique(&idx.adj, 0, all_vertices(idx.n), l, &mut |c| {
        found = Some(c);
        true
    });
    found.map(|c| core_witness(idx, c))
}

/// Whether `idx` contains a core-family member using a pair newly covered by
/// the last edge `e`. Assumes the graph without `e` had none.
fn core_family_through(idx: &EdgeIndex, l: usize, e: u64) -> bool {
    pairs_of(e).any(|p| {
        let mut vs = mask_vertices(p);
        let (a, b) = (vs.next().unwrap(), vs.next().unwrap());
        idx.pair_covers(a, b) == 1 && for_each_clique(&idx.adj, p, all_vertices(idx.n), l, &mut |_| true)
    })
}

/// Assigns a distinct covering edge to each core pair so that the non-pair
/// parts are disjoint from each other and from the core. Fail-first order.
fn assign_expansion(idx: &EdgeIndex, core: u64, fixed: Option<(u64, u64)>) -> Option<Vec<(u64, u64)>> {
    let mut used = core;
    let mut assignment = Vec::new();
    let mut pending = Vec::new();
    if let Some((pair, edge)) = fixed {
        used |= edge;
        assignment.push((pair, edge));
    }
    for p in pairs_of(core) {
        if fixed.is_some_and(|(fp, _)| fp == p) {
            continue;
        }
        let cands: Vec<u64> = idx
            .edges
            .iter()
            .copied()
            .filter(|&e| e & core == p && (e & !p) & used == 0)
            .collect();
        if cands.is_empty() {
            return None;
        }
        pending.push((p, cands));
    }
    if assign_rec(&mut pending, used, &mut assignment) {
        Some(assignment)
    } else {
        None
    }
}

fn assign_rec(pending: &mut Vec<(u64, Vec<u64>)>, used: u64, out: &mut Vec<(u64, u64)>) -> bool {
    if pending.is_empty() {
        return true;
    }
    let live = |cands: &Vec<u64>, pair: u64| cands.iter().filter(|&&e| (e & !pair) & used == 0).count();
    let (pick, _) = pending
        .iter()
        .enumerate()
        .map(|(i, (p, c))| (i, live(c, *p)))
        .min_by_key(|&(i, c)| (c, i))
        .expect("non-empty");
    let (pair, cands) = pending.swap_remove(pick);
    for &e in &cands {
        let extra = e & !pair;
        if extra & used != 0 {
            continue;
        }
        out.push((pair, e));
        if assign_rec(pending, used | extra, out) {
            return true;
        }
        out.pop();
    }
    pending.push((pair, cands));
    let last = pending.len() - 1;
    pending.swap(pick, last);
    false
}

fn expansion_in(idx: &EdgeIndex, l: usize, root: Option<u64>) -> Option<EmbeddingWitness> {
    if idx.n < expansion_order(l, idx.k.max(2)) || idx.len() < l * (l - 1) / 2 {
        return None;
    }
    let everything = all_vertices(idx.n);
    let mut result = None;
    match root {
        None => {
            for_each_clique(&idx.adj, 0, everything, l, &mut |core| {
                result = assign_expansion(idx, core, None).map(|a| (core, a));
                result.is_some()
            });
        }
        Some(e) => {
            for p in pairs_of(e) {
                let rest = e & !p;
                let found = for_each_clique(&idx.adj, p, everything & !rest, l, &mut |core| {
                    result = assign_expansion(idx, core, Some((p, e))).map(|a| (core, a));
                    result.is_some()
                });
                if found {
                    break;
                }
            }
        }
    }
    result.map(|(core, a)| EmbeddingWitness::from_assignment(core, &a))
}

pub fn contains_core_family(g: &Hypergraph, l: usize) -> Option<EmbeddingWitness> {
    if l < 2 || l > g.n() {
        return None;
    }
    core_family_in(&EdgeIndex::from_graph(g), l)
}

pub fn contains_expansion(g: &Hypergraph, l: usize) -> Option<EmbeddingWitness> {
    if l < 2 {
        return None;
    }
    expansion_in(&EdgeIndex::from_graph(g), l, None)
}

/// Vertex order and edge checks for embedding a fixed `F`, with an
/// optional prefix of vertices that get preassigned images.
#[derive(Clone, Debug)]
pub(crate) struct EmbedPlan {
    f_n: usize,
    f_k: usize,
    f_edges: usize,
    prefix: Vec<usize>,
    order: Vec<usize>,
    /// F-edges whose last vertex in `order` is at this position.
    checks: Vec<Vec<u64>>,
    f_adj: Vec<u64>,
    f_deg: Vec<u32>,
}

impl EmbedPlan {
    fn new(f: &Hypergraph, prefix: &[usize]) -> Self {
        let fidx = EdgeIndex::from_graph(f);
        let fn_ = f.n();
        let mut placed: u64 = 0;
        let mut order: Vec<usize> = Vec::with_capacity(fn_);
        for &v in prefix {
            order.push(v);
            placed |= 1 << v;
        }
        while order.len() < fn_ {
            // Most connections into the placed set, then highest degree, then lowest label.
            let next = (0..fn_)
                .filter(|&v| placed & (1 << v) == 0)
                .max_by_key(|&v| {
                    let links = f.masks().iter().filter(|&&e| e & (1 << v) != 0 && e & placed != 0).count();
                    (links, fidx.deg[v], std::cmp::Reverse(v))
                })
                .expect("unplaced vertex");
            order.push(next);
            placed |= 1 << next;
        }
        let mut pos = vec![0; fn_];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut checks = vec![Vec::new(); fn_];
        for &e in f.masks() {
            let last = mask_vertices(e).map(|v| pos[v]).max().expect("edge has vertices");
            checks[last].push(e);
        }
        EmbedPlan {
            f_n: fn_,
            f_k: f.k(),
            f_edges: f.edge_count(),
            prefix: prefix.to_vec(),
            order,
            checks,
            f_adj: fidx.adj,
            f_deg: fidx.deg,
        }
    }

    fn fits(&self, g: &EdgeIndex) -> bool {
        self.f_k == g.k && self.f_n <= g.n && self.f_edges <= g.len()
    }

    /// Runs the embedding with `prefix[i]` sent to `images[i]`.
    fn embed(&self, g: &EdgeIndex, images: &[usize]) -> Option<Vec<usize>> {
        let mut emb = Embedder {
            g,
            plan: self,
            map: vec![usize::MAX; self.f_n],
            used: 0,
        };
        for (&v, &w) in self.prefix.iter().zip(images) {
            emb.map[v] = w;
            emb.used |= 1 << w;
        }
        emb.run(0).then_some(emb.map)
    }
}

/// Backtracking embedding of `F` into the edge set of `g`.
struct Embedder<'a> {
    g: &'a EdgeIndex,
    plan: &'a EmbedPlan,
    map: Vec<usize>,
    used: u64,
}

impl Embedder<'_> {
    fn image(&self, e: u64) -> u64 {
        mask_vertices(e).fold(0u64, |m, v| m | (1 << self.map[v]))
    }

    fn edges_ok(&self, pos: usize) -> bool {
        self.plan.checks[pos].iter().all(|&e| self.g.has(self.image(e)))
    }

    fn run(&mut self, pos: usize) -> bool {
        let plan = self.plan;
        if pos == plan.order.len() {
            return true;
        }
        let v = plan.order[pos];
        if self.map[v] != usize::MAX {
            return self.edges_ok(pos) && self.run(pos + 1);
        }
        let mut cand = all_vertices(self.g.n) & !self.used;
        for u in mask_vertices(plan.f_adj[v]) {
            if self.map[u] != usize::MAX {
                cand &= self.g.adj[self.map[u]];
            }
        }
        for w in mask_vertices(cand) {
            if self.g.deg[w] < plan.f_deg[v] {
                continue;
            }
            self.map[v] = w;
            self.used |= 1 << w;
            if self.edges_ok(pos) && self.run(pos + 1) {
                return true;
            }
            self.used &= !(1 << w);
            self.map[v] = usize::MAX;
            if plan.f_deg[v] == 0 {
                // Isolated vertices are interchangeable targets.
                break;
            }
        }
        false
    }
}

fn subgraph_in(idx: &EdgeIndex, f: &Hypergraph) -> Option<Vec<usize>> {
    let plan = EmbedPlan::new(f, &[]);
    if !plan.fits(idx) {
        return None;
    }
    plan.embed(idx, &[])
}

/// One plan per `F`-edge, with that edge's vertices placed first.
fn rooted_plans(f: &Hypergraph) -> Vec<EmbedPlan> {
    f.masks()
        .iter()
        .map(|&fe| EmbedPlan::new(f, &mask_vertices(fe).collect::<Vec<_>>()))
        .collect()
}

/// Embedding of `F` that maps some `F`-edge onto `e`.
fn subgraph_through(idx: &EdgeIndex, plans: &[EmbedPlan], e: u64) -> bool {
    if plans.first().is_some_and(|p| !p.fits(idx)) {
        return false;
    }
    let targets: Vec<usize> = mask_vertices(e).collect();
    let mut images = targets.clone();
    for plan in plans {
        let mut perm: Vec<usize> = (0..targets.len()).collect();
        loop {
            for (slot, &i) in images.iter_mut().zip(&perm) {
                *slot = targets[i];
            }
            if plan.embed(idx, &images).is_some() {
                return true;
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    false
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Injective vertex map `F -> G` carrying every `F`-edge onto a `G`-edge.
pub fn contains_subgraph(g: &Hypergraph, f: &Hypergraph) -> Option<Vec<usize>> {
    subgraph_in(&EdgeIndex::from_graph(g), f)
}

pub fn is_free(g: &Hypergraph, p: &ForbiddenPattern) -> bool {
    let idx = EdgeIndex::from_graph(g);
    free_in(&idx, p)
}

pub(crate) fn free_in(idx: &EdgeIndex, p: &ForbiddenPattern) -> bool {
    match &p.kind {
        PatternKind::CoreFamily(l) => *l > idx.n || core_family_in(idx, *l).is_none(),
        PatternKind::Expansion(l) => expansion_in(idx, *l, None).is_none(),
        PatternKind::Explicit(f) => subgraph_in(idx, f).is_none(),
        PatternKind::Conjunction(ms) => ms.iter().all(|m| free_in(idx, m)),
    }
}

/// A pattern with its embedding plans prepared, for repeated incremental checks.
#[derive(Clone, Debug)]
pub(crate) enum Checker {
    CoreFamily(usize),
    Expansion(usize),
    /// `F` with no edges: only its vertex count matters.
    Edgeless(usize),
    Explicit(Vec<EmbedPlan>),
    All(Vec<Checker>),
}

impl Checker {
    pub(crate) fn new(p: &ForbiddenPattern) -> Self {
        match &p.kind {
            PatternKind::CoreFamily(l) => Checker::CoreFamily(*l),
            PatternKind::Expansion(l) => Checker::Expansion(*l),
            PatternKind::Explicit(f) if f.edge_count() == 0 => Checker::Edgeless(f.n()),
            PatternKind::Explicit(f) => Checker::Explicit(rooted_plans(f)),
            PatternKind::Conjunction(ms) => Checker::All(ms.iter().map(Checker::new).collect()),
        }
    }

    /// Whether the last edge `e` pushed onto `idx` creates a forbidden
    /// structure. The graph without `e` must be free.
    pub(crate) fn violated_through(&self, idx: &EdgeIndex, e: u64) -> bool {
        match self {
            Checker::CoreFamily(l) => *l <= idx.n && core_family_through(idx, *l, e),
            Checker::Expansion(l) => expansion_in(idx, *l, Some(e)).is_some(),
            Checker::Edgeless(m) => *m <= idx.n,
            Checker::Explicit(plans) => subgraph_through(idx, plans, e),
            Checker::All(cs) => cs.iter().any(|c| c.violated_through(idx, e)),
        }
    }
}

/// Whether the last edge `e` pushed onto `idx` creates a forbidden structure.
/// The graph without `e` must be `p`-free.
#[cfg(test)]
pub(crate) fn violated_through(idx: &EdgeIndex, p: &ForbiddenPattern, e: u64) -> bool {
    Checker::new(p).violated_through(idx, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{blowup, complete_hypergraph, expansion, turan_hypergraph};
    use crate::hypergraph::hg;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn star() -> Hypergraph {
        hg(3, 5, &[[0, 1, 4], [0, 2, 4], [0, 3, 4], [1, 2, 4], [1, 3, 4], [2, 3, 4]])
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Hypergraph {
        Hypergraph::from_masks(3, n, k_subsets(n, 3).into_iter().filter(|_| rng.gen_bool(p))).unwrap()
    }

    #[test]
    fn core_family_examples() {
        let k4 = complete_hypergraph(4, 3).unwrap();
        let w = contains_core_family(&k4, 4).unwrap();
        assert_eq!(w.core, vec![0, 1, 2, 3]);
        assert!(w.validate(&k4));
        assert!(contains_core_family(&turan_hypergraph(8, 3, 3).unwrap(), 4).is_none());
        let w = contains_core_family(&star(), 4).unwrap();
        assert_eq!(w.core, vec![0, 1, 2, 3]);
        assert!(w.validate(&star()));
        assert!(!w.disjoint);
    }

    #[test]
    fn expansion_examples() {
        for (l, k) in [(3, 3), (4, 3), (3, 4), (2, 5)] {
            let h = expansion(l, k).unwrap();
            let w = contains_expansion(&h, l).expect("identity embedding");
            assert!(w.disjoint && w.validate(&h));
        }
        assert!(contains_expansion(&turan_hypergraph(8, 3, 3).unwrap(), 4).is_none());
        assert!(contains_expansion(&star(), 4).is_none());
    }

    #[test]
    fn subgraph_examples() {
        let t9 = turan_hypergraph(9, 3, 3).unwrap();
        let single = hg(3, 3, &[[0, 1, 2]]);
        assert!(contains_subgraph(&t9, &single).is_some());
        assert!(contains_subgraph(&Hypergraph::empty(3, 9).unwrap(), &single).is_none());
        assert!(contains_subgraph(&t9, &complete_hypergraph(4, 3).unwrap()).is_none());
        let f = hg(3, 5, &[[0, 1, 2], [1, 2, 3], [0, 3, 4]]);
        let b = blowup(&f, 2).unwrap();
        let map = contains_subgraph(&b, &f).unwrap();
        for e in f.edge_tuples() {
            let img: Vec<usize> = e.iter().map(|&v| map[v]).collect();
            assert!(b.contains_edge(mask_from_vertices(&img)));
        }
    }

    #[test]
    fn is_free_examples() {
        let k3 = 3;
        let core4 = ForbiddenPattern::core_family(k3, 4).unwrap();
        assert!(is_free(&Hypergraph::empty(3, 6).unwrap(), &core4));
        assert!(is_free(&turan_hypergraph(7, 3, 3).unwrap(), &core4));
        let conj = ForbiddenPattern::conjunction(vec![
            ForbiddenPattern::expansion(3, 5).unwrap(),
            ForbiddenPattern::explicit(complete_hypergraph(4, 3).unwrap()),
        ])
        .unwrap();
        assert!(!is_free(&complete_hypergraph(5, 3).unwrap(), &conj));
    }

    #[test]
    fn pattern_parse_roundtrip() {
        for s in ["core:4", "exp:3", "all(core:4,exp:5)", "graph:3:4:0-1-2+0-1-3", "all(exp:4,graph:3:4:)"] {
            let p = ForbiddenPattern::parse(s, 3).unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!(ForbiddenPattern::parse("all()", 3).is_err());
        assert!(ForbiddenPattern::parse("core:x", 3).is_err());
        assert!(ForbiddenPattern::parse("nope:3", 3).is_err());
        assert!(ForbiddenPattern::parse("graph:4:4:0-1-2-3", 3).is_err());
        assert!(ForbiddenPattern::conjunction(vec![
            ForbiddenPattern::core_family(3, 4).unwrap(),
            ForbiddenPattern::core_family(4, 4).unwrap()
        ])
        .is_err());
    }

    #[test]
    fn expansion_implies_core_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.gen_range(5..=8);
            let p = rng.gen_range(0.1..0.8);
            let g = random_graph(&mut rng, n, p);
            for l in 2..=4 {
                if contains_expansion(&g, l).is_some() {
                    assert!(contains_core_family(&g, l).is_some());
                }
            }
        }
    }

    #[test]
    fn witnesses_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.gen_range(4..=9);
            let p = rng.gen_range(0.1..0.7);
            let g = random_graph(&mut rng, n, p);
            for l in 2..=4 {
                if let Some(w) = contains_core_family(&g, l) {
                    assert!(w.validate(&g));
                }
                if let Some(w) = contains_expansion(&g, l) {
                    assert!(w.validate(&g) && w.disjoint);
                    assert_eq!(w.core.len(), l);
                }
            }
        }
    }

    #[test]
    fn relabeling_and_deletion_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let patterns = [
            ForbiddenPattern::core_family(3, 4).unwrap(),
            ForbiddenPattern::expansion(3, 3).unwrap(),
            ForbiddenPattern::explicit(complete_hypergraph(4, 3).unwrap()),
        ];
        for _ in 0..200 {
            let n = rng.gen_range(5..=8);
            let p = rng.gen_range(0.1..0.6);
            let g = random_graph(&mut rng, n, p);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = g.relabel(&perm);
            let mut sub: Vec<u64> = g.masks().to_vec();
            sub.retain(|_| rng.gen_bool(0.7));
            let sub = Hypergraph::from_masks(3, n, sub).unwrap();
            for p in &patterns {
                assert_eq!(is_free(&g, p), is_free(&h, p));
                if is_free(&g, p) {
                    assert!(is_free(&sub, p));
                }
            }
        }
    }

    #[test]
    fn incremental_check_matches_full_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let patterns = [
            ForbiddenPattern::core_family(3, 4).unwrap(),
            ForbiddenPattern::core_family(3, 3).unwrap(),
            ForbiddenPattern::expansion(3, 3).unwrap(),
            ForbiddenPattern::explicit(complete_hypergraph(4, 3).unwrap()),
            ForbiddenPattern::explicit(hg(3, 5, &[[0, 1, 2], [2, 3, 4]])),
        ];
        for p in &patterns {
            for _ in 0..40 {
                let n = rng.gen_range(5..=8);
                let mut subsets = k_subsets(n, 3);
                subsets.shuffle(&mut rng);
                let mut idx = EdgeIndex::new(3, n);
                for e in subsets {
                    idx.push(e);
                    let through = violated_through(&idx, p, e);
                    assert_eq!(through, !free_in(&idx, p), "pattern {p}");
                    if through {
                        idx.pop();
                    }
                }
            }
        }
    }
}
