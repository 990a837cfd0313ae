//! Canonical forms and isomorphism testing.
//!
//! The canonical key is the lexicographically largest edge-indicator bit
//! string (colex-ordered k-subsets) over all vertex relabelings that respect
//! an isomorphism-invariant ordered colour partition. Equivalently it is the
//! lexicographically smallest sorted list of relabeled edge masks, which is
//! what the search compares. Vertices that are twins (their transposition is
//! an automorphism) generate identical subtrees, so only one twin is branched
//! on per node.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freeness;
use crate::hypergraph::{binomial, colex_rank, mask_vertices, Hypergraph};

/// Largest vertex count for which canonical forms are computed exactly.
pub const EXACT_CANON_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalForm {
    pub k: usize,
    pub n: usize,
    pub edge_count: usize,
    /// Indicator vector over colex-ranked k-subsets, packed little-endian in words.
    pub bits: Vec<u64>,
}

impl CanonicalForm {
    pub fn to_hex(&self) -> String {
        self.bits.iter().rev().map(|w| format!("{w:016x}")).collect()
    }
}

pub fn canonical_form(g: &Hypergraph) -> Result<CanonicalForm> {
    canonical_labeling(g).map(|(c, _)| c)
}

/// Returns the canonical form and a permutation `perm` with
/// `g.relabel(&perm)` equal to the canonical representative.
pub fn canonical_labeling(g: &Hypergraph) -> Result<(CanonicalForm, Vec<usize>)> {
    canonical_labeling_with_limit(g, EXACT_CANON_LIMIT)
}

pub fn canonical_labeling_with_limit(
    g: &Hypergraph,
    limit: usize,
) -> Result<(CanonicalForm, Vec<usize>)> {
    if g.n() > limit {
        return Err(Error::Capability(format!(
            "isomorphism not certified: n={} exceeds exact canonical limit {limit}",
            g.n()
        )));
    }
    let (masks, perm) = minimal_relabeling(g);
    let width = binomial(g.n(), g.k()) as usize;
    let mut bits = vec![0u64; width.div_ceil(64)];
    for &m in &masks {
        let r = colex_rank(m) as usize;
        bits[r / 64] |= 1u64 << (r % 64);
    }
    let form = CanonicalForm {
        k: g.k(),
        n: g.n(),
        edge_count: g.edge_count(),
        bits,
    };
    Ok((form, perm))
}

/// The canonical representative itself.
pub fn canonical_graph(g: &Hypergraph) -> Result<Hypergraph> {
    let (_, perm) = canonical_labeling(g)?;
    Ok(g.relabel(&perm))
}

pub fn are_isomorphic(g: &Hypergraph, h: &Hypergraph) -> bool {
    if g.k() != h.k() || g.n() != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    match (canonical_form(g), canonical_form(h)) {
        (Ok(a), Ok(b)) => a == b,
        // Beyond the canonical limit an injective embedding between graphs of
        // equal order and size is an isomorphism.
        _ => freeness::contains_subgraph(h, g).is_some(),
    }
}

/// Iteratively refined vertex colours; equal colour classes are unions of orbits.
pub(crate) fn refined_colors(g: &Hypergraph) -> Vec<u32> {
    let n = g.n();
    let mut colors: Vec<u32> = g.degrees().iter().map(|&d| d as u32).collect();
    let mut classes = count_classes(&colors);
    let incident = incidence(g);
    loop {
        let sigs: Vec<(u32, Vec<Vec<u32>>)> = (0..n)
            .map(|v| {
                let mut per_edge: Vec<Vec<u32>> = incident[v]
                    .iter()
                    .map(|&e| {
                        let mut cs: Vec<u32> = mask_vertices(e & !(1 << v)).map(|u| colors[u]).collect();
                        cs.sort_unstable();
                        cs
                    })
                    .collect();
                per_edge.sort_unstable();
                (colors[v], per_edge)
            })
            .collect();
        let mut distinct: Vec<&(u32, Vec<Vec<u32>>)> = sigs.iter().collect();
        distinct.sort();
        distinct.dedup();
        let next: Vec<u32> = sigs
            .iter()
            .map(|s| distinct.binary_search(&s).expect("present") as u32)
            .collect();
        let next_classes = count_classes(&next);
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn count_classes(colors: &[u32]) -> usize {
    colors.iter().collect::<HashSet<_>>().len()
}

fn incidence(g: &Hypergraph) -> Vec<Vec<u64>> {
    let mut inc = vec![Vec::new(); g.n()];
    for &e in g.masks() {
        for v in mask_vertices(e) {
            inc[v].push(e);
        }
    }
    inc
}

/// `twins[u]` is the mask of vertices `v` with `(u v)` an automorphism.
fn twin_masks(g: &Hypergraph) -> Vec<u64> {
    let n = g.n();
    let set: HashSet<u64> = g.masks().iter().copied().collect();
    let inc = incidence(g);
    let mut twins = vec![0u64; n];
    for u in 0..n {
        twins[u] |= 1 << u;
        for v in (u + 1)..n {
            if inc[u].len() != inc[v].len() {
                continue;
            }
            let (bu, bv) = (1u64 << u, 1u64 << v);
            let swaps = |from: &Vec<u64>, a: u64, b: u64| {
                from.iter()
                    .filter(|&&e| e & b == 0)
                    .all(|&e| set.contains(&((e & !a) | b)))
            };
            if swaps(&inc[u], bu, bv) && swaps(&inc[v], bv, bu) {
                twins[u] |= bv;
                twins[v] |= bu;
            }
        }
    }
    twins
}

struct CanonSearch<'a> {
    n: usize,
    cell_color: Vec<u32>,
    colors: Vec<u32>,
    twins: Vec<u64>,
    incident: &'a [Vec<u64>],
    label: Vec<usize>,
    labeled: u64,
    current: Vec<u64>,
    best: Option<(Vec<u64>, Vec<usize>)>,
}

impl CanonSearch<'_> {
    fn compare_prefix(&self, depth: usize) -> Ordering {
        let Some((best, _)) = &self.best else {
            return Ordering::Less;
        };
        let bound = if depth + 1 >= 64 { u64::MAX } else { 1u64 << (depth + 1) };
        let q = best.partition_point(|&m| m < bound);
        let p = self.current.len();
        let common = p.min(q);
        match self.current[..common].cmp(&best[..common]) {
            Ordering::Equal => q.cmp(&p),
            other => other,
        }
    }

    fn run(&mut self, depth: usize) {
        if depth == self.n {
            let better = match &self.best {
                None => true,
                Some((b, _)) => self.current < *b,
            };
            if better {
                self.best = Some((self.current.clone(), self.label.clone()));
            }
            return;
        }
        let want = self.cell_color[depth];
        let mut tried: u64 = 0;
        for v in 0..self.n {
            if self.labeled & (1 << v) != 0 || self.colors[v] != want {
                continue;
            }
            if self.twins[v] & tried != 0 {
                continue;
            }
            tried |= 1 << v;
            self.label[v] = depth;
            self.labeled |= 1 << v;
            let before = self.current.len();
            let mut fresh: Vec<u64> = self.incident[v]
                .iter()
                .filter(|&&e| e & !self.labeled == 0)
                .map(|&e| mask_vertices(e).fold(0u64, |m, u| m | (1 << self.label[u])))
                .collect();
            fresh.sort_unstable();
            self.current.extend(fresh);
            if self.compare_prefix(depth) != Ordering::Greater {
                self.run(depth + 1);
            }
            self.current.truncate(before);
            self.labeled &= !(1 << v);
        }
    }
}

fn minimal_relabeling(g: &Hypergraph) -> (Vec<u64>, Vec<usize>) {
    let n = g.n();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let colors = refined_colors(g);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| colors[v]);
    let cell_color = order.iter().map(|&v| colors[v]).collect();
    let incident = incidence(g);
    let mut search = CanonSearch {
        n,
        cell_color,
        colors,
        twins: twin_masks(g),
        incident: &incident,
        label: vec![0; n],
        labeled: 0,
        current: Vec::with_capacity(g.edge_count()),
        best: None,
    };
    search.run(0);
    search.best.expect("at least one labeling")
}
