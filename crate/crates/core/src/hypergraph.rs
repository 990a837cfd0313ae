//! Value-semantic k-uniform hypergraphs over dense vertex labels `0..n`.
//!
//! Edges are stored as 64-bit vertex masks, so the vertex count is capped at
//! [`MAX_VERTICES`]. Because the numeric order of masks coincides with the
//! colex order of the underlying sets, keeping the mask vector sorted gives
//! the canonical colex iteration order for free.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Signed-argument binomial with `C(n, k) = 0` for negative `k`.
pub fn binomial_i(n: usize, k: i64) -> u64 {
    if k < 0 {
        0
    } else {
        binomial(n, k as usize)
    }
}

/// Iterates the vertices of a mask in increasing order.
pub fn mask_vertices(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

pub fn mask_from_vertices(vs: &[usize]) -> u64 {
    vs.iter().fold(0u64, |m, &v| m | (1u64 << v))
}

/// All `k`-subsets of `0..n` as masks, in colex order.
pub fn k_subsets(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if k > n || n > MAX_VERTICES {
        return out;
    }
    if k == 0 {
        out.push(0);
        return out;
    }
    let limit: u128 = 1u128 << n;
    let mut s: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    loop {
        out.push(s);
        // Gosper's hack, widened to avoid overflow at n = 64.
        let c = s & s.wrapping_neg();
        let r = s as u128 + c as u128;
        if r >= limit {
            break;
        }
        let r64 = r as u64;
        s = (((r64 ^ s) >> 2) / c) | r64;
    }
    out
}

/// Position of a `k`-set among all `k`-subsets in colex order.
pub fn colex_rank(mask: u64) -> u64 {
    mask_vertices(mask)
        .enumerate()
        .map(|(i, v)| binomial(v, i + 1))
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    k: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Serialize for Hypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HypergraphJson {
            k: self.k,
            n: self.n,
            edges: self.edge_tuples().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = HypergraphJson::deserialize(d)?;
        Hypergraph::new(raw.k, raw.n, &raw.edges).map_err(serde::de::Error::custom)
    }
}

impl Hypergraph {
    /// Builds a normalized hypergraph; edges may be given in any vertex order.
    pub fn new<E: AsRef<[usize]>>(k: usize, n: usize, edges: &[E]) -> Result<Self> {
        check_shape(k, n)?;
        let mut masks = Vec::with_capacity(edges.len());
        for e in edges {
            let e = e.as_ref();
            let bad = |reason: &str| Error::InvalidEdge {
                edge: e.to_vec(),
                reason: reason.to_string(),
            };
            if e.len() != k {
                return Err(bad(&format!("expected {k} vertices, got {}", e.len())));
            }
            let mut mask = 0u64;
            for &v in e {
                if v >= n {
                    return Err(bad(&format!("vertex {v} out of range 0..{n}")));
                }
                if mask & (1 << v) != 0 {
                    return Err(bad(&format!("vertex {v} repeated")));
                }
                mask |= 1 << v;
            }
            masks.push(mask);
        }
        masks.sort_unstable();
        masks.dedup();
        Ok(Hypergraph { k, n, edges: masks })
    }

    pub fn empty(k: usize, n: usize) -> Result<Self> {
        check_shape(k, n)?;
        Ok(Hypergraph {
            k,
            n,
            edges: Vec::new(),
        })
    }

    /// Builds from vertex masks, validating arity and range.
    pub fn from_masks(k: usize, n: usize, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        check_shape(k, n)?;
        let range = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut edges: Vec<u64> = masks.into_iter().collect();
        for &m in &edges {
            if m.count_ones() as usize != k || m & !range != 0 {
                return Err(Error::InvalidEdge {
                    edge: mask_vertices(m).collect(),
                    reason: format!("not a {k}-subset of 0..{n}"),
                });
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Hypergraph { k, n, edges })
    }

    /// Caller guarantees the masks are valid `k`-subsets of `0..n`.
    pub(crate) fn from_masks_unchecked(k: usize, n: usize, mut edges: Vec<u64>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Hypergraph { k, n, edges }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edge masks in colex order.
    pub fn masks(&self) -> &[u64] {
        &self.edges
    }

    pub fn edge_tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.edges.iter().map(|&m| mask_vertices(m).collect())
    }

    pub fn contains_edge(&self, mask: u64) -> bool {
        self.edges.binary_search(&mask).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &e in &self.edges {
            for v in mask_vertices(e) {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Number of edges containing both `x` and `y`.
    pub fn codegree(&self, x: usize, y: usize) -> usize {
        let pair = (1u64 << x) | (1u64 << y);
        self.edges.iter().filter(|&&e| e & pair == pair).count()
    }

    /// Applies the vertex map `v -> perm[v]`; `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Hypergraph {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let edges = self
            .edges
            .iter()
            .map(|&e| mask_vertices(e).fold(0u64, |m, v| m | (1 << perm[v])))
            .collect();
        Hypergraph::from_masks_unchecked(self.k, self.n, edges)
    }

    pub fn with_edge(&self, mask: u64) -> Hypergraph {
        let mut edges = self.edges.clone();
        edges.push(mask);
        Hypergraph::from_masks_unchecked(self.k, self.n, edges)
    }

    pub fn without_edge(&self, mask: u64) -> Hypergraph {
        Hypergraph {
            k: self.k,
            n: self.n,
            edges: self.edges.iter().copied().filter(|&e| e != mask).collect(),
        }
    }

    /// Number of edges in the symmetric difference, same labels.
    pub fn symmetric_difference(&self, other: &Hypergraph) -> usize {
        let a: HashSet<u64> = self.edges.iter().copied().collect();
        let common = other.edges.iter().filter(|e| a.contains(e)).count();
        self.edges.len() + other.edges.len() - 2 * common
    }

    pub fn is_subgraph_of(&self, other: &Hypergraph) -> bool {
        self.edges.iter().all(|&e| other.contains_edge(e))
    }

    /// Serializes to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {} {}\n", self.k, self.n, self.edges.len());
        for e in self.edge_tuples() {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// Parses the edge-list text format: header `k n m`, then `m` edge lines.
    pub fn from_edge_list(text: &str) -> Result<Hypergraph> {
        let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
        // A single trailing newline produces one empty final chunk.
        let body: Vec<(usize, &str)> = {
            let mut v: Vec<(usize, &str)> = lines.by_ref().collect();
            if v.last().is_some_and(|(_, l)| l.is_empty()) {
                v.pop();
            }
            v
        };
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let Some(&(hline, header)) = body.first() else {
            return Err(perr(1, "missing header line".into()));
        };
        let fields = parse_ints(header).map_err(|m| perr(hline, m))?;
        let [k, n, m] = fields[..] else {
            return Err(perr(hline, format!("header needs 3 integers, got {}", fields.len())));
        };
        check_shape(k, n).map_err(|e| perr(hline, e.to_string()))?;
        let edge_lines = &body[1..];
        if edge_lines.len() != m {
            let line = body.last().map_or(hline, |(l, _)| *l);
            return Err(perr(
                line,
                format!("header declares {m} edges, found {}", edge_lines.len()),
            ));
        }
        let mut edges = Vec::with_capacity(m);
        for &(ln, text) in edge_lines {
            let vs = parse_ints(text).map_err(|msg| perr(ln, msg))?;
            if vs.len() != k {
                return Err(perr(ln, format!("expected {k} vertices, got {}", vs.len())));
            }
            if vs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(perr(ln, "vertices must be strictly increasing".into()));
            }
            if let Some(&v) = vs.iter().find(|&&v| v >= n) {
                return Err(perr(ln, format!("vertex {v} out of range 0..{n}")));
            }
            edges.push(mask_from_vertices(&vs));
        }
        Ok(Hypergraph::from_masks_unchecked(k, n, edges))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("hypergraph serializes")
    }

    pub fn from_json(text: &str) -> Result<Hypergraph> {
        Ok(serde_json::from_str(text)?)
    }
}

fn check_shape(k: usize, n: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Precondition(format!("uniformity k={k} must be at least 2")));
    }
    if n > MAX_VERTICES {
        return Err(Error::Capability(format!(
            "n={n} exceeds the {MAX_VERTICES}-vertex mask representation"
        )));
    }
    Ok(())
}

fn parse_ints(line: &str) -> std::result::Result<Vec<usize>, String> {
    if line.is_empty() {
        return Err("empty line".into());
    }
    line.split(' ')
        .map(|tok| {
            if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
                Err(format!("expected base-10 integer, got {tok:?}"))
            } else {
                tok.parse::<usize>().map_err(|e| format!("{tok:?}: {e}"))
            }
        })
        .collect()
}

/// Convenience constructor for tests and examples; panics on invalid input.
pub fn hg<E: AsRef<[usize]>>(k: usize, n: usize, edges: &[E]) -> Hypergraph {
    Hypergraph::new(k, n, edges).expect("valid hypergraph")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_on_four() {
        let g = hg(3, 4, &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.degrees(), vec![3, 3, 3, 3]);
    }

    #[test]
    fn empty_graph() {
        let g = Hypergraph::new::<[usize; 3]>(3, 5, &[]).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.n(), 5);
    }

    #[test]
    fn rejects_repeated_vertex() {
        let err = Hypergraph::new(3, 3, &[[0, 1, 1]]).unwrap_err();
        assert!(matches!(err, Error::InvalidEdge { ref edge, .. } if edge == &vec![0, 1, 1]));
    }

    #[test]
    fn rejects_out_of_range_and_arity() {
        assert!(Hypergraph::new(3, 3, &[vec![0, 1, 3]]).is_err());
        assert!(Hypergraph::new(3, 5, &[vec![0, 1]]).is_err());
        assert!(Hypergraph::new(1, 5, &[vec![0]]).is_err());
    }

    #[test]
    fn normalizes_order_and_duplicates() {
        let g = hg(3, 5, &[[2, 1, 0], [0, 1, 2], [4, 3, 0]]);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edge_tuples().collect::<Vec<_>>(), vec![vec![0, 1, 2], vec![0, 3, 4]]);
    }

    #[test]
    fn colex_enumeration_and_rank() {
        let subs = k_subsets(5, 3);
        assert_eq!(subs.len(), 10);
        for (i, &s) in subs.iter().enumerate() {
            assert_eq!(colex_rank(s), i as u64);
        }
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(k_subsets(64, 64).len(), 1);
        assert_eq!(k_subsets(64, 1).len(), 64);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(12, 3), 220);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial_i(7, 0), 1);
        assert_eq!(binomial_i(7, -1), 0);
    }

    #[test]
    fn parse_single_edge() {
        let g = Hypergraph::from_edge_list("3 4 1\n0 1 2\n").unwrap();
        assert_eq!((g.k(), g.n(), g.edge_count()), (3, 4, 1));
    }

    #[test]
    fn parse_count_mismatch_reports_line() {
        let err = Hypergraph::from_edge_list("3 4 2\n0 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = Hypergraph::from_edge_list("3 4 1\n0 1 2\n0 1 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn parse_rejects_malformed_lines() {
        assert!(matches!(
            Hypergraph::from_edge_list("3 4\n").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
        assert!(matches!(
            Hypergraph::from_edge_list("3 4 1\n0 2 1\n").unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(
            Hypergraph::from_edge_list("3 4 1\n0  1 2\n").unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(
            Hypergraph::from_edge_list("3 4 1\n0 1 9\n").unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
        assert!(Hypergraph::from_edge_list("").is_err());
    }

    #[test]
    fn json_shape() {
        let g = hg(3, 4, &[[0, 1, 2]]);
        assert_eq!(g.to_json(), r#"{"k":3,"n":4,"edges":[[0,1,2]]}"#);
        assert_eq!(Hypergraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn relabel_and_difference() {
        let g = hg(3, 4, &[[0, 1, 2], [0, 1, 3]]);
        let h = g.relabel(&[3, 2, 1, 0]);
        assert_eq!(h.edge_tuples().collect::<Vec<_>>(), vec![vec![0, 2, 3], vec![1, 2, 3]]);
        assert_eq!(g.symmetric_difference(&h), 4);
        assert_eq!(g.symmetric_difference(&g), 0);
    }
}
