//! Builders for the named objects: Turán hypergraphs, expansions of complete
//! 2-graphs, complete k-graphs and blowups.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{k_subsets, mask_vertices, Hypergraph, MAX_VERTICES};

/// Ordered part sizes of a vertex partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartSizes(Vec<usize>);

impl PartSizes {
    /// `l` parts of sizes `⌈n/l⌉` and `⌊n/l⌋`, larger parts first.
    pub fn almost_equal(n: usize, l: usize) -> Result<PartSizes> {
        if l == 0 || l > n {
            return Err(Error::Precondition(format!("need 1 <= l <= n, got l={l}, n={n}")));
        }
        let (q, r) = (n / l, n % l);
        Ok(PartSizes((0..l).map(|i| if i < r { q + 1 } else { q }).collect()))
    }

    pub fn from_sizes(sizes: Vec<usize>) -> PartSizes {
        PartSizes(sizes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Edge count of the complete partite k-graph on these parts: the
    /// elementary symmetric polynomial `e_k` of the sizes.
    pub fn partite_edge_count(&self, k: usize) -> u64 {
        let mut dp = vec![0u64; k + 1];
        dp[0] = 1;
        for &s in &self.0 {
            for j in (1..=k).rev() {
                dp[j] = dp[j].saturating_add(dp[j - 1].saturating_mul(s as u64));
            }
        }
        dp[k]
    }
}

fn check_turan_args(n: usize, l: usize, k: usize) -> Result<()> {
    if k < 2 || l < k || n < l {
        return Err(Error::Precondition(format!(
            "Turán construction needs n >= l >= k >= 2, got n={n}, l={l}, k={k}"
        )));
    }
    if n > MAX_VERTICES {
        return Err(Error::Capability(format!("n={n} exceeds {MAX_VERTICES} vertices")));
    }
    Ok(())
}

/// Vertex masks of the parts of the almost-equal partition, contiguous ranges.
pub fn turan_part_masks(n: usize, l: usize) -> Result<Vec<u64>> {
    let sizes = PartSizes::almost_equal(n, l)?;
    let mut start = 0;
    Ok(sizes
        .sizes()
        .iter()
        .map(|&s| {
            let m = ((1u64 << s) - 1) << start;
            start += s;
            m
        })
        .collect())
}

/// Complete `l`-partite `k`-graph on `n` vertices with almost-equal parts.
pub fn turan_hypergraph(n: usize, l: usize, k: usize) -> Result<Hypergraph> {
    check_turan_args(n, l, k)?;
    let parts = turan_part_masks(n, l)?;
    Ok(complete_partite(n, k, &parts))
}

/// All `k`-subsets of `0..n` meeting every part in at most one vertex.
pub(crate) fn complete_partite(n: usize, k: usize, parts: &[u64]) -> Hypergraph {
    let mut part_of = vec![usize::MAX; n];
    for (i, &p) in parts.iter().enumerate() {
        for v in mask_vertices(p) {
            part_of[v] = i;
        }
    }
    let mut edges = Vec::new();
    // Choose parts in increasing order, one vertex from each.
    fn rec(parts: &[u64], k: usize, from: usize, acc: u64, depth: usize, out: &mut Vec<u64>) {
        if depth == k {
            out.push(acc);
            return;
        }
        for i in from..parts.len() {
            if parts.len() - i < k - depth {
                break;
            }
            for v in mask_vertices(parts[i]) {
                rec(parts, k, i + 1, acc | (1 << v), depth + 1, out);
            }
        }
    }
    rec(parts, k, 0, 0, 0, &mut edges);
    Hypergraph::from_masks_unchecked(k, n, edges)
}

pub fn turan_count(n: usize, l: usize, k: usize) -> Result<u64> {
    check_turan_args(n, l, k)?;
    Ok(PartSizes::almost_equal(n, l)?.partite_edge_count(k))
}

/// Number of vertices of the expansion of `K_l`: `l + (k-2)·C(l,2)`.
pub fn expansion_order(l: usize, k: usize) -> usize {
    l + (k - 2) * (l * (l - 1) / 2)
}

/// The expansion of the complete 2-graph `K_l` into a `k`-graph: each core
/// pair gets its own `k-2` fresh vertices. Core vertices are `0..l`; the
/// fresh vertices are handed out in colex order of the core pairs.
pub fn expansion(l: usize, k: usize) -> Result<Hypergraph> {
    if l < 2 || k < 3 {
        return Err(Error::Precondition(format!("expansion needs l >= 2, k >= 3, got l={l}, k={k}")));
    }
    let order = expansion_order(l, k);
    if order > MAX_VERTICES {
        return Err(Error::Capability(format!("expansion has {order} vertices")));
    }
    let mut next = l;
    let mut edges = Vec::new();
    for pair in k_subsets(l, 2) {
        let mut mask = pair;
        for _ in 0..k - 2 {
            mask |= 1 << next;
            next += 1;
        }
        edges.push(mask);
    }
    Ok(Hypergraph::from_masks_unchecked(k, order, edges))
}

pub fn complete_hypergraph(m: usize, k: usize) -> Result<Hypergraph> {
    if k < 2 || m < k {
        return Err(Error::Precondition(format!("complete k-graph needs m >= k >= 2, got m={m}, k={k}")));
    }
    if m > MAX_VERTICES {
        return Err(Error::Capability(format!("m={m} exceeds {MAX_VERTICES} vertices")));
    }
    Ok(Hypergraph::from_masks_unchecked(k, m, k_subsets(m, k)))
}

/// The `t`-blowup: vertex `x` becomes the class `x·t .. x·t + t`, and each
/// edge becomes the complete k-partite k-graph on its classes.
pub fn blowup(f: &Hypergraph, t: usize) -> Result<Hypergraph> {
    if t == 0 {
        return Err(Error::Precondition("blowup factor t must be at least 1".into()));
    }
    let n = f.n() * t;
    if n > MAX_VERTICES {
        return Err(Error::Capability(format!("blowup has {n} vertices")));
    }
    let class = |x: usize| (((1u128 << t) - 1) as u64) << (x * t);
    let edges: Vec<u64> = f
        .masks()
        .iter()
        .flat_map(|&e| {
            let classes: Vec<u64> = mask_vertices(e).map(class).collect();
            complete_partite(n, f.k(), &classes).masks().to_vec()
        })
        .collect();
    Ok(Hypergraph::from_masks_unchecked(f.k(), n, edges))
}
