//! Slow, obviously-correct reference implementations used as oracles.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use turan_core::constructions::expansion;
use turan_core::hypergraph::{k_subsets, mask_vertices};
use turan_core::Hypergraph;

pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    k_subsets(n, k).into_iter().map(|m| mask_vertices(m).collect()).collect()
}

/// Some `l`-set has every pair inside a common edge.
pub fn naive_core_family(g: &Hypergraph, l: usize) -> bool {
    if l > g.n() {
        return false;
    }
    let edges: Vec<Vec<usize>> = g.edge_tuples().collect();
    subsets_of_size(g.n(), l).iter().any(|core| {
        core.iter().enumerate().all(|(i, &a)| {
            core[i + 1..]
                .iter()
                .all(|&b| edges.iter().any(|e| e.contains(&a) && e.contains(&b)))
        })
    })
}

/// Calls `f` on every injective map `0..m -> 0..n` until it returns true.
pub fn any_injection(m: usize, n: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(m: usize, n: usize, map: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if map.len() == m {
            return f(map);
        }
        for w in 0..n {
            if !used[w] {
                used[w] = true;
                map.push(w);
                if rec(m, n, map, used, f) {
                    return true;
                }
                map.pop();
                used[w] = false;
            }
        }
        false
    }
    m <= n && rec(m, n, &mut Vec::new(), &mut vec![false; n], f)
}

/// Some injection of `F` carries every edge of `F` onto an edge of `G`.
pub fn naive_subgraph(g: &Hypergraph, f: &Hypergraph) -> bool {
    let fe: Vec<Vec<usize>> = f.edge_tuples().collect();
    any_injection(f.n(), g.n(), &mut |map| {
        fe.iter().all(|e| {
            let m = e.iter().fold(0u64, |acc, &v| acc | 1 << map[v]);
            g.contains_edge(m)
        })
    })
}

pub fn naive_expansion(g: &Hypergraph, l: usize) -> bool {
    naive_subgraph(g, &expansion(l, g.k()).unwrap())
}

pub fn random_graph(rng: &mut ChaCha8Rng, k: usize, n: usize, p: f64) -> Hypergraph {
    Hypergraph::from_masks(k, n, k_subsets(n, k).into_iter().filter(|_| rng.gen_bool(p))).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every `k`-graph on `n` vertices, as edge masks chosen by the bits of a counter.
pub fn all_graphs(k: usize, n: usize) -> impl Iterator<Item = Hypergraph> {
    let slots = k_subsets(n, k);
    assert!(slots.len() <= 20, "too many graphs to enumerate");
    (0u32..1 << slots.len()).map(move |bits| {
        let edges = slots.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &m)| m);
        Hypergraph::from_masks(k, n, edges).unwrap()
    })
}

/// Maximum number of `k`-cliques over `K_l`-free 2-graphs on `n` vertices.
/// Equals `ex(n, core:l)` because a `k`-graph avoids the core family exactly
/// when its covered-pair graph has no `l`-clique.
pub fn shadow_oracle(n: usize, k: usize, l: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let ksets = k_subsets(n, k);
    let lsets = k_subsets(n, l);
    let mut best = 0;
    for bits in 0u64..1 << pairs.len() {
        let mut adj = vec![0u64; n];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if bits >> i & 1 == 1 {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
        let is_clique = |s: u64| mask_vertices(s).all(|v| (s & !(1 << v)) & !adj[v] == 0);
        if lsets.iter().any(|&s| is_clique(s)) {
            continue;
        }
        best = best.max(ksets.iter().filter(|&&s| is_clique(s)).count());
    }
    best
}
