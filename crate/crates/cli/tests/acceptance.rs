//! Acceptance suite: one PASS/FAIL line per criterion. All tolerances are
//! exact (integer or rational equality, zero mismatches).

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use turan_core::constructions::{blowup, expansion, turan_count, turan_hypergraph};
use turan_core::freeness::{contains_core_family, contains_expansion, is_free};
use turan_core::hypergraph::{binomial, k_subsets, mask_vertices};
use turan_core::search::{verify_mubayi, ExtremalSolver, SearchOptions};
use turan_core::stability::{
    closeness_to_turan, edit_distance, max_f_partition, near_extremal_spectrum, ClosenessMode, DistanceMode,
    VertexPartition,
};
use turan_core::{are_isomorphic, ForbiddenPattern, Hypergraph};

type Check = std::result::Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_graph(rng: &mut ChaCha8Rng, k: usize, n: usize) -> Hypergraph {
    let p: f64 = rng.gen_range(0.15..0.85);
    Hypergraph::from_masks(k, n, k_subsets(n, k).into_iter().filter(|_| rng.gen_bool(p))).unwrap()
}

/// `e_k` of the almost-equal part sizes, by direct enumeration of k-sets.
fn turan_oracle(n: usize, l: usize, k: usize) -> usize {
    let part = |v: usize| {
        let (q, r) = (n / l, n % l);
        let big = r * (q + 1);
        if v < big {
            v / (q + 1)
        } else {
            r + (v - big) / q
        }
    };
    k_subsets(n, k)
        .into_iter()
        .filter(|&s| {
            let parts: Vec<usize> = mask_vertices(s).map(part).collect();
            (0..parts.len()).all(|i| (i + 1..parts.len()).all(|j| parts[i] != parts[j]))
        })
        .count()
}

fn naive_core_family(g: &Hypergraph, l: usize) -> bool {
    if l > g.n() {
        return false;
    }
    let covered = |a: usize, b: usize| g.masks().iter().any(|&e| e >> a & 1 == 1 && e >> b & 1 == 1);
    k_subsets(g.n(), l).into_iter().any(|core| {
        let vs: Vec<usize> = mask_vertices(core).collect();
        (0..vs.len()).all(|i| (i + 1..vs.len()).all(|j| covered(vs[i], vs[j])))
    })
}

fn injections(m: usize, n: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(m: usize, n: usize, map: &mut Vec<usize>, used: u64, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if map.len() == m {
            return f(map);
        }
        for w in 0..n {
            if used >> w & 1 == 0 {
                map.push(w);
                if rec(m, n, map, used | 1 << w, f) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    m <= n && rec(m, n, &mut Vec::new(), 0, f)
}

fn naive_expansion(g: &Hypergraph, l: usize) -> bool {
    let h = expansion(l, g.k()).unwrap();
    injections(h.n(), g.n(), &mut |map| {
        h.masks()
            .iter()
            .all(|&e| g.contains_edge(mask_vertices(e).fold(0u64, |acc, v| acc | 1 << map[v])))
    })
}

fn c1_mubayi() -> Check {
    let mut solver = ExtremalSolver::new(SearchOptions::enumerating());
    let mut checked = 0;
    for (k, l, n_max) in [(3, 3, 8), (3, 4, 8), (4, 4, 7)] {
        let rep = verify_mubayi(&mut solver, k, l, n_max).map_err(|e| e.to_string())?;
        ensure(rep.rows.first().map(|r| r.n) == Some(l), || format!("k={k} l={l}: range starts wrong"))?;
        ensure(rep.rows.len() == n_max - l + 1, || format!("k={k} l={l}: missing rows"))?;
        let p = ForbiddenPattern::core_family(k, l + 1).unwrap();
        for row in &rep.rows {
            let n = row.n;
            let expected = turan_oracle(n, l, k);
            ensure(row.certified, || format!("k={k} l={l} n={n}: not certified"))?;
            ensure(row.ex == expected, || format!("k={k} l={l} n={n}: ex={} expected {expected}", row.ex))?;
            let rec = solver.ex_exact(n, &p).map_err(|e| e.to_string())?;
            ensure(rec.enumerated && rec.witnesses.len() == 1, || {
                format!("k={k} l={l} n={n}: {} extremal classes", rec.witnesses.len())
            })?;
            let w = &rec.witnesses[0];
            ensure(!naive_core_family(w, l + 1), || format!("k={k} l={l} n={n}: witness not free"))?;
            ensure(are_isomorphic(w, &turan_hypergraph(n, l, k).unwrap()), || {
                format!("k={k} l={l} n={n}: extremal graph is not the Turán graph")
            })?;
            checked += 1;
        }
    }
    ensure(turan_oracle(6, 3, 3) == 8 && turan_oracle(7, 3, 3) == 12, || "Turán counts".into())?;
    Ok(format!("{checked} orders, each value exact with one class isomorphic to T(n,l)"))
}

fn c2_remark() -> Check {
    let mut solver = ExtremalSolver::new(SearchOptions::default());
    let core = ForbiddenPattern::core_family(3, 3).unwrap();
    let exp = ForbiddenPattern::expansion(3, 3).unwrap();
    let mut values = Vec::new();
    for n in 3..=8 {
        let c = solver.ex_value(n, &core).map_err(|e| e.to_string())?;
        let e = solver.ex_value(n, &exp).map_err(|e| e.to_string())?;
        ensure(c.certified && e.certified, || format!("n={n}: not certified"))?;
        ensure(c.value == 0, || format!("n={n}: ex(core:3)={}", c.value))?;
        ensure(e.value > 0, || format!("n={n}: ex(exp:3)=0"))?;
        values.push(e.value.to_string());
    }
    Ok(format!("ex(n, core:3)=0 and ex(n, exp:3)={} for n=3..8", values.join(",")))
}

fn c3_sandwich() -> Check {
    let mut solver = ExtremalSolver::new(SearchOptions::default());
    let core = ForbiddenPattern::core_family(3, 4).unwrap();
    let exp = ForbiddenPattern::expansion(3, 4).unwrap();
    for n in 4..=7 {
        let e = solver.ex_value(n, &exp).map_err(|e| e.to_string())?;
        let c = solver.ex_value(n, &core).map_err(|e| e.to_string())?;
        let t = turan_count(n, 3, 3).unwrap() as usize;
        ensure(e.certified && c.certified, || format!("n={n}: not certified"))?;
        ensure(t <= e.value && c.value <= e.value, || {
            format!("n={n}: turan={t} core={} exp={}", c.value, e.value)
        })?;
        ensure(is_free(&turan_hypergraph(n, 3, 3).unwrap(), &exp), || format!("n={n}: T not exp-free"))?;
    }
    Ok("turan_count <= ex(exp:4) and ex(core:4) <= ex(exp:4) for n=4..7".into())
}

fn c4_density() -> Check {
    let mut solver = ExtremalSolver::new(SearchOptions::default());
    let ranges: [(usize, &str, usize, usize); 6] = [
        (3, "core:4", 3, 8),
        (3, "core:5", 4, 8),
        (4, "core:5", 4, 7),
        (3, "core:3", 3, 8),
        (3, "exp:3", 3, 8),
        (3, "exp:4", 4, 7),
    ];
    let mut points = 0;
    for (k, spec, from, to) in ranges {
        let p = ForbiddenPattern::parse(spec, k).unwrap();
        let mut prev: Option<(u128, u128)> = None;
        for n in from..=to {
            let rec = solver.ex_value(n, &p).map_err(|e| e.to_string())?;
            ensure(rec.certified, || format!("{spec} n={n}: not certified"))?;
            let (num, den) = (rec.value as u128, binomial(n, k) as u128);
            if let Some((pn, pd)) = prev {
                ensure(num * pd <= pn * den, || format!("k={k} {spec}: density rose at n={n}"))?;
            }
            prev = Some((num, den));
            points += 1;
        }
    }
    Ok(format!("{points} certified densities, non-increasing by exact rational comparison"))
}

fn c5_blowup() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..50 {
        let n = rng.gen_range(3..=6);
        let f = random_graph(&mut rng, 3, n);
        for t in 1..=3 {
            let b = blowup(&f, t).map_err(|e| e.to_string())?;
            ensure(b.edge_count() == t.pow(3) * f.edge_count(), || {
                format!("instance {i} t={t}: {} vs {}", b.edge_count(), t.pow(3) * f.edge_count())
            })?;
        }
    }
    Ok("|F[t]| = t^3 |F| on 50 random F, t in {1,2,3}".into())
}

fn c6_oracle() -> Check {
    let mut checked = 0usize;
    let mut compare = |g: &Hypergraph| -> std::result::Result<(), String> {
        for l in 2..=4 {
            ensure(contains_core_family(g, l).is_some() == naive_core_family(g, l), || {
                format!("core:{l} mismatch on {:?}", g.masks())
            })?;
            ensure(contains_expansion(g, l).is_some() == naive_expansion(g, l), || {
                format!("exp:{l} mismatch on {:?}", g.masks())
            })?;
        }
        checked += 1;
        Ok(())
    };
    for n in 3..=5 {
        let slots = k_subsets(n, 3);
        for bits in 0u32..1 << slots.len() {
            let edges = slots.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &m)| m);
            compare(&Hypergraph::from_masks(3, n, edges).unwrap())?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..500 {
        compare(&random_graph(&mut rng, 3, 6))?;
    }
    Ok(format!("{checked} graphs, l=2..4, zero mismatches"))
}

fn f_direct(g: &Hypergraph, part_of: &[usize]) -> usize {
    g.masks()
        .iter()
        .map(|&e| {
            let mut seen: Vec<usize> = mask_vertices(e).map(|v| part_of[v]).collect();
            seen.sort_unstable();
            seen.dedup();
            seen.len()
        })
        .sum()
}

fn brute_edit(f: &Hypergraph, g: &Hypergraph) -> usize {
    let mut best = usize::MAX;
    injections(f.n(), f.n(), &mut |sigma| {
        best = best.min(f.relabel(sigma).symmetric_difference(g));
        false
    });
    best
}

fn brute_closeness(g: &Hypergraph, l: usize) -> usize {
    let n = g.n();
    (0..l.pow(n as u32))
        .map(|code| {
            let a: Vec<usize> = (0..n).map(|i| code / l.pow(i as u32) % l).collect();
            let part = VertexPartition::from_assignment(l, &a, true).unwrap();
            g.symmetric_difference(&part.complete_partite(g.k()))
        })
        .min()
        .unwrap()
}

fn c7_stability() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..200 {
        let n = rng.gen_range(4..=7);
        let l = rng.gen_range(2..=3);
        let g = random_graph(&mut rng, 3, n);
        let seed: u64 = rng.gen();
        let (part, d) = max_f_partition(&g, l, 4, seed).map_err(|e| e.to_string())?;
        let k = 3;
        let f = f_direct(&g, part.part_of());
        ensure(d.f_value == f, || format!("instance {i}: f={} recount {f}", d.f_value))?;
        ensure(d.f_value >= k * d.transversal, || format!("instance {i}: f < k|T∩G|"))?;
        ensure(d.f_value <= k * g.edge_count(), || format!("instance {i}: f > k|G|"))?;
        ensure(d.missing_edges + d.transversal == d.t_size, || format!("instance {i}: missing identity"))?;
        ensure(d.bad_edges + d.transversal == g.edge_count(), || format!("instance {i}: bad identity"))?;
        for v in 0..n {
            for p in 0..l {
                if p == part.part_of()[v] {
                    continue;
                }
                let mut moved = part.part_of().to_vec();
                moved[v] = p;
                ensure(f_direct(&g, &moved) <= f, || format!("instance {i}: moving {v} to {p} improves f"))?;
            }
        }
        if n <= 6 {
            let h = random_graph(&mut rng, 3, n);
            let e = edit_distance(&g, &h, DistanceMode::Exact).map_err(|e| e.to_string())?;
            let b = brute_edit(&g, &h);
            ensure(e.value == b, || format!("instance {i}: edit {} vs brute {b}", e.value))?;
        }
        let c = closeness_to_turan(&g, l, ClosenessMode::Exact).map_err(|e| e.to_string())?;
        let b = brute_closeness(&g, l);
        ensure(c.value == b, || format!("instance {i}: closeness {} vs scan {b}", c.value))?;
    }
    Ok("200 instances, zero violations".into())
}

fn c8_spectrum() -> Check {
    let mut solver = ExtremalSolver::new(SearchOptions::default());
    let p = ForbiddenPattern::core_family(3, 4).unwrap();
    let s = near_extremal_spectrum(&mut solver, 6, &p, 0, 3).map_err(|e| e.to_string())?;
    ensure(s.classes.len() == 1, || format!("{} classes", s.classes.len()))?;
    ensure(s.classes[0].closeness == 0, || format!("closeness {}", s.classes[0].closeness))?;
    Ok(format!("one class with {} edges at closeness 0", s.classes[0].edges))
}

const CAMPAIGN: &[&[&str]] = &[
    &["verify-mubayi", "--k", "3", "--l", "3", "--n-max", "8"],
    &["verify-mubayi", "--k", "3", "--l", "4", "--n-max", "8"],
    &["verify-mubayi", "--k", "4", "--l", "4", "--n-max", "7"],
    &["probe-main", "--k", "3", "--l", "3", "--n-max", "7", "--enumerate"],
    &["probe-main", "--k", "3", "--l", "2", "--n-max", "8"],
    &["probe-np", "--k", "3", "--n-max", "6"],
    &["ex", "--n", "6", "--k", "3", "--pattern", "core:4", "--enumerate"],
    &["spectrum", "--n", "6", "--k", "3", "--pattern", "core:4", "--slack", "1", "--l", "3"],
];

fn run_campaign(dir: &Path) -> std::result::Result<Vec<Vec<u8>>, String> {
    let bin = env!("CARGO_BIN_EXE_turan");
    let graph = dir.join("g.el");
    let mut g = turan_hypergraph(7, 3, 3).unwrap();
    g = g.with_edge(0b111);
    std::fs::write(&graph, g.to_edge_list()).map_err(|e| e.to_string())?;
    // Relative paths keep the recorded config identical across directories.
    let gpath = "g.el".to_string();
    let mut commands: Vec<Vec<String>> = CAMPAIGN
        .iter()
        .map(|c| c.iter().map(|s| s.to_string()).collect())
        .collect();
    commands.push(vec!["stability".into(), gpath.clone(), "--l".into(), "3".into(), "--seed".into(), "17".into()]);
    commands.push(vec!["edit-distance".into(), gpath.clone(), gpath]);
    let mut outputs = Vec::new();
    for (i, args) in commands.iter().enumerate() {
        let out = format!("report{i}.json");
        let searches = !matches!(args[0].as_str(), "stability" | "edit-distance");
        let status = Command::new(bin)
            .current_dir(dir)
            .args(args)
            .args(["--format", "json"])
            .args(if searches { &["--workers", "1"][..] } else { &[] })
            .arg("--out")
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.code() == Some(0), || format!("{} exited with {status}", args.join(" ")))?;
        outputs.push(std::fs::read(dir.join(&out)).map_err(|e| e.to_string())?);
    }
    Ok(outputs)
}

fn c9_determinism() -> Check {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = run_campaign(a.path())?;
    let second = run_campaign(b.path())?;
    for (i, (x, y)) in first.iter().zip(&second).enumerate() {
        ensure(x == y, || format!("report {i} differs between runs"))?;
    }
    let bytes: usize = first.iter().map(Vec::len).sum();
    Ok(format!("{} reports, {bytes} bytes, byte-identical", first.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "core-family Turán numbers and uniqueness", c1_mubayi),
        (2, "core:3 vanishes while exp:3 does not", c2_remark),
        (3, "sandwich around ex(n, exp:4)", c3_sandwich),
        (4, "density monotonicity", c4_density),
        (5, "blowup edge law", c5_blowup),
        (6, "freeness oracle equivalence", c6_oracle),
        (7, "stability identities", c7_stability),
        (8, "uniqueness spectrum", c8_spectrum),
        (9, "determinism", c9_determinism),
    ];
    let mut failures = 0;
    for (id, name, check) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id} ({name}): {detail} [tolerance exact, {secs:.1}s]"),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {id} ({name}): {why} [tolerance exact, {secs:.1}s]");
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
