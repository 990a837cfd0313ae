use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use turan_core::cache::ResultCache;
use turan_core::constructions::{blowup, complete_hypergraph, expansion, turan_hypergraph};
use turan_core::freeness::{contains_core_family, contains_expansion, contains_subgraph};
use turan_core::search::{
    probe_main, probe_nonprincipality, verify_mubayi, ExtremalSolver, SearchOptions,
};
use turan_core::stability::{
    classify_pairs, closeness_to_turan, edit_distance, max_f_partition, near_extremal_spectrum, ClosenessMode,
    DistanceMode, ThresholdForm, EXACT_CLOSENESS_LIMIT,
};
use turan_core::{Error, ForbiddenPattern, Hypergraph, PatternKind, Result};

use crate::report::{emit, opt, table, yes_no};
use crate::{
    CheckArgs, Command, ConstructArgs, EditDistanceArgs, ExArgs, ProbeNpArgs, RangeArgs, SearchArgs, SpectrumArgs,
    StabilityArgs, Threshold,
};

pub const PASS: u8 = 0;
pub const FAIL: u8 = 1;
pub const USAGE: u8 = 2;
pub const BUDGET: u8 = 3;

pub fn error_code(e: &Error) -> u8 {
    match e {
        Error::Budget(_) => BUDGET,
        Error::Inconsistent(_) => FAIL,
        _ => USAGE,
    }
}

pub fn run(command: Command) -> Result<u8> {
    match command {
        Command::Construct(a) => construct(&a),
        Command::Check(a) => check(&a),
        Command::Ex(a) => ex(&a),
        Command::VerifyMubayi(a) => cmd_verify_mubayi(&a),
        Command::ProbeMain(a) => cmd_probe_main(&a),
        Command::ProbeNp(a) => cmd_probe_np(&a),
        Command::Spectrum(a) => spectrum(&a),
        Command::Stability(a) => stability(&a),
        Command::EditDistance(a) => cmd_edit_distance(&a),
    }
}

fn read_graph(path: &Path) -> Result<Hypergraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Hypergraph::from_edge_list(&text)
}

fn solver(args: &SearchArgs) -> Result<ExtremalSolver> {
    let opts = SearchOptions {
        enumerate: args.enumerate,
        iso_levels: args.iso_levels,
        node_budget: args.node_budget,
        time_budget: args.time_budget.map(Duration::from_secs_f64),
        workers: args.workers.max(1),
    };
    let solver = ExtremalSolver::new(opts);
    Ok(match &args.cache {
        Some(path) => solver.with_cache(ResultCache::open(path)?),
        None => solver,
    })
}

fn construct(a: &ConstructArgs) -> Result<u8> {
    let usage = || Error::Precondition(format!("bad construction spec {:?}", a.spec));
    let (tag, rest) = a.spec.split_once(':').ok_or_else(usage)?;
    let ints = |s: &str| -> Result<Vec<usize>> {
        s.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| usage())).collect()
    };
    let g = match tag {
        "turan" => match ints(rest)?[..] {
            [n, l, k] => turan_hypergraph(n, l, k)?,
            _ => return Err(usage()),
        },
        "exp" => match ints(rest)?[..] {
            [l, k] => expansion(l, k)?,
            _ => return Err(usage()),
        },
        "complete" => match ints(rest)?[..] {
            [m, k] => complete_hypergraph(m, k)?,
            _ => return Err(usage()),
        },
        "blowup" => {
            let (file, t) = rest.rsplit_once(',').ok_or_else(usage)?;
            let t = t.trim().parse::<usize>().map_err(|_| usage())?;
            blowup(&read_graph(Path::new(file))?, t)?
        }
        _ => return Err(usage()),
    };
    let body = g.to_edge_list();
    match &a.output.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(PASS)
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum Witness {
    Core(turan_core::EmbeddingWitness),
    Map { map: Vec<usize> },
}

/// The first member structure found, with the member it belongs to.
fn find_witness(g: &Hypergraph, p: &ForbiddenPattern) -> Option<(String, Witness)> {
    match p.kind() {
        PatternKind::CoreFamily(l) => contains_core_family(g, *l).map(Witness::Core),
        PatternKind::Expansion(l) => contains_expansion(g, *l).map(Witness::Core),
        PatternKind::Explicit(f) => contains_subgraph(g, f).map(|map| Witness::Map { map }),
        PatternKind::Conjunction(ms) => return ms.iter().find_map(|m| find_witness(g, m)),
    }
    .map(|w| (p.to_string(), w))
}

#[derive(Serialize)]
struct CheckResult {
    k: usize,
    n: usize,
    edges: usize,
    verdict: &'static str,
    member: Option<String>,
    witness: Option<Witness>,
}

fn check(a: &CheckArgs) -> Result<u8> {
    let g = read_graph(&a.graph)?;
    let p = ForbiddenPattern::parse(&a.pattern, g.k())?;
    let found = find_witness(&g, &p);
    let contains = found.is_some();
    let (member, witness) = found.map_or((None, None), |(m, w)| (Some(m), Some(w)));
    let result = CheckResult {
        k: g.k(),
        n: g.n(),
        edges: g.edge_count(),
        verdict: if contains { "CONTAINS" } else { "FREE" },
        member,
        witness,
    };
    emit(&a.output, "check", a, &result, || {
        let mut s = format!("{}\n", result.verdict);
        if let Some(m) = &result.member {
            let _ = writeln!(s, "member: {m}");
        }
        match &result.witness {
            Some(Witness::Core(w)) => {
                let _ = writeln!(s, "core: {:?}", w.core);
                for pe in &w.pair_edges {
                    let _ = writeln!(s, "  pair {:?} -> edge {:?}", pe.pair, pe.edge);
                }
                let _ = writeln!(s, "disjoint: {}", yes_no(w.disjoint));
            }
            Some(Witness::Map { map }) => {
                let _ = writeln!(s, "map: {map:?}");
            }
            None => {}
        }
        s
    })?;
    Ok(if contains { FAIL } else { PASS })
}

fn edge_list_block(s: &mut String, title: &str, g: &Hypergraph) {
    let _ = writeln!(s, "{title}");
    for line in g.to_edge_list().lines() {
        let _ = writeln!(s, "  {line}");
    }
}

fn ex(a: &ExArgs) -> Result<u8> {
    let p = ForbiddenPattern::parse(&a.pattern, a.k)?;
    let mut solver = solver(&a.search)?;
    let rec = solver.ex_exact(a.n, &p)?;
    emit(&a.output, "ex", a, &rec, || {
        let mut s = format!("ex({}, {}) = {}  (k={})\n", rec.n, rec.pattern, rec.value, rec.k);
        let _ = writeln!(s, "certified: {}", yes_no(rec.certified));
        if rec.enumerated {
            let _ = writeln!(s, "classes: {}  unique: {}", rec.witnesses.len(), yes_no(rec.unique));
        }
        let _ = writeln!(s, "search nodes: {}", rec.search_nodes);
        for (i, w) in rec.witnesses.iter().enumerate() {
            edge_list_block(&mut s, &format!("witness {}:", i + 1), w);
        }
        s
    })?;
    Ok(if rec.certified { PASS } else { BUDGET })
}

/// Certified failures beat missing certificates: a failed assertion is a finding.
fn verdict(pass: bool, failed_certified: bool, certified: bool) -> u8 {
    if failed_certified {
        FAIL
    } else if !certified {
        BUDGET
    } else if pass {
        PASS
    } else {
        FAIL
    }
}

fn cmd_verify_mubayi(a: &RangeArgs) -> Result<u8> {
    let mut solver = solver(&a.search)?;
    let rep = verify_mubayi(&mut solver, a.k, a.l, a.n_max)?;
    emit(&a.output, "verify-mubayi", a, &rep, || {
        let rows: Vec<Vec<String>> = rep
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.ex.to_string(),
                    r.turan_count.to_string(),
                    r.classes.to_string(),
                    yes_no(r.isomorphic_to_turan),
                    yes_no(r.certified),
                    if r.pass { "PASS" } else { "FAIL" }.to_string(),
                ]
            })
            .collect();
        let mut s = format!("k={} l={} pattern=core:{}\n", rep.k, rep.l, rep.l + 1);
        s.push_str(&table(&["n", "ex", "turan", "classes", "is_turan", "certified", "result"], &rows));
        let _ = writeln!(s, "{}", if rep.all_pass { "ALL PASS" } else { "NOT ALL PASS" });
        s
    })?;
    let failed_certified = rep.rows.iter().any(|r| r.certified && !r.pass);
    Ok(verdict(rep.all_pass, failed_certified, rep.certified))
}

fn cmd_probe_main(a: &RangeArgs) -> Result<u8> {
    let mut solver = solver(&a.search)?;
    let rep = probe_main(&mut solver, a.k, a.l, a.n_max)?;
    emit(&a.output, "probe-main", a, &rep, || {
        let rows: Vec<Vec<String>> = rep
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.ex_expansion.to_string(),
                    r.ex_core_family.to_string(),
                    opt(r.turan_count),
                    r.relation.clone(),
                    opt(r.expansion_classes),
                    opt(r.turan_among_extremal.map(yes_no)),
                    yes_no(r.certified),
                ]
            })
            .collect();
        let mut s = format!("k={} l={} pattern=exp:{}\n", rep.k, rep.l, rep.l + 1);
        s.push_str(&table(
            &["n", "ex_exp", "ex_core", "turan", "relation", "classes", "turan_extremal", "certified"],
            &rows,
        ));
        let _ = writeln!(s, "consistent: {}", yes_no(rep.consistent));
        s
    })?;
    Ok(verdict(rep.consistent, !rep.consistent, rep.certified))
}

fn cmd_probe_np(a: &ProbeNpArgs) -> Result<u8> {
    let mut solver = solver(&a.search)?;
    let rep = probe_nonprincipality(&mut solver, a.k, a.n_max)?;
    emit(&a.output, "probe-np", a, &rep, || {
        let rows: Vec<Vec<String>> = rep
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.ex_pair.to_string(),
                    r.ex_expansion.to_string(),
                    r.ex_complete.to_string(),
                    r.density_pair.to_string(),
                    r.density_expansion.to_string(),
                    r.density_complete.to_string(),
                    yes_no(r.certified),
                ]
            })
            .collect();
        let mut s = format!("k={} pair=(exp:{}, complete:{})\n", rep.k, rep.k + 2, rep.k + 1);
        s.push_str(&table(
            &["n", "ex_pair", "ex_exp", "ex_complete", "d_pair", "d_exp", "d_complete", "certified"],
            &rows,
        ));
        let _ = writeln!(s, "consistent: {}", yes_no(rep.consistent));
        s
    })?;
    Ok(verdict(rep.consistent, !rep.consistent, rep.certified))
}

fn spectrum(a: &SpectrumArgs) -> Result<u8> {
    let p = ForbiddenPattern::parse(&a.pattern, a.k)?;
    let mut solver = solver(&a.search)?;
    let rep = near_extremal_spectrum(&mut solver, a.n, &p, a.slack, a.l)?;
    emit(&a.output, "spectrum", a, &rep, || {
        let rows: Vec<Vec<String>> = rep
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| vec![(i + 1).to_string(), c.edges.to_string(), c.closeness.to_string()])
            .collect();
        let mut s = format!(
            "n={} k={} pattern={} ex={} slack={} l={}\n",
            rep.n, rep.k, rep.pattern, rep.ex, rep.slack, rep.l
        );
        s.push_str(&table(&["class", "edges", "closeness"], &rows));
        let values: Vec<String> = rep.closeness_values().iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "closeness values: {}", values.join(" "));
        for (i, c) in rep.classes.iter().enumerate() {
            edge_list_block(&mut s, &format!("class {}:", i + 1), &c.graph);
        }
        s
    })?;
    Ok(PASS)
}

#[derive(Serialize)]
struct StabilityResult {
    partition: Vec<Vec<usize>>,
    diagnostics: turan_core::stability::PartitionDiagnostics,
    closeness: usize,
    closeness_exact: bool,
    closeness_partition: Vec<Vec<usize>>,
}

fn stability(a: &StabilityArgs) -> Result<u8> {
    let g = read_graph(&a.graph)?;
    let (part, diag) = max_f_partition(&g, a.l, a.restarts, a.seed)?;
    let diag = match a.threshold {
        Threshold::Parts => diag,
        Threshold::Family => classify_pairs(&g, &part, ThresholdForm::Family)?,
    };
    let mode = if a.heuristic || g.n() > EXACT_CLOSENESS_LIMIT {
        ClosenessMode::Heuristic {
            restarts: a.restarts,
            seed: a.seed,
        }
    } else {
        ClosenessMode::Exact
    };
    let c = closeness_to_turan(&g, a.l, mode)?;
    let result = StabilityResult {
        partition: part.parts(),
        diagnostics: diag,
        closeness: c.value,
        closeness_exact: c.exact,
        closeness_partition: c.partition.parts(),
    };
    emit(&a.output, "stability", a, &result, || {
        let d = &result.diagnostics;
        let mut s = format!("k={} n={} l={} edges={}\n", d.k, d.n, d.l, d.edges);
        let _ = writeln!(s, "partition: {:?}", result.partition);
        let rows = vec![
            vec!["f".to_string(), d.f_value.to_string()],
            vec!["|T|".to_string(), d.t_size.to_string()],
            vec!["|T∩G|".to_string(), d.transversal.to_string()],
            vec!["missing".to_string(), d.missing_edges.to_string()],
            vec!["bad".to_string(), d.bad_edges.to_string()],
            vec!["bad pairs".to_string(), d.bad_pairs.len().to_string()],
            vec!["sparse pairs".to_string(), d.sparse_pairs.len().to_string()],
            vec!["dense pairs".to_string(), d.dense_pairs.len().to_string()],
            vec!["threshold m".to_string(), d.threshold_m.to_string()],
            vec!["empty parts".to_string(), yes_no(d.empty_parts)],
            vec!["bad >= missing".to_string(), yes_no(d.bad_at_least_missing)],
        ];
        s.push_str(&table(&["quantity", "value"], &rows));
        let _ = writeln!(
            s,
            "closeness: {} ({})",
            result.closeness,
            if result.closeness_exact { "exact" } else { "upper bound" }
        );
        let _ = writeln!(s, "closest partition: {:?}", result.closeness_partition);
        s
    })?;
    Ok(PASS)
}

fn cmd_edit_distance(a: &EditDistanceArgs) -> Result<u8> {
    let f = read_graph(&a.first)?;
    let g = read_graph(&a.second)?;
    let mode = if a.heuristic { DistanceMode::Heuristic } else { DistanceMode::Exact };
    let d = edit_distance(&f, &g, mode)?;
    emit(&a.output, "edit-distance", a, &d, || {
        format!(
            "distance: {} ({})\nbijection: {:?}\n",
            d.value,
            if d.exact { "exact" } else { "upper bound" },
            d.sigma
        )
    })?;
    Ok(PASS)
}
