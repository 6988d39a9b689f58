//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use sfdt_core::construct::check_building;
use sfdt_core::cover::{Cover, Transversal, ValueMap};
use sfdt_core::degeneracy::{brute_force_strictly_f_degenerate, is_strictly_f_degenerate};
use sfdt_core::graph::{families, Graph};
use sfdt_core::harness::checks::{check_l_gallai, check_smr_msmr};
use sfdt_core::harness::enumerate::fiber_options;
use sfdt_core::harness::{self, BaseSource, Instance, InstanceFamily, MatchingPolicy, Outcome, Theorem, ValuePolicy};
use sfdt_core::reductions::{
    decode_coloring, decode_partition, encode_list_coloring, encode_partition, encode_signed, is_proper_list_coloring,
    is_valid_partition, ListAssignment, PartitionSpec, SignedGraph,
};
use sfdt_core::solver::{find_sfdt, is_sfdt, SolveStatus};

const SEED: u64 = 20_240_601;

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

struct Criterion {
    id: u32,
    pass: bool,
    summary: String,
    // Deterministic report compared across runs.
    report: String,
    elapsed: Duration,
}

fn finish(id: u32, pass: bool, summary: String, report: serde_json::Value, start: Instant) -> Criterion {
    Criterion {
        id,
        pass,
        summary,
        report: report.to_string(),
        elapsed: start.elapsed(),
    }
}

// Shared data between criteria, produced by criteria 2 and 3.
#[derive(Default)]
struct Shared {
    mr_instances: Vec<Instance>,
    mr_found: Vec<bool>,
    building_exhausted: Vec<(Cover, ValueMap)>,
}

fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len()).map(move |mask| {
        let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        Graph::new(n, &edges).unwrap()
    })
}

fn criterion_1() -> Criterion {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = BTreeMap::<usize, u64>::new();
    let mut disagreements = 0u64;
    let mut compare = |g: &Graph, f: &[u32]| {
        let greedy = is_strictly_f_degenerate(g.adjacency(), f);
        let brute = brute_force_strictly_f_degenerate(g.adjacency(), f).unwrap();
        *checked.entry(g.n()).or_default() += 1;
        u64::from(greedy != brute)
    };
    for n in 1..=5 {
        for g in all_graphs(n).filter(Graph::is_connected) {
            for _ in 0..32 {
                let f: Vec<u32> = (0..n).map(|_| rng.random_range(0..=3)).collect();
                disagreements += compare(&g, &f);
            }
        }
    }
    for n in [6, 7] {
        for _ in 0..10_000 {
            let p = rng.random_range(0.1..0.9);
            let g = families::random_connected(n, p, &mut rng);
            let f: Vec<u32> = (0..n).map(|_| rng.random_range(0..=3)).collect();
            disagreements += compare(&g, &f);
        }
    }
    let total: u64 = checked.values().sum();
    let elapsed = start.elapsed();
    let pass = disagreements == 0 && elapsed < Duration::from_secs(120);
    finish(
        1,
        pass,
        format!("{total} (graph, f) pairs, {disagreements} disagreements"),
        json!({"checked_by_n": checked, "disagreements": disagreements}),
        start,
    )
}

fn criterion_2(shared: &mut Shared) -> Criterion {
    let start = Instant::now();
    let family = InstanceFamily {
        bases: BaseSource::Named {
            names: ["P2", "P3", "K3", "P4", "C4", "C5", "K4", "bowtie"].map(String::from).to_vec(),
        },
        kappa: 2,
        matchings: MatchingPolicy::PerfectOnly,
        values: ValuePolicy::DegreeEqual { cap: 3 },
        values_per_cover: None,
        sample_when_large: None,
        seed: SEED,
    };
    let instances = family.instances().expect("criterion 2 space is enumerable");
    let report = harness::run_instances(Theorem::Mr, &instances, jobs());
    // Recompute per-instance status for later criteria.
    let found: Vec<bool> = instances
        .iter()
        .map(|i| find_sfdt(&i.cover, &i.f).is_found())
        .collect();
    let elapsed = start.elapsed();
    let pass = report.passed() && report.skipped == 0 && elapsed < Duration::from_secs(600);
    let summary = format!(
        "{} instances, {} exhausted, {} disagreements, {} kernel-reading splits",
        report.instances_checked,
        report.stats.get("exhausted").copied().unwrap_or(0),
        report.counterexamples.len(),
        report.stats.get("kernel_readings_differ").copied().unwrap_or(0)
    );
    shared.mr_instances = instances;
    shared.mr_found = found;
    finish(2, pass, summary, serde_json::to_value(&report).unwrap(), start)
}

// Every transversal of `c` that is matched along all base edges, as a monoblock value map.
fn monoblocks(c: &Cover) -> Vec<ValueMap> {
    let n = c.n();
    let k = c.kappa();
    let g = c.base();
    (0..k.pow(n as u32))
        .filter_map(|mut code| {
            let picks: Vec<usize> = (0..n)
                .map(|_| {
                    let q = code % k;
                    code /= k;
                    q
                })
                .collect();
            let matched = g.edges().iter().all(|&(u, v)| c.partner(u, picks[u], v) == Some(picks[v]));
            matched.then(|| {
                let mut f = ValueMap::zeros(n, k);
                for (v, &q) in picks.iter().enumerate() {
                    f.set(v, q, g.degree(v) as u32);
                }
                f
            })
        })
        .collect()
}

fn criterion_3(shared: &mut Shared) -> Criterion {
    let start = Instant::now();
    let mut expect_exhausted: Vec<(String, Cover, ValueMap)> = Vec::new();
    for n in [3, 5] {
        expect_exhausted.push((format!("ladder-{n}"), Cover::circular_ladder(n).unwrap(), ValueMap::constant(n, 2, 1)));
    }
    for n in [4, 6] {
        expect_exhausted.push((format!("mobius-{n}"), Cover::mobius_ladder(n).unwrap(), ValueMap::constant(n, 2, 1)));
    }
    for p in 2..=4 {
        for kappa in 1..=3 {
            for layers in fiber_options(kappa, p as u32 - 1, p as u64 - 1, p as u64 - 1) {
                let c = Cover::tilde_complete(p, kappa).unwrap();
                let f = ValueMap::per_layer(p, &layers);
                expect_exhausted.push((format!("tilde-{p}-{layers:?}"), c, f));
            }
        }
    }
    for (name, g) in [("P3", families::path(3)), ("K3", families::complete(3))] {
        let covers = harness::enumerate_covers(&g, 2, MatchingPolicy::All, &mut ChaCha8Rng::seed_from_u64(SEED)).unwrap();
        for (i, c) in covers.iter().enumerate() {
            for f in monoblocks(c) {
                expect_exhausted.push((format!("monoblock-{name}-{i}"), c.clone(), f));
            }
        }
    }
    let mut exceptions = Vec::new();
    let mut kinds = BTreeMap::<&str, u64>::new();
    for (name, c, f) in &expect_exhausted {
        let status = find_sfdt(c, f).status;
        let building = check_building(c, f).unwrap();
        match (&status, &building) {
            (SolveStatus::Exhausted, Some(b)) => *kinds.entry(b.tag()).or_default() += 1,
            _ => exceptions.push(format!("{name}: {status:?}, building {:?}", building.map(|b| b.tag()))),
        }
    }
    let expect_found = [
        ("ladder-4", Cover::circular_ladder(4).unwrap(), ValueMap::constant(4, 2, 1)),
        ("mobius-5", Cover::mobius_ladder(5).unwrap(), ValueMap::constant(5, 2, 1)),
    ];
    for (name, c, f) in &expect_found {
        let res = find_sfdt(c, f);
        if !res.witness.as_ref().is_some_and(|r| is_sfdt(c, f, r)) {
            exceptions.push(format!("{name}: {:?}", res.status));
        }
    }
    shared.building_exhausted = expect_exhausted.into_iter().map(|(_, c, f)| (c, f)).collect();
    let summary = format!(
        "{} building covers exhausted and recognised, {} found, {} exceptions",
        shared.building_exhausted.len(),
        expect_found.len(),
        exceptions.len()
    );
    finish(
        3,
        exceptions.is_empty(),
        summary,
        json!({"kinds": kinds, "exceptions": exceptions}),
        start,
    )
}

fn criterion_4() -> Criterion {
    let start = Instant::now();
    let mut reports = Vec::new();
    for kappa in 1..=3 {
        let family = InstanceFamily {
            bases: BaseSource::Random {
                count: 250,
                n_min: 2,
                n_max: 6,
                p: 0.4,
            },
            kappa,
            matchings: MatchingPolicy::Sampled { count: 2 },
            values: ValuePolicy::DegreeGe { cap: 3, extra: 2 },
            values_per_cover: Some(2),
            sample_when_large: None,
            seed: SEED + kappa as u64,
        };
        reports.push(harness::verify_lemma_ge(&family, jobs()).unwrap());
    }
    let checked: u64 = reports.iter().map(|r| r.instances_checked).sum();
    let found: u64 = reports.iter().map(|r| r.stats.get("found").copied().unwrap_or(0)).sum();
    let pass = checked >= 1000 && found == checked;
    finish(
        4,
        pass,
        format!("{found}/{checked} instances with an SFDT"),
        serde_json::to_value(&reports).unwrap(),
        start,
    )
}

fn criterion_5(shared: &Shared) -> Criterion {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut bounded = 0u64;
    let mut swaps = BTreeMap::<u64, u64>::new();
    for (i, inst) in shared.mr_instances.iter().enumerate() {
        if !shared.mr_found[i] {
            continue;
        }
        match check_smr_msmr(&inst.cover, &inst.f) {
            Outcome::Pass(t) if t.get("bounded") == Some(&1) => {
                bounded += 1;
                *swaps.entry(t["descent_swaps"]).or_default() += 1;
            }
            other => failures.push(format!("instance {i}: {other:?}")),
        }
    }
    let found_total = shared.mr_found.iter().filter(|&&b| b).count() as u64;

    let mut strict_reports = Vec::new();
    for (kappa, cap) in [(2, 3), (3, 2), (2, 2)] {
        let family = InstanceFamily {
            bases: BaseSource::Random {
                count: 200,
                n_min: 2,
                n_max: 6,
                p: 0.5,
            },
            kappa,
            matchings: MatchingPolicy::Sampled { count: 2 },
            values: ValuePolicy::DegreeGt { cap, extra: 2 },
            values_per_cover: Some(2),
            sample_when_large: None,
            seed: SEED + 10 + kappa as u64 + cap as u64,
        };
        strict_reports.push(harness::verify_smr_msmr(&family, jobs()).unwrap());
    }
    let strict: u64 = strict_reports.iter().map(|r| r.stats.get("strictly_bounded").copied().unwrap_or(0)).sum();
    let linear: u64 = strict_reports.iter().map(|r| r.stats.get("linear_forest").copied().unwrap_or(0)).sum();
    let strict_fail: usize = strict_reports.iter().map(|r| r.counterexamples.len()).sum();
    let pass = failures.is_empty() && bounded == found_total && strict >= 1000 && strict_fail == 0 && linear > 0;
    finish(
        5,
        pass,
        format!(
            "{bounded}/{found_total} bounded with decreasing traces, {strict} strictly bounded ({linear} linear forests), {} failures",
            failures.len() + strict_fail
        ),
        json!({"bounded": bounded, "swap_histogram": swaps, "failures": failures, "strict": strict_reports}),
        start,
    )
}

fn criterion_6(shared: &Shared) -> Criterion {
    let start = Instant::now();
    let mut candidates: Vec<(&Cover, &ValueMap)> = shared
        .mr_instances
        .iter()
        .zip(&shared.mr_found)
        .filter(|(_, &found)| !found)
        .map(|(i, _)| (&i.cover, &i.f))
        .collect();
    candidates.extend(shared.building_exhausted.iter().map(|(c, f)| (c, f)));
    let mut minimal = 0u64;
    let mut subgraphs = 0u64;
    let mut differ = 0u64;
    let mut violations = Vec::new();
    for (i, (c, f)) in candidates.iter().enumerate() {
        match check_l_gallai(c, f) {
            Outcome::Skip => {}
            Outcome::Pass(t) => {
                minimal += t["minimal_pairs"];
                subgraphs += t["two_connected_subgraphs"];
                differ += t["d_readings_differ"];
            }
            Outcome::Fail(why) => violations.push(format!("candidate {i}: {why}")),
        }
    }
    finish(
        6,
        violations.is_empty() && minimal > 0,
        format!(
            "{minimal} minimal pairs among {} exhausted instances, {subgraphs} 2-connected subgraphs, {} violations",
            candidates.len(),
            violations.len()
        ),
        json!({"minimal_pairs": minimal, "subgraphs": subgraphs, "d_readings_differ": differ, "violations": violations}),
        start,
    )
}

// Oracle: every colour vector.
fn brute_list_colorable(g: &Graph, lists: &ListAssignment) -> bool {
    let n = g.n();
    let k = lists.kappa();
    (0..k.pow(n as u32)).any(|mut code| {
        let colors: Vec<usize> = (0..n)
            .map(|_| {
                let c = code % k;
                code /= k;
                c
            })
            .collect();
        (0..n).all(|v| lists.list(v).contains(&colors[v])) && g.edges().iter().all(|&(u, v)| colors[u] != colors[v])
    })
}

fn is_id_cover(c: &Cover) -> bool {
    c.matchings().iter().all(|m| (0..c.kappa()).all(|p| m.forward(p) == Some(p)))
}

fn criterion_7(shared: &Shared) -> Criterion {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let mut problems = Vec::new();
    let mut list_checked = 0u64;
    let mut colorable = 0u64;
    for _ in 0..1500 {
        let n = rng.random_range(1..=5);
        let kappa = rng.random_range(1..=3);
        let g = families::gnp(n, rng.random_range(0.2..0.9), &mut rng);
        let lists = (0..n).map(|_| (0..kappa).filter(|_| rng.random_bool(0.6)).collect()).collect();
        let lists = ListAssignment::new(kappa, lists).unwrap();
        let (c, f) = encode_list_coloring(&g, &lists).unwrap();
        let res = find_sfdt(&c, &f);
        let oracle = brute_list_colorable(&g, &lists);
        list_checked += 1;
        colorable += u64::from(oracle);
        if res.is_found() != oracle || res.witness.as_ref().is_some_and(|r| !is_proper_list_coloring(&g, &lists, &decode_coloring(r))) {
            problems.push(format!("list instance {list_checked}"));
        }
    }

    let mut round_trips = 0u64;
    for (i, inst) in shared.mr_instances.iter().enumerate() {
        if !shared.mr_found[i] || !is_id_cover(&inst.cover) {
            continue;
        }
        let g = inst.cover.base();
        let rows: Vec<Vec<u32>> = (0..g.n()).map(|v| inst.f.fiber(v).to_vec()).collect();
        let spec = PartitionSpec::from_rows(&rows).unwrap();
        let (c, f) = encode_partition(g, &spec).unwrap();
        let ok = (c == inst.cover && f == inst.f)
            && find_sfdt(&c, &f).witness.is_some_and(|r| {
                let parts = decode_partition(&r, spec.kappa());
                let back = Transversal::new((0..g.n()).map(|v| parts.iter().position(|p| p.contains(&v)).unwrap()).collect());
                is_valid_partition(g, &spec, &parts) && is_sfdt(&c, &f, &back)
            });
        round_trips += 1;
        if !ok {
            problems.push(format!("partition round trip {i}"));
        }
    }

    let tri = SignedGraph::all_positive(families::complete(3));
    let signed = [
        ("triangle k=2", encode_signed(&tri, 2).unwrap(), SolveStatus::Exhausted),
        ("triangle k=3", encode_signed(&tri, 3).unwrap(), SolveStatus::Found),
        (
            "negative edge k=1",
            encode_signed(&SignedGraph::new(2, &[(0, 1)], &[-1]).unwrap(), 1).unwrap(),
            SolveStatus::Exhausted,
        ),
    ];
    for (name, (c, f), want) in &signed {
        if find_sfdt(c, f).status != *want {
            problems.push(name.to_string());
        }
    }
    let pass = problems.is_empty() && list_checked >= 1000 && round_trips > 0;
    finish(
        7,
        pass,
        format!(
            "{list_checked} list instances ({colorable} colourable), {round_trips} partition round trips, {} signed examples, {} problems",
            signed.len(),
            problems.len()
        ),
        json!({"list": list_checked, "colorable": colorable, "round_trips": round_trips, "problems": problems}),
        start,
    )
}

fn criterion_8() -> Criterion {
    let start = Instant::now();
    let g = families::petersen();
    let c = Cover::id_cover(&g, 3).unwrap();
    let f = ValueMap::constant(10, 3, 1);
    let res = find_sfdt(&c, &f);
    let colors = res.witness.as_ref().map(decode_coloring);
    let proper = colors
        .as_ref()
        .is_some_and(|col| is_proper_list_coloring(&g, &ListAssignment::uniform(10, 3).unwrap(), col));
    let elapsed = start.elapsed();
    let pass = res.is_found() && proper && elapsed < Duration::from_secs(1);
    finish(
        8,
        pass,
        format!("Petersen 3-colouring {:?}, proper: {proper}", colors.as_deref().unwrap_or(&[])),
        json!({"status": res.status, "colors": colors, "nodes": res.nodes_expanded}),
        start,
    )
}

fn run_all() -> Vec<Criterion> {
    let mut shared = Shared::default();
    vec![
        criterion_1(),
        criterion_2(&mut shared),
        criterion_3(&mut shared),
        criterion_4(),
        criterion_5(&shared),
        criterion_6(&shared),
        criterion_7(&shared),
        criterion_8(),
    ]
}

fn main() -> ExitCode {
    let first = run_all();
    let second = run_all();
    let mut all_pass = true;
    for c in &first {
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict}: {} [{:.2?}]", c.id, c.summary, c.elapsed);
        all_pass &= c.pass;
    }
    let identical = first.iter().zip(&second).all(|(a, b)| a.report == b.report);
    let bytes: usize = first.iter().map(|c| c.report.len()).sum();
    println!(
        "criterion 9 {}: two runs of criteria 1-8 with seed {SEED}, {bytes} report bytes, identical: {identical}",
        if identical { "PASS" } else { "FAIL" }
    );
    if all_pass && identical {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
