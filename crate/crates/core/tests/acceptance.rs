//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p bbd-core --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bbd_core::cycles::{hamiltonian_cycle_dp, hamiltonian_cycle_search, SearchOutcome};
use bbd_core::factor::matching_with_certificate;
use bbd_core::harness::{
    recheck_violation, run_experiment, wang_search, ExperimentConfig, ExperimentReport, Property, SearchMode,
};
use bbd_core::{
    build_d10, build_d8, check_condition_bk, check_max_dominating, check_partner_degree, cycle_of_length,
    dominating_pairs, hamiltonian_cycle, random_bk_digraph, BipartiteDigraph, Cycle, Direction, GeneratorConfig,
    VertexId,
};
use common::Matrix;

struct Outcome {
    passed: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { passed: true, notes: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.passed = false;
            self.notes.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

fn run(id: usize, title: &str, limit: Duration, body: impl FnOnce(&mut Outcome)) -> bool {
    let started = Instant::now();
    let mut outcome = Outcome::new();
    body(&mut outcome);
    let elapsed = started.elapsed();
    outcome.expect(elapsed < limit, format!("took {elapsed:?}, limit {limit:?}"));
    let verdict = if outcome.passed { "PASS" } else { "FAIL" };
    println!("{verdict} [{id}] {title} ({} ms)", elapsed.as_millis());
    for note in &outcome.notes {
        println!("       {note}");
    }
    outcome.passed
}

fn d8_reference(o: &mut Outcome) {
    let d = build_d8();
    let m = Matrix::new(&d);
    for (v, want) in [
        (VertexId::x(2), 7),
        (VertexId::x(3), 7),
        (VertexId::y(0), 7),
        (VertexId::y(1), 7),
        (VertexId::x(0), 3),
        (VertexId::x(1), 3),
        (VertexId::y(2), 3),
        (VertexId::y(3), 3),
    ] {
        let oracle = m.degree(Matrix::index(4, v));
        o.expect(d.degree(v) == want && oracle == want, format!("d({v}) = {} (oracle {oracle})", d.degree(v)));
    }
    let pairs = dominating_pairs(&d);
    let ours: Vec<_> = pairs.iter().map(|p| (Matrix::index(4, p.u), Matrix::index(4, p.v))).collect();
    o.expect(pairs.len() == 10, format!("{} dominating pairs", pairs.len()));
    o.expect(ours == m.dominating_pairs(), "dominating pairs differ from the oracle");
    o.expect(d.is_strongly_connected() && m.strong(), "not strong");
    o.expect(matches!(hamiltonian_cycle(&d), Ok(None)), "solver finds a Hamiltonian cycle");
    o.expect(!m.hamiltonian(), "oracle finds a Hamiltonian cycle");
    o.expect(check_max_dominating(&d, 7).holds, "max_dominating(7) fails");
}

fn d10_reference(o: &mut Outcome) {
    let d = build_d10();
    let m = Matrix::new(&d);
    for v in [VertexId::x(0), VertexId::x(4)] {
        o.expect(d.degree(v) == 2, format!("d({v}) = {}", d.degree(v)));
    }
    o.expect(d.is_strongly_connected() && m.strong(), "not strong");
    o.expect(matches!(cycle_of_length(&d, 8), Ok(None)), "solver finds an 8-cycle");
    o.expect(!m.has_cycle_of_length(8), "oracle finds an 8-cycle");
    let six: Cycle = "X1 Y1 X3 Y3 X2 Y2".parse().unwrap();
    o.expect(six.is_valid_in(&d), "X1 Y1 X3 Y3 X2 Y2 is not a cycle");
    o.expect(matches!(d.underlying_is_two_connected(), Ok(false)) && !m.two_connected(), "UG is 2-connected");
    o.expect(check_max_dominating(&d, 8).holds, "max_dominating(8) fails");

    let mut absent = Vec::new();
    for x in [0, 4] {
        for j in 0..5 {
            for (u, v) in [(VertexId::x(x), VertexId::y(j)), (VertexId::y(j), VertexId::x(x))] {
                if !d.has_arc(u, v) {
                    absent.push((u, v));
                }
            }
        }
    }
    o.expect(absent.len() == 16, format!("{} absent arcs at x0, x4", absent.len()));
    for &(u, v) in &absent {
        let mut e = d.clone();
        e.add_arc(u, v).unwrap();
        let solver = matches!(cycle_of_length(&e, 8), Ok(Some(_)));
        let oracle = Matrix::new(&e).has_cycle_of_length(8);
        o.expect(solver && oracle, format!("adding {u}->{v}: 8-cycle solver={solver} oracle={oracle}"));
    }

    let back: Vec<_> = (1..=3)
        .flat_map(|i| (1..=3).map(move |j| (VertexId::y(i), VertexId::x(j))))
        .filter(|&(u, v)| !d.has_arc(u, v))
        .collect();
    o.expect(back.len() == 6, format!("{} absent y->x arcs", back.len()));
    let mut subsets = 0;
    for mask in 1u32..(1 << back.len()) {
        let mut e = d.clone();
        for (i, &(u, v)) in back.iter().enumerate() {
            if mask >> i & 1 == 1 {
                e.add_arc(u, v).unwrap();
            }
        }
        let em = Matrix::new(&e);
        let low = em.dominating_pairs().iter().any(|&(i, j)| em.degree(i).max(em.degree(j)) <= 7);
        o.expect(low && !check_max_dominating(&e, 8).holds, format!("subset {mask:#b} keeps every pair high"));
        subsets += 1;
    }
    o.expect(subsets == 63, format!("{subsets} subsets"));
}

/// Strong `B_2` streams: 10,000 instances at a = 4 and 1,000 at a = 5 and 6.
fn streams() -> Vec<ExperimentConfig> {
    [(4, 10_000, 101), (5, 1_000, 102), (6, 1_000, 103)]
        .into_iter()
        .map(|(a, count, seed)| ExperimentConfig { a, k: 2, seed, count, ..Default::default() })
        .collect()
}

fn check_stream(o: &mut Outcome, r: &ExperimentReport) {
    let a = r.config.a;
    o.expect(r.generated == r.config.count, format!("a={a}: generated {} of {}", r.generated, r.config.count));
    o.expect(r.violations.is_empty(), format!("a={a}: {} violations", r.violations.len()));
    if let Some(v) = r.violations.first() {
        o.note(format!("first violation: {}", serde_json::to_string(v).unwrap()));
    }
    let checks: Vec<_> = r.checks.iter().map(|(k, v)| format!("{k}={v}")).collect();
    o.note(format!("a={a}: {} instances, {} distinct; {}", r.generated, r.distinct_instances, checks.join(" ")));
}

fn cycle_factor_suite(o: &mut Outcome) {
    for config in streams() {
        match run_experiment(&[Property::CycleFactor], &config) {
            Ok(r) => check_stream(o, &r),
            Err(e) => o.expect(false, e.to_string()),
        }
    }
}

fn structure_suite(o: &mut Outcome) {
    let properties = [Property::Partners, Property::ShortCycle, Property::TwoConnectedBypass];
    for config in streams() {
        match run_experiment(&properties, &config) {
            Ok(r) => check_stream(o, &r),
            Err(e) => o.expect(false, e.to_string()),
        }
    }
}

fn oracle_equivalences(o: &mut Outcome) {
    let (mut matchings, mut hamiltonian, mut violators) = (0, 0, 0);
    for i in 0..600u64 {
        let a = 2 + (i % 4) as usize;
        let p = [0.15, 0.25, 0.35, 0.5, 0.7][(i / 4 % 5) as usize];
        let d = common::random(a, p, 7_000 + i);
        let m = Matrix::new(&d);
        for direction in Direction::BOTH {
            let (matching, violator) = matching_with_certificate(&d, direction);
            let oracle = m.max_matching(direction.source());
            let brute = bbd_core::brute_force_has_perfect_matching(&d, direction).unwrap();
            o.expect(
                matching.is_valid_in(&d) && matching.len() == oracle && brute == (oracle == a),
                format!("matching mismatch on\n{}", d.to_bbd()),
            );
            matchings += 1;
            if let Some(v) = violator {
                o.expect(v.verify(&d), format!("Hall violator does not verify on\n{}", d.to_bbd()));
                violators += 1;
            }
            o.expect((oracle < a) == bbd_core::hall_violator(&d, direction).is_some(), "violator presence");
        }
        let dp = hamiltonian_cycle_dp(&d).unwrap();
        let bb = hamiltonian_cycle_search(&d, None).unwrap();
        let oracle = m.hamiltonian();
        let agree = match (&dp, &bb) {
            (Some(c), SearchOutcome::Found(c2)) => oracle && c.is_valid_in(&d) && c2.is_valid_in(&d),
            (None, SearchOutcome::NotFound) => !oracle,
            _ => false,
        };
        o.expect(agree, format!("Hamiltonicity mismatch (oracle {oracle}) on\n{}", d.to_bbd()));
        hamiltonian += 1;
    }
    o.note(format!("{matchings} matching comparisons, {hamiltonian} Hamiltonicity comparisons, {violators} violators"));
}

fn partner_degree_implication(o: &mut Outcome) {
    let mut total = 0;
    for (a, k) in [(4, 2), (5, 2), (6, 2), (6, 3)] {
        for i in 0..300u64 {
            let config =
                GeneratorConfig { a, k, seed: 50_000 + 1_000 * a as u64 + 100 * k as u64 + i, ..Default::default() };
            let Ok(Some(d)) = random_bk_digraph(&config) else { continue };
            let m = Matrix::new(&d);
            let bk = check_condition_bk(&d, k).holds;
            o.expect(bk && m.bk(k), format!("generated instance fails B_{k}"));
            let lib = check_partner_degree(&d, k).holds;
            o.expect(lib && m.partner_degree(k), format!("implication fails (a={a}, k={k}) on\n{}", d.to_bbd()));
            total += 1;
        }
    }
    o.expect(total >= 1000, format!("only {total} instances"));
    o.note(format!("{total} instances"));
}

fn determinism(o: &mut Outcome) {
    for i in 0..1000u64 {
        let d = common::random(1 + (i % 8) as usize, (i % 10) as f64 / 9.0, 90_000 + i);
        let text = d.to_bbd();
        match BipartiteDigraph::parse_bbd(&text) {
            Ok(back) => o.expect(back == d && back.to_bbd() == text, format!("round trip changed\n{text}")),
            Err(e) => o.expect(false, format!("{e} on\n{text}")),
        }
    }
    let config = ExperimentConfig { a: 5, k: 2, seed: 77, count: 300, ..Default::default() };
    let render = || {
        let mut r = run_experiment(&Property::PROVED, &config).unwrap();
        r.stabilize();
        serde_json::to_string_pretty(&r).unwrap()
    };
    o.expect(render() == render(), "stable experiment reports differ");
    let search = || {
        let mut r = wang_search(SearchMode::Random, &config, 0).unwrap();
        r.stabilize();
        serde_json::to_string(&r).unwrap()
    };
    o.expect(search() == search(), "stable search reports differ");
}

fn wang_smoke(o: &mut Outcome) {
    let config = ExperimentConfig { a: 4, k: 2, seed: 4242, count: 10_000, ..Default::default() };
    match wang_search(SearchMode::Random, &config, 0) {
        Ok(r) => {
            o.expect(r.complete, "search did not complete");
            let checked = r.checks.get("wang_problem.checked").copied().unwrap_or(0);
            o.expect(checked as usize == r.generated && r.generated > 0, "coverage statistics missing");
            o.expect(r.violations.iter().all(recheck_violation), "a candidate fails to re-verify");
            o.note(format!(
                "{} generated, {} distinct, {} failures, {} candidates",
                r.generated,
                r.distinct_instances,
                r.generation_failures,
                r.violations.len()
            ));
        }
        Err(e) => o.expect(false, e.to_string()),
    }
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        run(1, "D(8) reference digraph", secs(1), d8_reference),
        run(2, "D(10) reference digraph and both extension claims", secs(10), d10_reference),
        run(3, "cycle factors on strong B_2 streams", secs(120), cycle_factor_suite),
        run(4, "partners, short cycles, 2-connectivity and bypasses", secs(300), structure_suite),
        run(5, "matching and Hamiltonicity oracle equivalence", Duration::MAX, oracle_equivalences),
        run(6, "B_k implies the partner-degree bound", Duration::MAX, partner_degree_implication),
        run(7, "format round trip and stable reports", Duration::MAX, determinism),
        run(8, "non-Hamiltonian search smoke run", Duration::MAX, wang_smoke),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
