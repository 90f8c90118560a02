use serde::Serialize;

use crate::conditions::{check_condition_bk, check_max_dominating, dominating_pairs, has_partner};
use crate::constructions::{build_d10, build_d8};
use crate::cycles::{cycle_of_length, even_cycle_spectrum, hamiltonian_cycle, nonhamiltonian_cycle_geq4, Cycle};
use crate::factor::cycle_factor;
use crate::graph::{BipartiteDigraph, VertexId};

use super::experiment::{run_experiment, wang_search, ExperimentConfig, Property, SearchMode};
use super::TOOL_VERSION;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReferenceReport {
    pub tool_version: String,
    pub assertion_count: usize,
    pub passed: usize,
    pub failed: usize,
    pub all_passed: bool,
    pub assertions: Vec<Assertion>,
}

#[derive(Default)]
struct Suite(Vec<Assertion>);

impl Suite {
    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(Assertion { name: name.to_string(), passed, detail: detail.into() });
    }
}

fn degrees(d: &BipartiteDigraph, vs: &[VertexId]) -> Vec<usize> {
    vs.iter().map(|&v| if d.contains_vertex(v) { d.degree(v) } else { 0 }).collect()
}

fn names(vs: &[VertexId]) -> String {
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn degree_claim(s: &mut Suite, name: &str, d: &BipartiteDigraph, vs: &[VertexId], expected: usize) {
    let got = degrees(d, vs);
    s.check(name, got.iter().all(|&g| g == expected), format!("d({}) = {got:?}, expected {expected}", names(vs)));
}

fn d8_claims(s: &mut Suite, d: &BipartiteDigraph) {
    use VertexId as V;
    let four = d.half_order() == 4;
    s.check("d8.half_order", four, format!("a = {}", d.half_order()));
    s.check("d8.arc_count", d.arc_count() == 20, format!("{} arcs", d.arc_count()));
    degree_claim(s, "d8.high_degrees", d, &[V::x(2), V::x(3), V::y(0), V::y(1)], 7);
    degree_claim(s, "d8.low_degrees", d, &[V::x(0), V::x(1), V::y(2), V::y(3)], 3);

    let pairs: Vec<_> = dominating_pairs(d).iter().map(|p| (p.u, p.v)).collect();
    let expected = [
        (V::x(0), V::x(2)),
        (V::x(0), V::x(3)),
        (V::x(1), V::x(2)),
        (V::x(1), V::x(3)),
        (V::x(2), V::x(3)),
        (V::y(0), V::y(1)),
        (V::y(0), V::y(2)),
        (V::y(0), V::y(3)),
        (V::y(1), V::y(2)),
        (V::y(1), V::y(3)),
    ];
    s.check("d8.dominating_pairs", pairs == expected, format!("{} pairs: {pairs:?}", pairs.len()));
    s.check("d8.partners", four && has_partner(d, V::x(2)) && has_partner(d, V::y(2)), "x2 and y2 have partners");
    s.check("d8.strong", d.is_strongly_connected(), "strongly connected");
    let ham = hamiltonian_cycle(d);
    s.check("d8.not_hamiltonian", matches!(ham, Ok(None)), format!("{ham:?}"));
    let max7 = check_max_dominating(d, 7);
    s.check("d8.max_dominating_7", max7.holds, format!("witness {:?}", max7.witness));
    let bk = check_condition_bk(d, 2);
    s.check("d8.fails_b2", !bk.holds, format!("witness {:?}", bk.witness));
    let factor = cycle_factor(d);
    s.check("d8.cycle_factor", factor.as_ref().is_ok_and(|f| f.is_valid_in(d)), format!("{factor:?}"));
    let six: Result<Cycle, _> = "X0 Y0 X3 Y2 X2 Y1".parse();
    s.check("d8.six_cycle", six.as_ref().is_ok_and(|c| c.is_valid_in(d)), "X0 Y0 X3 Y2 X2 Y1 is a cycle");
}

fn d10_claims(s: &mut Suite, d: &BipartiteDigraph) {
    use VertexId as V;
    let five = d.half_order() == 5;
    s.check("d10.half_order", five, format!("a = {}", d.half_order()));
    degree_claim(s, "d10.degree_two", d, &[V::x(0), V::x(4)], 2);
    s.check("d10.strong", d.is_strongly_connected(), "strongly connected");
    let eight = cycle_of_length(d, 8);
    s.check("d10.no_8_cycle", matches!(eight, Ok(None)), format!("{eight:?}"));
    let six: Result<Cycle, _> = "X1 Y1 X3 Y3 X2 Y2".parse();
    s.check("d10.six_cycle", six.as_ref().is_ok_and(|c| c.is_valid_in(d)), "X1 Y1 X3 Y3 X2 Y2 is a cycle");
    let spectrum = even_cycle_spectrum(d);
    s.check(
        "d10.spectrum",
        spectrum.as_ref().is_ok_and(|sp| sp.contains(&2) && sp.contains(&6) && !sp.contains(&8) && !sp.contains(&10)),
        format!("{spectrum:?}"),
    );
    let short = nonhamiltonian_cycle_geq4(d);
    s.check("d10.cycle_4_to_8", matches!(short, Ok(Some(_))), format!("{short:?}"));
    let two = d.underlying_two_connectivity();
    s.check("d10.not_two_connected", two.as_ref().is_ok_and(|t| !t.is_two_connected()), format!("{two:?}"));
    let max8 = check_max_dominating(d, 8);
    s.check("d10.max_dominating_8", max8.holds, format!("witness {:?}", max8.witness));
    if five {
        extension_claims(s, d);
    }
}

/// Both ways of enlarging D(10) defeat one of its two properties.
fn extension_claims(s: &mut Suite, d: &BipartiteDigraph) {
    use VertexId as V;
    let mut absent = Vec::new();
    for x in [V::x(0), V::x(4)] {
        for j in 0..5 {
            for (u, v) in [(x, V::y(j)), (V::y(j), x)] {
                if !d.has_arc(u, v) {
                    absent.push((u, v));
                }
            }
        }
    }
    let without_8_cycle: Vec<String> = absent
        .iter()
        .filter(|&&(u, v)| {
            let mut e = d.clone();
            e.add_arc(u, v).expect("cross arc");
            !matches!(cycle_of_length(&e, 8), Ok(Some(_)))
        })
        .map(|(u, v)| format!("{u}->{v}"))
        .collect();
    s.check(
        "d10.extension_x0_x4",
        absent.len() == 16 && without_8_cycle.is_empty(),
        format!("{} absent arcs, {} add no 8-cycle {without_8_cycle:?}", absent.len(), without_8_cycle.len()),
    );

    let back: Vec<_> =
        (1..=3).flat_map(|i| (1..=3).map(move |j| (V::y(i), V::x(j)))).filter(|&(u, v)| !d.has_arc(u, v)).collect();
    let mut unbroken = Vec::new();
    for mask in 1u32..(1 << back.len()) {
        let mut e = d.clone();
        for (i, &(u, v)) in back.iter().enumerate() {
            if mask >> i & 1 == 1 {
                e.add_arc(u, v).expect("cross arc");
            }
        }
        let low = dominating_pairs(&e).iter().any(|p| e.degree(p.u).max(e.degree(p.v)) <= 2 * e.half_order() - 3);
        if !low {
            unbroken.push(mask);
        }
    }
    s.check(
        "d10.extension_y_to_x",
        back.len() == 6 && unbroken.is_empty(),
        format!("{} absent arcs, subsets without a low pair: {unbroken:?}", back.len()),
    );
}

fn sample_claims(s: &mut Suite) {
    let config = ExperimentConfig { a: 4, k: 2, seed: 2024, count: 200, ..Default::default() };
    for property in [
        Property::CycleFactor,
        Property::Partners,
        Property::ShortCycle,
        Property::TwoConnectedBypass,
        Property::PartnerDegree,
    ] {
        let report = run_experiment(&[property], &config);
        let (ok, detail) = match &report {
            Ok(r) => (
                r.violations.is_empty() && r.generated > 0,
                format!("{} instances, {} violations", r.generated, r.violations.len()),
            ),
            Err(e) => (false, e.to_string()),
        };
        s.check(&format!("sample.{}", property.name()), ok, detail);
    }
    let small = ExperimentConfig { a: 3, k: 1, count: 1, ..Default::default() };
    let rejected = wang_search(SearchMode::Random, &small, 0);
    s.check("wang_search.rejects_order_6", rejected.is_err(), "a = 3 is rejected");
}

/// Runs every claim about the reference digraphs against `d8` and `d10`.
pub fn verify_reference_claims_with(d8: &BipartiteDigraph, d10: &BipartiteDigraph) -> ReferenceReport {
    let mut s = Suite::default();
    d8_claims(&mut s, d8);
    d10_claims(&mut s, d10);
    sample_claims(&mut s);
    let passed = s.0.iter().filter(|a| a.passed).count();
    ReferenceReport {
        tool_version: TOOL_VERSION.to_string(),
        assertion_count: s.0.len(),
        passed,
        failed: s.0.len() - passed,
        all_passed: passed == s.0.len(),
        assertions: s.0,
    }
}

pub fn verify_reference_claims() -> ReferenceReport {
    verify_reference_claims_with(&build_d8(), &build_d10())
}
