use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::conditions::{check_condition_bk, check_partner_degree, check_strong, partners};
use crate::constructions::{
    check_wang_range, enumerate_bk, random_bk_digraph, Dedup, EnumerationSummary, GeneratorConfig,
};
use crate::cycles::{
    cycles_of_length, find_bypass, hamiltonian_cycle, hamiltonian_cycle_dp, hamiltonian_cycle_search,
    nonhamiltonian_cycle_geq4, Cycle, SearchOutcome,
};
use crate::error::ParamError;
use crate::factor::cycle_factor;
use crate::graph::BipartiteDigraph;
use crate::rng::{Stream, GENERATOR_NAME};

use super::{k_range_warnings, TOOL_VERSION};

/// A conclusion checked on every generated strong `B_k` instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// A cycle factor exists.
    #[serde(rename = "thm1_10")]
    CycleFactor,
    /// On non-Hamiltonian instances every vertex has a partner.
    #[serde(rename = "lemma4_1")]
    Partners,
    /// Unless the instance is a directed cycle, some cycle has length in `4..=2a−2`.
    #[serde(rename = "lemma4_2")]
    ShortCycle,
    /// `UG(D)` is 2-connected and every sampled cycle of length ≤ `2a−2` has a bypass.
    #[serde(rename = "lemma4_3")]
    TwoConnectedBypass,
    /// Every vertex with a partner has degree ≥ `a+k`.
    #[serde(rename = "prop1")]
    PartnerDegree,
    /// Research target, not a theorem: is every instance Hamiltonian?
    WangProblem,
}

impl Property {
    pub const PROVED: [Property; 5] = [
        Property::CycleFactor,
        Property::Partners,
        Property::ShortCycle,
        Property::TwoConnectedBypass,
        Property::PartnerDegree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::CycleFactor => "thm1_10",
            Property::Partners => "lemma4_1",
            Property::ShortCycle => "lemma4_2",
            Property::TwoConnectedBypass => "lemma4_3",
            Property::PartnerDegree => "prop1",
            Property::WangProblem => "wang_problem",
        }
    }

    /// Parses an experiment name; `all` selects every proved property.
    pub fn parse_list(name: &str) -> Result<Vec<Property>, ParamError> {
        if name == "all" {
            return Ok(Self::PROVED.to_vec());
        }
        Self::PROVED
            .into_iter()
            .find(|p| p.name() == name)
            .map(|p| vec![p])
            .ok_or_else(|| ParamError::Unknown { kind: "experiment", name: name.to_string() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    /// A proved statement failed: the implementation is wrong somewhere.
    ImplementationBug,
    /// A search hit on an open question.
    Finding,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub severity: Severity,
    pub property: Property,
    pub k: usize,
    /// The instance in `bbd/1` format.
    pub digraph: String,
    pub certificate: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub a: usize,
    pub k: usize,
    pub seed: u64,
    pub count: usize,
    pub arc_probability: f64,
    pub max_attempts: u32,
    pub repair_iterations: u32,
    pub cycles_per_instance: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let g = GeneratorConfig::default();
        ExperimentConfig {
            a: g.a,
            k: g.k,
            seed: g.seed,
            count: 1000,
            arc_probability: g.arc_probability,
            max_attempts: g.max_attempts,
            repair_iterations: g.repair_iterations,
            cycles_per_instance: 20,
        }
    }
}

impl ExperimentConfig {
    fn generator(&self, seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            a: self.a,
            k: self.k,
            seed,
            arc_probability: self.arc_probability,
            max_attempts: self.max_attempts,
            repair_iterations: self.repair_iterations,
        }
    }

    /// Instance `i` is generated from the `i`-th output of the stream seeded
    /// with `seed`, so results do not depend on scheduling.
    fn instance_seeds(&self) -> Vec<u64> {
        let mut stream = Stream::new(self.seed);
        (0..self.count).map(|_| stream.next_u64()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Random,
    Enumerate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub tool_version: String,
    pub generator: String,
    pub config: ExperimentConfig,
    pub instance_count: usize,
    pub generated: usize,
    pub generation_failures: usize,
    pub insufficient_instances: bool,
    pub distinct_instances: usize,
    /// How many times each check ran, keyed `<property>.<check>`.
    pub checks: BTreeMap<String, u64>,
    pub violations: Vec<Violation>,
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumeration: Option<EnumerationSummary>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl ExperimentReport {
    /// Drops run-dependent fields so identical inputs give identical bytes.
    pub fn stabilize(&mut self) {
        self.wall_time_ms = None;
    }

    pub fn bug_count(&self) -> usize {
        self.violations.iter().filter(|v| v.severity == Severity::ImplementationBug).count()
    }
}

#[derive(Default)]
struct Tally {
    checks: BTreeMap<String, u64>,
    violations: Vec<Violation>,
}

impl Tally {
    fn count(&mut self, key: String) {
        *self.checks.entry(key).or_default() += 1;
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (k, v) in other.checks {
            *self.checks.entry(k).or_default() += v;
        }
        self.violations.extend(other.violations);
        self
    }
}

fn is_directed_cycle(d: &BipartiteDigraph) -> bool {
    d.vertices().all(|v| d.out_degree(v) == 1 && d.in_degree(v) == 1) && d.is_strongly_connected()
}

/// Cycles of length `2..=2a−2` for bypass checks, spread over the lengths.
fn sample_cycles(d: &BipartiteDigraph, limit: usize) -> Vec<Cycle> {
    let lengths: Vec<usize> = (2..=d.order().saturating_sub(2)).step_by(2).collect();
    if lengths.is_empty() || limit == 0 {
        return Vec::new();
    }
    let per_length = limit.div_ceil(lengths.len());
    let mut sample = Vec::new();
    for m in lengths {
        sample.extend(cycles_of_length(d, m, per_length).unwrap_or_default());
    }
    sample.truncate(limit);
    sample
}

fn bug(property: Property, k: usize, d: &BipartiteDigraph, certificate: Value) -> Violation {
    Violation { severity: Severity::ImplementationBug, property, k, digraph: d.to_bbd(), certificate }
}

fn check_instance(d: &BipartiteDigraph, k: usize, properties: &[Property], cycles_per_instance: usize) -> Tally {
    let mut tally = Tally::default();
    let needs_hamiltonicity = properties.contains(&Property::Partners);
    let hamiltonian = needs_hamiltonicity.then(|| hamiltonian_cycle(d).ok().map(|c| c.is_some())).flatten();
    for &property in properties {
        let name = property.name();
        match property {
            Property::CycleFactor => {
                tally.count(format!("{name}.checked"));
                match cycle_factor(d) {
                    Ok(f) if f.is_valid_in(d) => {}
                    Ok(f) => tally.violations.push(bug(property, k, d, json!({ "invalid_factor": f }))),
                    Err(v) => tally.violations.push(bug(property, k, d, json!({ "hall_violator": v }))),
                }
            }
            Property::Partners => {
                if hamiltonian == Some(true) {
                    tally.count(format!("{name}.skipped_hamiltonian"));
                } else if hamiltonian == Some(false) {
                    tally.count(format!("{name}.non_hamiltonian"));
                    if let Some(v) = d.vertices().find(|&v| partners(d, v).is_empty()) {
                        tally.violations.push(bug(property, k, d, json!({ "vertex_without_partner": v })));
                    }
                } else {
                    tally.count(format!("{name}.skipped_over_cap"));
                }
            }
            Property::ShortCycle => {
                if !is_directed_cycle(d) {
                    tally.count(format!("{name}.checked"));
                    if matches!(nonhamiltonian_cycle_geq4(d), Ok(None)) {
                        tally.violations.push(bug(
                            property,
                            k,
                            d,
                            json!({ "no_cycle_with_length_in": [4, d.order() - 2] }),
                        ));
                    }
                }
            }
            Property::TwoConnectedBypass => {
                tally.count(format!("{name}.two_connectivity"));
                match d.underlying_two_connectivity() {
                    Ok(t) if t.is_two_connected() => {}
                    Ok(t) => tally.violations.push(bug(property, k, d, json!({ "two_connectivity": t }))),
                    Err(e) => tally.violations.push(bug(property, k, d, json!({ "error": e.to_string() }))),
                }
                for cycle in sample_cycles(d, cycles_per_instance) {
                    tally.count(format!("{name}.bypass"));
                    match find_bypass(d, &cycle) {
                        Ok(Some(b)) if b.is_valid_in(d) => {}
                        _ => tally.violations.push(bug(property, k, d, json!({ "cycle_without_bypass": cycle }))),
                    }
                }
            }
            Property::PartnerDegree => {
                tally.count(format!("{name}.checked"));
                let report = check_partner_degree(d, k);
                if !report.holds {
                    tally.violations.push(bug(property, k, d, json!({ "report": report })));
                }
            }
            Property::WangProblem => {}
        }
    }
    tally
}

/// Re-derives a violation from its serialized digraph alone. Returns `true`
/// when the hypothesis still holds and the conclusion still fails.
pub fn recheck_violation(v: &Violation) -> bool {
    let Ok(d) = BipartiteDigraph::parse_bbd(&v.digraph) else {
        return false;
    };
    if !check_condition_bk(&d, v.k).holds || !d.is_strongly_connected() {
        return false;
    }
    let c = &v.certificate;
    match v.property {
        Property::CycleFactor => match cycle_factor(&d) {
            Ok(f) => !f.is_valid_in(&d),
            Err(violator) => violator.verify(&d),
        },
        Property::Partners => {
            let vertex = c["vertex_without_partner"].as_str().and_then(|s| s.parse().ok());
            matches!(hamiltonian_cycle_dp(&d), Ok(None))
                && vertex.is_some_and(|v| d.contains_vertex(v) && partners(&d, v).is_empty())
        }
        Property::ShortCycle => !is_directed_cycle(&d) && matches!(nonhamiltonian_cycle_geq4(&d), Ok(None)),
        Property::TwoConnectedBypass => {
            if let Some(s) = c["cycle_without_bypass"].as_str() {
                let Ok(cycle) = s.parse::<Cycle>() else { return false };
                cycle.is_valid_in(&d) && cycle.len() + 2 <= d.order() && matches!(find_bypass(&d, &cycle), Ok(None))
            } else {
                matches!(d.underlying_is_two_connected(), Ok(false))
            }
        }
        Property::PartnerDegree => !check_partner_degree(&d, v.k).holds,
        Property::WangProblem => {
            matches!(hamiltonian_cycle_dp(&d), Ok(None))
                && matches!(hamiltonian_cycle_search(&d, None), Ok(SearchOutcome::NotFound))
        }
    }
}

fn generate_instances(config: &ExperimentConfig) -> Vec<Option<BipartiteDigraph>> {
    config
        .instance_seeds()
        .into_par_iter()
        .map(|seed| random_bk_digraph(&config.generator(seed)).ok().flatten())
        .collect()
}

fn finish(
    experiment: String,
    config: &ExperimentConfig,
    instances: &[BipartiteDigraph],
    failures: usize,
    mut tally: Tally,
    started: Instant,
) -> ExperimentReport {
    tally.violations.sort_by(|a, b| (&a.digraph, a.property).cmp(&(&b.digraph, b.property)));
    let distinct: BTreeSet<String> = instances.iter().map(BipartiteDigraph::to_bbd).collect();
    let mut warnings = k_range_warnings(config.a, config.k);
    if failures > 0 {
        warnings.push(format!("{failures} of {} instances could not be generated", config.count));
    }
    ExperimentReport {
        experiment,
        tool_version: TOOL_VERSION.to_string(),
        generator: GENERATOR_NAME.to_string(),
        config: config.clone(),
        instance_count: config.count,
        generated: instances.len(),
        generation_failures: failures,
        insufficient_instances: instances.len() < config.count,
        distinct_instances: distinct.len(),
        checks: tally.checks,
        violations: tally.violations,
        complete: true,
        enumeration: None,
        warnings,
        wall_time_ms: Some(started.elapsed().as_millis() as u64),
    }
}

/// Generates `count` strong `B_k` instances and checks each listed property
/// on every one of them (so several properties share one instance stream).
pub fn run_experiment(properties: &[Property], config: &ExperimentConfig) -> Result<ExperimentReport, ParamError> {
    check_wang_range(config.a, config.k)?;
    config.generator(config.seed).validate()?;
    let started = Instant::now();
    let generated = generate_instances(config);
    let instances: Vec<BipartiteDigraph> = generated.into_iter().flatten().collect();
    let failures = config.count - instances.len();
    let tally = instances
        .par_iter()
        .map(|d| check_instance(d, config.k, properties, config.cycles_per_instance))
        .reduce(Tally::default, Tally::merge);
    let name = properties.iter().map(|p| p.name()).collect::<Vec<_>>().join("+");
    Ok(finish(name, config, &instances, failures, tally, started))
}

fn wang_hit(d: &BipartiteDigraph, k: usize) -> Violation {
    let factor = cycle_factor(d).map(|f| f.cycles).ok();
    Violation {
        severity: Severity::Finding,
        property: Property::WangProblem,
        k,
        digraph: d.to_bbd(),
        certificate: json!({
            "bk": check_condition_bk(d, k),
            "strong": check_strong(d),
            "scc_count": d.strongly_connected_components().len(),
            "hamiltonian": "none: exhaustive subset DP over alternating walks",
            "cycle_factor": factor,
        }),
    }
}

fn search_instance(d: &BipartiteDigraph, k: usize) -> Tally {
    let mut tally = Tally::default();
    tally.count("wang_problem.checked".into());
    match hamiltonian_cycle(d) {
        Ok(Some(_)) => tally.count("wang_problem.hamiltonian".into()),
        Ok(None) => {
            tally.count("wang_problem.non_hamiltonian".into());
            tally.violations.push(wang_hit(d, k));
        }
        Err(_) => tally.count("wang_problem.skipped".into()),
    }
    tally
}

/// Looks for strong `B_k` digraphs that are not Hamiltonian. Hits are
/// reported as findings with certificates; the absence of hits is only
/// coverage, never an answer.
pub fn wang_search(mode: SearchMode, config: &ExperimentConfig, budget: u64) -> Result<ExperimentReport, ParamError> {
    check_wang_range(config.a, config.k)?;
    let started = Instant::now();
    match mode {
        SearchMode::Random => {
            config.generator(config.seed).validate()?;
            let instances: Vec<BipartiteDigraph> = generate_instances(config).into_iter().flatten().collect();
            let failures = config.count - instances.len();
            let tally = instances.par_iter().map(|d| search_instance(d, config.k)).reduce(Tally::default, Tally::merge);
            Ok(finish("wang_search.random".into(), config, &instances, failures, tally, started))
        }
        SearchMode::Enumerate => {
            let mut instances = Vec::new();
            let summary = enumerate_bk(config.a, config.k, budget, Dedup::default_for(config.a), |d| {
                instances.push(d.clone());
                ControlFlow::Continue(())
            })?;
            let tally = instances.par_iter().map(|d| search_instance(d, config.k)).reduce(Tally::default, Tally::merge);
            let mut enum_config = config.clone();
            enum_config.count = instances.len();
            let mut report = finish("wang_search.enumerate".into(), &enum_config, &instances, 0, tally, started);
            report.complete = summary.complete;
            report.enumeration = Some(summary);
            Ok(report)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_d10, build_d8, complete_bipartite};

    fn small(count: usize) -> ExperimentConfig {
        ExperimentConfig { count, seed: 11, ..Default::default() }
    }

    #[test]
    fn proved_properties_are_clean_on_a_small_stream() {
        let report = run_experiment(&Property::PROVED, &small(60)).unwrap();
        assert_eq!(report.violations, vec![]);
        assert!(report.generated > 0);
        assert!(report.checks["thm1_10.checked"] as usize == report.generated);
    }

    #[test]
    fn stable_reports_are_reproducible() {
        let mut a = run_experiment(&[Property::CycleFactor], &small(30)).unwrap();
        let mut b = run_experiment(&[Property::CycleFactor], &small(30)).unwrap();
        a.stabilize();
        b.stabilize();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn out_of_range_parameters_are_rejected() {
        let config = ExperimentConfig { a: 3, k: 1, ..small(1) };
        assert!(run_experiment(&[Property::CycleFactor], &config).is_err());
        assert!(wang_search(SearchMode::Random, &config, 0).is_err());
        let config = ExperimentConfig { a: 6, k: 4, ..small(1) };
        assert!(run_experiment(&[Property::CycleFactor], &config).is_err());
        assert!(Property::parse_list("no_such_experiment").is_err());
        assert_eq!(Property::parse_list("all").unwrap().len(), 5);
    }

    #[test]
    fn rechecks_reject_instances_outside_the_hypothesis() {
        // D(10) is strong but not B_2, so its 2-connectivity failure is not a
        // counterexample to anything.
        let d10 = build_d10();
        let tally = check_instance(&d10, 2, &[Property::TwoConnectedBypass], 20);
        assert!(!tally.violations.is_empty());
        assert!(tally.violations.iter().all(|v| !recheck_violation(v)));
        assert!(!recheck_violation(&wang_hit(&build_d8(), 2)));
    }

    #[test]
    fn forged_certificates_do_not_recheck() {
        let k4 = complete_bipartite(4).unwrap();
        let forged = Violation {
            severity: Severity::ImplementationBug,
            property: Property::TwoConnectedBypass,
            k: 2,
            digraph: k4.to_bbd(),
            certificate: json!({ "cycle_without_bypass": "X0 Y0" }),
        };
        assert!(!recheck_violation(&forged));
        let forged = Violation { property: Property::CycleFactor, certificate: json!({}), ..forged };
        assert!(!recheck_violation(&forged));
    }

    #[test]
    fn wang_search_random_smoke() {
        let report = wang_search(SearchMode::Random, &small(50), 0).unwrap();
        assert_eq!(report.checks["wang_problem.checked"] as usize, report.generated);
        assert!(report.violations.iter().all(recheck_violation));
    }

    #[test]
    fn wang_search_enumerate_is_budgeted() {
        let report = wang_search(SearchMode::Enumerate, &small(0), 50_000).unwrap();
        let summary = report.enumeration.as_ref().unwrap();
        assert!(!report.complete && !summary.complete);
        assert_eq!(report.generated as u64, summary.emitted);
        assert!(report.violations.iter().all(recheck_violation));
    }
}
