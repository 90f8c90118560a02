//! Reports and experiments behind the `bbd` command line.
//!
//! Single-digraph commands produce one JSON document; experiments produce an
//! [`ExperimentReport`] whose violations each carry the serialized digraph and
//! a certificate, so [`recheck_violation`] can reproduce them from the report
//! alone.

mod analyze;
mod experiment;
mod reference;

pub use analyze::{analyze, AnalysisReport, FactorSection, HamiltonianSection};
pub use experiment::{
    recheck_violation, run_experiment, wang_search, ExperimentConfig, ExperimentReport, Property, SearchMode, Severity,
    Violation,
};
pub use reference::{verify_reference_claims, verify_reference_claims_with, Assertion, ReferenceReport};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Warnings for `k` outside `2..=⌊a/2⌋`, or at the floor when `a` is odd.
pub fn k_range_warnings(a: usize, k: usize) -> Vec<String> {
    let mut warnings = Vec::new();
    if k < 2 || k > a / 2 {
        warnings.push(format!("k = {k} is outside the range 2..={} for a = {a}", a / 2));
    } else if a % 2 == 1 && k == a / 2 {
        warnings.push(format!("a = {a} is odd; the upper bound a/2 is taken as floor(a/2) = {}", a / 2));
    }
    warnings
}
