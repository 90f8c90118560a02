use serde::Serialize;

use crate::conditions::{check_condition_bk, check_partner_degree, check_strong, dominating_pairs};
use crate::conditions::{ConditionReport, DominatingPair};
use crate::connectivity::TwoConnectivity;
use crate::cycles::{even_cycle_spectrum, hamiltonian_cycle, Cycle};
use crate::factor::{cycle_factor, HallViolator};
use crate::graph::BipartiteDigraph;

use super::{k_range_warnings, TOOL_VERSION};

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FactorSection {
    Factor { cycles: Vec<Cycle> },
    Missing { violator: HallViolator },
}

#[derive(Clone, Debug, Serialize)]
pub struct HamiltonianSection {
    pub hamiltonian: bool,
    pub cycle: Option<Cycle>,
}

/// Everything the library can say about one digraph. Sections the exact
/// solvers cannot handle are `null` and named in `omissions`.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub tool_version: String,
    pub a: usize,
    pub order: usize,
    pub arc_count: usize,
    pub k: usize,
    pub warnings: Vec<String>,
    pub strong: ConditionReport,
    pub scc_count: usize,
    pub two_connectivity: Option<TwoConnectivity>,
    pub bk: ConditionReport,
    pub partner_degree: ConditionReport,
    pub dominating_pairs: Vec<DominatingPair>,
    pub cycle_factor: FactorSection,
    pub hamiltonian: Option<HamiltonianSection>,
    pub even_cycle_spectrum: Option<Vec<usize>>,
    pub omissions: Vec<String>,
}

pub fn analyze(d: &BipartiteDigraph, k: usize) -> AnalysisReport {
    let mut omissions = Vec::new();
    let two_connectivity = match d.underlying_two_connectivity() {
        Ok(t) => Some(t),
        Err(e) => {
            omissions.push(format!("two_connectivity: {e}"));
            None
        }
    };
    let hamiltonian = match hamiltonian_cycle(d) {
        Ok(cycle) => Some(HamiltonianSection { hamiltonian: cycle.is_some(), cycle }),
        Err(e) => {
            omissions.push(format!("hamiltonian: {e}"));
            None
        }
    };
    let even_cycle_spectrum = match even_cycle_spectrum(d) {
        Ok(s) => Some(s.into_iter().collect()),
        Err(e) => {
            omissions.push(format!("even_cycle_spectrum: {e}"));
            None
        }
    };
    AnalysisReport {
        tool_version: TOOL_VERSION.to_string(),
        a: d.half_order(),
        order: d.order(),
        arc_count: d.arc_count(),
        k,
        warnings: k_range_warnings(d.half_order(), k),
        strong: check_strong(d),
        scc_count: d.strongly_connected_components().len(),
        two_connectivity,
        bk: check_condition_bk(d, k),
        partner_degree: check_partner_degree(d, k),
        dominating_pairs: dominating_pairs(d),
        cycle_factor: match cycle_factor(d) {
            Ok(f) => FactorSection::Factor { cycles: f.cycles },
            Err(violator) => FactorSection::Missing { violator },
        },
        hamiltonian,
        even_cycle_spectrum,
        omissions,
    }
}
