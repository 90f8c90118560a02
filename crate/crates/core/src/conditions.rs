//! Degree-condition predicates. Each check returns a [`ConditionReport`] that
//! carries the first violating vertex or pair (in canonical order) with its
//! degrees attached, so a failed verdict can be re-checked from the report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::ParamError;
use crate::graph::{bits, BipartiteDigraph, Side, VertexId, VertexSet};

/// Two same-side vertices with a common out-neighbour `witness`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DominatingPair {
    pub u: VertexId,
    pub v: VertexId,
    pub witness: VertexId,
}

impl DominatingPair {
    pub fn is_valid_in(&self, d: &BipartiteDigraph) -> bool {
        self.u != self.v
            && self.u.side == self.v.side
            && d.has_arc(self.u, self.witness)
            && d.has_arc(self.v, self.witness)
    }
}

/// Every dominating pair `{u, v}` (u < v) in canonical order, each with its
/// smallest common out-neighbour.
pub fn dominating_pairs(d: &BipartiteDigraph) -> Vec<DominatingPair> {
    same_side_pairs(d)
        .filter_map(|(u, v)| {
            let common = d.out_row(u) & d.out_row(v);
            (common != 0).then(|| DominatingPair {
                u,
                v,
                witness: VertexId::new(u.side.opposite(), common.trailing_zeros() as usize),
            })
        })
        .collect()
}

/// All vertices that share an out-neighbour with `v`.
pub fn partners(d: &BipartiteDigraph, v: VertexId) -> VertexSet {
    let mut row = bits(d.out_row(v)).fold(0u64, |acc, j| acc | d.in_row(VertexId::new(v.side.opposite(), j)));
    row &= !(1u64 << v.index);
    VertexSet::from_row(v.side, row)
}

pub fn has_partner(d: &BipartiteDigraph, v: VertexId) -> bool {
    !partners(d, v).is_empty()
}

fn same_side_pairs(d: &BipartiteDigraph) -> impl Iterator<Item = (VertexId, VertexId)> {
    let a = d.half_order();
    [Side::X, Side::Y].into_iter().flat_map(move |side| {
        (0..a).flat_map(move |i| (i + 1..a).map(move |j| (VertexId::new(side, i), VertexId::new(side, j))))
    })
}

/// Counter-example attached to a failed (or otherwise notable) verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Pair {
        u: VertexId,
        v: VertexId,
        degree_u: usize,
        degree_v: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        via: Option<VertexId>,
    },
    Vertex {
        v: VertexId,
        degree: usize,
    },
    Unreachable {
        from: VertexId,
        to: VertexId,
    },
    Order {
        order: usize,
        minimum: usize,
    },
}

impl Witness {
    fn pair(d: &BipartiteDigraph, u: VertexId, v: VertexId, via: Option<VertexId>) -> Self {
        Witness::Pair { u, v, degree_u: d.degree(u), degree_v: d.degree(v), via }
    }

    /// Whether the degrees recorded in the witness match `d`.
    pub fn degrees_match(&self, d: &BipartiteDigraph) -> bool {
        match *self {
            Witness::Pair { u, v, degree_u, degree_v, .. } => {
                d.contains_vertex(u) && d.contains_vertex(v) && d.degree(u) == degree_u && d.degree(v) == degree_v
            }
            Witness::Vertex { v, degree } => d.contains_vertex(v) && d.degree(v) == degree,
            Witness::Unreachable { .. } | Witness::Order { .. } => true,
        }
    }
}

/// Verdict of one predicate. `vacuous` marks a verdict reached because the
/// quantified family (pairs, partnered vertices, ...) is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: String,
    pub params: BTreeMap<String, i64>,
    pub holds: bool,
    pub vacuous: bool,
    pub witness: Option<Witness>,
}

impl ConditionReport {
    fn new(condition: &str, params: &[(&str, i64)]) -> Self {
        ConditionReport {
            condition: condition.to_string(),
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            holds: true,
            vacuous: true,
            witness: None,
        }
    }

    fn fail(mut self, witness: Witness) -> Self {
        self.holds = false;
        self.vacuous = false;
        self.witness = Some(witness);
        self
    }

    /// Re-evaluates the report against `d`: the verdict must match a fresh run
    /// and any witness must carry the degrees `d` actually has.
    pub fn recheck(&self, d: &BipartiteDigraph) -> bool {
        let witness_ok = self.witness.as_ref().is_none_or(|w| w.degrees_match(d));
        let holds_needs_no_witness = self.holds || self.witness.is_some();
        let fresh = Condition::from_report(self).map(|c| c.evaluate(d));
        witness_ok && holds_needs_no_witness && fresh.is_none_or(|f| f == *self)
    }
}

/// `(d(x) ≥ 2a−k ∧ d(y) ≥ a+k) ∨ (d(x) ≥ a+k ∧ d(y) ≥ 2a−k)`.
pub fn bk_pair_ok(a: usize, k: usize, dx: usize, dy: usize) -> bool {
    let (a, k, dx, dy) = (a as i64, k as i64, dx as i64, dy as i64);
    let (high, low) = (2 * a - k, a + k);
    (dx >= high && dy >= low) || (dx >= low && dy >= high)
}

/// Condition `B_k`: every dominating pair `{x, y}` has one end of degree at
/// least `2a−k` and the other at least `a+k`.
pub fn check_condition_bk(d: &BipartiteDigraph, k: usize) -> ConditionReport {
    let a = d.half_order();
    let mut report = ConditionReport::new("Bk", &[("k", k as i64)]);
    for pair in dominating_pairs(d) {
        report.vacuous = false;
        if !bk_pair_ok(a, k, d.degree(pair.u), d.degree(pair.v)) {
            return report.fail(Witness::pair(d, pair.u, pair.v, Some(pair.witness)));
        }
    }
    report
}

/// Every vertex with a partner has degree at least `a+k`.
pub fn check_partner_degree(d: &BipartiteDigraph, k: usize) -> ConditionReport {
    let bound = d.half_order() + k;
    let mut report = ConditionReport::new("prop1", &[("k", k as i64)]);
    for v in d.vertices() {
        if has_partner(d, v) {
            report.vacuous = false;
            if d.degree(v) < bound {
                return report.fail(Witness::Vertex { v, degree: d.degree(v) });
            }
        }
    }
    report
}

/// `d(x) + d(y) ≥ bound` for every pair with a common out- or in-neighbour.
pub fn check_sum_dominating(d: &BipartiteDigraph, bound: usize) -> ConditionReport {
    let mut report = ConditionReport::new("sum_dominating", &[("bound", bound as i64)]);
    for (u, v) in same_side_pairs(d) {
        let common = (d.out_row(u) & d.out_row(v)) | (d.in_row(u) & d.in_row(v));
        if common == 0 {
            continue;
        }
        report.vacuous = false;
        if d.degree(u) + d.degree(v) < bound {
            let via = VertexId::new(u.side.opposite(), common.trailing_zeros() as usize);
            return report.fail(Witness::pair(d, u, v, Some(via)));
        }
    }
    report
}

/// `max{d(x), d(y)} ≥ bound` for every dominating pair.
pub fn check_max_dominating(d: &BipartiteDigraph, bound: usize) -> ConditionReport {
    let mut report = ConditionReport::new("max_dominating", &[("bound", bound as i64)]);
    for pair in dominating_pairs(d) {
        report.vacuous = false;
        if d.degree(pair.u).max(d.degree(pair.v)) < bound {
            return report.fail(Witness::pair(d, pair.u, pair.v, Some(pair.witness)));
        }
    }
    report
}

/// `d(u) + d(v) ≥ bound` for every pair of distinct non-adjacent vertices,
/// including same-side pairs.
pub fn check_nonadjacent_sum(d: &BipartiteDigraph, bound: usize) -> ConditionReport {
    let mut report = ConditionReport::new("nonadjacent_sum", &[("bound", bound as i64)]);
    let n = d.order();
    for i in 0..n {
        for j in i + 1..n {
            let (u, v) = (d.vertex_at(i), d.vertex_at(j));
            if d.adjacent(u, v) {
                continue;
            }
            report.vacuous = false;
            if d.degree(u) + d.degree(v) < bound {
                return report.fail(Witness::pair(d, u, v, None));
            }
        }
    }
    report
}

pub fn check_min_degree(d: &BipartiteDigraph, bound: usize) -> ConditionReport {
    let mut report = ConditionReport::new("min_degree", &[("bound", bound as i64)]);
    report.vacuous = false;
    match d.vertices().find(|&v| d.degree(v) < bound) {
        Some(v) => report.fail(Witness::Vertex { v, degree: d.degree(v) }),
        None => report,
    }
}

/// `d(x) + d(y) ≥ bound` for every pair of distinct vertices on the same side.
pub fn check_same_side_sum(d: &BipartiteDigraph, bound: usize) -> ConditionReport {
    let mut report = ConditionReport::new("same_side_sum", &[("bound", bound as i64)]);
    for (u, v) in same_side_pairs(d) {
        report.vacuous = false;
        if d.degree(u) + d.degree(v) < bound {
            return report.fail(Witness::pair(d, u, v, None));
        }
    }
    report
}

pub fn check_strong(d: &BipartiteDigraph) -> ConditionReport {
    let mut report = ConditionReport::new("strong", &[]);
    report.vacuous = false;
    match d.unreachable_pair() {
        Some((from, to)) => report.fail(Witness::Unreachable { from, to }),
        None => report,
    }
}

pub fn check_min_order(d: &BipartiteDigraph, minimum: usize) -> ConditionReport {
    let mut report = ConditionReport::new("min_order", &[("minimum", minimum as i64)]);
    report.vacuous = false;
    if d.order() < minimum {
        report.fail(Witness::Order { order: d.order(), minimum })
    } else {
        report
    }
}

/// A degree predicate selected at run time (CLI dispatch, report re-checks).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    Bk { k: usize },
    PartnerDegree { k: usize },
    SumDominating { bound: usize },
    MaxDominating { bound: usize },
    NonadjacentSum { bound: usize },
    MinDegree { bound: usize },
    SameSideSum { bound: usize },
    Strong,
    MinOrder { minimum: usize },
}

impl Condition {
    pub const NAMES: [&'static str; 9] = [
        "Bk",
        "prop1",
        "sum_dominating",
        "max_dominating",
        "nonadjacent_sum",
        "min_degree",
        "same_side_sum",
        "strong",
        "min_order",
    ];

    /// Looks a condition up by report name. `k` feeds `Bk`/`prop1`, `bound`
    /// the degree-bound families; the missing one is an error.
    pub fn from_name(name: &str, k: Option<usize>, bound: Option<usize>) -> Result<Self, ParamError> {
        let need = |v: Option<usize>, what: &str| {
            v.ok_or_else(|| ParamError::Unknown { kind: "parameter", name: format!("{what} (required by {name})") })
        };
        Ok(match name {
            "Bk" | "bk" => Condition::Bk { k: need(k, "k")? },
            "prop1" => Condition::PartnerDegree { k: need(k, "k")? },
            "sum_dominating" => Condition::SumDominating { bound: need(bound, "bound")? },
            "max_dominating" => Condition::MaxDominating { bound: need(bound, "bound")? },
            "nonadjacent_sum" => Condition::NonadjacentSum { bound: need(bound, "bound")? },
            "min_degree" => Condition::MinDegree { bound: need(bound, "bound")? },
            "same_side_sum" => Condition::SameSideSum { bound: need(bound, "bound")? },
            "strong" => Condition::Strong,
            "min_order" => Condition::MinOrder { minimum: need(bound, "bound")? },
            _ => return Err(ParamError::Unknown { kind: "condition", name: name.to_string() }),
        })
    }

    fn from_report(report: &ConditionReport) -> Option<Self> {
        let param = |key: &str| report.params.get(key).and_then(|&v| usize::try_from(v).ok());
        let k = param("k");
        let bound = param("bound").or_else(|| param("minimum"));
        Condition::from_name(&report.condition, k, bound).ok()
    }

    pub fn evaluate(&self, d: &BipartiteDigraph) -> ConditionReport {
        match *self {
            Condition::Bk { k } => check_condition_bk(d, k),
            Condition::PartnerDegree { k } => check_partner_degree(d, k),
            Condition::SumDominating { bound } => check_sum_dominating(d, bound),
            Condition::MaxDominating { bound } => check_max_dominating(d, bound),
            Condition::NonadjacentSum { bound } => check_nonadjacent_sum(d, bound),
            Condition::MinDegree { bound } => check_min_degree(d, bound),
            Condition::SameSideSum { bound } => check_same_side_sum(d, bound),
            Condition::Strong => check_strong(d),
            Condition::MinOrder { minimum } => check_min_order(d, minimum),
        }
    }
}

/// Hypotheses of the classical sufficient conditions for Hamiltonicity and
/// even pancyclicity, each as a conjunction of basic predicates at the bounds
/// implied by `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    /// Non-adjacent pairs sum to at least `3a+1`.
    NonadjacentSum3aPlus1,
    /// Strong, non-adjacent pairs sum to at least `3a`.
    StrongNonadjacentSum3a,
    /// Minimum degree at least `(3a+1)/2`.
    MinDegreeHalf3aPlus1,
    /// Strong, minimum degree at least `3a/2`.
    StrongMinDegreeHalf3a,
    /// Strong, order ≥ 6, pairs with a common in- or out-neighbour sum to ≥ `3a`.
    StrongSumDominating3a,
    /// Strong, every dominating pair satisfies `B_1`.
    StrongB1,
    /// Strong, order ≥ 8, dominating pairs have `max ≥ 2a−1`.
    MaxDegree2aMinus1,
    /// Order ≥ 4, same-side pairs sum to ≥ `3a+1`.
    SameSideSum3aPlus1,
    /// Strong, order ≥ 6, same-side pairs sum to ≥ `3a`.
    StrongSameSideSum3a,
    /// Strong, order ≥ 6, common in/out-neighbour pairs sum to ≥ `3a` (pancyclic form).
    StrongSumDominating3aEvenPancyclic,
    /// Strong, order ≥ 10, dominating pairs have `max ≥ 2a−2`.
    MaxDegree2aMinus2,
}

impl Hypothesis {
    pub const ALL: [(&'static str, Hypothesis); 11] = [
        ("nonadjacent_sum_3a_plus_1", Hypothesis::NonadjacentSum3aPlus1),
        ("strong_nonadjacent_sum_3a", Hypothesis::StrongNonadjacentSum3a),
        ("min_degree_3a_plus_1_half", Hypothesis::MinDegreeHalf3aPlus1),
        ("strong_min_degree_3a_half", Hypothesis::StrongMinDegreeHalf3a),
        ("strong_sum_dominating_3a", Hypothesis::StrongSumDominating3a),
        ("strong_b1", Hypothesis::StrongB1),
        ("strong_max_dominating_2a_minus_1", Hypothesis::MaxDegree2aMinus1),
        ("same_side_sum_3a_plus_1", Hypothesis::SameSideSum3aPlus1),
        ("strong_same_side_sum_3a", Hypothesis::StrongSameSideSum3a),
        ("strong_sum_dominating_3a_even_pancyclic", Hypothesis::StrongSumDominating3aEvenPancyclic),
        ("strong_max_dominating_2a_minus_2", Hypothesis::MaxDegree2aMinus2),
    ];

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().find(|(n, _)| *n == name).map(|&(_, h)| h)
    }

    pub fn name(&self) -> &'static str {
        Self::ALL.iter().find(|(_, h)| h == self).map(|&(n, _)| n).unwrap_or("?")
    }

    pub fn parts(&self, a: usize) -> Vec<Condition> {
        use Condition::*;
        match self {
            Hypothesis::NonadjacentSum3aPlus1 => vec![NonadjacentSum { bound: 3 * a + 1 }],
            Hypothesis::StrongNonadjacentSum3a => vec![Strong, NonadjacentSum { bound: 3 * a }],
            Hypothesis::MinDegreeHalf3aPlus1 => vec![MinDegree { bound: (3 * a + 2) / 2 }],
            Hypothesis::StrongMinDegreeHalf3a => vec![Strong, MinDegree { bound: (3 * a).div_ceil(2) }],
            Hypothesis::StrongSumDominating3a | Hypothesis::StrongSumDominating3aEvenPancyclic => {
                vec![Strong, MinOrder { minimum: 6 }, SumDominating { bound: 3 * a }]
            }
            Hypothesis::StrongB1 => vec![Strong, Bk { k: 1 }],
            Hypothesis::MaxDegree2aMinus1 => {
                vec![Strong, MinOrder { minimum: 8 }, MaxDominating { bound: 2 * a - 1 }]
            }
            Hypothesis::SameSideSum3aPlus1 => vec![MinOrder { minimum: 4 }, SameSideSum { bound: 3 * a + 1 }],
            Hypothesis::StrongSameSideSum3a => vec![Strong, MinOrder { minimum: 6 }, SameSideSum { bound: 3 * a }],
            Hypothesis::MaxDegree2aMinus2 => {
                vec![Strong, MinOrder { minimum: 10 }, MaxDominating { bound: (2 * a).saturating_sub(2) }]
            }
        }
    }

    pub fn evaluate(&self, d: &BipartiteDigraph) -> HypothesisReport {
        let parts: Vec<_> = self.parts(d.half_order()).iter().map(|c| c.evaluate(d)).collect();
        HypothesisReport { hypothesis: self.name().to_string(), holds: parts.iter().all(|p| p.holds), parts }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub hypothesis: String,
    pub holds: bool,
    pub parts: Vec<ConditionReport>,
}
