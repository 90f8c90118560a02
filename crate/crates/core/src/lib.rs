//! Analysis of balanced bipartite digraphs under dominating-pair degree
//! conditions.
//!
//! * [`graph`], [`connectivity`], [`format`]: the digraph type, SCC and
//!   2-connectivity tests, and the `bbd/1` text format.
//! * [`conditions`]: condition `B_k` and related degree predicates with
//!   re-checkable witnesses.
//! * [`factor`]: perfect matchings, Hall violators and cycle factors.
//! * [`cycles`]: exact Hamiltonicity, fixed-length cycles, even-cycle spectra
//!   and bypasses.
//! * [`constructions`]: reference digraphs, generators, enumeration and
//!   isomorphism.
//! * [`harness`]: reports and experiments driven by the `bbd` CLI.

pub mod conditions;
pub mod connectivity;
pub mod constructions;
pub mod cycles;
pub mod error;
pub mod factor;
pub mod format;
pub mod graph;
pub mod harness;
pub mod rng;

pub use conditions::{
    check_condition_bk, check_max_dominating, check_min_degree, check_nonadjacent_sum, check_partner_degree,
    check_same_side_sum, check_sum_dominating, dominating_pairs, has_partner, Condition, ConditionReport,
    DominatingPair, Hypothesis, Witness,
};
pub use connectivity::TwoConnectivity;
pub use constructions::{
    build_d10, build_d8, complete_bipartite, directed_cycle, enumerate_bk, is_isomorphic, random_bk_digraph,
    random_digraph, Dedup, EnumerationSummary, GeneratorConfig,
};
pub use cycles::{
    cycle_of_length, even_cycle_spectrum, find_bypass, hamiltonian_cycle, nonhamiltonian_cycle_geq4, Bypass, Cycle,
};
pub use error::{GraphError, ParamError, SearchError};
pub use factor::{
    brute_force_has_perfect_matching, cycle_factor, hall_violator, max_matching, CycleFactor, Direction, HallViolator,
    Matching,
};
pub use graph::{BipartiteDigraph, Side, VertexId, VertexSet};
