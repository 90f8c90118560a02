//! Perfect matchings between the partite sets, Hall-violator certificates
//! and cycle factors.
//!
//! A balanced bipartite digraph has a cycle factor iff it has a perfect
//! matching `X → Y` and a perfect matching `Y → X`: in the union every vertex
//! has exactly one out-arc and one in-arc, so it splits into disjoint cycles.

use serde::{Deserialize, Serialize};

use crate::cycles::Cycle;
use crate::error::SearchError;
use crate::graph::{bits, BipartiteDigraph, Side, VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    XtoY,
    YtoX,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::XtoY, Direction::YtoX];

    pub fn source(self) -> Side {
        match self {
            Direction::XtoY => Side::X,
            Direction::YtoX => Side::Y,
        }
    }

    pub fn target(self) -> Side {
        self.source().opposite()
    }
}

/// Independent arcs, all oriented in `direction`, sorted by tail index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub direction: Direction,
    pub arcs: Vec<(VertexId, VertexId)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_perfect(&self, d: &BipartiteDigraph) -> bool {
        self.len() == d.half_order()
    }

    /// Arcs exist, are oriented in `direction`, and share no endpoints.
    pub fn is_valid_in(&self, d: &BipartiteDigraph) -> bool {
        let (mut tails, mut heads) = (VertexSet::new(), VertexSet::new());
        self.arcs
            .iter()
            .all(|&(u, v)| u.side == self.direction.source() && d.has_arc(u, v) && tails.insert(u) && heads.insert(v))
    }
}

/// A source-side set `S` with `|N⁺(S)| < |S|`, certifying that no perfect
/// matching exists in `direction`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallViolator {
    pub direction: Direction,
    pub set: VertexSet,
    pub neighborhood: VertexSet,
}

impl HallViolator {
    /// Recomputes `N⁺(S)` from `d` and checks the deficiency.
    pub fn verify(&self, d: &BipartiteDigraph) -> bool {
        if self.set.is_empty() || self.set.side() != Some(self.direction.source()) {
            return false;
        }
        match d.out_neighbors_of_set(&self.set) {
            Ok(n) => n == self.neighborhood && n.len() < self.set.len(),
            Err(_) => false,
        }
    }
}

struct Augmenter<'a> {
    d: &'a BipartiteDigraph,
    source: Side,
    // target index -> matched source index
    mate: Vec<Option<usize>>,
    seen_sources: u64,
    seen_targets: u64,
}

impl Augmenter<'_> {
    fn augment(&mut self, s: usize) -> bool {
        self.seen_sources |= 1 << s;
        let row = self.d.out_row(VertexId::new(self.source, s));
        for t in bits(row) {
            if self.seen_targets & (1 << t) != 0 {
                continue;
            }
            self.seen_targets |= 1 << t;
            if self.mate[t].is_none_or(|m| self.augment(m)) {
                self.mate[t] = Some(s);
                return true;
            }
        }
        false
    }
}

/// Maximum matching by repeated augmenting-path search, scanning sources and
/// their out-neighbours in index order. When some source stays unmatched, the
/// vertices explored by the last failed search form a Hall violator.
pub fn matching_with_certificate(d: &BipartiteDigraph, direction: Direction) -> (Matching, Option<HallViolator>) {
    let a = d.half_order();
    let source = direction.source();
    let mut search = Augmenter { d, source, mate: vec![None; a], seen_sources: 0, seen_targets: 0 };
    let mut violator = None;
    for s in 0..a {
        search.seen_sources = 0;
        search.seen_targets = 0;
        if !search.augment(s) {
            violator = Some(HallViolator {
                direction,
                set: VertexSet::from_row(source, search.seen_sources),
                neighborhood: VertexSet::from_row(direction.target(), search.seen_targets),
            });
        }
    }
    let mut arcs: Vec<_> = search
        .mate
        .iter()
        .enumerate()
        .filter_map(|(t, m)| m.map(|s| (VertexId::new(source, s), VertexId::new(direction.target(), t))))
        .collect();
    arcs.sort_unstable();
    (Matching { direction, arcs }, violator)
}

pub fn max_matching(d: &BipartiteDigraph, direction: Direction) -> Matching {
    matching_with_certificate(d, direction).0
}

/// `None` iff a perfect matching exists in `direction`.
pub fn hall_violator(d: &BipartiteDigraph, direction: Direction) -> Option<HallViolator> {
    matching_with_certificate(d, direction).1
}

/// Vertex-disjoint cycles covering `V(D)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleFactor {
    pub cycles: Vec<Cycle>,
}

impl CycleFactor {
    /// Every cycle is valid in `d` and the cycles partition `V(D)`.
    pub fn is_valid_in(&self, d: &BipartiteDigraph) -> bool {
        let mut covered = VertexSet::new();
        for cycle in &self.cycles {
            if !cycle.is_valid_in(d) {
                return false;
            }
            for &v in cycle.vertices() {
                if !covered.insert(v) {
                    return false;
                }
            }
        }
        covered == d.vertex_set()
    }
}

/// A cycle factor built from the union of perfect matchings `X → Y` and
/// `Y → X`, or the Hall violator of the first direction that has none.
///
/// Cycles start at the smallest X vertex not yet covered.
pub fn cycle_factor(d: &BipartiteDigraph) -> Result<CycleFactor, HallViolator> {
    let mut successors = Vec::with_capacity(2);
    for direction in Direction::BOTH {
        let (matching, violator) = matching_with_certificate(d, direction);
        if let Some(v) = violator {
            return Err(v);
        }
        let mut succ = vec![0; d.half_order()];
        for (u, v) in matching.arcs {
            succ[u.index] = v.index;
        }
        successors.push(succ);
    }
    let (x_to_y, y_to_x) = (&successors[0], &successors[1]);
    let mut covered = vec![false; d.half_order()];
    let mut cycles = Vec::new();
    for start in 0..d.half_order() {
        if covered[start] {
            continue;
        }
        let mut walk = Vec::new();
        let mut x = start;
        loop {
            covered[x] = true;
            walk.push(VertexId::x(x));
            walk.push(VertexId::y(x_to_y[x]));
            x = y_to_x[x_to_y[x]];
            if x == start {
                break;
            }
        }
        cycles.push(Cycle::new_unchecked(walk));
    }
    Ok(CycleFactor { cycles })
}

pub const BRUTE_FORCE_MAX_HALF_ORDER: usize = 8;

/// Tries every bijection source → target (all `a!` of them, Heap's order).
/// Independent of the augmenting-path search; used as its oracle.
pub fn brute_force_has_perfect_matching(d: &BipartiteDigraph, direction: Direction) -> Result<bool, SearchError> {
    let a = d.half_order();
    if a > BRUTE_FORCE_MAX_HALF_ORDER {
        return Err(SearchError::BruteForceCap { a, max: BRUTE_FORCE_MAX_HALF_ORDER });
    }
    let source = direction.source();
    let target = direction.target();
    let uses_arcs = |perm: &[usize]| {
        perm.iter().enumerate().all(|(s, &t)| d.has_arc(VertexId::new(source, s), VertexId::new(target, t)))
    };
    let mut perm: Vec<usize> = (0..a).collect();
    if uses_arcs(&perm) {
        return Ok(true);
    }
    let mut counters = vec![0; a];
    let mut i = 0;
    while i < a {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            if uses_arcs(&perm) {
                return Ok(true);
            }
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_d8, complete_bipartite, directed_cycle};
    use crate::graph::VertexId as V;

    fn funnel() -> BipartiteDigraph {
        BipartiteDigraph::from_arcs(2, [(V::x(0), V::y(0)), (V::x(1), V::y(0))]).unwrap()
    }

    #[test]
    fn matching_sizes() {
        assert_eq!(max_matching(&complete_bipartite(4).unwrap(), Direction::XtoY).len(), 4);
        assert_eq!(max_matching(&funnel(), Direction::XtoY).len(), 1);
        let d8 = build_d8();
        let m = max_matching(&d8, Direction::XtoY);
        assert!(m.is_perfect(&d8) && m.is_valid_in(&d8));
    }

    #[test]
    fn funnel_violator() {
        let v = hall_violator(&funnel(), Direction::XtoY).unwrap();
        assert_eq!(v.set, [V::x(0), V::x(1)].into_iter().collect());
        assert_eq!(v.neighborhood, [V::y(0)].into_iter().collect());
        assert!(v.verify(&funnel()));
        assert!(hall_violator(&complete_bipartite(3).unwrap(), Direction::YtoX).is_none());
        for dir in Direction::BOTH {
            assert!(hall_violator(&build_d8(), dir).is_none());
        }
    }

    #[test]
    fn violator_verification_rejects_tampering() {
        let mut v = hall_violator(&funnel(), Direction::XtoY).unwrap();
        v.neighborhood = VertexSet::new();
        assert!(!v.verify(&funnel()));
    }

    #[test]
    fn directed_cycle_factor_is_the_cycle() {
        let d = directed_cycle(4).unwrap();
        let f = cycle_factor(&d).unwrap();
        assert_eq!(f.cycles.len(), 1);
        assert_eq!(f.cycles[0].len(), 8);
        assert!(f.is_valid_in(&d));
    }

    #[test]
    fn d8_factor_covers_every_vertex() {
        let d = build_d8();
        let f = cycle_factor(&d).unwrap();
        assert!(f.is_valid_in(&d));
        let rendered: Vec<_> = f.cycles.iter().map(|c| c.to_string()).collect();
        assert_eq!(rendered, ["X0 Y0 X1 Y1", "X2 Y3 X3 Y2"]);
    }

    #[test]
    fn factor_failure_reports_direction() {
        let d = BipartiteDigraph::from_arcs(
            2,
            [(V::x(0), V::y(0)), (V::x(1), V::y(0)), (V::y(0), V::x(0)), (V::y(1), V::x(1))],
        )
        .unwrap();
        let v = cycle_factor(&d).unwrap_err();
        assert_eq!(v.direction, Direction::XtoY);
        assert_eq!(v.set, [V::x(0), V::x(1)].into_iter().collect());
    }

    #[test]
    fn brute_force_oracle() {
        assert_eq!(brute_force_has_perfect_matching(&complete_bipartite(3).unwrap(), Direction::XtoY), Ok(true));
        assert_eq!(brute_force_has_perfect_matching(&funnel(), Direction::XtoY), Ok(false));
        assert_eq!(brute_force_has_perfect_matching(&build_d8(), Direction::XtoY), Ok(true));
        let big = BipartiteDigraph::new(9).unwrap();
        assert!(brute_force_has_perfect_matching(&big, Direction::XtoY).is_err());
    }
}
