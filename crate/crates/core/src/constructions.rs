//! Reference digraphs, standard families, seeded generators, budgeted
//! enumeration of strong `B_k` digraphs, and brute-force isomorphism.

use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::conditions::{bk_pair_ok, check_condition_bk};
use crate::error::{GraphError, ParamError, SearchError};
use crate::graph::{bits, BipartiteDigraph, Side, VertexId};
use crate::rng::Stream;

fn x(i: usize) -> VertexId {
    VertexId::x(i)
}

fn y(i: usize) -> VertexId {
    VertexId::y(i)
}

fn both_ways(u: VertexId, v: VertexId) -> [(VertexId, VertexId); 2] {
    [(u, v), (v, u)]
}

/// The strong, non-Hamiltonian digraph of order 8 whose dominating pairs all
/// have `max{d(x), d(y)} ≥ 2a − 1`.
pub fn build_d8() -> BipartiteDigraph {
    let mut arcs = vec![(y(0), x(1)), (y(1), x(0)), (x(2), y(3)), (x(3), y(2))];
    for i in 0..4 {
        arcs.extend(both_ways(x(i), y(i)));
    }
    for (u, v) in [(y(0), x(2)), (y(0), x(3)), (y(1), x(2)), (y(1), x(3))] {
        arcs.extend(both_ways(u, v));
    }
    BipartiteDigraph::from_arcs(4, arcs).expect("D(8) arcs are well formed")
}

/// The strong digraph of order 10 with no cycle of length 8 whose dominating
/// pairs all have `max{d(x), d(y)} ≥ 2a − 2`.
pub fn build_d10() -> BipartiteDigraph {
    let mut arcs = Vec::new();
    for i in 1..=3 {
        for j in [0, 4] {
            arcs.extend(both_ways(x(i), y(j)));
        }
        for j in 1..=3 {
            arcs.push((x(i), y(j)));
        }
        arcs.extend(both_ways(x(i), y(i + 1)));
    }
    arcs.extend(both_ways(x(4), y(4)));
    arcs.extend(both_ways(x(0), y(0)));
    arcs.extend(both_ways(x(3), y(1)));
    // x3 <-> y4 appears twice above; from_arcs keeps one copy.
    BipartiteDigraph::from_arcs(5, arcs).expect("D(10) arcs are well formed")
}

/// `X0 Y0 X1 Y1 … X_{a−1} Y_{a−1} X0`.
pub fn directed_cycle(a: usize) -> Result<BipartiteDigraph, GraphError> {
    BipartiteDigraph::from_arcs(a, (0..a).flat_map(|i| [(x(i), y(i)), (y(i), x((i + 1) % a))]))
}

/// All `2a²` cross arcs.
pub fn complete_bipartite(a: usize) -> Result<BipartiteDigraph, GraphError> {
    BipartiteDigraph::from_arcs(a, (0..a).flat_map(|i| (0..a).flat_map(move |j| [(x(i), y(j)), (y(j), x(i))])))
}

/// Parameters of the random generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub a: usize,
    pub k: usize,
    pub seed: u64,
    pub arc_probability: f64,
    pub max_attempts: u32,
    pub repair_iterations: u32,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig { a: 4, k: 2, seed: 0, arc_probability: 0.7, max_attempts: 64, repair_iterations: 64 }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), ParamError> {
        if !(0.0..=1.0).contains(&self.arc_probability) {
            return Err(ParamError::ArcProbability(self.arc_probability));
        }
        if self.max_attempts == 0 {
            return Err(ParamError::ZeroAttempts);
        }
        if self.a == 0 {
            return Err(GraphError::ZeroHalfOrder.into());
        }
        if self.a > crate::graph::MAX_HALF_ORDER {
            return Err(GraphError::HalfOrderTooLarge(self.a).into());
        }
        Ok(())
    }
}

/// Checks `a ≥ 4` and `2 ≤ k ≤ ⌊a/2⌋`.
pub fn check_wang_range(a: usize, k: usize) -> Result<(), ParamError> {
    if a < 4 {
        return Err(ParamError::UnsupportedHalfOrder { a, expected: "2a >= 8" });
    }
    if k < 2 || k > a / 2 {
        return Err(ParamError::KOutOfRange { a, k, max: a / 2 });
    }
    Ok(())
}

fn sample(stream: &mut Stream, a: usize, p: f64) -> BipartiteDigraph {
    let mut d = BipartiteDigraph::new(a).expect("validated half-order");
    for side in [Side::X, Side::Y] {
        for i in 0..a {
            for j in 0..a {
                if stream.unit() < p {
                    d.add_arc(VertexId::new(side, i), VertexId::new(side.opposite(), j)).expect("cross arc");
                }
            }
        }
    }
    d
}

/// Each of the `2a²` arcs, in canonical order, is kept iff the next `unit()`
/// draw of the seeded stream is below `arc_probability`.
pub fn random_digraph(config: &GeneratorConfig) -> Result<BipartiteDigraph, ParamError> {
    config.validate()?;
    Ok(sample(&mut Stream::new(config.seed), config.a, config.arc_probability))
}

/// Samples with [`random_digraph`]'s rule, then repairs: while some dominating
/// pair violates `B_k`, either add a random missing arc at its lower-degree
/// end or delete one of its two arcs into the shared out-neighbour (coin
/// flip); while the digraph is not strong, add a random arc leaving the set
/// reachable from an unreachable pair's tail. Gives up after `max_attempts`
/// samples of `repair_iterations` repairs each.
///
/// Heuristic: the output is not uniform over strong `B_k` digraphs.
pub fn random_bk_digraph(config: &GeneratorConfig) -> Result<Option<BipartiteDigraph>, ParamError> {
    config.validate()?;
    check_wang_range(config.a, config.k)?;
    let mut stream = Stream::new(config.seed);
    for _ in 0..config.max_attempts {
        let mut d = sample(&mut stream, config.a, config.arc_probability);
        for iteration in 0..=config.repair_iterations {
            let report = check_condition_bk(&d, config.k);
            let unreachable = if report.holds { d.unreachable_pair() } else { None };
            if report.holds && unreachable.is_none() {
                return Ok(Some(d));
            }
            if iteration == config.repair_iterations {
                break;
            }
            match (report.witness, unreachable) {
                (Some(crate::conditions::Witness::Pair { u, v, via: Some(z), .. }), _) => {
                    repair_pair(&mut d, &mut stream, u, v, z);
                }
                (_, Some((from, _))) => connect_outward(&mut d, &mut stream, from),
                _ => unreachable!("failed B_k reports carry a pair witness"),
            }
        }
    }
    Ok(None)
}

fn repair_pair(d: &mut BipartiteDigraph, stream: &mut Stream, u: VertexId, v: VertexId, z: VertexId) {
    if stream.coin() {
        let low = if d.degree(v) < d.degree(u) { v } else { u };
        let full = d.full_row();
        let missing_out = full & !d.out_row(low);
        let missing_in = full & !d.in_row(low);
        let total = (missing_out.count_ones() + missing_in.count_ones()) as usize;
        if total > 0 {
            let pick = stream.below(total);
            let other = low.side.opposite();
            let out_count = missing_out.count_ones() as usize;
            if pick < out_count {
                let j = bits(missing_out).nth(pick).expect("in range");
                d.add_arc(low, VertexId::new(other, j)).expect("cross arc");
            } else {
                let j = bits(missing_in).nth(pick - out_count).expect("in range");
                d.add_arc(VertexId::new(other, j), low).expect("cross arc");
            }
            return;
        }
    }
    let tail = if stream.coin() { u } else { v };
    d.remove_arc(tail, z).expect("cross arc");
}

fn connect_outward(d: &mut BipartiteDigraph, stream: &mut Stream, from: VertexId) {
    let mut reached = crate::graph::VertexSet::new();
    let mut stack = vec![from];
    reached.insert(from);
    while let Some(v) = stack.pop() {
        for w in d.out_neighbors(v).iter() {
            if reached.insert(w) {
                stack.push(w);
            }
        }
    }
    let candidates: Vec<(VertexId, VertexId)> = reached
        .iter()
        .flat_map(|r| {
            let side = r.side.opposite();
            bits(d.full_row() & !reached.row(side)).map(move |j| (r, VertexId::new(side, j)))
        })
        .collect();
    if !candidates.is_empty() {
        let (r, w) = candidates[stream.below(candidates.len())];
        d.add_arc(r, w).expect("cross arc");
    }
}

/// How [`enumerate_bk`] drops digraphs equivalent to ones already emitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dedup {
    None,
    /// Exact: brute-force isomorphism against earlier emissions with the same
    /// degree signature.
    Isomorphism,
    /// Lossy: at most one emission per degree signature.
    DegreeSequence,
}

impl Dedup {
    /// Isomorphism reduction at `a = 4`, degree-signature hashing above.
    pub fn default_for(a: usize) -> Self {
        if a <= 4 {
            Dedup::Isomorphism
        } else {
            Dedup::DegreeSequence
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub a: usize,
    pub k: usize,
    pub budget: u64,
    pub dedup: Dedup,
    pub nodes: u64,
    pub leaves: u64,
    pub emitted: u64,
    pub duplicates: u64,
    /// True only when the whole pruned search tree was explored.
    pub complete: bool,
}

/// Side-swap invariant key for grouping candidates.
fn signature(d: &BipartiteDigraph) -> Vec<(usize, usize)> {
    let [mut sx, mut sy] = d.degree_signature();
    if sy < sx {
        std::mem::swap(&mut sx, &mut sy);
    }
    sx.push((usize::MAX, d.arc_count()));
    sx.extend(sy);
    sx
}

struct Enumerator<'s, F> {
    a: usize,
    k: usize,
    budget: u64,
    arcs: Vec<(VertexId, VertexId)>,
    d: BipartiteDigraph,
    undecided_out: Vec<usize>,
    undecided_in: Vec<usize>,
    nodes: u64,
    leaves: u64,
    emitted: u64,
    duplicates: u64,
    stopped: bool,
    dedup: Dedup,
    iso_cache: HashMap<Vec<(usize, usize)>, Vec<BipartiteDigraph>>,
    seen_signatures: HashSet<Vec<(usize, usize)>>,
    sink: &'s mut F,
}

impl<F: FnMut(&BipartiteDigraph) -> ControlFlow<()>> Enumerator<'_, F> {
    fn max_degree(&self, v: VertexId) -> usize {
        let f = self.d.flat_index(v);
        self.d.degree(v) + self.undecided_out[f] + self.undecided_in[f]
    }

    /// Cuts partial assignments that can no longer extend to a strong `B_k`
    /// digraph, looking only at what the last decision on `u -> v` changed.
    fn viable(&self, u: VertexId, v: VertexId) -> bool {
        let (fu, fv) = (self.d.flat_index(u), self.d.flat_index(v));
        if self.undecided_out[fu] == 0 && self.d.out_degree(u) == 0 {
            return false;
        }
        if self.undecided_in[fv] == 0 && self.d.in_degree(v) == 0 {
            return false;
        }
        // Pairs only gain members and degrees only lose headroom, so checking
        // the pairs at both endpoints against achievable degrees is enough.
        for t in [u, v] {
            let max_t = self.max_degree(t);
            for p in crate::conditions::partners(&self.d, t).iter() {
                if !bk_pair_ok(self.a, self.k, max_t, self.max_degree(p)) {
                    return false;
                }
            }
        }
        true
    }

    fn leaf(&mut self) {
        self.leaves += 1;
        if !check_condition_bk(&self.d, self.k).holds || !self.d.is_strongly_connected() {
            return;
        }
        let fresh = match self.dedup {
            Dedup::None => true,
            Dedup::DegreeSequence => self.seen_signatures.insert(signature(&self.d)),
            Dedup::Isomorphism => {
                let bucket = self.iso_cache.entry(signature(&self.d)).or_default();
                let known = bucket.iter().any(|e| is_isomorphic(e, &self.d).unwrap_or(false));
                if !known {
                    bucket.push(self.d.clone());
                }
                !known
            }
        };
        if !fresh {
            self.duplicates += 1;
            return;
        }
        self.emitted += 1;
        if (self.sink)(&self.d).is_break() {
            self.stopped = true;
        }
    }

    fn descend(&mut self, depth: usize) {
        if self.stopped {
            return;
        }
        if depth == self.arcs.len() {
            self.leaf();
            return;
        }
        let (u, v) = self.arcs[depth];
        let (fu, fv) = (self.d.flat_index(u), self.d.flat_index(v));
        self.undecided_out[fu] -= 1;
        self.undecided_in[fv] -= 1;
        for include in [true, false] {
            if self.stopped {
                break;
            }
            if self.nodes >= self.budget {
                self.stopped = true;
                break;
            }
            self.nodes += 1;
            if include {
                self.d.add_arc(u, v).expect("cross arc");
            }
            if self.viable(u, v) {
                self.descend(depth + 1);
            }
            if include {
                self.d.remove_arc(u, v).expect("cross arc");
            }
        }
        self.undecided_out[fu] += 1;
        self.undecided_in[fv] += 1;
    }
}

/// Depth-first search over arc subsets (arcs in canonical order, "include"
/// branch first) that hands every strong `B_k` digraph it reaches to `sink`.
///
/// Branches are cut when a vertex can no longer get an out- or in-arc, or a
/// dominating pair already present can no longer meet the `B_k` bounds even
/// if every undecided incident arc were added. `budget` caps visited nodes;
/// `complete` in the summary is true only if the tree was exhausted.
pub fn enumerate_bk<F>(
    a: usize,
    k: usize,
    budget: u64,
    dedup: Dedup,
    mut sink: F,
) -> Result<EnumerationSummary, ParamError>
where
    F: FnMut(&BipartiteDigraph) -> ControlFlow<()>,
{
    if !(4..=5).contains(&a) {
        return Err(ParamError::UnsupportedHalfOrder { a, expected: "a in {4, 5}" });
    }
    check_wang_range(a, k)?;
    let d = BipartiteDigraph::new(a)?;
    let arcs: Vec<_> = complete_bipartite(a)?.arcs().collect();
    let mut e = Enumerator {
        a,
        k,
        budget,
        arcs,
        d,
        undecided_out: vec![a; 2 * a],
        undecided_in: vec![a; 2 * a],
        nodes: 0,
        leaves: 0,
        emitted: 0,
        duplicates: 0,
        stopped: false,
        dedup,
        iso_cache: HashMap::new(),
        seen_signatures: HashSet::new(),
        sink: &mut sink,
    };
    e.descend(0);
    Ok(EnumerationSummary {
        a,
        k,
        budget,
        dedup,
        nodes: e.nodes,
        leaves: e.leaves,
        emitted: e.emitted,
        duplicates: e.duplicates,
        complete: !e.stopped,
    })
}

pub const ISOMORPHISM_MAX_HALF_ORDER: usize = 6;

struct IsoSearch<'a> {
    from: &'a BipartiteDigraph,
    to: &'a BipartiteDigraph,
    swap: bool,
    order: Vec<VertexId>,
    image: HashMap<VertexId, VertexId>,
    taken: [u64; 2],
}

impl IsoSearch<'_> {
    fn target_side(&self, side: Side) -> Side {
        if self.swap {
            side.opposite()
        } else {
            side
        }
    }

    fn slot(side: Side) -> usize {
        match side {
            Side::X => 0,
            Side::Y => 1,
        }
    }

    fn assign(&mut self, depth: usize) -> bool {
        let Some(&v) = self.order.get(depth) else {
            return true;
        };
        let side = self.target_side(v.side);
        let free = self.to.full_row() & !self.taken[Self::slot(side)];
        for j in bits(free) {
            let w = VertexId::new(side, j);
            if self.from.out_degree(v) != self.to.out_degree(w) || self.from.in_degree(v) != self.to.in_degree(w) {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&p| {
                let q = self.image[&p];
                self.from.has_arc(v, p) == self.to.has_arc(w, q) && self.from.has_arc(p, v) == self.to.has_arc(q, w)
            });
            if !consistent {
                continue;
            }
            self.image.insert(v, w);
            self.taken[Self::slot(side)] |= 1 << j;
            if self.assign(depth + 1) {
                return true;
            }
            self.taken[Self::slot(side)] &= !(1 << j);
            self.image.remove(&v);
        }
        false
    }
}

/// Whether some relabeling (side-preserving or side-swapping, `a!·a!·2` in
/// all) maps the arcs of `d1` exactly onto those of `d2`. Relabelings are
/// built vertex by vertex and abandoned at the first inconsistent arc.
pub fn is_isomorphic(d1: &BipartiteDigraph, d2: &BipartiteDigraph) -> Result<bool, SearchError> {
    let a = d1.half_order();
    if a != d2.half_order() {
        return Err(SearchError::HalfOrderMismatch(a, d2.half_order()));
    }
    if a > ISOMORPHISM_MAX_HALF_ORDER {
        return Err(SearchError::BruteForceCap { a, max: ISOMORPHISM_MAX_HALF_ORDER });
    }
    if d1.arc_count() != d2.arc_count() || signature(d1) != signature(d2) {
        return Ok(false);
    }
    for swap in [false, true] {
        let mut search =
            IsoSearch { from: d1, to: d2, swap, order: d1.vertices().collect(), image: HashMap::new(), taken: [0, 0] };
        if search.assign(0) {
            return Ok(true);
        }
    }
    Ok(false)
}
