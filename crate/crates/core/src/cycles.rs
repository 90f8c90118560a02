//! Exact cycle searches at desk scale (order ≤ 28): Hamiltonian cycles,
//! cycles of a fixed even length, the even-cycle spectrum and `C`-bypasses.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::SearchError;
use crate::graph::{bits, BipartiteDigraph, Side, VertexId, VertexSet};

/// Largest order `2a` accepted by the exact solvers.
pub const EXACT_MAX_ORDER: usize = 28;

/// Node budget of the branch-and-bound pass tried before the subset DP.
const QUICK_SEARCH_BUDGET: u64 = 50_000;

/// A directed cycle `v₁ v₂ … v_m v₁`; the closing arc is implied.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    vertices: Vec<VertexId>,
}

impl Cycle {
    /// Wraps a vertex sequence without checking it against any digraph.
    pub fn new_unchecked(vertices: Vec<VertexId>) -> Self {
        Cycle { vertices }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    /// Even length ≥ 2, distinct vertices, and every arc (closing arc
    /// included) present in `d`. Arcs only join opposite sides, so sides
    /// alternate.
    pub fn is_valid_in(&self, d: &BipartiteDigraph) -> bool {
        let m = self.vertices.len();
        if m < 2 || !m.is_multiple_of(2) || self.vertex_set().len() != m {
            return false;
        }
        (0..m).all(|i| d.has_arc(self.vertices[i], self.vertices[(i + 1) % m]))
    }
}

fn write_vertices(f: &mut fmt::Formatter<'_>, vertices: &[VertexId]) -> fmt::Result {
    for (i, v) in vertices.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

fn parse_vertices(s: &str) -> Result<Vec<VertexId>, String> {
    s.split_whitespace().map(str::parse).collect()
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_vertices(f, &self.vertices)
    }
}

impl FromStr for Cycle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Cycle::new_unchecked(parse_vertices(s)?))
    }
}

impl Serialize for Cycle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cycle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A path `p₁ … p_r` (r ≥ 3) whose ends are distinct vertices of `host` and
/// whose interior avoids `host`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bypass {
    #[serde(serialize_with = "serialize_path", deserialize_with = "deserialize_path")]
    pub path: Vec<VertexId>,
    pub host: Cycle,
}

fn serialize_path<S: Serializer>(path: &[VertexId], serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(&Cycle::new_unchecked(path.to_vec()))
}

fn deserialize_path<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<VertexId>, D::Error> {
    parse_vertices(&String::deserialize(deserializer)?).map_err(serde::de::Error::custom)
}

impl Bypass {
    pub fn is_valid_in(&self, d: &BipartiteDigraph) -> bool {
        let r = self.path.len();
        if r < 3 || !self.host.is_valid_in(d) {
            return false;
        }
        let on_host = self.host.vertex_set();
        let (first, last) = (self.path[0], self.path[r - 1]);
        let distinct: VertexSet = self.path.iter().copied().collect();
        first != last
            && on_host.contains(first)
            && on_host.contains(last)
            && distinct.len() == r
            && self.path[1..r - 1].iter().all(|&v| !on_host.contains(v))
            && self.path.windows(2).all(|w| d.has_arc(w[0], w[1]))
    }
}

impl fmt::Display for Bypass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_vertices(f, &self.path)
    }
}

pub fn verify_cycle(d: &BipartiteDigraph, cycle: &Cycle) -> bool {
    cycle.is_valid_in(d)
}

pub fn verify_bypass(d: &BipartiteDigraph, bypass: &Bypass) -> bool {
    bypass.is_valid_in(d)
}

fn check_cap(d: &BipartiteDigraph) -> Result<(), SearchError> {
    if d.order() > EXACT_MAX_ORDER {
        Err(SearchError::CapExceeded { order: d.order(), cap: EXACT_MAX_ORDER })
    } else {
        Ok(())
    }
}

/// Result of a budgeted search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Cycle),
    NotFound,
    BudgetExhausted,
}

/// Every vertex needs an out- and an in-arc; a Hamiltonian digraph is strong.
fn obviously_non_hamiltonian(d: &BipartiteDigraph) -> bool {
    d.vertices().any(|v| d.out_row(v) == 0 || d.in_row(v) == 0) || !d.is_strongly_connected()
}

/// A Hamiltonian cycle starting at `X0`, or `None`.
///
/// A budgeted branch-and-bound pass runs first (it settles dense instances
/// in a few hundred nodes); the alternating subset DP decides the rest.
pub fn hamiltonian_cycle(d: &BipartiteDigraph) -> Result<Option<Cycle>, SearchError> {
    check_cap(d)?;
    if obviously_non_hamiltonian(d) {
        return Ok(None);
    }
    match hamiltonian_cycle_search(d, Some(QUICK_SEARCH_BUDGET))? {
        SearchOutcome::Found(c) => Ok(Some(c)),
        SearchOutcome::NotFound => Ok(None),
        SearchOutcome::BudgetExhausted => hamiltonian_cycle_dp(d),
    }
}

/// Hamiltonicity by dynamic programming over pairs of visited subsets.
///
/// A Hamiltonian cycle alternates sides, so a walk from `X0` that has used the
/// X-set `mx` and Y-set `my` ends on X when `|mx| = |my| + 1` and on Y when
/// `|mx| = |my|`. Each half-layer maps `(mx, my)` to the set of feasible end
/// vertices; only one side's ends are ever stored per layer.
pub fn hamiltonian_cycle_dp(d: &BipartiteDigraph) -> Result<Option<Cycle>, SearchError> {
    check_cap(d)?;
    let a = d.half_order();
    let full = d.full_row() as u32;
    let key = |mx: u32, my: u32| mx | (my << 14);
    let x_row = |i: usize| d.out_row(VertexId::x(i)) as u32;
    let y_row = |j: usize| d.out_row(VertexId::y(j)) as u32;

    // x_layers[j]: |my| = j, ends on X. y_layers[j]: |my| = j + 1, ends on Y.
    let mut x_layers: Vec<Vec<(u32, u32)>> = vec![vec![(key(1, 0), 1)]];
    let mut y_layers: Vec<Vec<(u32, u32)>> = Vec::new();
    for j in 0..a - 1 {
        let mut next: HashMap<u32, u32> = HashMap::new();
        for &(k, ends) in &x_layers[j] {
            let (mx, my) = (k & 0x3fff, k >> 14);
            let reach = bits(ends as u64).fold(0, |acc, x| acc | x_row(x)) & !my & full;
            for y in bits(reach as u64) {
                *next.entry(key(mx, my | 1 << y)).or_default() |= 1 << y;
            }
        }
        y_layers.push(sorted(next));

        let mut next: HashMap<u32, u32> = HashMap::new();
        for &(k, ends) in &y_layers[j] {
            let (mx, my) = (k & 0x3fff, k >> 14);
            let reach = bits(ends as u64).fold(0, |acc, y| acc | y_row(y)) & !mx & full;
            for x in bits(reach as u64) {
                *next.entry(key(mx | 1 << x, my)).or_default() |= 1 << x;
            }
        }
        x_layers.push(sorted(next));
    }

    // Close: the last X end must reach the one unused Y, which must reach X0.
    let last = &x_layers[a - 1];
    for &(k, ends) in last {
        let my = k >> 14;
        let missing = (full & !my).trailing_zeros() as usize;
        if y_row(missing) & 1 == 0 {
            continue;
        }
        let Some(x_end) = bits(ends as u64).find(|&x| x_row(x) & (1 << missing) != 0) else {
            continue;
        };
        // Walk back through the layers.
        let mut reversed = vec![VertexId::y(missing), VertexId::x(x_end)];
        let (mut mx, mut my, mut x) = (full, my, x_end);
        for j in (0..a - 1).rev() {
            mx &= !(1 << x);
            let ends = lookup(&y_layers[j], key(mx, my));
            let y = bits(ends as u64).find(|&y| y_row(y) & (1 << x) != 0).expect("dp predecessor");
            reversed.push(VertexId::y(y));
            my &= !(1 << y);
            let ends = lookup(&x_layers[j], key(mx, my));
            x = bits(ends as u64).find(|&p| x_row(p) & (1 << y) != 0).expect("dp predecessor");
            reversed.push(VertexId::x(x));
        }
        debug_assert_eq!(x, 0);
        reversed.reverse();
        return Ok(Some(Cycle::new_unchecked(reversed)));
    }
    Ok(None)
}

fn sorted(map: HashMap<u32, u32>) -> Vec<(u32, u32)> {
    let mut v: Vec<_> = map.into_iter().collect();
    v.sort_unstable();
    v
}

fn lookup(layer: &[(u32, u32)], k: u32) -> u32 {
    let i = layer.binary_search_by_key(&k, |&(key, _)| key).expect("dp state present");
    layer[i].1
}

struct HamSearch<'a> {
    d: &'a BipartiteDigraph,
    used: [u64; 2],
    path: Vec<VertexId>,
    nodes: u64,
    budget: Option<u64>,
    exhausted: bool,
}

impl HamSearch<'_> {
    fn slot(side: Side) -> usize {
        match side {
            Side::X => 0,
            Side::Y => 1,
        }
    }

    /// Every unused vertex still needs a predecessor among unused vertices or
    /// the current end, and a successor among unused vertices or `X0`.
    fn feasible(&self, end: VertexId) -> bool {
        let full = self.d.full_row();
        for side in [Side::X, Side::Y] {
            let opposite = side.opposite();
            let mut pred_pool = full & !self.used[Self::slot(opposite)];
            if end.side == opposite {
                pred_pool |= 1 << end.index;
            }
            let mut succ_pool = full & !self.used[Self::slot(opposite)];
            if opposite == Side::X {
                succ_pool |= 1;
            }
            for i in bits(full & !self.used[Self::slot(side)]) {
                let w = VertexId::new(side, i);
                if self.d.in_row(w) & pred_pool == 0 || self.d.out_row(w) & succ_pool == 0 {
                    return false;
                }
            }
        }
        true
    }

    fn extend(&mut self, end: VertexId) -> bool {
        if self.path.len() == self.d.order() {
            return self.d.has_arc(end, VertexId::x(0));
        }
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            self.exhausted = true;
            return false;
        }
        if !self.feasible(end) {
            return false;
        }
        let next = end.side.opposite();
        let candidates = self.d.out_row(end) & !self.used[Self::slot(next)];
        for i in bits(candidates) {
            let w = VertexId::new(next, i);
            self.used[Self::slot(next)] |= 1 << i;
            self.path.push(w);
            if self.extend(w) {
                return true;
            }
            self.path.pop();
            self.used[Self::slot(next)] &= !(1 << i);
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

/// Branch-and-bound Hamiltonicity: depth-first extension from `X0` in index
/// order, pruning any state where an unused vertex has lost all possible
/// predecessors or successors. `budget` caps the number of expanded nodes.
pub fn hamiltonian_cycle_search(d: &BipartiteDigraph, budget: Option<u64>) -> Result<SearchOutcome, SearchError> {
    check_cap(d)?;
    let start = VertexId::x(0);
    let mut search = HamSearch { d, used: [1, 0], path: vec![start], nodes: 0, budget, exhausted: false };
    Ok(if search.extend(start) {
        SearchOutcome::Found(Cycle::new_unchecked(search.path))
    } else if search.exhausted {
        SearchOutcome::BudgetExhausted
    } else {
        SearchOutcome::NotFound
    })
}

fn check_length(d: &BipartiteDigraph, m: usize) -> Result<(), SearchError> {
    if !m.is_multiple_of(2) {
        return Err(SearchError::OddLength(m));
    }
    if m < 2 || m > d.order() {
        return Err(SearchError::LengthOutOfRange { length: m, order: d.order() });
    }
    check_cap(d)
}

struct LengthSearch<'a> {
    d: &'a BipartiteDigraph,
    m: usize,
    start: VertexId,
    allowed: [u64; 2],
    used: [u64; 2],
    // distance to `start` by flat index, inside the allowed vertices
    dist: Vec<usize>,
    path: Vec<VertexId>,
    found: Vec<Cycle>,
    limit: usize,
}

impl LengthSearch<'_> {
    fn slot(side: Side) -> usize {
        HamSearch::slot(side)
    }

    fn distances(&mut self) {
        let d = self.d;
        let n = d.order();
        self.dist = vec![usize::MAX; n];
        let s = d.flat_index(self.start);
        self.dist[s] = 0;
        let mut queue = VecDeque::from([self.start]);
        while let Some(v) = queue.pop_front() {
            let dv = self.dist[d.flat_index(v)];
            let side = v.side.opposite();
            for i in bits(d.in_row(v) & self.allowed[Self::slot(side)]) {
                let w = VertexId::new(side, i);
                let slot = &mut self.dist[d.flat_index(w)];
                if *slot == usize::MAX {
                    *slot = dv + 1;
                    queue.push_back(w);
                }
            }
        }
    }

    /// Returns true once `limit` cycles are collected.
    fn extend(&mut self, end: VertexId) -> bool {
        let len = self.path.len();
        if len == self.m {
            if self.d.has_arc(end, self.start) {
                self.found.push(Cycle::new_unchecked(self.path.clone()));
                return self.found.len() >= self.limit;
            }
            return false;
        }
        let next = end.side.opposite();
        let slot = Self::slot(next);
        let candidates = self.d.out_row(end) & self.allowed[slot] & !self.used[slot];
        for i in bits(candidates) {
            let w = VertexId::new(next, i);
            if self.dist[self.d.flat_index(w)] > self.m - len {
                continue;
            }
            self.used[slot] |= 1 << i;
            self.path.push(w);
            let done = self.extend(w);
            self.path.pop();
            self.used[slot] &= !(1 << i);
            if done {
                return true;
            }
        }
        false
    }
}

/// Up to `limit` distinct cycles of exactly `m` vertices.
///
/// Each cycle is reported once, rotated so that its smallest vertex (always
/// an X vertex) comes first; search order is by that start vertex, then
/// depth-first in index order with distance-to-start pruning.
pub fn cycles_of_length(d: &BipartiteDigraph, m: usize, limit: usize) -> Result<Vec<Cycle>, SearchError> {
    check_length(d, m)?;
    let a = d.half_order();
    let mut found = Vec::new();
    for s in 0..a {
        if found.len() >= limit {
            break;
        }
        let start = VertexId::x(s);
        let mut search = LengthSearch {
            d,
            m,
            start,
            allowed: [d.full_row() & !((1u64 << s) - 1), d.full_row()],
            used: [1 << s, 0],
            dist: Vec::new(),
            path: vec![start],
            found: std::mem::take(&mut found),
            limit,
        };
        search.distances();
        search.extend(start);
        found = search.found;
    }
    Ok(found)
}

/// A cycle of exactly `m` vertices, if one exists.
pub fn cycle_of_length(d: &BipartiteDigraph, m: usize) -> Result<Option<Cycle>, SearchError> {
    check_length(d, m)?;
    if m == d.order() {
        return hamiltonian_cycle(d);
    }
    Ok(cycles_of_length(d, m, 1)?.pop())
}

/// `{ m even : D has a cycle of length m }`.
pub fn even_cycle_spectrum(d: &BipartiteDigraph) -> Result<BTreeSet<usize>, SearchError> {
    check_cap(d)?;
    let mut spectrum = BTreeSet::new();
    for m in (2..=d.order()).step_by(2) {
        if cycle_of_length(d, m)?.is_some() {
            spectrum.insert(m);
        }
    }
    Ok(spectrum)
}

/// A cycle of length `4 ≤ m ≤ 2a − 2`, shortest first.
pub fn nonhamiltonian_cycle_geq4(d: &BipartiteDigraph) -> Result<Option<Cycle>, SearchError> {
    check_cap(d)?;
    for m in (4..=d.order().saturating_sub(2)).step_by(2) {
        if let Some(c) = cycle_of_length(d, m)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// The first `host`-bypass in scan order: ordered pairs `(u, v)` of distinct
/// host vertices by position on the host, each with a shortest `(u, v)`-path
/// through vertices off the host.
pub fn find_bypass(d: &BipartiteDigraph, host: &Cycle) -> Result<Option<Bypass>, SearchError> {
    if !host.is_valid_in(d) {
        return Err(SearchError::InvalidHost);
    }
    if host.len() >= d.order() {
        return Err(SearchError::HostCoversAllVertices);
    }
    let on_host = host.vertex_set();
    let n = d.order();
    for &u in host.vertices() {
        // BFS over off-host vertices, seeded by u's off-host out-neighbours.
        let mut parent: Vec<Option<VertexId>> = vec![None; n];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for w in d.out_neighbors(u).iter().filter(|&w| !on_host.contains(w)) {
            parent[d.flat_index(w)] = Some(u);
            queue.push_back(w);
        }
        while let Some(w) = queue.pop_front() {
            order.push(w);
            for z in d.out_neighbors(w).iter() {
                if !on_host.contains(z) && parent[d.flat_index(z)].is_none() {
                    parent[d.flat_index(z)] = Some(w);
                    queue.push_back(z);
                }
            }
        }
        for &v in host.vertices() {
            if v == u {
                continue;
            }
            // `order` is BFS order, so the first hit is a shortest path.
            if let Some(&last) = order.iter().find(|&&w| d.has_arc(w, v)) {
                let mut path = vec![v, last];
                let mut cur = last;
                while let Some(p) = parent[d.flat_index(cur)] {
                    path.push(p);
                    if p == u {
                        break;
                    }
                    cur = p;
                }
                path.reverse();
                return Ok(Some(Bypass { path, host: host.clone() }));
            }
        }
    }
    Ok(None)
}
