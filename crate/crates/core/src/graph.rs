//! Balanced bipartite digraphs.
//!
//! Each vertex keeps two 64-bit rows (out and in) indexed by the opposite
//! side, so arc tests are a single mask and neighbourhood unions are ORs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::GraphError;

/// Largest supported half-order `a`.
pub const MAX_HALF_ORDER: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::X => "X",
            Side::Y => "Y",
        })
    }
}

/// A vertex named by its partite set and zero-based index, e.g. `X0`, `Y3`.
///
/// Ordering is `(side, index)` with `X < Y`, which is the canonical order used
/// everywhere output has to be deterministic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub side: Side,
    pub index: usize,
}

impl VertexId {
    pub const fn new(side: Side, index: usize) -> Self {
        VertexId { side, index }
    }

    pub const fn x(index: usize) -> Self {
        VertexId::new(Side::X, index)
    }

    pub const fn y(index: usize) -> Self {
        VertexId::new(Side::Y, index)
    }

    fn bit(self) -> u64 {
        1u64 << self.index
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side, self.index)
    }
}

impl FromStr for VertexId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let side = match chars.next() {
            Some('X') | Some('x') => Side::X,
            Some('Y') | Some('y') => Side::Y,
            _ => return Err(format!("expected vertex like X0 or Y3, got {s:?}")),
        };
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("expected vertex like X0 or Y3, got {s:?}"));
        }
        let index = digits.parse().map_err(|_| format!("vertex index out of range in {s:?}"))?;
        Ok(VertexId { side, index })
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A set of vertices, one bit row per side.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    rows: [u64; 2],
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_row(side: Side, row: u64) -> Self {
        let mut rows = [0; 2];
        rows[side.slot()] = row;
        VertexSet { rows }
    }

    pub fn row(&self, side: Side) -> u64 {
        self.rows[side.slot()]
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        let fresh = !self.contains(v);
        self.rows[v.side.slot()] |= v.bit();
        fresh
    }

    pub fn remove(&mut self, v: VertexId) -> bool {
        let present = self.contains(v);
        self.rows[v.side.slot()] &= !v.bit();
        present
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.index < 64 && self.rows[v.side.slot()] & v.bit() != 0
    }

    pub fn len(&self) -> usize {
        (self.rows[0].count_ones() + self.rows[1].count_ones()) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.rows == [0, 0]
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet { rows: [self.rows[0] | other.rows[0], self.rows[1] | other.rows[1]] }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet { rows: [self.rows[0] & other.rows[0], self.rows[1] & other.rows[1]] }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.intersection(other) == *self
    }

    /// The single side all members lie on, or `None` for an empty or mixed set.
    pub fn side(&self) -> Option<Side> {
        match (self.rows[0] != 0, self.rows[1] != 0) {
            (true, false) => Some(Side::X),
            (false, true) => Some(Side::Y),
            _ => None,
        }
    }

    /// Members in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        [Side::X, Side::Y]
            .into_iter()
            .flat_map(move |side| bits(self.rows[side.slot()]).map(move |i| VertexId::new(side, i)))
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut set = VertexSet::new();
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let members = Vec::<VertexId>::deserialize(deserializer)?;
        if let Some(v) = members.iter().find(|v| v.index >= 64) {
            return Err(serde::de::Error::custom(format!("vertex {v} out of range")));
        }
        Ok(members.into_iter().collect())
    }
}

/// Iterates the set bit positions of `row` in increasing order.
pub(crate) fn bits(mut row: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if row == 0 {
            None
        } else {
            let i = row.trailing_zeros() as usize;
            row &= row - 1;
            Some(i)
        }
    })
}

/// A simple balanced bipartite digraph with partite sets `X` and `Y` of size `a`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BipartiteDigraph {
    a: usize,
    out_rows: [Vec<u64>; 2],
    in_rows: [Vec<u64>; 2],
    arc_count: usize,
}

impl fmt::Debug for BipartiteDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BipartiteDigraph")
            .field("a", &self.a)
            .field("arcs", &self.arcs().map(|(u, v)| format!("{u}->{v}")).collect::<Vec<_>>())
            .finish()
    }
}

impl BipartiteDigraph {
    /// An arcless digraph on `2a` vertices.
    pub fn new(a: usize) -> Result<Self, GraphError> {
        if a == 0 {
            return Err(GraphError::ZeroHalfOrder);
        }
        if a > MAX_HALF_ORDER {
            return Err(GraphError::HalfOrderTooLarge(a));
        }
        Ok(BipartiteDigraph { a, out_rows: [vec![0; a], vec![0; a]], in_rows: [vec![0; a], vec![0; a]], arc_count: 0 })
    }

    /// Builds a digraph from an arc list; duplicates are ignored.
    pub fn from_arcs<I>(a: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut d = Self::new(a)?;
        for (u, v) in arcs {
            d.add_arc(u, v)?;
        }
        Ok(d)
    }

    /// Half-order `a = |X| = |Y|`.
    pub fn half_order(&self) -> usize {
        self.a
    }

    /// Number of vertices, `2a`.
    pub fn order(&self) -> usize {
        2 * self.a
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Mask with the low `a` bits set.
    pub fn full_row(&self) -> u64 {
        if self.a == 64 {
            u64::MAX
        } else {
            (1u64 << self.a) - 1
        }
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.index < self.a
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(GraphError::OutOfRange { vertex: v, a: self.a })
        }
    }

    /// All `2a` vertices in canonical order (X side first).
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        let a = self.a;
        (0..a).map(VertexId::x).chain((0..a).map(VertexId::y))
    }

    /// Every vertex of `D` as a set.
    pub fn vertex_set(&self) -> VertexSet {
        let full = self.full_row();
        VertexSet { rows: [full, full] }
    }

    /// Inserts arc `u -> v`. Returns `Ok(false)` when the arc was already present.
    pub fn add_arc(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check_arc(u, v)?;
        if self.has_arc(u, v) {
            return Ok(false);
        }
        self.out_rows[u.side.slot()][u.index] |= v.bit();
        self.in_rows[v.side.slot()][v.index] |= u.bit();
        self.arc_count += 1;
        Ok(true)
    }

    /// Deletes arc `u -> v`. Returns `Ok(false)` when the arc was absent.
    pub fn remove_arc(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check_arc(u, v)?;
        if !self.has_arc(u, v) {
            return Ok(false);
        }
        self.out_rows[u.side.slot()][u.index] &= !v.bit();
        self.in_rows[v.side.slot()][v.index] &= !u.bit();
        self.arc_count -= 1;
        Ok(true)
    }

    fn check_arc(&self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u.side == v.side {
            return Err(GraphError::SameSide { tail: u, head: v });
        }
        Ok(())
    }

    /// Whether `u -> v` is an arc. Out-of-range or same-side pairs are never arcs.
    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        u.side != v.side
            && self.contains_vertex(u)
            && self.contains_vertex(v)
            && self.out_rows[u.side.slot()][u.index] & v.bit() != 0
    }

    /// Whether `u` and `v` are adjacent (an arc in at least one direction).
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    /// Arcs in canonical order: X tails by index then head index, then Y tails.
    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices().flat_map(move |u| bits(self.out_row(u)).map(move |j| (u, VertexId::new(u.side.opposite(), j))))
    }

    /// Out-neighbours of `v` as a bit row over the opposite side.
    ///
    /// # Panics
    ///
    /// Panics if `v` is out of range.
    pub fn out_row(&self, v: VertexId) -> u64 {
        self.out_rows[v.side.slot()][v.index]
    }

    /// In-neighbours of `v` as a bit row over the opposite side.
    ///
    /// # Panics
    ///
    /// Panics if `v` is out of range.
    pub fn in_row(&self, v: VertexId) -> u64 {
        self.in_rows[v.side.slot()][v.index]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_row(v).count_ones() as usize
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_row(v).count_ones() as usize
    }

    /// `d(v) = d⁺(v) + d⁻(v)`.
    pub fn degree(&self, v: VertexId) -> usize {
        self.out_degree(v) + self.in_degree(v)
    }

    /// `d(v, A) = d⁺(v, A) + d⁻(v, A)`.
    pub fn degree_in_set(&self, v: VertexId, set: &VertexSet) -> usize {
        let opposite = set.row(v.side.opposite());
        ((self.out_row(v) & opposite).count_ones() + (self.in_row(v) & opposite).count_ones()) as usize
    }

    pub fn out_neighbors(&self, v: VertexId) -> VertexSet {
        VertexSet::from_row(v.side.opposite(), self.out_row(v))
    }

    pub fn in_neighbors(&self, v: VertexId) -> VertexSet {
        VertexSet::from_row(v.side.opposite(), self.in_row(v))
    }

    /// `N⁺(S)` for a one-sided set `S`. The empty set maps to the empty set.
    pub fn out_neighbors_of_set(&self, set: &VertexSet) -> Result<VertexSet, GraphError> {
        if set.is_empty() {
            return Ok(VertexSet::new());
        }
        let side = set.side().ok_or(GraphError::MixedSides)?;
        let members = set.row(side);
        if members & !self.full_row() != 0 {
            let index = 63 - (members & !self.full_row()).leading_zeros() as usize;
            return Err(GraphError::OutOfRange { vertex: VertexId::new(side, index), a: self.a });
        }
        let row = bits(members).fold(0, |acc, i| acc | self.out_rows[side.slot()][i]);
        Ok(VertexSet::from_row(side.opposite(), row))
    }

    /// Dense index in `0..2a`: X vertices first.
    pub fn flat_index(&self, v: VertexId) -> usize {
        v.side.slot() * self.a + v.index
    }

    pub fn vertex_at(&self, flat: usize) -> VertexId {
        if flat < self.a {
            VertexId::x(flat)
        } else {
            VertexId::y(flat - self.a)
        }
    }

    /// Out-neighbours of a dense index as dense indices.
    pub(crate) fn flat_out(&self, flat: usize) -> impl Iterator<Item = usize> + '_ {
        let v = self.vertex_at(flat);
        let base = v.side.opposite().slot() * self.a;
        bits(self.out_row(v)).map(move |j| base + j)
    }

    pub(crate) fn flat_in(&self, flat: usize) -> impl Iterator<Item = usize> + '_ {
        let v = self.vertex_at(flat);
        let base = v.side.opposite().slot() * self.a;
        bits(self.in_row(v)).map(move |j| base + j)
    }

    /// Undirected neighbours in `UG(D)` as dense indices.
    pub(crate) fn flat_adjacent(&self, flat: usize) -> impl Iterator<Item = usize> + '_ {
        let v = self.vertex_at(flat);
        let base = v.side.opposite().slot() * self.a;
        bits(self.out_row(v) | self.in_row(v)).map(move |j| base + j)
    }

    /// Sorted `(out, in)` degree signatures of each side; an isomorphism invariant.
    pub fn degree_signature(&self) -> [Vec<(usize, usize)>; 2] {
        let side = |s: Side| {
            let mut sig: Vec<_> = (0..self.a)
                .map(|i| {
                    let v = VertexId::new(s, i);
                    (self.out_degree(v), self.in_degree(v))
                })
                .collect();
            sig.sort_unstable();
            sig
        };
        [side(Side::X), side(Side::Y)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_rejects_zero_and_oversized() {
        assert_eq!(BipartiteDigraph::new(0), Err(GraphError::ZeroHalfOrder));
        assert_eq!(BipartiteDigraph::new(65), Err(GraphError::HalfOrderTooLarge(65)));
        let d = BipartiteDigraph::new(4).unwrap();
        assert_eq!(d.order(), 8);
        assert_eq!(d.arc_count(), 0);
        let d = BipartiteDigraph::new(1).unwrap();
        assert_eq!(d.vertices().collect::<Vec<_>>(), vec![VertexId::x(0), VertexId::y(0)]);
        assert!(BipartiteDigraph::new(64).is_ok());
    }

    #[test]
    fn add_arc_is_idempotent_and_checked() {
        let mut d = BipartiteDigraph::new(2).unwrap();
        assert_eq!(d.add_arc(VertexId::x(0), VertexId::y(0)), Ok(true));
        assert_eq!(d.add_arc(VertexId::x(0), VertexId::y(0)), Ok(false));
        assert_eq!(d.arc_count(), 1);
        assert!(matches!(d.add_arc(VertexId::x(0), VertexId::x(1)), Err(GraphError::SameSide { .. })));
        assert!(matches!(d.add_arc(VertexId::x(0), VertexId::y(2)), Err(GraphError::OutOfRange { .. })));
        assert_eq!(d.arc_count(), 1);
        assert_eq!(d.remove_arc(VertexId::x(0), VertexId::y(0)), Ok(true));
        assert_eq!(d.remove_arc(VertexId::x(0), VertexId::y(0)), Ok(false));
        assert_eq!(d.arc_count(), 0);
    }

    #[test]
    fn degrees_of_empty_digraph_are_zero() {
        let d = BipartiteDigraph::new(3).unwrap();
        assert!(d.vertices().all(|v| d.degree(v) == 0));
    }

    #[test]
    fn degree_in_set_counts_both_directions() {
        let mut d = BipartiteDigraph::new(3).unwrap();
        d.add_arc(VertexId::x(0), VertexId::y(0)).unwrap();
        d.add_arc(VertexId::y(0), VertexId::x(0)).unwrap();
        d.add_arc(VertexId::x(0), VertexId::y(1)).unwrap();
        d.add_arc(VertexId::y(2), VertexId::x(0)).unwrap();
        let set: VertexSet = [VertexId::y(0), VertexId::y(2), VertexId::x(1)].into_iter().collect();
        assert_eq!(d.degree_in_set(VertexId::x(0), &set), 3);
        assert_eq!(d.degree(VertexId::x(0)), 4);
    }

    #[test]
    fn set_neighbourhood_rejects_mixed_sides() {
        let d = BipartiteDigraph::new(2).unwrap();
        let mixed: VertexSet = [VertexId::x(0), VertexId::y(0)].into_iter().collect();
        assert_eq!(d.out_neighbors_of_set(&mixed), Err(GraphError::MixedSides));
        assert_eq!(d.out_neighbors_of_set(&VertexSet::new()), Ok(VertexSet::new()));
    }

    #[test]
    fn vertex_names_parse() {
        assert_eq!("X12".parse::<VertexId>(), Ok(VertexId::x(12)));
        assert_eq!("y0".parse::<VertexId>(), Ok(VertexId::y(0)));
        assert!("Z1".parse::<VertexId>().is_err());
        assert!("X".parse::<VertexId>().is_err());
        assert!("X-1".parse::<VertexId>().is_err());
    }

    #[test]
    fn arcs_come_out_in_canonical_order() {
        let mut d = BipartiteDigraph::new(2).unwrap();
        d.add_arc(VertexId::y(1), VertexId::x(0)).unwrap();
        d.add_arc(VertexId::x(1), VertexId::y(0)).unwrap();
        d.add_arc(VertexId::x(0), VertexId::y(1)).unwrap();
        d.add_arc(VertexId::y(0), VertexId::x(1)).unwrap();
        let arcs: Vec<_> = d.arcs().map(|(u, v)| format!("{u}{v}")).collect();
        assert_eq!(arcs, ["X0Y1", "X1Y0", "Y0X1", "Y1X0"]);
    }
}
