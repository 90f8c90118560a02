//! Slow, obviously-correct reference computations on a plain adjacency
//! matrix. Nothing here calls the library's algorithms.

#![allow(dead_code, clippy::needless_range_loop)]

use bbd_core::{BipartiteDigraph, GeneratorConfig, Side, VertexId};

/// Vertices `X0..X(a-1)` are `0..a`, `Y0..Y(a-1)` are `a..2a`.
pub struct Matrix {
    pub a: usize,
    pub adj: Vec<Vec<bool>>,
}

impl Matrix {
    pub fn new(d: &BipartiteDigraph) -> Self {
        let a = d.half_order();
        let mut adj = vec![vec![false; 2 * a]; 2 * a];
        for (u, v) in d.arcs() {
            adj[Self::index(a, u)][Self::index(a, v)] = true;
        }
        Matrix { a, adj }
    }

    pub fn index(a: usize, v: VertexId) -> usize {
        match v.side {
            Side::X => v.index,
            Side::Y => a + v.index,
        }
    }

    pub fn vertex(&self, i: usize) -> VertexId {
        if i < self.a {
            VertexId::x(i)
        } else {
            VertexId::y(i - self.a)
        }
    }

    pub fn n(&self) -> usize {
        2 * self.a
    }

    pub fn degree(&self, i: usize) -> usize {
        (0..self.n()).filter(|&j| self.adj[i][j]).count() + (0..self.n()).filter(|&j| self.adj[j][i]).count()
    }

    pub fn same_side(&self, i: usize, j: usize) -> bool {
        (i < self.a) == (j < self.a)
    }

    /// Same-side pairs `i < j` with a common out-neighbour.
    pub fn dominating_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.same_side(i, j) && (0..self.n()).any(|w| self.adj[i][w] && self.adj[j][w]) {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }

    fn reach(&self, from: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(u) = stack.pop() {
            for w in 0..self.n() {
                let arc = if forward { self.adj[u][w] } else { self.adj[w][u] };
                if arc && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn strong(&self) -> bool {
        self.reach(0, true).iter().all(|&s| s) && self.reach(0, false).iter().all(|&s| s)
    }

    /// Underlying graph stays connected after deleting any single vertex.
    pub fn two_connected(&self) -> bool {
        let n = self.n();
        let connected_without = |removed: Option<usize>| {
            let start = (0..n).find(|&v| Some(v) != removed).unwrap();
            let mut seen = vec![false; n];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for w in 0..n {
                    if Some(w) != removed && !seen[w] && (self.adj[u][w] || self.adj[w][u]) {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            (0..n).all(|v| Some(v) == removed || seen[v])
        };
        n >= 3 && connected_without(None) && (0..n).all(|v| connected_without(Some(v)))
    }

    /// Whether some simple cycle has exactly `m` vertices, by plain DFS from
    /// every start vertex.
    pub fn has_cycle_of_length(&self, m: usize) -> bool {
        fn extend(g: &Matrix, start: usize, u: usize, len: usize, m: usize, used: &mut [bool]) -> bool {
            if len == m {
                return g.adj[u][start];
            }
            for w in 0..g.n() {
                if g.adj[u][w] && !used[w] {
                    used[w] = true;
                    if extend(g, start, w, len + 1, m, used) {
                        return true;
                    }
                    used[w] = false;
                }
            }
            false
        }
        if m < 2 || m > self.n() {
            return false;
        }
        (0..self.n()).any(|s| {
            let mut used = vec![false; self.n()];
            used[s] = true;
            extend(self, s, s, 1, m, &mut used)
        })
    }

    pub fn hamiltonian(&self) -> bool {
        self.has_cycle_of_length(self.n())
    }

    /// Size of a maximum matching of arcs from `from` to the other side, by
    /// trying every assignment.
    pub fn max_matching(&self, from: Side) -> usize {
        let a = self.a;
        let (src, dst) = match from {
            Side::X => (0, a),
            Side::Y => (a, 0),
        };
        fn best(g: &Matrix, i: usize, src: usize, dst: usize, used: &mut [bool]) -> usize {
            if i == g.a {
                return 0;
            }
            let mut top = best(g, i + 1, src, dst, used);
            for j in 0..g.a {
                if !used[j] && g.adj[src + i][dst + j] {
                    used[j] = true;
                    top = top.max(1 + best(g, i + 1, src, dst, used));
                    used[j] = false;
                }
            }
            top
        }
        best(self, 0, src, dst, &mut vec![false; a])
    }

    /// Condition `B_k` straight from its definition.
    pub fn bk(&self, k: usize) -> bool {
        let (a, k) = (self.a as i64, k as i64);
        self.dominating_pairs().iter().all(|&(i, j)| {
            let (di, dj) = (self.degree(i) as i64, self.degree(j) as i64);
            (di >= 2 * a - k && dj >= a + k) || (dj >= 2 * a - k && di >= a + k)
        })
    }

    /// Every vertex in a dominating pair has degree at least `a + k`.
    pub fn partner_degree(&self, k: usize) -> bool {
        self.dominating_pairs().iter().all(|&(i, j)| self.degree(i).min(self.degree(j)) >= self.a + k)
    }
}

pub fn random(a: usize, p: f64, seed: u64) -> BipartiteDigraph {
    bbd_core::random_digraph(&GeneratorConfig { a, arc_probability: p, seed, ..Default::default() }).unwrap()
}
