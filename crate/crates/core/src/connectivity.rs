//! Strong connectivity (Tarjan SCC) and 2-connectivity of the underlying
//! undirected graph (lowpoint articulation search). Both are iterative DFS.

use serde::Serialize;

use crate::error::GraphError;
use crate::graph::{BipartiteDigraph, VertexId, VertexSet};

/// Verdict on `UG(D)` with a witness when it is not 2-connected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TwoConnectivity {
    TwoConnected,
    /// `UG(D)` itself is disconnected; the components are listed.
    Disconnected {
        components: Vec<VertexSet>,
    },
    /// Removing `vertex` splits the rest into `components` (at least two).
    CutVertex {
        vertex: VertexId,
        components: Vec<VertexSet>,
    },
}

impl TwoConnectivity {
    pub fn is_two_connected(&self) -> bool {
        matches!(self, TwoConnectivity::TwoConnected)
    }
}

impl BipartiteDigraph {
    /// Strongly connected components in the order Tarjan's algorithm closes them
    /// (reverse topological order of the condensation).
    pub fn strongly_connected_components(&self) -> Vec<Vec<VertexId>> {
        let n = self.order();
        let adj: Vec<Vec<usize>> = (0..n).map(|u| self.flat_out(u).collect()).collect();
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut components = Vec::new();
        let mut next_index = 0;
        // (vertex, position in its adjacency list)
        let mut frames: Vec<(usize, usize)> = Vec::new();

        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            frames.push((root, 0));
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (u, ref mut pos)) = frames.last_mut() {
                if let Some(&w) = adj[u].get(*pos) {
                    *pos += 1;
                    if index[w] == UNSEEN {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        frames.push((w, 0));
                    } else if on_stack[w] {
                        low[u] = low[u].min(index[w]);
                    }
                    continue;
                }
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[u]);
                }
                if low[u] == index[u] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        component.push(self.vertex_at(w));
                        if w == u {
                            break;
                        }
                    }
                    component.sort_unstable();
                    components.push(component);
                }
            }
        }
        components
    }

    /// True iff there is a directed path between every ordered pair of vertices.
    pub fn is_strongly_connected(&self) -> bool {
        self.strongly_connected_components().len() == 1
    }

    /// An ordered pair `(u, v)` with no `(u, v)`-path, or `None` when `D` is strong.
    pub fn unreachable_pair(&self) -> Option<(VertexId, VertexId)> {
        let forward = self.reach(0, true);
        if let Some(w) = (0..self.order()).find(|&w| !forward[w]) {
            return Some((self.vertex_at(0), self.vertex_at(w)));
        }
        let backward = self.reach(0, false);
        (0..self.order()).find(|&w| !backward[w]).map(|w| (self.vertex_at(w), self.vertex_at(0)))
    }

    fn reach(&self, from: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.order()];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            let next: Vec<usize> = if forward { self.flat_out(u).collect() } else { self.flat_in(u).collect() };
            for w in next {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Articulation vertices of `UG(D)` in canonical order.
    pub fn articulation_points(&self) -> Vec<VertexId> {
        let n = self.order();
        let adj: Vec<Vec<usize>> = (0..n).map(|u| self.flat_adjacent(u).collect()).collect();
        const UNSEEN: usize = usize::MAX;
        let mut disc = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut is_cut = vec![false; n];
        let mut time = 0;

        for root in 0..n {
            if disc[root] != UNSEEN {
                continue;
            }
            disc[root] = time;
            low[root] = time;
            time += 1;
            let mut root_children = 0;
            // (vertex, parent, next adjacency position)
            let mut frames = vec![(root, UNSEEN, 0usize)];
            while let Some(&mut (u, parent, ref mut pos)) = frames.last_mut() {
                if let Some(&w) = adj[u].get(*pos) {
                    *pos += 1;
                    if disc[w] == UNSEEN {
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        if u == root {
                            root_children += 1;
                        }
                        frames.push((w, u, 0));
                    } else if w != parent {
                        low[u] = low[u].min(disc[w]);
                    }
                    continue;
                }
                frames.pop();
                if parent != UNSEEN {
                    low[parent] = low[parent].min(low[u]);
                    if parent != root && low[u] >= disc[parent] {
                        is_cut[parent] = true;
                    }
                }
            }
            if root_children >= 2 {
                is_cut[root] = true;
            }
        }
        (0..n).filter(|&u| is_cut[u]).map(|u| self.vertex_at(u)).collect()
    }

    /// Connected components of `UG(D) - removed`, each as a vertex set, ordered
    /// by their smallest member.
    pub fn underlying_components(&self, removed: &VertexSet) -> Vec<VertexSet> {
        let n = self.order();
        let mut seen: Vec<bool> = (0..n).map(|u| removed.contains(self.vertex_at(u))).collect();
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut component = VertexSet::new();
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                component.insert(self.vertex_at(u));
                for w in self.flat_adjacent(u) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            components.push(component);
        }
        components
    }

    /// Decides whether `UG(D)` is 2-connected, with a cut-vertex witness
    /// `V(D) = E ∪ F ∪ {u}` when it is not.
    pub fn underlying_two_connectivity(&self) -> Result<TwoConnectivity, GraphError> {
        if self.order() < 3 {
            return Err(GraphError::OrderTooSmall(self.order()));
        }
        let components = self.underlying_components(&VertexSet::new());
        if components.len() > 1 {
            return Ok(TwoConnectivity::Disconnected { components });
        }
        Ok(match self.articulation_points().first() {
            Some(&vertex) => {
                let removed: VertexSet = std::iter::once(vertex).collect();
                TwoConnectivity::CutVertex { vertex, components: self.underlying_components(&removed) }
            }
            None => TwoConnectivity::TwoConnected,
        })
    }

    pub fn underlying_is_two_connected(&self) -> Result<bool, GraphError> {
        Ok(self.underlying_two_connectivity()?.is_two_connected())
    }
}
