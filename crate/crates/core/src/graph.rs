//! Undirected simple graphs with the edge-swap operation.
//!
//! Vertices are `0..n`. Edges are stored normalized (`u < v`) in a
//! [`BTreeSet`] so that edge iteration order, and everything derived from it,
//! is deterministic. A redundant sorted adjacency list is kept alongside for
//! fast traversal.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::ext_int::ExtInt;

/// Vertex identifier; vertices of an `n`-vertex graph are `0..n`.
pub type Vertex = usize;

/// Sentinel for "not reached" in raw BFS distance arrays.
pub(crate) const UNREACHED: u32 = u32::MAX;

/// Errors from graph construction and manipulation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    /// Graphs must have at least one vertex.
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    /// A vertex id is outside `0..n`.
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: Vertex, n: usize },
    /// A self-loop was supplied.
    #[error("self-loop at vertex {v} is not allowed")]
    SelfLoop { v: Vertex },
    /// The same edge was supplied twice.
    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: Vertex, v: Vertex },
    /// A swap tried to remove an edge that is not present.
    #[error("cannot remove {{{u}, {v}}}: not an edge")]
    NotAnEdge { u: Vertex, v: Vertex },
    /// A swap tried to add an edge that is already present (or a self-loop).
    #[error("cannot add {{{u}, {w}}}: already adjacent or identical")]
    BadAddition { u: Vertex, w: Vertex },
    /// A path specification was empty.
    #[error("path specification must contain at least one vertex")]
    EmptyPath,
    /// A path specification repeated a vertex.
    #[error("path specification repeats vertex {v}")]
    RepeatedPathVertex { v: Vertex },
    /// Consecutive path vertices are not adjacent in the graph.
    #[error("path step {{{u}, {v}}} is not an edge of the graph")]
    NotAPathEdge { u: Vertex, v: Vertex },
    /// An operation that requires a tree was applied to a non-tree.
    #[error("operation requires a tree")]
    NotATree,
}

/// An undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

fn normalize(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    /// Builds a graph on `n ≥ 1` vertices from an edge list.
    ///
    /// Edges may be given in either orientation; self-loops and duplicates
    /// (in any orientation) are rejected.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { v });
            }
            let e = normalize(u, v);
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge { u: e.0, v: e.1 });
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        // Neighbor lists come out sorted because the edge set iterates in
        // lexicographic order.
        Ok(Graph { n, edges: set, adj })
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in normalized lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().copied()
    }

    /// Whether `{u, v}` is an edge (orientation-insensitive).
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.edges.contains(&normalize(u, v))
    }

    /// Sorted neighbors of `u`.
    pub fn neighbors(&self, u: Vertex) -> &[Vertex] {
        &self.adj[u]
    }

    /// Degree of `u`.
    pub fn degree(&self, u: Vertex) -> usize {
        self.adj[u].len()
    }

    /// Raw BFS distances from `src` with [`UNREACHED`] for unreachable
    /// vertices.
    pub(crate) fn bfs_raw(&self, src: Vertex) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.n];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(x) = queue.pop_front() {
            let d = dist[x] + 1;
            for &y in &self.adj[x] {
                if dist[y] == UNREACHED {
                    dist[y] = d;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Shortest-path distances from `u`, with `+inf` for unreachable
    /// vertices.
    pub fn distances_from(&self, u: Vertex) -> Vec<ExtInt> {
        self.bfs_raw(u)
            .into_iter()
            .map(|d| {
                if d == UNREACHED {
                    ExtInt::PosInf
                } else {
                    ExtInt::from(d)
                }
            })
            .collect()
    }

    /// Whether every vertex is reachable from every other.
    pub fn is_connected(&self) -> bool {
        !self.bfs_raw(0).contains(&UNREACHED)
    }

    /// Whether the graph is a tree (connected with `n - 1` edges).
    pub fn is_tree(&self) -> bool {
        self.edges.len() == self.n - 1 && self.is_connected()
    }

    /// Largest finite distance, or `+inf` if disconnected; `0` for a single
    /// vertex.
    pub fn diameter(&self) -> ExtInt {
        let mut best: u32 = 0;
        for u in 0..self.n {
            for d in self.bfs_raw(u) {
                if d == UNREACHED {
                    return ExtInt::PosInf;
                }
                best = best.max(d);
            }
        }
        ExtInt::from(best)
    }

    /// Applies the swap in which `mover` drops its edge to `removed` and
    /// connects to `added` instead, returning the new graph.
    ///
    /// Requires `removed ∈ N(mover)` and `added ∉ N(mover) ∪ {mover}`. The
    /// result may be disconnected; costs handle that via infinities.
    pub fn apply_swap(
        &self,
        mover: Vertex,
        removed: Vertex,
        added: Vertex,
    ) -> Result<Graph, GraphError> {
        for v in [mover, removed, added] {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { v, n: self.n });
            }
        }
        if !self.has_edge(mover, removed) {
            return Err(GraphError::NotAnEdge {
                u: mover,
                v: removed,
            });
        }
        if added == mover || self.has_edge(mover, added) {
            return Err(GraphError::BadAddition { u: mover, w: added });
        }
        let mut edges = self.edges.clone();
        edges.remove(&normalize(mover, removed));
        edges.insert(normalize(mover, added));
        Graph::new(self.n, edges)
    }

    /// Removes the edges of `p` and maps each path vertex to the vertex set
    /// of its residual connected component.
    ///
    /// On a tree the resulting components are pairwise disjoint; on general
    /// graphs two path vertices may share a component.
    pub fn path_components(
        &self,
        p: &PathSpec,
    ) -> Result<BTreeMap<Vertex, BTreeSet<Vertex>>, GraphError> {
        let verts = p.vertices();
        let mut removed = BTreeSet::new();
        for pair in verts.windows(2) {
            let (u, v) = (pair[0], pair[1]);
            if u >= self.n || v >= self.n {
                let bad = if u >= self.n { u } else { v };
                return Err(GraphError::VertexOutOfRange { v: bad, n: self.n });
            }
            if !self.has_edge(u, v) {
                return Err(GraphError::NotAPathEdge { u, v });
            }
            removed.insert(normalize(u, v));
        }
        if verts.len() == 1 && verts[0] >= self.n {
            return Err(GraphError::VertexOutOfRange {
                v: verts[0],
                n: self.n,
            });
        }
        let mut out = BTreeMap::new();
        for &start in verts {
            let mut seen = BTreeSet::new();
            let mut queue = VecDeque::new();
            seen.insert(start);
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if removed.contains(&normalize(x, y)) || seen.contains(&y) {
                        continue;
                    }
                    seen.insert(y);
                    queue.push_back(y);
                }
            }
            out.insert(start, seen);
        }
        Ok(out)
    }
}

/// A simple path given as a sequence of distinct vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSpec {
    verts: Vec<Vertex>,
}

impl PathSpec {
    /// Builds a path specification; vertices must be nonempty and distinct.
    /// Adjacency of consecutive vertices is checked against a concrete graph
    /// by [`Graph::path_components`].
    pub fn new(verts: Vec<Vertex>) -> Result<PathSpec, GraphError> {
        if verts.is_empty() {
            return Err(GraphError::EmptyPath);
        }
        let mut seen = BTreeSet::new();
        for &v in &verts {
            if !seen.insert(v) {
                return Err(GraphError::RepeatedPathVertex { v });
            }
        }
        Ok(PathSpec { verts })
    }

    /// The vertices in path order.
    pub fn vertices(&self) -> &[Vertex] {
        &self.verts
    }
}
