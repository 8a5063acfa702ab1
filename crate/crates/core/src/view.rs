//! k-local views: the induced subgraph a player can see, out to a fixed
//! radius around itself.

use crate::graph::{Graph, Vertex, UNREACHED};

/// One swap move: `mover` drops the edge to `remove` and connects to `add`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Swap {
    pub mover: Vertex,
    pub remove: Vertex,
    pub add: Vertex,
}

/// The radius-`k` view of a player: the ball of radius `k` around the owner
/// together with all edges of the host graph between ball members.
///
/// Members at distance exactly `k` form the *frontier*: the owner cannot see
/// past them, so consistent worlds may attach anything there. The frontier is
/// empty exactly when nothing lies at distance `k`, i.e. the ball already
/// covers everything the owner can reach.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct View {
    owner: Vertex,
    radius: usize,
    /// Host ids of ball members, sorted ascending.
    members: Vec<Vertex>,
    /// Distance from the owner, indexed by local id (position in `members`).
    dist: Vec<u32>,
    /// Induced adjacency in local ids, each list sorted.
    adj: Vec<Vec<u32>>,
    owner_local: usize,
}

/// Extracts the radius-`k` view of player `u`.
///
/// `k ≥ 1` and `u < g.n()` are required. The host graph is normally
/// connected (the game maintains that); on a disconnected host the view
/// simply covers the reachable ball.
pub fn extract_view(g: &Graph, u: Vertex, k: usize) -> View {
    assert!(k >= 1, "view radius must be at least 1");
    assert!(u < g.n(), "view owner {u} out of range for n = {}", g.n());
    let mut host_dist = vec![UNREACHED; g.n()];
    host_dist[u] = 0;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(u);
    while let Some(x) = queue.pop_front() {
        let d = host_dist[x] + 1;
        if d > k as u32 {
            continue;
        }
        for &y in g.neighbors(x) {
            if host_dist[y] == UNREACHED {
                host_dist[y] = d;
                queue.push_back(y);
            }
        }
    }
    let members: Vec<Vertex> = (0..g.n()).filter(|&x| host_dist[x] != UNREACHED).collect();
    let dist: Vec<u32> = members.iter().map(|&x| host_dist[x]).collect();
    let local_of = |host: Vertex| members.binary_search(&host).expect("member lookup");
    let adj: Vec<Vec<u32>> = members
        .iter()
        .map(|&x| {
            g.neighbors(x)
                .iter()
                .copied()
                .filter(|&y| host_dist[y] != UNREACHED)
                .map(|y| local_of(y) as u32)
                .collect()
        })
        .collect();
    let owner_local = local_of(u);
    View {
        owner: u,
        radius: k,
        members,
        dist,
        adj,
        owner_local,
    }
}

impl View {
    /// The player this view belongs to.
    pub fn owner(&self) -> Vertex {
        self.owner
    }

    /// The view radius `k`.
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Ball members as host ids, sorted ascending.
    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    /// Number of ball members (including the owner).
    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    /// Local index of a host vertex, if it is in the ball.
    pub fn local_index(&self, host: Vertex) -> Option<usize> {
        self.members.binary_search(&host).ok()
    }

    /// Distance from the owner to a host vertex, if it is in the ball.
    pub fn dist_of(&self, host: Vertex) -> Option<u32> {
        self.local_index(host).map(|i| self.dist[i])
    }

    /// Frontier members (distance exactly `k`), ascending host ids.
    pub fn frontier(&self) -> impl Iterator<Item = Vertex> + '_ {
        let k = self.radius as u32;
        self.members
            .iter()
            .zip(&self.dist)
            .filter(move |&(_, &d)| d == k)
            .map(|(&x, _)| x)
    }

    /// Whether no member lies at distance exactly `k` (the ball is closed:
    /// it already contains everything reachable).
    pub fn frontier_is_empty(&self) -> bool {
        self.frontier().next().is_none()
    }

    /// Induced edges between ball members, as normalized host pairs in
    /// lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &j in nbrs {
                if (j as usize) > i {
                    out.push((self.members[i], self.members[j as usize]));
                }
            }
        }
        out
    }

    /// The owner's neighbors (distance-1 members), ascending host ids.
    pub fn owner_neighbors(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members
            .iter()
            .zip(&self.dist)
            .filter(|&(_, &d)| d == 1)
            .map(|(&x, _)| x)
    }

    /// All swaps the owner can evaluate inside this view: remove an edge to a
    /// neighbor `v`, add an edge to a visible non-neighbor `w` (distance at
    /// least 2). Ordered lexicographically by `(v, w)` host ids.
    pub fn candidate_swaps(&self) -> Vec<Swap> {
        let mut out = Vec::new();
        for v in self.owner_neighbors() {
            for (&w, &d) in self.members.iter().zip(&self.dist) {
                if d >= 2 {
                    out.push(Swap {
                        mover: self.owner,
                        remove: v,
                        add: w,
                    });
                }
            }
        }
        out
    }

    pub(crate) fn dist_local(&self) -> &[u32] {
        &self.dist
    }

    pub(crate) fn adj_local(&self) -> &[Vec<u32>] {
        &self.adj
    }

    pub(crate) fn owner_local(&self) -> usize {
        self.owner_local
    }
}
