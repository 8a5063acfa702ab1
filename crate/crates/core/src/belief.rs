//! The belief engine: judging swaps against every world consistent with a
//! k-local view.
//!
//! A world consistent with a view may attach arbitrary further structure
//! behind the frontier (members at distance exactly `k`). The engine models
//! the *pendant* completion family — independent bundles hanging below each
//! frontier member — for which worst/best-case deltas have an exact closed
//! form:
//!
//! - Members the swap disconnects from the owner inside the view stay
//!   disconnected in every completion, so both bounds are `-inf`.
//! - **Sum cost:** each visible member `x` contributes its distance gain
//!   `d(x) - d'(x)`; anything hidden behind a frontier member `f` contributes
//!   that member's gain once per hidden vertex. A negative frontier gain can
//!   be amplified without bound (`-inf` worst case), a positive one likewise
//!   (`+inf` best case); otherwise the empty completion is extremal.
//! - **Max cost:** a bundle of depth `L` behind `f` puts a vertex at
//!   pre-distance `k + L` and post-distance `d'(f) + L`. Over box-shaped
//!   depth profiles the delta is monotone in each depth, so it is enough to
//!   evaluate the empty profile and, per frontier member, one profile with a
//!   dominating depth.
//!
//! [`oracle_delta`] cross-checks the closed form by enumerating pendant
//! completions explicitly and running BFS on each concrete world;
//! [`oracle_probe_extended`] samples completions *outside* the pendant family
//! (hidden bridges between frontier members) to measure how far the model's
//! bounds can be escaped.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::CostKind;
use crate::ext_int::ExtInt;
use crate::graph::{Graph, Vertex, UNREACHED};
use crate::view::{extract_view, Swap, View};

use ExtInt::{Fin, NegInf, PosInf};

/// How a player resolves uncertainty about the world beyond its view.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attitude {
    /// Move only when every consistent world strictly improves.
    Pessimistic,
    /// Move when no consistent world gets worse and the guaranteed gain is
    /// finite (possibly zero).
    WeaklyPessimistic,
    /// Move when some consistent world strictly improves.
    Optimistic,
}

impl fmt::Display for Attitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Attitude::Pessimistic => write!(f, "pess"),
            Attitude::WeaklyPessimistic => write!(f, "weak"),
            Attitude::Optimistic => write!(f, "opt"),
        }
    }
}

impl FromStr for Attitude {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pess" | "pessimistic" => Ok(Attitude::Pessimistic),
            "weak" | "weakly-pessimistic" => Ok(Attitude::WeaklyPessimistic),
            "opt" | "optimistic" => Ok(Attitude::Optimistic),
            other => Err(format!(
                "unknown attitude {other:?} (expected pess|weak|opt)"
            )),
        }
    }
}

/// A player's decision rule: attitude, cost kind, and view radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlayerModel {
    pub attitude: Attitude,
    pub kind: CostKind,
    pub k: usize,
}

impl PlayerModel {
    /// Builds a model; the view radius must be at least 1.
    pub fn new(attitude: Attitude, kind: CostKind, k: usize) -> PlayerModel {
        assert!(k >= 1, "view radius must be at least 1");
        PlayerModel { attitude, kind, k }
    }
}

impl fmt::Display for PlayerModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-k{}", self.attitude, self.kind, self.k)
    }
}

/// Which bound of the delta range to report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaMode {
    /// Infimum over consistent worlds.
    Worst,
    /// Supremum over consistent worlds.
    Best,
}

/// Errors from swap evaluation and the oracle.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BeliefError {
    /// The swap names a different mover than the view's owner.
    #[error("swap mover {got} does not own this view (owner {expected})")]
    MoverMismatch { expected: Vertex, got: Vertex },
    /// The removed endpoint is not a neighbor of the owner.
    #[error("swap removes {v}, which is not a neighbor of the owner")]
    RemoveNotNeighbor { v: Vertex },
    /// The added endpoint is outside the view.
    #[error("swap adds {w}, which is not visible in the view")]
    AddNotVisible { w: Vertex },
    /// The added endpoint is the owner or already a neighbor.
    #[error("swap adds {w}, which is already within distance 1 of the owner")]
    AddTooClose { w: Vertex },
    /// The oracle budget is below the exactness threshold for this case.
    #[error("oracle budget {given} is below the required {required}")]
    BudgetTooSmall { required: usize, given: usize },
    /// The frontier is too large for the oracle's enumeration caps.
    #[error("oracle enumeration infeasible for a frontier of {frontier} members")]
    Infeasible { frontier: usize },
    /// A closed-form characterization was applied to a non-tree.
    #[error("characterization requires a tree")]
    NotATree,
}

/// Worst/best-case delta of one swap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct DeltaPair {
    pub worst: ExtInt,
    pub best: ExtInt,
}

/// Bounds computed by the brute-force oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBounds {
    pub min: ExtInt,
    pub max: ExtInt,
}

fn swap_locals(view: &View, swap: &Swap) -> Result<(u32, u32), BeliefError> {
    if swap.mover != view.owner() {
        return Err(BeliefError::MoverMismatch {
            expected: view.owner(),
            got: swap.mover,
        });
    }
    let v_l = view
        .local_index(swap.remove)
        .filter(|&i| view.dist_local()[i] == 1)
        .ok_or(BeliefError::RemoveNotNeighbor { v: swap.remove })?;
    let w_l = view
        .local_index(swap.add)
        .ok_or(BeliefError::AddNotVisible { w: swap.add })?;
    if view.dist_local()[w_l] < 2 {
        return Err(BeliefError::AddTooClose { w: swap.add });
    }
    Ok((v_l as u32, w_l as u32))
}

/// BFS over the view's local adjacency with the swap applied: the owner's
/// edge to `v_l` is dropped and an edge to `w_l` added. Only the owner's own
/// neighbor list needs overriding, because the owner is the BFS source and is
/// settled before anyone could walk back into it.
fn post_distances_into(
    view: &View,
    v_l: u32,
    w_l: u32,
    dist: &mut Vec<u32>,
    queue: &mut VecDeque<u32>,
) {
    let adj = view.adj_local();
    let o = view.owner_local();
    dist.clear();
    dist.resize(adj.len(), UNREACHED);
    queue.clear();
    dist[o] = 0;
    queue.push_back(o as u32);
    while let Some(x) = queue.pop_front() {
        let xi = x as usize;
        let d = dist[xi] + 1;
        if xi == o {
            for &y in &adj[xi] {
                if y != v_l && dist[y as usize] == UNREACHED {
                    dist[y as usize] = d;
                    queue.push_back(y);
                }
            }
            if dist[w_l as usize] == UNREACHED {
                dist[w_l as usize] = d;
                queue.push_back(w_l);
            }
        } else {
            for &y in &adj[xi] {
                if dist[y as usize] == UNREACHED {
                    dist[y as usize] = d;
                    queue.push_back(y);
                }
            }
        }
    }
}

/// Closed-form worst/best-case delta given the post-swap distances inside
/// the view.
fn pair_from_post(view: &View, kind: CostKind, post: &[u32]) -> DeltaPair {
    if post.contains(&UNREACHED) {
        // Pendant completions only hang new material below frontier members,
        // so a member cut off inside the view stays cut off in every world.
        return DeltaPair {
            worst: NegInf,
            best: NegInf,
        };
    }
    let dist = view.dist_local();
    let k = view.radius() as u32;
    match kind {
        CostKind::Sum => {
            let mut s: i64 = 0;
            let mut frontier_neg = false;
            let mut frontier_pos = false;
            for (i, &d) in dist.iter().enumerate() {
                let gain = i64::from(d) - i64::from(post[i]);
                s += gain;
                if d == k {
                    frontier_neg |= gain < 0;
                    frontier_pos |= gain > 0;
                }
            }
            DeltaPair {
                worst: if frontier_neg { NegInf } else { Fin(s) },
                best: if frontier_pos { PosInf } else { Fin(s) },
            }
        }
        CostKind::Max => {
            let a = i64::from(dist.iter().copied().max().unwrap_or(0));
            let b = i64::from(post.iter().copied().max().unwrap_or(0));
            // Empty completion first; then, per frontier member, a completion
            // whose bundle below that member dominates both eccentricities
            // (the delta is monotone in each bundle depth, so these profiles
            // cover the whole family).
            let mut worst = Fin(a - b);
            let mut best = worst;
            let kk = i64::from(k);
            if a == kk {
                for (i, &d) in dist.iter().enumerate() {
                    if u64::from(d) == k as u64 {
                        let val = Fin(kk - i64::from(post[i]));
                        worst = worst.min(val);
                        best = best.max(val);
                    }
                }
            }
            DeltaPair { worst, best }
        }
    }
}

pub(crate) fn eval_pair(
    view: &View,
    swap: &Swap,
    kind: CostKind,
) -> Result<DeltaPair, BeliefError> {
    let (v_l, w_l) = swap_locals(view, swap)?;
    let mut post = Vec::new();
    let mut queue = VecDeque::new();
    post_distances_into(view, v_l, w_l, &mut post, &mut queue);
    Ok(pair_from_post(view, kind, &post))
}

/// Worst- or best-case delta of `swap` over all worlds consistent with
/// `view`, under the pendant completion model.
pub fn delta(
    view: &View,
    swap: &Swap,
    kind: CostKind,
    mode: DeltaMode,
) -> Result<ExtInt, BeliefError> {
    let pair = eval_pair(view, swap, kind)?;
    Ok(match mode {
        DeltaMode::Worst => pair.worst,
        DeltaMode::Best => pair.best,
    })
}

fn eligible(attitude: Attitude, pair: &DeltaPair) -> bool {
    match attitude {
        Attitude::Pessimistic => pair.worst > ExtInt::ZERO,
        Attitude::WeaklyPessimistic => pair.worst >= ExtInt::ZERO && pair.worst.is_finite(),
        Attitude::Optimistic => pair.best > ExtInt::ZERO,
    }
}

fn attitude_score(attitude: Attitude, pair: &DeltaPair) -> ExtInt {
    match attitude {
        Attitude::Pessimistic | Attitude::WeaklyPessimistic => pair.worst,
        Attitude::Optimistic => pair.best,
    }
}

/// Visits all candidate swaps in lexicographic `(remove, add)` order with
/// their delta pairs; stops early when the visitor returns `true`.
fn scan_candidates<F: FnMut(Swap, DeltaPair) -> bool>(view: &View, kind: CostKind, mut visit: F) {
    let dist = view.dist_local();
    let m = dist.len();
    let mut post = Vec::with_capacity(m);
    let mut queue = VecDeque::with_capacity(m);
    for v_l in 0..m {
        if dist[v_l] != 1 {
            continue;
        }
        for w_l in 0..m {
            if dist[w_l] < 2 {
                continue;
            }
            post_distances_into(view, v_l as u32, w_l as u32, &mut post, &mut queue);
            let pair = pair_from_post(view, kind, &post);
            let swap = Swap {
                mover: view.owner(),
                remove: view.members()[v_l],
                add: view.members()[w_l],
            };
            if visit(swap, pair) {
                return;
            }
        }
    }
}

/// First swap (in lexicographic order) the owner is willing to make, if any.
pub fn unhappy_witness(view: &View, model: &PlayerModel) -> Option<Swap> {
    debug_assert_eq!(view.radius(), model.k, "view radius differs from model");
    let mut found = None;
    scan_candidates(view, model.kind, |swap, pair| {
        if eligible(model.attitude, &pair) {
            found = Some(swap);
            true
        } else {
            false
        }
    });
    found
}

/// The owner's best response inside this view: the eligible swap maximizing
/// the attitude's delta, ties broken toward the lexicographically smallest
/// `(remove, add)` pair. Returns the swap together with that delta.
pub fn best_response_in_view(view: &View, model: &PlayerModel) -> Option<(Swap, ExtInt)> {
    debug_assert_eq!(view.radius(), model.k, "view radius differs from model");
    let mut best: Option<(Swap, ExtInt)> = None;
    scan_candidates(view, model.kind, |swap, pair| {
        if eligible(model.attitude, &pair) {
            let score = attitude_score(model.attitude, &pair);
            if best.map_or(true, |(_, s)| score > s) {
                best = Some((swap, score));
            }
        }
        false
    });
    best
}

/// Whether player `u` would move in `g`, returning a witness swap if so.
pub fn is_unhappy(g: &Graph, u: Vertex, model: &PlayerModel) -> Option<Swap> {
    unhappy_witness(&extract_view(g, u, model.k), model)
}

/// Player `u`'s best response in `g`, if it has one.
pub fn best_response(g: &Graph, u: Vertex, model: &PlayerModel) -> Option<Swap> {
    best_response_scored(g, u, model).map(|(s, _)| s)
}

/// Player `u`'s best response in `g` together with its attitude delta.
pub fn best_response_scored(g: &Graph, u: Vertex, model: &PlayerModel) -> Option<(Swap, ExtInt)> {
    best_response_in_view(&extract_view(g, u, model.k), model)
}

/// Closed-form test for pessimistic sum-cost unhappiness at radius 3 on
/// trees: `u` is flagged iff some path `u - v - w` exists where the residual
/// component of `v` (after removing both path edges) has depth at most 1 and
/// strictly fewer vertices than `w` has neighbors besides `v`.
///
/// This is the literal textbook characterization; it deliberately does not
/// consult the swap engine, so the two can be compared as independent
/// implementations. The two disagree exactly on boundary cases where the
/// component size *equals* the neighbor count (a zero-gain swap, which the
/// strict pessimistic rule rejects).
pub fn characterize_sum_p3(g: &Graph, u: Vertex) -> Result<bool, BeliefError> {
    if !g.is_tree() {
        return Err(BeliefError::NotATree);
    }
    for &v in g.neighbors(u) {
        let dist_v = g.distances_from(v);
        for &w in g.neighbors(v) {
            if w == u {
                continue;
            }
            let spec = crate::graph::PathSpec::new(vec![u, v, w]).expect("distinct path vertices");
            let comps = g.path_components(&spec).expect("path edges exist");
            let t_v = &comps[&v];
            // On a tree, distances within the residual component agree with
            // distances in the whole tree.
            let depth = t_v
                .iter()
                .map(|&x| dist_v[x].unwrap_finite())
                .max()
                .unwrap_or(0);
            let w_branch_neighbors = (g.degree(w) - 1) as i64;
            if depth <= 1 && (t_v.len() as i64) < w_branch_neighbors {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Closed-form test for weakly pessimistic unhappiness at radius 2 on trees
/// (either cost kind): `u` is flagged iff it has a neighbor of degree
/// exactly 2.
pub fn characterize_wp2(g: &Graph, u: Vertex) -> Result<bool, BeliefError> {
    if !g.is_tree() {
        return Err(BeliefError::NotATree);
    }
    Ok(g.neighbors(u).iter().any(|&v| g.degree(v) == 2))
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// Caps on explicit world enumeration.
const FULL_GRID_CAP: u128 = 20_000;
const BOX_FRONTIER_CAP: usize = 16;

/// Scratch buffers for building and traversing concrete worlds.
struct WorldScratch {
    adj: Vec<Vec<u32>>,
    dist: Vec<u32>,
    queue: VecDeque<u32>,
}

impl WorldScratch {
    fn new() -> WorldScratch {
        WorldScratch {
            adj: Vec::new(),
            dist: Vec::new(),
            queue: Vec::new().into(),
        }
    }

    /// Assembles the world for one pendant profile: the view's visible part
    /// plus, below each frontier member, a bundle of hidden vertices — a
    /// bunch of leaves for the sum cost (only the count matters) or a
    /// dangling chain for the max cost (only the depth matters). Returns the
    /// world size.
    fn build(&mut self, view: &View, kind: CostKind, frontier: &[u32], coords: &[usize]) -> usize {
        let base = view.adj_local().len();
        let total = base + coords.iter().sum::<usize>();
        if self.adj.len() < total {
            self.adj.resize_with(total, Vec::new);
        }
        for list in self.adj.iter_mut().take(total) {
            list.clear();
        }
        for (i, nbrs) in view.adj_local().iter().enumerate() {
            self.adj[i].extend_from_slice(nbrs);
        }
        let mut next = base as u32;
        for (&f, &c) in frontier.iter().zip(coords) {
            match kind {
                CostKind::Sum => {
                    for _ in 0..c {
                        self.adj[f as usize].push(next);
                        self.adj[next as usize].push(f);
                        next += 1;
                    }
                }
                CostKind::Max => {
                    let mut prev = f;
                    for _ in 0..c {
                        self.adj[prev as usize].push(next);
                        self.adj[next as usize].push(prev);
                        prev = next;
                        next += 1;
                    }
                }
            }
        }
        total
    }

    /// Adds one hidden bridge vertex adjacent to two frontier members (used
    /// only by the extended probe). Returns the new world size.
    fn add_bridge(&mut self, total: usize, f1: u32, f2: u32) -> usize {
        if self.adj.len() < total + 1 {
            self.adj.resize_with(total + 1, Vec::new);
        }
        self.adj[total].clear();
        self.adj[total].push(f1);
        self.adj[total].push(f2);
        self.adj[f1 as usize].push(total as u32);
        self.adj[f2 as usize].push(total as u32);
        total + 1
    }

    /// Owner's cost in the world, optionally with the swap applied (same
    /// owner-list override as the view BFS).
    fn owner_cost(
        &mut self,
        total: usize,
        owner: u32,
        swap: Option<(u32, u32)>,
        kind: CostKind,
    ) -> ExtInt {
        self.dist.clear();
        self.dist.resize(total, UNREACHED);
        self.queue.clear();
        self.dist[owner as usize] = 0;
        self.queue.push_back(owner);
        while let Some(x) = self.queue.pop_front() {
            let xi = x as usize;
            let d = self.dist[xi] + 1;
            let skip = match swap {
                Some((v_l, _)) if xi == owner as usize => Some(v_l),
                _ => None,
            };
            for idx in 0..self.adj[xi].len() {
                let y = self.adj[xi][idx];
                if Some(y) == skip {
                    continue;
                }
                if self.dist[y as usize] == UNREACHED {
                    self.dist[y as usize] = d;
                    self.queue.push_back(y);
                }
            }
            if xi == owner as usize {
                if let Some((_, w_l)) = swap {
                    if self.dist[w_l as usize] == UNREACHED {
                        self.dist[w_l as usize] = 1;
                        self.queue.push_back(w_l);
                    }
                }
            }
        }
        let mut sum: i64 = 0;
        let mut max: i64 = 0;
        for &d in &self.dist[..total] {
            if d == UNREACHED {
                return PosInf;
            }
            sum += i64::from(d);
            max = max.max(i64::from(d));
        }
        match kind {
            CostKind::Sum => Fin(sum),
            CostKind::Max => Fin(max),
        }
    }

    /// Delta of the swap in the current world (`pre cost - post cost`).
    fn world_delta(
        &mut self,
        total: usize,
        owner: u32,
        v_l: u32,
        w_l: u32,
        kind: CostKind,
    ) -> ExtInt {
        let pre = self.owner_cost(total, owner, None, kind);
        let post = self.owner_cost(total, owner, Some((v_l, w_l)), kind);
        pre - post
    }
}

/// Iterates the cartesian product of per-coordinate value lists.
fn for_each_profile(values: &[&[usize]], mut f: impl FnMut(&[usize])) {
    let dims = values.len();
    if dims == 0 {
        f(&[]);
        return;
    }
    let mut idx = vec![0usize; dims];
    let mut coords: Vec<usize> = values.iter().map(|v| v[0]).collect();
    loop {
        f(&coords);
        let mut i = 0;
        loop {
            idx[i] += 1;
            if idx[i] < values[i].len() {
                coords[i] = values[i][idx[i]];
                break;
            }
            idx[i] = 0;
            coords[i] = values[i][0];
            i += 1;
            if i == dims {
                return;
            }
        }
    }
}

/// Brute-force delta bounds over pendant completions with per-frontier
/// bundle sizes in `0..=budget`.
///
/// For budgets at least `A + B + 2k + 1` (largest pre- and post-swap visible
/// distances plus a margin) the result is exact for the *unbounded* family:
/// if the extremum still moves when the last layer of the box is peeled off,
/// the true bound is infinite, and that is reported as such.
///
/// Enumeration is the full grid when small enough, otherwise the box
/// vertices `{0, budget}` and `{0, budget - 1}` per coordinate — exact
/// because each world's delta is monotone in every bundle size.
pub fn oracle_delta(
    view: &View,
    swap: &Swap,
    kind: CostKind,
    budget: usize,
) -> Result<OracleBounds, BeliefError> {
    let (v_l, w_l) = swap_locals(view, swap)?;
    let owner = view.owner_local() as u32;
    let mut post = Vec::new();
    let mut queue = VecDeque::new();
    post_distances_into(view, v_l, w_l, &mut post, &mut queue);
    if post.contains(&UNREACHED) {
        // Hidden material only attaches below frontier members, so no
        // completion can reconnect a member the swap cut off: every world's
        // delta is -inf.
        return Ok(OracleBounds {
            min: NegInf,
            max: NegInf,
        });
    }
    let dist = view.dist_local();
    let a = dist.iter().copied().max().unwrap_or(0) as usize;
    let b = post.iter().copied().max().unwrap_or(0) as usize;
    let required = a + b + 2 * view.radius() + 1;
    if budget < required {
        return Err(BeliefError::BudgetTooSmall {
            required,
            given: budget,
        });
    }
    let k = view.radius() as u32;
    let frontier: Vec<u32> = (0..dist.len() as u32)
        .filter(|&i| dist[i as usize] == k)
        .collect();
    let dims = frontier.len();
    let mut scratch = WorldScratch::new();

    let mut min_all = PosInf;
    let mut max_all = NegInf;
    let mut min_inner = PosInf;
    let mut max_inner = NegInf;

    let full_count = (budget as u128 + 1).checked_pow(dims as u32);
    if full_count.is_some_and(|c| c <= FULL_GRID_CAP) {
        let all_values: Vec<usize> = (0..=budget).collect();
        let values: Vec<&[usize]> = (0..dims).map(|_| all_values.as_slice()).collect();
        for_each_profile(&values, |coords| {
            let total = scratch.build(view, kind, &frontier, coords);
            let d = scratch.world_delta(total, owner, v_l, w_l, kind);
            min_all = min_all.min(d);
            max_all = max_all.max(d);
            if coords.iter().all(|&c| c < budget) {
                min_inner = min_inner.min(d);
                max_inner = max_inner.max(d);
            }
        });
    } else if dims <= BOX_FRONTIER_CAP {
        let outer = [0usize, budget];
        let inner = [0usize, budget - 1];
        let outer_values: Vec<&[usize]> = (0..dims).map(|_| outer.as_slice()).collect();
        for_each_profile(&outer_values, |coords| {
            let total = scratch.build(view, kind, &frontier, coords);
            let d = scratch.world_delta(total, owner, v_l, w_l, kind);
            min_all = min_all.min(d);
            max_all = max_all.max(d);
        });
        let inner_values: Vec<&[usize]> = (0..dims).map(|_| inner.as_slice()).collect();
        for_each_profile(&inner_values, |coords| {
            let total = scratch.build(view, kind, &frontier, coords);
            let d = scratch.world_delta(total, owner, v_l, w_l, kind);
            min_inner = min_inner.min(d);
            max_inner = max_inner.max(d);
        });
    } else {
        return Err(BeliefError::Infeasible { frontier: dims });
    }

    if dims == 0 {
        // Single closed world; both passes saw exactly it.
        return Ok(OracleBounds {
            min: min_all,
            max: max_all,
        });
    }
    Ok(OracleBounds {
        min: if min_all < min_inner { NegInf } else { min_all },
        max: if max_all > max_inner { PosInf } else { max_all },
    })
}

/// The smallest bundle budget that makes [`oracle_delta`] exact for this
/// view and swap: largest pre-swap distance plus largest finite post-swap
/// distance plus `2k + 1`.
pub fn oracle_exact_budget(view: &View, swap: &Swap) -> Result<usize, BeliefError> {
    let (v_l, w_l) = swap_locals(view, swap)?;
    let mut post = Vec::new();
    let mut queue = VecDeque::new();
    post_distances_into(view, v_l, w_l, &mut post, &mut queue);
    let a = view.dist_local().iter().copied().max().unwrap_or(0) as usize;
    let b = post
        .iter()
        .copied()
        .filter(|&d| d != UNREACHED)
        .max()
        .unwrap_or(0) as usize;
    Ok(a + b + 2 * view.radius() + 1)
}

/// Result of sampling completions beyond the pendant family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    /// Worlds sampled.
    pub samples: usize,
    /// Samples whose delta fell strictly below the closed-form worst case.
    pub below_closed_min: usize,
    /// Samples whose delta rose strictly above the closed-form best case.
    pub above_closed_max: usize,
    /// The closed-form bounds the samples were compared against.
    pub closed_worst: ExtInt,
    pub closed_best: ExtInt,
}

/// Samples random consistent worlds that may include hidden *bridges*: a
/// hidden vertex adjacent to two frontier members. Such a vertex sits at
/// distance `k + 1`, so it never alters what the view shows, yet it can
/// reconnect parts of the world a swap would otherwise cut off. The report
/// counts how often sampled deltas escape the pendant-model bounds; it is
/// diagnostic output only and feeds nothing back into the engine.
pub fn oracle_probe_extended(
    view: &View,
    swap: &Swap,
    kind: CostKind,
    samples: usize,
    seed: u64,
) -> Result<ProbeReport, BeliefError> {
    let pair = eval_pair(view, swap, kind)?;
    let (v_l, w_l) = swap_locals(view, swap)?;
    let owner = view.owner_local() as u32;
    let dist = view.dist_local();
    let k = view.radius() as u32;
    let frontier: Vec<u32> = (0..dist.len() as u32)
        .filter(|&i| dist[i as usize] == k)
        .collect();
    let mut post = Vec::new();
    let mut queue = VecDeque::new();
    post_distances_into(view, v_l, w_l, &mut post, &mut queue);
    let a = dist.iter().copied().max().unwrap_or(0) as usize;
    let b = post
        .iter()
        .copied()
        .filter(|&d| d != UNREACHED)
        .max()
        .unwrap_or(0) as usize;
    let budget = a + b + 2 * view.radius() + 1;
    let mut pairs = Vec::new();
    for i in 0..frontier.len() {
        for j in i + 1..frontier.len() {
            pairs.push((frontier[i], frontier[j]));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scratch = WorldScratch::new();
    let mut coords = vec![0usize; frontier.len()];
    let mut below = 0;
    let mut above = 0;
    for _ in 0..samples {
        for c in coords.iter_mut() {
            *c = rng.gen_range(0..=budget);
        }
        let mut total = scratch.build(view, kind, &frontier, &coords);
        for &(f1, f2) in &pairs {
            if rng.gen_bool(0.25) {
                total = scratch.add_bridge(total, f1, f2);
            }
        }
        let d = scratch.world_delta(total, owner, v_l, w_l, kind);
        if d < pair.worst {
            below += 1;
        }
        if d > pair.best {
            above += 1;
        }
    }
    Ok(ProbeReport {
        samples,
        below_closed_min: below,
        above_closed_max: above,
        closed_worst: pair.worst,
        closed_best: pair.best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn swap(mover: Vertex, remove: Vertex, add: Vertex) -> Swap {
        Swap { mover, remove, add }
    }

    #[test]
    fn path_endpoint_sum_bounds() {
        // Path 0-1-2-3, owner 0, radius 2: swapping the edge to 1 for an
        // edge to 2 helps 2 (a frontier member) by 1 and hurts 1 by 1. The
        // visible net is 0; the frontier gain makes the best case unbounded.
        let g = path(4);
        let v = extract_view(&g, 0, 2);
        let s = swap(0, 1, 2);
        let pair = eval_pair(&v, &s, CostKind::Sum).unwrap();
        assert_eq!(pair.worst, Fin(0));
        assert_eq!(pair.best, PosInf);
    }

    #[test]
    fn path_endpoint_max_bounds() {
        let g = path(4);
        let v = extract_view(&g, 0, 2);
        let s = swap(0, 1, 2);
        let pair = eval_pair(&v, &s, CostKind::Max).unwrap();
        // Empty world: eccentricity 2 before and after (vertex 1 moves to
        // distance 2). Deep bundle below the frontier member 2: pre k + L,
        // post 1 + L, gain 1.
        assert_eq!(pair.worst, Fin(0));
        assert_eq!(pair.best, Fin(1));
    }

    #[test]
    fn disconnecting_swap_is_minus_infinity() {
        // Path 0-1-2-3-4, owner 1, radius 3 sees everything; swapping the
        // edge to 0 for an edge to 3 strands vertex 0 in every completion.
        let g = path(5);
        let v = extract_view(&g, 1, 3);
        let s = swap(1, 0, 3);
        let pair = eval_pair(&v, &s, CostKind::Sum).unwrap();
        assert_eq!(pair.worst, NegInf);
        assert_eq!(pair.best, NegInf);
    }

    #[test]
    fn attitudes_draw_different_conclusions() {
        let g = path(4);
        let k = 2;
        let pess = PlayerModel::new(Attitude::Pessimistic, CostKind::Sum, k);
        let weak = PlayerModel::new(Attitude::WeaklyPessimistic, CostKind::Sum, k);
        let opt = PlayerModel::new(Attitude::Optimistic, CostKind::Sum, k);
        assert_eq!(is_unhappy(&g, 0, &pess), None);
        assert_eq!(is_unhappy(&g, 0, &weak), Some(swap(0, 1, 2)));
        assert_eq!(is_unhappy(&g, 0, &opt), Some(swap(0, 1, 2)));
    }

    #[test]
    fn inner_players_of_long_paths_move_under_pessimism() {
        // With radius 3 the endpoint of a 7-path sees 0-1-2-3; bending to 2
        // strictly helps every completion.
        let g = path(7);
        let model = PlayerModel::new(Attitude::Pessimistic, CostKind::Sum, 3);
        let w = is_unhappy(&g, 0, &model);
        assert_eq!(w, Some(swap(0, 1, 2)));
    }

    #[test]
    fn best_response_breaks_ties_lexicographically() {
        let g = path(4);
        let model = PlayerModel::new(Attitude::WeaklyPessimistic, CostKind::Sum, 2);
        // Owner 0's only candidates: (1,2) with worst 0. Owner 1 has
        // candidates (0,2),(0,3)... check stability of choice.
        let (s, d) = best_response_scored(&g, 0, &model).unwrap();
        assert_eq!(s, swap(0, 1, 2));
        assert_eq!(d, Fin(0));
    }

    #[test]
    fn swap_validation_errors() {
        let g = path(4);
        let v = extract_view(&g, 0, 2);
        assert_eq!(
            eval_pair(&v, &swap(1, 0, 3), CostKind::Sum),
            Err(BeliefError::MoverMismatch {
                expected: 0,
                got: 1
            })
        );
        assert_eq!(
            eval_pair(&v, &swap(0, 2, 1), CostKind::Sum),
            Err(BeliefError::RemoveNotNeighbor { v: 2 })
        );
        assert_eq!(
            eval_pair(&v, &swap(0, 1, 3), CostKind::Sum),
            Err(BeliefError::AddNotVisible { w: 3 })
        );
        assert_eq!(
            eval_pair(&v, &swap(0, 1, 1), CostKind::Sum),
            Err(BeliefError::AddTooClose { w: 1 })
        );
    }

    #[test]
    fn oracle_agrees_on_path_endpoint() {
        let g = path(4);
        let v = extract_view(&g, 0, 2);
        let s = swap(0, 1, 2);
        // Required budget: A=2, B=2, k=2 -> 9.
        let bounds = oracle_delta(&v, &s, CostKind::Sum, 9).unwrap();
        assert_eq!(bounds.min, Fin(0));
        assert_eq!(bounds.max, PosInf);
        let bounds = oracle_delta(&v, &s, CostKind::Max, 9).unwrap();
        assert_eq!(bounds.min, Fin(0));
        assert_eq!(bounds.max, Fin(1));
    }

    #[test]
    fn oracle_rejects_small_budgets() {
        let g = path(4);
        let v = extract_view(&g, 0, 2);
        let s = swap(0, 1, 2);
        assert_eq!(
            oracle_delta(&v, &s, CostKind::Sum, 3),
            Err(BeliefError::BudgetTooSmall {
                required: 9,
                given: 3
            })
        );
    }

    #[test]
    fn oracle_handles_disconnection() {
        let g = path(5);
        let v = extract_view(&g, 1, 3);
        let s = swap(1, 0, 3);
        let bounds = oracle_delta(&v, &s, CostKind::Sum, 50).unwrap();
        assert_eq!(bounds.min, NegInf);
        assert_eq!(bounds.max, NegInf);
    }

    #[test]
    fn probe_counts_escapes_only_outside_pendant_family() {
        // With at most one frontier member there are no bridges, so sampled
        // worlds are all pendant worlds and never escape the bounds.
        let g = path(4);
        let v = extract_view(&g, 0, 2);
        let s = swap(0, 1, 2);
        let report = oracle_probe_extended(&v, &s, CostKind::Sum, 100, 7).unwrap();
        assert_eq!(report.samples, 100);
        assert_eq!(report.below_closed_min, 0);
        assert_eq!(report.above_closed_max, 0);
    }

    #[test]
    fn probe_can_escape_after_disconnection() {
        // Owner 2 of a 5-path at radius 2 sees 0..=4 with frontier {0, 4}.
        // Swapping the edge to 1 for an edge to 4 cuts off 0 and 1 in the
        // pendant model, but a hidden bridge between 0 and 4 reconnects
        // them, so the true best case is finite rather than -inf.
        let g = path(5);
        let v = extract_view(&g, 2, 2);
        let s = swap(2, 1, 4);
        let pair = eval_pair(&v, &s, CostKind::Sum).unwrap();
        assert_eq!(pair.best, NegInf);
        let report = oracle_probe_extended(&v, &s, CostKind::Sum, 200, 11).unwrap();
        assert!(
            report.above_closed_max > 0,
            "bridge worlds should beat -inf: {report:?}"
        );
        assert_eq!(report.below_closed_min, 0);
    }

    #[test]
    fn characterize_sum_p3_on_small_trees() {
        // Double star: centers 0-1, leaves 2,3 on 0 and 4,5,6 on 1. The
        // residual component of 0 (path u=2, v=0, w=1) is {0, 3}: depth 1,
        // size 2 < 3 neighbors of 1 besides 0 -> leaf 2 is unhappy.
        let g = Graph::new(7, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (1, 6)]).unwrap();
        assert!(characterize_sum_p3(&g, 2).unwrap());
        // Star centers are never unhappy.
        assert!(!characterize_sum_p3(&g, 0).unwrap());
        // On a 4-path nothing satisfies the strict size inequality.
        let p = path(4);
        for u in 0..4 {
            assert!(!characterize_sum_p3(&p, u).unwrap());
        }
    }

    #[test]
    fn characterize_wp2_flags_degree_two_neighbors() {
        let p = path(4);
        assert!(characterize_wp2(&p, 0).unwrap());
        assert!(characterize_wp2(&p, 1).unwrap());
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        for u in 0..4 {
            assert!(!characterize_wp2(&star, u).unwrap());
        }
        let cycle = Graph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(characterize_wp2(&cycle, 0), Err(BeliefError::NotATree));
    }

    #[test]
    fn attitude_parsing_and_display() {
        assert_eq!("pess".parse::<Attitude>().unwrap(), Attitude::Pessimistic);
        assert_eq!(
            "weak".parse::<Attitude>().unwrap(),
            Attitude::WeaklyPessimistic
        );
        assert_eq!("opt".parse::<Attitude>().unwrap(), Attitude::Optimistic);
        assert!("hopeful".parse::<Attitude>().is_err());
        let m = PlayerModel::new(Attitude::Pessimistic, CostKind::Sum, 3);
        assert_eq!(m.to_string(), "pess-sum-k3");
    }
}
