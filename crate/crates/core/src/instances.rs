//! Generators for the instance families used throughout the analyses, with
//! pinned vertex numberings so traces and witnesses are reproducible.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// Errors from instance generation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    /// A size parameter is below the family's minimum.
    #[error("parameter {param} must be at least {min}, got {got}")]
    ParamTooSmall {
        param: &'static str,
        min: usize,
        got: usize,
    },
    /// The requested edge count is outside `[n-1, n(n-1)/2]`.
    #[error("edge count {got} outside [{min}, {max}] for n = {n}")]
    EdgeCountOutOfRange {
        n: usize,
        min: usize,
        max: usize,
        got: usize,
    },
}

/// Star on `n ≥ 1` vertices, center `0`.
pub fn gen_star(n: usize) -> Result<Graph, InstanceError> {
    require("n", 1, n)?;
    Ok(Graph::new(n, (1..n).map(|v| (0, v))).expect("star edges are valid"))
}

/// Path `0 - 1 - ... - n-1` on `n ≥ 1` vertices.
pub fn gen_path(n: usize) -> Result<Graph, InstanceError> {
    require("n", 1, n)?;
    Ok(Graph::new(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1))).expect("path edges are valid"))
}

/// Uniformly random labeled tree on `n ≥ 1` vertices (random generator
/// sequence decoded through the tree bijection).
pub fn gen_random_tree(n: usize, seed: u64) -> Result<Graph, InstanceError> {
    require("n", 1, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_tree_with(n, &mut rng))
}

/// Random labeled tree drawing from a caller-owned generator.
pub fn random_tree_with<R: Rng>(n: usize, rng: &mut R) -> Graph {
    match n {
        1 => Graph::new(1, []).expect("single vertex"),
        2 => Graph::new(2, [(0, 1)]).expect("single edge"),
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            crate::canonical::prufer_decode(&seq).expect("random sequence decodes")
        }
    }
}

/// Random connected graph: a random spanning tree plus `m - (n-1)` extra
/// edges drawn uniformly from the remaining non-edges.
pub fn gen_random_connected(n: usize, m: usize, seed: u64) -> Result<Graph, InstanceError> {
    require("n", 1, n)?;
    let min = n.saturating_sub(1);
    let max = n * n.saturating_sub(1) / 2;
    if m < min || m > max {
        return Err(InstanceError::EdgeCountOutOfRange {
            n,
            min,
            max,
            got: m,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = random_tree_with(n, &mut rng);
    let mut extra: Vec<(Vertex, Vertex)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !tree.has_edge(u, v) {
                extra.push((u, v));
            }
        }
    }
    extra.shuffle(&mut rng);
    let edges: Vec<(Vertex, Vertex)> = tree
        .edges()
        .chain(extra.into_iter().take(m - min))
        .collect();
    Ok(Graph::new(n, edges).expect("constructed edges are valid"))
}

/// The padded-spine family `TS(p)`, `p ≥ 3`: a spine
/// `a_0 - e_1 - e_2 - ... - e_p - a_{p+1}` where every spine vertex `e_i`
/// carries a pendant star (center `a_i` with three leaves) and both spine
/// ends are themselves centers of three-leaf stars.
///
/// Numbering is gadget-major: gadget 0 is `a_0 = 0` with leaves `1, 2, 3`;
/// gadget `i` (1-based) starts at `4 + 5(i-1)` with center `a_i`, leaves
/// `+1..+3`, and spine vertex `e_i = +4`; the far gadget `p+1` starts at
/// `4 + 5p`. Total `n = 5p + 8`, diameter `p + 3`.
pub fn gen_ts(p: usize) -> Result<Graph, InstanceError> {
    require("p", 3, p)?;
    let n = 5 * p + 8;
    let mut edges = Vec::with_capacity(n - 1);
    // Gadget 0: center 0, leaves 1..=3.
    for l in 1..=3 {
        edges.push((0, l));
    }
    let e_of = |i: usize| 4 + 5 * (i - 1) + 4; // spine vertex of gadget i, 1 <= i <= p
    for i in 1..=p {
        let base = 4 + 5 * (i - 1);
        for l in 1..=3 {
            edges.push((base, base + l));
        }
        edges.push((base, e_of(i))); // pendant star hangs on the spine vertex
    }
    let far = 4 + 5 * p;
    for l in 1..=3 {
        edges.push((far, far + l));
    }
    // Spine.
    edges.push((0, e_of(1)));
    for i in 1..p {
        edges.push((e_of(i), e_of(i + 1)));
    }
    edges.push((e_of(p), far));
    Ok(Graph::new(n, edges).expect("family edges are valid"))
}

/// `TS(p)` with `extra` additional leaves attached to the first pendant-star
/// center (vertex 4), appended as ids `5p+8, ...`.
pub fn gen_ts_padded(p: usize, extra: usize) -> Result<Graph, InstanceError> {
    let base = gen_ts(p)?;
    let n = base.n() + extra;
    let edges: Vec<(Vertex, Vertex)> = base
        .edges()
        .chain((0..extra).map(|j| (4, base.n() + j)))
        .collect();
    Ok(Graph::new(n, edges).expect("padded edges are valid"))
}

/// The variant family `TS'(p)`, `p ≥ 3`: like [`gen_ts`] but every gadget
/// is a four-leaf star, which weakens every zero-gain swap to a strict
/// loss for weakly pessimistic players.
///
/// Numbering: gadget 0 is center `0` with leaves `1..=4`; gadget `i`
/// (1-based) starts at `5 + 6(i-1)` with center `a_i`, leaves `+1..+4`, and
/// spine vertex `f_i = +5`; the far gadget starts at `5 + 6p`. Total
/// `n = 6p + 10`.
pub fn gen_ts_prime(p: usize) -> Result<Graph, InstanceError> {
    require("p", 3, p)?;
    let n = 6 * p + 10;
    let mut edges = Vec::with_capacity(n - 1);
    for l in 1..=4 {
        edges.push((0, l));
    }
    let f_of = |i: usize| 5 + 6 * (i - 1) + 5;
    for i in 1..=p {
        let base = 5 + 6 * (i - 1);
        for l in 1..=4 {
            edges.push((base, base + l));
        }
        edges.push((base, f_of(i)));
    }
    let far = 5 + 6 * p;
    for l in 1..=4 {
        edges.push((far, far + l));
    }
    edges.push((0, f_of(1)));
    for i in 1..p {
        edges.push((f_of(i), f_of(i + 1)));
    }
    edges.push((f_of(p), far));
    Ok(Graph::new(n, edges).expect("family edges are valid"))
}

/// Caterpillar on a spine of `q ≥ 2` vertices: spine `0 - 1 - ... - q-1`,
/// one leaf `q + i` under each spine vertex `i`, and two extra end leaves
/// `2q` (under spine vertex 0) and `2q + 1` (under spine vertex `q-1`).
/// Total `n = 2q + 2`, diameter `q + 1`, and no vertex has degree 2.
pub fn gen_caterpillar(q: usize) -> Result<Graph, InstanceError> {
    require("q", 2, q)?;
    let n = 2 * q + 2;
    let mut edges = Vec::with_capacity(n - 1);
    for i in 0..q - 1 {
        edges.push((i, i + 1));
    }
    for i in 0..q {
        edges.push((i, q + i));
    }
    edges.push((0, 2 * q));
    edges.push((q - 1, 2 * q + 1));
    Ok(Graph::new(n, edges).expect("family edges are valid"))
}

/// Seesaw on `n = 2m + 3` vertices, `m ≥ 2`: two adjacent hubs (`2m + 2`
/// with the `m + 1` even-id leaves, `2m + 1` with the `m` odd-id leaves).
/// Weakly pessimistic dynamics keeps shuttling leaves' preferred hub back
/// and forth, giving round-robin cycles.
pub fn gen_seesaw(m: usize) -> Result<Graph, InstanceError> {
    require("m", 2, m)?;
    let n = 2 * m + 3;
    let hub_even = 2 * m + 2;
    let hub_odd = 2 * m + 1;
    let mut edges = Vec::with_capacity(n - 1);
    for j in 0..=2 * m {
        if j % 2 == 0 {
            edges.push((hub_even, j));
        } else {
            edges.push((hub_odd, j));
        }
    }
    edges.push((hub_odd, hub_even));
    Ok(Graph::new(n, edges).expect("family edges are valid"))
}

/// Closed-form social (sum) cost of `TS(p)`:
/// `(25 p^3 + 330 p^2 + 593 p + 348) / 3`.
pub fn sc_ts_closed_form(p: usize) -> Ratio<i64> {
    let p = p as i64;
    Ratio::new(25 * p * p * p + 330 * p * p + 593 * p + 348, 3)
}

fn require(param: &'static str, min: usize, got: usize) -> Result<(), InstanceError> {
    if got < min {
        Err(InstanceError::ParamTooSmall { param, min, got })
    } else {
        Ok(())
    }
}
