//! Player costs, social cost, and the potential functions that certify
//! convergence of pessimistic dynamics on trees.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::ext_int::ExtInt;
use crate::graph::{Graph, Vertex};

/// Which connection cost the players minimize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostKind {
    /// Sum of distances to all other players.
    Sum,
    /// Eccentricity: largest distance to any other player.
    Max,
}

impl fmt::Display for CostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostKind::Sum => write!(f, "sum"),
            CostKind::Max => write!(f, "max"),
        }
    }
}

impl FromStr for CostKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(CostKind::Sum),
            "max" => Ok(CostKind::Max),
            other => Err(format!("unknown cost kind {other:?} (expected sum|max)")),
        }
    }
}

/// Errors from potential comparisons.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CostError {
    /// Lexicographic comparison requires tuples from graphs of equal size.
    #[error("potential tuples have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
}

/// Cost of player `u`: sum of distances or eccentricity, `+inf` when some
/// player is unreachable. A single isolated player has cost `0`.
pub fn player_cost(g: &Graph, u: Vertex, kind: CostKind) -> ExtInt {
    let dist = g.distances_from(u);
    match kind {
        CostKind::Sum => dist.into_iter().sum(),
        CostKind::Max => dist.into_iter().max().unwrap_or(ExtInt::ZERO),
    }
}

/// Social cost: sum of all player costs (`+inf` when disconnected).
pub fn social_cost(g: &Graph, kind: CostKind) -> ExtInt {
    (0..g.n()).map(|u| player_cost(g, u, kind)).sum()
}

/// Potential for the sum cost: the social cost itself. Every improving swap
/// of a pessimistic player on a tree strictly decreases it.
pub fn phi_sum(g: &Graph) -> ExtInt {
    social_cost(g, CostKind::Sum)
}

/// Potential for the max cost: the multiset of player eccentricities sorted
/// non-increasingly, compared lexicographically. Every improving swap of a
/// pessimistic player on a tree strictly decreases it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxPotential(Vec<ExtInt>);

impl MaxPotential {
    /// The sorted (non-increasing) eccentricity tuple.
    pub fn values(&self) -> &[ExtInt] {
        &self.0
    }
}

impl PartialOrd for MaxPotential {
    /// Lexicographic order; tuples of different lengths are incomparable.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.0.len() != other.0.len() {
            return None;
        }
        Some(self.0.cmp(&other.0))
    }
}

impl Serialize for MaxPotential {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MaxPotential {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(MaxPotential(Vec::<ExtInt>::deserialize(deserializer)?))
    }
}

/// Computes the max-cost potential of `g`.
pub fn phi_max(g: &Graph) -> MaxPotential {
    let mut eccs: Vec<ExtInt> = (0..g.n())
        .map(|u| player_cost(g, u, CostKind::Max))
        .collect();
    eccs.sort_unstable_by(|a, b| b.cmp(a));
    MaxPotential(eccs)
}

/// Whether `after` is strictly lexicographically below `before`.
pub fn lex_decreasing(before: &MaxPotential, after: &MaxPotential) -> Result<bool, CostError> {
    match before.partial_cmp(after) {
        Some(ord) => Ok(ord == Ordering::Greater),
        None => Err(CostError::LengthMismatch {
            left: before.0.len(),
            right: after.0.len(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext_int::ExtInt::{Fin, PosInf};

    fn path(n: usize) -> Graph {
        Graph::new(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn star(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|v| (0, v))).unwrap()
    }

    #[test]
    fn path_costs() {
        let g = path(4);
        assert_eq!(player_cost(&g, 0, CostKind::Sum), Fin(6));
        assert_eq!(player_cost(&g, 1, CostKind::Sum), Fin(4));
        assert_eq!(player_cost(&g, 0, CostKind::Max), Fin(3));
        assert_eq!(player_cost(&g, 1, CostKind::Max), Fin(2));
        assert_eq!(social_cost(&g, CostKind::Sum), Fin(20));
        assert_eq!(social_cost(&g, CostKind::Max), Fin(10));
    }

    #[test]
    fn star_social_cost_matches_closed_forms() {
        for n in 2..10usize {
            let g = star(n);
            let n_i = n as i64;
            assert_eq!(
                social_cost(&g, CostKind::Sum),
                Fin(2 * (n_i - 1) * (n_i - 1))
            );
            let expect_max = if n == 2 { 2 } else { 2 * n_i - 1 };
            assert_eq!(social_cost(&g, CostKind::Max), Fin(expect_max));
        }
    }

    #[test]
    fn path_sum_social_cost_matches_cubic() {
        for n in 2..12usize {
            let n_i = n as i64;
            assert_eq!(
                social_cost(&path(n), CostKind::Sum),
                Fin((n_i * n_i * n_i - n_i) / 3)
            );
        }
    }

    #[test]
    fn disconnected_costs_are_infinite() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        assert_eq!(player_cost(&g, 0, CostKind::Sum), PosInf);
        assert_eq!(player_cost(&g, 2, CostKind::Max), PosInf);
        assert_eq!(social_cost(&g, CostKind::Sum), PosInf);
    }

    #[test]
    fn single_vertex_cost_is_zero() {
        let g = Graph::new(1, []).unwrap();
        assert_eq!(player_cost(&g, 0, CostKind::Sum), Fin(0));
        assert_eq!(player_cost(&g, 0, CostKind::Max), Fin(0));
    }

    #[test]
    fn max_potential_sorts_and_compares() {
        let p4 = phi_max(&path(4));
        assert_eq!(p4.values(), &[Fin(3), Fin(3), Fin(2), Fin(2)]);
        let s4 = phi_max(&star(4));
        assert_eq!(s4.values(), &[Fin(2), Fin(2), Fin(2), Fin(1)]);
        assert!(lex_decreasing(&p4, &s4).unwrap());
        assert!(!lex_decreasing(&s4, &p4).unwrap());
        assert!(!lex_decreasing(&s4, &s4).unwrap());
        let p5 = phi_max(&path(5));
        assert_eq!(
            lex_decreasing(&p5, &p4),
            Err(CostError::LengthMismatch { left: 5, right: 4 })
        );
    }

    #[test]
    fn cost_kind_parsing() {
        assert_eq!("sum".parse::<CostKind>().unwrap(), CostKind::Sum);
        assert_eq!("max".parse::<CostKind>().unwrap(), CostKind::Max);
        assert!("avg".parse::<CostKind>().is_err());
        assert_eq!(serde_json::to_string(&CostKind::Sum).unwrap(), "\"sum\"");
    }
}
