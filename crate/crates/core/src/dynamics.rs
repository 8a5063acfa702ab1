//! Best-response dynamics: schedulers, cycle detection, potential
//! monitoring, and machine-readable traces.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::belief::{best_response_scored, is_unhappy, Attitude, PlayerModel};
use crate::canonical::{canonical, CodeKind};
use crate::cost::{lex_decreasing, phi_max, phi_sum, CostKind, MaxPotential};
use crate::ext_int::ExtInt;
use crate::graph::{Graph, GraphError, Vertex};

/// Errors from running dynamics.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DynamicsError {
    /// The initial graph must be connected.
    #[error("initial graph is disconnected")]
    DisconnectedStart,
    /// A round-robin order must be a permutation of the players.
    #[error("scheduler order is not a permutation of 0..{n}")]
    BadOrder { n: usize },
    /// A fixed player id must exist.
    #[error("scheduled player {player} out of range for n = {n}")]
    PlayerOutOfRange { player: Vertex, n: usize },
    /// The monitored potential failed to decrease strictly on a move of
    /// pessimistic dynamics on a tree.
    #[error("potential violation at step {step}: {detail}")]
    PotentialViolation { step: usize, detail: String },
    /// A move produced an illegal graph operation (internal invariant).
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Which player(s) get to move at each step.
#[derive(Clone, Debug)]
enum Policy {
    RoundRobin { order: Vec<Vertex> },
    Random,
    Fixed { player: Vertex },
    Simultaneous,
}

/// Move scheduler. Round-robin keeps a cursor (the position after the last
/// mover) and scans forward for the next unhappy player; random picks
/// uniformly among all currently unhappy players using a seeded generator;
/// fixed always offers the turn to one player; simultaneous lets every
/// unhappy player fire its best response at once.
#[derive(Clone, Debug)]
pub struct Scheduler {
    policy: Policy,
    cursor: usize,
    rng: Option<ChaCha8Rng>,
}

impl Scheduler {
    /// Round-robin over players `0..n` in id order.
    pub fn round_robin(n: usize) -> Scheduler {
        Scheduler::with_order((0..n).collect())
    }

    /// Round-robin over an explicit player order (must be a permutation of
    /// the players of the graph it is used with).
    pub fn with_order(order: Vec<Vertex>) -> Scheduler {
        Scheduler {
            policy: Policy::RoundRobin { order },
            cursor: 0,
            rng: None,
        }
    }

    /// Uniform choice among unhappy players, from a seeded generator.
    pub fn random(seed: u64) -> Scheduler {
        Scheduler {
            policy: Policy::Random,
            cursor: 0,
            rng: Some(ChaCha8Rng::seed_from_u64(seed)),
        }
    }

    /// Only `player` ever gets the turn.
    pub fn fixed(player: Vertex) -> Scheduler {
        Scheduler {
            policy: Policy::Fixed { player },
            cursor: 0,
            rng: None,
        }
    }

    /// Every unhappy player moves at once, with set-semantics edge edits.
    pub fn simultaneous() -> Scheduler {
        Scheduler {
            policy: Policy::Simultaneous,
            cursor: 0,
            rng: None,
        }
    }

    fn validate(&self, g: &Graph) -> Result<(), DynamicsError> {
        match &self.policy {
            Policy::RoundRobin { order } => {
                let n = g.n();
                if order.len() != n {
                    return Err(DynamicsError::BadOrder { n });
                }
                let mut seen = vec![false; n];
                for &p in order {
                    if p >= n || seen[p] {
                        return Err(DynamicsError::BadOrder { n });
                    }
                    seen[p] = true;
                }
                Ok(())
            }
            Policy::Fixed { player } => {
                if *player >= g.n() {
                    Err(DynamicsError::PlayerOutOfRange {
                        player: *player,
                        n: g.n(),
                    })
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// The scheduler component of the dynamics state, for cycle detection:
    /// two identical graphs only close a cycle if the scheduler will behave
    /// identically from both occurrences.
    fn cursor_key(&self) -> u128 {
        match &self.policy {
            Policy::RoundRobin { .. } => self.cursor as u128,
            Policy::Random => self
                .rng
                .as_ref()
                .expect("random scheduler has a generator")
                .get_word_pos(),
            Policy::Fixed { .. } | Policy::Simultaneous => 0,
        }
    }

    fn is_fixed(&self) -> bool {
        matches!(self.policy, Policy::Fixed { .. })
    }

    fn is_simultaneous(&self) -> bool {
        matches!(self.policy, Policy::Simultaneous)
    }
}

/// One move as recorded in a trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub mover: Vertex,
    /// The removed edge, normalized.
    pub removed: (Vertex, Vertex),
    /// The added edge, normalized.
    pub added: (Vertex, Vertex),
    /// The mover's attitude delta for this move.
    pub delta: ExtInt,
}

/// One step of a run: the move(s) made and the resulting state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub step: usize,
    pub moves: Vec<MoveRecord>,
    /// Social (sum) cost of the resulting graph.
    pub phi_sum: ExtInt,
    /// Sorted eccentricity tuple of the resulting graph.
    pub phi_max: MaxPotential,
    /// Short digest of the resulting labeled graph.
    pub state: String,
}

/// Why a run ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Outcome {
    /// No player anywhere wants to move; `steps` moves were made.
    Equilibrium { steps: usize },
    /// The exact dynamics state (labeled graph + scheduler position) at
    /// index `entry` recurred `period` steps later.
    Cycle { entry: usize, period: usize },
    /// The step budget ran out before anything else happened.
    BudgetExhausted { steps: usize },
    /// A fixed-player schedule reached a state where that player is content
    /// but some other player is not: a fixed point of the schedule, not an
    /// equilibrium of the game.
    Stalled { steps: usize },
    /// A simultaneous step produced an anomalous graph (edge-count drift or
    /// disconnection); the offending step is recorded and the run stops.
    Halted { steps: usize, reason: String },
}

impl Outcome {
    /// One-line human-readable summary.
    pub fn summary(&self) -> String {
        match self {
            Outcome::Equilibrium { steps } => format!("equilibrium steps={steps}"),
            Outcome::Cycle { entry, period } => format!("cycle entry={entry} period={period}"),
            Outcome::BudgetExhausted { steps } => format!("budget-exhausted steps={steps}"),
            Outcome::Stalled { steps } => format!("stalled steps={steps}"),
            Outcome::Halted { steps, reason } => format!("halted steps={steps} reason={reason}"),
        }
    }
}

/// Result of a run: outcome, per-step trace, and the final graph.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub outcome: Outcome,
    pub trace: Vec<TraceEvent>,
    pub final_graph: Graph,
}

/// Default step budget: `4 n^3` moves.
pub fn default_max_steps(n: usize) -> usize {
    n.pow(3).saturating_mul(4)
}

fn move_record(swap: crate::view::Swap, delta: ExtInt) -> MoveRecord {
    let norm = |a: Vertex, b: Vertex| if a < b { (a, b) } else { (b, a) };
    MoveRecord {
        mover: swap.mover,
        removed: norm(swap.mover, swap.remove),
        added: norm(swap.mover, swap.add),
        delta,
    }
}

/// Executes one scheduler step on `g`: `None` when the scheduled player(s)
/// have no eligible move, otherwise the move records (one per mover) and the
/// resulting graph.
pub fn step(
    g: &Graph,
    model: &PlayerModel,
    sch: &mut Scheduler,
) -> Result<Option<(Vec<MoveRecord>, Graph)>, DynamicsError> {
    sch.validate(g)?;
    match &sch.policy {
        Policy::RoundRobin { order } => {
            let len = order.len();
            for i in 0..len {
                let idx = (sch.cursor + i) % len;
                let u = order[idx];
                if let Some((swap, delta)) = best_response_scored(g, u, model) {
                    let g2 = g.apply_swap(swap.mover, swap.remove, swap.add)?;
                    sch.cursor = (idx + 1) % len;
                    return Ok(Some((vec![move_record(swap, delta)], g2)));
                }
            }
            Ok(None)
        }
        Policy::Random => {
            let unhappy: Vec<Vertex> = (0..g.n())
                .filter(|&u| is_unhappy(g, u, model).is_some())
                .collect();
            if unhappy.is_empty() {
                return Ok(None);
            }
            let rng = sch.rng.as_mut().expect("random scheduler has a generator");
            let u = unhappy[rng.gen_range(0..unhappy.len())];
            let (swap, delta) =
                best_response_scored(g, u, model).expect("unhappy player has a best response");
            let g2 = g.apply_swap(swap.mover, swap.remove, swap.add)?;
            Ok(Some((vec![move_record(swap, delta)], g2)))
        }
        Policy::Fixed { player } => match best_response_scored(g, *player, model) {
            None => Ok(None),
            Some((swap, delta)) => {
                let g2 = g.apply_swap(swap.mover, swap.remove, swap.add)?;
                Ok(Some((vec![move_record(swap, delta)], g2)))
            }
        },
        Policy::Simultaneous => {
            let mut moves = Vec::new();
            for u in 0..g.n() {
                if let Some((swap, delta)) = best_response_scored(g, u, model) {
                    moves.push(move_record(swap, delta));
                }
            }
            if moves.is_empty() {
                return Ok(None);
            }
            // Set semantics: all removals, then all additions. Conflicting
            // moves may drift the edge count or disconnect the graph; the
            // caller diagnoses that.
            let mut edges: std::collections::BTreeSet<(Vertex, Vertex)> = g.edges().collect();
            for m in &moves {
                edges.remove(&m.removed);
            }
            for m in &moves {
                edges.insert(m.added);
            }
            let g2 = Graph::new(g.n(), edges)?;
            Ok(Some((moves, g2)))
        }
    }
}

fn globally_stable(g: &Graph, model: &PlayerModel) -> bool {
    (0..g.n()).all(|u| is_unhappy(g, u, model).is_none())
}

/// Runs best-response dynamics from `g0` until equilibrium, a detected
/// cycle, a schedule fixed point, a simultaneous anomaly, or the step
/// budget.
///
/// While the attitude is pessimistic and the current graph is a tree, the
/// per-kind potential (social cost for the sum kind, the sorted eccentricity
/// tuple for the max kind) is checked to decrease strictly at every
/// single-player move; a failure aborts with
/// [`DynamicsError::PotentialViolation`]. Simultaneous steps are outside the
/// potential argument and are not monitored.
///
/// Cycle detection keys on the labeled graph *plus* the scheduler position
/// (round-robin cursor or random-stream position), so a reported cycle
/// really does repeat forever.
pub fn run(
    g0: &Graph,
    model: &PlayerModel,
    mut sch: Scheduler,
    max_steps: usize,
) -> Result<RunResult, DynamicsError> {
    assert!(max_steps >= 1, "step budget must be at least 1");
    if !g0.is_connected() {
        return Err(DynamicsError::DisconnectedStart);
    }
    sch.validate(g0)?;
    let monitor = model.attitude == Attitude::Pessimistic && !sch.is_simultaneous();
    let mut g = g0.clone();
    let mut trace: Vec<TraceEvent> = Vec::new();
    let mut seen: HashMap<(Vec<u8>, u128), usize> = HashMap::new();
    for t in 0..=max_steps {
        let code = canonical(&g, CodeKind::Labeled)
            .expect("labeled codes exist for every graph")
            .bytes;
        if let Some(&entry) = seen.get(&(code.clone(), sch.cursor_key())) {
            return Ok(RunResult {
                outcome: Outcome::Cycle {
                    entry,
                    period: t - entry,
                },
                trace,
                final_graph: g,
            });
        }
        seen.insert((code, sch.cursor_key()), t);
        if t == max_steps {
            return Ok(RunResult {
                outcome: Outcome::BudgetExhausted { steps: max_steps },
                trace,
                final_graph: g,
            });
        }
        let pre_tree = monitor && g.is_tree();
        let pre_phi_sum = (pre_tree && model.kind == CostKind::Sum).then(|| phi_sum(&g));
        let pre_phi_max = (pre_tree && model.kind == CostKind::Max).then(|| phi_max(&g));
        match step(&g, model, &mut sch)? {
            None => {
                let outcome = if sch.is_fixed() && !globally_stable(&g, model) {
                    Outcome::Stalled { steps: t }
                } else {
                    Outcome::Equilibrium { steps: t }
                };
                return Ok(RunResult {
                    outcome,
                    trace,
                    final_graph: g,
                });
            }
            Some((moves, g2)) => {
                let new_phi_sum = phi_sum(&g2);
                let new_phi_max = phi_max(&g2);
                if let Some(prev) = pre_phi_sum {
                    if new_phi_sum >= prev {
                        return Err(DynamicsError::PotentialViolation {
                            step: t,
                            detail: format!("social cost went {prev} -> {new_phi_sum}"),
                        });
                    }
                }
                if let Some(prev) = &pre_phi_max {
                    let decreased = lex_decreasing(prev, &new_phi_max).map_err(|e| {
                        DynamicsError::PotentialViolation {
                            step: t,
                            detail: e.to_string(),
                        }
                    })?;
                    if !decreased {
                        return Err(DynamicsError::PotentialViolation {
                            step: t,
                            detail: format!(
                                "eccentricity tuple did not decrease: {:?} -> {:?}",
                                prev.values(),
                                new_phi_max.values()
                            ),
                        });
                    }
                }
                let event = TraceEvent {
                    step: t,
                    moves,
                    phi_sum: new_phi_sum,
                    phi_max: new_phi_max,
                    state: canonical(&g2, CodeKind::Labeled)
                        .expect("labeled codes exist for every graph")
                        .digest_hex(),
                };
                let anomaly = if sch.is_simultaneous() {
                    if g2.edge_count() != g.edge_count() {
                        Some(format!(
                            "edge count drifted from {} to {}",
                            g.edge_count(),
                            g2.edge_count()
                        ))
                    } else if !g2.is_connected() {
                        Some("graph disconnected".to_string())
                    } else {
                        None
                    }
                } else {
                    debug_assert_eq!(g2.edge_count(), g.edge_count());
                    debug_assert!(g2.is_connected(), "eligible single moves keep connectivity");
                    None
                };
                trace.push(event);
                g = g2;
                if let Some(reason) = anomaly {
                    return Ok(RunResult {
                        outcome: Outcome::Halted {
                            steps: t + 1,
                            reason,
                        },
                        trace,
                        final_graph: g,
                    });
                }
            }
        }
    }
    unreachable!("loop returns at or before the budget check")
}

/// Runs simultaneous dynamics (every unhappy player fires at once).
pub fn run_simultaneous(
    g0: &Graph,
    model: &PlayerModel,
    max_steps: usize,
) -> Result<RunResult, DynamicsError> {
    run(g0, model, Scheduler::simultaneous(), max_steps)
}
