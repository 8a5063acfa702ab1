//! Simulator and analysis toolkit for swap games on graphs.
//!
//! Players are the vertices of a connected graph. A player `u` may *swap* one
//! of its incident edges `{u, v}` for a new edge `{u, w}`, trying to lower its
//! connection cost (sum of distances to everyone, or eccentricity). Each
//! player only sees the graph up to a fixed radius `k` around itself, so it
//! must judge a swap against every completion of the world that is consistent
//! with its view. Three attitudes are supported:
//!
//! - **pessimistic** — move only if the swap improves the cost in *every*
//!   consistent world (strictly positive worst-case delta);
//! - **weakly pessimistic** — move if no world is hurt and the improvement is
//!   bounded (non-negative, finite worst-case delta);
//! - **optimistic** — move if *some* consistent world improves (strictly
//!   positive best-case delta).
//!
//! On top of the per-player decision rule the crate provides best-response
//! dynamics under several schedulers with cycle detection and potential
//! monitoring, generators for the instance families used in the analyses,
//! exhaustive equilibrium scans over small trees with price-of-anarchy
//! reports, and a brute-force oracle that validates the closed-form delta
//! evaluation by enumerating completions directly.

pub mod analysis;
pub mod belief;
pub mod canonical;
pub mod cost;
pub mod dynamics;
pub mod exec;
pub mod ext_int;
pub mod graph;
pub mod instances;
pub mod io;
pub mod view;

pub use belief::{
    best_response, best_response_in_view, best_response_scored, characterize_sum_p3,
    characterize_wp2, delta, is_unhappy, oracle_delta, oracle_exact_budget, oracle_probe_extended,
    unhappy_witness, Attitude, BeliefError, DeltaMode, OracleBounds, PlayerModel, ProbeReport,
};
pub use cost::{phi_max, phi_sum, player_cost, social_cost, CostKind, MaxPotential};
pub use dynamics::{
    default_max_steps, run, run_simultaneous, step, DynamicsError, MoveRecord, Outcome, RunResult,
    Scheduler, TraceEvent,
};
pub use exec::ExecMode;
pub use ext_int::ExtInt;
pub use graph::{Graph, GraphError, PathSpec, Vertex};
pub use view::{extract_view, Swap, View};
