//! Collaborative task sequencing for multi-agent path finding.
//!
//! Every agent has to visit a set of task cells, in whatever order it likes,
//! before parking at its destination (CTS mode) or at its last task (MG mode).
//! The solver runs conflict-based search over a forest of constraint trees,
//! one tree per joint task sequence, pulling further sequences from an exact
//! K-best stream only when the current trees cannot beat them by more than a
//! factor of `1 + omega`.
//!
//! The crate is split bottom-up:
//!
//! - [`world`]: grids, MovingAI files, instances, distances
//! - [`sequencing`]: restricted TSP and K-best task sequences
//! - [`pathing`]: constrained multi-goal single-agent planning
//! - [`search`]: the forest conflict-based search
//! - [`adaptations`]: MG variants and the sequential baseline
//! - [`harness`]: validation, brute-force oracle, metrics and benchmarks

pub mod adaptations;
pub mod harness;
pub mod pathing;
pub mod search;
pub mod sequencing;
pub mod world;

/// Travel cost in timesteps.
pub type Cost = u32;
/// Discrete timestep.
pub type Time = u32;

pub use adaptations::{solve_mg_a, solve_mg_b, solve_mg_c, solve_sequential, AdaptationConfig, Variant};
pub use harness::{brute_force_oracle, compute_sqr, validate_solution, Violation, ViolationKind};
pub use pathing::{low_level_search, path_cost, Constraint, ConstraintSet, TimedPath};
pub use search::{solve, SolveResult, SolveStats, SolveStatus, SolverConfig};
pub use sequencing::{JointKBestStream, JointSequence, TaskSequence};
pub use world::{AgentId, GridMap, Instance, Mode, TaskId, Vertex};
