//! Validation, ground truth and benchmarking.
//!
//! [`validate_solution`] checks a joint plan against every problem rule,
//! [`brute_force_oracle`] computes exact optima on tiny instances by searching
//! the joint state space, and [`run_benchmark`] sweeps solver configurations
//! over MovingAI scenarios and aggregates the outcomes.

mod bench;
mod generate;
mod oracle;
mod plot;
mod validate;

pub use bench::{
    aggregate, cell_seed, missing_files, read_runs_csv, run_benchmark, sequence_lower_bound, write_runs_csv,
    write_summary_csv, BenchConfig, BenchReport, CellSummary, RunRecord, Suite,
};
pub use generate::{largest_component, random_instance, random_map, room_map};
pub use oracle::{brute_force_oracle, OracleVerdict};
pub use plot::{render_svg, PlotMetric};
pub use validate::{validate_solution, Violation, ViolationKind};

use std::path::PathBuf;

use thiserror::Error;

use crate::adaptations::AdaptationError;
use crate::sequencing::SequencingError;
use crate::world::WorldError;
use crate::Cost;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("solution cost {sol} is below the lower bound {lb}")]
    BoundBreach { lb: Cost, sol: Cost },

    #[error("solution cost is 0 but the lower bound is {0}")]
    ZeroCost(Cost),

    #[error("instance too large for the brute-force oracle: {0}")]
    OracleTooLarge(String),

    #[error("benchmark config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    World(#[from] WorldError),

    #[error(transparent)]
    Sequencing(#[from] SequencingError),

    #[error(transparent)]
    Adaptation(#[from] AdaptationError),
}

/// Solution quality ratio `cost_lb / cost_sol`.
pub fn compute_sqr(cost_lb: Cost, cost_sol: Cost) -> Result<f64, HarnessError> {
    match (cost_lb, cost_sol) {
        (0, 0) => Ok(1.0),
        (lb, 0) => Err(HarnessError::ZeroCost(lb)),
        (lb, sol) if sol < lb => Err(HarnessError::BoundBreach { lb, sol }),
        (lb, sol) => Ok(lb as f64 / sol as f64),
    }
}
