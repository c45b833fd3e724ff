//! Constrained single-agent planning through an ordered list of targets.
//!
//! [`LowLevelPlanner`] runs a safe-interval search whose states also carry a
//! stage, the number of targets visited so far. A target only counts when the
//! agent reaches it at the right stage, so passing over a later target early
//! does not tick it off.

mod constraints;
mod intervals;
mod path;
mod planner;

pub use constraints::{AgentConstraints, Constraint, ConstraintKind, ConstraintSet};
pub use intervals::{build_safe_intervals, Interval, SafeIntervalIndex};
pub use path::{path_cost, TimedPath, Visit};
pub use planner::{low_level_search, LowLevelPlanner};

use thiserror::Error;

use crate::world::Vertex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathingError {
    #[error("path endpoint {0} is not a passable cell")]
    Blocked(Vertex),
}
