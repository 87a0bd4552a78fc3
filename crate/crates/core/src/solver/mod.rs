//! Minimum set cover over coverage-matrix rows.
//!
//! [`solve_exact`] is a depth-first branch and bound seeded by
//! [`solve_greedy`] and a weighted local search; [`verify_cover`] is the
//! independent feasibility check.

mod bound;
mod exact;
mod greedy;
mod interchange;
mod local;
mod problem;
mod reduce;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

pub use exact::solve_exact;
pub use greedy::solve_greedy;
pub use interchange::{load_problem, load_solution, save_problem, save_solution, SolutionFile};
pub use problem::{make_problem, verify_cover, CoverProblem, CoverReport};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    /// Proven minimum.
    Optimal,
    /// Budget ran out; the objective may not be minimal.
    Feasible,
    /// Produced by the greedy heuristic alone.
    Greedy,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Feasible => "feasible",
            Status::Greedy => "greedy",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimal" => Ok(Status::Optimal),
            "feasible" => Ok(Status::Feasible),
            "greedy" => Ok(Status::Greedy),
            other => Err(Error::range(format!("unknown solution status {other:?}"))),
        }
    }
}

/// Search limits. Local-search moves and branch-and-bound nodes both count
/// against `nodes`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub nodes: u64,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub const DEFAULT_NODES: u64 = 10_000_000;

    pub fn nodes(nodes: u64) -> Self {
        Budget {
            nodes,
            time_limit: None,
        }
    }

    pub fn with_time_limit(self, limit: Duration) -> Self {
        Budget {
            time_limit: Some(limit),
            ..self
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::nodes(Budget::DEFAULT_NODES)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSolution {
    /// Selected rows, ascending.
    pub selected: Vec<usize>,
    pub objective: usize,
    pub status: Status,
    pub lower_bound: usize,
    /// Search effort spent: local-search moves plus tree nodes.
    pub nodes: u64,
}
