//! Exact models, bounds and heuristics for scheduling jobs on identical
//! parallel machines to minimize total weighted completion time.
//!
//! The crate builds the arc-flow graph of a problem instance (plain or with
//! horizon, window and job-type reductions), writes five MILP formulations
//! as LP or MPS files, solves tiny instances exactly by enumeration, and
//! runs an iterated local search for everything else.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod flowgraph;
pub mod heuristic;
pub mod instance;
pub mod milp;
pub mod oracle;
pub mod rng;

pub use error::{Error, Result};

/// Exact rational used for bounds and model coefficients.
pub type Rational = num_rational::Ratio<i128>;
