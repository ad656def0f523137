//! Batch Monte Carlo experiments and the exact free/wired comparison.
//!
//! Replicate `i` of a run seeded with `s` draws from `RngStream::new(s, i)`, and replicate
//! results are reduced in index order, so estimates do not depend on the worker count.

mod connection;
mod estimate;
mod free_wired;
mod green;
mod intersection;

pub use connection::{
    component_density_check, connection_probability, separator_probability, symmetric_pair, Boundary, Budgets,
    DensityReport, Placement,
};
pub use estimate::{derive_seed, fit_power_law, run_replicates, run_replicates_with, EstimateResult, SlopeFit, THREADS_ENV};
pub use free_wired::{central_edge, free_wired_gap, GapRow};
pub use green::{green_function_scaling, GreenMethod, GreenScaling, EXACT_GREEN_VERTICES};
pub use intersection::{intersection_moments, intersection_probability, intersection_sweep, MomentEstimates, MAX_HORIZON};
