//! Paths, loop erasure, and the random-walk samplers built on them.
//!
//! Every sampler takes an [`RngStream`] and is a pure function of its inputs and that stream.

mod boxwalk;
mod fiber;
mod lerw;
mod path;
mod rng;
mod srw;
mod tree;
pub mod zd;

pub use boxwalk::{BoxWalker, DenseEraser};
pub use fiber::{fiber_report, gamma_fiber, gamma_fiber_with_limit, phi_fiber, verify_fiber_multisets, FiberReport, DEFAULT_FIBER_LIMIT};
pub use lerw::{lerw_sample, lerw_sample_zd, lerw_sample_zd_with_checkpoint, reversed_lerw_sample, tree_path_matches_erasure, ZdLerw};
pub use path::{intersection_count, intersects, path_weight, LoopEraser, PathSeq};
pub use rng::RngStream;
pub use srw::{srw_path, srw_path_zd, StopKind, StopRule, DEFAULT_STEP_BUDGET};
pub use tree::{aldous_broder_tree, aldous_broder_tree_with_budget, first_entry_tree, mu3_sequential_sample, tree_path, SpanningSubgraph};
