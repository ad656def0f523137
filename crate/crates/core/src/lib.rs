//! Uniform spanning trees on lattice boxes and small multigraphs.
//!
//! The crate is organised in layers:
//!
//! - [`lattice`]: finite multigraphs, lattice boxes, contraction/deletion minors and the
//!   wired-boundary quotient.
//! - [`exact`]: arbitrary-precision Kirchhoff computations (tree counts, cylinder
//!   probabilities, current fractions, harmonic measures, exact loop-erased walk laws).
//!   These double as oracles for every sampler.
//! - [`walks`]: path algebra, loop erasure, simple random walks on graphs, boxes and
//!   `Z^d`, the random-walk spanning tree construction and path fibers.
//! - [`experiments`]: Monte Carlo estimators for intersection, connection, separator and
//!   Green's function scaling, plus power-law fitting.
//! - [`io`]: experiment specs, result records and their JSON/CSV encodings.

pub mod error;
pub mod exact;
pub mod experiments;
pub mod io;
pub mod lattice;
pub mod walks;

pub use error::{Error, Result};
