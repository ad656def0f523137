//! Exact Kirchhoff computations on small multigraphs.
//!
//! Nothing here touches floating point. Spanning-tree counts come from fraction-free
//! determinants of reduced Laplacians, electrical quantities from exact rational solves,
//! and the recursive contraction/deletion measure is evaluated branch by branch. The
//! samplers in [`crate::walks`] are tested against these values.

pub mod linalg;
mod potential;
mod trees;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use potential::{
    exact_lerw_law, exact_lerw_law_with, green_function_exact, harmonic_hitting_probability,
    HarmonicSolution, LerwLaw,
};
pub(crate) use trees::check_enumeration;
pub use trees::{
    brute_force_tree_enumeration, cylinder_probability, edge_current_fraction, mu3_exact_law,
    mu3_exact_law_with, spanning_tree_count, spanning_tree_count_with, uniform_tree_law, TreeLaw,
};

/// Size limits for exact computations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExactLimits {
    /// Largest graph (in vertices) handed to a determinant or linear solve.
    pub max_vertices: usize,
    /// Largest number of spanning trees an enumerated law may have.
    pub max_trees: u64,
    /// Largest edge count for exhaustive tree enumeration.
    pub max_enumeration_edges: usize,
    /// Largest support of an exact loop-erased walk law.
    pub max_lerw_paths: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits {
            max_vertices: 2000,
            max_trees: 1_000_000,
            max_enumeration_edges: 25,
            max_lerw_paths: 100_000,
        }
    }
}

/// An exact probability.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProb(pub BigRational);

impl ExactProb {
    pub fn new(num: i64, den: i64) -> Self {
        ExactProb(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        ExactProb(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactProb(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    /// `num/den` in lowest terms.
    pub fn fraction(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }

    /// Decimal rendering with 40 significant digits.
    pub fn decimal(&self) -> String {
        linalg::to_decimal(&self.0, 40)
    }

    /// Nearest double; for reporting only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn parse_fraction(s: &str) -> Option<Self> {
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(ExactProb(BigRational::new(n, d)))
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Serialize, Deserialize)]
struct ExactRepr {
    decimal: String,
    fraction: String,
}

impl Serialize for ExactProb {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ExactRepr {
            decimal: self.decimal(),
            fraction: self.fraction(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactProb {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ExactRepr::deserialize(d)?;
        ExactProb::parse_fraction(&repr.fraction)
            .ok_or_else(|| serde::de::Error::custom(format!("bad fraction {:?}", repr.fraction)))
    }
}

/// Number of spanning trees, parallel edges counted as distinct.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TreeCount(pub BigUint);

impl TreeCount {
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for TreeCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for TreeCount {
    fn from(n: u64) -> Self {
        TreeCount(BigUint::from(n))
    }
}
