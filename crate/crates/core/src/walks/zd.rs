//! Packed lattice points for fast walks on Z^d.
//!
//! A point is one `u128` with a fixed-width biased field per coordinate, so a walk step is a
//! single add or subtract and hashing a point is cheap.

use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::lattice::LatticeCoord;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Packer {
    d: usize,
    bits: u32,
}

impl Packer {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 || d > 64 {
            return Err(Error::invalid(format!("unsupported dimension {d}")));
        }
        let bits = (128 / d as u32).min(32);
        Ok(Packer { d, bits })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Largest coordinate magnitude that packs without overflow.
    pub fn reach(&self) -> i64 {
        (1i64 << (self.bits - 1)) - 1
    }

    #[inline]
    fn bias(&self) -> i64 {
        1i64 << (self.bits - 1)
    }

    #[inline]
    pub fn unit(&self, axis: usize) -> u128 {
        1u128 << (axis as u32 * self.bits)
    }

    pub fn pack(&self, c: &[i64]) -> Result<u128> {
        if c.len() != self.d {
            return Err(Error::invalid("dimension mismatch"));
        }
        let mut k = 0u128;
        for (i, &x) in c.iter().enumerate() {
            if x.abs() > self.reach() {
                return Err(Error::invalid(format!("coordinate {x} out of packing range")));
            }
            k |= ((x + self.bias()) as u128) << (i as u32 * self.bits);
        }
        Ok(k)
    }

    pub fn unpack(&self, k: u128) -> LatticeCoord {
        let mask = (1u128 << self.bits) - 1;
        LatticeCoord(
            (0..self.d)
                .map(|i| ((k >> (i as u32 * self.bits)) & mask) as i64 - self.bias())
                .collect(),
        )
    }

    /// One uniform nearest-neighbour step.
    #[inline]
    pub fn step(&self, k: u128, rng: &mut RngStream) -> u128 {
        let r = rng.below(2 * self.d as u32) as usize;
        let u = self.unit(r >> 1);
        if r & 1 == 0 {
            k + u
        } else {
            k - u
        }
    }

    /// Rejects walks long enough to leave the packing range.
    pub fn check_horizon(&self, start: &[i64], steps: u64) -> Result<()> {
        let far = start.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) + steps;
        if far > self.reach() as u64 {
            return Err(Error::ResourceLimit {
                what: "walk horizon",
                requested: steps,
                limit: (self.reach() as u64).saturating_sub(far - steps),
            });
        }
        Ok(())
    }
}
