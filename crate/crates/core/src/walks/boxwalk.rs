//! Walks on a lattice box addressed by coordinates, without building its graph.

use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::lattice::BoxShape;

/// Simple random walk on the box graph `B_n`: moves that would leave the box are never
/// proposed, so a boundary vertex steps uniformly among its in-box neighbours.
#[derive(Clone, Debug)]
pub struct BoxWalker {
    n: i64,
    pos: Vec<i64>,
    index: u64,
    strides: Vec<u64>,
}

impl BoxWalker {
    pub fn new(shape: BoxShape, start: &[i64]) -> Result<Self> {
        let index = shape
            .index(start)
            .ok_or_else(|| Error::invalid(format!("start {start:?} lies outside the box")))?;
        Ok(BoxWalker {
            n: shape.n as i64,
            pos: start.to_vec(),
            index,
            strides: (0..shape.d).map(|a| shape.stride(a)).collect(),
        })
    }

    #[inline]
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn position(&self) -> &[i64] {
        &self.pos
    }

    /// On the outer face `|x|∞ = n`.
    #[inline]
    pub fn on_boundary(&self) -> bool {
        self.pos.iter().any(|c| c.abs() == self.n)
    }

    #[inline]
    pub fn step(&mut self, rng: &mut RngStream) {
        let dirs = 2 * self.pos.len() as u32;
        loop {
            let k = rng.below(dirs) as usize;
            let axis = k >> 1;
            if k & 1 == 0 {
                if self.pos[axis] < self.n {
                    self.pos[axis] += 1;
                    self.index += self.strides[axis];
                    return;
                }
            } else if self.pos[axis] > -self.n {
                self.pos[axis] -= 1;
                self.index -= self.strides[axis];
                return;
            }
        }
    }
}

const ABSENT: u32 = u32::MAX;

/// Loop eraser over dense vertex indices `0..size`. Clearing costs the length of the current
/// path, so one eraser can be reused across replicates.
#[derive(Clone, Debug)]
pub struct DenseEraser {
    position: Vec<u32>,
    stack: Vec<u32>,
}

impl DenseEraser {
    pub fn new(size: u64) -> Result<Self> {
        if size >= ABSENT as u64 {
            return Err(Error::ResourceLimit { what: "dense eraser size", requested: size, limit: ABSENT as u64 - 1 });
        }
        Ok(DenseEraser {
            position: vec![ABSENT; size as usize],
            stack: Vec::new(),
        })
    }

    #[inline]
    pub fn push(&mut self, v: u32) {
        let p = self.position[v as usize];
        if p == ABSENT {
            self.position[v as usize] = self.stack.len() as u32;
            self.stack.push(v);
        } else {
            for w in self.stack.drain(p as usize + 1..) {
                self.position[w as usize] = ABSENT;
            }
        }
    }

    #[inline]
    pub fn position(&self, v: u32) -> Option<usize> {
        let p = self.position[v as usize];
        (p != ABSENT).then_some(p as usize)
    }

    pub fn path(&self) -> &[u32] {
        &self.stack
    }

    pub fn reset(&mut self) {
        for &w in &self.stack {
            self.position[w as usize] = ABSENT;
        }
        self.stack.clear();
    }
}
