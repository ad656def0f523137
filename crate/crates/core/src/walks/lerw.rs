use rustc_hash::FxHashMap;

use super::path::{LoopEraser, PathSeq};
use super::rng::RngStream;
use super::srw::{srw_path, StopRule};
use super::tree::{first_entry_tree, tree_path};
use super::zd::Packer;
use crate::error::{Error, Result};
use crate::lattice::{LatticeCoord, MultiGraph, VertexId};

/// Loop-erased walk from `start` to the first visit of `targets`.
pub fn lerw_sample(g: &MultiGraph, start: VertexId, targets: &[VertexId], rng: &mut RngStream) -> Result<PathSeq<VertexId>> {
    Ok(srw_path(g, start, &StopRule::hit(targets.to_vec()), rng)?.loop_erase())
}

/// Same endpoints as [`lerw_sample`] but erased backwards: the walk from `start` to `target` is
/// reversed, loop-erased, and reversed again.
pub fn reversed_lerw_sample(g: &MultiGraph, start: VertexId, target: VertexId, rng: &mut RngStream) -> Result<PathSeq<VertexId>> {
    let walk = srw_path(g, start, &StopRule::hit(vec![target]), rng)?;
    Ok(walk.reverse().loop_erase().reverse())
}

/// Samples a walk from `v` stopped at `w` and checks that the tree path from `w` to `v` in its
/// first-entry tree is the loop erasure of the reversed walk.
pub fn tree_path_matches_erasure(g: &MultiGraph, v: VertexId, w: VertexId, rng: &mut RngStream) -> Result<bool> {
    let walk = srw_path(g, v, &StopRule::hit(vec![w]), rng)?;
    let sub = first_entry_tree(g, &walk)?;
    let visited: Vec<_> = sub.edges();
    // the walk only covers part of the graph, so compare on the visited subgraph
    let mut ends: Vec<(u32, u32)> = visited
        .iter()
        .map(|e| {
            let (a, b) = g.edges()[e.index()];
            (a.0, b.0)
        })
        .collect();
    let mut label: FxHashMap<u32, u32> = FxHashMap::default();
    for &x in walk.vertices() {
        let next = label.len() as u32;
        label.entry(x.0).or_insert(next);
    }
    for (a, b) in ends.iter_mut() {
        *a = label[a];
        *b = label[b];
    }
    let local = MultiGraph::from_edges(label.len(), ends)?;
    let all: Vec<_> = local.edge_ids().collect();
    let tree = super::tree::SpanningSubgraph::from_edges(&local, &all)?;
    let path = tree_path(&tree, VertexId(label[&w.0]), VertexId(label[&v.0]))?;
    let erased = walk.reverse().loop_erase();
    let relabeled: Vec<VertexId> = erased.vertices().iter().map(|x| VertexId(label[&x.0])).collect();
    Ok(path.vertices() == relabeled.as_slice())
}

/// A loop-erased walk on Z^d cut off at a finite horizon, with a stability certificate.
#[derive(Clone, Debug)]
pub struct ZdLerw {
    /// Loop erasure of the walk up to the cutoff.
    pub erased: PathSeq<LatticeCoord>,
    /// Number of leading vertices of `erased` that no later part of the sampled walk touches
    /// after the checkpoint, so they are shared by every erasure from the checkpoint on.
    pub stable_len: usize,
    /// Vertex count of the erasure at the checkpoint.
    pub checkpoint_len: usize,
    pub checkpoint: u64,
    pub cutoff: u64,
}

impl ZdLerw {
    pub fn stable_prefix(&self) -> PathSeq<LatticeCoord> {
        PathSeq::new(self.erased.vertices()[..self.stable_len].to_vec())
    }

    /// True when the whole erasure at the checkpoint survived to the cutoff.
    pub fn is_certified(&self) -> bool {
        self.stable_len == self.checkpoint_len
    }
}

/// Loop-erased walk on Z^d (d ≥ 3) from `start`, using a walk of `cutoff` steps. The
/// certificate is taken at half the cutoff.
pub fn lerw_sample_zd(start: &LatticeCoord, cutoff: u64, rng: &mut RngStream) -> Result<ZdLerw> {
    lerw_sample_zd_with_checkpoint(start, cutoff, cutoff / 2, rng)
}

pub fn lerw_sample_zd_with_checkpoint(start: &LatticeCoord, cutoff: u64, checkpoint: u64, rng: &mut RngStream) -> Result<ZdLerw> {
    let d = start.dim();
    if d <= 2 {
        return Err(Error::invalid("d must be ≥ 3 for infinite-context LERW"));
    }
    if checkpoint > cutoff {
        return Err(Error::invalid("checkpoint exceeds cutoff"));
    }
    let packer = Packer::new(d)?;
    packer.check_horizon(&start.0, cutoff)?;
    let mut key = packer.pack(&start.0)?;
    let mut eraser = LoopEraser::new();
    eraser.push(key);
    let mut snapshot: Option<FxHashMap<u128, usize>> = None;
    let mut checkpoint_len = 0;
    let mut min_hit = usize::MAX;
    for t in 1..=cutoff {
        if t - 1 == checkpoint {
            checkpoint_len = eraser.current().len();
            snapshot = Some(eraser.current().iter().enumerate().map(|(i, k)| (*k, i)).collect());
        }
        key = packer.step(key, rng);
        eraser.push(key);
        if let Some(snap) = &snapshot {
            if let Some(&i) = snap.get(&key) {
                min_hit = min_hit.min(i);
            }
        }
    }
    if snapshot.is_none() {
        checkpoint_len = eraser.current().len();
    }
    let stable_len = if min_hit == usize::MAX { checkpoint_len } else { min_hit + 1 };
    let erased = PathSeq::new(eraser.current().iter().map(|k| packer.unpack(*k)).collect());
    Ok(ZdLerw { erased, stable_len, checkpoint_len, checkpoint, cutoff })
}
