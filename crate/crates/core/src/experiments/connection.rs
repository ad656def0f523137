use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::estimate::{collect_censored, run_replicates, run_replicates_with, EstimateResult};
use crate::error::{Error, Result};
use crate::lattice::{BoxShape, LatticeBox, LatticeCoord, VertexId, DEFAULT_VERTEX_BUDGET};
use crate::walks::{aldous_broder_tree_with_budget, BoxWalker, DenseEraser, LoopEraser, RngStream, DEFAULT_STEP_BUDGET};

/// Boundary condition for tree samples on a box.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// The box itself.
    #[default]
    Free,
    /// The outer face `|x|∞ = n` glued into one vertex; connections through it are discarded.
    Wired,
}

/// Caps for sampling runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budgets {
    /// Walk steps per replicate before it is censored.
    pub step_budget: u64,
    /// Largest box (in vertices) that may be indexed densely or materialized.
    pub vertex_budget: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { step_budget: DEFAULT_STEP_BUDGET, vertex_budget: DEFAULT_VERTEX_BUDGET }
    }
}

fn dense_shape(d: usize, n: u32, budgets: &Budgets) -> Result<BoxShape> {
    let shape = BoxShape::new(d, n)?;
    if shape.vertex_count() > budgets.vertex_budget {
        return Err(Error::ResourceLimit { what: "box vertices", requested: shape.vertex_count(), limit: budgets.vertex_budget });
    }
    Ok(shape)
}

/// Canonical pair at separation `r` along the first axis, centred on the origin.
pub fn symmetric_pair(d: usize, r: u32) -> (LatticeCoord, LatticeCoord) {
    let mut v = vec![0i64; d];
    let mut w = vec![0i64; d];
    v[0] = -((r / 2) as i64);
    w[0] = v[0] + r as i64;
    (LatticeCoord(v), LatticeCoord(w))
}

/// Length of the free-boundary tree path from `v` to `w`, sampled as the erasure of a walk
/// from `v` stopped at `w`. `None` when the step budget runs out.
fn free_tree_distance(shape: BoxShape, v: &[i64], w: u64, budget: u64, eraser: &mut DenseEraser, rng: &mut RngStream) -> Option<u64> {
    let mut walker = BoxWalker::new(shape, v).expect("start inside box");
    eraser.reset();
    eraser.push(walker.index() as u32);
    let mut steps = 0u64;
    while walker.index() != w {
        if steps == budget {
            return None;
        }
        walker.step(rng);
        eraser.push(walker.index() as u32);
        steps += 1;
    }
    Some(eraser.path().len() as u64 - 1)
}

/// Wilson's construction rooted at the wired boundary: erase a walk from `v` to the boundary,
/// then walk from `w` until it meets that branch or the boundary. Returns the tree distance
/// when `v` and `w` are joined away from the boundary vertex, `Some(None)` when they are only
/// joined through it, and `None` when the step budget runs out.
fn wired_tree_distance(shape: BoxShape, v: &[i64], w: &[i64], budget: u64, rng: &mut RngStream) -> Option<Option<u64>> {
    let mut walker = BoxWalker::new(shape, v).expect("start inside box");
    let mut branch = LoopEraser::new();
    branch.push(walker.index());
    let mut steps = 0u64;
    while !walker.on_boundary() {
        if steps == budget {
            return None;
        }
        walker.step(rng);
        branch.push(walker.index());
        steps += 1;
    }
    let boundary_end = branch.current().len() - 1;
    let mut walker = BoxWalker::new(shape, w).expect("start inside box");
    let mut second = LoopEraser::new();
    loop {
        second.push(walker.index());
        if let Some(i) = branch.position(&walker.index()) {
            if i == boundary_end {
                return Some(None);
            }
            return Some(Some((i + second.current().len() - 1) as u64));
        }
        if walker.on_boundary() {
            return Some(None);
        }
        if steps == budget {
            return None;
        }
        walker.step(rng);
        steps += 1;
    }
}

/// Probability that `v` and `w` (separation `r`, placed symmetrically about the origin) are
/// joined by a tree path of at most `m` edges in a uniform spanning tree of `B_n`. With the
/// wired boundary, paths through the boundary vertex do not count.
#[allow(clippy::too_many_arguments)]
pub fn connection_probability(
    d: usize,
    n: u32,
    r: u32,
    m: u64,
    boundary: Boundary,
    reps: u64,
    seed: u64,
    budgets: &Budgets,
) -> Result<EstimateResult> {
    if r == 0 || 4 * r > n {
        return Err(Error::invalid(format!("separation r={r} must satisfy 1 ≤ r ≤ n/4 with n={n}")));
    }
    let (v, w) = symmetric_pair(d, r);
    let outcomes: Vec<Option<f64>> = match boundary {
        Boundary::Free => {
            let shape = dense_shape(d, n, budgets)?;
            let target = shape.index(&w.0).expect("inside");
            let size = shape.vertex_count();
            run_replicates_with(
                reps,
                seed,
                || DenseEraser::new(size).expect("size checked"),
                |eraser, _, rng| free_tree_distance(shape, &v.0, target, budgets.step_budget, eraser, rng).map(|l| (l <= m) as u8 as f64),
            )
        }
        Boundary::Wired => {
            let shape = BoxShape::new(d, n)?;
            run_replicates(reps, seed, |_, rng| {
                wired_tree_distance(shape, &v.0, &w.0, budgets.step_budget, rng).map(|l| matches!(l, Some(l) if l <= m) as u8 as f64)
            })
        }
    };
    let (kept, censored) = collect_censored(&outcomes);
    Ok(EstimateResult::from_samples(&kept, censored, seed))
}

/// Vertices `v`, `x`, `w` of a separator experiment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub v: LatticeCoord,
    pub x: LatticeCoord,
    pub w: LatticeCoord,
}

impl Placement {
    /// `(-L e1, 0, L e1)`.
    pub fn collinear(d: usize, l: u32) -> Self {
        Placement {
            v: LatticeCoord::axis(d, -(l as i64)),
            x: LatticeCoord::origin(d),
            w: LatticeCoord::axis(d, l as i64),
        }
    }
}

/// Probability that `x` lies on the tree path between `v` and `w` in a uniform spanning tree of
/// `B_n`. The path is sampled as the erasure of a walk from `v` stopped at `w`; walks longer than
/// `m` steps are censored.
pub fn separator_probability(d: usize, n: u32, placement: &Placement, m: u64, reps: u64, seed: u64, budgets: &Budgets) -> Result<EstimateResult> {
    let half = (n / 2) as i64;
    for c in [&placement.v, &placement.x, &placement.w] {
        if c.dim() != d || c.norm() > half {
            return Err(Error::invalid(format!("placement point {c} must lie in B_{half}")));
        }
    }
    let shape = dense_shape(d, n, budgets)?;
    let target = shape.index(&placement.w.0).expect("inside");
    let x = shape.index(&placement.x.0).expect("inside") as u32;
    let size = shape.vertex_count();
    let cap = m.min(budgets.step_budget);
    let outcomes: Vec<Option<f64>> = run_replicates_with(
        reps,
        seed,
        || DenseEraser::new(size).expect("size checked"),
        |eraser, _, rng| {
            free_tree_distance(shape, &placement.v.0, target, cap, eraser, rng)
                .map(|_| eraser.position(x).is_some() as u8 as f64)
        },
    );
    let (kept, censored) = collect_censored(&outcomes);
    Ok(EstimateResult::from_samples(&kept, censored, seed))
}

/// Pair-subsampled estimate of `Σ_{x,y ∈ B_n} 1{tree distance(x, y) ≤ m}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityReport {
    pub vertices: u64,
    /// Estimate of the sum.
    pub sum: EstimateResult,
    /// The sum divided by `vertices²`.
    pub ratio: EstimateResult,
}

fn tree_depths(parent: &[Option<VertexId>], root: VertexId) -> Vec<u32> {
    let mut children: Vec<Vec<u32>> = vec![Vec::new(); parent.len()];
    for (v, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[p.index()].push(v as u32);
        }
    }
    let mut depth = vec![0u32; parent.len()];
    let mut queue = VecDeque::from([root.0]);
    while let Some(v) = queue.pop_front() {
        for &c in &children[v as usize] {
            depth[c as usize] = depth[v as usize] + 1;
            queue.push_back(c);
        }
    }
    depth
}

fn tree_distance(parent: &[Option<VertexId>], depth: &[u32], mut a: u32, mut b: u32) -> u64 {
    let mut dist = 0u64;
    while depth[a as usize] > depth[b as usize] {
        a = parent[a as usize].expect("non-root").0;
        dist += 1;
    }
    while depth[b as usize] > depth[a as usize] {
        b = parent[b as usize].expect("non-root").0;
        dist += 1;
    }
    while a != b {
        a = parent[a as usize].expect("non-root").0;
        b = parent[b as usize].expect("non-root").0;
        dist += 2;
    }
    dist
}

/// Samples `reps` uniform spanning trees of `B_n` by Aldous–Broder and, in each, tests `pairs`
/// uniform ordered pairs of vertices. `m = None` means no length cutoff.
pub fn component_density_check(d: usize, n: u32, m: Option<u64>, pairs: u32, reps: u64, seed: u64, budgets: &Budgets) -> Result<DensityReport> {
    let lattice = LatticeBox::with_budget(d, n, budgets.vertex_budget)?;
    let g = lattice.graph();
    let nv = g.vertex_count() as u64;
    let root = lattice.origin();
    let outcomes: Vec<Option<f64>> = run_replicates(reps, seed, |_, rng| {
        let tree = aldous_broder_tree_with_budget(g, root, rng, budgets.step_budget).ok()?;
        let mut parent = vec![None; g.vertex_count()];
        for e in tree.edges() {
            let (from, to) = tree.orientation(e).expect("oriented");
            parent[to.index()] = Some(from);
        }
        let depth = tree_depths(&parent, root);
        let mut hits = 0u32;
        for _ in 0..pairs {
            let a = rng.below(nv as u32);
            let b = rng.below(nv as u32);
            let within = match m {
                None => true,
                Some(m) => tree_distance(&parent, &depth, a, b) <= m,
            };
            hits += within as u32;
        }
        Some(hits as f64 / pairs as f64)
    });
    let (kept, censored) = collect_censored(&outcomes);
    let ratio = EstimateResult::from_samples(&kept, censored, seed);
    let scale = (nv * nv) as f64;
    let sum = EstimateResult { mean: ratio.mean * scale, stderr: ratio.stderr * scale, ..ratio.clone() };
    Ok(DensityReport { vertices: nv, sum, ratio })
}

/// Tree distances in a sampled tree, for the brute-force tests.
#[cfg(test)]
pub(crate) fn sampled_distance_table(lattice: &LatticeBox, rng: &mut RngStream) -> Result<Vec<Vec<u64>>> {
    let g = lattice.graph();
    let tree = aldous_broder_tree_with_budget(g, lattice.origin(), rng, DEFAULT_STEP_BUDGET)?;
    let mut parent = vec![None; g.vertex_count()];
    for e in tree.edges() {
        let (from, to) = tree.orientation(e).expect("oriented");
        parent[to.index()] = Some(from);
    }
    let depth = tree_depths(&parent, lattice.origin());
    let n = g.vertex_count() as u32;
    Ok((0..n).map(|a| (0..n).map(|b| tree_distance(&parent, &depth, a, b)).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walks::{tree_path, SpanningSubgraph};

    #[test]
    fn placements() {
        let (v, w) = symmetric_pair(3, 4);
        assert_eq!(v.0, vec![-2, 0, 0]);
        assert_eq!(w.0, vec![2, 0, 0]);
        assert_eq!(v.dist(&w), 4);
    }

    #[test]
    fn unbounded_cutoff_always_connects_free_box() {
        let b = Budgets::default();
        let e = connection_probability(2, 4, 1, 81, Boundary::Free, 200, 3, &b).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.censored, 0.0);
        let tight = connection_probability(2, 4, 1, 1, Boundary::Free, 2000, 3, &b).unwrap();
        assert!(tight.mean > 0.0 && tight.mean < 1.0);
        assert!(connection_probability(2, 4, 2, 5, Boundary::Free, 10, 3, &b).is_err());
    }

    #[test]
    fn wired_is_below_free_and_monotone_in_cutoff() {
        let b = Budgets::default();
        let free = connection_probability(3, 8, 2, 1000, Boundary::Free, 3000, 5, &b).unwrap();
        let wired = connection_probability(3, 8, 2, 1000, Boundary::Wired, 3000, 5, &b).unwrap();
        assert!(wired.mean < free.mean);
        let short = connection_probability(3, 8, 2, 3, Boundary::Wired, 3000, 5, &b).unwrap();
        assert!(short.mean <= wired.mean);
    }

    #[test]
    fn free_adjacent_pair_matches_edge_probability() {
        // adjacent vertices are joined by a 1-edge path iff the edge is in the tree
        let b = Budgets::default();
        let lattice = LatticeBox::new(2, 4).unwrap();
        let (v, w) = symmetric_pair(2, 1);
        let e = lattice.edge_between(&v, &w).unwrap();
        let exact = crate::exact::edge_current_fraction(lattice.graph(), e).unwrap().to_f64();
        let est = connection_probability(2, 4, 1, 1, Boundary::Free, 20_000, 8, &b).unwrap();
        assert!((est.mean - exact).abs() < 4.0 * est.stderr, "{} vs {exact}", est.mean);
    }

    #[test]
    fn separator_trivial_and_budget() {
        let b = Budgets::default();
        let p = Placement { v: LatticeCoord(vec![-2, 0]), x: LatticeCoord(vec![-2, 0]), w: LatticeCoord(vec![2, 0]) };
        assert_eq!(separator_probability(2, 8, &p, u64::MAX, 100, 1, &b).unwrap().mean, 1.0);
        let c = Placement::collinear(2, 2);
        let cut = separator_probability(2, 8, &c, 5, 200, 1, &b).unwrap();
        assert!(cut.censored > 0.5);
        assert!(separator_probability(2, 3, &c, 100, 10, 1, &b).is_err());
    }

    #[test]
    fn distances_agree_with_tree_paths() {
        let lattice = LatticeBox::new(2, 2).unwrap();
        let g = lattice.graph();
        let table = sampled_distance_table(&lattice, &mut RngStream::new(6, 0)).unwrap();
        let tree = aldous_broder_tree_with_budget(g, lattice.origin(), &mut RngStream::new(6, 0), DEFAULT_STEP_BUDGET).unwrap();
        let t = SpanningSubgraph::from_edges(g, &tree.edges()).unwrap();
        for a in g.vertices() {
            for b in g.vertices() {
                assert_eq!(table[a.index()][b.index()], tree_path(&t, a, b).unwrap().len() as u64);
            }
        }
    }

    #[test]
    fn density_degenerate_control() {
        let b = Budgets::default();
        let r = component_density_check(2, 2, None, 10, 20, 1, &b).unwrap();
        assert_eq!(r.sum.mean, 625.0);
        let finite = component_density_check(2, 2, Some(2), 50, 50, 1, &b).unwrap();
        assert!(finite.ratio.mean < 1.0);
    }
}
