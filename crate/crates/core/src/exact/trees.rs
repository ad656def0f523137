use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{linalg, ExactLimits, ExactProb, TreeCount};
use crate::error::{Error, Result};
use crate::lattice::{EdgeId, MultiGraph, VertexId};

/// A law on spanning trees; keys are sorted edge lists of the original graph.
pub type TreeLaw = BTreeMap<Vec<EdgeId>, ExactProb>;

fn check_size(g: &MultiGraph, limits: &ExactLimits) -> Result<()> {
    if g.vertex_count() > limits.max_vertices {
        return Err(Error::ResourceLimit {
            what: "exact solve vertices",
            requested: g.vertex_count() as u64,
            limit: limits.max_vertices as u64,
        });
    }
    Ok(())
}

fn require_connected(g: &MultiGraph) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Error::invalid("graph must be connected"))
    }
}

/// Spanning-tree count via the Matrix-Tree theorem. Zero for disconnected graphs.
pub fn spanning_tree_count(g: &MultiGraph) -> Result<TreeCount> {
    spanning_tree_count_with(g, &ExactLimits::default())
}

pub fn spanning_tree_count_with(g: &MultiGraph, limits: &ExactLimits) -> Result<TreeCount> {
    check_size(g, limits)?;
    if !g.is_connected() {
        return Ok(TreeCount::from(0));
    }
    if g.vertex_count() <= 1 {
        return Ok(TreeCount::from(1));
    }
    let det = linalg::determinant(&g.reduced_laplacian(VertexId(0)));
    let (sign, mag) = det.into_parts();
    debug_assert_ne!(sign, Sign::Minus);
    Ok(TreeCount(mag))
}

/// Union-find with path halving; small helper for acyclicity checks.
struct Dsu(Vec<u32>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n as u32).collect())
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[self.0[x as usize] as usize];
            self.0[x as usize] = p;
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi as usize] = lo;
        true
    }
}

/// Probability that a uniform spanning tree of `g` contains every edge of `a`:
/// `count(g / a) / count(g)`, and zero when `a` contains a cycle.
pub fn cylinder_probability(g: &MultiGraph, a: &[EdgeId]) -> Result<ExactProb> {
    require_connected(g)?;
    let mut dsu = Dsu::new(g.vertex_count());
    let mut set = a.to_vec();
    set.sort();
    set.dedup();
    for &e in &set {
        let (x, y) = g.endpoints(e)?;
        if !dsu.union(x.0, y.0) {
            return Ok(ExactProb::zero());
        }
    }
    let class: Vec<u32> = (0..g.vertex_count() as u32).map(|v| dsu.find(v)).collect();
    let (contracted, _) = g.identify(&class);
    let total = spanning_tree_count(g)?;
    let with_a = spanning_tree_count(&contracted)?;
    Ok(ExactProb(BigRational::new(
        BigInt::from(with_a.0),
        BigInt::from(total.0),
    )))
}

/// Fraction of the battery current that flows through the resistor `e` when a unit voltage
/// is applied across its endpoints and every edge is a unit resistor. This equals the
/// effective resistance between the endpoints, obtained here from an exact Laplacian solve.
pub fn edge_current_fraction(g: &MultiGraph, e: EdgeId) -> Result<ExactProb> {
    require_connected(g)?;
    check_size(g, &ExactLimits::default())?;
    let (a, b) = g.endpoints(e)?;
    // ground b, inject a unit current at a; the potential at a is the effective resistance
    let lap = g.reduced_laplacian(b);
    let slot = |v: VertexId| if v < b { v.index() } else { v.index() - 1 };
    let mut rhs = vec![BigRational::zero(); lap.len()];
    rhs[slot(a)] = BigRational::one();
    let x = linalg::solve(&lap, &rhs).ok_or_else(|| Error::invalid("singular Laplacian"))?;
    Ok(ExactProb(x[slot(a)].clone()))
}

/// Every spanning tree of `g` as a sorted edge list, by backtracking over edges in id order.
pub fn brute_force_tree_enumeration(g: &MultiGraph) -> Result<Vec<Vec<EdgeId>>> {
    let limits = ExactLimits::default();
    if g.edge_count() > limits.max_enumeration_edges {
        return Err(Error::ResourceLimit {
            what: "edges for exhaustive enumeration",
            requested: g.edge_count() as u64,
            limit: limits.max_enumeration_edges as u64,
        });
    }
    let mut out = Vec::new();
    if !g.is_connected() {
        return Ok(out);
    }
    let need = g.vertex_count().saturating_sub(1);
    let mut chosen = Vec::with_capacity(need);
    enumerate(g, 0, need, &mut chosen, &mut out);
    Ok(out)
}

fn enumerate(g: &MultiGraph, next: usize, need: usize, chosen: &mut Vec<EdgeId>, out: &mut Vec<Vec<EdgeId>>) {
    if chosen.len() == need {
        out.push(chosen.clone());
        return;
    }
    if g.edge_count() - next < need - chosen.len() {
        return;
    }
    let e = EdgeId(next as u32);
    let (x, y) = g.edges()[next];
    chosen.push(e);
    if is_forest(g, chosen, x, y) {
        enumerate(g, next + 1, need, chosen, out);
    }
    chosen.pop();
    enumerate(g, next + 1, need, chosen, out);
}

// chosen already contains the new edge (x, y); checks that x and y were not yet joined
fn is_forest(g: &MultiGraph, chosen: &[EdgeId], x: VertexId, y: VertexId) -> bool {
    let mut dsu = Dsu::new(g.vertex_count());
    for &e in &chosen[..chosen.len() - 1] {
        let (a, b) = g.edges()[e.index()];
        dsu.union(a.0, b.0);
    }
    dsu.find(x.0) != dsu.find(y.0)
}

/// Uniform law over the enumerated spanning trees.
pub fn uniform_tree_law(g: &MultiGraph) -> Result<TreeLaw> {
    let trees = brute_force_tree_enumeration(g)?;
    let n = trees.len() as i64;
    Ok(trees.into_iter().map(|t| (t, ExactProb::new(1, n))).collect())
}

/// The law of the recursive electrical measure: walk the enumeration, include each edge with
/// its current fraction in the current minor, then contract (included) or delete (excluded)
/// and recurse on what remains of the enumeration.
pub fn mu3_exact_law(g: &MultiGraph, enumeration: &[EdgeId]) -> Result<TreeLaw> {
    mu3_exact_law_with(g, enumeration, &ExactLimits::default())
}

pub fn mu3_exact_law_with(g: &MultiGraph, enumeration: &[EdgeId], limits: &ExactLimits) -> Result<TreeLaw> {
    require_connected(g)?;
    check_enumeration(g, enumeration)?;
    let count = spanning_tree_count_with(g, limits)?;
    if count.0 > limits.max_trees.into() {
        return Err(Error::ResourceLimit {
            what: "spanning trees in exact law",
            requested: u64::try_from(&count.0).unwrap_or(u64::MAX),
            limit: limits.max_trees,
        });
    }
    let mut law = TreeLaw::new();
    let current: Vec<Option<EdgeId>> = g.edge_ids().map(Some).collect();
    let mut chosen = Vec::new();
    mu3_branch(g, &current, enumeration, &mut chosen, BigRational::one(), &mut law)?;
    Ok(law)
}

pub(crate) fn check_enumeration(g: &MultiGraph, enumeration: &[EdgeId]) -> Result<()> {
    let mut seen = vec![false; g.edge_count()];
    for &e in enumeration {
        g.endpoints(e)?;
        if std::mem::replace(&mut seen[e.index()], true) {
            return Err(Error::invalid(format!("edge {e} listed twice in enumeration")));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::invalid("enumeration must list every edge"));
    }
    Ok(())
}

fn mu3_branch(
    g: &MultiGraph,
    current: &[Option<EdgeId>],
    order: &[EdgeId],
    chosen: &mut Vec<EdgeId>,
    weight: BigRational,
    law: &mut TreeLaw,
) -> Result<()> {
    let Some((&first, rest)) = order.split_first() else {
        debug_assert_eq!(g.vertex_count(), 1);
        let mut tree = chosen.clone();
        tree.sort();
        let slot = law.entry(tree).or_insert_with(ExactProb::zero);
        slot.0 += weight;
        return Ok(());
    };
    let Some(e) = current[first.index()] else {
        // became a loop after earlier contractions
        return mu3_branch(g, current, rest, chosen, weight, law);
    };
    let p = edge_current_fraction(g, e)?.0;
    let q = BigRational::one() - &p;
    if !q.is_zero() {
        let (minor, map) = g.delete(e)?;
        let next: Vec<_> = current.iter().map(|c| c.and_then(|c| map.edge(c))).collect();
        mu3_branch(&minor, &next, rest, chosen, &weight * &q, law)?;
    }
    let (minor, map) = g.contract(e)?;
    let next: Vec<_> = current.iter().map(|c| c.and_then(|c| map.edge(c))).collect();
    chosen.push(first);
    mu3_branch(&minor, &next, rest, chosen, weight * p, law)?;
    chosen.pop();
    Ok(())
}
