use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{cylinder_probability, ExactProb};
use crate::lattice::{EdgeId, LatticeBox, LatticeCoord};

/// Exact cylinder probabilities of one box under both boundary conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapRow {
    pub n: u32,
    pub free: ExactProb,
    pub wired: ExactProb,
}

impl GapRow {
    pub fn gap(&self) -> ExactProb {
        ExactProb(self.free.value() - self.wired.value())
    }
}

/// The edge from the origin to `e1`.
pub fn central_edge(d: usize) -> (LatticeCoord, LatticeCoord) {
    (LatticeCoord::origin(d), LatticeCoord::axis(d, 1))
}

/// For each `n`, the probability that a uniform spanning tree contains every edge of `a`, on
/// `B_n` (free) and on `B_n` with its outer face glued to one vertex (wired). Edges of `a` must
/// lie within radius `m` and `m ≤ n` for every `n`; an edge may touch the glued face but not lie
/// inside it.
pub fn free_wired_gap(d: usize, a: &[(LatticeCoord, LatticeCoord)], m: u32, ns: &[u32]) -> Result<Vec<GapRow>> {
    if a.is_empty() {
        return Err(Error::invalid("edge set A is empty"));
    }
    for (x, y) in a {
        if x.norm().max(y.norm()) > m as i64 {
            return Err(Error::invalid(format!("edge {x} | {y} lies outside radius {m}")));
        }
    }
    ns.iter()
        .map(|&n| {
            if n == 0 || m > n {
                return Err(Error::invalid(format!("box radius {n} must be positive and at least m={m}")));
            }
            let lattice = LatticeBox::new(d, n)?;
            let edges: Vec<EdgeId> = a
                .iter()
                .map(|(x, y)| {
                    lattice
                        .edge_between(x, y)
                        .ok_or_else(|| Error::invalid(format!("{x} and {y} are not lattice neighbours")))
                })
                .collect::<Result<_>>()?;
            let free = cylinder_probability(lattice.graph(), &edges)?;
            let (wired_graph, map) = lattice.wired_quotient(n - 1)?;
            let wired_edges: Vec<EdgeId> = edges
                .iter()
                .map(|e| map.edge(*e).ok_or_else(|| Error::invalid(format!("edge {e} lies in the glued boundary of B_{n}"))))
                .collect::<Result<_>>()?;
            let wired = cylinder_probability(&wired_graph, &wired_edges)?;
            Ok(GapRow { n, free, wired })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_boxes_are_trees() {
        let rows = free_wired_gap(1, &[central_edge(1)], 1, &[1, 2, 3]).unwrap();
        for r in &rows {
            assert_eq!(r.free, ExactProb::one());
        }
        // the wired circle B_n/∂ is a cycle of length 2n
        assert_eq!(rows[0].wired, ExactProb::new(1, 2));
        assert_eq!(rows[1].wired, ExactProb::new(3, 4));
    }

    #[test]
    fn sandwich_on_small_planar_boxes() {
        let rows = free_wired_gap(2, &[central_edge(2)], 1, &[1, 2, 3]).unwrap();
        for r in &rows {
            assert!(r.wired <= r.free, "{r:?}");
        }
        for w in rows.windows(2) {
            assert!(w[1].free <= w[0].free);
            assert!(w[1].wired >= w[0].wired);
        }
        assert!(free_wired_gap(2, &[central_edge(2)], 2, &[1]).is_err());
    }
}
