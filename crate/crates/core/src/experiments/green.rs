use serde::{Deserialize, Serialize};

use super::estimate::{fit_power_law, run_replicates, EstimateResult, SlopeFit};
use crate::error::{Error, Result};
use crate::exact::green_function_exact;
use crate::lattice::{BoxShape, LatticeBox, LatticeCoord};
use crate::walks::{BoxWalker, RngStream};

/// Boxes up to this many vertices are solved exactly under [`GreenMethod::Auto`].
pub const EXACT_GREEN_VERTICES: u64 = 400;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreenMethod {
    #[default]
    Auto,
    Exact,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenScaling {
    /// `(r, G(0, r e1))` for each requested separation.
    pub values: Vec<(u32, EstimateResult)>,
    pub fit: SlopeFit,
    /// Whether the estimates decrease strictly with `r`.
    pub decreasing: bool,
    pub exact: bool,
}

/// Expected visits to every `±r e_i`, averaged over the `2d` images, for a walk from the origin
/// killed on the outer face of `B_n`.
fn visit_counts(shape: BoxShape, rs: &[u32], budget: u64, rng: &mut RngStream) -> Option<Vec<f64>> {
    let d = shape.d;
    let mut walker = BoxWalker::new(shape, &vec![0; d]).expect("origin inside");
    let mut counts = vec![0u64; rs.len()];
    let mut steps = 0u64;
    loop {
        if walker.on_boundary() {
            break;
        }
        let pos = walker.position();
        let mut nonzero = pos.iter().filter(|c| **c != 0);
        if let (Some(c), None) = (nonzero.next(), nonzero.next()) {
            let a = c.unsigned_abs() as u32;
            for (k, r) in rs.iter().enumerate() {
                counts[k] += (*r == a) as u64;
            }
        }
        if steps == budget {
            return None;
        }
        walker.step(rng);
        steps += 1;
    }
    Some(counts.into_iter().map(|c| c as f64 / (2 * d) as f64).collect())
}

/// Green's function of `B_n` from the origin to `r e1` for each `r`, with a log-log fit.
pub fn green_function_scaling(d: usize, rs: &[u32], n: u32, walks: u64, seed: u64, method: GreenMethod) -> Result<GreenScaling> {
    if d < 3 {
        return Err(Error::invalid("Green's function scaling needs d ≥ 3"));
    }
    if rs.iter().any(|&r| r == 0 || 4 * r > n) {
        return Err(Error::invalid(format!("each r must satisfy 1 ≤ r ≤ n/4 with n={n}")));
    }
    let shape = BoxShape::new(d, n)?;
    let exact = match method {
        GreenMethod::Exact => true,
        GreenMethod::MonteCarlo => false,
        GreenMethod::Auto => shape.vertex_count() <= EXACT_GREEN_VERTICES,
    };
    let values: Vec<(u32, EstimateResult)> = if exact {
        let lattice = LatticeBox::new(d, n)?;
        rs.iter()
            .map(|&r| {
                let y = lattice.vertex(&LatticeCoord::axis(d, r as i64)).expect("inside");
                let g = green_function_exact(&lattice, lattice.origin(), y)?;
                Ok((r, EstimateResult::exact(crate::exact::ExactProb(g).to_f64(), seed)))
            })
            .collect::<Result<_>>()?
    } else {
        let budget = crate::walks::DEFAULT_STEP_BUDGET;
        let per_walk = run_replicates(walks, seed, |_, rng| visit_counts(shape, rs, budget, rng));
        let censored = per_walk.iter().filter(|x| x.is_none()).count() as u64;
        let kept: Vec<&Vec<f64>> = per_walk.iter().flatten().collect();
        rs.iter()
            .enumerate()
            .map(|(k, &r)| {
                let xs: Vec<f64> = kept.iter().map(|v| v[k]).collect();
                (r, EstimateResult::from_samples(&xs, censored, seed))
            })
            .collect()
    };
    let decreasing = {
        let mut sorted = values.clone();
        sorted.sort_by_key(|(r, _)| *r);
        sorted.windows(2).all(|w| w[1].1.mean < w[0].1.mean)
    };
    let pts: Vec<(f64, f64, f64)> = values.iter().map(|(r, e)| (*r as f64, e.mean, e.stderr)).collect();
    let fit = fit_power_law(&pts)?;
    Ok(GreenScaling { values, fit, decreasing, exact })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monte_carlo_agrees_with_exact_solve() {
        let lattice = LatticeBox::new(3, 4).unwrap();
        let y = lattice.vertex(&LatticeCoord::axis(3, 1)).unwrap();
        let exact = crate::exact::ExactProb(green_function_exact(&lattice, lattice.origin(), y).unwrap()).to_f64();
        let shape = lattice.shape();
        let samples: Vec<f64> = (0..20_000)
            .map(|s| visit_counts(shape, &[1], u64::MAX, &mut RngStream::new(2, s)).unwrap()[0])
            .collect();
        let e = EstimateResult::from_samples(&samples, 0, 2);
        assert!((e.mean - exact).abs() < 4.0 * e.stderr, "{} vs {exact}", e.mean);
    }

    #[test]
    fn decreasing_in_r() {
        let g = green_function_scaling(3, &[1, 2, 3], 12, 4000, 1, GreenMethod::MonteCarlo).unwrap();
        assert!(g.decreasing);
        assert!(g.fit.slope < 0.0);
        assert!(green_function_scaling(2, &[1, 2, 3], 12, 10, 1, GreenMethod::Auto).is_err());
        assert!(green_function_scaling(3, &[1, 2, 4], 12, 10, 1, GreenMethod::Auto).is_err());
    }
}
