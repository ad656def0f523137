//! Probability that two vertices at distance 2r are joined in a wired-boundary tree of Z^3.

use ustlab::experiments::{connection_probability, derive_seed, Boundary, Budgets};

fn main() -> ustlab::Result<()> {
    for (i, r) in [1u32, 2, 4].into_iter().enumerate() {
        let e = connection_probability(3, 4 * r, r, 1_000, Boundary::Wired, 300, derive_seed(5, i as u64), &Budgets::default())?;
        println!("r={r}  P(connected within 1000 edges) = {:.3} ± {:.3}", e.mean, e.stderr);
    }
    Ok(())
}
