//! Probability that the origin lies on the tree path between -L e1 and L e1 in Z^3.

use ustlab::experiments::{derive_seed, separator_probability, Budgets, Placement};

fn main() -> ustlab::Result<()> {
    for (i, l) in [2u32, 4].into_iter().enumerate() {
        let e = separator_probability(3, 8 * l, &Placement::collinear(3, l), u64::MAX, 300, derive_seed(3, i as u64), &Budgets::default())?;
        println!("L={l}  P = {:.3} ± {:.3}", e.mean, e.stderr);
    }
    Ok(())
}
