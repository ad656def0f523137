//! Intersection probability of a loop-erased walk and an independent walk in Z^5, with a slope fit.

use ustlab::experiments::{derive_seed, fit_power_law, intersection_probability};

fn main() -> ustlab::Result<()> {
    let mut points = Vec::new();
    for (i, r) in [2u32, 4, 8].into_iter().enumerate() {
        let e = intersection_probability(5, r, 10_000, 400, derive_seed(11, i as u64))?;
        println!("r={r:<3} P={:.4} ± {:.4}", e.mean, e.stderr);
        points.push((r as f64, e.mean, e.stderr));
    }
    match fit_power_law(&points) {
        Ok(fit) => println!("slope {:.2} ± {:.2}", fit.slope, fit.slope_stderr),
        Err(e) => println!("no fit: {e}"),
    }
    Ok(())
}
