//! Green's function of a box in Z^3: one exact value, then Monte Carlo decay along an axis.

use ustlab::exact::{green_function_exact, ExactProb};
use ustlab::experiments::{green_function_scaling, GreenMethod};
use ustlab::lattice::{LatticeBox, LatticeCoord};

fn main() -> ustlab::Result<()> {
    let b = LatticeBox::new(3, 4)?;
    let y = b.vertex(&LatticeCoord::axis(3, 1)).expect("inside");
    let g = ExactProb(green_function_exact(&b, b.origin(), y)?);
    println!("exact G(0, e1) in B_4 = {:.6}", g.to_f64());

    let mc = green_function_scaling(3, &[2, 4, 8], 32, 2_000, 9, GreenMethod::MonteCarlo)?;
    for (r, e) in &mc.values {
        println!("r={r:<2} G={:.4} ± {:.4}", e.mean, e.stderr);
    }
    println!("slope {:.2} ± {:.2}", mc.fit.slope, mc.fit.slope_stderr);
    Ok(())
}
