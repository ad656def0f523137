//! Exact free and wired probabilities of the central edge in growing boxes of Z^2.

use ustlab::experiments::{central_edge, free_wired_gap};

fn main() -> ustlab::Result<()> {
    for row in free_wired_gap(2, &[central_edge(2)], 1, &[1, 2, 3])? {
        println!("n={}  free={:.6}  wired={:.6}  gap={:.6}", row.n, row.free.to_f64(), row.wired.to_f64(), row.gap().to_f64());
    }
    Ok(())
}
