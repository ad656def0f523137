//! Sample spanning trees of the 2x3 grid by the random-walk construction and tally them.

use std::collections::BTreeMap;

use ustlab::lattice::{rect_grid, VertexId};
use ustlab::walks::{aldous_broder_tree, RngStream};

fn main() -> ustlab::Result<()> {
    let g = rect_grid(&[2, 3])?;
    let mut counts = BTreeMap::new();
    let samples = 30_000;
    for i in 0..samples {
        let t = aldous_broder_tree(&g, VertexId(0), &mut RngStream::new(7, i))?;
        *counts.entry(t.edges()).or_insert(0u64) += 1;
    }
    println!("{} distinct trees in {samples} samples (uniform: {:.0} each)", counts.len(), samples as f64 / counts.len() as f64);
    for (tree, c) in counts {
        let names: Vec<String> = tree.iter().map(|e| e.to_string()).collect();
        println!("{:>6}  {}", c, names.join(" "));
    }
    Ok(())
}
