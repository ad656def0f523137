//! Exact tree counts, cylinder probabilities and the sequential contraction/deletion law.

use ustlab::exact::{cylinder_probability, edge_current_fraction, mu3_exact_law, spanning_tree_count, uniform_tree_law};
use ustlab::lattice::{complete_graph, rect_grid, EdgeId};

fn main() -> ustlab::Result<()> {
    let k4 = complete_graph(4);
    println!("K4 has {} spanning trees", spanning_tree_count(&k4)?);
    println!("P(e0 in T) = {}", edge_current_fraction(&k4, EdgeId(0))?);
    println!("P(e0, e5 in T) = {}", cylinder_probability(&k4, &[EdgeId(0), EdgeId(5)])?);

    let grid = rect_grid(&[2, 3])?;
    let order: Vec<EdgeId> = grid.edge_ids().rev().collect();
    let law = mu3_exact_law(&grid, &order)?;
    println!("2x3 grid: {} trees, sequential law uniform: {}", law.len(), law == uniform_tree_law(&grid)?);
    Ok(())
}
