//! Build a lattice box, contract and delete edges, and take the wired quotient.

use ustlab::exact::spanning_tree_count;
use ustlab::lattice::{EdgeId, LatticeBox, LatticeCoord};

fn main() -> ustlab::Result<()> {
    let b = LatticeBox::new(2, 2)?;
    let g = b.graph();
    println!("B_2 in Z^2: {} vertices, {} edges", g.vertex_count(), g.edge_count());

    let e = b.edge_between(&LatticeCoord::origin(2), &LatticeCoord::axis(2, 1)).expect("adjacent");
    let (con, _) = g.contract(e)?;
    let (del, _) = g.delete(e)?;
    let (t, tc, td) = (spanning_tree_count(g)?, spanning_tree_count(&con)?, spanning_tree_count(&del)?);
    println!("trees: {t} = {tc} (contract {e}) + {td} (delete {e})");

    let (wired, map) = b.wired_quotient(1)?;
    println!("wired at m=1: {} vertices, {} edges, corner maps to {}", wired.vertex_count(), wired.edge_count(), map.vertex(g.vertices().next().unwrap()));
    println!("boundary edge e0 maps to {:?}", map.edge(EdgeId(0)));
    Ok(())
}
