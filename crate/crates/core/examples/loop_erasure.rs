//! Loop erasure on a graph: a sampled walk, its erasure, and the exact erased-walk law.

use ustlab::exact::exact_lerw_law;
use ustlab::lattice::{complete_graph, VertexId};
use ustlab::walks::{srw_path, tree_path_matches_erasure, RngStream, StopRule};

fn main() -> ustlab::Result<()> {
    let g = complete_graph(4);
    let (a, b) = (VertexId(0), VertexId(3));
    let walk = srw_path(&g, a, &StopRule::hit(vec![b]), &mut RngStream::new(1, 0))?;
    println!("walk   {:?}", walk.vertices().iter().map(|v| v.0).collect::<Vec<_>>());
    println!("erased {:?}", walk.loop_erase().vertices().iter().map(|v| v.0).collect::<Vec<_>>());

    let law = exact_lerw_law(&g, a, b)?;
    for (path, p) in &law.support {
        println!("{:>5}  {:?}", p.to_string(), path.iter().map(|v| v.0).collect::<Vec<_>>());
    }

    let agree = (0..500).filter(|&i| tree_path_matches_erasure(&g, a, b, &mut RngStream::new(2, i)).unwrap()).count();
    println!("tree path equals reversed erasure in {agree}/500 coupled samples");
    Ok(())
}
