//! Tower over the three-vertex path: every subset of a stage gets a new
//! vertex, and automorphisms push up uniquely.

use homogen::builder::{check_tower_witnesses, rado_tower};
use homogen::structure::{Flags, Structure};

fn main() -> homogen::Result<()> {
    let flags = Flags { allow_loops: false, undirected: true };
    let p3 = Structure::with_flags("P3", 3, flags, [(0, 1), (1, 2)], [])?;
    let stages = rado_tower(&p3, 2, 1 << 12)?;
    for st in &stages {
        println!("{:?}", st.summary());
    }
    println!("witnesses over M0: {}", check_tower_witnesses(&stages[1].graph, 3).is_none());
    for (g, h) in &stages[1].eta {
        println!("eta({g}) = {h}");
    }
    Ok(())
}
