//! The looped six-vertex digraph: ultrahomogeneous with a universal
//! automorphism group, yet the two-point class `{a, a'}` has no
//! group-extensive embedding.

use homogen::witness::{remark_generator, remark_structure, remark_verification};

fn main() -> homogen::Result<()> {
    let b = remark_structure();
    print!("{}", homogen::structure::format::format_structure(&b));
    println!("generator f = {}", remark_generator());
    let r = remark_verification()?;
    println!("ultrahomogeneous: {}", r.ultrahomogeneous);
    println!("|Aut| = {}, cyclic: {}", r.aut_order, r.aut_cyclic);
    println!("universal: {}", r.universal);
    println!("age group-extensible: {}", r.age_extensible);
    println!("failing classes {:?}, embeddings {:?}", r.failing_classes, r.failing_embeddings);
    println!("orders of automorphisms extending the swap: {:?}", r.swap_extension_orders);
    assert!(r.confirms());
    Ok(())
}
