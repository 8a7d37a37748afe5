//! The four-point configuration and random class members grown around it:
//! no automorphism fixes `f(a)` while swapping `f(b)` and `f(c)`.

use homogen::structure::Embedding;
use homogen::witness::{is_group_extensive, obstruction_config, random_obstruction_host, verify_obstruction};

fn main() -> homogen::Result<()> {
    let cfg = obstruction_config();
    let f = Embedding { map: vec![cfg.fa, cfg.fb, cfg.fc] };
    println!("inclusion of f(A) extensive: {}", is_group_extensive(&f, &cfg.structure)?.holds());
    let v = verify_obstruction(&cfg.structure)?;
    for line in &v.derivation {
        println!("{line}");
    }
    let mut total = 0;
    for seed in 0..100u64 {
        let size = 4 + (seed % 4) as usize;
        let m = random_obstruction_host(size, seed)?;
        let v = verify_obstruction(&m)?;
        total += v.swap_extensions;
        if !v.no_swap_extension() {
            println!("{}: {} swap extensions", m.name(), v.swap_extensions);
        }
    }
    println!("100 hosts checked, {total} swap extensions");
    Ok(())
}
