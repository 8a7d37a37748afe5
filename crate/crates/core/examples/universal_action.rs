//! Builds a finite approximation of the limit with a faithful action of
//! `Aut(A4)`, then checks the extension property over the first stage.

use homogen::actions::check_nice_four_sets;
use homogen::builder::{build_universal_action, check_realized_log, verify_extension_property_within};
use homogen::classd::is_in_class_d;
use homogen::structure::Structure;

fn main() -> homogen::Result<()> {
    let a4 = Structure::new("A4", 4, [(0, 1), (1, 2), (2, 3), (3, 0)], [[0, 1, 2, 3]])?;
    let start = std::time::Instant::now();
    let build = build_universal_action(&a4, 1, 2, usize::MAX)?;
    let report = &build.report;
    println!("|Aut(A4)| = {}", report.group_order);
    println!("stage sizes {:?}", report.stage_sizes);
    println!("{} tasks realized, complete = {}", report.realized.len(), report.complete);
    let m = build.last();
    println!("in class: {}", is_in_class_d(m.structure()));
    println!("faithful: {}, nice: {}", report.faithful, report.nice);
    println!("log replays: {}", check_realized_log(m.structure(), &report.realized)?);
    println!("4-sets with admissible enumerations: {}", check_nice_four_sets(m.action())?);
    let m0 = build.stages[0].n();
    let ext = verify_extension_property_within(m.structure(), 2, Some(m0))?;
    println!(
        "extension property over bases in M0: {} bases, {} types, {} unrealized",
        ext.bases_checked,
        ext.types_checked,
        ext.unrealized.len()
    );
    println!("elapsed {:.2?}", start.elapsed());
    Ok(())
}
