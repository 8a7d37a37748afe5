//! Cross-checks the orbit conditions for invariant orientations and
//! semifinal relations against exhaustive search on small catalog actions.

use homogen::oracle::{lemma_equivalence_suite, small_catalog_actions};

fn main() {
    for (name, action) in small_catalog_actions() {
        println!("{name}: |G| = {}, {} points", action.group().order(), action.points());
    }
    let start = std::time::Instant::now();
    let report = lemma_equivalence_suite();
    println!(
        "{} actions, {} with an invariant orientation; {} checked on 4-sets, {} with an invariant semifinal",
        report.actions, report.three_set_positive, report.four_set_checked, report.four_set_positive
    );
    for d in &report.discrepancies {
        println!("discrepancy: {d}");
    }
    println!("{} in {:.2?}", if report.passed() { "agree" } else { "DISAGREE" }, start.elapsed());
}
