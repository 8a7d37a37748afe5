//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Run with `cargo test --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use homogen::builder::{build_universal_action, check_tower_witnesses, rado_tower, verify_extension_property_within};
use homogen::classd::{enumerate_class_d, is_in_class_d, permutations4, random_class_d};
use homogen::cli;
use homogen::oracle::{count_i3_free_by_extension, group_structure_sweep, lemma_equivalence_suite, semifinal_classes};
use homogen::perms::{FourSubgroupKind, Permutation};
use homogen::structure::format::{format_structure, parse_structure};
use homogen::structure::{automorphisms, Flags, Structure};
use homogen::witness::{obstruction_config, remark_structure, random_obstruction_host, remark_verification, verify_obstruction};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(t: Instant, limit: Duration) -> Outcome {
    let e = t.elapsed();
    ensure!(e <= limit, "took {e:.2?}, limit {limit:?}");
    Ok(format!("{e:.2?}"))
}

fn a4() -> Structure {
    Structure::new("A4", 4, [(0, 1), (1, 2), (2, 3), (3, 0)], [[0, 1, 2, 3]]).unwrap()
}

fn remark_suite() -> Outcome {
    let t = Instant::now();
    let r = remark_verification().map_err(|e| e.to_string())?;
    ensure!(r.ultrahomogeneous, "not ultrahomogeneous");
    ensure!(r.aut_order == 4 && r.aut_cyclic, "Aut has order {} (cyclic: {})", r.aut_order, r.aut_cyclic);
    ensure!(r.generator_is_automorphism, "displayed generator is not an automorphism");
    ensure!(r.universal, "universality check negative");
    ensure!(!r.age_extensible, "age reported group-extensible");
    ensure!(r.failing_classes == vec![vec![0, 1]], "failing classes {:?}", r.failing_classes);
    ensure!(r.failing_embeddings == vec![vec![vec![0, 1], vec![1, 0]]], "failing embeddings {:?}", r.failing_embeddings);
    ensure!(!r.swap_extension_orders.is_empty() && r.swap_extension_orders.iter().all(|&o| o == 4), "swap extension orders {:?}", r.swap_extension_orders);
    within(t, Duration::from_secs(1))
}

fn counting_oracles() -> Outcome {
    let t = Instant::now();
    let counts: Vec<u128> = (0..=3).map(|n| enumerate_class_d(n).unwrap().count()).collect();
    ensure!(counts == [1, 1, 3, 26], "counts {counts:?}");
    let classes = semifinal_classes([0, 1, 2, 3]).len();
    ensure!(classes == 12, "{classes} semifinal relations on a 4-set");
    let graphs = count_i3_free_by_extension(4);
    let d4 = enumerate_class_d(4).unwrap();
    ensure!(d4.orientation_count() as u128 == graphs, "orientation enumerators disagree: {} vs {graphs}", d4.orientation_count());
    ensure!(d4.count() == graphs * 12, "n = 4 count {} vs {}", d4.count(), graphs * 12);
    let listed = d4.iter().filter(is_in_class_d).count() as u128;
    ensure!(listed == d4.count(), "only {listed} listed members are in the class");
    within(t, Duration::from_secs(10)).map(|e| format!("{} members on 4 labels, {e}", d4.count()))
}

fn lemma_equivalences() -> Outcome {
    let t = Instant::now();
    let r = lemma_equivalence_suite();
    ensure!(r.passed(), "discrepancies: {:?}", r.discrepancies);
    ensure!(r.four_set_checked > 0, "no action reached the four-set check");
    within(t, Duration::from_secs(120)).map(|e| format!("{} actions, {e}", r.actions))
}

fn group_structures() -> Outcome {
    let t = Instant::now();
    let r = group_structure_sweep().map_err(|e| e.to_string())?;
    ensure!(r.passed(), "discrepancies: {:?}", r.discrepancies);
    for e in &r.entries {
        ensure!(e.oracle_agrees, "{}: refusal disagrees with subgroup search", e.name);
        ensure!(!e.built || (e.in_class_d && e.faithful && e.by_automorphisms), "{}: built structure fails checks", e.name);
    }
    let find = |n: &str| r.entries.iter().find(|e| e.name == n).ok_or(format!("{n} missing from catalog"));
    ensure!(find("C6")?.built, "C6 refused");
    for n in ["C2xC2", "C4", "Q8", "D4"] {
        let e = find(n)?;
        ensure!(!e.built && e.refusal.is_some(), "{n} not refused with a witness");
    }
    ensure!(find("C2xC2")?.refusal == Some(FourSubgroupKind::Klein), "C2xC2 witness is not a Klein subgroup");
    within(t, Duration::from_secs(30)).map(|e| format!("{} groups, {e}", r.entries.len()))
}

fn universality_construction() -> Outcome {
    let t = Instant::now();
    let a = a4();
    let brute: Vec<Permutation> = permutations4()
        .iter()
        .map(|p| Permutation::new(p.to_vec()).unwrap())
        .filter(|p| a.is_automorphism(p))
        .collect();
    ensure!(brute.len() == 2 && brute[1].images() == [2, 3, 0, 1], "brute-force Aut(A4) = {brute:?}");
    ensure!(automorphisms(&a).len() == 2, "search disagrees with brute force on Aut(A4)");

    let build = build_universal_action(&a, 1, 2, 200).map_err(|e| e.to_string())?;
    let r = &build.report;
    let m = build.last();
    ensure!(r.complete, "{} tasks left unrealized", r.unrealized.len());
    ensure!(is_in_class_d(m.structure()), "M not in the class");
    let na = m.action();
    ensure!(na.base().is_faithful(), "action not faithful");
    for g in 0..na.group().order() {
        let p = Permutation::new(na.base().row(g).to_vec()).unwrap();
        ensure!(m.structure().is_automorphism(&p), "element {g} does not act by automorphisms");
    }
    for v in 0..na.points() {
        let hat = na.hat(v);
        ensure!(hat.len() >= 4, "|hat({v})| = {}", hat.len());
        ensure!(na.base().point_stabilizer(v) == na.rho().pointwise_stabilizer_indices(hat), "stabilizer of {v} is not the pointwise stabilizer of its support");
    }
    let m0 = build.stages[0].n();
    let ext = verify_extension_property_within(m.structure(), 2, Some(m0)).map_err(|e| e.to_string())?;
    ensure!(ext.satisfied(), "{} one-point types over M0 unrealized", ext.unrealized.len());
    within(t, Duration::from_secs(120)).map(|e| format!("|M| = {}, {} types over M0, {e}", m.n(), ext.types_checked))
}

fn rado_tower_suite() -> Outcome {
    let t = Instant::now();
    let p3 = Structure::with_flags("P3", 3, Flags { allow_loops: false, undirected: true }, [(0, 1), (1, 2)], []).unwrap();
    let stages = rado_tower(&p3, 1, 1 << 10).map_err(|e| e.to_string())?;
    ensure!(stages[1].graph.n() == 11, "|M1| = {}", stages[1].graph.n());
    if let Some((u, v)) = check_tower_witnesses(&stages[1].graph, 3) {
        return Err(format!("no witness for U = {u:?}, V = {v:?}"));
    }
    let eta = &stages[1].eta;
    ensure!(eta.len() == 2, "eta defined on {} automorphisms", eta.len());
    for (g, h) in eta {
        ensure!(h.images()[..3] == *g.images(), "eta({g}) does not extend {g}");
    }
    ensure!(eta[0].1 != eta[1].1, "eta not injective");
    within(t, Duration::from_secs(1))
}

fn obstruction_suite() -> Outcome {
    let cfg = verify_obstruction(&obstruction_config().structure).map_err(|e| e.to_string())?;
    ensure!(cfg.copies_checked >= 1 && cfg.no_swap_extension(), "configuration: {cfg:?}");
    let mut copies = 0;
    for seed in 0..100u64 {
        let size = 4 + (seed % 4) as usize;
        let m = random_obstruction_host(size, seed).map_err(|e| e.to_string())?;
        ensure!(m.n() <= 7 && is_in_class_d(&m), "host {seed} invalid");
        let v = verify_obstruction(&m).map_err(|e| e.to_string())?;
        ensure!(v.copies_checked >= 1, "host {seed} has no copy of the configuration");
        ensure!(v.no_swap_extension(), "host {seed}: {} swap extensions", v.swap_extensions);
        copies += v.copies_checked;
    }
    let code = cli::run(argv(&["counterexample", "obstruction", "--random", "100"]), &mut Vec::new());
    ensure!(code == 0, "CLI obstruction run exited {code}");
    Ok(format!("100 hosts, {copies} copies"))
}

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("homogen").chain(args.iter().copied()).map(String::from).collect()
}

fn json_without_timings(args: &[&str]) -> Result<serde_json::Value, String> {
    let mut buf = Vec::new();
    let code = cli::run(argv(args), &mut buf);
    ensure!(code == 0, "{args:?} exited {code}");
    let mut v: serde_json::Value = serde_json::from_slice(&buf).map_err(|e| e.to_string())?;
    v.as_object_mut().ok_or("report is not an object")?.remove("timings");
    Ok(v)
}

fn round_trip_and_determinism() -> Outcome {
    let mut checked = 0;
    let mut samples: Vec<Structure> = enumerate_class_d(4).unwrap().iter().step_by(37).collect();
    samples.extend((0..50).map(|s| random_class_d(3 + (s % 5) as usize, s)));
    samples.push(remark_structure());
    for m in &samples {
        let text = format_structure(m);
        let back = parse_structure(&text).map_err(|e| e.to_string())?;
        ensure!(back == *m && format_structure(&back) == text, "round trip changed {}", m.name());
        checked += 1;
    }
    let dir = std::env::temp_dir().join(format!("homogen-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let seed = dir.join("a4.txt");
    std::fs::write(&seed, format_structure(&a4())).map_err(|e| e.to_string())?;
    let seed = seed.to_str().unwrap();
    for args in [
        vec!["--json", "counterexample", "obstruction", "--random", "20", "--seed", "9"],
        vec!["--json", "enumerate", "6", "--seed", "42"],
        vec!["--json", "build", "--seed", seed, "--rounds", "1", "--size-bound", "2"],
        vec!["--json", "counterexample", "remark"],
    ] {
        ensure!(json_without_timings(&args)? == json_without_timings(&args)?, "{args:?} not deterministic");
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{checked} structures, 4 commands"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("remark suite", remark_suite),
        ("counting oracles", counting_oracles),
        ("lemma equivalences", lemma_equivalences),
        ("group structures", group_structures),
        ("universality construction", universality_construction),
        ("rado tower", rado_tower_suite),
        ("obstruction suite", obstruction_suite),
        ("round trip and determinism", round_trip_and_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
