//! Command-line frontend. Every subcommand prints a short text transcript,
//! or with `--json` a [`RunReport`]; the exit code encodes the verdict.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::actions::{d_structure_on_group, GroupStructure};
use crate::builder::{build_universal_action, check_tower_witnesses, rado_tower, verify_extension_property_within};
use crate::classd::{class_d_violation, enumerate_class_d, i3_violation, random_class_d, semifinal_violation, strong_amalgam, AmalgamProblem};
use crate::error::{Error, Result};
use crate::oracle::{group_structure_sweep, lemma_equivalence_suite};
use crate::perms::format::{format_action, format_group, parse_group};
use crate::structure::format::{format_structure, parse_structure};
use crate::structure::{automorphism_group, find_embeddings_limited, is_ultrahomogeneous, Structure};
use crate::witness::{obstruction_config, random_obstruction_host, remark_verification, verify_obstruction};

/// Default cap on points for `build`.
pub const DEFAULT_BUILD_BUDGET: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "homogen", version, about = "Finite-scale constructions and checks for the class of I3-free oriented graphs with semifinal structure")]
pub struct Cli {
    /// Print a machine-readable report instead of the text transcript.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Class membership of a structure.
    Check { file: PathBuf },
    /// Automorphism group of a structure.
    Aut {
        file: PathBuf,
        /// Also check that every partial isomorphism extends.
        #[arg(long)]
        ultrahomogeneous: bool,
    },
    /// Embeddings of one structure into another.
    Embeddings {
        source: PathBuf,
        target: PathBuf,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Strong amalgam of B and C over the substructure of B on `--shared`.
    Amalgamate {
        b: PathBuf,
        c: PathBuf,
        /// Vertices of B forming the common part, ascending.
        #[arg(long, value_delimiter = ',')]
        shared: Vec<usize>,
        /// Images in C of the shared vertices, in the same order.
        #[arg(long, value_delimiter = ',')]
        into: Vec<usize>,
    },
    /// Labeled class members on `n` vertices.
    Enumerate {
        n: usize,
        #[arg(long)]
        count_only: bool,
        #[arg(long, default_value_t = 1000)]
        limit: u64,
        /// Print one pseudo-random member instead.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Class member on a group's elements, or the subgroup preventing it.
    BuildOnGroup { file: PathBuf },
    /// Exhaustive cross-checks of the orbit conditions and group structures.
    LemmaTest,
    /// Stages carrying a faithful action of the seed's automorphism group.
    Build {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        #[arg(long, default_value_t = 2)]
        size_bound: usize,
        #[arg(long, default_value_t = DEFAULT_BUILD_BUDGET)]
        budget: usize,
        /// Directory receiving each stage, its action, and the report.
        #[arg(long)]
        emit_stages: Option<PathBuf>,
    },
    /// Graph tower adding a vertex for every subset of the previous stage.
    Rado {
        #[arg(long)]
        seed: PathBuf,
        #[arg(short = 'k', default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 1 << 16)]
        budget: u128,
    },
    /// One-point extension property over small bases.
    ExtensionCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        size_bound: usize,
        /// Only bases inside the first `within` vertices.
        #[arg(long)]
        within: Option<usize>,
    },
    /// The two non-extensibility examples.
    Counterexample {
        #[command(subcommand)]
        which: Counterexample,
    },
}

#[derive(Debug, Subcommand)]
pub enum Counterexample {
    /// The looped 6-vertex digraph.
    Remark,
    /// The 4-point configuration, optionally inside random hosts.
    Obstruction {
        /// Number of random hosts on 4 to 7 vertices.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub elapsed_ms: f64,
}

/// Everything a run reports. Only `timings` varies between identical runs.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub verdicts: BTreeMap<String, Value>,
    pub witnesses: BTreeMap<String, Value>,
    pub timings: Timings,
}

#[derive(Debug, Default)]
struct Outcome {
    verdicts: BTreeMap<String, Value>,
    witnesses: BTreeMap<String, Value>,
    text: String,
    exit: i32,
}

impl Outcome {
    fn verdict(&mut self, key: &str, v: impl Serialize) {
        self.verdicts.insert(key.into(), to_value(v));
    }

    fn witness(&mut self, key: &str, v: impl Serialize) {
        self.witnesses.insert(key.into(), to_value(v));
    }

    fn negative_unless(&mut self, ok: bool) {
        self.exit = if ok { 0 } else { 1 };
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

struct Inputs(Vec<InputDigest>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
        self.0.push(InputDigest {
            path: path.display().to_string(),
            sha256: format!("{:x}", Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|_| Error::input(format!("{}: not UTF-8", path.display())))
    }

    fn structure(&mut self, path: &Path) -> Result<Structure> {
        parse_structure(&self.read(path)?)
    }
}

fn dispatch(cmd: &Command, inputs: &mut Inputs) -> Result<Outcome> {
    let mut out = Outcome::default();
    match cmd {
        Command::Check { file } => {
            let m = inputs.structure(file)?;
            let violation = class_d_violation(&m);
            out.verdict("in_class_d", violation.is_none());
            out.verdict("i3_free", i3_violation(&m).ok().map(|v| v.is_none()));
            out.verdict("semifinal", semifinal_violation(&m).is_none());
            out.witness("violation", &violation);
            out.negative_unless(violation.is_none());
        }
        Command::Aut { file, ultrahomogeneous } => {
            let m = inputs.structure(file)?;
            let g = automorphism_group(&m);
            out.verdict("order", g.order());
            out.verdict("cyclic", g.is_cyclic());
            out.verdict("abelian", g.is_abelian());
            out.witness("generators", g.generators().iter().map(|p| p.to_string()).collect::<Vec<_>>());
            if *ultrahomogeneous {
                let u = is_ultrahomogeneous(&m);
                out.verdict("ultrahomogeneous", u.holds);
                out.witness("ultrahomogeneity", &u);
                out.negative_unless(u.holds);
            }
        }
        Command::Embeddings { source, target, limit } => {
            let a = inputs.structure(source)?;
            let m = inputs.structure(target)?;
            let embs = find_embeddings_limited(&a, &m, *limit);
            out.verdict("found", embs.len());
            out.witness("embeddings", embs.iter().map(|e| &e.map).collect::<Vec<_>>());
            out.negative_unless(!embs.is_empty());
        }
        Command::Amalgamate { b, c, shared, into } => {
            let b = inputs.structure(b)?;
            let c = inputs.structure(c)?;
            let p = AmalgamProblem::over_substructure(b, shared, c, into.clone())?;
            let am = strong_amalgam(&p)?;
            out.verdict("in_class_d", class_d_violation(&am.d).is_none());
            out.witness("b_into_d", &am.b_into_d.map);
            out.witness("c_into_d", &am.c_into_d.map);
            out.text = format_structure(&am.d);
        }
        Command::Enumerate { n, count_only, limit, seed } => {
            if let Some(seed) = seed {
                let m = random_class_d(*n, *seed);
                out.verdict("in_class_d", class_d_violation(&m).is_none());
                out.text = format_structure(&m);
                return Ok(out);
            }
            let en = enumerate_class_d(*n)?;
            out.verdict("count", en.count().to_string());
            out.verdict("orientations", en.orientation_count());
            if !count_only {
                let shown = en.count().min(*limit as u128);
                out.verdict("printed", shown.to_string());
                for i in 0..shown {
                    let m = en.get(i).expect("in range").renamed(format!("D{n}_{i}"));
                    out.text.push_str(&format_structure(&m));
                }
            }
        }
        Command::BuildOnGroup { file } => {
            let g = parse_group(&inputs.read(file)?)?;
            out.verdict("group_order", g.group.order());
            match d_structure_on_group(g.group.clone())? {
                GroupStructure::Built { structure, action } => {
                    let structure = structure.renamed(format!("D_{}", g.name));
                    out.verdict("built", true);
                    out.verdict("in_class_d", class_d_violation(&structure).is_none());
                    out.verdict("faithful", action.is_faithful());
                    out.text = format_structure(&structure);
                    out.text.push_str(&format_group(&g.name, &g.group));
                    out.text.push_str(&format_action(&format!("regular_{}", g.name), &g.name, &action));
                }
                GroupStructure::Refused(w) => {
                    out.verdict("built", false);
                    let elems: Vec<String> = w.elements.iter().map(|&i| g.group.element(i).to_string()).collect();
                    out.witness("kind", w.kind);
                    out.witness("subgroup", &elems);
                    out.text = format!("# refused: {:?} subgroup {}\n", w.kind, elems.join(" "));
                    out.exit = 1;
                }
            }
        }
        Command::LemmaTest => {
            let lemmas = lemma_equivalence_suite();
            let sweep = group_structure_sweep()?;
            out.verdict("orbit_conditions_agree", lemmas.passed());
            out.verdict("group_structures_agree", sweep.passed());
            out.verdict("actions_checked", lemmas.actions);
            out.verdict("groups_checked", sweep.entries.len());
            out.witness("lemma_suite", &lemmas);
            out.witness("group_sweep", &sweep);
            if !(lemmas.passed() && sweep.passed()) {
                out.exit = 4;
            }
        }
        Command::Build { seed, rounds, size_bound, budget, emit_stages } => {
            let a = inputs.structure(seed)?;
            let build = build_universal_action(&a, *rounds, *size_bound, *budget)?;
            let r = &build.report;
            out.verdict("stage_sizes", &r.stage_sizes);
            out.verdict("complete", r.complete);
            out.verdict("faithful", r.faithful);
            out.verdict("in_class_d", r.in_class_d);
            out.verdict("nice", r.nice);
            out.witness("report", r);
            if let Some(dir) = emit_stages {
                std::fs::create_dir_all(dir).map_err(|e| Error::input(format!("{}: {e}", dir.display())))?;
                for (i, st) in build.stages.iter().enumerate() {
                    let group = st.action().group();
                    let mut action_text = format_group("G", group);
                    action_text.push_str(&format_action(&format!("stage{i}"), "G", st.action().base()));
                    write(&dir.join(format!("stage_{i}.txt")), &format_structure(st.structure()))?;
                    write(&dir.join(format!("stage_{i}.action")), &action_text)?;
                }
                let json = serde_json::to_string_pretty(r).expect("report serializes");
                write(&dir.join("report.json"), &(json + "\n"))?;
            }
            out.negative_unless(r.complete && r.faithful && r.in_class_d && r.nice);
        }
        Command::Rado { seed, k, budget } => {
            let a = inputs.structure(seed)?;
            let stages = rado_tower(&a, *k, *budget)?;
            out.verdict("stage_sizes", stages.iter().map(|s| s.graph.n()).collect::<Vec<_>>());
            out.verdict("eta_injective_homomorphism", true);
            let mut witness_checks = Vec::new();
            for j in 1..stages.len() {
                let prev = stages[j - 1].graph.n();
                if prev <= 8 {
                    witness_checks.push(json!({
                        "stage": j,
                        "holds": check_tower_witnesses(&stages[j].graph, prev).is_none(),
                    }));
                }
            }
            let all = witness_checks.iter().all(|w| w["holds"] == json!(true));
            out.verdict("witness_property", all);
            out.witness("witness_checks", &witness_checks);
            out.witness("stages", stages.iter().map(|s| s.summary()).collect::<Vec<_>>());
            out.negative_unless(all);
        }
        Command::ExtensionCheck { file, size_bound, within } => {
            let m = inputs.structure(file)?;
            let r = verify_extension_property_within(&m, *size_bound, *within)?;
            out.verdict("satisfied", r.satisfied());
            out.verdict("bases_checked", r.bases_checked);
            out.verdict("types_checked", r.types_checked);
            out.verdict("unrealized", r.unrealized.len());
            out.witness("unrealized", r.unrealized.iter().take(50).collect::<Vec<_>>());
            out.negative_unless(r.satisfied());
        }
        Command::Counterexample { which: Counterexample::Remark } => {
            let r = remark_verification()?;
            out.verdict("ultrahomogeneous", r.ultrahomogeneous);
            out.verdict("aut_cyclic_order_4", r.aut_order == 4 && r.aut_cyclic && r.generator_is_automorphism);
            out.verdict("universal", r.universal);
            out.verdict("age_group_extensible", r.age_extensible);
            out.witness("transcript", &r);
            out.negative_unless(r.confirms());
        }
        Command::Counterexample { which: Counterexample::Obstruction { random, seed } } => {
            let cfg = verify_obstruction(&obstruction_config().structure)?;
            let mut hosts = Vec::new();
            let mut extensions = cfg.swap_extensions;
            for i in 0..random.unwrap_or(0) {
                let s = seed.wrapping_add(i as u64);
                let m = random_obstruction_host(4 + i % 4, s)?;
                let v = verify_obstruction(&m)?;
                extensions += v.swap_extensions;
                hosts.push(json!({ "name": m.name(), "copies": v.copies_checked, "swap_extensions": v.swap_extensions }));
            }
            out.verdict("no_swap_extension", extensions == 0);
            out.verdict("hosts_checked", hosts.len());
            out.witness("config", &cfg);
            out.witness("hosts", &hosts);
            out.negative_unless(extensions == 0);
        }
    }
    Ok(out)
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

/// Runs one invocation and returns the exit code. Output goes to `stdout`.
pub fn run(args: Vec<String>, stdout: &mut dyn std::io::Write) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let mut inputs = Inputs(Vec::new());
    let result = dispatch(&cli.command, &mut inputs);
    let (out, code) = match result {
        Ok(out) => {
            let code = out.exit;
            (out, code)
        }
        Err(e) => {
            eprintln!("{e}");
            let mut out = Outcome::default();
            out.verdict("error", e.to_string());
            (out, e.exit_code())
        }
    };
    let report = RunReport {
        command: args.iter().skip(1).cloned().collect(),
        inputs: inputs.0,
        verdicts: out.verdicts,
        witnesses: out.witnesses,
        timings: Timings {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    };
    let printed = if cli.json {
        let mut r = report;
        if !out.text.is_empty() {
            r.witnesses.insert("output".into(), Value::String(out.text));
        }
        writeln!(stdout, "{}", serde_json::to_string_pretty(&r).expect("report serializes"))
    } else {
        let mut s = out.text;
        for (k, v) in &report.verdicts {
            s.push_str(&format!("# {k}: {v}\n"));
        }
        write!(stdout, "{s}")
    };
    if printed.is_err() {
        return 2;
    }
    code
}

pub fn main() -> ExitCode {
    let code = run(std::env::args().collect(), &mut std::io::stdout().lock());
    ExitCode::from(code as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(name: &str) -> String {
        format!("{}/examples/data/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let argv = std::iter::once("homogen").chain(args.iter().copied()).map(String::from).collect();
        let code = run(argv, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["check", &data("a4.txt")]).0, 0);
        assert_eq!(run_capture(&["check", &data("looped.txt")]).0, 1);
        assert_eq!(run_capture(&["check", "/nonexistent"]).0, 2);
        assert_eq!(run_capture(&["check", &data("c6.txt")]).0, 2);
        assert_eq!(run_capture(&["no-such-command"]).0, 2);
        assert_eq!(run_capture(&["--help"]).0, 0);
        assert_eq!(run_capture(&["rado", "--seed", &data("path3.txt"), "-k", "2", "--budget", "100"]).0, 3);
        assert_eq!(run_capture(&["build-on-group", &data("klein.txt")]).0, 1);
    }

    #[test]
    fn text_output_reparses() {
        let (code, out) = run_capture(&["amalgamate", &data("a4.txt"), &data("edge.txt"), "--shared", "0,1", "--into", "0,1"]);
        assert_eq!(code, 0);
        let d = parse_structure(&out).unwrap();
        assert_eq!(d.n(), 4);
        assert!(class_d_violation(&d).is_none());
    }

    #[test]
    fn json_reports_are_deterministic() {
        let args = ["--json", "embeddings", &data("edge.txt"), &data("a4.txt")];
        let strip = |s: String| {
            let mut v: Value = serde_json::from_str(&s).unwrap();
            v.as_object_mut().unwrap().remove("timings");
            v
        };
        let (c1, a) = run_capture(&args);
        let (c2, b) = run_capture(&args);
        assert_eq!((c1, c2), (0, 0));
        let a = strip(a);
        assert_eq!(a, strip(b));
        assert_eq!(a["verdicts"]["found"], json!(4));
        assert_eq!(a["inputs"].as_array().unwrap().len(), 2);
    }
}
