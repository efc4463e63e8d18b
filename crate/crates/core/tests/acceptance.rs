//! Acceptance gate: one PASS/FAIL line per criterion, with the limits pinned
//! below. Runs without the libtest harness so the lines always show.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lasso_bmc::alloy::{emit_alloy_spec, emit_trace_module, validate_alloy};
use lasso_bmc::embed::EmbedOptions;
use lasso_bmc::engine::{build_query, ground_scope, run_command, EngineOptions, Verdict, VerdictKind};
use lasso_bmc::lang::load_spec;
use lasso_bmc::nnf::nnf;
use lasso_bmc::oracle::random::{random_case, random_trace, SpecShape};
use lasso_bmc::oracle::{diff_scope, eval_ltl_lasso, EnumOptions, FidelityReport, DEFAULT_CAP};
use lasso_bmc::sat::{run_external, solve, Cnf, SolveResult};
use lasso_bmc::spec::{Command, CommandKind, Spec};

const SAFETY_LIMIT: Duration = Duration::from_secs(30);
const SAFETY_MAX_STATE: u32 = 4;
const FIX_LIMIT: Duration = Duration::from_secs(120);
const FIX_MAX_STATE: u32 = 6;
const LIVENESS_MAX_STATE: u32 = 6;
const DIFF_CASES: usize = 1000;
const DIFF_LIMIT: Duration = Duration::from_secs(600);
const NNF_PAIRS: usize = 10_000;
const SEED: u64 = 0x5eed;

const PIFP: &str = include_str!("../corpus/pifp.spec");
const PIFP_FIXED: &str = include_str!("../corpus/pifp_fixed.spec");
const PIFP_GUARDED: &str = include_str!("../corpus/pifp_guarded.spec");

/// Properties of counterexamples, stated over the corpus vocabulary.
const PROBES: &str = "
pred SelfSentOutsidePolicy {
  some m : Message | F (m.to = m.from and m in m.from.port.messages and not m.from in m.from.pifp)
}
pred FreshAtEnd {
  F (some m : Message | not m in Channel.messages and
     X (m in m.from.port.messages and m.to in m.from.pifp and not m in m.to.port.messages
        and not X no (Message - Message)))
}
";

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn with_probes(src: &str) -> Spec {
    load_spec(&format!("{src}\n{PROBES}")).expect("corpus spec with probes loads")
}

fn command(spec: &Spec, kind: CommandKind, name: &str, max_state: u32) -> Command {
    let mut cmd = spec
        .commands
        .iter()
        .find(|c| c.kind == kind && c.target == name)
        .unwrap_or_else(|| panic!("no command for {name}"))
        .clone();
    cmd.max_state = max_state;
    cmd
}

fn finite() -> EngineOptions {
    EngineOptions {
        embed: EmbedOptions {
            finite_traces: true,
            ..EmbedOptions::default()
        },
        ..EngineOptions::default()
    }
}

/// CNFs of every bound the runs of criteria 1 to 4 visit.
#[derive(Default)]
struct CnfLog(Vec<(String, Cnf)>);

impl CnfLog {
    fn record(&mut self, label: &str, spec: &Spec, cmd: &Command, opts: &EngineOptions, upto: usize) {
        let query = build_query(spec, cmd, opts.embed).expect("query builds");
        for k in 1..=upto {
            match ground_scope(spec, cmd, &query, k, opts) {
                Ok(g) => self.0.push((format!("{label} k={k}"), g.cnf)),
                // empty universes have no CNF
                Err(_) => continue,
            }
        }
    }
}

fn last_k(v: &Verdict) -> usize {
    v.log.last().map_or(0, |l| l.k)
}

fn criterion_1(cnfs: &mut CnfLog) -> Outcome {
    let spec = with_probes(PIFP);
    let cmd = command(&spec, CommandKind::Check, "Safety", SAFETY_MAX_STATE);
    let started = Instant::now();
    let v = run_command(&spec, &cmd, &EngineOptions::default()).expect("engine runs");
    let elapsed = started.elapsed();
    cnfs.record("safety", &spec, &cmd, &EngineOptions::default(), last_k(&v));
    let VerdictKind::Counterexample { trace, k } = &v.kind else {
        return Outcome::new(false, format!("expected a counterexample, got {:?}", v.kind));
    };
    let probe = spec.pred("SelfSentOutsidePolicy").unwrap().closed_body();
    let self_sent = eval_ltl_lasso(&probe, trace, 0);
    let again = run_command(&spec, &cmd, &EngineOptions::default()).expect("engine runs");
    let stable = again.report(&spec).to_text() == v.report(&spec).to_text();
    Outcome::new(
        elapsed < SAFETY_LIMIT && self_sent && stable,
        format!(
            "counterexample at State={k} in {elapsed:.2?} (limit {SAFETY_LIMIT:?}), self-sent outside pifp: {self_sent}, report stable: {stable}"
        ),
    )
}

fn criterion_2(cnfs: &mut CnfLog) -> Outcome {
    let spec = load_spec(PIFP_FIXED).unwrap();
    let cmd = command(&spec, CommandKind::Check, "Safety", FIX_MAX_STATE);
    let started = Instant::now();
    let v = run_command(&spec, &cmd, &EngineOptions::default()).expect("engine runs");
    let elapsed = started.elapsed();
    cnfs.record("safety-fixed", &spec, &cmd, &EngineOptions::default(), last_k(&v));
    Outcome::new(
        v.exit_code() == 0 && elapsed < FIX_LIMIT,
        format!(
            "exit {} up to State={FIX_MAX_STATE} in {elapsed:.2?} (limit {FIX_LIMIT:?})",
            v.exit_code()
        ),
    )
}

fn criterion_3(cnfs: &mut CnfLog) -> Outcome {
    let spec = with_probes(PIFP_GUARDED);
    let cmd = command(&spec, CommandKind::Check, "Liveness", LIVENESS_MAX_STATE);
    let finite_v = run_command(&spec, &cmd, &finite()).expect("engine runs");
    cnfs.record("liveness-finite", &spec, &cmd, &finite(), last_k(&finite_v));
    let lasso_v = run_command(&spec, &cmd, &EngineOptions::default()).expect("engine runs");
    cnfs.record("liveness-lasso", &spec, &cmd, &EngineOptions::default(), last_k(&lasso_v));

    // a message sent in the second-to-last state and still waiting in the
    // sender's port at the end of the prefix
    let spurious = match &finite_v.kind {
        VerdictKind::Counterexample { trace, .. } => {
            let probe = spec.pred("FreshAtEnd").unwrap().closed_body();
            trace.loop_to.is_none() && eval_ltl_lasso(&probe, trace, 0)
        }
        _ => false,
    };
    let lasso_holds = matches!(lasso_v.kind, VerdictKind::NoInstance { .. });
    Outcome::new(
        spurious && lasso_holds,
        format!(
            "finite traces: fresh untransferred message at the end: {spurious}; lasso: no counterexample up to State={LIVENESS_MAX_STATE}: {lasso_holds}"
        ),
    )
}

fn criterion_4(cnfs: &mut CnfLog, fidelity: &mut FidelityReport) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let opts = EngineOptions::default();
    let started = Instant::now();
    let (mut agree, mut witnesses, mut traces) = (0, 0, 0usize);
    let mut first_bad = None;
    for i in 0..DIFF_CASES {
        let case = random_case(&mut rng, SpecShape::default(), EnumOptions::default());
        let kind = if i % 2 == 0 { CommandKind::Run } else { CommandKind::Check };
        let cmd = case.command(kind);
        match diff_scope(&case.spec, &cmd, case.k, &opts, DEFAULT_CAP, true) {
            Ok(out) => {
                if out.agrees() {
                    agree += 1;
                } else if first_bad.is_none() {
                    first_bad = Some(format!("case {i}: pipeline {:?}, oracle {}", out.pipeline, out.oracle));
                }
                witnesses += usize::from(out.oracle);
                traces += out.traces;
                fidelity.merge(out.fidelity);
            }
            Err(e) => {
                first_bad.get_or_insert(format!("case {i}: {e}"));
            }
        }
        let query = build_query(&case.spec, &cmd, opts.embed).expect("query builds");
        if let Ok(g) = ground_scope(&case.spec, &cmd, &query, case.k, &opts) {
            cnfs.0.push((format!("random case {i}"), g.cnf));
        }
    }
    let elapsed = started.elapsed();
    let mut detail = format!(
        "{agree}/{DIFF_CASES} verdicts agree ({witnesses} with witnesses, {traces} traces enumerated) in {elapsed:.1?} (limit {DIFF_LIMIT:?})"
    );
    if let Some(bad) = first_bad {
        write!(detail, "; first mismatch {bad}").unwrap();
    }
    Outcome::new(agree == DIFF_CASES && elapsed < DIFF_LIMIT, detail)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let (mut pairs, mut same) = (0, 0);
    let mut first_bad = None;
    while pairs < NNF_PAIRS {
        let case = random_case(&mut rng, SpecShape::default(), EnumOptions::default());
        let f = case.goal();
        let g = nnf(&f);
        for _ in 0..20 {
            let t = random_trace(&mut rng, &case.spec, &case.scopes, case.k, true);
            pairs += 1;
            if eval_ltl_lasso(&f, &t, 0) == eval_ltl_lasso(&g, &t, 0) {
                same += 1;
            } else if first_bad.is_none() {
                first_bad = Some(format!("{} on {}", case.spec.show(&f), t.summary(&case.spec)));
            }
        }
    }

    // `not G p` against its normal form `F not p` on a prefix where p holds
    let spec = load_spec(
        "sig A { var p : set A }
         pred NotAlways { not G some p }
         pred Normal { F not some p }
         run NotAlways scope exactly 1 A, 2 State",
    )
    .unwrap();
    let cmd = &spec.commands[0];
    let u = lasso_bmc::ground::build_universe(&spec, &lasso_bmc::ground::command_scopes(&spec, cmd), 2).unwrap();
    let mut t = lasso_bmc::oracle::TraceInstance::empty(&spec, u, None);
    let a = t.atoms_of(spec.sig_id("A").unwrap()).next().unwrap();
    for i in 0..2 {
        t.value_mut(spec.field_id("p").unwrap(), i).insert(vec![a, a]);
    }
    let not_g = eval_ltl_lasso(&spec.pred("NotAlways").unwrap().body, &t, 0);
    let f_not = eval_ltl_lasso(&spec.pred("Normal").unwrap().body, &t, 0);
    let normal_is_nnf = nnf(&spec.pred("NotAlways").unwrap().body) == spec.pred("Normal").unwrap().body;
    let witness = not_g && !f_not && normal_is_nnf;

    let mut detail = format!(
        "{same}/{pairs} lasso pairs agree; prefix witness (not G p = {not_g}, F not p = {f_not}, nnf matches = {normal_is_nnf})"
    );
    if let Some(bad) = first_bad {
        write!(detail, "; first mismatch {bad}").unwrap();
    }
    Outcome::new(same == pairs && witness, detail)
}

/// Targeted fidelity over the corpus-free single-field spec, on top of
/// what the differential run collected.
fn criterion_6(fidelity: &mut FidelityReport, report_path: &Path) -> Outcome {
    let spec = load_spec(
        "sig A { var p : set A, var q : set A }
         pred Nx { X some p }
         pred Al { G some p }
         pred Ev { F some q }
         pred Un { some p U some q }
         pred Re { some p R some q }
         pred Mix { G (some p implies F some q) }
         pred Nest { (X some p) U (G some q) }",
    )
    .unwrap();
    let scopes = vec![lasso_bmc::spec::Scope::exactly(1)];
    for k in 1..=3 {
        for t in lasso_bmc::oracle::enumerate_traces(&spec, &scopes, k, EnumOptions::default()).unwrap() {
            for p in &spec.preds {
                lasso_bmc::oracle::compare_fidelity(&spec, &p.body, &t, fidelity);
            }
        }
    }
    let text = format!(
        "compared {} agreed {} violations {} until-release-on-lasso {}\n{}",
        fidelity.compared,
        fidelity.agreed,
        fidelity.violations.len(),
        fidelity.until_release_lasso.len(),
        fidelity.lines()
    );
    let written = std::fs::write(report_path, text).is_ok();
    Outcome::new(
        fidelity.violations.is_empty() && written,
        format!(
            "{} comparisons, {} X/G/F or loop-free disagreements, {} until/release lasso disagreements reported to {}",
            fidelity.compared,
            fidelity.violations.len(),
            fidelity.until_release_lasso.len(),
            report_path.display()
        ),
    )
}

fn external_solver() -> Result<PathBuf, String> {
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    // target/<profile>/deps/acceptance-<hash>
    let profile_dir = exe
        .parent()
        .and_then(Path::parent)
        .ok_or("unexpected test binary location")?;
    let path = profile_dir
        .join("examples")
        .join(format!("external_solver{}", std::env::consts::EXE_SUFFIX));
    if !path.exists() {
        let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
        let mut build = std::process::Command::new(cargo);
        build.args(["build", "-p", "lasso-bmc", "--example", "external_solver"]);
        if profile_dir.ends_with("release") {
            build.arg("--release");
        }
        let status = build.status().map_err(|e| e.to_string())?;
        if !status.success() || !path.exists() {
            return Err(format!("could not build {}", path.display()));
        }
    }
    Ok(path)
}

fn criterion_7(cnfs: &CnfLog) -> Outcome {
    let solver = match external_solver() {
        Ok(p) => p,
        Err(e) => return Outcome::new(false, e),
    };
    let dir = std::env::temp_dir();
    let (mut agree, mut sat) = (0, 0);
    let mut first_bad = None;
    for (i, (label, cnf)) in cnfs.0.iter().enumerate() {
        let internal = solve(cnf).verdict();
        let path = dir.join(format!("lasso-bmc-acceptance-{}-{i}.cnf", std::process::id()));
        let external = run_external(&solver.to_string_lossy(), cnf, &path);
        let _ = std::fs::remove_file(&path);
        let external = match external {
            Ok(SolveResult::Sat(_)) => Some(true),
            Ok(SolveResult::Unsat) => Some(false),
            Ok(SolveResult::Unknown(_)) => None,
            Err(e) => {
                first_bad.get_or_insert(format!("{label}: {e}"));
                continue;
            }
        };
        if internal.is_some() && internal == external {
            agree += 1;
            sat += usize::from(internal == Some(true));
        } else if first_bad.is_none() {
            first_bad = Some(format!("{label}: internal {internal:?}, external {external:?}"));
        }
    }
    let mut detail = format!("{agree}/{} CNFs agree ({sat} satisfiable)", cnfs.0.len());
    if let Some(bad) = first_bad {
        write!(detail, "; first mismatch {bad}").unwrap();
    }
    Outcome::new(agree == cnfs.0.len() && !cnfs.0.is_empty(), detail)
}

fn criterion_8() -> Outcome {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let spec = load_spec(PIFP).unwrap();
    let trace = emit_trace_module();
    let pifp = emit_alloy_spec(&spec, "pifp", EmbedOptions::default());
    let mut problems = Vec::new();
    for (name, text) in [("trace.als", &trace), ("pifp.als", &pifp)] {
        if let Err(e) = validate_alloy(text) {
            problems.push(format!("{name}: {e}"));
        }
        match std::fs::read_to_string(golden.join(name)) {
            Ok(g) if &g == text => {}
            Ok(_) => problems.push(format!("{name} differs from golden")),
            Err(e) => problems.push(format!("{name}: {e}")),
        }
    }
    let stable = emit_alloy_spec(&load_spec(PIFP).unwrap(), "pifp", EmbedOptions::default()) == pifp;
    if !stable {
        problems.push("export not deterministic".into());
    }
    Outcome::new(
        problems.is_empty(),
        if problems.is_empty() {
            "trace.als and pifp.als validate and match golden files".to_string()
        } else {
            problems.join("; ")
        },
    )
}

fn main() -> ExitCode {
    let mut cnfs = CnfLog::default();
    let mut fidelity = FidelityReport::default();
    let report_path = Path::new(env!("CARGO_TARGET_TMPDIR")).join("fidelity_report.txt");
    let results = [
        ("1 pifp safety counterexample", criterion_1(&mut cnfs)),
        ("2 pifp fix holds", criterion_2(&mut cnfs)),
        ("3 liveness finite vs lasso", criterion_3(&mut cnfs)),
        ("4 pipeline vs enumeration", criterion_4(&mut cnfs, &mut fidelity)),
        ("5 nnf lasso equivalence", criterion_5()),
        ("6 embedding fidelity", criterion_6(&mut fidelity, &report_path)),
        ("7 internal vs external solver", criterion_7(&cnfs)),
        ("8 alloy export", criterion_8()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {}/{} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
