//! Command-line front end: check and run commands, Alloy export and the
//! differential comparison against the enumeration oracle.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lasso_bmc::alloy::export_alloy;
use lasso_bmc::embed::{EmbedOptions, Idiom};
use lasso_bmc::engine::{run_command, EngineOptions, SolverChoice};
use lasso_bmc::lang::load_spec;
use lasso_bmc::oracle::{diff_scope, DiffError, EnumerateError, FidelityReport, DEFAULT_CAP};
use lasso_bmc::sat::SolverConfig;
use lasso_bmc::spec::{Command, CommandKind, Scope, Spec};

const SEED_VAR: &str = "LASSO_BMC_SEED";

#[derive(Parser)]
#[command(name = "lasso-bmc", version, about = "Bounded LTL model checking of relational specs")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Look for a counterexample to an assertion.
    Check(RunArgs),
    /// Look for an instance of a predicate.
    Run(RunArgs),
    /// Write trace.als and <spec>.als.
    ExportAlloy {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "local")]
        idiom: IdiomArg,
        #[arg(long)]
        finite_traces: bool,
    },
    /// Compare solver verdicts with exhaustive enumeration for every command.
    OracleDiff {
        file: PathBuf,
        #[arg(long)]
        max_scope: Option<u32>,
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_enum, default_value = "local")]
        idiom: IdiomArg,
        #[arg(long)]
        finite_traces: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    /// Assertion or predicate name; defaults to the first command of the kind.
    #[arg(long)]
    name: Option<String>,
    /// Largest State scope to try.
    #[arg(long)]
    max_scope: Option<u32>,
    /// `Sig=N` or `Sig=exactly N`; repeatable.
    #[arg(long, value_parser = parse_scope)]
    scope: Vec<(String, Scope)>,
    #[arg(long, value_enum, default_value = "local")]
    idiom: IdiomArg,
    #[arg(long)]
    finite_traces: bool,
    /// `internal` or `external:CMD` (the CNF path is appended to CMD).
    #[arg(long, default_value = "internal")]
    solver: SolverChoice,
    /// Also write every CNF into this directory.
    #[arg(long)]
    dimacs: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    trace_format: TraceFormat,
    /// Per-bound solver time limit in seconds.
    #[arg(long)]
    timeout: Option<u64>,
    /// Per-bound solver conflict budget.
    #[arg(long)]
    max_conflicts: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum IdiomArg {
    Local,
    Global,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceFormat {
    Text,
    Json,
}

fn embed_options(idiom: IdiomArg, finite_traces: bool) -> EmbedOptions {
    EmbedOptions {
        idiom: match idiom {
            IdiomArg::Local => Idiom::Local,
            IdiomArg::Global => Idiom::Global,
        },
        finite_traces,
    }
}

fn parse_scope(s: &str) -> Result<(String, Scope), String> {
    let (sig, n) = s.split_once('=').ok_or_else(|| format!("expected Sig=N, got `{s}`"))?;
    let n = n.trim();
    let (exact, n) = match n.strip_prefix("exactly") {
        Some(rest) => (true, rest.trim()),
        None => (false, n),
    };
    let bound = n.parse().map_err(|_| format!("bad scope `{n}`"))?;
    Ok((sig.trim().to_string(), Scope { bound, exact }))
}

/// Failure with its exit status.
struct Fail(u8, String);

fn usage(msg: impl ToString) -> Fail {
    Fail(2, msg.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("lasso-bmc: {msg}");
            ExitCode::from(code)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<u8, Fail> {
    match cmd {
        Cmd::Check(args) => check_or_run(CommandKind::Check, args),
        Cmd::Run(args) => check_or_run(CommandKind::Run, args),
        Cmd::ExportAlloy {
            file,
            out,
            idiom,
            finite_traces,
        } => {
            let spec = load(&file)?;
            let module = file
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| usage(format!("no module name in {}", file.display())))?;
            let paths = export_alloy(&spec, module, &out, embed_options(idiom, finite_traces))
                .map_err(|e| Fail(2, format!("writing {}: {e}", out.display())))?;
            for p in paths {
                emit(&format!("wrote {}\n", p.display()));
            }
            Ok(0)
        }
        Cmd::OracleDiff {
            file,
            max_scope,
            name,
            idiom,
            finite_traces,
        } => oracle_diff(&file, max_scope, name.as_deref(), embed_options(idiom, finite_traces)),
    }
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn load(file: &Path) -> Result<Spec, Fail> {
    let text = std::fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let spec = load_spec(&text).map_err(|e| usage(format!("{}:{e}", file.display())))?;
    for w in &spec.warnings {
        eprintln!("{}:{w}", file.display());
    }
    Ok(spec)
}

fn seed() -> Result<u64, Fail> {
    match std::env::var(SEED_VAR) {
        Err(_) => Ok(SolverConfig::default().seed),
        Ok(v) => {
            let v = v.trim();
            let parsed = match v.strip_prefix("0x") {
                Some(hex) => u64::from_str_radix(hex, 16),
                None => v.parse(),
            };
            parsed.map_err(|_| usage(format!("{SEED_VAR}: not an integer: `{v}`")))
        }
    }
}

fn select_command(spec: &Spec, kind: CommandKind, name: Option<&str>) -> Result<Command, Fail> {
    spec.commands
        .iter()
        .find(|c| c.kind == kind && name.is_none_or(|n| c.target == n))
        .cloned()
        .ok_or_else(|| {
            usage(match name {
                Some(n) => format!("no `{} {n}` command in the spec", kind.keyword()),
                None => format!("no `{}` command in the spec", kind.keyword()),
            })
        })
}

fn check_or_run(kind: CommandKind, args: RunArgs) -> Result<u8, Fail> {
    let spec = load(&args.file)?;
    let mut cmd = select_command(&spec, kind, args.name.as_deref())?;
    if let Some(k) = args.max_scope {
        cmd.max_state = k;
    }
    for (sig, scope) in &args.scope {
        let id = spec.sig_id(sig).ok_or_else(|| usage(format!("--scope: unknown signature `{sig}`")))?;
        cmd.scopes.insert(id, *scope);
    }
    let opts = EngineOptions {
        embed: embed_options(args.idiom, args.finite_traces),
        solver: args.solver,
        config: SolverConfig {
            seed: seed()?,
            time_limit: args.timeout.map(Duration::from_secs),
            max_conflicts: args.max_conflicts,
        },
        dimacs_dir: args.dimacs,
    };
    let verdict = run_command(&spec, &cmd, &opts).map_err(|e| match e {
        lasso_bmc::engine::EngineError::Universe(_) => usage(e),
        _ => Fail(3, e.to_string()),
    })?;
    let report = verdict.report(&spec);
    match args.trace_format {
        TraceFormat::Text => emit(&report.to_text()),
        TraceFormat::Json => emit(&format!("{}\n", report.to_json())),
    }
    Ok(verdict.exit_code() as u8)
}

fn oracle_diff(file: &Path, max_scope: Option<u32>, name: Option<&str>, embed: EmbedOptions) -> Result<u8, Fail> {
    let spec = load(file)?;
    let opts = EngineOptions {
        embed,
        config: SolverConfig {
            seed: seed()?,
            ..SolverConfig::default()
        },
        ..EngineOptions::default()
    };
    let mut agree = true;
    let mut skipped = false;
    let mut fidelity = FidelityReport::default();
    let commands: Vec<&Command> = spec
        .commands
        .iter()
        .filter(|c| name.is_none_or(|n| c.target == n))
        .collect();
    if commands.is_empty() {
        return Err(usage("no matching commands"));
    }
    for cmd in commands {
        let max = max_scope.unwrap_or(cmd.max_state).max(1) as usize;
        for k in 1..=max {
            let out = match diff_scope(&spec, cmd, k, &opts, DEFAULT_CAP, true) {
                Ok(out) => out,
                Err(DiffError::Enumerate(e @ EnumerateError::CapExceeded { .. })) => {
                    emit(&format!("{} {} State={k}: skipped ({e})\n", cmd.kind.keyword(), cmd.target));
                    skipped = true;
                    continue;
                }
                Err(e) => return Err(Fail(3, e.to_string())),
            };
            let show = |b: bool| if b { "sat" } else { "unsat" };
            emit(&format!(
                "{} {} State={k}: pipeline={} oracle={} traces={} {}\n",
                cmd.kind.keyword(),
                cmd.target,
                out.pipeline.map_or("unknown", show),
                show(out.oracle),
                out.traces,
                if out.agrees() { "agree" } else { "DISAGREE" }
            ));
            agree &= out.agrees();
            fidelity.merge(out.fidelity);
        }
    }
    emit(&format!(
        "fidelity: compared={} agreed={} violations={} until-release-on-lasso={}\n",
        fidelity.compared,
        fidelity.agreed,
        fidelity.violations.len(),
        fidelity.until_release_lasso.len()
    ));
    emit(&fidelity.lines());
    Ok(if !agree || !fidelity.violations.is_empty() {
        1
    } else if skipped {
        3
    } else {
        0
    })
}
