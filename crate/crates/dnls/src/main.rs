//! Command-line front end.
//!
//! Exit codes: 0 when every run succeeds, 1 when a solve fails or a
//! declared expectation is missed (and for I/O failures), 2 for bad
//! arguments, malformed scenarios, or bad `--set` overrides.

use clap::{Args, Parser, Subcommand};
use dnls::classify::{ClassifyConfig, ClusterTol};
use dnls::error::{ConfigError, RunError};
use dnls::runner::{self, MapRunConfig};
use dnls::scenario::{self, Scenario, BUILTIN_NAMES};
use std::path::PathBuf;
use std::process::ExitCode;

/// Stationary lattice states: solve seed scenarios, iterate the planar
/// map, classify phase portraits, verify the numerics.
#[derive(Parser)]
#[command(name = "dnls", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a scenario's coupling values one after another.
    Solve(RunArgs),
    /// Solve a scenario's coupling values in parallel.
    Sweep(RunArgs),
    /// Iterate the planar map from a starting point and classify the
    /// orbit.
    Map(MapArgs),
    /// Run the eight built-in figure scenarios.
    Figures(FiguresArgs),
    /// Run the ten-check verification battery.
    Verify,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file to run.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    scenario: Option<PathBuf>,

    /// Built-in scenario name (fig1 .. fig8).
    #[arg(long)]
    builtin: Option<String>,

    /// Override a scenario key; repeatable. Example: --set c=29,31
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output directory (beats the scenario's own out_dir and
    /// DNLS_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Run without writing any artifacts.
    #[arg(long)]
    no_files: bool,

    /// Suppress per-run summary lines.
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Args)]
struct MapArgs {
    /// Nonlinearity of the map.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    c: f64,

    /// Energy of the map.
    #[arg(long, allow_negative_numbers = true)]
    e: f64,

    /// Starting difference coordinate.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    z0: f64,

    /// Starting amplitude.
    #[arg(long, allow_negative_numbers = true)]
    psi0: f64,

    /// Number of map applications.
    #[arg(long, default_value_t = 1000)]
    steps: usize,

    /// Stop when a coordinate magnitude exceeds this.
    #[arg(long, default_value_t = 1e8)]
    bound: f64,

    /// Relative clustering tolerance (fraction of the largest coordinate).
    #[arg(long, conflicts_with = "cluster_tol_abs")]
    cluster_tol: Option<f64>,

    /// Absolute clustering tolerance.
    #[arg(long)]
    cluster_tol_abs: Option<f64>,

    /// Largest-to-median center gap ratio read as a broken loop.
    #[arg(long, default_value_t = 4.0)]
    loop_gap_ratio: f64,

    /// Fewest points worth classifying.
    #[arg(long, default_value_t = 8)]
    min_points: usize,

    /// Name of the run's artifact directory.
    #[arg(long, default_value = "map")]
    name: String,

    /// Output directory (beats DNLS_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Run without writing any artifacts.
    #[arg(long)]
    no_files: bool,

    /// Suppress the summary line.
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Args)]
struct FiguresArgs {
    /// Run only these figures (repeatable); default is all eight.
    #[arg(long = "only", value_name = "NAME")]
    only: Vec<String>,

    /// Output directory (beats each scenario's out_dir and DNLS_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Run without writing any artifacts.
    #[arg(long)]
    no_files: bool,

    /// Suppress per-run summary lines.
    #[arg(short, long)]
    quiet: bool,
}

/// Die quietly when stdout closes early (`dnls ... | head`), like any
/// other line-oriented Unix tool, instead of panicking on EPIPE.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                RunError::Config(_) => 2,
                _ => 1,
            })
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, RunError> {
    match cli.cmd {
        Cmd::Solve(args) => run_scenario_cmd(args, false),
        Cmd::Sweep(args) => run_scenario_cmd(args, true),
        Cmd::Map(args) => run_map_cmd(args),
        Cmd::Figures(args) => run_figures_cmd(args),
        Cmd::Verify => run_verify_cmd(),
    }
}

fn load_scenario(args: &RunArgs) -> Result<Scenario, RunError> {
    let mut s = match (&args.scenario, &args.builtin) {
        (Some(path), None) => Scenario::from_file(path)?,
        (None, Some(name)) => scenario::builtin(name).map_err(RunError::Config)?,
        _ => return Err(ConfigError::Missing("scenario or builtin").into()),
    };
    for kv in &args.set {
        let (key, value) = kv.split_once('=').ok_or_else(|| ConfigError::Invalid {
            key: "--set".into(),
            message: format!("expected KEY=VALUE, got `{kv}`"),
        })?;
        s.set(key.trim(), value.trim())
            .map_err(RunError::Config)?;
    }
    Ok(s)
}

fn run_scenario_cmd(args: RunArgs, parallel: bool) -> Result<u8, RunError> {
    let s = load_scenario(&args)?;
    let out_dir = (!args.no_files)
        .then(|| runner::resolve_out_dir(args.out.clone(), s.out_dir.as_deref()));
    let runs = if parallel {
        runner::run_sweep(&s, out_dir.as_deref())?
    } else {
        runner::run_scenario(&s, out_dir.as_deref())?
    };
    let mut all_ok = true;
    for run in &runs {
        all_ok &= run.success();
        if !args.quiet {
            println!("{}", run.summary_line());
        }
    }
    if !args.quiet {
        if let Some(dir) = &out_dir {
            println!("artifacts in {}", dir.display());
        }
    }
    Ok(u8::from(!all_ok))
}

fn classify_config(
    rel: Option<f64>,
    abs: Option<f64>,
    loop_gap_ratio: f64,
    min_points: usize,
) -> Result<ClassifyConfig, RunError> {
    let positive = |name: &str, v: f64| -> Result<f64, RunError> {
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(ConfigError::Invalid {
                key: name.to_string(),
                message: format!("must be a positive finite number, got {v}"),
            }
            .into())
        }
    };
    let mut cfg = ClassifyConfig {
        loop_gap_ratio: positive("loop_gap_ratio", loop_gap_ratio)?,
        min_points,
        ..ClassifyConfig::default()
    };
    if let Some(t) = rel {
        cfg.cluster_tol = ClusterTol::Relative(positive("cluster_tol", t)?);
    }
    if let Some(t) = abs {
        cfg.cluster_tol = ClusterTol::Absolute(positive("cluster_tol_abs", t)?);
    }
    Ok(cfg)
}

fn run_map_cmd(args: MapArgs) -> Result<u8, RunError> {
    for (name, v) in [
        ("c", args.c),
        ("e", args.e),
        ("z0", args.z0),
        ("psi0", args.psi0),
        ("bound", args.bound),
    ] {
        if !v.is_finite() {
            return Err(ConfigError::Invalid {
                key: name.to_string(),
                message: format!("must be finite, got {v}"),
            }
            .into());
        }
    }
    let cfg = MapRunConfig {
        name: args.name.clone(),
        c: args.c,
        e: args.e,
        z0: args.z0,
        psi0: args.psi0,
        steps: args.steps,
        bound: args.bound,
        classify: classify_config(
            args.cluster_tol,
            args.cluster_tol_abs,
            args.loop_gap_ratio,
            args.min_points,
        )?,
    };
    let out_dir = (!args.no_files).then(|| runner::resolve_out_dir(args.out.clone(), None));
    let out = runner::run_map(&cfg, out_dir.as_deref())?;
    if !args.quiet {
        println!("{}", out.summary_line(&cfg));
        if let Some(dir) = &out_dir {
            println!("artifacts in {}", dir.display());
        }
    }
    Ok(0)
}

fn run_figures_cmd(args: FiguresArgs) -> Result<u8, RunError> {
    let names: Vec<String> = if args.only.is_empty() {
        BUILTIN_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        args.only.clone()
    };
    let mut all_ok = true;
    for name in &names {
        let s = scenario::builtin(name).map_err(RunError::Config)?;
        let out_dir = (!args.no_files)
            .then(|| runner::resolve_out_dir(args.out.clone(), s.out_dir.as_deref()));
        let runs = runner::run_scenario(&s, out_dir.as_deref())?;
        for run in &runs {
            all_ok &= run.success();
            if !args.quiet {
                println!("{}", run.summary_line());
            }
        }
    }
    Ok(u8::from(!all_ok))
}

fn run_verify_cmd() -> Result<u8, RunError> {
    let results = dnls::verify::run_all();
    let mut failed = 0usize;
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {}: {}", r.name, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    println!("{}/{} checks passed", results.len() - failed, results.len());
    Ok(u8::from(failed > 0))
}
