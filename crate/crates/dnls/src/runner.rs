//! Drive scenarios end to end: seed, solve, classify, replay, and write
//! artifacts.
//!
//! Every run produces a [`RunOutput`]; passing an output directory
//! additionally writes a fixed set of plain-text artifacts per coupling
//! value. Outputs are byte-for-byte deterministic: floats are printed with
//! 17 significant digits (round-trip exact) and all orderings follow the
//! input order.

use crate::classify::{classify_orbit, loop_gap_statistic, bloch_check, classify_points, ClassifyConfig, Portrait, PortraitClass};
use crate::error::RunError;
use crate::lattice::{Bc, ModelParams};
use crate::map::{cycle_trace, iterate, phase_function, reproduction_error, MapState, Orbit, OrbitStatus};
use crate::newton::{solve, SolveResult};
use crate::scenario::Scenario;
use std::path::{Path, PathBuf};

/// Round-trip-exact float formatting used in all artifacts.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(v) => fmt_float(v),
        None => "nan".into(),
    }
}

/// Compact label for a coupling value, used in directory names.
fn c_label(c: f64) -> String {
    if c.fract() == 0.0 && c.abs() < 1e9 {
        format!("{}", c as i64)
    } else {
        format!("{c}")
    }
}

/// One solve at a single coupling value plus everything derived from it.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub scenario: String,
    pub c: f64,
    pub e0: f64,
    pub result: SolveResult,
    /// Classified phase portrait of the converged state.
    pub portrait: Option<Portrait>,
    /// Worst amplitude mismatch when the state is replayed through the
    /// planar map (requested via `map_check`).
    pub map_error: Option<f64>,
    /// `log2 |trace|` of the state's cycle matrix (periodic chains only).
    pub cycle_log2: Option<f64>,
    /// Whether declared expectations were met; `None` when the scenario
    /// declares none.
    pub expectations: Option<bool>,
    pub files: Vec<PathBuf>,
}

impl RunOutput {
    /// A run succeeds when it converges and meets any declared
    /// expectations.
    pub fn success(&self) -> bool {
        self.result.converged() && self.expectations != Some(false)
    }

    /// One-line human summary for terminal output.
    pub fn summary_line(&self) -> String {
        let mut parts = vec![format!(
            "{} c={}: {} in {} iters",
            self.scenario,
            c_label(self.c),
            self.result.outcome,
            self.result.records.len()
        )];
        if let Some(st) = &self.result.state {
            parts.push(format!("res={:.3e}", st.residual_inf));
            if let Some(e) = st.e_diag {
                parts.push(format!("e_diag={e:.6}"));
            }
        }
        if let Some(p) = &self.portrait {
            parts.push(format!("clusters={} class={}", p.clusters.len(), p.class));
        }
        if let Some(err) = self.map_error {
            parts.push(format!("map_err={err:.3e}"));
        }
        if let Some(log2) = self.cycle_log2 {
            parts.push(format!("trace_log2={log2:.2}"));
        }
        match self.expectations {
            Some(true) => parts.push("expectations met".into()),
            Some(false) => parts.push("EXPECTATIONS MISSED".into()),
            None => {}
        }
        parts.join(" | ")
    }
}

fn check_expectations(s: &Scenario, portrait: Option<&Portrait>) -> Option<bool> {
    if s.expect_clusters.is_none() && s.expect_class.is_none() {
        return None;
    }
    let Some(p) = portrait else {
        return Some(false);
    };
    let mut ok = true;
    if let Some(n) = s.expect_clusters {
        ok &= p.clusters.len() == n;
    }
    if let Some(exp) = s.expect_class {
        ok &= exp.matches(p.class);
    }
    Some(ok)
}

/// Run one coupling value of a scenario. With `out = Some(dir)` the run
/// writes its artifacts into `dir/<name>_c<value>/`.
pub fn run_single(s: &Scenario, c: f64, out: Option<&Path>) -> Result<RunOutput, RunError> {
    let pattern = s.pattern()?;
    let e0 = s.e0_for(&pattern, c);
    let params = ModelParams::new(c, e0, s.n_sites, s.bc)?;
    let seed = pattern.build();
    let result = solve(&seed, &params, &s.solve)?;

    let mut portrait = None;
    let mut map_error = None;
    let mut cycle_log2 = None;
    if let Some(st) = &result.state {
        let points = phase_function(&st.state);
        let mut p = classify_points(&points, &s.classify);
        if bloch_check(&st.state, e0) {
            p.class = PortraitClass::BlochLike;
        }
        if s.map_check {
            map_error = Some(reproduction_error(&st.state, c, e0));
        }
        if s.bc == Bc::Periodic {
            cycle_log2 = cycle_trace(st.state.values(), c, e0)
                .ok()
                .map(|t| t.log2_abs());
        }
        portrait = Some(p);
    }
    let expectations = check_expectations(s, portrait.as_ref());

    let mut output = RunOutput {
        scenario: s.name.clone(),
        c,
        e0,
        result,
        portrait,
        map_error,
        cycle_log2,
        expectations,
        files: Vec::new(),
    };
    if let Some(dir) = out {
        write_run_artifacts(s, &pattern, &mut output, dir)?;
    }
    Ok(output)
}

/// Run every coupling value sequentially, in scenario order.
pub fn run_scenario(s: &Scenario, out: Option<&Path>) -> Result<Vec<RunOutput>, RunError> {
    s.c_values
        .iter()
        .map(|&c| run_single(s, c, out))
        .collect()
}

/// Run every coupling value on its own thread. Results keep scenario
/// order; artifacts land in per-coupling directories so writers never
/// collide.
pub fn run_sweep(s: &Scenario, out: Option<&Path>) -> Result<Vec<RunOutput>, RunError> {
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|source| RunError::Io {
            path: dir.display().to_string(),
            source,
        })?;
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = s
            .c_values
            .iter()
            .map(|&c| scope.spawn(move || run_single(s, c, out)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver threads do not panic"))
            .collect()
    })
}

/// Resolve where artifacts go: explicit flag, then the scenario's own
/// `out_dir`, then the `DNLS_OUT_DIR` environment variable, then
/// `./dnls-out`.
pub fn resolve_out_dir(cli: Option<PathBuf>, scenario: Option<&Path>) -> PathBuf {
    if let Some(dir) = cli {
        return dir;
    }
    if let Some(dir) = scenario {
        return dir.to_path_buf();
    }
    match std::env::var("DNLS_OUT_DIR") {
        Ok(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from("dnls-out"),
    }
}

fn write_file(
    dir: &Path,
    name: &str,
    content: &str,
    files: &mut Vec<PathBuf>,
) -> Result<(), RunError> {
    let path = dir.join(name);
    std::fs::write(&path, content).map_err(|source| RunError::Io {
        path: path.display().to_string(),
        source,
    })?;
    files.push(path);
    Ok(())
}

fn make_dir(dir: &Path) -> Result<(), RunError> {
    std::fs::create_dir_all(dir).map_err(|source| RunError::Io {
        path: dir.display().to_string(),
        source,
    })
}

fn write_run_artifacts(
    s: &Scenario,
    pattern: &crate::lattice::SeedPattern,
    run: &mut RunOutput,
    out: &Path,
) -> Result<(), RunError> {
    let dir = out.join(format!("{}_c{}", s.name, c_label(run.c)));
    make_dir(&dir)?;

    let mut trace = String::from("iter,E_m,delta_inf,residual_inf\n");
    for r in &run.result.records {
        trace.push_str(&format!(
            "{},{},{},{}\n",
            r.iter,
            fmt_opt(r.e_diag),
            fmt_float(r.delta_inf),
            fmt_float(r.residual_inf)
        ));
    }
    write_file(&dir, "trace.csv", &trace, &mut run.files)?;

    if let Some(st) = &run.result.state {
        let mut wave = String::from("site,psi\n");
        for (i, v) in st.state.values().iter().enumerate() {
            wave.push_str(&format!("{},{}\n", i, fmt_float(*v)));
        }
        write_file(&dir, "wave.csv", &wave, &mut run.files)?;
    }

    if let Some(p) = &run.portrait {
        let mut csv = String::from("psi,Z,cluster\n");
        for (pt, label) in p.points.iter().zip(&p.labels) {
            csv.push_str(&format!(
                "{},{},{}\n",
                fmt_float(pt.0),
                fmt_float(pt.1),
                label
            ));
        }
        write_file(&dir, "portrait.csv", &csv, &mut run.files)?;
    }

    let mut rep = String::new();
    rep.push_str(&format!("scenario = {}\n", s.name));
    rep.push_str(&format!("c = {}\n", fmt_float(run.c)));
    rep.push_str(&format!("e0 = {}\n", fmt_float(run.e0)));
    rep.push_str(&format!("n_sites = {}\n", s.n_sites));
    rep.push_str(&format!(
        "bc = {}\n",
        match s.bc {
            Bc::Periodic => "pbc",
            Bc::Open => "obc",
        }
    ));
    let sites: Vec<String> = pattern.sites().iter().map(usize::to_string).collect();
    rep.push_str(&format!("seed_sites = {}\n", sites.join(",")));
    rep.push_str(&format!(
        "pattern = n={} m={} l={}\n",
        pattern.n(),
        pattern.m(),
        pattern.l()
    ));
    rep.push_str(&format!("outcome = {}\n", run.result.outcome));
    rep.push_str(&format!("iterations = {}\n", run.result.records.len()));
    if let Some(r) = run.result.records.last() {
        rep.push_str(&format!("final_delta_inf = {}\n", fmt_float(r.delta_inf)));
        rep.push_str(&format!(
            "final_residual_inf = {}\n",
            fmt_float(r.residual_inf)
        ));
    }
    if let Some(st) = &run.result.state {
        rep.push_str(&format!("e_diag = {}\n", fmt_opt(st.e_diag)));
        rep.push_str(&format!("coupling = {}\n", fmt_float(st.coupling)));
        rep.push_str(&format!("hamiltonian = {}\n", fmt_float(st.hamiltonian)));
    }
    if let Some(p) = &run.portrait {
        rep.push_str(&format!("clusters = {}\n", p.clusters.len()));
        rep.push_str(&format!("class = {}\n", p.class));
        let centers: Vec<(f64, f64)> = p.clusters.iter().map(|c| c.center).collect();
        rep.push_str(&format!(
            "loop_gap = {}\n",
            fmt_float(loop_gap_statistic(&centers))
        ));
    }
    if let Some(err) = run.map_error {
        rep.push_str(&format!("map_error = {}\n", fmt_float(err)));
    }
    if let Some(log2) = run.cycle_log2 {
        rep.push_str(&format!("cycle_trace_log2 = {}\n", fmt_float(log2)));
    }
    if let Some(n) = s.expect_clusters {
        rep.push_str(&format!("expect_clusters = {n}\n"));
    }
    if let Some(exp) = s.expect_class {
        rep.push_str(&format!(
            "expect_class = {}\n",
            match exp {
                crate::scenario::ClassExpectation::AnyPeriodic => "periodic".to_string(),
                crate::scenario::ClassExpectation::Exact(c) => c.to_string(),
            }
        ));
    }
    match run.expectations {
        Some(true) => rep.push_str("expectations = met\n"),
        Some(false) => rep.push_str("expectations = missed\n"),
        None => {}
    }
    if let Some(note) = &s.note {
        rep.push_str(&format!("note = {note}\n"));
    }
    write_file(&dir, "report.txt", &rep, &mut run.files)?;
    Ok(())
}

/// Parameters for a standalone orbit run of the planar map.
#[derive(Debug, Clone)]
pub struct MapRunConfig {
    pub name: String,
    pub c: f64,
    pub e: f64,
    pub z0: f64,
    pub psi0: f64,
    pub steps: usize,
    pub bound: f64,
    pub classify: ClassifyConfig,
}

/// A completed orbit run.
#[derive(Debug, Clone)]
pub struct MapRunOutput {
    pub orbit: Orbit,
    pub portrait: Portrait,
    pub files: Vec<PathBuf>,
}

impl MapRunOutput {
    pub fn summary_line(&self, cfg: &MapRunConfig) -> String {
        let status = match self.orbit.status {
            OrbitStatus::Completed => "completed".to_string(),
            OrbitStatus::Diverged { step } => format!("diverged(step={step})"),
        };
        format!(
            "{} c={} e={}: {} | {} points | clusters={} class={}",
            cfg.name,
            c_label(cfg.c),
            cfg.e,
            status,
            self.orbit.states.len(),
            self.portrait.clusters.len(),
            self.portrait.class
        )
    }
}

/// Iterate the map from `(z0, psi0)` and classify the orbit. With
/// `out = Some(dir)` artifacts go to `dir/<name>/`.
pub fn run_map(cfg: &MapRunConfig, out: Option<&Path>) -> Result<MapRunOutput, RunError> {
    let orbit = iterate(
        MapState::new(cfg.z0, cfg.psi0),
        cfg.c,
        cfg.e,
        cfg.steps,
        cfg.bound,
    );
    let portrait = classify_orbit(&orbit, &cfg.classify);
    let mut files = Vec::new();
    if let Some(outdir) = out {
        let dir = outdir.join(&cfg.name);
        make_dir(&dir)?;

        let mut csv = String::from("step,Z,psi\n");
        for (k, st) in orbit.states.iter().enumerate() {
            csv.push_str(&format!("{},{},{}\n", k, fmt_float(st.z), fmt_float(st.psi)));
        }
        write_file(&dir, "orbit.csv", &csv, &mut files)?;

        let mut csv = String::from("psi,Z,cluster\n");
        for (pt, label) in portrait.points.iter().zip(&portrait.labels) {
            csv.push_str(&format!(
                "{},{},{}\n",
                fmt_float(pt.0),
                fmt_float(pt.1),
                label
            ));
        }
        write_file(&dir, "portrait.csv", &csv, &mut files)?;

        let mut rep = String::new();
        rep.push_str("kind = map\n");
        rep.push_str(&format!("name = {}\n", cfg.name));
        rep.push_str(&format!("c = {}\n", fmt_float(cfg.c)));
        rep.push_str(&format!("e = {}\n", fmt_float(cfg.e)));
        rep.push_str(&format!("z0 = {}\n", fmt_float(cfg.z0)));
        rep.push_str(&format!("psi0 = {}\n", fmt_float(cfg.psi0)));
        rep.push_str(&format!("steps = {}\n", cfg.steps));
        rep.push_str(&format!("bound = {}\n", fmt_float(cfg.bound)));
        rep.push_str(&format!("recorded = {}\n", orbit.states.len()));
        rep.push_str(&format!(
            "status = {}\n",
            match orbit.status {
                OrbitStatus::Completed => "completed".to_string(),
                OrbitStatus::Diverged { step } => format!("diverged(step={step})"),
            }
        ));
        rep.push_str(&format!("clusters = {}\n", portrait.clusters.len()));
        rep.push_str(&format!("class = {}\n", portrait.class));
        let centers: Vec<(f64, f64)> = portrait.clusters.iter().map(|c| c.center).collect();
        rep.push_str(&format!(
            "loop_gap = {}\n",
            fmt_float(loop_gap_statistic(&centers))
        ));
        write_file(&dir, "report.txt", &rep, &mut files)?;
    }
    Ok(MapRunOutput {
        orbit,
        portrait,
        files,
    })
}
