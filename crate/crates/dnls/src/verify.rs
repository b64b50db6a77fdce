//! Cross-method verification battery.
//!
//! Ten checks, each confronting one part of the crate with an independent
//! route to the same numbers: closed forms against the Newton solver, the
//! tridiagonal solver against a separately written dense elimination, the
//! solved states against the planar map, finite differences against the
//! analytic gradient, and the figure scenarios against their published
//! cluster counts. Each check reports pass/fail plus a one-line detail;
//! [`run_all`] runs the lot.
//!
//! One check is expected to fail on purpose: the full-orbit map replay
//! (`map-replay`) demands every converged periodic state reproduce itself
//! through the map to 1e-6, but replay noise grows with the state's cycle
//! multiplier, and strongly unstable states amplify f64 rounding far past
//! any fixed threshold. The check reports the measured correlation instead
//! of hiding it; the per-site recursion defect — the conditioning-free
//! version of the same statement — is shown alongside and is tiny.

use crate::classify::PortraitClass;
use crate::lattice::{
    gradient, hamiltonian, stagger, tail_decay, Bc, LatticeWave, ModelParams, SeedPattern,
};
use crate::map::{fixed_points, reproduction_error, step_jacobian, Stability};
use crate::newton::{solve, SolveConfig};
use crate::perturbation::{
    build_system, closed_form_correction, solve_system, surd_series, two_site_exact,
    CorrectionSystem,
};
use crate::runner::run_scenario;
use crate::scenario::builtin;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Outcome of one verification check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Run all ten checks in order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Every seed pattern on an `n_sites` ring whose spots can keep three
/// empty sites between them: one representative per `(n, m, l)` triple.
/// The first spot carries all `l` sign flips at its start; the remaining
/// `m - 1` spots are single positive sites.
pub fn pattern_battery(n_sites: usize) -> Vec<SeedPattern> {
    let mut out = Vec::new();
    for m in 1..=n_sites / 4 {
        for n in m..=n_sites - 3 * m {
            let spot = n - m + 1;
            for l in 0..=(n - m) {
                let mut layout = vec![0i8; n_sites];
                let mut sign = 1i8;
                for (j, slot) in layout.iter_mut().enumerate().take(spot) {
                    if j > 0 && j <= l {
                        sign = -sign;
                    }
                    *slot = sign;
                }
                for k in 1..m {
                    layout[spot - 1 + 4 * k] = 1;
                }
                let pat = SeedPattern::from_layout(layout, Bc::Periodic)
                    .expect("battery layouts are valid");
                assert_eq!(
                    (pat.n(), pat.m(), pat.l()),
                    (n, m, l),
                    "battery construction must hit its own counts"
                );
                out.push(pat);
            }
        }
    }
    out
}

const BATTERY_SIZES: [usize; 3] = [6, 8, 12];
const BATTERY_TOTAL: usize = 83;

fn full_battery() -> Vec<(usize, SeedPattern)> {
    let mut all = Vec::new();
    for n_sites in BATTERY_SIZES {
        for pat in pattern_battery(n_sites) {
            all.push((n_sites, pat));
        }
    }
    assert_eq!(all.len(), BATTERY_TOTAL, "battery enumeration drifted");
    all
}

/// Exact two-site branches: each returned branch must be an exact
/// stationary state (residual at the 1e-12 level), the symmetry-breaking
/// branch must exist precisely above coupling 4, and its asymmetry
/// parameter must match an independently grouped evaluation.
pub fn criterion_1() -> CheckResult {
    let mut worst_res = 0.0f64;
    let mut worst_alpha = 0.0f64;
    let mut ok = true;
    for &c in &[4.5, 5.0, 10.0, 100.0] {
        let sol = two_site_exact(c);
        let mut branches = vec![sol.symmetric, sol.antisymmetric];
        if let Some(b) = sol.symmetry_breaking {
            branches.push(b);
        } else {
            ok = false;
        }
        for b in &branches {
            let wave = LatticeWave::new(b.vector.to_vec(), Bc::Periodic).unwrap();
            let params = ModelParams::new(c, b.energy, 2, Bc::Periodic).unwrap();
            let res = max_abs(&crate::lattice::residual(&wave, &params).unwrap());
            worst_res = worst_res.max(res);
        }
        let alpha = sol.alpha.unwrap_or(f64::NAN);
        let regrouped = ((c - 4.0) * (c + 4.0)).sqrt() / c;
        worst_alpha = worst_alpha.max((alpha - regrouped).abs());
    }
    for &c in &[4.0, 3.0] {
        let sol = two_site_exact(c);
        if sol.symmetry_breaking.is_some() || sol.alpha.is_some() {
            ok = false;
        }
    }
    ok = ok && worst_res < 1e-12 && worst_alpha <= 1e-12;
    CheckResult {
        name: "two-site-exact",
        passed: ok,
        detail: format!(
            "branches at c in {{4.5,5,10,100}}: worst residual {worst_res:.2e} (tol 1e-12), \
             asymmetry vs regrouped form {worst_alpha:.2e} (tol 1e-12); \
             breaking branch absent at c <= 4"
        ),
    }
}

/// Strong-coupling series for the asymmetric two-site branch: the 4-term
/// partial sums for both components must sit within ten times the first
/// dropped term of the exact branch at coupling 100.
pub fn criterion_2() -> CheckResult {
    let c = 100.0;
    let sol = two_site_exact(c);
    let branch = sol.symmetry_breaking.expect("breaking branch exists at 100");
    let (large, small) = surd_series(c, 4).unwrap();
    let large_err = (large - branch.vector[0]).abs();
    let small_err = (small - branch.vector[1]).abs();
    let large_tol = 10.0 * 858.0 / c.powi(8);
    let small_tol = 10.0 * 2860.0 / c.powi(9);
    let passed = large_err <= large_tol && small_err <= small_tol;
    CheckResult {
        name: "surd-series",
        passed,
        detail: format!(
            "4-term sums at c=100: large comp err {large_err:.2e} (tol {large_tol:.2e}), \
             small comp err {small_err:.2e} (tol {small_tol:.2e})"
        ),
    }
}

fn pointwise_energy_dev(wave: &LatticeWave, c: f64, e0: f64) -> f64 {
    let v = wave.values();
    let cutoff = 0.1 * wave.max_abs();
    let mut worst = 0.0f64;
    for (i, &p) in v.iter().enumerate() {
        if p.abs() > cutoff {
            let local =
                (2.0 * p - wave.neighbor_left(i) - wave.neighbor_right(i) - c * p * p * p) / p;
            worst = worst.max((local - e0).abs());
        }
    }
    worst
}

/// Seed battery: every `(n, m, l)` pattern on rings of 6, 8 and 12 sites
/// must converge at coupling 100 with its energy label intact (read off
/// the state, or pointwise on the large sites for sign-balanced states)
/// and an energy functional within `5/c` of the strong-coupling value
/// `c / 2n`.
pub fn criterion_3() -> CheckResult {
    let c = 100.0;
    let cfg = SolveConfig::default();
    let mut worst_e = 0.0f64;
    let mut worst_h = 0.0f64;
    let mut converged = 0usize;
    let battery = full_battery();
    let total = battery.len();
    for (n_sites, pat) in battery {
        let e0 = pat.limit_energy(c);
        let params = ModelParams::new(c, e0, n_sites, Bc::Periodic).unwrap();
        let result = solve(&pat.build(), &params, &cfg).unwrap();
        let Some(st) = result.state else { continue };
        converged += 1;
        let e_dev = match st.e_diag {
            Some(ed) => (ed - e0).abs(),
            None => pointwise_energy_dev(&st.state, c, e0),
        };
        worst_e = worst_e.max(e_dev);
        let target = c / (2.0 * pat.n() as f64);
        worst_h = worst_h.max((st.hamiltonian - target).abs() / target);
    }
    let passed = converged == total && worst_e < 1e-8 && worst_h < 5.0 / c;
    CheckResult {
        name: "seed-battery",
        passed,
        detail: format!(
            "{converged}/{total} patterns converged on rings of 6/8/12 at c=100; \
             worst energy-label dev {worst_e:.2e} (tol 1e-8), \
             worst energy-functional rel dev {worst_h:.2e} (tol {:.0e})",
            5.0 / c
        ),
    }
}

/// Full-orbit map replay of every converged periodic state, threshold
/// 1e-6 on the worst reproduced amplitude. Expected to fail: the replay
/// error scales with the state's cycle multiplier, so strongly unstable
/// states (high coupling, long chains) amplify rounding noise past any
/// fixed threshold even though they satisfy the site recursion pointwise.
/// The detail records both facts.
pub fn criterion_4() -> CheckResult {
    const REPLAY_TOL: f64 = 1e-6;
    let mut worst = 0.0f64;
    let mut worst_site_defect = 0.0f64;

    // Exact two-site branches.
    let mut two_site_worst = 0.0f64;
    for &c in &[4.5, 5.0, 10.0, 100.0] {
        let sol = two_site_exact(c);
        let mut branches = vec![sol.symmetric, sol.antisymmetric];
        branches.extend(sol.symmetry_breaking);
        for b in branches {
            let wave = LatticeWave::new(b.vector.to_vec(), Bc::Periodic).unwrap();
            two_site_worst = two_site_worst.max(reproduction_error(&wave, c, b.energy));
            let params = ModelParams::new(c, b.energy, 2, Bc::Periodic).unwrap();
            worst_site_defect =
                worst_site_defect.max(max_abs(&crate::lattice::residual(&wave, &params).unwrap()));
        }
    }
    worst = worst.max(two_site_worst);

    // Seed battery at c = 100.
    let c = 100.0;
    let cfg = SolveConfig::default();
    let mut battery_worst = 0.0f64;
    for (n_sites, pat) in full_battery() {
        let e0 = pat.limit_energy(c);
        let params = ModelParams::new(c, e0, n_sites, Bc::Periodic).unwrap();
        if let Some(st) = solve(&pat.build(), &params, &cfg).unwrap().state {
            battery_worst = battery_worst.max(reproduction_error(&st.state, c, e0));
            worst_site_defect = worst_site_defect.max(st.residual_inf);
        }
    }
    worst = worst.max(battery_worst);

    // The eight figure scenarios.
    let mut fig_lines = Vec::new();
    for name in crate::scenario::BUILTIN_NAMES {
        let s = builtin(name).unwrap();
        let runs = run_scenario(&s, None).unwrap();
        for run in runs {
            if let (Some(err), Some(log2)) = (run.map_error, run.cycle_log2) {
                worst = worst.max(err);
                fig_lines.push(format!("{name} err={err:.1e} trace_log2={log2:.0}"));
            }
            if let Some(st) = &run.result.state {
                worst_site_defect = worst_site_defect.max(st.residual_inf);
            }
        }
    }

    let passed = worst < REPLAY_TOL;
    CheckResult {
        name: "map-replay",
        passed,
        detail: format!(
            "threshold {REPLAY_TOL:.0e} on full replays; worst overall {worst:.2e}; \
             two-site worst {two_site_worst:.2e}, battery worst {battery_worst:.2e}; \
             figures: {}; per-site recursion defect of the same states {worst_site_defect:.2e} — \
             replay error tracks the cycle multiplier, so unstable states amplify \
             f64 rounding past the fixed threshold",
            fig_lines.join(", ")
        ),
    }
}

/// Area preservation and pitchfork bookkeeping of the planar map: the
/// one-step Jacobian determinant equals 1 to 1e-12 over random draws, and
/// fixed-point stability flips exactly where the trace crosses magnitude
/// 2 (including exact marginal hits and the merged pair at zero energy).
pub fn criterion_5() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst_det = 0.0f64;
    for _ in 0..10_000 {
        let psi = rng.gen_range(-2.0..2.0);
        let c = rng.gen_range(-50.0..50.0);
        let e = rng.gen_range(-10.0..10.0);
        worst_det = worst_det.max((step_jacobian(psi, c, e).det() - 1.0).abs());
    }

    let pair_stability = |c: f64, e: f64| -> Option<Stability> {
        fixed_points(c, e).get(1).map(|fp| fp.stability)
    };
    let origin_stability = |c: f64, e: f64| -> Stability { fixed_points(c, e)[0].stability };
    let checks = [
        pair_stability(1.0, -2.0 - 1e-9) == Some(Stability::Unstable),
        pair_stability(1.0, -2.0 + 1e-9) == Some(Stability::Stable),
        pair_stability(1.0, -1e-9) == Some(Stability::Stable),
        pair_stability(1.0, -2.0) == Some(Stability::Marginal),
        // At zero energy the pair merges into the origin and is skipped.
        fixed_points(1.0, 0.0).len() == 1,
        origin_stability(1.0, 1e-9) == Stability::Stable,
        origin_stability(1.0, -1e-9) == Stability::Unstable,
        origin_stability(1.0, 0.0) == Stability::Marginal,
        origin_stability(1.0, 4.0) == Stability::Marginal,
        origin_stability(1.0, 4.0 + 1e-9) == Stability::Unstable,
    ];
    let flips_ok = checks.iter().all(|&b| b);
    let passed = worst_det <= 1e-12 && flips_ok;
    CheckResult {
        name: "area-preservation",
        passed,
        detail: format!(
            "10000 random one-step Jacobians: worst |det-1| = {worst_det:.2e} (tol 1e-12); \
             {}/{} stability-flip probes correct",
            checks.iter().filter(|&&b| b).count(),
            checks.len()
        ),
    }
}

/// Independent dense elimination with scaled partial pivoting, built
/// directly from the diagonal and boundary rule. This deliberately does
/// not share code with the production solver.
fn oracle_solve(diag: &[f64], rhs: &[f64], bc: Bc) -> Vec<f64> {
    let n = diag.len();
    let hop = if n == 2 && bc == Bc::Periodic {
        -2.0
    } else {
        -1.0
    };
    let mut a = vec![vec![0.0f64; n + 1]; n];
    for i in 0..n {
        a[i][i] = diag[i];
        a[i][n] = rhs[i];
    }
    for i in 0..n.saturating_sub(1) {
        a[i][i + 1] += hop;
        a[i + 1][i] += hop;
    }
    if bc == Bc::Periodic && n >= 3 {
        a[0][n - 1] += -1.0;
        a[n - 1][0] += -1.0;
    }
    let mut scale: Vec<f64> = a
        .iter()
        .map(|row| row[..n].iter().fold(0.0f64, |m, v| m.max(v.abs())))
        .collect();
    for k in 0..n {
        let mut best = k;
        let mut best_ratio = -1.0;
        for i in k..n {
            let ratio = if scale[i] > 0.0 {
                a[i][k].abs() / scale[i]
            } else {
                0.0
            };
            if ratio > best_ratio {
                best_ratio = ratio;
                best = i;
            }
        }
        a.swap(k, best);
        scale.swap(k, best);
        let pivot = a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / pivot;
            if f != 0.0 {
                for j in k..=n {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = a[k][n];
        for j in k + 1..n {
            s -= a[k][j] * x[j];
        }
        x[k] = s / a[k][k];
    }
    x
}

/// Linearized-system solver against two independent routes: 200 random
/// diagonally dominant systems against a separately written scaled-pivot
/// dense elimination (1e-10), and the first Newton correction of isolated
/// spot patterns against the tabulated closed forms (50/c at couplings
/// 1e3 and 1e4).
pub fn criterion_6() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(1106);
    let mut worst_solver = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let bc = if rng.gen_bool(0.5) {
            Bc::Periodic
        } else {
            Bc::Open
        };
        let diag: Vec<f64> = (0..n)
            .map(|_| {
                let mag = rng.gen_range(2.5..50.0);
                if rng.gen_bool(0.5) {
                    -mag
                } else {
                    mag
                }
            })
            .collect();
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sys = CorrectionSystem::new(diag.clone(), rhs.clone(), bc).unwrap();
        let x = solve_system(&sys).unwrap();
        let y = oracle_solve(&diag, &rhs, bc);
        let dev = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst_solver = worst_solver.max(dev / (1.0 + max_abs(&y)));
    }

    let n_sites = 12;
    let patterns = [
        SeedPattern::from_sites(n_sites, &[0], None, Bc::Periodic).unwrap(),
        SeedPattern::from_sites(n_sites, &[0, 4, 8], None, Bc::Periodic).unwrap(),
        SeedPattern::from_sites(n_sites, &[0, 4, 8], Some(&[1, -1, 1]), Bc::Periodic).unwrap(),
        SeedPattern::from_sites(n_sites, &[0, 1], None, Bc::Periodic).unwrap(),
        SeedPattern::from_sites(n_sites, &[0, 1, 2], None, Bc::Periodic).unwrap(),
        SeedPattern::from_sites(n_sites, &[0, 1], Some(&[1, -1]), Bc::Periodic).unwrap(),
    ];
    let mut form_devs = Vec::new();
    let mut forms_ok = true;
    for &c in &[1e3, 1e4] {
        let mut worst_rel = 0.0f64;
        for pat in &patterns {
            let seed = pat.build();
            let e0 = pat.limit_energy(c);
            let sys = build_system(&seed, e0, c).unwrap();
            let x = solve_system(&sys).unwrap();
            let v = seed.values();
            let t: Vec<f64> = (0..v.len())
                .map(|i| {
                    closed_form_correction(
                        seed.neighbor_left(i),
                        v[i],
                        seed.neighbor_right(i),
                        pat.n(),
                        pat.m(),
                        pat.l(),
                        c,
                    )
                    .unwrap()
                })
                .collect();
            let tmax = max_abs(&t);
            let dev = x
                .iter()
                .zip(&t)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst_rel = worst_rel.max(dev / tmax);
        }
        forms_ok &= worst_rel <= 50.0 / c;
        form_devs.push(format!("{worst_rel:.1e} at c={c:.0e} (tol {:.1e})", 50.0 / c));
    }

    let passed = worst_solver <= 1e-10 && forms_ok;
    CheckResult {
        name: "linear-solver",
        passed,
        detail: format!(
            "200 random systems vs scaled-pivot dense elimination: worst rel dev \
             {worst_solver:.2e} (tol 1e-10); closed-form first corrections: {}",
            form_devs.join(", ")
        ),
    }
}

/// The eight figure scenarios reproduce their published portraits: exact
/// cluster counts and revisit periods for the locked cases, loop/scatter
/// classes for the unlocked ones, and every declared expectation met.
pub fn criterion_7() -> CheckResult {
    let mut lines = Vec::new();
    let mut ok = true;
    for name in crate::scenario::BUILTIN_NAMES {
        let s = builtin(name).unwrap();
        let runs = run_scenario(&s, None).unwrap();
        let run = &runs[0];
        let converged = run.result.converged();
        let (clusters, class) = match &run.portrait {
            Some(p) => (p.clusters.len(), p.class),
            None => (0, PortraitClass::Unclassifiable),
        };
        let this_ok = converged
            && run.expectations != Some(false)
            && match name {
                "fig1" => clusters == 8 && class == PortraitClass::Periodic(8),
                "fig2" => clusters == 16 && class == PortraitClass::Periodic(16),
                "fig4" => clusters == 25 && class == PortraitClass::Periodic(25),
                "fig5" | "fig6" => matches!(
                    class,
                    PortraitClass::Quasiperiodic | PortraitClass::Chaotic
                ),
                "fig8" => {
                    matches!(class, PortraitClass::Periodic(_) | PortraitClass::Quasiperiodic)
                }
                _ => true,
            };
        ok &= this_ok;
        lines.push(format!(
            "{name}={clusters}/{class}{}",
            if this_ok { "" } else { " [MISS]" }
        ));
    }
    CheckResult {
        name: "figure-portraits",
        passed: ok,
        detail: lines.join(", "),
    }
}

/// Order checks: the analytic gradient of the energy functional matches
/// second-order central differences (order at least 1.9 when halving h
/// from 1e-3), and the terminal Newton contraction on the first figure
/// scenario shows quadratic convergence (estimated order at least 1.8).
pub fn criterion_8() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let n = 16;
    let mut min_order = f64::INFINITY;
    for draw in 0..10 {
        let bc = if draw % 2 == 0 { Bc::Periodic } else { Bc::Open };
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let wave = LatticeWave::new(values.clone(), bc).unwrap();
        let params = ModelParams::new(3.0, -1.0, n, bc).unwrap();
        let grad = gradient(&wave, &params).unwrap();
        let fd_err = |h: f64| -> f64 {
            let mut worst = 0.0f64;
            for i in 0..n {
                let mut plus = values.clone();
                plus[i] += h;
                let mut minus = values.clone();
                minus[i] -= h;
                let hp = hamiltonian(&LatticeWave::new(plus, bc).unwrap(), &params).unwrap();
                let hm = hamiltonian(&LatticeWave::new(minus, bc).unwrap(), &params).unwrap();
                worst = worst.max(((hp - hm) / (2.0 * h) - grad[i]).abs());
            }
            worst
        };
        let order = (fd_err(1e-3) / fd_err(5e-4)).log2();
        min_order = min_order.min(order);
    }
    let fd_ok = min_order >= 1.9;

    let mut s = builtin("fig1").unwrap();
    s.set("tol", "1e-10").unwrap();
    let pat = s.pattern().unwrap();
    let c = s.c_values[0];
    let e0 = s.e0_for(&pat, c);
    let params = ModelParams::new(c, e0, s.n_sites, s.bc).unwrap();
    let result = solve(&pat.build(), &params, &s.solve).unwrap();
    let deltas: Vec<f64> = result.records.iter().map(|r| r.delta_inf).collect();
    let k = deltas.len();
    let newton_order = if result.converged() && k >= 3 && deltas[k - 3..].iter().all(|&d| d > 0.0)
    {
        (deltas[k - 1] / deltas[k - 2]).ln() / (deltas[k - 2] / deltas[k - 3]).ln()
    } else {
        0.0
    };
    let newton_ok = newton_order >= 1.8;

    CheckResult {
        name: "convergence-orders",
        passed: fd_ok && newton_ok,
        detail: format!(
            "gradient vs central differences: min observed order {min_order:.2} \
             (threshold 1.9) over 10 draws; terminal Newton contraction order \
             {newton_order:.2} (threshold 1.8)"
        ),
    }
}

/// Sign-staggering duality: solving a staggered seed at the mirrored
/// parameters must land on the staggered solution, within 1e-10, across
/// the first figure scenario and a battery subsample.
pub fn criterion_9() -> CheckResult {
    let cfg = SolveConfig::default();
    let mut cases: Vec<(usize, SeedPattern, f64)> = Vec::new();
    for (n_sites, pat) in full_battery().into_iter().step_by(4) {
        cases.push((n_sites, pat, 100.0));
    }
    let fig1 = builtin("fig1").unwrap();
    cases.push((fig1.n_sites, fig1.pattern().unwrap(), fig1.c_values[0]));

    let mut worst = 0.0f64;
    let mut solved = 0usize;
    let total = cases.len();
    for (n_sites, pat, c) in cases {
        let e0 = pat.limit_energy(c);
        let seed = pat.build();
        let params = ModelParams::new(c, e0, n_sites, Bc::Periodic).unwrap();
        let direct = solve(&seed, &params, &cfg).unwrap();

        let (sseed, e1) = stagger(&seed, e0);
        let params2 = ModelParams::new(-c, e1, n_sites, Bc::Periodic).unwrap();
        let mirrored = solve(&sseed, &params2, &cfg).unwrap();

        let (Some(a), Some(b)) = (direct.state, mirrored.state) else {
            continue;
        };
        solved += 1;
        let (expected, _) = stagger(&a.state, e0);
        let dev = expected
            .values()
            .iter()
            .zip(b.state.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        worst = worst.max(dev);
    }
    let passed = solved == total && worst < 1e-10;
    CheckResult {
        name: "stagger-duality",
        passed,
        detail: format!(
            "{solved}/{total} mirrored solves converged; worst amplitude dev \
             {worst:.2e} (tol 1e-10)"
        ),
    }
}

/// Deep-tail decay: the strongly coupled figure-8 state must show at
/// least two consecutive inter-spot amplitude ratios within 1% of the
/// geometric rate fixed by its energy.
pub fn criterion_10() -> CheckResult {
    let s = builtin("fig8").unwrap();
    let runs = run_scenario(&s, None).unwrap();
    let run = &runs[0];
    let Some(st) = &run.result.state else {
        return CheckResult {
            name: "tail-decay",
            passed: false,
            detail: "figure-8 solve did not converge".into(),
        };
    };
    let r = tail_decay(run.e0).unwrap().discrete;
    let v = st.state.values();
    let mut best_len = 0usize;
    let mut best_start = 0usize;
    let mut best_dev = f64::INFINITY;
    let mut cur_len = 0usize;
    let mut cur_start = 0usize;
    let mut cur_dev = 0.0f64;
    for i in 0..v.len() - 1 {
        let ok = v[i].abs() > 1e-300 && v[i + 1].abs() > 1e-300 && {
            let ratio = v[i + 1] / v[i];
            (ratio / r - 1.0).abs() < 0.01
        };
        if ok {
            if cur_len == 0 {
                cur_start = i;
                cur_dev = 0.0;
            }
            cur_len += 1;
            cur_dev = cur_dev.max((v[i + 1] / v[i] / r - 1.0).abs());
            if cur_len > best_len {
                best_len = cur_len;
                best_start = cur_start;
                best_dev = cur_dev;
            }
        } else {
            cur_len = 0;
        }
    }
    let passed = best_len >= 2;
    CheckResult {
        name: "tail-decay",
        passed,
        detail: format!(
            "geometric rate {r:.8} at energy {}: longest in-tolerance ratio run {best_len} \
             (needs >= 2) starting at site {best_start}, worst rel dev {best_dev:.2e} (tol 1e-2)",
            run.e0
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_covers_all_triples_once() {
        assert_eq!(pattern_battery(6).len(), 6);
        assert_eq!(pattern_battery(8).len(), 16);
        assert_eq!(pattern_battery(12).len(), 61);
        let all = full_battery();
        let mut seen = std::collections::HashSet::new();
        for (n_sites, pat) in &all {
            assert!(seen.insert((*n_sites, pat.n(), pat.m(), pat.l())));
        }
    }

    #[test]
    fn oracle_matches_a_hand_solved_system() {
        // [[5, -1], [-1, 5]] x = (4, 4) has solution (1, 1).
        let x = oracle_solve(&[5.0, 5.0], &[4.0, 4.0], Bc::Open);
        assert!((x[0] - 1.0).abs() < 1e-14);
        assert!((x[1] - 1.0).abs() < 1e-14);
        // Periodic pair uses the doubled bond: [[3, -2], [-2, 3]] x = (1, 1)
        // gives x = (1, 1).
        let x = oracle_solve(&[3.0, 3.0], &[1.0, 1.0], Bc::Periodic);
        assert!((x[0] - 1.0).abs() < 1e-14);
        assert!((x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_site_oracle_is_direct_division() {
        let x = oracle_solve(&[4.0], &[2.0], Bc::Periodic);
        assert_eq!(x, vec![0.5]);
    }
}
