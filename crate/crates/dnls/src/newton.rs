//! Newton continuation of seed states at fixed energy.
//!
//! Each iteration linearizes the residual at the current state, solves
//! `T x = -residual` with the energy held at its seed value, and applies
//! the correction. The energy read off the iterates (see
//! [`crate::lattice::diagnostic_energy`]) is tracked as a structure
//! monitor: a sudden jump means the iteration left the basin of the seeded
//! pattern and is converging to (or wandering between) something else.

use crate::error::Error;
use crate::lattice::{self, LatticeWave, ModelParams};
use crate::perturbation::{build_system, solve_system};

/// Knobs of the Newton loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    /// Convergence threshold on the applied correction, max-norm.
    pub tol: f64,
    /// Iteration budget.
    pub max_iter: usize,
    /// Relative energy-jump threshold of the structure monitor: a change
    /// of the diagnostic energy by more than `e_jump * max(1, |e0|)`
    /// between consecutive iterates is flagged.
    pub e_jump: f64,
    /// Amplitude bound beyond which the iteration counts as diverged.
    pub bound: f64,
    /// Enable step halving when a full step increases the residual.
    pub damping: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100,
            e_jump: 0.5,
            bound: 1e8,
            damping: false,
        }
    }
}

/// Per-iteration progress data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    /// Iteration number, starting at 1.
    pub iter: usize,
    /// Diagnostic energy of the new iterate (periodic chains with
    /// unbalanced sign only).
    pub e_diag: Option<f64>,
    /// Max-norm of the applied correction.
    pub delta_inf: f64,
    /// Max-norm of the residual at the new iterate.
    pub residual_inf: f64,
}

/// How a Newton run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Correction below `tol` and residual below `10 * tol`.
    Converged,
    /// The structure monitor fired at this iteration. The run may still
    /// have converged afterwards — then a state is returned alongside —
    /// but it is not the seeded pattern's continuation.
    StructureChanged { at: usize },
    /// An amplitude left `[-bound, bound]` or stopped being finite.
    Diverged { at: usize },
    /// The linearized system was numerically singular at this iteration.
    SingularSystem { at: usize },
    /// Budget exhausted without meeting the tolerance.
    MaxIter,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::Converged => write!(f, "converged"),
            Outcome::StructureChanged { at } => write!(f, "structure-changed(at={at})"),
            Outcome::Diverged { at } => write!(f, "diverged(at={at})"),
            Outcome::SingularSystem { at } => write!(f, "singular(at={at})"),
            Outcome::MaxIter => write!(f, "max-iter"),
        }
    }
}

/// A converged stationary state with its headline observables.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergedState {
    pub state: LatticeWave,
    /// The energy the solve was run at.
    pub e0: f64,
    /// Energy read off the state; equals `e0` on genuine continuations.
    pub e_diag: Option<f64>,
    /// Physical coupling `c * sum psi^2`.
    pub coupling: f64,
    /// Value of the energy functional at the state.
    pub hamiltonian: f64,
    /// Max-norm of the residual.
    pub residual_inf: f64,
}

/// Everything a Newton run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    /// Present when the final iterate met the convergence test.
    pub state: Option<ConvergedState>,
    pub outcome: Outcome,
    pub records: Vec<IterationRecord>,
}

impl SolveResult {
    pub fn converged(&self) -> bool {
        self.state.is_some()
    }
}

fn residual_inf(wave: &LatticeWave, params: &ModelParams) -> Result<f64, Error> {
    Ok(lattice::residual(wave, params)?
        .iter()
        .fold(0.0f64, |a, r| a.max(r.abs())))
}

/// One Newton update at fixed energy: solve the linearized system and add
/// the correction. Returns the new state and the max-norm of the step.
pub fn newton_step(wave: &LatticeWave, params: &ModelParams) -> Result<(LatticeWave, f64), Error> {
    params.check(wave)?;
    let sys = build_system(wave, params.e, params.c)?;
    let x = solve_system(&sys)?;
    let values: Vec<f64> = wave.values().iter().zip(&x).map(|(v, xi)| v + xi).collect();
    let delta = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok((LatticeWave::new(values, wave.bc())?, delta))
}

/// Run the Newton loop from `seed` with the energy fixed at `params.e`.
///
/// Numeric trouble is reported through [`SolveResult::outcome`], never as
/// an `Err`; the error path is reserved for malformed input (geometry
/// mismatch, non-finite parameters). A structure flag does not abort the
/// run: if the iteration subsequently converges, the state is returned
/// with outcome [`Outcome::StructureChanged`] so callers can tell a
/// pattern-preserving continuation from a captured bystander.
pub fn solve(
    seed: &LatticeWave,
    params: &ModelParams,
    cfg: &SolveConfig,
) -> Result<SolveResult, Error> {
    params.check(seed)?;
    let mut psi = seed.clone();
    let mut records: Vec<IterationRecord> = Vec::new();
    let mut prev_residual = residual_inf(&psi, params)?;
    let mut prev_e_diag: Option<f64> = None;
    let mut structure_at: Option<usize> = None;

    for m in 1..=cfg.max_iter {
        let sys = build_system(&psi, params.e, params.c)?;
        let x = match solve_system(&sys) {
            Ok(x) => x,
            Err(Error::NearDegenerate { .. }) => {
                return Ok(SolveResult {
                    state: None,
                    outcome: Outcome::SingularSystem { at: m },
                    records,
                });
            }
            Err(e) => return Err(e),
        };

        // Full step, or the first halving that does not increase the
        // residual when damping is enabled.
        let mut scale = 1.0;
        let mut values: Vec<f64> = psi
            .values()
            .iter()
            .zip(&x)
            .map(|(v, xi)| v + xi)
            .collect();
        if cfg.damping {
            for _ in 0..8 {
                let finite = values.iter().all(|v| v.is_finite());
                if finite {
                    if let Ok(w) = LatticeWave::new(values.clone(), psi.bc()) {
                        if residual_inf(&w, params)? <= prev_residual {
                            break;
                        }
                    }
                }
                scale *= 0.5;
                values = psi
                    .values()
                    .iter()
                    .zip(&x)
                    .map(|(v, xi)| v + scale * xi)
                    .collect();
            }
        }
        let delta = scale * x.iter().fold(0.0f64, |a, v| a.max(v.abs()));

        let finite = values.iter().all(|v| v.is_finite());
        if !finite {
            records.push(IterationRecord {
                iter: m,
                e_diag: None,
                delta_inf: delta,
                residual_inf: f64::INFINITY,
            });
            return Ok(SolveResult {
                state: None,
                outcome: Outcome::Diverged { at: m },
                records,
            });
        }

        let next = LatticeWave::new(values, psi.bc())?;
        let res = residual_inf(&next, params)?;
        let e_diag = lattice::diagnostic_energy(&next, params.c).ok();
        records.push(IterationRecord {
            iter: m,
            e_diag,
            delta_inf: delta,
            residual_inf: res,
        });

        if next.max_abs() > cfg.bound {
            return Ok(SolveResult {
                state: None,
                outcome: Outcome::Diverged { at: m },
                records,
            });
        }

        if structure_at.is_none() {
            if let (Some(prev), Some(cur)) = (prev_e_diag, e_diag) {
                if (cur - prev).abs() > cfg.e_jump * params.e.abs().max(1.0) {
                    structure_at = Some(m);
                }
            }
        }
        prev_e_diag = e_diag;
        prev_residual = res;
        psi = next;

        if delta < cfg.tol && res < 10.0 * cfg.tol {
            let outcome = match structure_at {
                Some(at) => Outcome::StructureChanged { at },
                None => Outcome::Converged,
            };
            let coupling = params.c * psi.norm_sq();
            let hamiltonian = lattice::hamiltonian(&psi, params)?;
            return Ok(SolveResult {
                state: Some(ConvergedState {
                    state: psi,
                    e0: params.e,
                    e_diag,
                    coupling,
                    hamiltonian,
                    residual_inf: res,
                }),
                outcome,
                records,
            });
        }
    }

    Ok(SolveResult {
        state: None,
        outcome: match structure_at {
            Some(at) => Outcome::StructureChanged { at },
            None => Outcome::MaxIter,
        },
        records,
    })
}
