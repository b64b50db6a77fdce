//! Stationary states of a cubic lattice wave equation on finite 1D
//! chains, and their phase-space taxonomy.
//!
//! The crate finds real stationary profiles `psi` of
//!
//! ```text
//! -psi[i-1] + 2 psi[i] - psi[i+1] - c psi[i]^3 = E psi[i]
//! ```
//!
//! on periodic or open chains, starting from strong-coupling seed
//! patterns, and classifies each solution by the geometry of its phase
//! portrait — the set of points `(psi[i], psi[i+1] - psi[i])`. The same
//! recursion, read site by site, is an area-preserving planar map, so
//! every solution is a cycle of that map and inherits its vocabulary:
//! periodic, quasiperiodic, or chaotic.
//!
//! The pieces:
//!
//! - [`lattice`]: chain geometry, residual and energy functional, seed
//!   patterns `(n, m, l)` with their limit energies, staggering and
//!   rescaling symmetries, tail-decay rates.
//! - [`map`]: the planar map, orbits, Jacobians, cycle traces with
//!   overflow-safe renormalization, fixed points and their stability.
//! - [`perturbation`]: linearized correction systems around a seed,
//!   tridiagonal/cyclic solvers with a dense fallback, first-order
//!   energy shifts, tabulated closed-form corrections, exact two-site
//!   branches and their strong-coupling series.
//! - [`newton`]: the Newton iteration with structure monitoring,
//!   divergence and singularity detection, optional step damping.
//! - [`classify`]: portrait clustering and the
//!   periodic/quasiperiodic/chaotic/divergent taxonomy, plus the
//!   positive-energy extended-state check.
//! - [`scenario`]: the `key = value` run description format and the
//!   eight embedded figure scenarios.
//! - [`runner`]: end-to-end runs with deterministic plain-text
//!   artifacts, parallel coupling sweeps, standalone orbit runs.
//! - [`verify`]: the ten-check cross-validation battery.
//!
//! A converged run in five lines:
//!
//! ```
//! use dnls::{scenario, runner};
//! let s = scenario::builtin("fig1").unwrap();
//! let runs = runner::run_scenario(&s, None).unwrap();
//! assert!(runs[0].result.converged());
//! assert_eq!(runs[0].portrait.as_ref().unwrap().clusters.len(), 8);
//! ```

pub mod classify;
pub mod error;
pub mod lattice;
pub mod map;
pub mod newton;
pub mod perturbation;
pub mod runner;
pub mod scenario;
pub mod verify;

pub use classify::{ClassifyConfig, ClusterTol, Portrait, PortraitClass};
pub use error::{ConfigError, Error, RunError};
pub use lattice::{Bc, LatticeWave, ModelParams, SeedPattern};
pub use map::{MapState, Orbit, OrbitStatus};
pub use newton::{Outcome, SolveConfig, SolveResult};
pub use runner::{RunOutput, run_scenario, run_single, run_sweep};
pub use scenario::Scenario;
