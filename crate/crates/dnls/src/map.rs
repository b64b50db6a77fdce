//! The equivalent planar map, its linearization, and orbit utilities.
//!
//! Site-to-site propagation of a stationary profile is the area-preserving
//! map
//!
//! ```text
//! Z' = Z - e psi - c psi^3
//! psi' = psi + Z'
//! ```
//!
//! acting on `(Z, psi)` with `Z_i = psi_i - psi_{i-1}` (backward
//! difference). A lattice state solves the stationary equation exactly when
//! its site sequence is an orbit of this map; periodic states correspond to
//! closed orbits. The map is invertible and volume preserving, so orbits
//! can be run both ways and stability is governed by traces of the
//! linearization.

use crate::error::Error;
use crate::lattice::{Bc, LatticeWave};

/// A point of the planar map: difference coordinate `z` and amplitude `psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapState {
    pub z: f64,
    pub psi: f64,
}

impl MapState {
    pub fn new(z: f64, psi: f64) -> Self {
        Self { z, psi }
    }

    pub fn max_coord(&self) -> f64 {
        self.z.abs().max(self.psi.abs())
    }
}

/// One forward application of the map.
pub fn step(s: MapState, c: f64, e: f64) -> MapState {
    let z = s.z - e * s.psi - c * s.psi * s.psi * s.psi;
    MapState {
        z,
        psi: s.psi + z,
    }
}

/// The exact inverse of [`step`]: recovers the previous point.
pub fn step_back(s: MapState, c: f64, e: f64) -> MapState {
    let psi = s.psi - s.z;
    MapState {
        z: s.z + e * psi + c * psi * psi * psi,
        psi,
    }
}

/// How an orbit run terminated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitStatus {
    /// All requested steps were taken.
    Completed,
    /// `max(|Z|, |psi|)` exceeded the bound (or became non-finite) after
    /// this many applications of the map; the offending point is the last
    /// one recorded.
    Diverged { step: usize },
}

/// A recorded orbit: the starting point plus every computed iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub states: Vec<MapState>,
    pub status: OrbitStatus,
}

impl Orbit {
    /// Orbit points as `(psi, z)` pairs, the portrait convention.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.states.iter().map(|s| (s.psi, s.z)).collect()
    }
}

/// Iterate the map from `s0`, recording every point. Stops early when a
/// coordinate leaves `[-bound, bound]` or stops being finite; the point
/// that broke the bound is recorded and nothing after it.
pub fn iterate(s0: MapState, c: f64, e: f64, steps: usize, bound: f64) -> Orbit {
    let mut states = Vec::with_capacity(steps + 1);
    states.push(s0);
    let mut s = s0;
    for k in 1..=steps {
        s = step(s, c, e);
        states.push(s);
        if !s.z.is_finite() || !s.psi.is_finite() || s.max_coord() > bound {
            return Orbit {
                states,
                status: OrbitStatus::Diverged { step: k },
            };
        }
    }
    Orbit {
        states,
        status: OrbitStatus::Completed,
    }
}

/// A 2x2 real matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }
}

/// Transfer-matrix form of the linearization at amplitude `psi`:
/// `[[2 - e - 3 c psi^2, -1], [1, 0]]`, acting on `(psi_i, psi_{i-1})`.
/// Unit determinant by construction.
pub fn jacobian_at(psi: f64, c: f64, e: f64) -> Mat2 {
    Mat2 {
        a: 2.0 - e - 3.0 * c * psi * psi,
        b: -1.0,
        c: 1.0,
        d: 0.0,
    }
}

/// Jacobian of one [`step`] in `(Z, psi)` coordinates:
/// `[[1, -e - 3 c psi^2], [1, 1 - e - 3 c psi^2]]`. Conjugate to
/// [`jacobian_at`]; its determinant is one, which is what makes the map
/// area preserving.
pub fn step_jacobian(psi: f64, c: f64, e: f64) -> Mat2 {
    let s = -e - 3.0 * c * psi * psi;
    Mat2 {
        a: 1.0,
        b: s,
        c: 1.0,
        d: 1.0 + s,
    }
}

/// Trace of a cycle's monodromy matrix, kept in scaled form
/// `mantissa * 2^exp2` because products over long or strongly unstable
/// cycles overflow `f64` (magnitudes beyond `1e300` are routine).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleTrace {
    pub mantissa: f64,
    pub exp2: i64,
}

impl CycleTrace {
    /// Collapse to a plain `f64`; infinite when the true value overflows.
    pub fn value(&self) -> f64 {
        if self.exp2 > 2000 {
            return if self.mantissa >= 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        if self.exp2 < -2000 {
            return 0.0;
        }
        self.mantissa * (self.exp2 as f64).exp2()
    }

    /// `log2 |trace|`, finite even when [`value`](Self::value) overflows.
    pub fn log2_abs(&self) -> f64 {
        self.mantissa.abs().log2() + self.exp2 as f64
    }
}

/// Trace of the ordered product of [`jacobian_at`] over a cycle of
/// amplitudes. The result is independent of the starting site (cyclic
/// invariance of the trace) and of the sweep direction (the transfer
/// matrices are conjugate to their inverses by the coordinate swap, and a
/// unit-determinant 2x2 matrix has `trace(M) = trace(M^-1)`); tests
/// enforce both. The product is renormalized by powers of two on the fly,
/// which is exact, so no accuracy is lost to the scaling.
pub fn cycle_trace(cycle: &[f64], c: f64, e: f64) -> Result<CycleTrace, Error> {
    if cycle.is_empty() {
        return Err(Error::EmptyCycle);
    }
    let mut m = Mat2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };
    let mut exp2: i64 = 0;
    for &psi in cycle {
        m = jacobian_at(psi, c, e).mul(&m);
        let scale = m.max_abs();
        if scale > 1e200 {
            // Exact renormalization: dividing by a power of two only
            // adjusts exponents.
            let k = scale.log2().floor() as i64;
            let f = (-(k as f64)).exp2();
            m = Mat2 {
                a: m.a * f,
                b: m.b * f,
                c: m.c * f,
                d: m.d * f,
            };
            exp2 += k;
        }
    }
    Ok(CycleTrace {
        mantissa: m.trace(),
        exp2,
    })
}

/// Stability of a fixed point, read from the trace of its linearization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    /// `|trace| < 2`: elliptic, nearby orbits wind around the point.
    Stable,
    /// `|trace| > 2`: hyperbolic, nearby orbits leave along the unstable
    /// direction.
    Unstable,
    /// `|trace| = 2`: parabolic borderline.
    Marginal,
}

fn stability_of(trace: f64) -> Stability {
    let t = trace.abs();
    if t < 2.0 {
        Stability::Stable
    } else if t > 2.0 {
        Stability::Unstable
    } else {
        Stability::Marginal
    }
}

/// A fixed point of the map with its linear stability data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub state: MapState,
    pub trace: f64,
    pub stability: Stability,
}

/// All fixed points: the origin (trace `2 - e`) and, when `e/c < 0`, the
/// pair `(Z, psi) = (0, +-sqrt(-e/c))` with trace `2 + 2e`. The pair is
/// born at `e = 0` (where it merges with the origin and is not listed
/// separately) and changes stability exactly at `e = 0` and `e = -2`,
/// i.e. where `|2 + 2e| = 2`.
pub fn fixed_points(c: f64, e: f64) -> Vec<FixedPoint> {
    let mut out = vec![FixedPoint {
        state: MapState::new(0.0, 0.0),
        trace: 2.0 - e,
        stability: stability_of(2.0 - e),
    }];
    if c != 0.0 {
        let ratio = -e / c;
        if ratio > 0.0 {
            let psi = ratio.sqrt();
            let trace = 2.0 + 2.0 * e;
            for p in [psi, -psi] {
                out.push(FixedPoint {
                    state: MapState::new(0.0, p),
                    trace,
                    stability: stability_of(trace),
                });
            }
        }
    }
    out
}

/// Portrait section of a lattice state: points `(psi_i, Z_i)` with the
/// forward difference `Z_i = psi_{i+1} - psi_i`. Periodic chains give `N`
/// points (the wrap difference included); open chains give `N - 1`.
pub fn phase_function(wave: &LatticeWave) -> Vec<(f64, f64)> {
    let v = wave.values();
    let n = v.len();
    match wave.bc() {
        Bc::Periodic => (0..n).map(|i| (v[i], v[(i + 1) % n] - v[i])).collect(),
        Bc::Open => (0..n.saturating_sub(1))
            .map(|i| (v[i], v[i + 1] - v[i]))
            .collect(),
    }
}

/// The map point that replays a state from its first site:
/// `psi = psi_0` and the backward difference `Z_0 = psi_0 - psi_{-1}`
/// (wrapped for periodic chains, zero ghost for open ones).
pub fn initial_state(wave: &LatticeWave) -> MapState {
    let v = wave.values();
    let left = match wave.bc() {
        Bc::Periodic => v[v.len() - 1],
        Bc::Open => 0.0,
    };
    MapState::new(v[0] - left, v[0])
}

/// Replay a state through the map and report the worst amplitude mismatch:
/// seed with [`initial_state`], apply [`step`] `N - 1` times, and compare
/// each iterate against the stored amplitudes. Exact solutions reproduce
/// themselves up to rounding noise amplified by the cycle's stability
/// multiplier, so for strongly unstable states this error is large even
/// though the state is a genuine solution; callers must treat it as a
/// conditioning-aware diagnostic, not a plain correctness check.
pub fn reproduction_error(wave: &LatticeWave, c: f64, e: f64) -> f64 {
    let v = wave.values();
    let mut s = initial_state(wave);
    let mut worst: f64 = 0.0;
    for &expect in v.iter().skip(1) {
        s = step(s, c, e);
        if !s.psi.is_finite() {
            return f64::INFINITY;
        }
        worst = worst.max((s.psi - expect).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Bc;
    use proptest::prelude::*;

    #[test]
    fn step_and_back_are_inverse() {
        let s = MapState::new(0.3, -1.1);
        let fwd = step(s, 2.5, -1.2);
        let back = step_back(fwd, 2.5, -1.2);
        assert!((back.z - s.z).abs() < 1e-12);
        assert!((back.psi - s.psi).abs() < 1e-12);
    }

    #[test]
    fn origin_is_fixed() {
        let s = step(MapState::new(0.0, 0.0), 3.0, -1.0);
        assert_eq!(s, MapState::new(0.0, 0.0));
    }

    #[test]
    fn nontrivial_fixed_point_is_fixed() {
        // psi* = sqrt(-e/c) makes the kick vanish.
        let (c, e): (f64, f64) = (2.0, -1.5);
        let psi = (-e / c).sqrt();
        let s = step(MapState::new(0.0, psi), c, e);
        assert!((s.z).abs() < 1e-15);
        assert!((s.psi - psi).abs() < 1e-15);
    }

    #[test]
    fn iterate_records_divergence_point() {
        let orbit = iterate(MapState::new(0.0, 10.0), 1.0, 1.0, 50, 100.0);
        assert_eq!(orbit.status, OrbitStatus::Diverged { step: 1 });
        assert_eq!(orbit.states.len(), 2);
        assert!(orbit.states[1].max_coord() > 100.0);
    }

    #[test]
    fn iterate_completes_on_bounded_orbit() {
        // Starts inside the stable island around psi* = sqrt(1.2).
        let orbit = iterate(MapState::new(0.0, 1.205), 1.0, -1.2, 200, 1e8);
        assert_eq!(orbit.status, OrbitStatus::Completed);
        assert_eq!(orbit.states.len(), 201);
    }

    #[test]
    fn step_jacobian_matches_finite_difference_of_step() {
        let (c, e) = (3.0, -0.8);
        let s = MapState::new(0.2, 0.7);
        let j = step_jacobian(s.psi, c, e);
        let h = 1e-6;
        let dz = step(MapState::new(s.z + h, s.psi), c, e);
        let dp = step(MapState::new(s.z, s.psi + h), c, e);
        let base = step(s, c, e);
        assert!((j.a - (dz.z - base.z) / h).abs() < 1e-6);
        assert!((j.b - (dp.z - base.z) / h).abs() < 1e-4);
        assert!((j.c - (dz.psi - base.psi) / h).abs() < 1e-6);
        assert!((j.d - (dp.psi - base.psi) / h).abs() < 1e-4);
    }

    #[test]
    fn unit_determinants() {
        for (psi, c, e) in [(0.0, 1.0, 0.0), (0.9, 12.0, -3.0), (-1.7, -4.0, 2.0)] {
            assert!((jacobian_at(psi, c, e).det() - 1.0).abs() < 1e-13);
            assert!((step_jacobian(psi, c, e).det() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn cycle_trace_of_zero_amplitude_pair() {
        // Both transfer matrices are [[2, -1], [1, 0]]; the squared
        // product has trace 2 (checked against direct multiplication).
        let t = cycle_trace(&[0.0, 0.0], 1.0, 0.0).unwrap();
        assert_eq!(t.exp2, 0);
        assert!((t.value() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn cycle_trace_single_site_fixed_point() {
        let (c, e): (f64, f64) = (1.0, -0.5);
        let psi = (-e / c).sqrt();
        let t = cycle_trace(&[psi], c, e).unwrap().value();
        assert!((t - (2.0 + 2.0 * e)).abs() < 1e-13);
    }

    #[test]
    fn cycle_trace_survives_huge_products() {
        let cycle = vec![10.0; 400];
        let t = cycle_trace(&cycle, 100.0, 0.0).unwrap();
        assert!(t.mantissa.is_finite());
        assert!(t.exp2 > 4000);
        assert!(t.value().is_infinite());
        // Per-site multiplier is |2 - 3e4| so log2|trace| ~ 400 * log2(29998).
        let expect = 400.0 * 29998.0f64.log2();
        assert!((t.log2_abs() - expect).abs() < 1.0, "{}", t.log2_abs());
    }

    #[test]
    fn cycle_trace_rejects_empty() {
        assert!(cycle_trace(&[], 1.0, 0.0).is_err());
    }

    #[test]
    fn fixed_point_census() {
        // -2 < e < 0: nontrivial pair exists and is stable, origin unstable.
        let fps = fixed_points(1.0, -1.0);
        assert_eq!(fps.len(), 3);
        assert_eq!(fps[0].trace, 3.0);
        assert_eq!(fps[0].stability, Stability::Unstable);
        assert_eq!(fps[1].trace, 0.0);
        assert_eq!(fps[1].stability, Stability::Stable);
        assert!((fps[1].state.psi - 1.0).abs() < 1e-15);

        // Below e = -2 the pair has gone unstable.
        let fps = fixed_points(1.0, -3.0);
        assert_eq!(fps[1].trace, -4.0);
        assert_eq!(fps[1].stability, Stability::Unstable);

        // Positive e needs negative c for the pair; it is unstable there.
        let fps = fixed_points(-1.0, 1.0);
        assert_eq!(fps.len(), 3);
        assert_eq!(fps[1].trace, 4.0);
        assert_eq!(fps[1].stability, Stability::Unstable);

        // Marginal cases at exactly e = 0 and e = -2.
        assert_eq!(fixed_points(1.0, 0.0).len(), 1);
        assert_eq!(fixed_points(1.0, 0.0)[0].stability, Stability::Marginal);
        assert_eq!(fixed_points(1.0, -2.0)[1].stability, Stability::Marginal);

        // No nonlinearity, no pair.
        assert_eq!(fixed_points(0.0, -1.0).len(), 1);
    }

    #[test]
    fn phase_function_counts_points() {
        let w = LatticeWave::new(vec![1.0, 2.0, 4.0], Bc::Periodic).unwrap();
        let pts = phase_function(&w);
        assert_eq!(pts, vec![(1.0, 1.0), (2.0, 2.0), (4.0, -3.0)]);
        let w = LatticeWave::new(vec![1.0, 2.0, 4.0], Bc::Open).unwrap();
        assert_eq!(phase_function(&w), vec![(1.0, 1.0), (2.0, 2.0)]);
    }

    #[test]
    fn exact_two_site_state_replays_itself() {
        let a = 1.0 / 2.0f64.sqrt();
        let w = LatticeWave::new(vec![a, a], Bc::Periodic).unwrap();
        assert!(reproduction_error(&w, 4.0, -2.0) < 1e-15);
    }

    proptest! {
        #[test]
        fn step_jacobian_det_is_one(
            psi in -2.0..2.0f64,
            c in -50.0..50.0f64,
            e in -10.0..10.0f64,
        ) {
            prop_assert!((step_jacobian(psi, c, e).det() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn step_back_inverts_step(
            z in -3.0..3.0f64,
            psi in -2.0..2.0f64,
            c in -10.0..10.0f64,
            e in -5.0..5.0f64,
        ) {
            let s = MapState::new(z, psi);
            let back = step_back(step(s, c, e), c, e);
            prop_assert!((back.z - s.z).abs() < 1e-10);
            prop_assert!((back.psi - s.psi).abs() < 1e-10);
        }

        #[test]
        fn cycle_trace_ignores_rotation_and_direction(
            cycle in proptest::collection::vec(-1.2..1.2f64, 2..10),
            c in -6.0..6.0f64,
            e in -4.0..4.0f64,
            rot in 0usize..10,
        ) {
            let base = cycle_trace(&cycle, c, e).unwrap().value();
            let k = rot % cycle.len();
            let mut rotated = cycle[k..].to_vec();
            rotated.extend_from_slice(&cycle[..k]);
            let r = cycle_trace(&rotated, c, e).unwrap().value();
            let mut reversed = cycle.clone();
            reversed.reverse();
            let v = cycle_trace(&reversed, c, e).unwrap().value();
            let scale = 1.0 + base.abs();
            prop_assert!((r - base).abs() < 1e-9 * scale);
            prop_assert!((v - base).abs() < 1e-9 * scale);
        }
    }
}
