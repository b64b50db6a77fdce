//! Lattice states, model parameters, seed patterns, and closed-form limit values.
//!
//! The stationary problem on a chain of `N` sites is
//!
//! ```text
//! -psi[i-1] + 2 psi[i] - psi[i+1] - c psi[i]^3 = E psi[i]
//! ```
//!
//! with either periodic neighbours (indices wrap modulo `N`) or open
//! boundaries (missing neighbours read as zero). Everything downstream —
//! the Newton solver, the equivalent two-dimensional map, the large-`c`
//! expansions — is built on the residual and Hamiltonian defined here.

use crate::error::Error;

/// Boundary condition of a finite chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bc {
    /// Indices wrap: site `N-1` neighbours site `0`.
    Periodic,
    /// Missing neighbours read as zero (fixed ends).
    Open,
}

/// A real-valued amplitude profile on a finite chain.
///
/// Invariants (enforced at construction): at least one site, every
/// amplitude finite.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeWave {
    values: Vec<f64>,
    bc: Bc,
}

impl LatticeWave {
    pub fn new(values: Vec<f64>, bc: Bc) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::EmptyLattice);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteAmplitude);
        }
        Ok(Self { values, bc })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn bc(&self) -> Bc {
        self.bc
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a wave always has at least one site
    }

    /// Left neighbour honouring the boundary condition (zero outside an open chain).
    pub fn neighbor_left(&self, i: usize) -> f64 {
        let n = self.values.len();
        match self.bc {
            Bc::Periodic => self.values[(i + n - 1) % n],
            Bc::Open => {
                if i == 0 {
                    0.0
                } else {
                    self.values[i - 1]
                }
            }
        }
    }

    /// Right neighbour honouring the boundary condition.
    pub fn neighbor_right(&self, i: usize) -> f64 {
        let n = self.values.len();
        match self.bc {
            Bc::Periodic => self.values[(i + 1) % n],
            Bc::Open => {
                if i + 1 == n {
                    0.0
                } else {
                    self.values[i + 1]
                }
            }
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }
}

/// Parameters of the stationary problem: nonlinearity `c`, energy `e`,
/// and the chain geometry the state must match.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub c: f64,
    pub e: f64,
    pub n_sites: usize,
    pub bc: Bc,
}

impl ModelParams {
    pub fn new(c: f64, e: f64, n_sites: usize, bc: Bc) -> Result<Self, Error> {
        if !c.is_finite() {
            return Err(Error::NonFiniteParameter { name: "c", value: c });
        }
        if !e.is_finite() {
            return Err(Error::NonFiniteParameter { name: "e", value: e });
        }
        if n_sites == 0 {
            return Err(Error::EmptyLattice);
        }
        Ok(Self { c, e, n_sites, bc })
    }

    /// Check that a state lives on the chain these parameters describe.
    pub fn check(&self, wave: &LatticeWave) -> Result<(), Error> {
        if wave.len() != self.n_sites {
            return Err(Error::DimensionMismatch {
                wave: wave.len(),
                expected: self.n_sites,
            });
        }
        if wave.bc() != self.bc {
            return Err(Error::BoundaryMismatch {
                wave: wave.bc(),
                expected: self.bc,
            });
        }
        Ok(())
    }
}

/// Stationarity defect per site:
/// `r[i] = -psi[i-1] + 2 psi[i] - psi[i+1] - c psi[i]^3 - e psi[i]`.
///
/// A state is an exact stationary solution iff this vanishes. With
/// periodic boundaries and `N = 2` both neighbours of a site are the other
/// site (the wrap bond counts twice); with `N = 1` the site is its own
/// neighbour and the linear hopping cancels. Both follow from the wrapped
/// indexing and are not special-cased.
pub fn residual(wave: &LatticeWave, params: &ModelParams) -> Result<Vec<f64>, Error> {
    params.check(wave)?;
    let v = wave.values();
    Ok((0..v.len())
        .map(|i| {
            let psi = v[i];
            -wave.neighbor_left(i) + 2.0 * psi
                - wave.neighbor_right(i)
                - params.c * psi * psi * psi
                - params.e * psi
        })
        .collect())
}

/// Grand-canonical energy functional whose stationary points are the
/// solutions of [`residual`]` = 0`:
///
/// `H = sum_bonds (psi[i] - psi[i+1])^2 - (c/2) sum psi^4 - e sum psi^2`.
///
/// Periodic chains have `N` bonds (the wrap bond included, so `N = 2` has
/// two bonds between the same pair of sites). Open chains use the `N - 1`
/// interior bonds plus the two boundary half-bonds `psi[0]^2` and
/// `psi[N-1]^2` (bonds to fixed zero ends), which is exactly what makes
/// `gradient = 2 * residual` hold at the ends as well.
pub fn hamiltonian(wave: &LatticeWave, params: &ModelParams) -> Result<f64, Error> {
    params.check(wave)?;
    let v = wave.values();
    let n = v.len();
    let mut bonds = 0.0;
    match wave.bc() {
        Bc::Periodic => {
            for i in 0..n {
                let d = v[i] - v[(i + 1) % n];
                bonds += d * d;
            }
        }
        Bc::Open => {
            for i in 0..n - 1 {
                let d = v[i] - v[i + 1];
                bonds += d * d;
            }
            bonds += v[0] * v[0] + v[n - 1] * v[n - 1];
        }
    }
    let quartic: f64 = v.iter().map(|p| p * p * p * p).sum();
    let quadratic: f64 = v.iter().map(|p| p * p).sum();
    Ok(bonds - 0.5 * params.c * quartic - params.e * quadratic)
}

/// Gradient of [`hamiltonian`] with respect to each amplitude, computed
/// term by term from the functional (not via the residual). Satisfies
/// `gradient = 2 * residual` identically; tests enforce this.
pub fn gradient(wave: &LatticeWave, params: &ModelParams) -> Result<Vec<f64>, Error> {
    params.check(wave)?;
    let v = wave.values();
    Ok((0..v.len())
        .map(|i| {
            let psi = v[i];
            let bond_part = 2.0 * (psi - wave.neighbor_right(i)) + 2.0 * (psi - wave.neighbor_left(i));
            bond_part - 2.0 * params.c * psi * psi * psi - 2.0 * params.e * psi
        })
        .collect())
}

/// Alternating sign flip `psi[i] -> (-1)^i psi[i]` together with the energy
/// reflection `e -> 4 - e`. A state solves the problem at `(c, e)` iff its
/// staggered image solves it at `(-c, 4 - e)`; on even periodic chains the
/// transform is an involution. Returns the flipped state and `4 - e`.
pub fn stagger(wave: &LatticeWave, e: f64) -> (LatticeWave, f64) {
    let values = wave
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { *v } else { -v })
        .collect();
    (
        LatticeWave {
            values,
            bc: wave.bc(),
        },
        4.0 - e,
    )
}

/// Amplitude–nonlinearity scaling: `(psi, c) -> (beta psi, c / beta^2)`
/// leaves the residual equation invariant (at the same `e`). Returns the
/// scaled state and the compensated nonlinearity.
pub fn rescale(wave: &LatticeWave, c: f64, beta: f64) -> Result<(LatticeWave, f64), Error> {
    if !beta.is_finite() || beta == 0.0 {
        return Err(Error::InvalidScale(beta));
    }
    let values = wave.values().iter().map(|v| beta * v).collect();
    Ok((
        LatticeWave {
            values,
            bc: wave.bc(),
        },
        c / (beta * beta),
    ))
}

/// A state scaled to unit norm, with the physical coupling that makes the
/// scaling exact.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedState {
    pub state: LatticeWave,
    /// Physical coupling `C = c * sum psi^2` of the original state.
    pub coupling: f64,
}

/// Scale a state to `sum psi^2 = 1` and report the physical coupling
/// `C = c * norm^2` that compensates, so the normalized pair solves the
/// same stationary equation.
pub fn normalize(wave: &LatticeWave, c: f64) -> Result<NormalizedState, Error> {
    let norm_sq = wave.norm_sq();
    if norm_sq == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let norm = norm_sq.sqrt();
    let values = wave.values().iter().map(|v| v / norm).collect();
    Ok(NormalizedState {
        state: LatticeWave {
            values,
            bc: wave.bc(),
        },
        coupling: c * norm_sq,
    })
}

/// An anti-continuum seed pattern: which sites carry amplitude and with
/// what sign. The characteristic counts are derived from the layout, never
/// supplied by the caller:
///
/// * `n` — number of occupied sites,
/// * `m` — number of maximal contiguous occupied runs ("spots"); a fully
///   occupied periodic chain has no run boundary, so `m = 0` there,
/// * `l` — number of bonds joining opposite signs (on a periodic chain the
///   wrap bond counts, so two antisymmetric sites give `l = 2`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedPattern {
    layout: Vec<i8>,
    bc: Bc,
    n: usize,
    m: usize,
    l: usize,
}

impl SeedPattern {
    /// Build from an explicit layout of `-1 / 0 / +1` entries.
    pub fn from_layout(layout: Vec<i8>, bc: Bc) -> Result<Self, Error> {
        if layout.is_empty() {
            return Err(Error::InvalidPattern("layout is empty".into()));
        }
        if layout.iter().any(|s| !(-1..=1).contains(s)) {
            return Err(Error::InvalidPattern(
                "layout entries must be -1, 0, or +1".into(),
            ));
        }
        let n = layout.iter().filter(|s| **s != 0).count();
        if n == 0 {
            return Err(Error::InvalidPattern("layout has no occupied site".into()));
        }
        let len = layout.len();
        let left = |i: usize| -> i8 {
            match bc {
                Bc::Periodic => layout[(i + len - 1) % len],
                Bc::Open => {
                    if i == 0 {
                        0
                    } else {
                        layout[i - 1]
                    }
                }
            }
        };
        let m = (0..len)
            .filter(|&i| layout[i] != 0 && left(i) == 0)
            .count();
        let bond_count = match bc {
            Bc::Periodic => len,
            Bc::Open => len - 1,
        };
        let l = (0..bond_count)
            .filter(|&i| (layout[i] as i32) * (layout[(i + 1) % len] as i32) < 0)
            .count();
        Ok(Self { layout, bc, n, m, l })
    }

    /// Build from occupied site indices, all `+1` unless signs are given.
    pub fn from_sites(
        n_sites: usize,
        sites: &[usize],
        signs: Option<&[i8]>,
        bc: Bc,
    ) -> Result<Self, Error> {
        if n_sites == 0 {
            return Err(Error::EmptyLattice);
        }
        let mut layout = vec![0i8; n_sites];
        if let Some(signs) = signs {
            if signs.len() != sites.len() {
                return Err(Error::LengthMismatch(sites.len(), signs.len()));
            }
        }
        for (k, &s) in sites.iter().enumerate() {
            if s >= n_sites {
                return Err(Error::InvalidPattern(format!(
                    "site index {s} out of range for {n_sites} sites"
                )));
            }
            if layout[s] != 0 {
                return Err(Error::InvalidPattern(format!("site {s} listed twice")));
            }
            let sign = signs.map_or(1, |sg| sg[k]);
            if sign != 1 && sign != -1 {
                return Err(Error::InvalidPattern(
                    "signs must be +1 or -1".into(),
                ));
            }
            layout[s] = sign;
        }
        Self::from_layout(layout, bc)
    }

    /// Build a chain of single occupied sites (`+1`) separated by empty
    /// runs whose lengths repeat the given list cyclically, starting at
    /// site 0. The list must tile the chain exactly.
    pub fn from_gaps(n_sites: usize, gaps: &[usize], bc: Bc) -> Result<Self, Error> {
        if gaps.is_empty() {
            return Err(Error::InvalidPattern("gap list is empty".into()));
        }
        let mut layout = vec![0i8; n_sites.max(1)];
        if n_sites == 0 {
            return Err(Error::EmptyLattice);
        }
        let mut pos = 0usize;
        let mut k = 0usize;
        loop {
            layout[pos] = 1;
            pos += gaps[k % gaps.len()] + 1;
            k += 1;
            if pos == n_sites {
                break;
            }
            if pos > n_sites {
                return Err(Error::InvalidPattern(format!(
                    "gap list {gaps:?} does not tile a chain of {n_sites} sites"
                )));
            }
        }
        Self::from_layout(layout, bc)
    }

    pub fn layout(&self) -> &[i8] {
        &self.layout
    }

    pub fn bc(&self) -> Bc {
        self.bc
    }

    pub fn len(&self) -> usize {
        self.layout.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// The seed state: `layout[i] / sqrt(n)`, so the norm is exactly one.
    pub fn build(&self) -> LatticeWave {
        let amp = 1.0 / (self.n as f64).sqrt();
        let values = self.layout.iter().map(|s| f64::from(*s) * amp).collect();
        LatticeWave {
            values,
            bc: self.bc,
        }
    }

    /// The energy at which this pattern becomes stationary as `c` grows,
    /// see [`limit_energy`].
    pub fn limit_energy(&self, c: f64) -> f64 {
        (2.0 * self.m as f64 + 4.0 * self.l as f64 - c) / self.n as f64
    }

    /// Occupied site indices, in increasing order.
    pub fn sites(&self) -> Vec<usize> {
        (0..self.layout.len())
            .filter(|&i| self.layout[i] != 0)
            .collect()
    }
}

/// Energy at which a pattern with counts `(n, m, l)` is stationary to
/// leading order in `1/c`: `(2m + 4l - c) / n`.
pub fn limit_energy(n: usize, m: usize, l: usize, c: f64) -> Result<f64, Error> {
    if n == 0 || m > n || l > n {
        return Err(Error::PatternCounts { n, m, l });
    }
    if !c.is_finite() {
        return Err(Error::NonFiniteParameter { name: "c", value: c });
    }
    Ok((2.0 * m as f64 + 4.0 * l as f64 - c) / n as f64)
}

/// Hamiltonian of an `n`-site seed at its limit energy: exactly `c / (2n)`.
/// (The bond and sign contributions cancel against the energy term, so the
/// value is independent of `m` and `l`.)
pub fn limit_hamiltonian(n: usize, c: f64) -> Result<f64, Error> {
    if n == 0 {
        return Err(Error::PatternCounts { n, m: 0, l: 0 });
    }
    if !c.is_finite() {
        return Err(Error::NonFiniteParameter { name: "c", value: c });
    }
    Ok(c / (2.0 * n as f64))
}

/// Energy read off a periodic state: `E = -c * sum psi^3 / sum psi`.
///
/// On a periodic chain the hopping terms telescope out of the summed
/// residual, so this is exact on solutions. It is undefined for
/// sign-balanced states: when `|sum psi| <= 1e-8 * N` the quotient
/// amplifies noise and an error is returned instead of a number.
pub fn diagnostic_energy(wave: &LatticeWave, c: f64) -> Result<f64, Error> {
    if wave.bc() != Bc::Periodic {
        return Err(Error::DiagnosticNeedsPeriodic);
    }
    let sum: f64 = wave.values().iter().sum();
    let threshold = 1e-8 * wave.len() as f64;
    if sum.abs() <= threshold {
        return Err(Error::UndefinedDiagnostic {
            sum: sum.abs(),
            threshold,
        });
    }
    let sum_cubes: f64 = wave.values().iter().map(|p| p * p * p).sum();
    Ok(-c * sum_cubes / sum)
}

/// Per-site decay factors of an exponentially localized tail at energy `e < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailDecay {
    /// Root in `(0, 1)` of `r + 1/r = 2 - e`: the exact lattice decay ratio.
    pub discrete: f64,
    /// Continuum-limit ratio `exp(-sqrt(-e))`.
    pub continuum: f64,
}

/// Decay ratios of a localized tail, where the linearized recursion
/// `psi[i+1] = (2 - e) psi[i] - psi[i-1]` admits a decaying branch.
/// Requires `e < 0`; the two ratios agree as `e -> 0^-` (the difference is
/// `O(|e|^{3/2})`) and separate strongly for deep energies.
pub fn tail_decay(e: f64) -> Result<TailDecay, Error> {
    if !(e < 0.0) || !e.is_finite() {
        return Err(Error::NoDecayingTail(e));
    }
    let s = 2.0 - e; // > 2
    // r = (s - sqrt(s^2 - 4)) / 2, written to avoid cancellation for large s.
    let discrete = 2.0 / (s + (s * s - 4.0).sqrt());
    let continuum = (-(-e).sqrt()).exp();
    Ok(TailDecay {
        discrete,
        continuum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wave(values: &[f64], bc: Bc) -> LatticeWave {
        LatticeWave::new(values.to_vec(), bc).unwrap()
    }

    fn params(c: f64, e: f64, n: usize, bc: Bc) -> ModelParams {
        ModelParams::new(c, e, n, bc).unwrap()
    }

    fn max_abs(v: &[f64]) -> f64 {
        v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    #[test]
    fn residual_vanishes_on_two_site_symmetric_state() {
        let a = 1.0 / 2.0f64.sqrt();
        let w = wave(&[a, a], Bc::Periodic);
        let r = residual(&w, &params(4.0, -2.0, 2, Bc::Periodic)).unwrap();
        assert!(max_abs(&r) < 1e-15, "residual {r:?}");
    }

    #[test]
    fn residual_vanishes_on_asymmetric_two_site_state() {
        // c = 5 admits the exact pair (2/sqrt5, 1/sqrt5) at e = -3.
        let w = wave(&[2.0 / 5.0f64.sqrt(), 1.0 / 5.0f64.sqrt()], Bc::Periodic);
        let r = residual(&w, &params(5.0, -3.0, 2, Bc::Periodic)).unwrap();
        assert!(max_abs(&r) < 1e-14, "residual {r:?}");
    }

    #[test]
    fn residual_single_site_periodic_has_no_hopping() {
        let w = wave(&[0.3], Bc::Periodic);
        let r = residual(&w, &params(2.0, -1.0, 1, Bc::Periodic)).unwrap();
        let expected = -2.0 * 0.3f64.powi(3) + 0.3;
        assert!((r[0] - expected).abs() < 1e-15);
    }

    #[test]
    fn residual_single_site_open_keeps_diagonal() {
        let w = wave(&[0.3], Bc::Open);
        let r = residual(&w, &params(2.0, -1.0, 1, Bc::Open)).unwrap();
        let expected = 2.0 * 0.3 - 2.0 * 0.3f64.powi(3) + 0.3;
        assert!((r[0] - expected).abs() < 1e-15);
    }

    #[test]
    fn residual_checks_geometry() {
        let w = wave(&[1.0, 2.0], Bc::Periodic);
        assert!(matches!(
            residual(&w, &params(1.0, 0.0, 3, Bc::Periodic)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            residual(&w, &params(1.0, 0.0, 2, Bc::Open)),
            Err(Error::BoundaryMismatch { .. })
        ));
    }

    #[test]
    fn hamiltonian_of_symmetric_pair_is_one() {
        let a = 1.0 / 2.0f64.sqrt();
        let w = wave(&[a, a], Bc::Periodic);
        let h = hamiltonian(&w, &params(4.0, -2.0, 2, Bc::Periodic)).unwrap();
        assert!((h - 1.0).abs() < 1e-14, "h = {h}");
    }

    #[test]
    fn hamiltonian_open_single_site_has_two_ghost_bonds() {
        let w = wave(&[0.5], Bc::Open);
        let h = hamiltonian(&w, &params(0.0, 0.0, 1, Bc::Open)).unwrap();
        assert!((h - 0.5).abs() < 1e-15); // 2 * 0.5^2
    }

    #[test]
    fn seed_hamiltonian_equals_limit_value() {
        for (layout, bc) in [
            (vec![1, 0, 0, 1, 0, 0, -1, 0], Bc::Periodic),
            (vec![1, 1, 0, 0, 1, 0, 0, 0], Bc::Periodic),
            (vec![1, -1, 1, 0, 0, 1, 0, 0], Bc::Open),
        ] {
            for c in [3.0, 10.0, 1e4] {
                let pat = SeedPattern::from_layout(layout.clone(), bc).unwrap();
                let e0 = pat.limit_energy(c);
                let h = hamiltonian(&pat.build(), &params(c, e0, pat.len(), bc)).unwrap();
                let expect = limit_hamiltonian(pat.n(), c).unwrap();
                assert!(
                    (h - expect).abs() < 1e-12 * (1.0 + c),
                    "h = {h}, expect {expect} for {layout:?} at c = {c}"
                );
            }
        }
    }

    #[test]
    fn gradient_is_twice_residual() {
        let w = wave(&[0.9, -0.3, 0.0, 0.7, 0.2], Bc::Periodic);
        let p = params(7.0, -1.3, 5, Bc::Periodic);
        let g = gradient(&w, &p).unwrap();
        let r = residual(&w, &p).unwrap();
        for i in 0..5 {
            assert!((g[i] - 2.0 * r[i]).abs() < 1e-13, "site {i}");
        }
        let w = wave(&[0.9, -0.3, 0.0, 0.7, 0.2], Bc::Open);
        let p = params(7.0, -1.3, 5, Bc::Open);
        let g = gradient(&w, &p).unwrap();
        let r = residual(&w, &p).unwrap();
        for i in 0..5 {
            assert!((g[i] - 2.0 * r[i]).abs() < 1e-13, "open site {i}");
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let vals = [0.4, -0.8, 0.1, 0.6];
        let w = wave(&vals, Bc::Periodic);
        let p = params(3.0, -0.7, 4, Bc::Periodic);
        let g = gradient(&w, &p).unwrap();
        let h = 1e-6;
        for i in 0..4 {
            let mut plus = vals.to_vec();
            let mut minus = vals.to_vec();
            plus[i] += h;
            minus[i] -= h;
            let hp = hamiltonian(&wave(&plus, Bc::Periodic), &p).unwrap();
            let hm = hamiltonian(&wave(&minus, Bc::Periodic), &p).unwrap();
            let fd = (hp - hm) / (2.0 * h);
            assert!((g[i] - fd).abs() < 1e-8, "site {i}: {} vs {}", g[i], fd);
        }
    }

    #[test]
    fn stagger_flips_odd_sites_and_reflects_energy() {
        let w = wave(&[0.2, 0.5], Bc::Periodic);
        let (s, e) = stagger(&w, 1.0);
        assert_eq!(s.values(), &[0.2, -0.5]);
        assert_eq!(e, 3.0);
    }

    #[test]
    fn stagger_is_involution_on_even_chains() {
        let w = wave(&[0.1, -0.2, 0.3, -0.4], Bc::Periodic);
        let (s, e1) = stagger(&w, -1.5);
        let (ss, e2) = stagger(&s, e1);
        assert_eq!(ss, w);
        assert_eq!(e2, -1.5);
    }

    #[test]
    fn rescale_rejects_zero_factor() {
        let w = wave(&[1.0], Bc::Open);
        assert!(matches!(rescale(&w, 1.0, 0.0), Err(Error::InvalidScale(_))));
    }

    #[test]
    fn rescale_preserves_solutions() {
        // Exact two-site solution stays exact after (psi, c) -> (b psi, c/b^2).
        let w = wave(&[2.0 / 5.0f64.sqrt(), 1.0 / 5.0f64.sqrt()], Bc::Periodic);
        let (scaled, c2) = rescale(&w, 5.0, 3.0).unwrap();
        let r = residual(&scaled, &params(c2, -3.0, 2, Bc::Periodic)).unwrap();
        assert!(max_abs(&r) < 1e-13, "residual {r:?}");
    }

    #[test]
    fn normalize_reports_physical_coupling() {
        let w = wave(&[3.0, 4.0], Bc::Open);
        let ns = normalize(&w, 2.0).unwrap();
        assert!((ns.state.norm_sq() - 1.0).abs() < 1e-15);
        assert!((ns.state.values()[0] - 0.6).abs() < 1e-15);
        assert!((ns.coupling - 50.0).abs() < 1e-12);
        assert!(matches!(
            normalize(&wave(&[0.0, 0.0], Bc::Open), 2.0),
            Err(Error::ZeroNorm)
        ));
    }

    #[test]
    fn pattern_counts_from_layout() {
        // Four isolated spots, no sign changes.
        let pat = SeedPattern::from_sites(32, &[0, 8, 16, 24], None, Bc::Periodic).unwrap();
        assert_eq!((pat.n(), pat.m(), pat.l()), (4, 4, 0));
        assert_eq!(pat.limit_energy(10.0), -0.5);

        // Fully occupied periodic chain: no run boundary at all.
        let pat = SeedPattern::from_layout(vec![1; 6], Bc::Periodic).unwrap();
        assert_eq!((pat.n(), pat.m(), pat.l()), (6, 0, 0));

        // Two antisymmetric sites: the wrap bond counts twice.
        let pat = SeedPattern::from_layout(vec![1, -1], Bc::Periodic).unwrap();
        assert_eq!((pat.n(), pat.m(), pat.l()), (2, 0, 2));
        assert_eq!(pat.limit_energy(4.0), 2.0); // (8 - c) / 2

        // A spot wrapping the boundary with one sign change inside.
        let pat = SeedPattern::from_layout(vec![1, 0, -1], Bc::Periodic).unwrap();
        assert_eq!((pat.n(), pat.m(), pat.l()), (2, 1, 1));

        // Same layout on an open chain: two separate spots, one sign bond... none.
        let pat = SeedPattern::from_layout(vec![1, 0, -1], Bc::Open).unwrap();
        assert_eq!((pat.n(), pat.m(), pat.l()), (2, 2, 0));
    }

    #[test]
    fn pattern_from_gaps_tiles_exactly() {
        let pat = SeedPattern::from_gaps(100, &[6, 7, 9], Bc::Periodic).unwrap();
        assert_eq!(
            pat.sites(),
            vec![0, 7, 15, 25, 32, 40, 50, 57, 65, 75, 82, 90]
        );
        assert_eq!((pat.n(), pat.m(), pat.l()), (12, 12, 0));
        assert!(SeedPattern::from_gaps(100, &[6, 7], Bc::Periodic).is_err());
    }

    #[test]
    fn pattern_rejects_bad_input() {
        assert!(SeedPattern::from_layout(vec![0, 0], Bc::Open).is_err());
        assert!(SeedPattern::from_layout(vec![2, 1], Bc::Open).is_err());
        assert!(SeedPattern::from_sites(4, &[5], None, Bc::Open).is_err());
        assert!(SeedPattern::from_sites(4, &[1, 1], None, Bc::Open).is_err());
    }

    #[test]
    fn seed_norm_is_one() {
        let pat = SeedPattern::from_layout(vec![1, -1, 0, 1, 0], Bc::Periodic).unwrap();
        assert!((pat.build().norm_sq() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn limit_values() {
        assert_eq!(limit_energy(4, 4, 0, 10.0).unwrap(), -0.5);
        assert_eq!(limit_energy(1, 1, 0, 7.0).unwrap(), -5.0); // 2 - c
        assert!((limit_energy(12, 12, 0, 29.0).unwrap() - (24.0 - 29.0) / 12.0).abs() < 1e-15);
        assert!(limit_energy(0, 0, 0, 1.0).is_err());
        assert!(limit_energy(2, 3, 0, 1.0).is_err());
        assert_eq!(limit_hamiltonian(2, 8.0).unwrap(), 2.0);
        assert!(limit_hamiltonian(0, 1.0).is_err());
    }

    #[test]
    fn diagnostic_energy_examples() {
        let n = 5;
        let a = 1.0 / (n as f64).sqrt();
        let w = wave(&vec![a; n], Bc::Periodic);
        let e = diagnostic_energy(&w, 10.0).unwrap();
        assert!((e - -2.0).abs() < 1e-14); // -c/n

        let w = wave(&[2.0 / 5.0f64.sqrt(), 1.0 / 5.0f64.sqrt()], Bc::Periodic);
        let e = diagnostic_energy(&w, 5.0).unwrap();
        assert!((e - -3.0).abs() < 1e-14);

        let w = wave(&[0.7, -0.7], Bc::Periodic);
        assert!(matches!(
            diagnostic_energy(&w, 5.0),
            Err(Error::UndefinedDiagnostic { .. })
        ));

        let w = wave(&[0.7, 0.7], Bc::Open);
        assert!(matches!(
            diagnostic_energy(&w, 5.0),
            Err(Error::DiagnosticNeedsPeriodic)
        ));
    }

    #[test]
    fn tail_decay_reference_values() {
        let t = tail_decay(-1.0).unwrap();
        assert!((t.discrete - 0.381_966_011_250_105_15).abs() < 1e-15);
        assert!((t.continuum - (-1.0f64).exp()).abs() < 1e-15);

        let t = tail_decay(-5.0).unwrap();
        assert!((t.discrete - 0.145_898_033_750_315_5).abs() < 1e-15);

        assert!(tail_decay(0.0).is_err());
        assert!(tail_decay(1.0).is_err());
        assert!(tail_decay(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn tail_decay_ratios_agree_near_zero() {
        for e in [-1e-2, -1e-4, -1e-6] {
            let t = tail_decay(e).unwrap();
            assert!(
                (t.discrete - t.continuum).abs() < (-e).powf(1.5),
                "e = {e}: {} vs {}",
                t.discrete,
                t.continuum
            );
        }
    }

    proptest! {
        #[test]
        fn tail_decay_root_satisfies_its_equation(e in -30.0..-1e-3f64) {
            let t = tail_decay(e).unwrap();
            prop_assert!(t.discrete > 0.0 && t.discrete < 1.0);
            let lhs = t.discrete + 1.0 / t.discrete;
            prop_assert!((lhs - (2.0 - e)).abs() < 1e-12 * (2.0 - e).abs());
        }

        #[test]
        fn stagger_duality_maps_residuals(
            vals in proptest::collection::vec(-1.5..1.5f64, 2..12),
            c in -8.0..8.0f64,
            e in -6.0..6.0f64,
        ) {
            // Even periodic chains and any open chain: the staggered state's
            // residual at (-c, 4 - e) is the sign-flipped original residual.
            let bc = if vals.len() % 2 == 0 { Bc::Periodic } else { Bc::Open };
            let w = wave(&vals, bc);
            let r = residual(&w, &params(c, e, vals.len(), bc)).unwrap();
            let (s, e2) = stagger(&w, e);
            let r2 = residual(&s, &params(-c, e2, vals.len(), bc)).unwrap();
            let scale = 1.0 + max_abs(&r);
            for i in 0..vals.len() {
                let sign = if i % 2 == 0 { -1.0 } else { 1.0 };
                prop_assert!((r2[i] - sign * r[i]).abs() < 1e-12 * scale);
            }
        }

        #[test]
        fn seed_residual_is_independent_of_c(
            layout in proptest::collection::vec(-1i8..=1, 2..20),
            periodic in proptest::bool::ANY,
        ) {
            prop_assume!(layout.iter().any(|s| *s != 0));
            let bc = if periodic { Bc::Periodic } else { Bc::Open };
            let pat = SeedPattern::from_layout(layout, bc).unwrap();
            let seed = pat.build();
            let n = pat.len();
            let r1 = residual(&seed, &params(1.0, pat.limit_energy(1.0), n, bc)).unwrap();
            let r2 = residual(&seed, &params(1e4, pat.limit_energy(1e4), n, bc)).unwrap();
            for i in 0..n {
                prop_assert!((r1[i] - r2[i]).abs() < 1e-10);
            }
        }

        #[test]
        fn fully_occupied_periodic_seed_is_exact(
            len in 1usize..12,
            c in -20.0..20.0f64,
        ) {
            let pat = SeedPattern::from_layout(vec![1; len], Bc::Periodic).unwrap();
            let seed = pat.build();
            let r = residual(&seed, &params(c, pat.limit_energy(c), len, Bc::Periodic)).unwrap();
            prop_assert!(max_abs(&r) < 1e-13 * (1.0 + c.abs()));
        }

        #[test]
        fn normalize_after_rescale_recovers_state(
            beta in 0.1..10.0f64,
            c in 0.5..20.0f64,
        ) {
            let w = wave(&[0.4, -0.2, 0.9], Bc::Open);
            let base = normalize(&w, c).unwrap();
            let (scaled, c2) = rescale(&w, c, beta).unwrap();
            let again = normalize(&scaled, c2).unwrap();
            prop_assert!((base.coupling - again.coupling).abs() < 1e-10 * base.coupling.abs());
            for i in 0..3 {
                prop_assert!((base.state.values()[i] - again.state.values()[i]).abs() < 1e-12);
            }
        }
    }
}
