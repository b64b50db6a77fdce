//! First-order corrections around anti-continuum seeds and the exact
//! two-site solutions they approximate.
//!
//! Linearizing the stationary equation at a state `p` with fixed energy
//! `e0` gives a symmetric (cyclic-)tridiagonal system `T x = F` for the
//! correction `x`, where `T` is the Jacobian of the residual and
//! `F = -residual(p)`. For seed patterns the leading solution is known in
//! closed form site by site (a finite table keyed by the sign of the site
//! and its two neighbours), and for the two-site chain the corrected
//! branches are known exactly, which is what the large-`c` expansions here
//! are checked against.

use crate::error::Error;
use crate::lattice::{Bc, LatticeWave};

/// The linear system `T x = F` of a Newton/perturbation step.
///
/// `T` is symmetric with constant off-diagonal "hops": tridiagonal with
/// `-1` next to the diagonal, corner entries `-1` on periodic chains of
/// three or more sites, a doubled hop `-2` on the two-site periodic chain
/// (both neighbours of a site are the other site), and a folded diagonal
/// on the one-site periodic chain.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionSystem {
    diag: Vec<f64>,
    rhs: Vec<f64>,
    bc: Bc,
}

impl CorrectionSystem {
    pub fn new(diag: Vec<f64>, rhs: Vec<f64>, bc: Bc) -> Result<Self, Error> {
        if diag.is_empty() {
            return Err(Error::EmptyLattice);
        }
        if diag.len() != rhs.len() {
            return Err(Error::LengthMismatch(diag.len(), rhs.len()));
        }
        if diag.iter().chain(rhs.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteAmplitude);
        }
        Ok(Self { diag, rhs, bc })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn bc(&self) -> Bc {
        self.bc
    }

    /// Off-diagonal weight between distinct neighbouring sites.
    pub fn hop(&self) -> f64 {
        if self.bc == Bc::Periodic && self.diag.len() == 2 {
            -2.0
        } else {
            -1.0
        }
    }

    /// Matrix-vector product `T x` honouring the structure.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        assert_eq!(x.len(), n, "dimension mismatch in apply");
        if n == 1 {
            return vec![self.diag[0] * x[0]];
        }
        let hop = self.hop();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if n == 2 {
                    y += hop * x[1 - i];
                } else {
                    match self.bc {
                        Bc::Periodic => {
                            y += hop * (x[(i + n - 1) % n] + x[(i + 1) % n]);
                        }
                        Bc::Open => {
                            if i > 0 {
                                y += hop * x[i - 1];
                            }
                            if i + 1 < n {
                                y += hop * x[i + 1];
                            }
                        }
                    }
                }
                y
            })
            .collect()
    }

    /// Infinity norm of `T` (largest absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        let n = self.diag.len();
        let hop = self.hop().abs();
        let neighbours = if n == 1 {
            0.0
        } else if n == 2 {
            hop
        } else {
            match self.bc {
                Bc::Periodic => 2.0 * hop,
                Bc::Open => 2.0 * hop, // interior rows dominate
            }
        };
        self.diag.iter().fold(0.0f64, |a, d| a.max(d.abs())) + neighbours
    }
}

/// Build the first-order system at state `p` with energy fixed at `e0`:
/// diagonal `2 - e0 - 3 c p_i^2` (folded to `-e0 - 3 c p_i^2` on the
/// one-site periodic chain) and right-hand side `F = -residual(p)`.
pub fn build_system(p: &LatticeWave, e0: f64, c: f64) -> Result<CorrectionSystem, Error> {
    if !e0.is_finite() {
        return Err(Error::NonFiniteParameter { name: "e0", value: e0 });
    }
    if !c.is_finite() {
        return Err(Error::NonFiniteParameter { name: "c", value: c });
    }
    let v = p.values();
    let n = v.len();
    let folded = n == 1 && p.bc() == Bc::Periodic;
    let diag = v
        .iter()
        .map(|&psi| {
            let d = -e0 - 3.0 * c * psi * psi;
            if folded {
                d
            } else {
                2.0 + d
            }
        })
        .collect();
    let rhs = (0..n)
        .map(|i| {
            let psi = v[i];
            e0 * psi + c * psi * psi * psi + p.neighbor_left(i) - 2.0 * psi
                + p.neighbor_right(i)
        })
        .collect();
    CorrectionSystem::new(diag, rhs, p.bc())
}

/// Relative pivot floor below which a system counts as degenerate.
const PIVOT_REL: f64 = 1e-8;

/// Solve `T x = F`.
///
/// Open tridiagonal systems use the two-sweep elimination, periodic ones
/// the rank-one corner correction on top of it (two tridiagonal solves);
/// both run in `O(N)`. If a pivot collapses or the computed solution fails
/// the backward-error check `|T x - F| <= 1e-10 |F|`, the solve falls back
/// to dense Gaussian elimination with partial pivoting, which also serves
/// the one- and two-site chains. A smallest dense pivot below
/// `1e-8 * |T|_inf` is reported as [`Error::NearDegenerate`].
pub fn solve_system(sys: &CorrectionSystem) -> Result<Vec<f64>, Error> {
    let n = sys.len();
    let f_inf = sys.rhs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if f_inf == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let norm = sys.norm_inf();
    let floor = PIVOT_REL * norm;

    let fast = match (n, sys.bc) {
        (1, _) | (2, _) => None, // dense path is already O(1) here
        (_, Bc::Open) => thomas(&sys.diag, &sys.rhs, floor),
        (_, Bc::Periodic) => cyclic_thomas(&sys.diag, &sys.rhs, norm, floor),
    };

    if let Some(x) = fast {
        let defect = sys
            .apply(&x)
            .iter()
            .zip(&sys.rhs)
            .fold(0.0f64, |a, (y, f)| a.max((y - f).abs()));
        if defect <= 1e-10 * f_inf {
            return Ok(x);
        }
    }
    dense_solve(sys, floor)
}

/// Tridiagonal elimination for hop `-1`; `None` when a pivot falls under
/// the floor (the caller then retries densely, where row exchange helps).
fn thomas(diag: &[f64], rhs: &[f64], floor: f64) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut w = vec![0.0; n];
    let mut g = vec![0.0; n];
    w[0] = diag[0];
    g[0] = rhs[0];
    for i in 1..n {
        if w[i - 1].abs() < floor {
            return None;
        }
        w[i] = diag[i] - 1.0 / w[i - 1];
        g[i] = rhs[i] + g[i - 1] / w[i - 1];
    }
    if w[n - 1].abs() < floor {
        return None;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = g[n - 1] / w[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (g[i] + x[i + 1]) / w[i];
    }
    Some(x)
}

/// Periodic tridiagonal solve via a rank-one update of the open problem:
/// write the corner-coupled matrix as `B + u v^T`, solve `B y = F` and
/// `B z = u`, and combine. Needs three or more sites.
fn cyclic_thomas(diag: &[f64], rhs: &[f64], norm: f64, floor: f64) -> Option<Vec<f64>> {
    let n = diag.len();
    let gamma = if diag[0].abs() > 1e-3 * norm {
        -diag[0]
    } else {
        norm
    };
    let mut b = diag.to_vec();
    b[0] -= gamma;
    b[n - 1] -= 1.0 / gamma;
    let y = thomas(&b, rhs, floor)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = -1.0;
    let z = thomas(&b, &u, floor)?;
    // v = (1, 0, ..., 0, -1/gamma)
    let vy = y[0] - y[n - 1] / gamma;
    let vz = z[0] - z[n - 1] / gamma;
    let denom = 1.0 + vz;
    if denom.abs() < 1e-12 * (1.0 + vz.abs()) {
        return None;
    }
    let factor = vy / denom;
    Some(y.iter().zip(&z).map(|(yi, zi)| yi - factor * zi).collect())
}

/// Dense Gaussian elimination with partial pivoting on the full matrix.
fn dense_solve(sys: &CorrectionSystem, floor: f64) -> Result<Vec<f64>, Error> {
    let n = sys.len();
    let hop = sys.hop();
    let mut a = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        a[i][i] = sys.diag[i];
    }
    if n == 2 {
        a[0][1] = hop;
        a[1][0] = hop;
    } else if n > 2 {
        for i in 0..n - 1 {
            a[i][i + 1] = hop;
            a[i + 1][i] = hop;
        }
        if sys.bc == Bc::Periodic {
            a[0][n - 1] += hop;
            a[n - 1][0] += hop;
        }
    }
    let mut x = sys.rhs.clone();
    let mut smallest = f64::INFINITY;
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .fold((col, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        smallest = smallest.min(pivot);
        // `<=` so an exactly zero pivot trips even when the matrix norm
        // (hence the floor) is itself zero.
        if pivot <= floor {
            return Err(Error::NearDegenerate {
                pivot: smallest,
                threshold: floor,
            });
        }
        a.swap(col, pivot_row);
        x.swap(col, pivot_row);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            if factor != 0.0 {
                for k in col..n {
                    a[r][k] -= factor * a[col][k];
                }
                x[r] -= factor * x[col];
            }
        }
    }
    for col in (0..n).rev() {
        x[col] /= a[col][col];
        for r in 0..col {
            x[r] -= a[r][col] * x[col];
        }
    }
    Ok(x)
}

/// Energy shift implied by a first-order correction `x` to a state `p` at
/// fixed `e0`:
///
/// `E1 = (-c sum p^3 - 3c sum p^2 x - e0 sum p - e0 sum x) / (sum p + sum x)`.
///
/// It measures the truncation of the correction: with the exact `x` of a
/// continued branch it vanishes, with the leading-order `x` it is `O(1/c)`.
/// Undefined for sign-balanced data (`|sum p + sum x| <= 1e-8 N`).
pub fn energy_correction(p: &[f64], x: &[f64], e0: f64, c: f64) -> Result<f64, Error> {
    if p.len() != x.len() {
        return Err(Error::LengthMismatch(p.len(), x.len()));
    }
    if p.is_empty() {
        return Err(Error::EmptyLattice);
    }
    let sum_p: f64 = p.iter().sum();
    let sum_x: f64 = x.iter().sum();
    let denom = sum_p + sum_x;
    let threshold = 1e-8 * p.len() as f64;
    if denom.abs() <= threshold {
        return Err(Error::UndefinedCorrection(denom.abs()));
    }
    let sum_p3: f64 = p.iter().map(|v| v * v * v).sum();
    let sum_p2x: f64 = p.iter().zip(x).map(|(pv, xv)| pv * pv * xv).sum();
    Ok((-c * sum_p3 - 3.0 * c * sum_p2x - e0 * sum_p - e0 * sum_x) / denom)
}

/// Leading first-order correction at one site of a seed pattern, given the
/// seed values at the site and its two neighbours (each `0` or
/// `+-1/sqrt(n)`) and the pattern counts. This is the closed-form table
/// the solved corrections converge to as `c` grows; eighteen sign
/// combinations collapse to the cases below.
pub fn closed_form_correction(
    p_left: f64,
    p_center: f64,
    p_right: f64,
    n: usize,
    m: usize,
    l: usize,
    c: f64,
) -> Result<f64, Error> {
    if n == 0 || m > n || l > n {
        return Err(Error::PatternCounts { n, m, l });
    }
    let amp = 1.0 / (n as f64).sqrt();
    let sign_of = |v: f64| -> Result<i32, Error> {
        if v.abs() < 1e-9 * amp {
            Ok(0)
        } else if (v - amp).abs() < 1e-9 * amp {
            Ok(1)
        } else if (v + amp).abs() < 1e-9 * amp {
            Ok(-1)
        } else {
            Err(Error::NotATableEntry(p_left, p_center, p_right, n))
        }
    };
    let sl = sign_of(p_left)?;
    let sc = sign_of(p_center)?;
    let sr = sign_of(p_right)?;
    let (nf, mf, lf) = (n as f64, m as f64, l as f64);
    let sqrt_n = (nf).sqrt();

    match sc {
        0 => {
            // Empty site: the correction is fed by the neighbours and the
            // two opposite-sign cases cancel.
            Ok(f64::from(sl + sr) * sqrt_n / (c - 2.0 * mf - 4.0 * lf))
        }
        1 | -1 => {
            // Occupied site: normalize to a positive centre, flip at the end.
            let (a, b) = if sc == 1 { (sl, sr) } else { (-sl, -sr) };
            let (lo, hi) = (a.min(b), a.max(b));
            let denom = sqrt_n * (c + mf + 2.0 * lf);
            let numer = match (lo, hi) {
                (0, 0) => nf - mf - 2.0 * lf,
                (0, 1) => (nf - 2.0 * mf - 4.0 * lf) / 2.0,
                (-1, 0) => (3.0 * nf - 2.0 * mf - 4.0 * lf) / 2.0,
                (1, 1) => -(mf + 2.0 * lf),
                (-1, 1) => nf - mf - 2.0 * lf,
                (-1, -1) => 2.0 * nf - mf - 2.0 * lf,
                _ => unreachable!("signs are in -1..=1"),
            };
            Ok(f64::from(sc) * numer / denom)
        }
        _ => unreachable!(),
    }
}

/// One exact branch of the two-site periodic chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSiteBranch {
    pub energy: f64,
    pub vector: [f64; 2],
}

/// All exact normalized stationary states of the two-site periodic chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSiteSolutions {
    /// `(1/sqrt2, 1/sqrt2)` at `E = -c/2`.
    pub symmetric: TwoSiteBranch,
    /// `(1/sqrt2, -1/sqrt2)` at `E = (8 - c)/2`.
    pub antisymmetric: TwoSiteBranch,
    /// The asymmetric branch at `E = 2 - c`, present exactly when `c > 4`.
    pub symmetry_breaking: Option<TwoSiteBranch>,
    /// Asymmetry parameter `sqrt(1 - 16/c^2)` of the branch above.
    pub alpha: Option<f64>,
}

/// Exact stationary states of the two-site periodic chain at coupling `c`.
///
/// The asymmetric branch bifurcates from the symmetric one at `c = 4`; at
/// the bifurcation the two coincide, so the branch is only reported for
/// `c > 4`. The small component is evaluated through
/// `1 - alpha = (16/c^2) / (1 + alpha)`, avoiding the cancellation that
/// would otherwise spoil it for large `c`.
pub fn two_site_exact(c: f64) -> TwoSiteSolutions {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let symmetric = TwoSiteBranch {
        energy: -c / 2.0,
        vector: [a, a],
    };
    let antisymmetric = TwoSiteBranch {
        energy: (8.0 - c) / 2.0,
        vector: [a, -a],
    };
    let (symmetry_breaking, alpha) = if c > 4.0 {
        let alpha = (1.0 - 16.0 / (c * c)).sqrt();
        let big = ((1.0 + alpha) / 2.0).sqrt();
        let small = (8.0 / (c * c * (1.0 + alpha))).sqrt();
        (
            Some(TwoSiteBranch {
                energy: 2.0 - c,
                vector: [big, small],
            }),
            Some(alpha),
        )
    } else {
        (None, None)
    };
    TwoSiteSolutions {
        symmetric,
        antisymmetric,
        symmetry_breaking,
        alpha,
    }
}

/// Partial sums of the large-`c` expansions of the asymmetric branch
/// components, `1..=4` terms:
///
/// ```text
/// large ~ 1 - 2/c^2 - 10/c^4 - 84/c^6
/// small ~ 2/c + 4/c^3 + 28/c^5 + 264/c^7
/// ```
///
/// Returns `(large, small)`. Requires `c > 4` so the branch being expanded
/// exists.
pub fn surd_series(c: f64, terms: usize) -> Result<(f64, f64), Error> {
    if !(c > 4.0) {
        return Err(Error::SeriesOutOfDomain(c));
    }
    if terms == 0 || terms > 4 {
        return Err(Error::SeriesTermCount(terms));
    }
    const LARGE: [f64; 4] = [1.0, -2.0, -10.0, -84.0];
    const SMALL: [f64; 4] = [2.0, 4.0, 28.0, 264.0];
    let inv2 = 1.0 / (c * c);
    let mut large = 0.0;
    let mut small = 0.0;
    let mut pow_large = 1.0; // c^0, c^-2, ...
    let mut pow_small = 1.0 / c; // c^-1, c^-3, ...
    for k in 0..terms {
        large += LARGE[k] * pow_large;
        small += SMALL[k] * pow_small;
        pow_large *= inv2;
        pow_small *= inv2;
    }
    Ok((large, small))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{residual, LatticeWave, ModelParams, SeedPattern};
    use proptest::prelude::*;

    fn wave(values: &[f64], bc: Bc) -> LatticeWave {
        LatticeWave::new(values.to_vec(), bc).unwrap()
    }

    /// Cramer-rule solutions for 2x2 and 3x3, used as an independent check
    /// of the elimination paths on small systems.
    fn cramer(a: &[Vec<f64>], f: &[f64]) -> Vec<f64> {
        match f.len() {
            2 => {
                let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
                vec![
                    (f[0] * a[1][1] - a[0][1] * f[1]) / det,
                    (a[0][0] * f[1] - f[0] * a[1][0]) / det,
                ]
            }
            3 => {
                let det3 = |m: &[Vec<f64>]| {
                    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
                };
                let det = det3(a);
                (0..3)
                    .map(|col| {
                        let mut m = a.to_vec();
                        for r in 0..3 {
                            m[r][col] = f[r];
                        }
                        det3(&m) / det
                    })
                    .collect()
            }
            _ => panic!("cramer helper covers 2x2 and 3x3"),
        }
    }

    fn full_matrix(sys: &CorrectionSystem) -> Vec<Vec<f64>> {
        let n = sys.len();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut unit = vec![0.0; n];
            unit[i] = 1.0;
            let col = sys.apply(&unit);
            for r in 0..n {
                a[r][i] = col[r];
            }
        }
        a
    }

    #[test]
    fn rhs_is_minus_residual() {
        for bc in [Bc::Periodic, Bc::Open] {
            let w = wave(&[0.8, -0.1, 0.0, 0.5, 0.3], bc);
            let (e0, c) = (-1.3, 6.0);
            let sys = build_system(&w, e0, c).unwrap();
            let r = residual(&w, &ModelParams::new(c, e0, 5, bc).unwrap()).unwrap();
            for i in 0..5 {
                assert!((sys.rhs()[i] + r[i]).abs() < 1e-13, "{bc:?} site {i}");
            }
        }
    }

    #[test]
    fn two_site_periodic_system_doubles_the_hop() {
        // Seed (1, 0): diagonal (-2c, c), right side (0, 2).
        let c = 10.0;
        let pat = SeedPattern::from_layout(vec![1, 0], Bc::Periodic).unwrap();
        let e0 = pat.limit_energy(c); // 2 - c
        let w = pat.build();
        let sys = build_system(&w, e0, c).unwrap();
        assert!((sys.diag()[0] - -2.0 * c).abs() < 1e-12);
        assert!((sys.diag()[1] - c).abs() < 1e-12);
        assert_eq!(sys.hop(), -2.0);
        assert!((sys.rhs()[0]).abs() < 1e-12);
        assert!((sys.rhs()[1] - 2.0).abs() < 1e-12);

        let x = solve_system(&sys).unwrap();
        let denom = 2.0 + c * c;
        assert!((x[0] - -2.0 / denom).abs() < 1e-14);
        assert!((x[1] - 2.0 * c / denom).abs() < 1e-14);
    }

    #[test]
    fn one_site_periodic_diagonal_folds_the_hops() {
        let w = wave(&[0.5], Bc::Periodic);
        let sys = build_system(&w, -1.0, 2.0).unwrap();
        // -e0 - 3 c psi^2 = 1 - 1.5
        assert!((sys.diag()[0] - -0.5).abs() < 1e-15);
        let w = wave(&[0.5], Bc::Open);
        let sys = build_system(&w, -1.0, 2.0).unwrap();
        assert!((sys.diag()[0] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn solve_matches_cramer_on_small_systems() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = if rng.gen::<bool>() { 2 } else { 3 };
            let bc = if rng.gen::<bool>() { Bc::Periodic } else { Bc::Open };
            let diag: Vec<f64> = (0..n)
                .map(|_| {
                    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                    sign * rng.gen_range(3.0..40.0)
                })
                .collect();
            let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let sys = CorrectionSystem::new(diag, rhs.clone(), bc).unwrap();
            let x = solve_system(&sys).unwrap();
            let expect = cramer(&full_matrix(&sys), &rhs);
            for i in 0..n {
                assert!(
                    (x[i] - expect[i]).abs() < 1e-10 * (1.0 + expect[i].abs()),
                    "n={n} {bc:?} site {i}: {} vs {}",
                    x[i],
                    expect[i]
                );
            }
        }
    }

    #[test]
    fn zero_rhs_returns_zero() {
        let sys = CorrectionSystem::new(vec![5.0; 6], vec![0.0; 6], Bc::Periodic).unwrap();
        assert_eq!(solve_system(&sys).unwrap(), vec![0.0; 6]);
    }

    #[test]
    fn singular_system_is_reported() {
        // [[0,-1,0],[-1,0,-1],[0,-1,0]] has two identical rows.
        let sys = CorrectionSystem::new(vec![0.0; 3], vec![1.0, 0.0, 0.0], Bc::Open).unwrap();
        assert!(matches!(
            solve_system(&sys),
            Err(Error::NearDegenerate { .. })
        ));
    }

    #[test]
    fn near_zero_pivot_chain_falls_back_to_dense() {
        // A leading zero diagonal defeats plain elimination but not row
        // exchange; the answer must still come back accurately.
        let diag = vec![0.0, 3.0, -4.0, 2.5, 6.0];
        let rhs = vec![1.0, -2.0, 0.5, 3.0, -1.0];
        let sys = CorrectionSystem::new(diag, rhs.clone(), Bc::Open).unwrap();
        let x = solve_system(&sys).unwrap();
        let back = sys.apply(&x);
        for i in 0..5 {
            assert!((back[i] - rhs[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn energy_correction_artifacts() {
        // Leading-order correction of the (1, 0) seed: E1 = -4/(c+2).
        for c in [10.0, 100.0, 1e4] {
            let e1 = energy_correction(&[1.0, 0.0], &[0.0, 2.0 / c], 2.0 - c, c).unwrap();
            assert!(
                (e1 + 4.0 / (c + 2.0)).abs() < 1e-12,
                "c = {c}: e1 = {e1}"
            );
        }
        // With the exactly solved correction the shift closes to zero.
        let c = 10.0;
        let denom = 2.0 + c * c;
        let e1 = energy_correction(
            &[1.0, 0.0],
            &[-2.0 / denom, 2.0 * c / denom],
            2.0 - c,
            c,
        )
        .unwrap();
        assert!(e1.abs() < 1e-12, "e1 = {e1}");
    }

    #[test]
    fn energy_correction_rejects_balanced_input() {
        assert!(matches!(
            energy_correction(&[0.7, -0.7], &[0.0, 0.0], -1.0, 5.0),
            Err(Error::UndefinedCorrection(_))
        ));
    }

    #[test]
    fn correction_table_signature_cases() {
        let c = 50.0;
        // Isolated empty site.
        assert_eq!(closed_form_correction(0.0, 0.0, 0.0, 4, 2, 1, c).unwrap(), 0.0);
        // Empty site flanked by opposite signs cancels.
        let amp = 0.5; // 1/sqrt(4)
        assert_eq!(
            closed_form_correction(amp, 0.0, -amp, 4, 2, 1, c).unwrap(),
            0.0
        );
        // Occupied site with empty neighbours.
        let n = 5;
        let amp = 1.0 / (n as f64).sqrt();
        let got = closed_form_correction(0.0, amp, 0.0, n, 1, 0, c).unwrap();
        let expect = (5.0 - 1.0) / ((n as f64).sqrt() * (c + 1.0));
        assert!((got - expect).abs() < 1e-15);
        // Mirror symmetry: flipping every sign flips the correction.
        let cases = [
            (0.0, amp, 0.0),
            (amp, amp, 0.0),
            (-amp, amp, 0.0),
            (amp, amp, amp),
            (amp, amp, -amp),
            (-amp, amp, -amp),
            (amp, 0.0, 0.0),
            (amp, 0.0, amp),
        ];
        for (a, b, d) in cases {
            let plus = closed_form_correction(a, b, d, n, 1, 0, c).unwrap();
            let minus = closed_form_correction(-a, -b, -d, n, 1, 0, c).unwrap();
            assert!((plus + minus).abs() < 1e-15, "case ({a}, {b}, {d})");
        }
    }

    #[test]
    fn correction_table_rejects_off_grid_values() {
        assert!(matches!(
            closed_form_correction(0.3, 0.0, 0.0, 4, 1, 0, 50.0),
            Err(Error::NotATableEntry(..))
        ));
        assert!(closed_form_correction(0.0, 0.0, 0.0, 0, 0, 0, 50.0).is_err());
    }

    #[test]
    fn correction_table_matches_solved_corrections_at_large_c() {
        // Two isolated spots on a six-site ring, c = 1e6: the solved
        // first-order correction agrees with the table to O(1/c).
        let c = 1e6;
        let pat = SeedPattern::from_layout(vec![1, 0, 0, 1, 0, 0], Bc::Periodic).unwrap();
        let seed = pat.build();
        let sys = build_system(&seed, pat.limit_energy(c), c).unwrap();
        let x = solve_system(&sys).unwrap();
        let v = seed.values();
        for i in 0..6 {
            let table = closed_form_correction(
                seed.neighbor_left(i),
                v[i],
                seed.neighbor_right(i),
                pat.n(),
                pat.m(),
                pat.l(),
                c,
            )
            .unwrap();
            let scale = 1.0 / c; // corrections are O(1/c)
            assert!(
                (x[i] - table).abs() < 1e-2 * scale,
                "site {i}: solved {} vs table {table}",
                x[i]
            );
        }
    }

    #[test]
    fn two_site_branches_are_exact_solutions() {
        for c in [4.5, 5.0, 10.0, 100.0] {
            let sol = two_site_exact(c);
            let mut branches = vec![sol.symmetric, sol.antisymmetric];
            branches.extend(sol.symmetry_breaking);
            for br in branches {
                let w = wave(&br.vector, Bc::Periodic);
                let p = ModelParams::new(c, br.energy, 2, Bc::Periodic).unwrap();
                let r = residual(&w, &p).unwrap();
                let worst = r.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                assert!(worst < 1e-13, "c = {c}, E = {}: residual {worst:e}", br.energy);
                assert!((w.norm_sq() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn two_site_alpha_examples() {
        let sol = two_site_exact(5.0);
        assert!((sol.alpha.unwrap() - 0.6).abs() < 1e-15);
        let br = sol.symmetry_breaking.unwrap();
        assert!((br.vector[0] - 2.0 / 5.0f64.sqrt()).abs() < 1e-15);
        assert!((br.vector[1] - 1.0 / 5.0f64.sqrt()).abs() < 1e-15);
        assert_eq!(br.energy, -3.0);

        assert!(two_site_exact(4.0).symmetry_breaking.is_none());
        assert!(two_site_exact(3.0).alpha.is_none());
        assert!(two_site_exact(4.0 + 1e-9).symmetry_breaking.is_some());
    }

    #[test]
    fn surd_series_partial_sums() {
        let c = 10.0;
        let (large, small) = surd_series(c, 1).unwrap();
        assert_eq!(large, 1.0);
        assert!((small - 0.2).abs() < 1e-16);

        // Four terms against the exact closed forms at c = 100: the error
        // must be bounded by ten times the first omitted coefficient.
        let c = 100.0;
        let sol = two_site_exact(c);
        let br = sol.symmetry_breaking.unwrap();
        let (large, small) = surd_series(c, 4).unwrap();
        assert!((large - br.vector[0]).abs() < 10.0 * 858.0 / c.powi(8));
        assert!((small - br.vector[1]).abs() < 10.0 * 2860.0 / c.powi(9));

        assert!(surd_series(4.0, 2).is_err());
        assert!(surd_series(10.0, 0).is_err());
        assert!(surd_series(10.0, 5).is_err());
    }

    proptest! {
        #[test]
        fn diagonally_dominant_systems_solve_with_small_backward_error(
            seed in proptest::collection::vec((-40.0..40.0f64, -1.0..1.0f64), 1..10),
            periodic in proptest::bool::ANY,
        ) {
            let bc = if periodic { Bc::Periodic } else { Bc::Open };
            // Push magnitudes to 3 or more so the systems stay comfortably
            // away from singular (conditioning is tested elsewhere).
            let diag: Vec<f64> = seed
                .iter()
                .map(|(d, _)| {
                    let sign = if *d < 0.0 { -1.0 } else { 1.0 };
                    sign * d.abs().max(3.0)
                })
                .collect();
            let rhs: Vec<f64> = seed.iter().map(|(_, f)| *f).collect();
            let sys = CorrectionSystem::new(diag, rhs.clone(), bc).unwrap();
            let x = solve_system(&sys).unwrap();
            let f_inf = rhs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let defect = sys
                .apply(&x)
                .iter()
                .zip(&rhs)
                .fold(0.0f64, |a, (y, f)| a.max((y - f).abs()));
            prop_assert!(defect <= 1e-10 * f_inf.max(1e-300));
        }

        #[test]
        fn alpha_grows_with_coupling(c1 in 4.1..400.0f64, dc in 0.1..50.0f64) {
            let a1 = two_site_exact(c1).alpha.unwrap();
            let a2 = two_site_exact(c1 + dc).alpha.unwrap();
            prop_assert!(a2 > a1);
            prop_assert!(a1 > 0.0 && a2 < 1.0);
        }
    }
}
