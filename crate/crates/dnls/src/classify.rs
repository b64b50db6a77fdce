//! Phase-portrait clustering and orbit taxonomy.
//!
//! A converged state (or a map orbit) yields a cloud of `(psi, Z)` points.
//! Greedy clustering collapses repeated visits of the same spot; the
//! cluster structure then separates the classes: a handful of evenly
//! revisited centers is a periodic profile, centers strung along a closed
//! loop with no large gap are a quasiperiodic section, everything else
//! scattered is chaotic. Divergent orbits and positive-energy extended
//! states are recognized separately.

use crate::lattice::LatticeWave;
use crate::map::{phase_function, Orbit, OrbitStatus};

/// Cluster tolerance, either an absolute Chebyshev radius or a fraction of
/// the portrait's largest coordinate magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClusterTol {
    Relative(f64),
    Absolute(f64),
}

impl ClusterTol {
    /// Resolve to an absolute radius for the given points.
    pub fn resolve(&self, points: &[(f64, f64)]) -> f64 {
        match *self {
            ClusterTol::Absolute(a) => a,
            ClusterTol::Relative(r) => {
                let scale = points
                    .iter()
                    .fold(0.0f64, |a, (x, y)| a.max(x.abs()).max(y.abs()));
                r * scale
            }
        }
    }
}

/// Knobs of the classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyConfig {
    pub cluster_tol: ClusterTol,
    /// Threshold on max/median consecutive gap around the loop of cluster
    /// centers; below it the centers fill a closed curve.
    pub loop_gap_ratio: f64,
    /// Fewer points than this cannot be classified.
    pub min_points: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            cluster_tol: ClusterTol::Relative(1e-6),
            loop_gap_ratio: 4.0,
            min_points: 8,
        }
    }
}

/// What a portrait looks like.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortraitClass {
    /// The points revisit `k` centers in a `k`-periodic sequence.
    Periodic(usize),
    /// The centers fill a closed loop without large gaps.
    Quasiperiodic,
    /// Scattered or gap-ridden centers.
    Chaotic,
    /// The underlying orbit left the amplitude bound.
    Divergent,
    /// Positive-energy extended state on an ellipse (assigned by the
    /// scenario runner via [`bloch_check`], not by point geometry alone).
    BlochLike,
    /// Too few points to say anything.
    Unclassifiable,
}

impl std::fmt::Display for PortraitClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PortraitClass::Periodic(k) => write!(f, "periodic({k})"),
            PortraitClass::Quasiperiodic => write!(f, "quasiperiodic"),
            PortraitClass::Chaotic => write!(f, "chaotic"),
            PortraitClass::Divergent => write!(f, "divergent"),
            PortraitClass::BlochLike => write!(f, "bloch-like"),
            PortraitClass::Unclassifiable => write!(f, "unclassifiable"),
        }
    }
}

/// A cluster of portrait points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    /// Running mean of the member points.
    pub center: (f64, f64),
    pub count: usize,
}

/// A classified portrait.
#[derive(Debug, Clone, PartialEq)]
pub struct Portrait {
    pub points: Vec<(f64, f64)>,
    /// Cluster index of each point, in input order.
    pub labels: Vec<usize>,
    pub clusters: Vec<Cluster>,
    pub class: PortraitClass,
}

fn chebyshev(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

/// Greedy first-fit clustering: each point joins the first existing
/// cluster whose running-mean center is within `tol` (Chebyshev), else
/// founds a new one. Deterministic in input order. Note this is *not*
/// monotone in `tol` for adversarial clouds — a larger radius can shift
/// the running means enough to split what a smaller radius merged — but it
/// is stable on portraits with genuinely separated structure.
pub fn cluster_points(points: &[(f64, f64)], tol: f64) -> (Vec<Cluster>, Vec<usize>) {
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut labels = Vec::with_capacity(points.len());
    for &p in points {
        let found = clusters
            .iter()
            .position(|cl| chebyshev(p, cl.center) <= tol);
        match found {
            Some(i) => {
                let cl = &mut clusters[i];
                let k = cl.count as f64;
                cl.center.0 += (p.0 - cl.center.0) / (k + 1.0);
                cl.center.1 += (p.1 - cl.center.1) / (k + 1.0);
                cl.count += 1;
                labels.push(i);
            }
            None => {
                labels.push(clusters.len());
                clusters.push(Cluster {
                    center: p,
                    count: 1,
                });
            }
        }
    }
    (clusters, labels)
}

/// Largest over median consecutive gap along the angular ordering of the
/// centers around their centroid (wrap gap included). Near 1 for evenly
/// filled loops, large when the "loop" has holes. Infinite for fewer than
/// three centers.
pub fn loop_gap_statistic(centers: &[(f64, f64)]) -> f64 {
    if centers.len() < 3 {
        return f64::INFINITY;
    }
    let n = centers.len() as f64;
    let cx = centers.iter().map(|c| c.0).sum::<f64>() / n;
    let cy = centers.iter().map(|c| c.1).sum::<f64>() / n;
    let mut ordered: Vec<(f64, f64)> = centers.to_vec();
    ordered.sort_by(|a, b| {
        let ta = (a.1 - cy).atan2(a.0 - cx);
        let tb = (b.1 - cy).atan2(b.0 - cx);
        ta.partial_cmp(&tb).expect("finite angles")
    });
    let mut gaps: Vec<f64> = ordered
        .windows(2)
        .map(|w| ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt())
        .collect();
    let first = ordered[0];
    let last = ordered[ordered.len() - 1];
    gaps.push(((first.0 - last.0).powi(2) + (first.1 - last.1).powi(2)).sqrt());
    let max = gaps.iter().fold(0.0f64, |a, g| a.max(*g));
    gaps.sort_by(|a, b| a.partial_cmp(b).expect("finite gaps"));
    let mid = gaps.len() / 2;
    let median = if gaps.len() % 2 == 1 {
        gaps[mid]
    } else {
        0.5 * (gaps[mid - 1] + gaps[mid])
    };
    if median == 0.0 {
        return f64::INFINITY;
    }
    max / median
}

fn is_periodic_visit(n: usize, clusters: &[Cluster], labels: &[usize]) -> bool {
    let k = clusters.len();
    if k == 0 || 2 * k > n {
        return false;
    }
    let lo = n / k;
    let hi = lo + usize::from(n % k != 0);
    if !clusters.iter().all(|c| c.count == lo || c.count == hi) {
        return false;
    }
    (0..n - k).all(|i| labels[i] == labels[i + k])
}

/// Classify a point sequence. The periodic test requires the full visit
/// structure (at most `n/2` centers, balanced counts, and a `k`-periodic
/// label sequence), which screens out accidental divisibility; failing
/// that, the loop-gap statistic of the centers separates quasiperiodic
/// sections from chaotic scatter.
pub fn classify_points(points: &[(f64, f64)], cfg: &ClassifyConfig) -> Portrait {
    let tol = cfg.cluster_tol.resolve(points);
    let (clusters, labels) = cluster_points(points, tol);
    let n = points.len();
    let class = if n < cfg.min_points {
        PortraitClass::Unclassifiable
    } else if is_periodic_visit(n, &clusters, &labels) {
        PortraitClass::Periodic(clusters.len())
    } else {
        let centers: Vec<(f64, f64)> = clusters.iter().map(|c| c.center).collect();
        if loop_gap_statistic(&centers) < cfg.loop_gap_ratio {
            PortraitClass::Quasiperiodic
        } else {
            PortraitClass::Chaotic
        }
    };
    Portrait {
        points: points.to_vec(),
        labels,
        clusters,
        class,
    }
}

/// Classify a recorded map orbit; a diverged run is [`PortraitClass::Divergent`]
/// regardless of what the recorded prefix looks like (the clusters are
/// still computed for inspection).
pub fn classify_orbit(orbit: &Orbit, cfg: &ClassifyConfig) -> Portrait {
    let mut portrait = classify_points(&orbit.points(), cfg);
    if matches!(orbit.status, OrbitStatus::Diverged { .. }) {
        portrait.class = PortraitClass::Divergent;
    }
    portrait
}

/// Test whether a state is an extended elliptic section: positive energy
/// and portrait points lying on an origin-centered ellipse
/// `a psi^2 + b psi Z + c Z^2 = 1` (least-squares residual below `rms_tol`
/// after scaling the points to unit size, discriminant `b^2 - 4ac < 0`,
/// `a, c > 0`). Localized states fail the fit; uniform states degenerate
/// and are rejected.
pub fn bloch_check_with(wave: &LatticeWave, e: f64, rms_tol: f64) -> bool {
    if !(e > 0.0) {
        return false;
    }
    let pts = phase_function(wave);
    if pts.len() < 3 {
        return false;
    }
    let scale = pts
        .iter()
        .fold(0.0f64, |a, (x, y)| a.max(x.abs()).max(y.abs()));
    if scale == 0.0 {
        return false;
    }
    // Normal equations for [a, b, c] over the basis (x^2, xy, y^2).
    let mut m = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for &(px, py) in &pts {
        let (x, y) = (px / scale, py / scale);
        let u = [x * x, x * y, y * y];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] += u[r] * u[c];
            }
            rhs[r] += u[r];
        }
    }
    let coef = match solve3(&mut m, &mut rhs) {
        Some(c) => c,
        None => return false, // degenerate cloud (uniform state, collinear data)
    };
    let mut sq_sum = 0.0;
    for &(px, py) in &pts {
        let (x, y) = (px / scale, py / scale);
        let d = coef[0] * x * x + coef[1] * x * y + coef[2] * y * y - 1.0;
        sq_sum += d * d;
    }
    let rms = (sq_sum / pts.len() as f64).sqrt();
    let elliptic = coef[1] * coef[1] - 4.0 * coef[0] * coef[2] < 0.0;
    rms < rms_tol && elliptic && coef[0] > 0.0 && coef[2] > 0.0
}

/// [`bloch_check_with`] at the standard fit tolerance `1e-6`.
pub fn bloch_check(wave: &LatticeWave, e: f64) -> bool {
    bloch_check_with(wave, e, 1e-6)
}

/// Tiny dense solve with partial pivoting; `None` on a degenerate system.
fn solve3(m: &mut [[f64; 3]; 3], rhs: &mut [f64; 3]) -> Option<[f64; 3]> {
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |a, v| a.max(v.abs()));
    for col in 0..3 {
        let pivot_row = (col..3)
            .max_by(|&r1, &r2| {
                m[r1][col]
                    .abs()
                    .partial_cmp(&m[r2][col].abs())
                    .expect("finite")
            })
            .expect("nonempty");
        if m[pivot_row][col].abs() < 1e-12 * scale {
            return None;
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        for r in col + 1..3 {
            let f = m[r][col] / m[col][col];
            for k in col..3 {
                m[r][k] -= f * m[col][k];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = [0.0f64; 3];
    for col in (0..3).rev() {
        let mut acc = rhs[col];
        for k in col + 1..3 {
            acc -= m[col][k] * x[k];
        }
        x[col] = acc / m[col][col];
    }
    Some(x)
}
