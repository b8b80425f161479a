//! Helix classification from harmonic profiles, axis reconstruction and
//! the brute-force axis search used as an independent check.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frenet::FrenetApparatus;
use crate::harmonic::{expect_kind, fit_g_constant, functions_g, HarmonicProfile, ProfileKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HelixKind {
    Inclined,
    V2Slant,
    VnSlant,
}

impl HelixKind {
    pub const ALL: [HelixKind; 3] = [HelixKind::Inclined, HelixKind::V2Slant, HelixKind::VnSlant];

    pub fn name(self) -> &'static str {
        match self {
            HelixKind::Inclined => "inclined",
            HelixKind::V2Slant => "v2_slant",
            HelixKind::VnSlant => "vn_slant",
        }
    }

    pub fn from_name(s: &str) -> Option<HelixKind> {
        match s {
            "inclined" => Some(HelixKind::Inclined),
            "v2" | "v2_slant" => Some(HelixKind::V2Slant),
            "vn" | "vn_slant" => Some(HelixKind::VnSlant),
            _ => None,
        }
    }

    /// Frame vector (1-based) that makes a constant angle with the axis.
    pub fn frame_index(self, n: usize) -> usize {
        match self {
            HelixKind::Inclined => 1,
            HelixKind::V2Slant => 2,
            HelixKind::VnSlant => n,
        }
    }

    pub fn profile_kind(self) -> ProfileKind {
        match self {
            HelixKind::Inclined => ProfileKind::H,
            HelixKind::V2Slant => ProfileKind::G,
            HelixKind::VnSlant => ProfileKind::Hstar,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Algebraic,
    Differential,
}

impl Method {
    pub const BOTH: [Method; 2] = [Method::Algebraic, Method::Differential];
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Bound on normalized spreads and residuals.
    pub constancy: f64,
    /// Minimum `|last function|` for the nonzero condition.
    pub nonzero: f64,
    /// Minimum `|cos φ|`, keeping `φ` away from `π/2`.
    pub angle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            constancy: 1e-6,
            nonzero: 1e-8,
            angle: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("constancy", self.constancy), ("nonzero", self.nonzero), ("angle", self.angle)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} tolerance must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictDetails {
    pub sumsq_mean: f64,
    pub sumsq_min: f64,
    pub sumsq_max: f64,
    /// `max |differential condition|` before normalization.
    pub differential_max: f64,
    /// Grid index where `|last function|` is smallest.
    pub margin_index: usize,
    /// Grid index of the worst differential residual.
    pub differential_index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit_residual: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub kind: HelixKind,
    pub method: Method,
    pub is_helix: bool,
    pub constancy_residual: f64,
    pub nonzero_margin: f64,
    pub details: VerdictDetails,
}

/// `(max - min) / max(1, |mean|)`.
pub fn normalized_spread(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (hi - lo) / mean.abs().max(1.0)
}

fn argmax(values: impl Iterator<Item = f64>) -> (usize, f64) {
    values
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best })
}

fn judge(kind: HelixKind, prof: &HarmonicProfile, method: Method, tol: &Tolerances) -> Verdict {
    let last = prof.last_index();
    let (margin_index, neg_margin) = argmax((0..prof.len()).map(|p| -prof.value(p, last).abs()));
    let (differential_index, differential_max) = argmax(prof.differential.iter().map(|d| d.abs()));
    let dscale = (0..prof.len())
        .map(|p| prof.dvalue(p, last).abs())
        .fold(1.0, f64::max);
    let constancy_residual = match method {
        Method::Algebraic => normalized_spread(&prof.sumsq),
        Method::Differential => differential_max / dscale,
    };
    let nonzero_margin = -neg_margin;
    let (lo, hi) = prof
        .sumsq
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    Verdict {
        kind,
        method,
        is_helix: constancy_residual <= tol.constancy && nonzero_margin >= tol.nonzero,
        constancy_residual,
        nonzero_margin,
        details: VerdictDetails {
            sumsq_mean: prof.sumsq.iter().sum::<f64>() / prof.len() as f64,
            sumsq_min: lo,
            sumsq_max: hi,
            differential_max,
            margin_index,
            differential_index,
            c0: prof.c0,
            fit_residual: None,
        },
    }
}

/// Inclined-curve test on an `H` profile: constant `Σ H_i²` (algebraic) or
/// `H_{n-2}' = -k_{n-1} H_{n-3}` (differential), with `H_{n-2} ≠ 0`.
pub fn classify_inclined(prof: &HarmonicProfile, method: Method, tol: &Tolerances) -> Result<Verdict> {
    expect_kind(prof, ProfileKind::H)?;
    Ok(judge(HelixKind::Inclined, prof, method, tol))
}

/// V_n-slant test on an `H*` profile: constant `Σ H*_i²` or
/// `H*_{n-2}' = k_1 H*_{n-3}`, with `H*_{n-2} ≠ 0`.
pub fn classify_vn_slant(prof: &HarmonicProfile, method: Method, tol: &Tolerances) -> Result<Verdict> {
    expect_kind(prof, ProfileKind::Hstar)?;
    Ok(judge(HelixKind::VnSlant, prof, method, tol))
}

/// V_2-slant test on a `G` profile: constant `Σ G_i²` or
/// `G_n' = -k_{n-1} G_{n-1}`, with `G_n ≠ 0`.
pub fn classify_g(prof: &HarmonicProfile, method: Method, tol: &Tolerances) -> Result<Verdict> {
    expect_kind(prof, ProfileKind::G)?;
    Ok(judge(HelixKind::V2Slant, prof, method, tol))
}

/// V_2-slant test at the fitted integration constant of `G_1`.
pub fn classify_v2_slant(app: &FrenetApparatus, method: Method, tol: &Tolerances) -> Result<Verdict> {
    let (c0, residual) = fit_g_constant(app)?;
    let prof = functions_g(app, c0)?;
    let mut v = classify_g(&prof, method, tol)?;
    v.details.fit_residual = Some(residual);
    Ok(v)
}

/// Verdict of the requested kind from a matching profile.
pub fn classify(kind: HelixKind, prof: &HarmonicProfile, method: Method, tol: &Tolerances) -> Result<Verdict> {
    match kind {
        HelixKind::Inclined => classify_inclined(prof, method, tol),
        HelixKind::V2Slant => classify_g(prof, method, tol),
        HelixKind::VnSlant => classify_vn_slant(prof, method, tol),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxisVerification {
    /// Frame index `j` tested.
    pub frame_index: usize,
    pub mean: f64,
    pub spread: f64,
    pub min: f64,
    pub max: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisSource {
    Reconstructed,
    BruteForce,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxisEstimate {
    #[serde(rename = "X")]
    pub x: Vec<f64>,
    pub phi: f64,
    pub source: AxisSource,
    pub verification: AxisVerification,
    /// `max_p |X_p - X|` over the pointwise reconstructions.
    pub max_deviation: f64,
    /// Finite-difference estimate of `max |dX/ds|` along the grid.
    pub max_dx_ds: f64,
    /// `||X| - 1|`.
    pub norm_error: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Flips `x` so its largest-magnitude coordinate is positive, ties going
/// to the lowest index.
pub fn canonicalize(x: &mut [f64]) {
    let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(v) = x.iter().find(|v| v.abs() >= big - 1e-12) {
        if *v < 0.0 {
            x.iter_mut().for_each(|c| *c = -*c);
        }
    }
}

/// Statistics of `<V_j, X>` along the grid.
pub fn verify_axis(app: &FrenetApparatus, x: &[f64], j: usize, tol: &Tolerances) -> AxisVerification {
    let c: Vec<f64> = app.samples().iter().map(|p| dot(p.v(j), x)).collect();
    let (min, max) = c
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let mean = c.iter().sum::<f64>() / c.len() as f64;
    let spread = max - min;
    AxisVerification {
        frame_index: j,
        mean,
        spread,
        min,
        max,
        pass: spread <= tol.constancy && mean.abs() >= tol.angle,
    }
}

/// Axis assembled from the frame and the harmonic functions of a positive
/// verdict, averaged over the grid.
pub fn reconstruct_axis(
    kind: HelixKind,
    app: &FrenetApparatus,
    prof: &HarmonicProfile,
    verdict: &Verdict,
    tol: &Tolerances,
) -> Result<AxisEstimate> {
    if verdict.kind != kind {
        return Err(Error::KindMismatch {
            expected: kind.name(),
            found: verdict.kind.name(),
        });
    }
    expect_kind(prof, kind.profile_kind())?;
    if !verdict.is_helix {
        return Err(Error::NotAHelix);
    }
    let n = app.dim();
    let sigma = prof.sumsq.iter().sum::<f64>() / prof.len() as f64;
    let cos_phi = match kind {
        HelixKind::Inclined | HelixKind::VnSlant => 1.0 / (1.0 + sigma).sqrt(),
        HelixKind::V2Slant => 1.0 / sigma.sqrt(),
    };
    let pointwise: Vec<Vec<f64>> = app
        .samples()
        .iter()
        .enumerate()
        .map(|(p, q)| {
            let mut x = vec![0.0; n];
            let mut add = |w: f64, v: &[f64]| x.iter_mut().zip(v).for_each(|(a, b)| *a += cos_phi * w * b);
            match kind {
                HelixKind::Inclined => {
                    add(1.0, q.v(1));
                    for i in 1..=n - 2 {
                        add(prof.value(p, i), q.v(i + 2));
                    }
                }
                HelixKind::VnSlant => {
                    add(1.0, q.v(n));
                    for i in 1..=n - 2 {
                        add(prof.value(p, i), q.v(n - i - 1));
                    }
                }
                HelixKind::V2Slant => {
                    for i in 1..=n {
                        add(prof.value(p, i), q.v(i));
                    }
                }
            }
            x
        })
        .collect();
    let count = pointwise.len() as f64;
    let mut x: Vec<f64> = (0..n)
        .map(|c| pointwise.iter().map(|v| v[c]).sum::<f64>() / count)
        .collect();
    let r = norm(&x);
    x.iter_mut().for_each(|c| *c /= r);
    let before = x.clone();
    canonicalize(&mut x);
    let sign = if x == before { 1.0 } else { -1.0 };

    let max_deviation = pointwise
        .iter()
        .map(|v| v.iter().zip(&x).map(|(a, b)| (sign * a - b).powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let s = app.arclength();
    let max_dx_ds = pointwise
        .windows(2)
        .zip(s.windows(2))
        .map(|(v, s)| {
            let d: Vec<f64> = v[1].iter().zip(&v[0]).map(|(a, b)| a - b).collect();
            norm(&d) / (s[1] - s[0])
        })
        .fold(0.0, f64::max);

    let verification = verify_axis(app, &x, kind.frame_index(n), tol);
    Ok(AxisEstimate {
        phi: verification.mean.clamp(-1.0, 1.0).acos(),
        norm_error: (norm(&x) - 1.0).abs(),
        x,
        source: AxisSource::Reconstructed,
        verification,
        max_deviation,
        max_dx_ds,
    })
}

/// Default limit on the number of sphere-grid candidates.
pub const DEFAULT_BUDGET: u128 = 50_000_000;

fn covariance(app: &FrenetApparatus, j: usize) -> Vec<Vec<f64>> {
    let n = app.dim();
    let count = app.len() as f64;
    let mean: Vec<f64> = (0..n)
        .map(|c| app.samples().iter().map(|p| p.v(j)[c]).sum::<f64>() / count)
        .collect();
    let mut cov = vec![vec![0.0; n]; n];
    for p in app.samples() {
        let d: Vec<f64> = p.v(j).iter().zip(&mean).map(|(a, b)| a - b).collect();
        for r in 0..n {
            for c in 0..n {
                cov[r][c] += d[r] * d[c] / count;
            }
        }
    }
    cov
}

fn quad_form(cov: &[Vec<f64>], a: &[f64], b: &[f64]) -> f64 {
    cov.iter().zip(a).map(|(row, x)| x * dot(row, b)).sum()
}

/// Candidate `idx` of the sphere grid: a Fibonacci lattice of `R²` points
/// for `n = 3`, a product grid over hyperspherical angles otherwise.
fn candidate(n: usize, resolution: usize, idx: usize) -> Vec<f64> {
    use std::f64::consts::PI;
    if n == 3 {
        let m = resolution * resolution;
        let z = 1.0 - (2 * idx + 1) as f64 / m as f64;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let theta = idx as f64 * PI * (3.0 - 5f64.sqrt());
        return vec![r * theta.cos(), r * theta.sin(), z];
    }
    let mut rest = idx;
    let mut angles = Vec::with_capacity(n - 1);
    for a in 0..n - 1 {
        let i = rest % resolution;
        rest /= resolution;
        angles.push(if a + 2 == n {
            2.0 * PI * i as f64 / resolution as f64
        } else {
            PI * (i as f64 + 0.5) / resolution as f64
        });
    }
    let mut x = vec![0.0; n];
    let mut sin_prod = 1.0;
    for (a, th) in angles.iter().enumerate() {
        x[a] = sin_prod * th.cos();
        sin_prod *= th.sin();
    }
    x[n - 1] = sin_prod;
    x
}

fn lex_cmp(a: &(f64, Vec<f64>), b: &(f64, Vec<f64>)) -> std::cmp::Ordering {
    a.0.total_cmp(&b.0).then_with(|| {
        a.1.iter()
            .zip(&b.1)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    })
}

/// Minimizes `X^T C X` by exact rotations in the planes spanned by `X` and
/// each coordinate direction.
fn refine(cov: &[Vec<f64>], mut x: Vec<f64>) -> Vec<f64> {
    let n = x.len();
    for _ in 0..500 {
        let mut largest = 0.0f64;
        for i in 0..n {
            let mut u: Vec<f64> = (0..n).map(|c| if c == i { 1.0 } else { 0.0 } - x[i] * x[c]).collect();
            let r = norm(&u);
            if r < 1e-12 {
                continue;
            }
            u.iter_mut().for_each(|c| *c /= r);
            let a = quad_form(cov, &x, &x);
            let b = quad_form(cov, &x, &u);
            let c = quad_form(cov, &u, &u);
            let mut th = 0.5 * ((2.0 * b).atan2(a - c) + std::f64::consts::PI);
            if th > std::f64::consts::FRAC_PI_2 {
                th -= std::f64::consts::PI;
            }
            let f = |t: f64| a * t.cos().powi(2) + 2.0 * b * t.sin() * t.cos() + c * t.sin().powi(2);
            if f(th) < a {
                x = x.iter().zip(&u).map(|(p, q)| th.cos() * p + th.sin() * q).collect();
                let r = norm(&x);
                x.iter_mut().for_each(|c| *c /= r);
                largest = largest.max(th.abs());
            }
        }
        if largest < 1e-15 {
            break;
        }
    }
    polish(cov, x)
}

/// Inverse iteration from the descent result. The quadratic form is flat to
/// rounding within about `sqrt(eps)` of the minimizer, so descent alone
/// leaves the direction uncertain at that level; solving with `C` resolves
/// it to working precision.
fn polish(cov: &[Vec<f64>], x: Vec<f64>) -> Vec<f64> {
    let n = x.len();
    let trace: f64 = (0..n).map(|i| cov[i][i]).sum();
    let shift = 1e-14 * trace.max(f64::MIN_POSITIVE);
    let mut y = x.clone();
    for _ in 0..3 {
        let mut a: Vec<Vec<f64>> = cov.to_vec();
        (0..n).for_each(|i| a[i][i] += shift);
        let Some(z) = solve(a, y.clone()) else { return x };
        let r = norm(&z);
        if !r.is_finite() || r == 0.0 {
            return x;
        }
        y = z.iter().map(|v| v / r).collect();
    }
    if quad_form(cov, &y, &y) <= quad_form(cov, &x, &x) {
        y
    } else {
        x
    }
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col] == 0.0 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    for row in (0..n).rev() {
        let acc = b[row] - (row + 1..n).map(|c| a[row][c] * b[c]).sum::<f64>();
        b[row] = acc / a[row][row];
    }
    Some(b)
}

/// Searches a sphere grid for a unit `X` with `<V_j, X>` constant and
/// bounded away from zero. Returns `None` when the best direction fails
/// the constancy or angle tolerance.
pub fn brute_force_axis(
    app: &FrenetApparatus,
    j: usize,
    resolution: usize,
    tol: &Tolerances,
    budget: u128,
) -> Result<Option<AxisEstimate>> {
    let n = app.dim();
    if j == 0 || j > n {
        return Err(Error::InvalidArgument(format!("frame index {j} outside 1..={n}")));
    }
    if resolution < 2 {
        return Err(Error::InvalidArgument("sphere resolution must be at least 2".into()));
    }
    let candidates = (resolution as u128).checked_pow(n as u32 - 1).unwrap_or(u128::MAX);
    if candidates > budget {
        return Err(Error::Budget { candidates, budget });
    }
    let cov = covariance(app, j);
    let best = (0..candidates as usize)
        .into_par_iter()
        .map(|idx| {
            let x = candidate(n, resolution, idx);
            (quad_form(&cov, &x, &x), x)
        })
        .min_by(lex_cmp)
        .unwrap();
    let mut x = refine(&cov, best.1);
    canonicalize(&mut x);
    let verification = verify_axis(app, &x, j, tol);
    if !verification.pass {
        return Ok(None);
    }
    Ok(Some(AxisEstimate {
        phi: verification.mean.clamp(-1.0, 1.0).acos(),
        norm_error: (norm(&x) - 1.0).abs(),
        x,
        source: AxisSource::BruteForce,
        verification,
        max_deviation: 0.0,
        max_dx_ds: 0.0,
    }))
}

/// Angle in radians between two axes, ignoring sign.
pub fn axis_angle(a: &[f64], b: &[f64]) -> f64 {
    (dot(a, b).abs() / (norm(a) * norm(b))).clamp(-1.0, 1.0).acos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frenet::{build_apparatus, FrenetConfig};
    use crate::harmonic::{harmonic_h, harmonic_hstar};
    use crate::synthesize::make_circular_helix;

    fn helix() -> FrenetApparatus {
        build_apparatus(&make_circular_helix(2.0, 1.0).unwrap(), 128, &FrenetConfig::default()).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn helix_is_inclined_with_vertical_axis() {
        let app = helix();
        let tol = Tolerances::default();
        let h = harmonic_h(&app).unwrap();
        for m in Method::BOTH {
            let v = classify_inclined(&h, m, &tol).unwrap();
            assert!(v.is_helix, "{m:?}");
            assert!((v.nonzero_margin - 2.0).abs() < 1e-12);
        }
        let v = classify_inclined(&h, Method::Algebraic, &tol).unwrap();
        assert!((v.details.sumsq_mean - 4.0).abs() < 1e-12);
        let axis = reconstruct_axis(HelixKind::Inclined, &app, &h, &v, &tol).unwrap();
        assert!(close(&axis.x, &[0.0, 0.0, 1.0], 1e-12), "{:?}", axis.x);
        assert!((axis.phi.cos() - 1.0 / 5f64.sqrt()).abs() < 1e-12);
        assert!(axis.verification.pass && axis.max_deviation < 1e-12 && axis.max_dx_ds < 1e-10);
    }

    #[test]
    fn helix_is_vn_slant() {
        let app = helix();
        let tol = Tolerances::default();
        let h = harmonic_hstar(&app).unwrap();
        let v = classify_vn_slant(&h, Method::Differential, &tol).unwrap();
        assert!(v.is_helix);
        let v = classify_vn_slant(&h, Method::Algebraic, &tol).unwrap();
        assert!((v.details.sumsq_mean - 0.25).abs() < 1e-12);
        let axis = reconstruct_axis(HelixKind::VnSlant, &app, &h, &v, &tol).unwrap();
        assert!(close(&axis.x, &[0.0, 0.0, 1.0], 1e-12));
        assert!((axis.phi.cos() - 2.0 / 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn helix_is_not_v2_slant() {
        let app = helix();
        for m in Method::BOTH {
            assert!(!classify_v2_slant(&app, m, &Tolerances::default()).unwrap().is_helix);
        }
    }

    #[test]
    fn verify_axis_cases() {
        let app = helix();
        let tol = Tolerances::default();
        let v = verify_axis(&app, &[0.0, 0.0, 1.0], 1, &tol);
        assert!(v.pass && (v.mean - 1.0 / 5f64.sqrt()).abs() < 1e-12 && v.spread < 1e-10);
        let v = verify_axis(&app, &[0.0, 0.0, 1.0], 2, &tol);
        assert!(!v.pass && v.mean.abs() < 1e-12);
        let v = verify_axis(&app, &[1.0, 0.0, 0.0], 1, &tol);
        assert!(!v.pass && v.spread > 1.0);
    }

    #[test]
    fn mismatches_and_preconditions() {
        let app = helix();
        let tol = Tolerances::default();
        let h = harmonic_h(&app).unwrap();
        assert!(matches!(
            classify_vn_slant(&h, Method::Algebraic, &tol),
            Err(Error::KindMismatch { .. })
        ));
        let mut v = classify_inclined(&h, Method::Algebraic, &tol).unwrap();
        v.is_helix = false;
        assert!(matches!(
            reconstruct_axis(HelixKind::Inclined, &app, &h, &v, &tol),
            Err(Error::NotAHelix)
        ));
    }

    #[test]
    fn brute_force_on_helix() {
        let app = helix();
        let tol = Tolerances::default();
        for j in [1, 3] {
            let a = brute_force_axis(&app, j, 32, &tol, DEFAULT_BUDGET).unwrap().unwrap();
            assert!(close(&a.x, &[0.0, 0.0, 1.0], 1e-4), "{j}: {:?}", a.x);
        }
        // the normal is horizontal, so the only constant-angle direction is at π/2
        assert!(brute_force_axis(&app, 2, 32, &tol, DEFAULT_BUDGET).unwrap().is_none());
        assert!(matches!(
            brute_force_axis(&app, 1, 10_000, &tol, DEFAULT_BUDGET),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn canonical_sign() {
        let mut x = vec![0.3, -0.9, 0.1];
        canonicalize(&mut x);
        assert_eq!(x, vec![-0.3, 0.9, -0.1]);
        let mut x = vec![-0.5, 0.5, 0.0];
        canonicalize(&mut x);
        assert_eq!(x, vec![0.5, -0.5, 0.0]);
    }

    #[test]
    fn sphere_grids_are_unit() {
        for n in 3..=5 {
            for idx in [0, 7, 100, 15 * 15 - 1] {
                let x = candidate(n, 15, idx);
                assert!((norm(&x) - 1.0).abs() < 1e-12);
            }
        }
    }
}
