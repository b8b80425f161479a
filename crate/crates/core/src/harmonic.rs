//! Harmonic curvature systems along a Frenet apparatus.
//!
//! Three families are evaluated pointwise: `H_i` (inclined curves), `H_i*`
//! (V_n-slant helices) and `G_i` (V_2-slant helices). Each recursion needs
//! derivatives of the previous term, which are taken from the curvature
//! jets, so nothing here differentiates a grid numerically. The only
//! quadrature is the antiderivative of `k_1` inside `G_1`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Jet;
use crate::frenet::{FrenetApparatus, FrenetSample};
use crate::quad::cumulative_simpson;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ProfileKind {
    H,
    Hstar,
    G,
}

impl ProfileKind {
    pub fn name(self) -> &'static str {
        match self {
            ProfileKind::H => "H",
            ProfileKind::Hstar => "Hstar",
            ProfileKind::G => "G",
        }
    }
}

/// One harmonic system sampled along the grid.
#[derive(Clone, Debug)]
pub struct HarmonicProfile {
    pub kind: ProfileKind,
    pub n: usize,
    pub s: Vec<f64>,
    /// `values[p]` lists the functions at grid point `p`, starting at
    /// index [`HarmonicProfile::first_index`].
    pub values: Vec<Vec<f64>>,
    /// Arclength derivatives matching `values`.
    pub dvalues: Vec<Vec<f64>>,
    /// `H_1..H_{n-2}`, `H*_1..H*_{n-2}` or `G_1..G_n` summed in squares.
    pub sumsq: Vec<f64>,
    /// Left side minus right side of the differential characterization:
    /// `H_{n-2}' + k_{n-1} H_{n-3}`, `H*_{n-2}' - k_1 H*_{n-3}` or
    /// `G_n' + k_{n-1} G_{n-1}`.
    pub differential: Vec<f64>,
    /// Integration constant of `G_1`.
    pub c0: Option<f64>,
}

impl HarmonicProfile {
    /// Index of the first stored function: 0 for `H` and `H*`, 1 for `G`.
    pub fn first_index(&self) -> usize {
        match self.kind {
            ProfileKind::H | ProfileKind::Hstar => 0,
            ProfileKind::G => 1,
        }
    }

    /// Index of the last stored function.
    pub fn last_index(&self) -> usize {
        match self.kind {
            ProfileKind::H | ProfileKind::Hstar => self.n - 2,
            ProfileKind::G => self.n,
        }
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Function `i` at grid point `p`.
    pub fn value(&self, p: usize, i: usize) -> f64 {
        self.values[p][i - self.first_index()]
    }

    pub fn dvalue(&self, p: usize, i: usize) -> f64 {
        self.dvalues[p][i - self.first_index()]
    }

    /// Function `i` over the whole grid.
    pub fn series(&self, i: usize) -> Vec<f64> {
        (0..self.len()).map(|p| self.value(p, i)).collect()
    }
}

fn depth(name: String, j: &Jet) -> Result<Jet> {
    j.try_derivative(&name)
}

fn h_system(p: &FrenetSample) -> Result<Vec<Jet>> {
    let n = p.dim();
    let k = |i: usize| p.k(i);
    let mut h = vec![Jet::constant(0.0, k(1).order()), k(1).try_div(k(2))?];
    for i in 2..=n - 2 {
        let d = depth(format!("H_{}", i - 1), &h[i - 1])?;
        h.push((d + k(i) * &h[i - 2]).try_div(k(i + 1))?);
    }
    Ok(h)
}

fn hstar_system(p: &FrenetSample) -> Result<Vec<Jet>> {
    let n = p.dim();
    let k = |i: usize| p.k(i);
    let mut h = vec![Jet::constant(0.0, k(1).order()), k(n - 1).try_div(k(n - 2))?];
    for i in 2..=n - 2 {
        let d = depth(format!("H*_{}", i - 1), &h[i - 1])?;
        h.push((k(n - i) * &h[i - 2] - d).try_div(k(n - i - 1))?);
    }
    Ok(h)
}

/// `G_1..G_n` at one point given the value of `G_1` there. Index 0 of the
/// result is `G_1`.
fn g_system(p: &FrenetSample, g1: f64) -> Result<Vec<Jet>> {
    let n = p.dim();
    let k = |i: usize| p.k(i);
    let mut d = vec![g1];
    d.extend_from_slice(k(1).derivatives());
    let first = Jet::from_derivatives(d);
    let one = Jet::constant(1.0, first.order());
    let third = k(1).try_div(k(2))? * &first;
    let mut g = vec![first, one, third];
    for i in 4..=n {
        let d = depth(format!("G_{}", i - 1), &g[i - 2])?;
        g.push((k(i - 2) * &g[i - 3] + d).try_div(k(i - 1))?);
    }
    Ok(g)
}

struct Point {
    values: Vec<f64>,
    dvalues: Vec<f64>,
    sumsq: f64,
    differential: f64,
}

fn assemble(kind: ProfileKind, p: &FrenetSample, jets: &[Jet]) -> Result<Point> {
    let n = p.dim();
    let values: Vec<f64> = jets.iter().map(Jet::value).collect();
    let mut dvalues = Vec::with_capacity(jets.len());
    for (idx, j) in jets.iter().enumerate() {
        let name = match kind {
            ProfileKind::H => format!("H_{idx}"),
            ProfileKind::Hstar => format!("H*_{idx}"),
            ProfileKind::G => format!("G_{}", idx + 1),
        };
        dvalues.push(j.try_derivative(&name)?.value());
    }
    let (sumsq, differential) = match kind {
        ProfileKind::H => (
            values[1..].iter().map(|v| v * v).sum(),
            dvalues[n - 2] + p.k(n - 1).value() * values[n - 3],
        ),
        ProfileKind::Hstar => (
            values[1..].iter().map(|v| v * v).sum(),
            dvalues[n - 2] - p.k(1).value() * values[n - 3],
        ),
        ProfileKind::G => (
            values.iter().map(|v| v * v).sum(),
            dvalues[n - 1] + p.k(n - 1).value() * values[n - 2],
        ),
    };
    Ok(Point {
        values,
        dvalues,
        sumsq,
        differential,
    })
}

fn collect(kind: ProfileKind, app: &FrenetApparatus, points: Vec<Result<Point>>, c0: Option<f64>) -> Result<HarmonicProfile> {
    let points = points
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| e.at_grid(i)))
        .collect::<Result<Vec<_>>>()?;
    let mut prof = HarmonicProfile {
        kind,
        n: app.dim(),
        s: app.arclength(),
        values: Vec::with_capacity(points.len()),
        dvalues: Vec::with_capacity(points.len()),
        sumsq: Vec::with_capacity(points.len()),
        differential: Vec::with_capacity(points.len()),
        c0,
    };
    for p in points {
        prof.values.push(p.values);
        prof.dvalues.push(p.dvalues);
        prof.sumsq.push(p.sumsq);
        prof.differential.push(p.differential);
    }
    Ok(prof)
}

/// `H_0 = 0`, `H_1 = k_1/k_2`, `H_i = (H_{i-1}' + k_i H_{i-2}) / k_{i+1}`.
pub fn harmonic_h(app: &FrenetApparatus) -> Result<HarmonicProfile> {
    let points = app
        .samples()
        .par_iter()
        .map(|p| h_system(p).and_then(|j| assemble(ProfileKind::H, p, &j)))
        .collect();
    collect(ProfileKind::H, app, points, None)
}

/// `H*_0 = 0`, `H*_1 = k_{n-1}/k_{n-2}`,
/// `H*_i = (k_{n-i} H*_{i-2} - H*_{i-1}') / k_{n-i-1}`.
pub fn harmonic_hstar(app: &FrenetApparatus) -> Result<HarmonicProfile> {
    let points = app
        .samples()
        .par_iter()
        .map(|p| hstar_system(p).and_then(|j| assemble(ProfileKind::Hstar, p, &j)))
        .collect();
    collect(ProfileKind::Hstar, app, points, None)
}

/// `∫ k_1 ds` from the first grid point, by cumulative Simpson in `t`.
pub fn k1_antiderivative(app: &FrenetApparatus) -> Vec<f64> {
    let f: Vec<f64> = app
        .samples()
        .iter()
        .map(|p| p.k(1).value() * p.speed.value())
        .collect();
    cumulative_simpson(&f, app.step())
}

/// `G_1 = c0 + ∫k_1`, `G_2 = 1`, `G_3 = (k_1/k_2) G_1`,
/// `G_i = (k_{i-2} G_{i-2} + G_{i-1}') / k_{i-1}`.
pub fn functions_g(app: &FrenetApparatus, c0: f64) -> Result<HarmonicProfile> {
    let integral = k1_antiderivative(app);
    let points = app
        .samples()
        .par_iter()
        .zip(integral.par_iter())
        .map(|(p, &g)| g_system(p, c0 + g).and_then(|j| assemble(ProfileKind::G, p, &j)))
        .collect();
    collect(ProfileKind::G, app, points, Some(c0))
}

/// Variance of `values` divided by `max(1, mean)^2`.
pub fn normalized_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    var / mean.abs().max(1.0).powi(2)
}

/// Integration constant of `G_1` minimizing the normalized variance of
/// `Σ G_i²` over the grid, with the variance achieved there.
///
/// Each `G_i` is affine in `c0`, so the objective is evaluated from two
/// recursion passes. A coarse scan over `±(max|∫k_1| + 10)` picks the basin
/// and golden-section search refines it to `1e-10`.
pub fn fit_g_constant(app: &FrenetApparatus) -> Result<(f64, f64)> {
    let zero = functions_g(app, 0.0)?;
    let one = functions_g(app, 1.0)?;
    let slope: Vec<Vec<f64>> = zero
        .values
        .iter()
        .zip(&one.values)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| y - x).collect())
        .collect();
    let objective = |c0: f64| {
        let sums: Vec<f64> = zero
            .values
            .iter()
            .zip(&slope)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x + c0 * y).powi(2)).sum())
            .collect();
        normalized_variance(&sums)
    };

    let reach = k1_antiderivative(app).iter().fold(0.0f64, |m, v| m.max(v.abs())) + 10.0;
    const SCAN: usize = 2000;
    let step = 2.0 * reach / SCAN as f64;
    let best = (0..=SCAN)
        .map(|i| -reach + i as f64 * step)
        .map(|c| (objective(c), c))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap()
        .1;

    let (mut a, mut b) = ((best - step).max(-reach), (best + step).min(reach));
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    while b - a > 1e-10 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = objective(x2);
        }
    }
    let c0 = 0.5 * (a + b);
    Ok((c0, objective(c0)))
}

/// Profile of the requested kind; `G` uses the fitted integration constant.
pub fn profile(app: &FrenetApparatus, kind: ProfileKind) -> Result<HarmonicProfile> {
    match kind {
        ProfileKind::H => harmonic_h(app),
        ProfileKind::Hstar => harmonic_hstar(app),
        ProfileKind::G => functions_g(app, fit_g_constant(app)?.0),
    }
}

pub(crate) fn expect_kind(p: &HarmonicProfile, kind: ProfileKind) -> Result<()> {
    if p.kind == kind {
        Ok(())
    } else {
        Err(Error::KindMismatch {
            expected: kind.name(),
            found: p.kind.name(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frenet::{build_apparatus, FrenetConfig};
    use crate::synthesize::{integrate_frenet, make_circular_helix, CurvaturePrescription};

    fn constant(k: &[&str]) -> FrenetApparatus {
        let p = CurvaturePrescription::new(k, (0.0, 2.0), 1e-2).unwrap().with_samples(33);
        integrate_frenet(&p).unwrap().1
    }

    fn helix() -> FrenetApparatus {
        build_apparatus(&make_circular_helix(2.0, 1.0).unwrap(), 64, &FrenetConfig::default()).unwrap()
    }

    fn all_close(prof: &HarmonicProfile, i: usize, want: f64) {
        for (p, v) in prof.series(i).iter().enumerate() {
            assert!((v - want).abs() < 1e-12, "index {i} at {p}: {v} vs {want}");
        }
    }

    #[test]
    fn h_constant_curvatures() {
        let h = harmonic_h(&constant(&["1", "2", "4"])).unwrap();
        all_close(&h, 0, 0.0);
        all_close(&h, 1, 0.5);
        all_close(&h, 2, 0.0);
        let h = harmonic_h(&constant(&["1", "2", "4", "8"])).unwrap();
        all_close(&h, 3, 0.25);
        assert_eq!(h.last_index(), 3);
    }

    #[test]
    fn hstar_constant_curvatures() {
        let h = harmonic_hstar(&constant(&["1", "2", "4"])).unwrap();
        all_close(&h, 1, 2.0);
        all_close(&h, 2, 0.0);
        // H*_1 = k_4/k_3 = 0.5, H*_2 = 0, H*_3 = (k_2 H*_1 - 0)/k_1 = 4 * 0.5 / 8
        let h = harmonic_hstar(&constant(&["8", "4", "2", "1"])).unwrap();
        all_close(&h, 1, 0.5);
        all_close(&h, 3, 0.25);
    }

    #[test]
    fn helix_n3_closure() {
        let app = helix();
        let h = harmonic_h(&app).unwrap();
        let hs = harmonic_hstar(&app).unwrap();
        all_close(&h, 1, 2.0);
        all_close(&hs, 1, 0.5);
        assert_eq!(h.values[0].len(), 2);
        for p in 0..h.len() {
            assert!((h.sumsq[p] - 4.0).abs() < 1e-12);
            assert!(h.differential[p].abs() < 1e-12);
        }
    }

    #[test]
    fn g_unit_curvatures() {
        let app = constant(&["1", "1", "1"]);
        let g = functions_g(&app, 0.0).unwrap();
        for p in 0..g.len() {
            let s = g.s[p];
            assert!((g.value(p, 1) - s).abs() < 1e-12);
            assert_eq!(g.value(p, 2), 1.0);
            assert_eq!(g.dvalue(p, 2), 0.0);
            assert!((g.value(p, 3) - s).abs() < 1e-12);
            assert!((g.value(p, 4) - 2.0).abs() < 1e-12);
        }
        let g = functions_g(&app, 5.0).unwrap();
        assert_eq!(g.value(0, 1), 5.0);
        assert_eq!(g.c0, Some(5.0));
    }

    #[test]
    fn kind_mismatch() {
        let h = harmonic_h(&helix()).unwrap();
        assert!(matches!(
            expect_kind(&h, ProfileKind::Hstar),
            Err(Error::KindMismatch { expected: "Hstar", found: "H" })
        ));
    }

    #[test]
    fn helix_has_no_g_constant() {
        let (_, residual) = fit_g_constant(&helix()).unwrap();
        assert!(residual > 1e-2, "{residual}");
    }

    #[test]
    fn jet_depth_is_reported() {
        // sampled curves keep order-7 jets; k_4 of an E^5 curve has order 2,
        // H*_3 needs three derivatives of k_4
        let p = CurvaturePrescription::new(&["1", "1.5", "1.2", "0.8 + 0.1*s"], (0.0, 3.0), 1e-3)
            .unwrap()
            .with_samples(257);
        let (spec, _) = integrate_frenet(&p).unwrap();
        let app = build_apparatus(&spec, 64, &FrenetConfig::default()).unwrap();
        assert_eq!(app.samples()[0].k(4).order(), 2);
        assert!(harmonic_h(&app).is_ok());
        assert!(matches!(harmonic_hstar(&app), Err(Error::AtGrid { .. })));
        let err = harmonic_hstar(&app).unwrap_err();
        assert!(matches!(err.root(), Error::JetDepth { .. }), "{err}");
    }
}
