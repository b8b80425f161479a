//! Frenet frames and curvature functions in E^n.
//!
//! For analytic and sampled curves the frame comes from Gram–Schmidt on
//! `α', α'', …, α^(n-1)` carried out in jet arithmetic, so every frame
//! vector is known together with its `t`-derivatives. `V_n` is the unit
//! vector completing a positively oriented frame. The curvatures
//! `k_i = <V_i', V_{i+1}> / |α'|` are then re-expanded as jets in arclength.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{CurveSource, CurveSpec, Jet};
use crate::quad::cumulative_simpson;

pub const MIN_GRID: usize = 16;

#[derive(Clone, Debug)]
pub struct FrenetConfig {
    /// Order of the arclength jets kept for each curvature; `None` means `n`.
    pub jet_order: Option<usize>,
    /// Relative Gram–Schmidt residual below which the curve is degenerate.
    pub pivot_tol: f64,
    /// Speeds at or below this are not regular.
    pub speed_tol: f64,
}

impl Default for FrenetConfig {
    fn default() -> Self {
        FrenetConfig {
            jet_order: None,
            pivot_tol: 1e-10,
            speed_tol: 1e-12,
        }
    }
}

impl FrenetConfig {
    pub fn jet_order_for(&self, n: usize) -> usize {
        self.jet_order.unwrap_or(n)
    }
}

/// Frame and curvature data at one parameter value.
#[derive(Clone, Debug)]
pub struct FrenetSample {
    pub t: f64,
    /// Arclength from the start of the grid.
    pub s: f64,
    pub point: Vec<f64>,
    /// `|α'(t)|` as a jet in `t`.
    pub speed: Jet,
    /// Rows are `V_1, …, V_n`.
    pub frame: Vec<Vec<f64>>,
    /// `k_1, …, k_{n-1}` as jets in arclength.
    pub curvatures: Vec<Jet>,
}

impl FrenetSample {
    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    /// Frame vector `V_i`, 1-based.
    pub fn v(&self, i: usize) -> &[f64] {
        &self.frame[i - 1]
    }

    /// Curvature jet `k_i`, 1-based.
    pub fn k(&self, i: usize) -> &Jet {
        &self.curvatures[i - 1]
    }
}

#[derive(Clone, Debug)]
pub struct FrenetApparatus {
    spec: CurveSpec,
    grid: Vec<f64>,
    samples: Vec<FrenetSample>,
}

impl FrenetApparatus {
    /// Assembles an apparatus from precomputed samples without checking
    /// non-degeneracy. Arclength must already be filled in.
    pub fn from_samples(spec: CurveSpec, samples: Vec<FrenetSample>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::GridTooSmall {
                size: samples.len(),
                min: 3,
            });
        }
        if samples.windows(2).any(|w| !(w[0].s < w[1].s)) {
            return Err(Error::InvalidArgument(
                "arclength must be strictly increasing along the grid".into(),
            ));
        }
        Ok(FrenetApparatus {
            grid: samples.iter().map(|p| p.t).collect(),
            spec,
            samples,
        })
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.samples[0].dim()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn samples(&self) -> &[FrenetSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn arclength(&self) -> Vec<f64> {
        self.samples.iter().map(|p| p.s).collect()
    }

    /// Uniform spacing of the parameter grid.
    pub fn step(&self) -> f64 {
        (self.grid[self.grid.len() - 1] - self.grid[0]) / (self.grid.len() - 1) as f64
    }

    /// Values of `k_i` (1-based) along the grid.
    pub fn curvature_values(&self, i: usize) -> Vec<f64> {
        self.samples.iter().map(|p| p.k(i).value()).collect()
    }
}

fn dot(a: &[Jet], b: &[Jet]) -> Jet {
    let mut acc = &a[0] * &b[0];
    for (x, y) in a.iter().zip(b).skip(1) {
        acc = acc + x * y;
    }
    acc
}

fn value_norm(v: &[Jet]) -> f64 {
    v.iter().map(|x| x.value() * x.value()).sum::<f64>().sqrt()
}

fn project_out(u: &mut [Jet], basis: &[Vec<Jet>]) {
    // modified Gram–Schmidt, two passes
    for _ in 0..2 {
        for e in basis {
            let c = dot(u, e);
            for (x, y) in u.iter_mut().zip(e) {
                *x = &*x - &(&c * y);
            }
        }
    }
}

fn normalize(u: &[Jet]) -> Result<Vec<Jet>> {
    let r = dot(u, u).try_sqrt()?;
    u.iter().map(|x| x.try_div(&r)).collect()
}

/// Determinant by LU with partial pivoting.
pub(crate) fn determinant(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

/// Frenet sample from coordinate jets in `t` of order at least `n`.
///
/// `m` is the arclength jet order to keep for the curvatures; curvatures
/// whose natural depth is smaller keep what is available.
pub fn frame_from_jets(t: f64, coords: &[Jet], m: usize, cfg: &FrenetConfig) -> Result<FrenetSample> {
    let n = coords.len();
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    let avail = coords.iter().map(Jet::order).min().unwrap();
    if avail < n {
        return Err(Error::JetDepth {
            what: "curve derivatives".into(),
            needed: n,
            available: avail,
        });
    }
    let derivs: Vec<Vec<Jet>> = (1..n)
        .map(|j| coords.iter().map(|c| c.nth_derivative(j).unwrap()).collect())
        .collect();

    let speed = dot(&derivs[0], &derivs[0]).try_sqrt().map_err(|_| Error::NotRegular { t })?;
    if speed.value() <= cfg.speed_tol {
        return Err(Error::NotRegular { t });
    }

    let mut basis: Vec<Vec<Jet>> = Vec::with_capacity(n);
    for (step, d) in derivs.iter().enumerate() {
        let scale = value_norm(d);
        let mut u = d.clone();
        project_out(&mut u, &basis);
        if !(value_norm(&u) > cfg.pivot_tol * scale) {
            return Err(Error::Degenerate { t, step: step + 1 });
        }
        basis.push(normalize(&u)?);
    }

    // α^(n) must leave the span of V_1..V_{n-1}, otherwise k_{n-1} = 0.
    let last: Vec<f64> = coords.iter().map(|c| c.get(n).unwrap()).collect();
    let scale = last.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut r = last.clone();
    for _ in 0..2 {
        for e in &basis {
            let c: f64 = r.iter().zip(e).map(|(x, y)| x * y.value()).sum();
            for (x, y) in r.iter_mut().zip(e) {
                *x -= c * y.value();
            }
        }
    }
    if !(r.iter().map(|x| x * x).sum::<f64>().sqrt() > cfg.pivot_tol * scale) {
        return Err(Error::Degenerate { t, step: n });
    }

    // Orientation completion: V_n spans the orthogonal complement, sign fixed by det = +1.
    let order = basis.iter().flatten().map(Jet::order).min().unwrap();
    let (vn, _) = (0..n)
        .map(|k| {
            let mut u: Vec<Jet> = (0..n)
                .map(|i| Jet::constant(if i == k { 1.0 } else { 0.0 }, order))
                .collect();
            project_out(&mut u, &basis);
            let r = value_norm(&u);
            (u, r)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let mut vn = normalize(&vn)?;
    let mut values: Vec<Vec<f64>> = basis
        .iter()
        .map(|v| v.iter().map(Jet::value).collect())
        .collect();
    values.push(vn.iter().map(Jet::value).collect());
    if determinant(&values) < 0.0 {
        vn = vn.iter().map(|x| -x).collect();
        for x in values[n - 1].iter_mut() {
            *x = -*x;
        }
    }
    basis.push(vn);

    let inv_speed = speed.try_recip()?;
    let curvatures = (0..n - 1)
        .map(|i| {
            let dv: Vec<Jet> = basis[i].iter().map(|x| x.derivative().unwrap()).collect();
            let kt = dot(&dv, &basis[i + 1]) * &inv_speed;
            kt.reparametrize(&inv_speed).truncate(m)
        })
        .collect();

    Ok(FrenetSample {
        t,
        s: 0.0,
        point: coords.iter().map(Jet::value).collect(),
        speed,
        frame: values,
        curvatures,
    })
}

/// Frenet sample of an analytic or sampled curve at `t`, with curvature
/// jets of order `m` in arclength (sampled curves give at most what their
/// degree-7 window fits support). `s` is left at zero.
pub fn frenet_at(spec: &CurveSpec, t: f64, m: usize, cfg: &FrenetConfig) -> Result<FrenetSample> {
    let n = spec.dim();
    let coords = spec.coordinate_jets(t, m + n)?;
    frame_from_jets(t, &coords, m, cfg)
}

/// Frenet apparatus on a uniform grid of `size` parameter values.
pub fn build_apparatus(spec: &CurveSpec, size: usize, cfg: &FrenetConfig) -> Result<FrenetApparatus> {
    if size < MIN_GRID {
        return Err(Error::GridTooSmall {
            size,
            min: MIN_GRID,
        });
    }
    if let CurveSource::Synthetic(p) = spec.source() {
        let p = p.clone().with_samples(size);
        return crate::synthesize::integrate_frenet_with(&p, cfg).map(|(_, app)| app);
    }
    let (t0, t1) = spec.interval();
    let h = (t1 - t0) / (size - 1) as f64;
    let m = cfg.jet_order_for(spec.dim());
    let results: Vec<Result<FrenetSample>> = (0..size)
        .into_par_iter()
        .map(|i| {
            let t = if i + 1 == size { t1 } else { t0 + i as f64 * h };
            frenet_at(spec, t, m, cfg).map_err(|e| e.at_grid(i))
        })
        .collect();
    let mut samples = results.into_iter().collect::<Result<Vec<_>>>()?;
    let speeds: Vec<f64> = samples.iter().map(|p| p.speed.value()).collect();
    for (p, s) in samples.iter_mut().zip(cumulative_simpson(&speeds, h)) {
        p.s = s;
    }
    FrenetApparatus::from_samples(spec.clone(), samples)
}

#[derive(Clone, Debug, Serialize)]
pub struct Crossing {
    /// Curvature index `i` of `k_i`, 1-based.
    pub curvature: usize,
    pub grid_index: usize,
    /// Arclength location, linearly interpolated for sign changes.
    pub s: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NondegeneracyReport {
    /// Minimum of `|k_i|` over the grid, `i = 1..n-1`.
    pub min_abs: Vec<f64>,
    /// `min_abs - tol` per curvature.
    pub margins: Vec<f64>,
    pub crossings: Vec<Crossing>,
    pub pass: bool,
}

/// Checks that `k_1..k_{n-2}` stay above `tol` and `k_{n-1}` keeps its sign
/// away from zero.
pub fn check_nondegenerate(app: &FrenetApparatus, tol: f64) -> NondegeneracyReport {
    let n = app.dim();
    let s = app.arclength();
    let mut min_abs = Vec::with_capacity(n - 1);
    let mut crossings = Vec::new();
    for i in 1..n {
        let k = app.curvature_values(i);
        min_abs.push(k.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min));
        let must_be_positive = i <= n - 2;
        for p in 0..k.len() {
            let bad = if must_be_positive { k[p] <= tol } else { k[p].abs() <= tol };
            if bad {
                crossings.push(Crossing {
                    curvature: i,
                    grid_index: p,
                    s: s[p],
                });
                break;
            }
            if p + 1 < k.len() && k[p].signum() != k[p + 1].signum() && k[p + 1].abs() > tol {
                let f = k[p] / (k[p] - k[p + 1]);
                crossings.push(Crossing {
                    curvature: i,
                    grid_index: p,
                    s: s[p] + f * (s[p + 1] - s[p]),
                });
                break;
            }
        }
    }
    let margins: Vec<f64> = min_abs.iter().map(|m| m - tol).collect();
    NondegeneracyReport {
        pass: crossings.is_empty(),
        min_abs,
        margins,
        crossings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_curve;

    const HELIX: &str = "dim 3 on [0, 2*pi]: x = 2*cos(t); y = 2*sin(t); z = t";

    #[test]
    fn circular_helix_curvatures() {
        let spec = parse_curve(HELIX).unwrap();
        for &t in &[0.0, 0.3, 2.0, 6.0] {
            let p = frenet_at(&spec, t, 3, &FrenetConfig::default()).unwrap();
            assert!((p.k(1).value() - 0.4).abs() < 1e-12);
            assert!((p.k(2).value() - 0.2).abs() < 1e-12);
            for j in 1..=3 {
                assert!(p.k(1).get(j).unwrap().abs() < 1e-12);
            }
            assert!((p.speed.value() - 5f64.sqrt()).abs() < 1e-14);
            assert!((determinant(&p.frame) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn planar_circle_degenerates_at_step_three() {
        let spec = parse_curve("dim 3: x = cos(t); y = sin(t); z = 0").unwrap();
        match frenet_at(&spec, 0.4, 3, &FrenetConfig::default()) {
            Err(Error::Degenerate { step, .. }) => assert_eq!(step, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn straight_line_degenerates_at_step_two() {
        let spec = parse_curve("dim 3: x = t; y = 0; z = 0").unwrap();
        match frenet_at(&spec, 0.4, 3, &FrenetConfig::default()) {
            Err(e) => {
                assert!(matches!(e, Error::Degenerate { step: 2, .. }));
                assert!(e.to_string().contains("degenerate at step 2"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn stationary_point_is_not_regular() {
        let spec = parse_curve("dim 3 on [-1, 1]: x = t^2; y = t^3; z = t^4").unwrap();
        assert!(matches!(
            frenet_at(&spec, 0.0, 3, &FrenetConfig::default()),
            Err(Error::NotRegular { .. })
        ));
    }

    #[test]
    fn helix_arclength() {
        let spec = parse_curve(HELIX).unwrap();
        let app = build_apparatus(&spec, 256, &FrenetConfig::default()).unwrap();
        let total = app.samples().last().unwrap().s;
        assert!((total - 2.0 * std::f64::consts::PI * 5f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn unit_speed_arclength_is_parameter() {
        let spec = parse_curve(
            "dim 3 on [0.5, 3]: x = cos(t)/sqrt(2); y = sin(t)/sqrt(2); z = t/sqrt(2)",
        )
        .unwrap();
        let app = build_apparatus(&spec, 64, &FrenetConfig::default()).unwrap();
        for p in app.samples() {
            assert!((p.s - (p.t - 0.5)).abs() < 1e-10);
        }
    }

    #[test]
    fn grid_too_small() {
        let spec = parse_curve(HELIX).unwrap();
        assert!(matches!(
            build_apparatus(&spec, 8, &FrenetConfig::default()),
            Err(Error::GridTooSmall { size: 8, min: 16 })
        ));
    }

    #[test]
    fn degeneracy_reports_grid_index() {
        // α'' vanishes at t = 1, the 9th node of the grid
        let spec = parse_curve("dim 3 on [0, 2]: x = t; y = (t-1)^3; z = (t-1)^4").unwrap();
        let err = build_apparatus(&spec, 17, &FrenetConfig::default()).unwrap_err();
        assert!(matches!(err, Error::AtGrid { index: 8, .. }), "{err}");
        assert!(err.is_curve_error());
    }

    #[test]
    fn helix_passes_nondegeneracy() {
        let spec = parse_curve(HELIX).unwrap();
        let app = build_apparatus(&spec, 64, &FrenetConfig::default()).unwrap();
        let r = check_nondegenerate(&app, 1e-8);
        assert!(r.pass);
        assert!((r.min_abs[0] - 0.4).abs() < 1e-12);
        assert!((r.min_abs[1] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn e4_curve_orientation_and_orthonormality() {
        let spec = parse_curve(
            "dim 4 on [0, 3]: x = cos(t); y = sin(t); z = cos(2*t) + t^2/5; w = sin(2*t)",
        )
        .unwrap();
        let app = build_apparatus(&spec, 32, &FrenetConfig::default()).unwrap();
        for p in app.samples() {
            for i in 0..4 {
                for j in 0..4 {
                    let d: f64 = p.frame[i].iter().zip(&p.frame[j]).map(|(a, b)| a * b).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((d - want).abs() < 1e-9);
                }
            }
            assert!((determinant(&p.frame) - 1.0).abs() < 1e-9);
            assert!(p.k(1).value() > 0.0 && p.k(2).value() > 0.0);
            assert_eq!(p.k(3).order(), 4);
        }
    }
}
