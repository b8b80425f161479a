//! Curves from prescribed curvature functions.
//!
//! The Frenet system `α' = V_1`, `V_i' = -k_{i-1} V_{i-1} + k_i V_{i+1}` is
//! integrated with classical RK4 at a fixed step, re-orthonormalizing the
//! frame after every step.

mod fixtures;

pub use fixtures::{
    generic_negative, make_inclined_anti_fixture, make_inclined_fixture, make_v2_fixture,
    make_vn_anti_fixture, make_vn_fixture, v2_fixture_params, GenericParams, InclinedParams,
    V2Params, MAX_ATTEMPTS,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{AnalyticCurve, CurveSpec, Expression, Jet, SampledCurve};
use crate::frenet::{determinant, FrenetApparatus, FrenetConfig, FrenetSample};

pub const DEFAULT_SAMPLES: usize = 513;
const DRIFT_LIMIT: f64 = 1e-6;

/// Curvature functions of arclength `s` on a span, with initial data.
#[derive(Clone, Debug)]
pub struct CurvaturePrescription {
    k: Vec<Expression>,
    span: (f64, f64),
    h: f64,
    point: Vec<f64>,
    frame: Vec<Vec<f64>>,
    samples: usize,
}

impl CurvaturePrescription {
    /// `k[i]` is `k_{i+1}` as an expression in `s`. Starts at the origin
    /// with the identity frame.
    pub fn new<S: AsRef<str>>(k: &[S], span: (f64, f64), h: f64) -> Result<Self> {
        let n = k.len() + 1;
        if n < 3 {
            return Err(Error::DimensionTooSmall(n));
        }
        if !(span.0.is_finite() && span.1.is_finite() && span.1 > span.0) {
            return Err(Error::EmptyInterval(span.0, span.1));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument(format!("step h must be positive, got {h}")));
        }
        let k = k
            .iter()
            .map(|e| Expression::parse(e.as_ref(), "s"))
            .collect::<Result<Vec<_>>>()?;
        let frame = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Ok(CurvaturePrescription {
            k,
            span,
            h,
            point: vec![0.0; n],
            frame,
            samples: DEFAULT_SAMPLES,
        })
    }

    /// Replaces the initial point and frame. The frame rows must be
    /// orthonormal with determinant +1.
    pub fn with_init(mut self, point: Vec<f64>, frame: Vec<Vec<f64>>) -> Result<Self> {
        let n = self.dim();
        if point.len() != n || frame.len() != n || frame.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!(
                "initial point and frame must have dimension {n}"
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let d: f64 = frame[i].iter().zip(&frame[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (d - want).abs() > 1e-9 {
                    return Err(Error::InvalidArgument("initial frame is not orthonormal".into()));
                }
            }
        }
        if determinant(&frame) < 0.0 {
            return Err(Error::InvalidArgument(
                "initial frame must be positively oriented".into(),
            ));
        }
        self.point = point;
        self.frame = frame;
        Ok(self)
    }

    /// Number of output samples, including both ends.
    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn dim(&self) -> usize {
        self.k.len() + 1
    }

    pub fn span(&self) -> (f64, f64) {
        self.span
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn curvatures(&self) -> &[Expression] {
        &self.k
    }

    pub fn init_point(&self) -> &[f64] {
        &self.point
    }

    pub fn init_frame(&self) -> &[Vec<f64>] {
        &self.frame
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let f: PrescriptionFile = serde_json::from_str(src)?;
        f.into_prescription()
    }

    pub fn to_file(&self) -> PrescriptionFile {
        PrescriptionFile {
            n: self.dim(),
            k: self.k.iter().map(ToString::to_string).collect(),
            span: [self.span.0, self.span.1],
            h: self.h,
            init: Some(InitFile {
                point: self.point.clone(),
                frame: self.frame.clone(),
            }),
            samples: Some(self.samples),
        }
    }
}

/// On-disk form of a prescription.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrescriptionFile {
    pub n: usize,
    pub k: Vec<String>,
    pub span: [f64; 2],
    pub h: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<InitFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitFile {
    pub point: Vec<f64>,
    pub frame: Vec<Vec<f64>>,
}

impl PrescriptionFile {
    pub fn into_prescription(self) -> Result<CurvaturePrescription> {
        if self.k.len() + 1 != self.n {
            return Err(Error::Arity {
                expected: self.n.saturating_sub(1),
                found: self.k.len(),
            });
        }
        let mut p = CurvaturePrescription::new(&self.k, (self.span[0], self.span[1]), self.h)?;
        if let Some(init) = self.init {
            p = p.with_init(init.point, init.frame)?;
        }
        if let Some(samples) = self.samples {
            p = p.with_samples(samples);
        }
        Ok(p)
    }
}

struct Table {
    s0: f64,
    half: f64,
    /// `values[j][i]` is `k_{i+1}` at `s0 + j * half`.
    values: Vec<Vec<f64>>,
}

fn eval_k(p: &CurvaturePrescription, s: f64) -> Result<Vec<f64>> {
    p.k.iter()
        .enumerate()
        .map(|(i, e)| {
            e.eval(s).map_err(|err| Error::Prescription {
                s,
                message: format!("k_{} cannot be evaluated: {err}", i + 1),
            })
        })
        .collect()
}

/// First violated curvature condition at `s`, given the sign `k_{n-1}` must keep.
fn violation(k: &[f64], last_sign: f64) -> Option<String> {
    let n = k.len() + 1;
    for (i, v) in k.iter().enumerate() {
        if !v.is_finite() {
            return Some(format!("k_{} is not finite", i + 1));
        }
        if i < n - 2 && *v <= 0.0 {
            return Some(format!("k_{} must be positive", i + 1));
        }
        if i + 1 == n - 1 && !(v * last_sign > 0.0) {
            return Some(format!("k_{} vanishes or changes sign", i + 1));
        }
    }
    None
}

fn validate(p: &CurvaturePrescription, table: &Table) -> Result<()> {
    let n = p.dim();
    let last_sign = table.values[0][n - 2].signum();
    let bad = |k: &[f64]| violation(k, if last_sign == 0.0 { 1.0 } else { last_sign });
    for (j, k) in table.values.iter().enumerate() {
        let Some(message) = bad(k) else { continue };
        if j == 0 {
            return Err(Error::Prescription { s: table.s0, message });
        }
        // bisect between the last good node and this one
        let (mut lo, mut hi) = (table.s0 + (j - 1) as f64 * table.half, table.s0 + j as f64 * table.half);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            match eval_k(p, mid) {
                Ok(k) if bad(&k).is_none() => lo = mid,
                _ => hi = mid,
            }
        }
        return Err(Error::Prescription { s: hi, message });
    }
    Ok(())
}

/// `dV_i = -k_{i-1} V_{i-1} + k_i V_{i+1}`, rows of `v` are the frame.
fn frenet_rhs(k: &[f64], v: &[Vec<f64>], out: &mut [Vec<f64>]) {
    let n = v.len();
    for i in 0..n {
        for c in 0..n {
            let mut d = 0.0;
            if i > 0 {
                d -= k[i - 1] * v[i - 1][c];
            }
            if i + 1 < n {
                d += k[i] * v[i + 1][c];
            }
            out[i][c] = d;
        }
    }
}

fn drift(v: &[Vec<f64>]) -> f64 {
    let n = v.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d: f64 = v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((d - want).abs());
        }
    }
    worst
}

fn reorthonormalize(v: &mut [Vec<f64>]) {
    for _ in 0..2 {
        for i in 0..v.len() {
            for j in 0..i {
                let c: f64 = v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum();
                let (head, tail) = v.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= c * y;
                }
            }
            let r = v[i].iter().map(|x| x * x).sum::<f64>().sqrt();
            v[i].iter_mut().for_each(|x| *x /= r);
        }
    }
}

/// Integrates the prescription and returns the sampled curve with its
/// apparatus. The apparatus carries the prescribed curvatures as jets.
pub fn integrate_frenet(p: &CurvaturePrescription) -> Result<(CurveSpec, FrenetApparatus)> {
    integrate_frenet_with(p, &FrenetConfig::default())
}

pub fn integrate_frenet_with(p: &CurvaturePrescription, cfg: &FrenetConfig) -> Result<(CurveSpec, FrenetApparatus)> {
    integrate(p, cfg, true)
}

/// As [`integrate_frenet_with`] but without checking the curvature sign
/// conditions, so degenerate prescriptions can be examined.
pub fn integrate_frenet_unchecked(p: &CurvaturePrescription, cfg: &FrenetConfig) -> Result<(CurveSpec, FrenetApparatus)> {
    integrate(p, cfg, false)
}

fn integrate(p: &CurvaturePrescription, cfg: &FrenetConfig, check: bool) -> Result<(CurveSpec, FrenetApparatus)> {
    let n = p.dim();
    if p.samples < 3 {
        return Err(Error::GridTooSmall {
            size: p.samples,
            min: 3,
        });
    }
    let (s0, s1) = p.span;
    let intervals = p.samples - 1;
    let raw = ((s1 - s0) / p.h - 1e-9).ceil().max(1.0) as usize;
    let steps = raw.div_ceil(intervals) * intervals;
    let stride = steps / intervals;
    let h = (s1 - s0) / steps as f64;

    let table = Table {
        s0,
        half: h / 2.0,
        values: (0..=2 * steps)
            .map(|j| eval_k(p, s0 + j as f64 * h / 2.0))
            .collect::<Result<_>>()?,
    };
    if check {
        validate(p, &table)?;
    }

    let m = cfg.jet_order_for(n);
    let record = |s: f64, x: &[f64], v: &[Vec<f64>]| -> Result<FrenetSample> {
        let curvatures = p
            .k
            .iter()
            .enumerate()
            .map(|(i, e)| {
                e.eval_jet(s, m).map_err(|err| Error::Prescription {
                    s,
                    message: format!("k_{} cannot be evaluated: {err}", i + 1),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FrenetSample {
            t: s,
            s: s - s0,
            point: x.to_vec(),
            speed: Jet::constant(1.0, m),
            frame: v.to_vec(),
            curvatures,
        })
    };

    let mut x = p.point.clone();
    let mut v = p.frame.clone();
    let mut samples = Vec::with_capacity(p.samples);
    samples.push(record(s0, &x, &v)?);

    let zero = vec![vec![0.0; n]; n];
    let (mut d1, mut d2, mut d3, mut d4) = (zero.clone(), zero.clone(), zero.clone(), zero.clone());
    let mut tmp = zero;
    let stage = |base: &[Vec<f64>], d: &[Vec<f64>], f: f64, out: &mut Vec<Vec<f64>>| {
        for (o, (b, dd)) in out.iter_mut().zip(base.iter().zip(d)) {
            for (oc, (bc, dc)) in o.iter_mut().zip(b.iter().zip(dd)) {
                *oc = bc + f * dc;
            }
        }
    };
    for step in 0..steps {
        let k = |j: usize| &table.values[2 * step + j];
        frenet_rhs(k(0), &v, &mut d1);
        stage(&v, &d1, h / 2.0, &mut tmp);
        frenet_rhs(k(1), &tmp, &mut d2);
        stage(&v, &d2, h / 2.0, &mut tmp);
        frenet_rhs(k(1), &tmp, &mut d3);
        stage(&v, &d3, h, &mut tmp);
        frenet_rhs(k(2), &tmp, &mut d4);
        // α' = V_1, so the position stages are the first-row frame stages
        let tangent = |c: usize| {
            let t2 = v[0][c] + h / 2.0 * d1[0][c];
            let t3 = v[0][c] + h / 2.0 * d2[0][c];
            let t4 = v[0][c] + h * d3[0][c];
            v[0][c] + 2.0 * t2 + 2.0 * t3 + t4
        };
        for c in 0..n {
            x[c] += h / 6.0 * tangent(c);
        }
        for i in 0..n {
            for c in 0..n {
                v[i][c] += h / 6.0 * (d1[i][c] + 2.0 * d2[i][c] + 2.0 * d3[i][c] + d4[i][c]);
            }
        }
        let s = s0 + (step + 1) as f64 * h;
        let dr = drift(&v);
        if dr > DRIFT_LIMIT {
            return Err(Error::StepTooLarge {
                drift: dr,
                s,
                suggested: 0.5 * h * (DRIFT_LIMIT / dr).powf(0.2),
            });
        }
        reorthonormalize(&mut v);
        if (step + 1) % stride == 0 {
            let s = if step + 1 == steps { s1 } else { s };
            samples.push(record(s, &x, &v)?);
        }
    }

    let sampled = SampledCurve::new(
        samples.iter().map(|q| q.t).collect(),
        samples.iter().map(|q| q.point.clone()).collect(),
    )?;
    let app = FrenetApparatus::from_samples(CurveSpec::synthetic(p.clone()), samples)?;
    Ok((CurveSpec::sampled(sampled), app))
}

/// `(a cos t, a sin t, b t)` for `t ∈ [0, 2π]`, with curvature
/// `a/(a²+b²)`, torsion `b/(a²+b²)` and axis `(0, 0, 1)`.
pub fn make_circular_helix(a: f64, b: f64) -> Result<CurveSpec> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!("helix radius must be positive, got {a}")));
    }
    if !(b != 0.0 && b.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "helix pitch must be nonzero, got {b} (planar circle)"
        )));
    }
    let coords = [format!("{a:?}*cos(t)"), format!("{a:?}*sin(t)"), format!("{b:?}*t")]
        .iter()
        .map(|src| Expression::parse(src, "t"))
        .collect::<Result<Vec<_>>>()?;
    let names = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    Ok(CurveSpec::analytic(AnalyticCurve::new(
        names,
        coords,
        (0.0, 2.0 * std::f64::consts::PI),
    )?))
}

/// Closed-form `(k_1, k_2)` of [`make_circular_helix`].
pub fn circular_helix_curvatures(a: f64, b: f64) -> (f64, f64) {
    let r = a * a + b * b;
    (a / r, b / r)
}
