//! Seeded curvature prescriptions with known helix type.
//!
//! Positive fixtures are built in closed form: the harmonic functions are
//! chosen first (affine in `s`), the last one is fixed by the sum of
//! squares, and the curvatures are read off the recursions. Every curvature
//! string is therefore an explicit expression in `s`.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::CurvaturePrescription;
use crate::error::{Error, Result};
use crate::expr::Expression;

pub const MAX_ATTEMPTS: usize = 16;
const STEP: f64 = 1e-3;
const CHECK_POINTS: usize = 4001;

fn lit(x: f64) -> String {
    format!("{x:?}")
}

fn affine(a: f64, b: f64) -> String {
    format!("({} + {}*s)", lit(a), lit(b))
}

/// Rejects prescriptions whose curvatures leave `[1e-3, 1e3]` in magnitude,
/// break the sign conditions or fail to evaluate on a fine check grid.
fn accept(k: Vec<String>, span: (f64, f64)) -> Result<CurvaturePrescription> {
    let reject = |reason: String| Error::FixtureRejected { attempts: 1, reason };
    let exprs = k
        .iter()
        .map(|e| Expression::parse(e, "s"))
        .collect::<Result<Vec<_>>>()?;
    let n = exprs.len() + 1;
    let mut last_sign = 0.0;
    for j in 0..CHECK_POINTS {
        let s = span.0 + (span.1 - span.0) * j as f64 / (CHECK_POINTS - 1) as f64;
        for (i, e) in exprs.iter().enumerate() {
            let v = e
                .eval(s)
                .map_err(|err| reject(format!("k_{} at s = {s}: {err}", i + 1)))?;
            if !(v.abs() >= 1e-3 && v.abs() <= 1e3) {
                return Err(reject(format!("|k_{}| = {v} out of range at s = {s}", i + 1)));
            }
            if i + 1 < n - 1 && v < 0.0 {
                return Err(reject(format!("k_{} negative at s = {s}", i + 1)));
            }
            if i + 1 == n - 1 {
                if last_sign == 0.0 {
                    last_sign = v.signum();
                } else if v.signum() != last_sign {
                    return Err(reject(format!("k_{} changes sign near s = {s}", i + 1)));
                }
            }
        }
    }
    CurvaturePrescription::new(&k, span, STEP)
}

fn retry<P>(
    seed: u64,
    draw: impl Fn(&mut StdRng) -> P,
    build: impl Fn(&P) -> Result<CurvaturePrescription>,
) -> Result<(P, CurvaturePrescription)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut reason = String::new();
    for _ in 0..MAX_ATTEMPTS {
        let params = draw(&mut rng);
        match build(&params) {
            Ok(p) => return Ok((params, p)),
            Err(Error::FixtureRejected { reason: r, .. }) => reason = r,
            Err(e) => return Err(e),
        }
    }
    Err(Error::FixtureRejected {
        attempts: MAX_ATTEMPTS,
        reason,
    })
}

/// Inclined-curve construction.
///
/// For `n ≥ 4`: `H_1..H_{n-3}` are affine, `k_2 = p + q sin(ωs + ψ)`,
/// `H_{n-2} = sqrt(C - Σ H_i²)`, and `k_1, k_3..k_{n-1}` follow from the
/// recursion. For `n = 3`: `k_1 = p + q sin(ωs + ψ)` and `k_2 = c k_1`.
#[derive(Clone, Debug)]
pub struct InclinedParams {
    pub n: usize,
    /// `(a_i, b_i)` with `H_i = a_i + b_i s`, `i = 1..n-3`.
    pub affine: Vec<(f64, f64)>,
    pub p: f64,
    pub q: f64,
    pub omega: f64,
    pub psi: f64,
    /// `C - max Σ_{i≤n-3} H_i²`.
    pub margin: f64,
    /// Ratio `k_2/k_1` for `n = 3`.
    pub c: f64,
    pub length: f64,
}

impl InclinedParams {
    pub fn draw(n: usize, rng: &mut StdRng, allow_negative: bool) -> Self {
        let affine = (0..n.saturating_sub(3))
            .map(|_| (rng.random_range(0.5..1.5), rng.random_range(0.05..0.2)))
            .collect();
        let mut c = rng.random_range(0.3..2.0);
        if allow_negative && rng.random_bool(0.5) {
            c = -c;
        }
        InclinedParams {
            n,
            affine,
            p: rng.random_range(1.0..2.0),
            q: rng.random_range(0.1..0.3),
            omega: rng.random_range(0.5..1.5),
            psi: rng.random_range(0.0..std::f64::consts::TAU),
            margin: rng.random_range(0.5..1.5),
            c,
            length: 8.0,
        }
    }

    /// Curvature expressions `k_1..k_{n-1}`.
    pub fn curvatures(&self) -> Vec<String> {
        let n = self.n;
        let wave = format!(
            "({} + {}*sin({}*s + {}))",
            lit(self.p),
            lit(self.q),
            lit(self.omega),
            lit(self.psi)
        );
        if n == 3 {
            return vec![wave.clone(), format!("{}*{}", lit(self.c), wave)];
        }
        // h[i] is H_i, i = 0..n-3
        let mut h = vec!["0".to_string()];
        h.extend(self.affine.iter().map(|&(a, b)| affine(a, b)));
        let mut k = vec![format!("{}*{}", h[1], wave), wave];
        for i in 2..=n - 3 {
            let (_, b) = self.affine[i - 2];
            k.push(format!("({} + {}*{})/{}", lit(b), k[i - 1], h[i - 2], h[i]));
        }
        let end = self.length;
        let cap = self.margin
            + self
                .affine
                .iter()
                .map(|&(a, b)| (a + b * end).powi(2))
                .sum::<f64>();
        let squares: Vec<String> = h[1..].iter().map(|x| format!("{x}^2")).collect();
        let last = format!("sqrt({} - {})", lit(cap), squares.join(" - "));
        let (_, b) = self.affine[n - 4];
        k.push(format!("({} + {}*{})/{}", lit(b), k[n - 3], h[n - 4], last));
        k
    }

    pub fn build(&self) -> Result<CurvaturePrescription> {
        accept(self.curvatures(), (0.0, self.length))
    }

    /// The mirrored prescription `k_i ↦ k_{n-i}`, a V_n-slant helix.
    pub fn build_mirrored(&self) -> Result<CurvaturePrescription> {
        let mut k = self.curvatures();
        k.reverse();
        accept(k, (0.0, self.length))
    }
}

/// Curve whose tangent makes a constant angle with a fixed axis.
pub fn make_inclined_fixture(n: usize, seed: u64) -> Result<CurvaturePrescription> {
    check_dim(n)?;
    retry(seed, |r| InclinedParams::draw(n, r, true), InclinedParams::build).map(|x| x.1)
}

/// Curve whose last Frenet vector makes a constant angle with a fixed axis,
/// from the index mirror of an inclined construction.
pub fn make_vn_fixture(n: usize, seed: u64) -> Result<CurvaturePrescription> {
    check_dim(n)?;
    retry(seed, |r| InclinedParams::draw(n, r, false), InclinedParams::build_mirrored).map(|x| x.1)
}

/// V_2-slant construction.
///
/// `k_1 = p + q cos(ωs)` so `G_1 = c0 + p s + (q/ω) sin(ωs)` in closed
/// form. `G_3..G_{n-1}` are affine, `G_n = sqrt(C - Σ_{i<n} G_i²)`, and
/// `k_2..k_{n-1}` follow from the recursion.
#[derive(Clone, Debug)]
pub struct V2Params {
    pub n: usize,
    pub c0: f64,
    pub p: f64,
    pub q: f64,
    pub omega: f64,
    /// `(a_i, b_i)` with `G_i = a_i + b_i s`, `i = 3..n-1`.
    pub affine: Vec<(f64, f64)>,
    pub margin: f64,
    pub length: f64,
}

impl V2Params {
    pub fn draw(n: usize, rng: &mut StdRng) -> Self {
        let p = rng.random_range(0.6..1.0);
        V2Params {
            n,
            c0: rng.random_range(0.5..1.5),
            p,
            q: p * rng.random_range(0.1..0.3),
            omega: rng.random_range(0.5..1.5),
            affine: (0..n.saturating_sub(3))
                .map(|_| (rng.random_range(0.5..1.5), rng.random_range(0.05..0.2)))
                .collect(),
            margin: rng.random_range(0.5..2.0),
            length: 6.0,
        }
    }

    fn g1(&self, s: f64) -> f64 {
        self.c0 + self.p * s + self.q / self.omega * (self.omega * s).sin()
    }

    pub fn curvatures(&self) -> Vec<String> {
        let n = self.n;
        let k1 = format!("({} + {}*cos({}*s))", lit(self.p), lit(self.q), lit(self.omega));
        let g1 = format!(
            "({} + {}*s + {}*sin({}*s))",
            lit(self.c0),
            lit(self.p),
            lit(self.q / self.omega),
            lit(self.omega)
        );
        // g[i] is G_i, i = 1..n-1 (index 0 unused)
        let mut g = vec![String::new(), g1, "1".to_string()];
        g.extend(self.affine.iter().map(|&(a, b)| affine(a, b)));
        let cap = self.margin
            + (0..CHECK_POINTS)
                .map(|j| {
                    let s = self.length * j as f64 / (CHECK_POINTS - 1) as f64;
                    let affine: f64 = self.affine.iter().map(|&(a, b)| (a + b * s).powi(2)).sum();
                    self.g1(s).powi(2) + 1.0 + affine
                })
                .fold(0.0, f64::max);
        let squares: Vec<String> = g[1..].iter().map(|x| format!("{x}^2")).collect();
        let last = format!("sqrt({} - {})", lit(cap), squares.join(" - "));
        if n == 3 {
            return vec![k1.clone(), format!("{k1}*{}/{last}", g[1])];
        }
        let mut k = vec![String::new(), k1.clone(), format!("{k1}*{}/{}", g[1], g[3])];
        for i in 4..n {
            let (_, b) = self.affine[i - 4];
            k.push(format!("({}*{} + {})/{}", k[i - 2], g[i - 2], lit(b), g[i]));
        }
        let (_, b) = self.affine[n - 4];
        k.push(format!("({}*{} + {})/{last}", k[n - 2], g[n - 2], lit(b)));
        k.remove(0);
        k
    }

    pub fn build(&self) -> Result<CurvaturePrescription> {
        accept(self.curvatures(), (0.0, self.length))
    }
}

/// Curve whose principal normal makes a constant angle with a fixed axis.
/// The construction constant of `G_1` is in [`v2_fixture_params`].
pub fn make_v2_fixture(n: usize, seed: u64) -> Result<CurvaturePrescription> {
    v2_fixture_params(n, seed).map(|x| x.1)
}

pub fn v2_fixture_params(n: usize, seed: u64) -> Result<(V2Params, CurvaturePrescription)> {
    check_dim(n)?;
    retry(seed, |r| V2Params::draw(n, r), V2Params::build)
}

/// Positive trigonometric curvatures with distinct frequencies, of no
/// helix type.
#[derive(Clone, Debug)]
pub struct GenericParams {
    /// `(p_i, q_i, ω_i, ψ_i)` with `k_i = p_i + q_i sin(ω_i s + ψ_i)`.
    pub terms: Vec<(f64, f64, f64, f64)>,
    pub length: f64,
}

impl GenericParams {
    pub fn draw(n: usize, rng: &mut StdRng) -> Self {
        let base = rng.random_range(0.6..1.0);
        GenericParams {
            terms: (0..n - 1)
                .map(|i| {
                    let p = rng.random_range(0.6..1.4);
                    (
                        p,
                        p * rng.random_range(0.2..0.4),
                        base * (1.0 + 0.37 * i as f64),
                        rng.random_range(0.0..std::f64::consts::TAU),
                    )
                })
                .collect(),
            length: 8.0,
        }
    }

    fn term(&self, i: usize) -> String {
        let (p, q, w, psi) = self.terms[i];
        format!("({} + {}*sin({}*s + {}))", lit(p), lit(q), lit(w), lit(psi))
    }

    pub fn curvatures(&self) -> Vec<String> {
        (0..self.terms.len()).map(|i| self.term(i)).collect()
    }

    pub fn build(&self) -> Result<CurvaturePrescription> {
        accept(self.curvatures(), (0.0, self.length))
    }
}

pub fn generic_negative(n: usize, seed: u64) -> Result<CurvaturePrescription> {
    check_dim(n)?;
    retry(seed, |r| GenericParams::draw(n, r), GenericParams::build).map(|x| x.1)
}

/// `k_1 = c k_2` with generic `k_3`: `H_1` is constant but `H_2 ≡ 0`, so the
/// sum of squares is constant while the curve is not inclined.
pub fn make_inclined_anti_fixture(seed: u64) -> Result<CurvaturePrescription> {
    let build = |(g, c): &(GenericParams, f64)| {
        let k2 = g.term(1);
        accept(vec![format!("{}*{k2}", lit(*c)), k2, g.term(2)], (0.0, g.length))
    };
    retry(seed, |r| (GenericParams::draw(4, r), r.random_range(0.3..2.0)), build).map(|x| x.1)
}

/// `k_3 = c k_2` with generic `k_1`: `H*_1` is constant but `H*_2 ≡ 0`.
pub fn make_vn_anti_fixture(seed: u64) -> Result<CurvaturePrescription> {
    let build = |(g, c): &(GenericParams, f64)| {
        let k2 = g.term(1);
        accept(vec![g.term(0), k2.clone(), format!("{}*{k2}", lit(*c))], (0.0, g.length))
    };
    retry(seed, |r| (GenericParams::draw(4, r), r.random_range(0.3..2.0)), build).map(|x| x.1)
}

fn check_dim(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::DimensionTooSmall(n))
    } else {
        Ok(())
    }
}
