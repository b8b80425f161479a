use super::parse::{Parser, Tok};
use super::{Expression, Jet};
use crate::error::{Error, Result};
use crate::synthesize::CurvaturePrescription;

/// Derivative order available from local polynomial fits of sampled curves.
pub const SAMPLED_JET_ORDER: usize = 7;
const SAMPLED_WINDOW: usize = SAMPLED_JET_ORDER + 1;

/// A curve in E^n.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    dim: usize,
    source: CurveSource,
}

#[derive(Clone, Debug)]
pub enum CurveSource {
    Analytic(AnalyticCurve),
    Sampled(SampledCurve),
    Synthetic(CurvaturePrescription),
}

impl CurveSpec {
    pub fn analytic(curve: AnalyticCurve) -> CurveSpec {
        CurveSpec {
            dim: curve.coords.len(),
            source: CurveSource::Analytic(curve),
        }
    }

    pub fn sampled(curve: SampledCurve) -> CurveSpec {
        CurveSpec {
            dim: curve.points[0].len(),
            source: CurveSource::Sampled(curve),
        }
    }

    pub fn synthetic(p: CurvaturePrescription) -> CurveSpec {
        CurveSpec {
            dim: p.dim(),
            source: CurveSource::Synthetic(p),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source(&self) -> &CurveSource {
        &self.source
    }

    pub fn interval(&self) -> (f64, f64) {
        match &self.source {
            CurveSource::Analytic(c) => c.interval,
            CurveSource::Sampled(c) => (c.params[0], *c.params.last().unwrap()),
            CurveSource::Synthetic(p) => p.span(),
        }
    }

    /// Derivative jets of every coordinate at `t`, for analytic and sampled
    /// curves. Sampled curves cap the order at [`SAMPLED_JET_ORDER`].
    pub fn coordinate_jets(&self, t: f64, order: usize) -> Result<Vec<Jet>> {
        match &self.source {
            CurveSource::Analytic(c) => c.jets_at(t, order),
            CurveSource::Sampled(c) => c.jets_at(t),
            CurveSource::Synthetic(_) => Err(Error::InvalidArgument(
                "synthetic curves have no coordinate expressions; integrate them first".into(),
            )),
        }
    }
}

/// `n` coordinate expressions in `t` over a parameter interval.
#[derive(Clone, Debug)]
pub struct AnalyticCurve {
    names: Vec<String>,
    coords: Vec<Expression>,
    interval: (f64, f64),
    max_order: usize,
}

impl AnalyticCurve {
    pub fn new(names: Vec<String>, coords: Vec<Expression>, interval: (f64, f64)) -> Result<Self> {
        let n = coords.len();
        if n < 3 {
            return Err(Error::DimensionTooSmall(n));
        }
        if names.len() != n {
            return Err(Error::Arity {
                expected: n,
                found: names.len(),
            });
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::DuplicateCoordinate(a.clone()));
            }
        }
        if !(interval.0 < interval.1) {
            return Err(Error::EmptyInterval(interval.0, interval.1));
        }
        Ok(AnalyticCurve {
            names,
            coords,
            interval,
            max_order: 2 * n + 4,
        })
    }

    /// Caps the jet order `eval_jets` will produce. Defaults to `2n + 4`.
    pub fn with_max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order;
        self
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn coords(&self) -> &[Expression] {
        &self.coords
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn jets_at(&self, t: f64, order: usize) -> Result<Vec<Jet>> {
        if order > self.max_order {
            return Err(Error::OrderOverflow {
                requested: order,
                max: self.max_order,
            });
        }
        let (t0, t1) = self.interval;
        let slack = 1e-12 * (t1 - t0).abs().max(t0.abs()).max(t1.abs()).max(1.0);
        if !(t >= t0 - slack && t <= t1 + slack) {
            return Err(Error::OutOfInterval { t, t0, t1 });
        }
        self.coords.iter().map(|e| e.eval_jet(t, order)).collect()
    }

    /// Point on the curve.
    pub fn point(&self, t: f64) -> Result<Vec<f64>> {
        self.coords.iter().map(|e| e.eval(t)).collect()
    }
}

/// Ordered samples `(t_i, p_i)` of a curve.
#[derive(Clone, Debug)]
pub struct SampledCurve {
    params: Vec<f64>,
    points: Vec<Vec<f64>>,
}

impl SampledCurve {
    pub fn new(params: Vec<f64>, points: Vec<Vec<f64>>) -> Result<Self> {
        if params.len() != points.len() {
            return Err(Error::InvalidArgument(format!(
                "{} parameters for {} points",
                params.len(),
                points.len()
            )));
        }
        if params.len() < SAMPLED_WINDOW {
            return Err(Error::GridTooSmall {
                size: params.len(),
                min: SAMPLED_WINDOW,
            });
        }
        let n = points[0].len();
        if n < 3 {
            return Err(Error::DimensionTooSmall(n));
        }
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::Arity {
                expected: n,
                found: p.len(),
            });
        }
        if params.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument(
                "sample parameters must be strictly increasing".into(),
            ));
        }
        Ok(SampledCurve { params, points })
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Order-7 jets from the degree-7 polynomial through the eight samples
    /// surrounding `t`.
    pub fn jets_at(&self, t: f64) -> Result<Vec<Jet>> {
        let (t0, t1) = (self.params[0], *self.params.last().unwrap());
        if !(t >= t0 && t <= t1) {
            return Err(Error::OutOfInterval { t, t0, t1 });
        }
        let len = self.params.len();
        let j = self.params.partition_point(|&p| p <= t).saturating_sub(1);
        let start = j.saturating_sub(3).min(len - SAMPLED_WINDOW);
        let idx = start..start + SAMPLED_WINDOW;
        let scale = (self.params[idx.end - 1] - self.params[start]) / (SAMPLED_WINDOW - 1) as f64;
        let n = self.points[0].len();
        let origin = &self.points[start];

        // Vandermonde system in u = (p - t) / scale, one right-hand side per coordinate.
        let mut a = [[0.0f64; SAMPLED_WINDOW]; SAMPLED_WINDOW];
        let mut rhs = vec![[0.0f64; SAMPLED_WINDOW]; n];
        for (r, i) in idx.clone().enumerate() {
            let u = (self.params[i] - t) / scale;
            let mut pow = 1.0;
            for c in 0..SAMPLED_WINDOW {
                a[r][c] = pow;
                pow *= u;
            }
            for (k, col) in rhs.iter_mut().enumerate() {
                col[r] = self.points[i][k] - origin[k];
            }
        }
        let coeffs = solve_multi(a, rhs).ok_or_else(|| {
            Error::InvalidArgument(format!("singular sample window near t = {t}"))
        })?;
        Ok(coeffs
            .into_iter()
            .zip(origin)
            .map(|(c, o)| {
                let mut fact = 1.0;
                let d = (0..SAMPLED_WINDOW)
                    .map(|j| {
                        if j > 0 {
                            fact *= j as f64;
                        }
                        c[j] * fact / scale.powi(j as i32)
                    })
                    .enumerate()
                    .map(|(j, v)| if j == 0 { v + o } else { v })
                    .collect();
                Jet::from_derivatives(d)
            })
            .collect())
    }
}

/// Gaussian elimination with partial pivoting, shared matrix, several RHS.
fn solve_multi<const M: usize>(
    mut a: [[f64; M]; M],
    mut rhs: Vec<[f64; M]>,
) -> Option<Vec<[f64; M]>> {
    for col in 0..M {
        let piv = (col..M).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        for b in rhs.iter_mut() {
            b.swap(col, piv);
        }
        for row in col + 1..M {
            let f = a[row][col] / a[col][col];
            for c in col..M {
                a[row][c] -= f * a[col][c];
            }
            for b in rhs.iter_mut() {
                b[row] -= f * b[col];
            }
        }
    }
    for b in rhs.iter_mut() {
        for row in (0..M).rev() {
            let mut acc = b[row];
            for c in row + 1..M {
                acc -= a[row][c] * b[c];
            }
            b[row] = acc / a[row][row];
        }
    }
    Some(rhs)
}

/// Parses `dim N [on [a, b]] : name = expr; name = expr; ...`.
///
/// The interval defaults to `[0, 1]`; bounds may be constant expressions
/// such as `2*pi`.
pub fn parse_curve(src: &str) -> Result<CurveSpec> {
    let mut p = Parser::new(src, "t")?;
    let (kw, _, _) = p.expect_ident()?;
    if kw != "dim" {
        return p.syntax(format!("expected `dim`, found `{kw}`"));
    }
    let dim = match p.peek().tok {
        Tok::Num(v) if v.fract() == 0.0 && v >= 0.0 => v as usize,
        _ => return p.syntax("expected an integer dimension"),
    };
    p.bump();
    if dim < 3 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let mut interval = (0.0, 1.0);
    if matches!(&p.peek().tok, Tok::Ident(s) if s == "on") {
        p.expect_ident()?;
        p.expect_sym('[')?;
        let a = constant_bound(&mut p)?;
        p.expect_sym(',')?;
        let b = constant_bound(&mut p)?;
        p.expect_sym(']')?;
        interval = (a, b);
    }
    p.expect_sym(':')?;
    let mut names = Vec::new();
    let mut coords = Vec::new();
    loop {
        let (name, _, _) = p.expect_ident()?;
        p.expect_sym('=')?;
        coords.push(Expression::from_node(p.expr()?, "t"));
        names.push(name);
        if !p.eat_sym(';') {
            break;
        }
        if matches!(p.peek().tok, Tok::Eof) {
            break;
        }
    }
    p.expect_eof()?;
    if coords.len() != dim {
        return Err(Error::Arity {
            expected: dim,
            found: coords.len(),
        });
    }
    Ok(CurveSpec::analytic(AnalyticCurve::new(names, coords, interval)?))
}

fn constant_bound(p: &mut Parser<'_>) -> Result<f64> {
    let (line, column) = (p.peek().line, p.peek().col);
    let node = p.expr()?;
    if node.mentions_var() {
        return Err(Error::Syntax {
            line,
            column,
            message: "interval bounds must be constant".into(),
        });
    }
    Expression::from_node(node, "t").eval(0.0)
}

/// Derivative jets of an analytic curve's coordinates at `t`.
pub fn eval_jets(spec: &CurveSpec, t: f64, order: usize) -> Result<Vec<Jet>> {
    match spec.source() {
        CurveSource::Analytic(c) => c.jets_at(t, order),
        _ => Err(Error::InvalidArgument("eval_jets needs an analytic curve".into())),
    }
}
