//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use helixkit::classify::{
    axis_angle, brute_force_axis, classify, reconstruct_axis, AxisEstimate, HelixKind, Method, Tolerances, Verdict,
    DEFAULT_BUDGET,
};
use helixkit::expr::{Expression, Jet};
use helixkit::frenet::{build_apparatus, FrenetApparatus, FrenetConfig};
use helixkit::harmonic::{fit_g_constant, functions_g, harmonic_h, harmonic_hstar, HarmonicProfile};
use helixkit::synthesize::{
    generic_negative, integrate_frenet, make_circular_helix, make_inclined_anti_fixture, make_inclined_fixture,
    make_v2_fixture, make_vn_anti_fixture, make_vn_fixture, CurvaturePrescription,
};

const FIXTURES_PER_KIND: u64 = 20;
const ANTI_FIXTURES: u64 = 10;
const ORACLE_RESOLUTION: usize = 64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: usize, title: &str, o: &Outcome) {
    let tag = if o.pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {title}: {}", o.detail);
}

struct KindEval {
    kind: HelixKind,
    algebraic: Verdict,
    differential: Verdict,
    profile: HarmonicProfile,
    axis: Option<AxisEstimate>,
}

struct Curve {
    label: String,
    n: usize,
    /// Kind the curve was constructed to have.
    expected: Option<HelixKind>,
    app: FrenetApparatus,
    evals: Vec<KindEval>,
}

fn evaluate(app: &FrenetApparatus, tol: &Tolerances) -> Vec<KindEval> {
    HelixKind::ALL
        .iter()
        .map(|&kind| {
            let profile = match kind {
                HelixKind::Inclined => harmonic_h(app).unwrap(),
                HelixKind::VnSlant => harmonic_hstar(app).unwrap(),
                HelixKind::V2Slant => functions_g(app, fit_g_constant(app).unwrap().0).unwrap(),
            };
            let algebraic = classify(kind, &profile, Method::Algebraic, tol).unwrap();
            let differential = classify(kind, &profile, Method::Differential, tol).unwrap();
            let axis = algebraic
                .is_helix
                .then(|| reconstruct_axis(kind, app, &profile, &algebraic, tol).unwrap());
            KindEval {
                kind,
                algebraic,
                differential,
                profile,
                axis,
            }
        })
        .collect()
}

fn synthesized(label: String, expected: Option<HelixKind>, p: CurvaturePrescription, tol: &Tolerances) -> Curve {
    let (_, app) = integrate_frenet(&p).unwrap_or_else(|e| panic!("{label}: {e}"));
    Curve {
        n: app.dim(),
        evals: evaluate(&app, tol),
        label,
        expected,
        app,
    }
}

type Maker = fn(usize, u64) -> helixkit::Result<CurvaturePrescription>;

fn build_corpus(tol: &Tolerances) -> Vec<Curve> {
    let mut jobs: Vec<(String, Option<HelixKind>, Box<dyn Fn() -> CurvaturePrescription + Send + Sync>)> = Vec::new();
    let makers: [(HelixKind, Maker); 3] = [
        (HelixKind::Inclined, make_inclined_fixture),
        (HelixKind::VnSlant, make_vn_fixture),
        (HelixKind::V2Slant, make_v2_fixture),
    ];
    for n in 3..=5 {
        for (kind, make) in makers {
            for seed in 0..FIXTURES_PER_KIND {
                jobs.push((
                    format!("{} n={n} seed={seed}", kind.name()),
                    Some(kind),
                    Box::new(move || make(n, seed).unwrap()),
                ));
            }
        }
        for seed in 0..FIXTURES_PER_KIND {
            jobs.push((
                format!("generic n={n} seed={seed}"),
                None,
                Box::new(move || generic_negative(n, seed).unwrap()),
            ));
        }
    }
    for seed in 0..ANTI_FIXTURES {
        jobs.push((
            format!("inclined-anti seed={seed}"),
            None,
            Box::new(move || make_inclined_anti_fixture(seed).unwrap()),
        ));
        jobs.push((
            format!("vn-anti seed={seed}"),
            None,
            Box::new(move || make_vn_anti_fixture(seed).unwrap()),
        ));
    }
    let mut corpus: Vec<Curve> = jobs
        .into_par_iter()
        .map(|(label, expected, make)| synthesized(label, expected, make(), tol))
        .collect();
    for (a, b) in [(2.0, 1.0), (1.0, 1.0), (1.0, -0.5)] {
        let app = build_apparatus(&make_circular_helix(a, b).unwrap(), 512, &FrenetConfig::default()).unwrap();
        corpus.push(Curve {
            label: format!("circular helix a={a} b={b}"),
            n: 3,
            expected: Some(HelixKind::Inclined),
            evals: evaluate(&app, tol),
            app,
        });
    }
    corpus
}

fn criterion_1(tol: &Tolerances) -> Outcome {
    let start = Instant::now();
    let app = build_apparatus(&make_circular_helix(2.0, 1.0).unwrap(), 512, &FrenetConfig::default()).unwrap();
    let h = harmonic_h(&app).unwrap();
    let alg = classify(HelixKind::Inclined, &h, Method::Algebraic, tol).unwrap();
    let diff = classify(HelixKind::Inclined, &h, Method::Differential, tol).unwrap();
    let axis = alg
        .is_helix
        .then(|| reconstruct_axis(HelixKind::Inclined, &app, &h, &alg, tol).unwrap());
    let elapsed = start.elapsed().as_secs_f64();

    let k1 = app.curvature_values(1).iter().map(|k| (k - 0.4).abs()).fold(0.0, f64::max);
    let k2 = app.curvature_values(2).iter().map(|k| (k - 0.2).abs()).fold(0.0, f64::max);
    let h1 = h.series(1);
    let h1_err = h1.iter().map(|v| (v - 2.0).abs()).fold(0.0, f64::max);
    let h1_spread = h1.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - h1.iter().cloned().fold(f64::INFINITY, f64::min);
    let (axis_err, cos_err) = match &axis {
        Some(a) => (
            a.x.iter().zip([0.0, 0.0, 1.0]).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max),
            (a.phi.cos() - 1.0 / 5f64.sqrt()).abs(),
        ),
        None => (f64::INFINITY, f64::INFINITY),
    };
    let pass = k1 <= 1e-9
        && k2 <= 1e-9
        && h1_err <= 1e-9
        && h1_spread <= 1e-9
        && alg.is_helix
        && diff.is_helix
        && axis_err <= 1e-6
        && cos_err <= 1e-9
        && elapsed < 1.0;
    Outcome {
        pass,
        detail: format!(
            "|k1-0.4|={k1:.1e} |k2-0.2|={k2:.1e} |H1-2|={h1_err:.1e} spread(H1)={h1_spread:.1e} \
             inclined={}/{} axis err={axis_err:.1e} cos err={cos_err:.1e} runtime={elapsed:.3}s",
            alg.is_helix, diff.is_helix
        ),
    }
}

fn criterion_2(corpus: &[Curve]) -> Outcome {
    let mut checked = 0;
    let mut disagree = Vec::new();
    let mut missed = Vec::new();
    let mut worst_positive: f64 = 0.0;
    for c in corpus.iter().filter(|c| c.label.contains("seed") && !c.label.contains("anti")) {
        for e in &c.evals {
            checked += 1;
            if e.algebraic.is_helix != e.differential.is_helix {
                disagree.push(format!("{} [{}]", c.label, e.kind.name()));
            }
            if c.expected == Some(e.kind) {
                worst_positive = worst_positive
                    .max(e.algebraic.constancy_residual)
                    .max(e.differential.constancy_residual);
                if !e.algebraic.is_helix {
                    missed.push(format!("{} [{}]", c.label, e.kind.name()));
                }
            }
        }
    }
    Outcome {
        pass: disagree.is_empty() && missed.is_empty(),
        detail: format!(
            "{checked} verdict pairs over {} fixtures (n = 3, 4, 5), {} disagreements, {} constructed positives missed, \
             worst positive residual {worst_positive:.1e}{}",
            corpus.iter().filter(|c| c.label.contains("seed") && !c.label.contains("anti")).count(),
            disagree.len(),
            missed.len(),
            if disagree.is_empty() { String::new() } else { format!(" first: {}", disagree[0]) }
        ),
    }
}

fn criterion_3(corpus: &[Curve], tol: &Tolerances) -> Outcome {
    let mut failures = Vec::new();
    let mut max_spread: f64 = 0.0;
    let mut max_last: f64 = 0.0;
    let mut count = 0;
    for c in corpus.iter().filter(|c| c.label.contains("anti")) {
        count += 1;
        let kind = if c.label.starts_with("inclined") { HelixKind::Inclined } else { HelixKind::VnSlant };
        let e = c.evals.iter().find(|e| e.kind == kind).unwrap();
        let spread = e.algebraic.details.sumsq_max - e.algebraic.details.sumsq_min;
        let last = e.profile.series(2).iter().map(|v| v.abs()).fold(0.0, f64::max);
        max_spread = max_spread.max(spread);
        max_last = max_last.max(last);
        let oracle = brute_force_axis(&c.app, kind.frame_index(4), ORACLE_RESOLUTION, tol, DEFAULT_BUDGET).unwrap();
        if spread > 1e-8 || last > 1e-12 || e.algebraic.is_helix || e.differential.is_helix || oracle.is_some() {
            failures.push(c.label.clone());
        }
    }
    Outcome {
        pass: failures.is_empty() && count > 0,
        detail: format!(
            "{count} E^4 anti-fixtures: max spread(sum of squares)={max_spread:.1e}, max |last harmonic|={max_last:.1e}, \
             {} classified or oracle-confirmed as helices (R = {ORACLE_RESOLUTION})",
            failures.len()
        ),
    }
}

/// `max |<V_a, X> - f_i <V_b, X>|` for the relation matching `kind`.
fn relation_deviation(c: &Curve, e: &KindEval, x: &[f64]) -> f64 {
    let n = c.n;
    let dot = |v: &[f64]| v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    let mut worst: f64 = 0.0;
    for (p, q) in c.app.samples().iter().enumerate() {
        let pairs: Vec<(usize, usize, usize)> = match e.kind {
            HelixKind::Inclined => (1..=n - 2).map(|i| (i, i + 2, 1)).collect(),
            HelixKind::VnSlant => (1..=n - 2).map(|i| (i, n - i - 1, n)).collect(),
            HelixKind::V2Slant => (1..=n).map(|i| (i, i, 2)).collect(),
        };
        for (i, a, b) in pairs {
            worst = worst.max((dot(q.v(a)) - e.profile.value(p, i) * dot(q.v(b))).abs());
        }
    }
    worst
}

fn criterion_4(corpus: &[Curve]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut bad = Vec::new();
    for c in corpus {
        for e in &c.evals {
            if let Some(axis) = &e.axis {
                count += 1;
                let d = relation_deviation(c, e, &axis.x);
                worst = worst.max(d);
                if d > 1e-6 {
                    bad.push(format!("{} [{}] {d:.1e}", c.label, e.kind.name()));
                }
            }
        }
    }
    Outcome {
        pass: bad.is_empty() && count > 0,
        detail: format!(
            "{count} positive verdicts, max relation deviation {worst:.1e}{}",
            bad.first().map(|b| format!(", first failure {b}")).unwrap_or_default()
        ),
    }
}

fn criterion_5(corpus: &[Curve]) -> Outcome {
    let (mut norm, mut dev, mut spread) = (0.0f64, 0.0f64, 0.0f64);
    let mut count = 0;
    let mut bad = Vec::new();
    for c in corpus {
        for e in &c.evals {
            if let Some(a) = &e.axis {
                count += 1;
                norm = norm.max(a.norm_error);
                dev = dev.max(a.max_deviation);
                spread = spread.max(a.verification.spread);
                if a.norm_error > 1e-9 || a.max_deviation > 1e-6 || a.verification.spread > 1e-6 || !a.verification.pass {
                    bad.push(format!("{} [{}]", c.label, e.kind.name()));
                }
            }
        }
    }
    Outcome {
        pass: bad.is_empty() && count > 0,
        detail: format!(
            "{count} reconstructed axes: max ||X|-1|={norm:.1e}, max pointwise deviation={dev:.1e}, \
             max verify spread={spread:.1e}{}",
            bad.first().map(|b| format!(", first failure {b}")).unwrap_or_default()
        ),
    }
}

/// Random expression built from operations whose derivatives stay moderate
/// on `[-1, 1]`.
fn random_expression(rng: &mut StdRng, depth: usize) -> String {
    if depth == 0 || rng.random_bool(0.2) {
        return if rng.random_bool(0.7) {
            format!("({:.3}*t + {:.3})", rng.random_range(-1.5..1.5), rng.random_range(-1.0..1.0))
        } else {
            format!("{:.3}", rng.random_range(0.5..2.0))
        };
    }
    let a = random_expression(rng, depth - 1);
    let b = random_expression(rng, depth - 1);
    match rng.random_range(0..10) {
        0 => format!("{a} + {b}"),
        1 => format!("{a} - {b}"),
        2 => format!("({a})*({b})"),
        3 => format!("({a})/(1.5 + cos({b}))"),
        4 => format!("sin({a})"),
        5 => format!("cos({a})"),
        6 => format!("exp(0.5*sin({a}))"),
        7 => format!("sqrt(1 + ({a})^2)"),
        8 => format!("log(2 + sin({a}))"),
        _ => format!("(0.5*sin({a}))^3"),
    }
}

fn criterion_6() -> Outcome {
    // jets against fourth-order central differences of the next-lower entry
    let mut rng = StdRng::seed_from_u64(2024);
    let order = 4;
    let h = 1e-3;
    let mut worst_jet: f64 = 0.0;
    for _ in 0..100 {
        let src = random_expression(&mut rng, 3);
        let e = Expression::parse(&src, "t").unwrap();
        let t = rng.random_range(-1.0..1.0);
        let at = |x: f64| -> Jet { e.eval_jet(x, order).unwrap() };
        let centre = at(t);
        let (m2, m1, p1, p2) = (at(t - 2.0 * h), at(t - h), at(t + h), at(t + 2.0 * h));
        for k in 1..=order {
            let g = |j: &Jet| j.get(k - 1).unwrap();
            let fd = (g(&m2) - 8.0 * g(&m1) + 8.0 * g(&p1) - g(&p2)) / (12.0 * h);
            let exact = centre.get(k).unwrap();
            worst_jet = worst_jet.max((fd - exact).abs() / exact.abs().max(1.0));
        }
        assert!((centre.value() - e.eval(t).unwrap()).abs() <= 1e-12 * centre.value().abs().max(1.0));
    }

    // RK4 endpoint error on the (0.4, 0.2) helix under three halvings
    let endpoint = |s: f64| -> [f64; 3] {
        let w = 1.0 / 5f64.sqrt();
        let t = s * w;
        let local = [2.0 * t.cos() - 2.0, 2.0 * t.sin(), t];
        let rows = [[0.0, 2.0 * w, w], [-1.0, 0.0, 0.0], [0.0, -w, 2.0 * w]];
        rows.map(|r| r.iter().zip(&local).map(|(a, b)| a * b).sum())
    };
    let errors: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
        .iter()
        .map(|&h| {
            let p = CurvaturePrescription::new(&["0.4", "0.2"], (0.0, 12.8), h).unwrap().with_samples(9);
            let (_, app) = integrate_frenet(&p).unwrap();
            let got = &app.samples().last().unwrap().point;
            got.iter().zip(endpoint(12.8)).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
        })
        .collect();
    let rk_order = errors.windows(2).map(|w| (w[0] / w[1]).log2()).fold(f64::INFINITY, f64::min);

    // Frenet equations by central differences on nested grids
    let spec = helixkit::expr::parse_curve(
        "dim 4 on [0, 3]: x = cos(t); y = sin(t); z = cos(2*t) + t^2/5; w = sin(2*t)",
    )
    .unwrap();
    let residual = |size: usize| -> f64 {
        let app = build_apparatus(&spec, size, &FrenetConfig::default()).unwrap();
        let s = app.samples();
        let n = app.dim();
        let mut worst: f64 = 0.0;
        for p in 1..s.len() - 1 {
            let dt = s[p + 1].t - s[p - 1].t;
            let v = s[p].speed.value();
            for i in 1..=n {
                for c in 0..n {
                    let fd = (s[p + 1].v(i)[c] - s[p - 1].v(i)[c]) / dt;
                    let mut rhs = 0.0;
                    if i > 1 {
                        rhs -= s[p].k(i - 1).value() * s[p].v(i - 1)[c];
                    }
                    if i < n {
                        rhs += s[p].k(i).value() * s[p].v(i + 1)[c];
                    }
                    worst = worst.max((fd - v * rhs).abs());
                }
            }
        }
        worst
    };
    let r: Vec<f64> = [65, 129, 257].iter().map(|&m| residual(m)).collect();
    let ratios: Vec<f64> = r.windows(2).map(|w| w[0] / w[1]).collect();
    let frenet_ok = ratios.iter().all(|q| (3.5..=4.5).contains(q));

    Outcome {
        pass: worst_jet <= 1e-5 && rk_order >= 3.8 && frenet_ok,
        detail: format!(
            "jet vs FD max rel err={worst_jet:.1e} (100 pairs, orders 1-4), RK4 min order={rk_order:.2}, \
             Frenet residual ratios={:.2}/{:.2}",
            ratios[0], ratios[1]
        ),
    }
}

fn criterion_7(corpus: &[Curve], tol: &Tolerances, started: Instant) -> Outcome {
    let cases: Vec<(&Curve, &KindEval)> = corpus
        .iter()
        .filter(|c| c.n <= 4)
        .flat_map(|c| c.evals.iter().map(move |e| (c, e)))
        .collect();
    let results: Vec<(bool, f64, String)> = cases
        .par_iter()
        .map(|(c, e)| {
            let oracle = brute_force_axis(&c.app, e.kind.frame_index(c.n), ORACLE_RESOLUTION, tol, DEFAULT_BUDGET).unwrap();
            let angle = match (&oracle, &e.axis) {
                (Some(o), Some(a)) => axis_angle(&o.x, &a.x),
                _ => 0.0,
            };
            (oracle.is_some() == e.algebraic.is_helix, angle, format!("{} [{}]", c.label, e.kind.name()))
        })
        .collect();
    let disagree: Vec<&String> = results.iter().filter(|r| !r.0).map(|r| &r.2).collect();
    let worst_angle = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let positives = cases.iter().filter(|(_, e)| e.algebraic.is_helix).count();
    let elapsed = started.elapsed().as_secs_f64();
    Outcome {
        pass: disagree.is_empty() && worst_angle <= 1e-3 && elapsed < 300.0,
        detail: format!(
            "{} (curve, kind) cases with n <= 4 ({positives} positive), {} disagreements, \
             max reconstructed/oracle axis angle={worst_angle:.1e} rad, corpus runtime={elapsed:.1}s{}",
            cases.len(),
            disagree.len(),
            disagree.first().map(|d| format!(", first {d}")).unwrap_or_default()
        ),
    }
}

fn main() -> ExitCode {
    let tol = Tolerances::default();
    let mut all = true;
    let mut emit = |id: usize, title: &str, o: Outcome| {
        all &= o.pass;
        report(id, title, &o);
    };
    emit(1, "circular-helix ground truth", criterion_1(&tol));

    let started = Instant::now();
    let corpus = build_corpus(&tol);
    emit(2, "algebraic/differential equivalence", criterion_2(&corpus));
    emit(3, "necessity without sufficiency (E^4 anti-fixtures)", criterion_3(&corpus, &tol));
    emit(4, "frame/axis relations on positive verdicts", criterion_4(&corpus));
    emit(5, "axis constancy", criterion_5(&corpus));
    emit(6, "numerical hygiene", criterion_6());
    emit(7, "oracle equivalence", criterion_7(&corpus, &tol, started));

    if all {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
