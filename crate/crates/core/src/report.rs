//! End-to-end analysis of one curve and its JSON report.

use std::collections::BTreeMap;
use std::io;

use serde::ser::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::classify::{
    brute_force_axis, classify, reconstruct_axis, AxisEstimate, HelixKind, Method, Tolerances, Verdict,
    DEFAULT_BUDGET,
};
use crate::error::{Error, Result};
use crate::expr::{CurveSource, CurveSpec};
use crate::frenet::{build_apparatus, check_nondegenerate, FrenetApparatus, FrenetConfig, NondegeneracyReport};
use crate::harmonic::{fit_g_constant, functions_g, profile, HarmonicProfile, ProfileKind};

pub const DEFAULT_GRID: usize = 512;

#[derive(Clone, Debug)]
pub struct AnalysisConfig {
    pub grid: usize,
    pub frenet: FrenetConfig,
    pub tolerances: Tolerances,
    pub kinds: Vec<HelixKind>,
    /// Sphere resolution for the brute-force cross-check, if enabled.
    pub oracle: Option<usize>,
    pub budget: u128,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            grid: DEFAULT_GRID,
            frenet: FrenetConfig::default(),
            tolerances: Tolerances::default(),
            kinds: HelixKind::ALL.to_vec(),
            oracle: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid < crate::frenet::MIN_GRID {
            return Err(Error::InvalidArgument(format!(
                "grid size must be at least {}, got {}",
                crate::frenet::MIN_GRID,
                self.grid
            )));
        }
        if self.kinds.is_empty() {
            return Err(Error::InvalidArgument("no classifiers selected".into()));
        }
        self.tolerances.validate()
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CurveInfo {
    pub name: String,
    pub source: &'static str,
    pub interval: [f64; 2],
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct OracleResult {
    pub resolution: usize,
    pub found: bool,
    /// Whether `found` matches the algebraic verdict.
    pub agrees: bool,
    pub axis: Option<AxisEstimate>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct GridInfo {
    pub size: usize,
    pub jet_order: usize,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Report {
    pub curve: CurveInfo,
    pub n: usize,
    pub verdicts: Vec<Verdict>,
    /// Reconstructed axis per kind, `null` when the algebraic verdict is negative.
    pub axis: BTreeMap<HelixKind, Option<AxisEstimate>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<BTreeMap<HelixKind, OracleResult>>,
    pub tolerances: Tolerances,
    pub grid: GridInfo,
    pub nondegeneracy: NondegeneracyReport,
}

impl Report {
    pub fn verdict(&self, kind: HelixKind, method: Method) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.kind == kind && v.method == method)
    }

    /// Algebraic verdict of `kind`, if it was run.
    pub fn is_helix(&self, kind: HelixKind) -> Option<bool> {
        self.verdict(kind, Method::Algebraic).map(|v| v.is_helix)
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }
}

/// Report plus the intermediate data it was computed from.
pub struct Analysis {
    pub report: Report,
    pub apparatus: FrenetApparatus,
    pub profiles: Vec<HarmonicProfile>,
}

fn source_name(spec: &CurveSpec) -> &'static str {
    match spec.source() {
        CurveSource::Analytic(_) => "analytic",
        CurveSource::Sampled(_) => "sampled",
        CurveSource::Synthetic(_) => "prescription",
    }
}

/// Builds the apparatus, checks non-degeneracy, runs the selected
/// classifiers with both methods and reconstructs axes for positive kinds.
pub fn analyze(name: &str, spec: &CurveSpec, cfg: &AnalysisConfig) -> Result<Analysis> {
    cfg.validate()?;
    let app = build_apparatus(spec, cfg.grid, &cfg.frenet)?;
    let tol = &cfg.tolerances;
    let nondegeneracy = check_nondegenerate(&app, tol.nonzero);
    if let Some(c) = nondegeneracy.crossings.first() {
        return Err(Error::Degenerate {
            t: app.grid()[c.grid_index],
            step: c.curvature + 1,
        });
    }
    let n = app.dim();
    let mut kinds = cfg.kinds.clone();
    kinds.sort();
    kinds.dedup();

    let mut verdicts = Vec::new();
    let mut axis = BTreeMap::new();
    let mut oracle = cfg.oracle.map(|_| BTreeMap::new());
    let mut profiles = Vec::new();
    for kind in kinds {
        let (prof, fit) = match kind.profile_kind() {
            ProfileKind::G => {
                let (c0, residual) = fit_g_constant(&app)?;
                (functions_g(&app, c0)?, Some(residual))
            }
            other => (profile(&app, other)?, None),
        };
        let mut alg = classify(kind, &prof, Method::Algebraic, tol)?;
        let mut diff = classify(kind, &prof, Method::Differential, tol)?;
        alg.details.fit_residual = fit;
        diff.details.fit_residual = fit;
        let est = if alg.is_helix {
            Some(reconstruct_axis(kind, &app, &prof, &alg, tol)?)
        } else {
            None
        };
        if let (Some(map), Some(res)) = (oracle.as_mut(), cfg.oracle) {
            let found = brute_force_axis(&app, kind.frame_index(n), res, tol, cfg.budget)?;
            map.insert(
                kind,
                OracleResult {
                    resolution: res,
                    found: found.is_some(),
                    agrees: found.is_some() == alg.is_helix,
                    axis: found,
                },
            );
        }
        axis.insert(kind, est);
        verdicts.push(alg);
        verdicts.push(diff);
        profiles.push(prof);
    }
    let (t0, t1) = spec.interval();
    let report = Report {
        curve: CurveInfo {
            name: name.to_string(),
            source: source_name(spec),
            interval: [t0, t1],
        },
        n,
        verdicts,
        axis,
        oracle,
        tolerances: *tol,
        grid: GridInfo {
            size: cfg.grid,
            jet_order: cfg.frenet.jet_order_for(n),
        },
        nondegeneracy,
    };
    Ok(Analysis {
        report,
        apparatus: app,
        profiles,
    })
}

/// Pretty JSON with every float written to 17 significant digits.
pub struct FullPrecision<'a>(PrettyFormatter<'a>);

impl Default for FullPrecision<'_> {
    fn default() -> Self {
        FullPrecision(PrettyFormatter::with_indent(b"  "))
    }
}

/// `x` in scientific notation with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl Formatter for FullPrecision<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision::default());
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        let xs = [0.1, 1.0 / 3.0, -2.5e-300, 4.0, 0.0, f64::MAX, 5e-324];
        let s = to_json_string(&xs);
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, xs);
        assert!(s.contains("1.0000000000000001e-1"));
    }

    #[test]
    fn helix_report_order_and_verdicts() {
        let spec = crate::synthesize::make_circular_helix(2.0, 1.0).unwrap();
        let a = analyze("helix", &spec, &AnalysisConfig::default()).unwrap();
        let r = &a.report;
        assert_eq!(r.is_helix(HelixKind::Inclined), Some(true));
        assert_eq!(r.is_helix(HelixKind::VnSlant), Some(true));
        assert_eq!(r.is_helix(HelixKind::V2Slant), Some(false));
        let json = r.to_json();
        let keys = ["\"curve\"", "\"n\"", "\"verdicts\"", "\"axis\"", "\"tolerances\"", "\"grid\""];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{pos:?}");
        assert_eq!(json, analyze("helix", &spec, &AnalysisConfig::default()).unwrap().report.to_json());
    }
}
