//! File formats: apparatus and profile CSVs, sampled-curve input, and
//! input dispatch by extension.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::expr::{parse_curve, CurveSpec, SampledCurve};
use crate::frenet::FrenetApparatus;
use crate::harmonic::HarmonicProfile;
use crate::report::format_f64;
use crate::synthesize::CurvaturePrescription;

/// Header of the apparatus CSV for dimension `n`.
pub fn apparatus_header(n: usize) -> Vec<String> {
    let mut h = vec!["t".to_string(), "s".to_string()];
    h.extend((1..n).map(|i| format!("k_{i}")));
    for i in 1..=n {
        h.extend((1..=n).map(|c| format!("V{i}_{c}")));
    }
    h.extend((1..=n).map(|c| format!("x_{c}")));
    h
}

/// One row per grid point: `t, s, k_1..k_{n-1}`, the frame row by row, then
/// the curve point. The point columns make the file readable as a sampled
/// curve.
pub fn write_apparatus_csv<W: Write>(app: &FrenetApparatus, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(apparatus_header(app.dim()))?;
    for p in app.samples() {
        let mut row = vec![format_f64(p.t), format_f64(p.s)];
        row.extend(p.curvatures.iter().map(|k| format_f64(k.value())));
        row.extend(p.frame.iter().flatten().map(|&v| format_f64(v)));
        row.extend(p.point.iter().map(|&v| format_f64(v)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(serde::Serialize)]
struct ProfileHeader<'a> {
    kind: &'a str,
    n: usize,
    c0: Option<f64>,
}

/// A `# {json}` line with kind, `n` and `c0`, then columns
/// `s, value_i.., dvalue_i.., sumsq`.
pub fn write_profile_csv<W: Write>(prof: &HarmonicProfile, mut out: W) -> Result<()> {
    let header = ProfileHeader {
        kind: prof.kind.name(),
        n: prof.n,
        c0: prof.c0,
    };
    let json = serde_json::to_string(&header)?;
    writeln!(out, "# {json}")?;
    let idx = prof.first_index()..=prof.last_index();
    let mut w = csv::Writer::from_writer(out);
    let mut cols = vec!["s".to_string()];
    cols.extend(idx.clone().map(|i| format!("value_{i}")));
    cols.extend(idx.map(|i| format!("dvalue_{i}")));
    cols.push("sumsq".into());
    w.write_record(&cols)?;
    for p in 0..prof.len() {
        let mut row = vec![format_f64(prof.s[p])];
        row.extend(prof.values[p].iter().map(|&v| format_f64(v)));
        row.extend(prof.dvalues[p].iter().map(|&v| format_f64(v)));
        row.push(format_f64(prof.sumsq[p]));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a sampled curve. The parameter column is `t` (or `s`, else the
/// first column); coordinates are the `x_1..x_n` columns when present,
/// otherwise every remaining column. Lines starting with `#` are skipped.
pub fn read_sampled_csv<R: Read>(input: R) -> Result<CurveSpec> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let param = header
        .iter()
        .position(|h| h == "t")
        .or_else(|| header.iter().position(|h| h == "s"))
        .unwrap_or(0);
    let mut coords: Vec<usize> = (1..)
        .map_while(|i| header.iter().position(|h| *h == format!("x_{i}")))
        .collect();
    if coords.is_empty() {
        coords = (0..header.len()).filter(|&c| c != param).collect();
    }
    let mut params = Vec::new();
    let mut points = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let num = |c: usize| -> Result<f64> {
            let field = rec.get(c).unwrap_or("");
            field.parse::<f64>().map_err(|_| Error::Syntax {
                line: line + 2,
                column: c + 1,
                message: format!("expected a number, found `{field}`"),
            })
        };
        params.push(num(param)?);
        points.push(coords.iter().map(|&c| num(c)).collect::<Result<Vec<_>>>()?);
    }
    Ok(CurveSpec::sampled(SampledCurve::new(params, points)?))
}

/// Reads an input file: `.json` is a curvature prescription, `.csv` a
/// sampled curve, anything else the curve grammar.
pub fn read_input(path: &Path) -> Result<CurveSpec> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    match ext {
        "json" => Ok(CurveSpec::synthetic(CurvaturePrescription::from_json(
            &std::fs::read_to_string(path)?,
        )?)),
        "csv" => read_sampled_csv(std::fs::File::open(path)?),
        _ => parse_curve(&std::fs::read_to_string(path)?),
    }
}
