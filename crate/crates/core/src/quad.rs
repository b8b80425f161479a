//! Cumulative Simpson quadrature on uniform grids.

/// Running integral of `f` sampled on a uniform grid with spacing `h`.
///
/// Even nodes use composite Simpson; odd nodes add the last interval from
/// the quadratic through the three most recent nodes. Needs at least three
/// samples.
pub fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 3, "cumulative Simpson needs at least three samples");
    let mut out = vec![0.0; n];
    out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    for i in 2..n {
        out[i] = if i % 2 == 0 {
            out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i])
        } else {
            out[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i])
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_cubics() {
        let h = 0.1;
        let f: Vec<f64> = (0..11).map(|i| (i as f64 * h).powi(3) - 2.0 * i as f64 * h).collect();
        let q = cumulative_simpson(&f, h);
        for (i, v) in q.iter().enumerate() {
            let x = i as f64 * h;
            let want = x.powi(4) / 4.0 - x * x;
            // odd nodes use a quadratic, exact up to degree 2 plus O(h^4) for cubics
            assert!((v - want).abs() < 1e-4, "{i}: {v} vs {want}");
            if i % 2 == 0 {
                assert!((v - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let err = |n: usize| {
            let h = 2.0 / (n - 1) as f64;
            let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).exp()).collect();
            let q = cumulative_simpson(&f, h);
            q.iter()
                .enumerate()
                .map(|(i, v)| (v - ((i as f64 * h).exp() - 1.0)).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(33) / err(65);
        assert!(ratio > 12.0, "ratio {ratio}");
    }
}
