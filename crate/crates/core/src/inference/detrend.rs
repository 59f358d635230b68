use crate::error::{Error, Result};
use crate::stats::fit_line;

#[derive(Debug, Clone, PartialEq)]
pub struct Detrended {
    pub trend: Vec<f64>,
    pub remainder: Vec<f64>,
}

/// Local-linear trend: each point takes the fitted value of a least-squares
/// line over the length-`window_h` window centred on it, shifted inward at
/// the edges. With `window_h` equal to the series length this is one line.
pub fn detrend_local_linear(series: &[f64], window_h: usize) -> Result<Detrended> {
    if window_h < 4 {
        return Err(Error::Domain(format!(
            "detrending window must be >= 4, got {window_h}"
        )));
    }
    let n = series.len();
    if n < window_h {
        return Err(Error::Estimation(format!(
            "detrending window {window_h} exceeds series length {n}"
        )));
    }
    let x: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let mut trend = Vec::with_capacity(n);
    let mut cached: Option<(usize, crate::stats::LineFit)> = None;
    for t in 0..n {
        let start = t.saturating_sub(window_h / 2).min(n - window_h);
        let fit = match cached {
            Some((s, f)) if s == start => f,
            _ => {
                let f = fit_line(
                    &x[start..start + window_h],
                    &series[start..start + window_h],
                )
                .ok_or_else(|| Error::Estimation("degenerate detrending window".into()))?;
                cached = Some((start, f));
                f
            }
        };
        trend.push(fit.at(t as f64));
    }
    let remainder = series.iter().zip(&trend).map(|(y, m)| y - m).collect();
    Ok(Detrended { trend, remainder })
}
