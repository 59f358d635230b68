use crate::error::{Error, Result};
use crate::stats::fit_line;

/// Linear-trend estimates of the captive share and an optional break test.
///
/// Slopes are per unit of the time column, so a time column in years gives
/// annual slopes; the decline rate κ is the negated slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaEstimate {
    pub slope_full: f64,
    pub slope_pre: Option<f64>,
    pub slope_post: Option<f64>,
    /// Chow F statistic for a trend break at the given index.
    pub chow_f: Option<f64>,
}

impl KappaEstimate {
    pub fn kappa(&self) -> f64 {
        -self.slope_full
    }
}

/// Minimum observations for the full-sample trend.
pub const MIN_OBS: usize = 8;
/// Minimum observations on each side of a break.
pub const MIN_SIDE: usize = 3;

/// OLS slopes of φ on time, with a pooled-versus-split Chow F when
/// `break_index` is given. Observations before `break_index` form the first
/// regime.
pub fn estimate_kappa(series: &[(f64, f64)], break_index: Option<usize>) -> Result<KappaEstimate> {
    let n = series.len();
    if n < MIN_OBS {
        return Err(Error::Estimation(format!(
            "trend estimate needs at least {MIN_OBS} observations, got {n}"
        )));
    }
    if series.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
        return Err(Error::Estimation(
            "series contains non-finite values".into(),
        ));
    }
    let (t, y): (Vec<f64>, Vec<f64>) = series.iter().copied().unzip();
    let full =
        fit_line(&t, &y).ok_or_else(|| Error::Estimation("time column has no variation".into()))?;

    let Some(k) = break_index else {
        return Ok(KappaEstimate {
            slope_full: full.slope,
            slope_pre: None,
            slope_post: None,
            chow_f: None,
        });
    };
    if k < MIN_SIDE || n - k.min(n) < MIN_SIDE {
        return Err(Error::Estimation(format!(
            "break index {k} leaves fewer than {MIN_SIDE} points on one side of {n}"
        )));
    }
    let pre = fit_line(&t[..k], &y[..k])
        .ok_or_else(|| Error::Estimation("pre-break segment has no time variation".into()))?;
    let post = fit_line(&t[k..], &y[k..])
        .ok_or_else(|| Error::Estimation("post-break segment has no time variation".into()))?;

    // Two parameters per regime.
    let params = 2.0;
    let dof = n as f64 - 2.0 * params;
    let split = pre.ssr + post.ssr;
    let gain = (full.ssr - split).max(0.0);
    // Rounding noise floor for sums of squared residuals.
    let scale = y.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let noise = n as f64 * (64.0 * f64::EPSILON * scale).powi(2);
    let chow_f = if gain <= noise {
        0.0
    } else if split <= noise {
        f64::INFINITY
    } else {
        (gain / params) / (split / dof)
    };
    Ok(KappaEstimate {
        slope_full: full.slope,
        slope_pre: Some(pre.slope),
        slope_post: Some(post.slope),
        chow_f: Some(chow_f),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> Vec<(f64, f64)> {
        (0..n).map(|i| (i as f64, 0.9 - 0.002 * i as f64)).collect()
    }

    #[test]
    fn exact_line() {
        let s = line(20);
        let est = estimate_kappa(&s, Some(10)).unwrap();
        assert!((est.slope_full + 0.002).abs() < 1e-10 * 0.002);
        assert!((est.kappa() - 0.002).abs() < 1e-12);
        for k in 3..=17 {
            assert_eq!(estimate_kappa(&s, Some(k)).unwrap().chow_f, Some(0.0));
        }
    }

    #[test]
    fn two_segments() {
        let mut s = Vec::new();
        for i in 0..12 {
            s.push((i as f64, 0.85 + 0.001 * i as f64));
        }
        let top = 0.85 + 0.001 * 11.0;
        for i in 12..24 {
            s.push((i as f64, top - 0.002 * (i as f64 - 11.0)));
        }
        let est = estimate_kappa(&s, Some(12)).unwrap();
        assert!((est.slope_pre.unwrap() - 0.001).abs() < 1e-10);
        assert!((est.slope_post.unwrap() + 0.002).abs() < 1e-10);
        assert!(est.chow_f.unwrap() > 1e6);
    }

    #[test]
    fn noisy_break_is_finite_and_large() {
        let mut s = Vec::new();
        for i in 0..40 {
            let t = i as f64;
            let trend = if i < 20 {
                0.85 + 0.001 * t
            } else {
                0.87 - 0.002 * (t - 20.0)
            };
            let wiggle = 1e-4 * ((i * 7919) % 13) as f64 / 13.0;
            s.push((t, trend + wiggle));
        }
        let f = estimate_kappa(&s, Some(20)).unwrap().chow_f.unwrap();
        assert!(f.is_finite() && f > 100.0);
    }

    #[test]
    fn flat_series() {
        let s: Vec<_> = (0..10).map(|i| (i as f64, 0.9)).collect();
        assert_eq!(estimate_kappa(&s, None).unwrap().slope_full, 0.0);
    }

    #[test]
    fn insufficient_data() {
        assert!(matches!(
            estimate_kappa(&line(7), None),
            Err(Error::Estimation(_))
        ));
        assert!(estimate_kappa(&line(10), Some(2)).is_err());
        assert!(estimate_kappa(&line(10), Some(8)).is_err());
        assert!(estimate_kappa(&line(10), Some(7)).is_ok());
    }
}
