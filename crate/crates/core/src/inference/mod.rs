//! Set-valued regime inference: boundary scores, tiered envelopes over
//! admissible measurement readings, detrending, block-subsampling bands and
//! conservative classification.

mod detrend;
pub mod mc;
mod subsample;

pub use detrend::{detrend_local_linear, Detrended};
pub use subsample::{
    grid_critical_value, subsample_critical_value, CriticalValue, SubsampleConfig,
};

use crate::closure::{demand_at, power_cdf_table, MarginDist, TwoLayerParams};
use crate::error::{Error, Result};
use crate::stats::fit_line;
use crate::transition::TransitionSpec;

/// Premium-emergence score: zero-premium demand less required absorption.
pub fn score_pe(p: &TwoLayerParams) -> f64 {
    demand_at(0.0, p) - p.phi_req
}

/// Transition-feasibility margin: proposed growth less the full burden.
pub fn score_tf(spec: &TransitionSpec) -> f64 {
    let s = &spec.state;
    spec.g_new - (s.pi + (s.d - s.s) / s.b_prev + spec.rho_bar + spec.m)
}

/// Partial overlay on the closure parameters for one admissible reading.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PeOverlay {
    pub theta: Option<f64>,
    /// Added to θ after any override; the result is clamped to [0, 1].
    pub theta_shift: f64,
    pub psi: Option<f64>,
    pub z: Option<f64>,
    pub dist: Option<MarginDist>,
}

impl PeOverlay {
    pub fn apply(&self, base: &TwoLayerParams) -> TwoLayerParams {
        let mut p = base.clone();
        if let Some(t) = self.theta {
            p.theta = t;
        }
        p.theta = (p.theta + self.theta_shift).clamp(0.0, 1.0);
        if let Some(v) = self.psi {
            p.psi = v;
        }
        if let Some(v) = self.z {
            p.z = v;
        }
        if let Some(d) = &self.dist {
            p.dist = d.clone();
        }
        p
    }
}

/// Partial overlay on the debt concept and fiscal-burden inputs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TfOverlay {
    pub b: Option<f64>,
    pub d: Option<f64>,
    pub s: Option<f64>,
}

impl TfOverlay {
    pub fn apply(&self, base: &TransitionSpec) -> TransitionSpec {
        let mut t = base.clone();
        if let Some(v) = self.b {
            t.state.b_prev = v;
        }
        if let Some(v) = self.d {
            t.state.d = v;
        }
        if let Some(v) = self.s {
            t.state.s = v;
        }
        t
    }
}

/// One admissible reading. A variant of tier k belongs to every tier ≥ k.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementVariant<O> {
    pub id: String,
    pub tier: u8,
    pub overlay: O,
}

impl<O> MeasurementVariant<O> {
    pub fn new(id: impl Into<String>, tier: u8, overlay: O) -> Self {
        Self {
            id: id.into(),
            tier,
            overlay,
        }
    }
}

/// Baseline reading, θ ± `theta_shift` at tier 2, and power-CDF margins with
/// the same support at tier 3.
pub fn default_pe_variants(
    theta_shift: f64,
    powers: &[f64],
    c_bar: f64,
) -> Vec<MeasurementVariant<PeOverlay>> {
    let mut v = vec![
        MeasurementVariant::new("baseline", 1, PeOverlay::default()),
        MeasurementVariant::new(
            "theta_low",
            2,
            PeOverlay {
                theta_shift: -theta_shift,
                ..PeOverlay::default()
            },
        ),
        MeasurementVariant::new(
            "theta_high",
            2,
            PeOverlay {
                theta_shift,
                ..PeOverlay::default()
            },
        ),
    ];
    for &pw in powers {
        v.push(MeasurementVariant::new(
            format!("margin_power_{pw}"),
            3,
            PeOverlay {
                dist: Some(MarginDist::Table(power_cdf_table(c_bar, pw, 240))),
                ..PeOverlay::default()
            },
        ));
    }
    v
}

/// Baseline debt concept at tier 1 and the monitoring concept at tier 2.
pub fn default_tf_variants(
    b_baseline: f64,
    b_monitoring: f64,
) -> Vec<MeasurementVariant<TfOverlay>> {
    vec![
        MeasurementVariant::new(
            "baseline_concept",
            1,
            TfOverlay {
                b: Some(b_baseline),
                ..TfOverlay::default()
            },
        ),
        MeasurementVariant::new(
            "monitoring_concept",
            2,
            TfOverlay {
                b: Some(b_monitoring),
                ..TfOverlay::default()
            },
        ),
    ]
}

pub fn tier_scores_pe(
    base: &TwoLayerParams,
    variants: &[MeasurementVariant<PeOverlay>],
    tier: u8,
) -> Vec<(String, f64)> {
    variants
        .iter()
        .filter(|v| v.tier <= tier)
        .map(|v| (v.id.clone(), score_pe(&v.overlay.apply(base))))
        .collect()
}

pub fn tier_scores_tf(
    base: &TransitionSpec,
    variants: &[MeasurementVariant<TfOverlay>],
    tier: u8,
) -> Vec<(String, f64)> {
    variants
        .iter()
        .filter(|v| v.tier <= tier)
        .map(|v| (v.id.clone(), score_tf(&v.overlay.apply(base))))
        .collect()
}

/// Sign of a band relative to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BandLabel {
    Positive,
    Ambiguous,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InferenceMode {
    Pe,
    Tf,
}

impl InferenceMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pe" => Some(Self::Pe),
            "tf" => Some(Self::Tf),
            _ => None,
        }
    }
}

impl BandLabel {
    pub fn name(&self, mode: InferenceMode) -> &'static str {
        match (mode, self) {
            (InferenceMode::Pe, Self::Positive) => "robustly-interior",
            (InferenceMode::Pe, Self::Ambiguous) => "boundary-near",
            (InferenceMode::Pe, Self::Negative) => "robustly-premium-emergent",
            (InferenceMode::Tf, Self::Positive) => "feasible",
            (InferenceMode::Tf, Self::Ambiguous) => "marginal",
            (InferenceMode::Tf, Self::Negative) => "infeasible",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TierEnvelope {
    pub t: usize,
    pub lower: f64,
    pub upper: f64,
    pub argmin_id: String,
    pub argmax_id: String,
    /// Label of the raw envelope, without any band.
    pub label: BandLabel,
}

/// Lower and upper envelope over the scores of one tier. Ties keep the first
/// variant listed.
pub fn envelope(t: usize, scores: &[(String, f64)]) -> Result<TierEnvelope> {
    let first = scores
        .first()
        .ok_or_else(|| Error::Config("envelope needs at least one admissible variant".into()))?;
    let (mut lo, mut hi) = (first, first);
    for s in &scores[1..] {
        if s.1 < lo.1 {
            lo = s;
        }
        if s.1 > hi.1 {
            hi = s;
        }
    }
    Ok(TierEnvelope {
        t,
        lower: lo.1,
        upper: hi.1,
        argmin_id: lo.0.clone(),
        argmax_id: hi.0.clone(),
        label: sign_rule(lo.1, hi.1),
    })
}

fn sign_rule(lower: f64, upper: f64) -> BandLabel {
    if lower > 0.0 {
        BandLabel::Positive
    } else if upper < 0.0 {
        BandLabel::Negative
    } else {
        BandLabel::Ambiguous
    }
}

/// Positive only when the widened lower edge stays above zero, negative only
/// when the widened upper edge stays below it.
pub fn classify(env: &TierEnvelope, c_lower: f64, c_upper: f64) -> BandLabel {
    sign_rule(env.lower - c_lower, env.upper + c_upper)
}

/// One period of a banded envelope path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandedPoint {
    pub t: usize,
    pub lower: f64,
    pub upper: f64,
    pub c_lower: f64,
    pub c_upper: f64,
    pub label: BandLabel,
}

/// Half-widths for the last period of a window: each envelope edge is
/// detrended over the window and its remainder subsampled.
pub(crate) fn window_band(
    lower: &[f64],
    upper: &[f64],
    cfg: &SubsampleConfig,
) -> Result<(f64, f64)> {
    let h = cfg.window_h;
    let rl = detrend_local_linear(lower, h)?.remainder;
    let ru = detrend_local_linear(upper, h)?.remainder;
    Ok((
        subsample_critical_value(&rl, cfg)?.c,
        subsample_critical_value(&ru, cfg)?.c,
    ))
}

/// Classifies every period with a full trailing window of `cfg.window_h`
/// observations of the envelope edges.
pub fn banded_envelope(
    lower: &[f64],
    upper: &[f64],
    cfg: &SubsampleConfig,
) -> Result<Vec<BandedPoint>> {
    cfg.validate()?;
    if lower.len() != upper.len() {
        return Err(Error::Domain(
            "envelope edges must have equal length".into(),
        ));
    }
    let h = cfg.window_h;
    if lower.len() < h {
        return Err(Error::Estimation(format!(
            "banding needs at least {h} periods, got {}",
            lower.len()
        )));
    }
    (h - 1..lower.len())
        .map(|t| {
            let w = t + 1 - h..=t;
            let (c_lower, c_upper) = window_band(&lower[w.clone()], &upper[w], cfg)?;
            Ok(BandedPoint {
                t,
                lower: lower[t],
                upper: upper[t],
                c_lower,
                c_upper,
                label: sign_rule(lower[t] - c_lower, upper[t] + c_upper),
            })
        })
        .collect()
}

/// Annualised growth from a least-squares log-linear trend over the trailing
/// `window_quarters` observations of a quarterly level series.
pub fn trend_growth_estimate(gdp: &[f64], window_quarters: usize) -> Result<f64> {
    if window_quarters < 8 {
        return Err(Error::Domain(format!(
            "trend window must be >= 8 quarters, got {window_quarters}"
        )));
    }
    if gdp.len() < window_quarters {
        return Err(Error::Estimation(format!(
            "trend window of {window_quarters} quarters needs as many observations, got {}",
            gdp.len()
        )));
    }
    let tail = &gdp[gdp.len() - window_quarters..];
    if let Some(bad) = tail.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!(
            "GDP levels must be positive, got {bad}"
        )));
    }
    let x: Vec<f64> = (0..window_quarters).map(|i| i as f64).collect();
    let y: Vec<f64> = tail.iter().map(|v| v.ln()).collect();
    let fit =
        fit_line(&x, &y).ok_or_else(|| Error::Estimation("degenerate trend window".into()))?;
    Ok(4.0 * fit.slope)
}
