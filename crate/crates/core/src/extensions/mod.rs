//! Dynamic extensions of the core recursion: compression sprints and their
//! ratchet, the repression dividend, the fiscal paradox, the foreign-driven
//! threshold shift, the captive-share clocks and the control-rights composite.

mod kappa;

pub use kappa::{estimate_kappa, KappaEstimate};

use crate::error::{finite, Error, Result};

/// A temporary deepening of the interest-growth compression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SprintSpec {
    /// r − g outside the sprint.
    pub baseline_spread: f64,
    /// r − g during the sprint; must be below `baseline_spread`.
    pub sprint_spread: f64,
    /// Sprint length in whole years.
    pub years: u32,
    /// Debt ratio when the sprint starts.
    pub b0: f64,
}

impl Default for SprintSpec {
    fn default() -> Self {
        Self {
            baseline_spread: -0.008,
            sprint_spread: -0.013,
            years: 2,
            b0: 2.40,
        }
    }
}

impl SprintSpec {
    pub fn validate(&self) -> Result<()> {
        finite("baseline_spread", self.baseline_spread)?;
        finite("sprint_spread", self.sprint_spread)?;
        finite("b0", self.b0)?;
        if !(self.sprint_spread < self.baseline_spread) {
            return Err(Error::Domain(format!(
                "sprint_spread ({}) must be below baseline_spread ({})",
                self.sprint_spread, self.baseline_spread
            )));
        }
        if self.years < 1 {
            return Err(Error::Domain(
                "sprint length must be at least 1 year".into(),
            ));
        }
        Ok(())
    }
}

/// Upper bound on the cumulative debt-ratio improvement from a sprint,
/// T·|Δspread|·b0.
pub fn sprint_cumulative_improvement(spec: &SprintSpec) -> Result<f64> {
    spec.validate()?;
    Ok(f64::from(spec.years) * (spec.sprint_spread - spec.baseline_spread).abs() * spec.b0)
}

/// Improvement still left `s` years after the sprint ends.
pub fn ratchet_gap(delta_t: f64, baseline_spread: f64, s: f64) -> Result<f64> {
    finite("delta_T", delta_t)?;
    if !(baseline_spread.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "|baseline_spread| must be < 1, got {baseline_spread}"
        )));
    }
    if !(s >= 0.0) {
        return Err(Error::Domain(format!("s must be >= 0, got {s}")));
    }
    Ok(delta_t * (1.0 + baseline_spread).powf(s))
}

/// Annual transfer from bondholders, ε·b, as a fraction of GDP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepressionDividend {
    pub value: f64,
    /// False when ε ≤ 0: the dividend channel is switched off.
    pub active: bool,
}

pub fn repression_dividend(epsilon: f64, b_prev: f64) -> RepressionDividend {
    RepressionDividend {
        value: epsilon * b_prev,
        active: epsilon > 0.0,
    }
}

/// Marginal gain C_t = μ·λ·ε·b_t² along a debt path.
pub fn marginal_gain_sequence(
    mu: f64,
    lambda: f64,
    epsilon: f64,
    debt_path: &[f64],
) -> Result<Vec<f64>> {
    if !(epsilon > 0.0) {
        return Err(Error::InactiveRegime(format!(
            "marginal gains need epsilon > 0, got {epsilon}"
        )));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::Domain(format!("mu must be > 0, got {mu}")));
    }
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(format!(
            "lambda must lie in (0,1], got {lambda}"
        )));
    }
    debt_path
        .iter()
        .map(|&b| finite("debt_path", b).map(|b| mu * lambda * epsilon * b * b))
        .collect()
}

/// Whether deficit relief worsens the debt flow under negative r − g.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Paradox {
    /// ∂(Δb)/∂b = (r − g) + γ.
    pub derivative: f64,
    /// γ < |r − g|.
    pub holds: bool,
    /// The relief coefficient at which the sign flips, |r − g|.
    pub gamma_threshold: f64,
}

pub fn paradox_test(spread: f64, gamma: f64) -> Result<Paradox> {
    finite("spread", spread)?;
    finite("gamma", gamma)?;
    if spread >= 0.0 {
        return Err(Error::Scope(format!(
            "paradox test needs r - g < 0, got {spread}"
        )));
    }
    let derivative = spread + gamma;
    Ok(Paradox {
        derivative,
        holds: gamma < spread.abs(),
        gamma_threshold: spread.abs(),
    })
}

/// Smallest admissible effective threshold after clamping.
pub const PHI_BAR_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdShift {
    pub phi_bar: f64,
    /// Set when the unclamped value fell to or below zero although r_alt > 0.
    pub warning: Option<String>,
}

/// Affine threshold map φ̄₀ − a·ε_F + b·r_alt clamped into (0, 1].
pub fn captive_threshold_shift(
    phi_bar0: f64,
    a: f64,
    b: f64,
    eps_foreign: f64,
    r_alt: f64,
) -> Result<ThresholdShift> {
    for (name, x) in [
        ("phi_bar0", phi_bar0),
        ("a", a),
        ("b", b),
        ("eps_foreign", eps_foreign),
        ("r_alt", r_alt),
    ] {
        finite(name, x)?;
    }
    if a < 0.0 || b < 0.0 {
        return Err(Error::Domain(
            "threshold-shift coefficients a, b must be >= 0".into(),
        ));
    }
    let raw = phi_bar0 - a * eps_foreign + b * r_alt;
    let warning = (raw <= 0.0 && r_alt > 0.0)
        .then(|| format!("unclamped threshold {raw} is not positive although r_alt = {r_alt} > 0"));
    Ok(ThresholdShift {
        phi_bar: raw.clamp(PHI_BAR_FLOOR, 1.0),
        warning,
    })
}

/// Inputs for the residual-time clocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockSpec {
    pub phi: f64,
    pub phi_bar: f64,
    /// Linear decline per year.
    pub kappa: f64,
    /// Proportional decay rate for the exponential clock.
    pub kappa_exp: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clock {
    /// Years until φ reaches φ̄ at a constant decline; `f64::INFINITY` when κ ≤ 0.
    pub t_linear: f64,
    /// Years under proportional decay; `None` when no rate was given.
    pub t_exp: Option<f64>,
}

pub fn clock(spec: &ClockSpec) -> Result<Clock> {
    finite("phi", spec.phi)?;
    finite("phi_bar", spec.phi_bar)?;
    finite("kappa", spec.kappa)?;
    if spec.phi < spec.phi_bar {
        return Err(Error::Scope(format!(
            "captive share {} is already below its threshold {}",
            spec.phi, spec.phi_bar
        )));
    }
    if !(spec.phi_bar > 0.0) {
        return Err(Error::Domain(format!(
            "phi_bar must be > 0, got {}",
            spec.phi_bar
        )));
    }
    let t_linear = if spec.kappa > 0.0 {
        (spec.phi - spec.phi_bar) / spec.kappa
    } else {
        f64::INFINITY
    };
    let t_exp = spec.kappa_exp.map(|k| {
        if k > 0.0 {
            (spec.phi / spec.phi_bar).ln() / k
        } else {
            f64::INFINITY
        }
    });
    Ok(Clock { t_linear, t_exp })
}

/// Sub-indices and weights of the control-rights composite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiSpec {
    pub mon: f64,
    pub abs_proxy: f64,
    pub fx: f64,
    /// (w_mon, w_abs, w_fx)
    pub weights: (f64, f64, f64),
}

impl PsiSpec {
    pub fn equal_weights(mon: f64, abs_proxy: f64, fx: f64) -> Self {
        Self {
            mon,
            abs_proxy,
            fx,
            weights: (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0),
        }
    }
}

pub fn psi_composite(spec: &PsiSpec) -> Result<f64> {
    let (wm, wa, wf) = spec.weights;
    for (name, x) in [("mon", spec.mon), ("abs", spec.abs_proxy), ("fx", spec.fx)] {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!(
                "psi sub-index {name} must lie in [0,1], got {x}"
            )));
        }
    }
    if wm < 0.0 || wa < 0.0 || wf < 0.0 || ((wm + wa + wf) - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "psi weights must be nonnegative and sum to 1, got ({wm}, {wa}, {wf})"
        )));
    }
    Ok(wm * spec.mon + wa * spec.abs_proxy + wf * spec.fx)
}

/// A sprint fits the window when it ends no later than the SC1 clock runs out.
pub fn timing_feasible(t_sprint: f64, t_star: f64) -> Result<bool> {
    if !(t_sprint >= 0.0) || !(t_star >= 0.0) {
        return Err(Error::Domain(format!(
            "timing inputs must be nonnegative, got T_sprint={t_sprint}, T*={t_star}"
        )));
    }
    Ok(t_sprint <= t_star)
}
