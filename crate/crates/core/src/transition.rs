//! Growth required for a safe exit from repression, with exogenous or
//! closure-priced premia, and the joint financing/timing check.

use crate::closure::{solve_premium, PremiumCase, TwoLayerParams};
use crate::error::{finite, Error, Result};
use crate::model::EconState;

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionSpec {
    pub state: EconState,
    /// Potential nominal growth before the transition.
    pub g_star: f64,
    /// Proposed post-transition potential growth.
    pub g_new: f64,
    /// Exogenous bound on the post-transition premium.
    pub rho_bar: f64,
    pub m: f64,
    /// Closure used to price the premium endogenously.
    pub closure: Option<TwoLayerParams>,
    pub mu: f64,
    pub x_max_operational: f64,
    /// Years needed to put the investment in place.
    pub t_invest: f64,
    /// Residual SC1 window.
    pub t_star: f64,
}

impl Default for TransitionSpec {
    fn default() -> Self {
        Self {
            state: EconState::default(),
            g_star: 0.03,
            g_new: 0.03,
            rho_bar: 0.0,
            m: 0.0,
            closure: Some(TwoLayerParams::default()),
            mu: 0.05,
            x_max_operational: 0.006,
            t_invest: 2.0,
            t_star: 3.0,
        }
    }
}

impl TransitionSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho_bar >= 0.0) {
            return Err(Error::Domain(format!(
                "rho_bar must be >= 0, got {}",
                self.rho_bar
            )));
        }
        if !(self.m >= 0.0) {
            return Err(Error::Domain(format!("m must be >= 0, got {}", self.m)));
        }
        finite("g_star", self.g_star)?;
        finite("g_new", self.g_new)?;
        if self.state.b_prev <= 0.0 {
            return Err(Error::Domain(format!(
                "b_prev must be > 0, got {}",
                self.state.b_prev
            )));
        }
        self.state.validate()
    }

    /// Burden a transition must cover before any premium: π + (d − s)/b + m.
    fn base_threshold(&self) -> f64 {
        let s = &self.state;
        s.pi + (s.d - s.s) / s.b_prev + self.m
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthThreshold {
    /// Premium used (ρ̄ or the closure's ρ*).
    pub rho: f64,
    /// Growth the new regime must deliver.
    pub threshold: f64,
    /// Growth gap over the current potential growth; may be negative.
    pub delta_g_min: f64,
}

pub fn required_growth_exogenous(spec: &TransitionSpec) -> Result<GrowthThreshold> {
    spec.validate()?;
    let threshold = spec.base_threshold() + spec.rho_bar;
    Ok(GrowthThreshold {
        rho: spec.rho_bar,
        threshold,
        delta_g_min: threshold - spec.g_star,
    })
}

/// Threshold with the premium priced by the closure. Returns `None` when no
/// premium clears the bond market (case d): the transition is infeasible.
pub fn required_growth_endogenous(spec: &TransitionSpec) -> Result<Option<GrowthThreshold>> {
    spec.validate()?;
    let closure = spec
        .closure
        .as_ref()
        .ok_or_else(|| Error::Config("endogenous threshold needs closure parameters".into()))?;
    let sol = solve_premium(closure)?;
    if sol.case == PremiumCase::HardFailure {
        return Ok(None);
    }
    let rho = sol.rho.unwrap_or(0.0);
    let threshold = spec.base_threshold() + rho;
    Ok(Some(GrowthThreshold {
        rho,
        threshold,
        delta_g_min: threshold - spec.g_star,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JointFeasibility {
    pub financeable: bool,
    pub timely: bool,
    pub feasible: bool,
}

/// Investment Δg/μ must fit under the operational ceiling and the investment
/// must be complete within the SC1 window.
pub fn joint_feasibility(spec: &TransitionSpec, delta_g_min: f64) -> Result<JointFeasibility> {
    if !(spec.mu > 0.0) {
        return Err(Error::Domain(format!("mu must be > 0, got {}", spec.mu)));
    }
    let financeable = delta_g_min <= 0.0 || delta_g_min / spec.mu <= spec.x_max_operational;
    let timely = spec.t_invest <= spec.t_star;
    Ok(JointFeasibility {
        financeable,
        timely,
        feasible: financeable && timely,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FeasibilityLabel {
    Conditional,
    Tight,
    Unlikely,
    Infeasible,
}

impl FeasibilityLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Conditional => "Conditional",
            Self::Tight => "Tight",
            Self::Unlikely => "Unlikely",
            Self::Infeasible => "Infeasible",
        }
    }
}

/// Required efficiency up to which a transition counts as conditional.
pub const MU_CONDITIONAL: f64 = 0.05;
/// Required efficiency up to which a transition counts as tight.
pub const MU_TIGHT: f64 = 0.07;
/// Default illustrative efficiency range; its top bounds "unlikely".
pub const DEFAULT_MU_RANGE: (f64, f64) = (0.02, 0.08);
/// Default investment envelope used for labelling stress rows.
pub const DEFAULT_LABEL_X_MAX: f64 = 0.11;

/// Labels a growth gap by the efficiency μ = Δg/x_max it would require.
pub fn feasibility_label(
    delta_g_min: f64,
    mu_range: (f64, f64),
    x_max: f64,
) -> Result<FeasibilityLabel> {
    let (lo, hi) = mu_range;
    if !(lo > 0.0 && hi < 1.0 && lo <= hi) {
        return Err(Error::Domain(format!(
            "mu range must lie within (0,1), got [{lo}, {hi}]"
        )));
    }
    if !(x_max > 0.0) {
        return Ok(FeasibilityLabel::Infeasible);
    }
    let required = delta_g_min / x_max;
    Ok(if required <= MU_CONDITIONAL {
        FeasibilityLabel::Conditional
    } else if required <= MU_TIGHT {
        FeasibilityLabel::Tight
    } else if required <= hi {
        FeasibilityLabel::Unlikely
    } else {
        FeasibilityLabel::Infeasible
    })
}
