//! Bounds on stabilising growth investment and the sector allocation problem.

mod allocation;

pub use allocation::{
    allocate, allocate_ascent, allocate_grid, AllocationProblem, AllocationResult,
};

use crate::error::{finite, Error, Result};
use crate::model::{EconState, RegimeParams};

/// Growth push that the shock-buffer requirement must absorb.
pub const DEFAULT_SHOCK: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvestmentInputs {
    pub state: EconState,
    pub regime: RegimeParams,
    /// Growth gained per unit of investment (share of GDP).
    pub mu: f64,
    /// Share of the repression dividend that is reinvested.
    pub lambda: f64,
    /// Safety margin.
    pub m: f64,
    /// Tolerated annual debt deterioration.
    pub delta_bar: f64,
    /// Demographic drag range (lo, hi).
    pub delta_demo: (f64, f64),
    /// Growth shock the buffer must cover.
    pub shock: f64,
}

impl Default for InvestmentInputs {
    fn default() -> Self {
        Self {
            state: EconState::default(),
            regime: RegimeParams::default(),
            mu: 0.05,
            lambda: 0.5,
            m: 0.0,
            delta_bar: 0.0,
            delta_demo: (0.005, 0.008),
            shock: DEFAULT_SHOCK,
        }
    }
}

impl InvestmentInputs {
    pub fn validate(&self) -> Result<()> {
        self.state.validate()?;
        self.regime.validate()?;
        finite("mu", self.mu)?;
        if self.mu <= 0.0 {
            return Err(Error::Domain(format!("mu must be > 0, got {}", self.mu)));
        }
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(Error::Domain(format!(
                "lambda must lie in (0,1], got {}",
                self.lambda
            )));
        }
        if !(self.m >= 0.0 && self.m.is_finite()) {
            return Err(Error::Domain(format!("m must be >= 0, got {}", self.m)));
        }
        finite("delta_bar", self.delta_bar)?;
        finite("shock", self.shock)?;
        let (lo, hi) = self.delta_demo;
        finite("delta_demo", lo)?;
        finite("delta_demo", hi)?;
        if lo > hi {
            return Err(Error::Domain(format!(
                "delta_demo range is reversed: [{lo}, {hi}]"
            )));
        }
        Ok(())
    }
}

/// Upper and lower investment bounds, all as fractions of GDP per year.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvestmentBounds {
    /// Keeps the debt deterioration within δ̄.
    pub x_max_arith: f64,
    /// Fundable from the reinvested repression dividend; `None` when ε ≤ 0.
    pub x_max_rd: Option<f64>,
    /// Keeps the stability surplus at least m.
    pub x_max_safe: f64,
    pub x_max_operational: f64,
    /// Closes the current stability gap (floored at zero).
    pub x_min_static: f64,
    /// Absorbs the growth shock.
    pub x_min_shock: f64,
    pub x_min_demo_lo: f64,
    pub x_min_demo_hi: f64,
    /// Largest of static, shock and the upper demographic requirement.
    pub x_min_operational: f64,
    pub feasible: bool,
}

impl InvestmentBounds {
    /// Tightest upper bound with an inactive dividend bound read as +∞.
    pub fn upper(&self) -> f64 {
        self.x_max_arith
            .min(self.x_max_rd.unwrap_or(f64::INFINITY))
            .min(self.x_max_safe)
    }
}

pub fn compute_bounds(inp: &InvestmentInputs) -> Result<InvestmentBounds> {
    inp.validate()?;
    let s = &inp.state;
    let r = &inp.regime;
    let b = s.b_prev;
    let bracket = r.growth_bracket();

    let x_max_arith = inp.delta_bar - s.spread() * b - s.d;
    let x_max_rd = (r.epsilon > 0.0).then_some(inp.lambda * r.epsilon * b);
    let x_max_safe = (bracket - s.pi) * b - (s.d - s.s) - inp.m;

    let x_min_static = ((s.pi + (s.d - s.s) / b - bracket + inp.m) / inp.mu).max(0.0);
    let x_min_shock = inp.shock / inp.mu;
    let x_min_demo_lo = inp.delta_demo.0 / inp.mu;
    let x_min_demo_hi = inp.delta_demo.1 / inp.mu;

    let mut out = InvestmentBounds {
        x_max_arith,
        x_max_rd,
        x_max_safe,
        x_max_operational: 0.0,
        x_min_static,
        x_min_shock,
        x_min_demo_lo,
        x_min_demo_hi,
        x_min_operational: x_min_static.max(x_min_shock).max(x_min_demo_hi),
        feasible: false,
    };
    out.x_max_operational = out.upper();
    out.feasible = out.x_min_operational <= out.x_max_operational;
    Ok(out)
}

/// Investment room accumulated over the whole periods of the SC1 window.
pub fn cumulative_upper_bound(per_period: &[InvestmentBounds], t_star: f64) -> Result<f64> {
    if per_period.is_empty() {
        return Err(Error::Domain(
            "cumulative bound needs at least one period".into(),
        ));
    }
    if !(t_star >= 0.0) {
        return Err(Error::Domain(format!("T* must be >= 0, got {t_star}")));
    }
    let periods = t_star.floor();
    if periods > per_period.len() as f64 {
        return Err(Error::Domain(format!(
            "T* = {t_star} needs {periods} periods of bounds, got {}",
            per_period.len()
        )));
    }
    Ok(per_period[..periods as usize]
        .iter()
        .map(|b| b.upper().max(0.0))
        .sum())
}
