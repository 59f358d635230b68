//! Debt recursion, the stability condition and the scope conditions.
//!
//! All rates are annual fractions (0.008, not 0.8). Debt is a ratio to GDP
//! (2.40 means 240%).

use crate::error::{finite, Error, Result};

/// One period's macro-fiscal observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EconState {
    /// Debt-to-GDP ratio entering the period.
    pub b_prev: f64,
    /// Effective nominal interest rate.
    pub r_n: f64,
    /// Nominal GDP growth.
    pub g_n: f64,
    /// Inflation.
    pub pi: f64,
    /// Effective deficit, fraction of GDP.
    pub d: f64,
    /// Seigniorage-like offset, fraction of GDP.
    pub s: f64,
}

impl Default for EconState {
    fn default() -> Self {
        Self {
            b_prev: 2.40,
            r_n: 0.022,
            g_n: 0.030,
            pi: 0.027,
            d: 0.020,
            s: 0.0,
        }
    }
}

impl EconState {
    /// Interest-growth differential r − g.
    pub fn spread(&self) -> f64 {
        self.r_n - self.g_n
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in [
            ("b_prev", self.b_prev),
            ("r_n", self.r_n),
            ("g_n", self.g_n),
            ("pi", self.pi),
            ("d", self.d),
            ("s", self.s),
        ] {
            finite(name, x)?;
        }
        if self.b_prev <= 0.0 {
            return Err(Error::Domain(format!(
                "b_prev must be > 0, got {}",
                self.b_prev
            )));
        }
        if self.spread().abs() >= 1.0 {
            return Err(Error::Domain(format!(
                "|r_n - g_n| must be < 1, got {}",
                self.spread()
            )));
        }
        Ok(())
    }
}

/// Repression, scope and exchange-rate parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeParams {
    /// Repression bias: inflation minus the repression-consistent yield.
    pub epsilon: f64,
    /// Potential nominal growth.
    pub g_star: f64,
    /// Domestic captive share of the debt.
    pub phi: f64,
    /// Captive threshold below which the regime loses its scope.
    pub phi_bar: f64,
    /// Annual decline of the captive share.
    pub kappa: f64,
    /// Exchange-rate depreciation.
    pub de: f64,
    /// Depreciation window bound.
    pub e_bar: f64,
    /// Growth pass-through of depreciation.
    pub alpha: f64,
    /// Penalty on depreciation beyond the window.
    pub beta: f64,
    pub psi_mon: f64,
    pub psi_abs: f64,
    pub psi_fx: f64,
}

impl Default for RegimeParams {
    fn default() -> Self {
        Self {
            epsilon: 0.005,
            g_star: 0.030,
            phi: 0.88,
            phi_bar: 0.85,
            kappa: 0.01,
            de: 0.0,
            e_bar: 0.10,
            alpha: 0.0,
            beta: 0.0,
            psi_mon: 1.0,
            psi_abs: 0.93,
            psi_fx: 1.0,
        }
    }
}

impl RegimeParams {
    pub fn validate(&self) -> Result<()> {
        for (name, x) in [
            ("phi", self.phi),
            ("phi_bar", self.phi_bar),
            ("psi_mon", self.psi_mon),
            ("psi_abs", self.psi_abs),
            ("psi_fx", self.psi_fx),
        ] {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::Domain(format!("{name} must lie in [0,1], got {x}")));
            }
        }
        for (name, x) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(x >= 0.0 && x.is_finite()) {
                return Err(Error::Domain(format!("{name} must be >= 0, got {x}")));
            }
        }
        for (name, x) in [
            ("epsilon", self.epsilon),
            ("g_star", self.g_star),
            ("kappa", self.kappa),
            ("de", self.de),
            ("e_bar", self.e_bar),
        ] {
            finite(name, x)?;
        }
        Ok(())
    }

    /// Growth bracket ε + g* + αΔe − β·max(0, Δe − ē)², shared by the
    /// stability condition and the investment bounds.
    pub fn growth_bracket(&self) -> f64 {
        let excess = (self.de - self.e_bar).max(0.0);
        self.epsilon + self.g_star + self.alpha * self.de - self.beta * excess * excess
    }
}

/// One-period debt recursion b·(1 + r − g) + d.
pub fn step_debt(state: &EconState) -> Result<f64> {
    state.validate()?;
    Ok(state.b_prev * (1.0 + state.r_n - state.g_n) + state.d)
}

/// Debt recursion with a bounded multiplicative shock σ·η, |η| ≤ 1.
pub fn step_debt_stochastic(state: &EconState, sigma: f64, eta: f64) -> Result<f64> {
    state.validate()?;
    finite("sigma", sigma)?;
    finite("eta", eta)?;
    if sigma < 0.0 {
        return Err(Error::Domain(format!("sigma must be >= 0, got {sigma}")));
    }
    if eta.abs() > 1.0 {
        return Err(Error::Domain(format!("|eta| must be <= 1, got {eta}")));
    }
    Ok(state.b_prev * (1.0 + state.r_n - state.g_n + sigma * eta) + state.d)
}

/// Stability surplus ε + g* + αΔe − β·max(0, Δe − ē)² − π − (d − s)/b.
///
/// Positive values mean the debt ratio is on a stable path.
pub fn stability_surplus(state: &EconState, regime: &RegimeParams) -> Result<f64> {
    if state.b_prev <= 0.0 {
        return Err(Error::Domain(format!(
            "b_prev must be > 0, got {}",
            state.b_prev
        )));
    }
    state.validate()?;
    regime.validate()?;
    Ok(regime.growth_bracket() - state.pi - (state.d - state.s) / state.b_prev)
}

/// Result of the two scope checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scope {
    /// Captive share at or above its threshold.
    pub sc1: bool,
    /// Depreciation within its window.
    pub sc2: bool,
}

/// Both boundaries are inclusive.
pub fn check_scope(regime: &RegimeParams) -> Scope {
    Scope {
        sc1: regime.phi >= regime.phi_bar,
        sc2: regime.de <= regime.e_bar,
    }
}

/// How the deficit responds to the debt level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiscalMode {
    Constant,
    DeficitRelief,
    General,
}

impl FiscalMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "constant" => Some(Self::Constant),
            "deficit_relief" | "relief" => Some(Self::DeficitRelief),
            "general" => Some(Self::General),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Constant => "constant",
            Self::DeficitRelief => "deficit_relief",
            Self::General => "general",
        }
    }
}

/// Fiscal-response rule mapping the debt level to the deficit.
#[derive(Debug, Clone, PartialEq)]
pub struct FiscalResponse {
    pub mode: FiscalMode,
    pub d0: f64,
    /// Deficit relief per unit of debt above `b_ref`.
    pub gamma: f64,
    pub b_ref: f64,
    /// Knots `(b, d)` for general mode, strictly increasing in `b`.
    pub table: Vec<(f64, f64)>,
}

impl Default for FiscalResponse {
    fn default() -> Self {
        Self {
            mode: FiscalMode::Constant,
            d0: 0.020,
            gamma: 0.0,
            b_ref: 2.40,
            table: Vec::new(),
        }
    }
}

impl FiscalResponse {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::Config(format!(
                "fiscal.gamma must be >= 0, got {}",
                self.gamma
            )));
        }
        if self.mode == FiscalMode::General {
            if self.table.is_empty() {
                return Err(Error::Config(
                    "general fiscal mode requires a non-empty table".into(),
                ));
            }
            for w in self.table.windows(2) {
                if !(w[1].0 > w[0].0) {
                    return Err(Error::Config(
                        "fiscal.table knots must be strictly increasing in b".into(),
                    ));
                }
            }
            for &(b, d) in &self.table {
                finite("fiscal.table", b).map_err(|e| Error::Config(e.to_string()))?;
                finite("fiscal.table", d).map_err(|e| Error::Config(e.to_string()))?;
            }
        }
        Ok(())
    }

    /// Largest slope between adjacent knots (0 outside general mode except for relief).
    pub fn lipschitz(&self) -> f64 {
        match self.mode {
            FiscalMode::Constant => 0.0,
            FiscalMode::DeficitRelief => self.gamma,
            FiscalMode::General => self
                .table
                .windows(2)
                .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
                .fold(0.0, f64::max),
        }
    }
}

/// Deficit implied by the fiscal rule at debt level `b_prev`.
///
/// General mode interpolates linearly and holds the end values beyond the
/// outermost knots.
pub fn effective_deficit(fr: &FiscalResponse, b_prev: f64) -> Result<f64> {
    finite("b_prev", b_prev)?;
    if b_prev <= 0.0 {
        return Err(Error::Domain(format!("b_prev must be > 0, got {b_prev}")));
    }
    fr.validate()?;
    Ok(match fr.mode {
        FiscalMode::Constant => fr.d0,
        FiscalMode::DeficitRelief => fr.d0 + fr.gamma * (b_prev - fr.b_ref),
        FiscalMode::General => interpolate_clamped(&fr.table, b_prev),
    })
}

pub(crate) fn interpolate_clamped(knots: &[(f64, f64)], x: f64) -> f64 {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let i = knots.partition_point(|k| k.0 <= x);
    let (x0, y0) = knots[i - 1];
    let (x1, y1) = knots[i];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}
