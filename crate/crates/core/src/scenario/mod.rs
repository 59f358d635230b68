//! Scenario configuration, CSV artifacts and the standard table set.
//!
//! A scenario file overrides the built-in baseline one key at a time:
//!
//! ```text
//! # monitoring concept
//! core.b_prev = 1.574
//! closure.z = 0.025
//! sweep.grid.tight = closure.theta:0.60, closure.z:0.03
//! ```

pub mod config;
mod csv;
mod reference;
pub mod tables;

pub use csv::{emit_csv, fmt_sig6, read_series, render_csv, write_series, Cell, TableArtifact};
pub use reference::ReferenceValues;

use std::path::Path;

use sha2::{Digest, Sha256};

use crate::closure::{power_cdf_table, MarginDist, ThetaLaw, TwoLayerParams};
use crate::error::{Error, Result};
use crate::extensions::{ClockSpec, SprintSpec};
use crate::inference::mc::McConfig;
use crate::inference::SubsampleConfig;
use crate::investment::InvestmentInputs;
use crate::model::{EconState, FiscalMode, FiscalResponse, RegimeParams};
use crate::transition::{TransitionSpec, DEFAULT_LABEL_X_MAX, DEFAULT_MU_RANGE};
use config::{parse_bool, parse_entries, parse_f64, parse_list, parse_u64, parse_usize, Entry};

/// Shape of the contestable-margin CDF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarginShape {
    Uniform,
    /// Piecewise-linear table of (c/c̄)^power.
    Power {
        power: f64,
        knots: usize,
    },
}

/// Optional affine required-absorption rule
/// φ_req + slope_b·(b − anchor_b) + slope_psi·(ψ − anchor_psi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiReqRule {
    pub slope_b: f64,
    pub slope_psi: f64,
    pub anchor_b: f64,
    pub anchor_psi: f64,
}

impl Default for PhiReqRule {
    fn default() -> Self {
        Self {
            slope_b: 0.0,
            slope_psi: 0.0,
            anchor_b: 2.40,
            anchor_psi: 0.97,
        }
    }
}

/// Transition settings that are not part of the macro state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionSettings {
    pub g_new: f64,
    pub rho_bar: f64,
    /// Premium bound used for the with-premium threshold rows.
    pub rho_bar_alt: f64,
    pub m: f64,
    pub t_invest: f64,
    pub b_monitoring: f64,
    pub label_x_max: f64,
    pub mu_range: (f64, f64),
}

impl Default for TransitionSettings {
    fn default() -> Self {
        Self {
            g_new: 0.03,
            rho_bar: 0.0,
            rho_bar_alt: 0.005,
            m: 0.0,
            t_invest: 2.0,
            b_monitoring: 1.574,
            label_x_max: DEFAULT_LABEL_X_MAX,
            mu_range: DEFAULT_MU_RANGE,
        }
    }
}

/// Admissible-family and band settings for `infer` and the tier tables.
#[derive(Debug, Clone, PartialEq)]
pub struct InferenceSettings {
    pub subsample: SubsampleConfig,
    pub theta_shift: f64,
    pub tier3_powers: Vec<f64>,
    pub dead_zone: f64,
}

impl Default for InferenceSettings {
    fn default() -> Self {
        let mc = McConfig::default();
        Self {
            subsample: mc.subsample,
            theta_shift: mc.theta_shift,
            tier3_powers: mc.tier3_powers,
            dead_zone: mc.dead_zone,
        }
    }
}

/// Observed-layer inputs for the growth-window sensitivity table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSettings {
    pub pi: f64,
    pub r_n: f64,
    pub b_prev: f64,
    pub d: f64,
    pub phi: f64,
    pub kappa: f64,
    /// Trend growth from the short (12Q) and long (24Q) windows.
    pub g_star_short: f64,
    pub g_star_long: f64,
}

impl Default for WindowSettings {
    fn default() -> Self {
        Self {
            pi: 0.016,
            r_n: 0.0241,
            b_prev: 1.574,
            d: 0.02,
            phi: 0.932,
            kappa: 0.0,
            g_star_short: 0.0619,
            g_star_long: 0.0287,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub name: String,
    pub overrides: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub name: String,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub econ: EconState,
    pub regime: RegimeParams,
    pub fiscal: FiscalResponse,
    /// Closure with a uniform margin; see `closure_params` for the resolved one.
    pub closure: TwoLayerParams,
    pub margin: MarginShape,
    pub phi_req_rule: PhiReqRule,
    pub law: ThetaLaw,
    pub r_rep: f64,
    /// Years simulated by the premium path.
    pub horizon: usize,
    /// Investment settings; state and regime come from the scenario.
    pub investment: InvestmentInputs,
    pub transition: TransitionSettings,
    pub sprint: SprintSpec,
    pub kappa_exp: Option<f64>,
    /// Extra linear clock rates reported next to κ.
    pub alt_kappas: Vec<f64>,
    pub monitoring: ClockSpec,
    pub window: WindowSettings,
    pub inference: InferenceSettings,
    /// Only DGP, size and horizon settings are read from here; subsampling
    /// and variant settings come from `inference`.
    pub mc: McConfig,
    pub sweeps: Vec<Sweep>,
    /// SHA-256 of the sorted `key=value` overrides.
    pub config_hash: String,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            name: "baseline".into(),
            econ: EconState::default(),
            regime: RegimeParams::default(),
            fiscal: FiscalResponse::default(),
            closure: TwoLayerParams::default(),
            margin: MarginShape::Uniform,
            phi_req_rule: PhiReqRule::default(),
            law: ThetaLaw::default(),
            r_rep: 0.022,
            horizon: 15,
            investment: InvestmentInputs::default(),
            transition: TransitionSettings::default(),
            sprint: SprintSpec::default(),
            kappa_exp: Some(0.01),
            alt_kappas: vec![0.005, 0.0075],
            monitoring: ClockSpec {
                phi: 0.932,
                phi_bar: 0.85,
                kappa: 0.001876,
                kappa_exp: None,
            },
            window: WindowSettings::default(),
            inference: InferenceSettings::default(),
            mc: McConfig::default(),
            sweeps: Vec::new(),
            config_hash: hash_entries(&[]),
        }
    }
}

fn hash_entries(entries: &[Entry]) -> String {
    let mut lines: Vec<String> = entries
        .iter()
        .map(|e| format!("{}={}\n", e.key, e.value))
        .collect();
    lines.sort();
    hex::encode(Sha256::digest(lines.concat().as_bytes()))
}

fn check(key: &str, x: f64, ok: bool, bound: &str) -> Result<f64> {
    if ok {
        Ok(x)
    } else {
        Err(Error::Config(format!("{key} = {x} must be {bound}")))
    }
}

fn rate(key: &str, x: f64) -> Result<f64> {
    check(key, x, (-1.0..=1.0).contains(&x), "a rate in [-1, 1]")
}

fn share(key: &str, x: f64) -> Result<f64> {
    check(key, x, (0.0..=1.0).contains(&x), "a share in [0, 1]")
}

fn positive(key: &str, x: f64) -> Result<f64> {
    check(key, x, x > 0.0, "> 0")
}

fn nonneg(key: &str, x: f64) -> Result<f64> {
    check(key, x, x >= 0.0, ">= 0")
}

fn parse_pairs(value: &str, line: usize) -> Result<Vec<(f64, f64)>> {
    parse_list(value, line, |item, line| {
        let (a, b) = item.split_once(':').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `x:y`, got `{item}`"),
        })?;
        Ok((parse_f64(a.trim(), line)?, parse_f64(b.trim(), line)?))
    })
}

impl Scenario {
    /// Applies one `key = value` override.
    pub fn set(&mut self, e: &Entry) -> Result<()> {
        let key = e.key.as_str();
        let v = e.value.as_str();
        let line = e.line;
        let num = || parse_f64(v, line);
        match key {
            "name" => self.name = v.to_string(),

            "core.b_prev" => self.econ.b_prev = positive(key, num()?)?,
            "core.r_n" => self.econ.r_n = rate(key, num()?)?,
            "core.g_n" => self.econ.g_n = rate(key, num()?)?,
            "core.pi" => self.econ.pi = rate(key, num()?)?,
            "core.d" => self.econ.d = rate(key, num()?)?,
            "core.s" => self.econ.s = rate(key, num()?)?,

            "regime.epsilon" => self.regime.epsilon = rate(key, num()?)?,
            "regime.g_star" => self.regime.g_star = rate(key, num()?)?,
            "regime.phi" => self.regime.phi = share(key, num()?)?,
            "regime.phi_bar" => self.regime.phi_bar = share(key, num()?)?,
            "regime.kappa" => self.regime.kappa = rate(key, num()?)?,
            "regime.de" => self.regime.de = rate(key, num()?)?,
            "regime.e_bar" => self.regime.e_bar = nonneg(key, num()?)?,
            "regime.alpha" => self.regime.alpha = nonneg(key, num()?)?,
            "regime.beta" => self.regime.beta = nonneg(key, num()?)?,
            "regime.psi_mon" => self.regime.psi_mon = share(key, num()?)?,
            "regime.psi_abs" => self.regime.psi_abs = share(key, num()?)?,
            "regime.psi_fx" => self.regime.psi_fx = share(key, num()?)?,

            "fiscal.mode" => {
                self.fiscal.mode = FiscalMode::parse(v).ok_or_else(|| {
                    Error::Config(format!(
                        "{key} must be constant, deficit_relief or general, got `{v}`"
                    ))
                })?
            }
            "fiscal.d0" => self.fiscal.d0 = rate(key, num()?)?,
            "fiscal.gamma" => self.fiscal.gamma = nonneg(key, num()?)?,
            "fiscal.b_ref" => self.fiscal.b_ref = positive(key, num()?)?,
            "fiscal.table" => self.fiscal.table = parse_pairs(v, line)?,

            "closure.theta" => self.closure.theta = share(key, num()?)?,
            "closure.psi" => self.closure.psi = share(key, num()?)?,
            "closure.z" => self.closure.z = positive(key, rate(key, num()?)?)?,
            "closure.c_bar" => self.closure.c_bar = positive(key, rate(key, num()?)?)?,
            "closure.phi_req" => self.closure.phi_req = share(key, num()?)?,
            "closure.margin" => {
                self.margin = match v {
                    "uniform" => MarginShape::Uniform,
                    "power" => match self.margin {
                        MarginShape::Power { .. } => self.margin,
                        MarginShape::Uniform => MarginShape::Power {
                            power: 1.0,
                            knots: 240,
                        },
                    },
                    _ => {
                        return Err(Error::Config(format!(
                            "{key} must be uniform or power, got `{v}`"
                        )))
                    }
                }
            }
            "closure.margin_power" | "closure.margin_knots" => {
                let (mut power, mut knots) = match self.margin {
                    MarginShape::Power { power, knots } => (power, knots),
                    MarginShape::Uniform => (1.0, 240),
                };
                if key == "closure.margin_power" {
                    power = positive(key, num()?)?;
                } else {
                    knots = parse_usize(v, line)?;
                    if knots < 2 {
                        return Err(Error::Config(format!("{key} must be >= 2, got {knots}")));
                    }
                }
                self.margin = MarginShape::Power { power, knots };
            }
            "closure.phi_req_slope_b" => self.phi_req_rule.slope_b = num()?,
            "closure.phi_req_slope_psi" => self.phi_req_rule.slope_psi = num()?,
            "closure.phi_req_anchor_b" => self.phi_req_rule.anchor_b = positive(key, num()?)?,
            "closure.phi_req_anchor_psi" => self.phi_req_rule.anchor_psi = share(key, num()?)?,
            "closure.r_rep" => self.r_rep = rate(key, num()?)?,
            "closure.kappa_theta" => self.law.kappa_theta = nonneg(key, rate(key, num()?)?)?,
            "closure.g0" => self.law.g0 = nonneg(key, num()?)?,
            "closure.eps_cap" => self.law.eps_cap = nonneg(key, rate(key, num()?)?)?,
            "closure.horizon" => self.horizon = parse_usize(v, line)?,

            "investment.mu" => self.investment.mu = positive(key, share(key, num()?)?)?,
            "investment.lambda" => self.investment.lambda = positive(key, share(key, num()?)?)?,
            "investment.m" => self.investment.m = nonneg(key, rate(key, num()?)?)?,
            "investment.delta_bar" => self.investment.delta_bar = rate(key, num()?)?,
            "investment.delta_demo_lo" => self.investment.delta_demo.0 = rate(key, num()?)?,
            "investment.delta_demo_hi" => self.investment.delta_demo.1 = rate(key, num()?)?,
            "investment.shock" => self.investment.shock = rate(key, num()?)?,

            "transition.g_new" => self.transition.g_new = rate(key, num()?)?,
            "transition.rho_bar" => self.transition.rho_bar = nonneg(key, rate(key, num()?)?)?,
            "transition.rho_bar_alt" => {
                self.transition.rho_bar_alt = nonneg(key, rate(key, num()?)?)?
            }
            "transition.m" => self.transition.m = nonneg(key, rate(key, num()?)?)?,
            "transition.t_invest" => self.transition.t_invest = nonneg(key, num()?)?,
            "transition.b_monitoring" => self.transition.b_monitoring = positive(key, num()?)?,
            "transition.label_x_max" => self.transition.label_x_max = rate(key, num()?)?,
            "transition.mu_lo" => self.transition.mu_range.0 = positive(key, share(key, num()?)?)?,
            "transition.mu_hi" => self.transition.mu_range.1 = positive(key, share(key, num()?)?)?,

            "sprint.baseline_spread" => self.sprint.baseline_spread = rate(key, num()?)?,
            "sprint.sprint_spread" => self.sprint.sprint_spread = rate(key, num()?)?,
            "sprint.years" => {
                self.sprint.years = u32::try_from(parse_usize(v, line)?)
                    .map_err(|_| Error::Config(format!("{key} is too large")))?
            }
            "sprint.b0" => self.sprint.b0 = positive(key, num()?)?,

            "clock.kappa_exp" => {
                self.kappa_exp = if v == "none" {
                    None
                } else {
                    Some(rate(key, num()?)?)
                }
            }
            "clock.alt_kappas" => {
                self.alt_kappas = parse_list(v, line, parse_f64)?;
                for &k in &self.alt_kappas {
                    rate(key, k)?;
                }
            }
            "monitoring.phi" => self.monitoring.phi = share(key, num()?)?,
            "monitoring.phi_bar" => self.monitoring.phi_bar = share(key, num()?)?,
            "monitoring.kappa" => self.monitoring.kappa = rate(key, num()?)?,

            "window.pi" => self.window.pi = rate(key, num()?)?,
            "window.r_n" => self.window.r_n = rate(key, num()?)?,
            "window.b_prev" => self.window.b_prev = positive(key, num()?)?,
            "window.d" => self.window.d = rate(key, num()?)?,
            "window.phi" => self.window.phi = share(key, num()?)?,
            "window.kappa" => self.window.kappa = rate(key, num()?)?,
            "window.g_star_short" => self.window.g_star_short = rate(key, num()?)?,
            "window.g_star_long" => self.window.g_star_long = rate(key, num()?)?,

            "inference.window_h" => self.inference.subsample.window_h = parse_usize(v, line)?,
            "inference.block_len" => self.inference.subsample.block_len = parse_usize(v, line)?,
            "inference.alpha" => self.inference.subsample.alpha = num()?,
            "inference.block_grid" => {
                self.inference.subsample.block_grid = parse_list(v, line, parse_usize)?
            }
            "inference.theta_shift" => {
                self.inference.theta_shift = nonneg(key, share(key, num()?)?)?
            }
            "inference.tier3_powers" => {
                self.inference.tier3_powers = parse_list(v, line, parse_f64)?
            }
            "inference.dead_zone" => self.inference.dead_zone = nonneg(key, rate(key, num()?)?)?,

            "mc.n_reps" => self.mc.n_reps = parse_usize(v, line)?,
            "mc.quarters" => self.mc.quarters = parse_usize(v, line)?,
            "mc.seed" => self.mc.seed = parse_u64(v, line)?,
            "mc.sigma_theta_obs" => self.mc.sigma_theta_obs = nonneg(key, share(key, num()?)?)?,
            "mc.horizons" => self.mc.horizons_years = parse_list(v, line, parse_f64)?,
            "mc.pool_quarters" => self.mc.pool_quarters = parse_usize(v, line)?,
            "mc.rho_bar_list" => self.mc.rho_bar_list = parse_list(v, line, parse_f64)?,
            "mc.rho_theta" => self.mc.pe.rho_theta = num()?,
            "mc.sd_theta" => self.mc.pe.sd_theta = nonneg(key, num()?)?,
            "mc.rho_z" => self.mc.pe.rho_z = num()?,
            "mc.sd_z" => self.mc.pe.sd_z = nonneg(key, num()?)?,
            "mc.stress_prob" => self.mc.pe.stress_prob = share(key, num()?)?,
            "mc.stress_jump" => self.mc.pe.stress_jump = nonneg(key, rate(key, num()?)?)?,
            "mc.stress_decay" => self.mc.pe.stress_decay = num()?,
            "mc.tf_g_new" => self.mc.tf.g_new = rate(key, num()?)?,
            "mc.tf_rho" => self.mc.tf.rho = num()?,
            "mc.tf_sd_pi" => self.mc.tf.sd_pi = nonneg(key, num()?)?,
            "mc.tf_sd_d" => self.mc.tf.sd_d = nonneg(key, num()?)?,
            "mc.tf_sd_g" => self.mc.tf.sd_g = nonneg(key, num()?)?,
            "mc.parallel" => {
                // Accepted for forward compatibility; scheduling never changes results.
                parse_bool(v, line)?;
            }

            _ if key.starts_with("sweep.") => return self.add_sweep_row(e),
            _ => return Err(Error::Config(format!("unknown key `{key}` on line {line}"))),
        }
        Ok(())
    }

    fn add_sweep_row(&mut self, e: &Entry) -> Result<()> {
        let rest = &e.key["sweep.".len()..];
        let (name, row) = rest
            .split_once('.')
            .filter(|(n, r)| !n.is_empty() && !r.is_empty() && !r.contains('.'))
            .ok_or_else(|| {
                Error::Config(format!(
                    "sweep keys look like sweep.<name>.<row>, got `{}`",
                    e.key
                ))
            })?;
        let overrides = parse_list(&e.value, e.line, |item, line| {
            let (k, v) = item.split_once(':').ok_or_else(|| Error::Parse {
                line,
                msg: format!("expected `key:value`, got `{item}`"),
            })?;
            let k = k.trim();
            if k.starts_with("sweep.") {
                return Err(Error::Config(format!(
                    "sweep rows cannot define sweeps (`{k}`)"
                )));
            }
            Ok(Entry {
                key: k.to_string(),
                value: v.trim().to_string(),
                line,
            })
        })?;
        let sweep = match self.sweeps.iter_mut().position(|s| s.name == name) {
            Some(i) => &mut self.sweeps[i],
            None => {
                self.sweeps.push(Sweep {
                    name: name.to_string(),
                    rows: Vec::new(),
                });
                self.sweeps.last_mut().expect("just pushed")
            }
        };
        sweep.rows.push(SweepRow {
            name: row.to_string(),
            overrides,
        });
        Ok(())
    }

    /// Baseline with every entry of `text` applied, fully validated.
    pub fn from_text(text: &str) -> Result<Self> {
        let entries = parse_entries(text)?;
        let mut s = Self::default();
        for e in &entries {
            s.set(e)?;
        }
        s.config_hash = hash_entries(&entries);
        s.validate()?;
        for sweep in &s.sweeps {
            for row in &sweep.rows {
                s.with_overrides(&row.overrides).map_err(|err| {
                    Error::Config(format!("sweep {}.{}: {err}", sweep.name, row.name))
                })?;
            }
        }
        Ok(s)
    }

    /// Copy of this scenario with extra overrides applied and validated.
    pub fn with_overrides(&self, overrides: &[Entry]) -> Result<Self> {
        let mut s = self.clone();
        for e in overrides {
            s.set(e)?;
        }
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.econ.validate()?;
        self.regime.validate()?;
        self.fiscal.validate()?;
        self.law.validate()?;
        let rule = &self.phi_req_rule;
        if rule.slope_b < 0.0 {
            return Err(Error::Config(format!(
                "closure.phi_req_slope_b must be >= 0, got {}",
                rule.slope_b
            )));
        }
        if rule.slope_psi > 0.0 {
            return Err(Error::Config(format!(
                "closure.phi_req_slope_psi must be <= 0, got {}",
                rule.slope_psi
            )));
        }
        self.closure_params()?.validate()?;
        self.investment_inputs().validate()?;
        self.transition_spec().validate()?;
        self.sprint.validate()?;
        if self.horizon < 1 {
            return Err(Error::Config("closure.horizon must be >= 1".into()));
        }
        let (lo, hi) = self.transition.mu_range;
        if lo > hi {
            return Err(Error::Config(format!(
                "transition.mu_lo {lo} exceeds transition.mu_hi {hi}"
            )));
        }
        self.inference.subsample.validate()?;
        if self.inference.tier3_powers.iter().any(|p| !(*p > 0.0)) {
            return Err(Error::Config("inference.tier3_powers must be > 0".into()));
        }
        self.mc_config().validate()
    }

    /// Closure with the configured margin and required absorption resolved.
    pub fn closure_params(&self) -> Result<TwoLayerParams> {
        let mut p = self.closure.clone();
        let r = &self.phi_req_rule;
        p.phi_req +=
            r.slope_b * (self.econ.b_prev - r.anchor_b) + r.slope_psi * (p.psi - r.anchor_psi);
        if !(0.0..=1.0).contains(&p.phi_req) {
            return Err(Error::Config(format!(
                "resolved phi_req {} falls outside [0, 1]",
                p.phi_req
            )));
        }
        if let MarginShape::Power { power, knots } = self.margin {
            p.dist = MarginDist::Table(power_cdf_table(p.c_bar, power, knots));
        }
        Ok(p)
    }

    pub fn investment_inputs(&self) -> InvestmentInputs {
        InvestmentInputs {
            state: self.econ,
            regime: self.regime,
            ..self.investment
        }
    }

    pub fn transition_spec(&self) -> TransitionSpec {
        let t = &self.transition;
        TransitionSpec {
            state: self.econ,
            g_star: self.regime.g_star,
            g_new: t.g_new,
            rho_bar: t.rho_bar,
            m: t.m,
            closure: self.closure_params().ok(),
            mu: self.investment.mu,
            x_max_operational: crate::investment::compute_bounds(&self.investment_inputs())
                .map(|b| b.x_max_operational)
                .unwrap_or(f64::NEG_INFINITY),
            t_invest: t.t_invest,
            t_star: crate::extensions::clock(&self.clock_spec())
                .map(|c| c.t_linear)
                .unwrap_or(0.0),
        }
    }

    pub fn clock_spec(&self) -> ClockSpec {
        ClockSpec {
            phi: self.regime.phi,
            phi_bar: self.regime.phi_bar,
            kappa: self.regime.kappa,
            kappa_exp: self.kappa_exp,
        }
    }

    /// Monte Carlo configuration with macro inputs taken from the scenario.
    pub fn mc_config(&self) -> McConfig {
        let mut mc = self.mc.clone();
        mc.subsample = self.inference.subsample.clone();
        mc.theta_shift = self.inference.theta_shift;
        mc.tier3_powers = self.inference.tier3_powers.clone();
        mc.dead_zone = self.inference.dead_zone;
        mc.pe.closure = TwoLayerParams {
            dist: MarginDist::Uniform,
            ..self.closure.clone()
        };
        mc.pe.law = self.law;
        mc.pe.pi = self.econ.pi;
        mc.pe.r_rep = self.r_rep;
        mc.tf.pi = self.econ.pi;
        mc.tf.d = self.econ.d - self.econ.s;
        mc.tf.b_baseline = self.econ.b_prev;
        mc.tf.b_monitoring = self.transition.b_monitoring;
        mc
    }

    pub fn sweep(&self, name: &str) -> Option<&Sweep> {
        self.sweeps.iter().find(|s| s.name == name)
    }
}

/// Loads a scenario file, or the built-in baseline for the name `baseline`.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    if path.as_os_str() == "baseline" && !path.exists() {
        return Ok(Scenario::default());
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut s = Scenario::from_text(&text)?;
    if s.name == "baseline" {
        if let Some(stem) = path.file_stem() {
            s.name = stem.to_string_lossy().into_owned();
        }
    }
    Ok(s)
}
