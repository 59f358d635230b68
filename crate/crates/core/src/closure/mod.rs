//! Two-layer domestic demand for government bonds and the complementarity
//! condition that prices the sovereign premium.
//!
//! Domestic demand at premium ρ is θ + (1 − θ)·[1 − G((z − ρ)/ψ)]: a hard
//! core θ that always holds, plus the share of the contestable margin whose
//! captivity cost is at least the net outside option. The premium is zero
//! while demand at ρ = 0 covers the required absorption share, and otherwise
//! rises until demand clears it.

mod dynamics;

pub use dynamics::{
    amplification_bound, amplification_response, feedback_gain, fixed_point_scan, monotone_path,
    theta_step, Amplification, FixedPoint, FixedPointKind, FixedPointScan, MapKind, PathPoint,
    PremiumPath, ScanDiagnostic, ThetaLaw, FIXED_POINT_TOL,
};

use crate::error::{finite, Error, Result};
use crate::model::interpolate_clamped;

/// Distribution of captivity costs across the contestable margin.
#[derive(Debug, Clone, PartialEq)]
pub enum MarginDist {
    /// Uniform on [0, c̄].
    Uniform,
    /// Piecewise-linear CDF through `(c, G(c))` knots running from (0, G₀) to
    /// (c̄, 1), strictly increasing in both coordinates. G₀ > 0 puts a mass of
    /// zero-captivity holders at the bottom, which makes case d reachable.
    Table(Vec<(f64, f64)>),
}

/// Closure primitives for one period.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLayerParams {
    /// Hard captive core share.
    pub theta: f64,
    /// Control-rights index.
    pub psi: f64,
    /// Outside-option spread.
    pub z: f64,
    /// Maximum margin captivity.
    pub c_bar: f64,
    /// Required domestic absorption share.
    pub phi_req: f64,
    pub dist: MarginDist,
}

impl Default for TwoLayerParams {
    fn default() -> Self {
        Self {
            theta: 0.65,
            psi: 0.97,
            z: 0.02,
            c_bar: 0.06,
            phi_req: 0.85,
            dist: MarginDist::Uniform,
        }
    }
}

impl TwoLayerParams {
    pub fn validate(&self) -> Result<()> {
        for (name, x) in [
            ("theta", self.theta),
            ("psi", self.psi),
            ("z", self.z),
            ("c_bar", self.c_bar),
            ("phi_req", self.phi_req),
        ] {
            finite(name, x)?;
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::Domain(format!(
                "theta must lie in [0,1], got {}",
                self.theta
            )));
        }
        if !(self.psi > 0.0 && self.psi <= 1.0) {
            return Err(Error::Domain(format!(
                "psi must lie in (0,1], got {}",
                self.psi
            )));
        }
        if self.z <= 0.0 {
            return Err(Error::Domain(format!("z must be > 0, got {}", self.z)));
        }
        if self.c_bar <= 0.0 {
            return Err(Error::Domain(format!(
                "c_bar must be > 0, got {}",
                self.c_bar
            )));
        }
        if !(0.0..=1.0).contains(&self.phi_req) {
            return Err(Error::Domain(format!(
                "phi_req must lie in [0,1], got {}",
                self.phi_req
            )));
        }
        if let MarginDist::Table(knots) = &self.dist {
            validate_cdf_table(knots, self.c_bar)?;
        }
        Ok(())
    }

    /// Margin CDF evaluated at captivity cost `c`, clamped to [0, 1].
    pub fn cdf(&self, c: f64) -> f64 {
        match &self.dist {
            MarginDist::Uniform => (c / self.c_bar).clamp(0.0, 1.0),
            MarginDist::Table(knots) => interpolate_clamped(knots, c).clamp(0.0, 1.0),
        }
    }

    /// Margin density at `c` (right derivative at knots, zero off support).
    pub fn density(&self, c: f64) -> f64 {
        match &self.dist {
            MarginDist::Uniform => {
                if (0.0..self.c_bar).contains(&c) {
                    1.0 / self.c_bar
                } else {
                    0.0
                }
            }
            MarginDist::Table(knots) => {
                if c < knots[0].0 || c >= knots[knots.len() - 1].0 {
                    return 0.0;
                }
                let i = knots.partition_point(|k| k.0 <= c);
                let (x0, y0) = knots[i - 1];
                let (x1, y1) = knots[i];
                (y1 - y0) / (x1 - x0)
            }
        }
    }

    /// Captivity cost at which the CDF reaches `q`.
    pub fn cdf_inverse(&self, q: f64) -> f64 {
        let q = q.clamp(0.0, 1.0);
        match &self.dist {
            MarginDist::Uniform => q * self.c_bar,
            MarginDist::Table(knots) => {
                if q <= knots[0].1 {
                    return 0.0;
                }
                let i = knots.partition_point(|k| k.1 < q).clamp(1, knots.len() - 1);
                let (x0, y0) = knots[i - 1];
                let (x1, y1) = knots[i];
                x0 + (x1 - x0) * (q - y0) / (y1 - y0)
            }
        }
    }

    /// Pointwise at ρ = 0: the margin share that stays domestic.
    fn margin_hold_at_zero(&self) -> f64 {
        1.0 - self.cdf(self.z / self.psi)
    }

    /// Core share at which zero-premium demand exactly equals φ_req, holding
    /// ψ and z fixed. `None` when no core share in [0,1] reaches it.
    pub fn boundary_theta(&self) -> Option<f64> {
        let hold = self.margin_hold_at_zero();
        // θ + (1 − θ)·hold = φ_req
        if hold >= 1.0 {
            return (self.phi_req <= 1.0).then_some(0.0);
        }
        let t = (self.phi_req - hold) / (1.0 - hold);
        (0.0..=1.0).contains(&t).then_some(t)
    }
}

fn validate_cdf_table(knots: &[(f64, f64)], c_bar: f64) -> Result<()> {
    if knots.len() < 2 {
        return Err(Error::Config("table CDF needs at least two knots".into()));
    }
    let (c0, g0) = knots[0];
    let (cn, gn) = knots[knots.len() - 1];
    if c0 != 0.0 || !(0.0..1.0).contains(&g0) {
        return Err(Error::Config(
            "table CDF must start at c = 0 with G(0) in [0, 1)".into(),
        ));
    }
    if (cn - c_bar).abs() > 1e-12 || (gn - 1.0).abs() > 1e-12 {
        return Err(Error::Config(format!(
            "table CDF must end at (c_bar = {c_bar}, 1)"
        )));
    }
    for w in knots.windows(2) {
        if !(w[1].0 > w[0].0 && w[1].1 > w[0].1) {
            return Err(Error::Config(
                "table CDF must be strictly increasing".into(),
            ));
        }
    }
    Ok(())
}

/// Builds a table CDF on [0, c̄] from G(c) = (c/c̄)^power at `knots` points.
/// Powers below one give a concave CDF, above one a convex CDF.
pub fn power_cdf_table(c_bar: f64, power: f64, knots: usize) -> Vec<(f64, f64)> {
    let n = knots.max(2) - 1;
    (0..=n)
        .map(|i| {
            let u = i as f64 / n as f64;
            (u * c_bar, u.powf(power))
        })
        .collect()
}

/// Domestic demand share at premium `rho`.
pub fn demand_at(rho: f64, p: &TwoLayerParams) -> f64 {
    let c = (p.z - rho) / p.psi;
    p.theta + (1.0 - p.theta) * (1.0 - p.cdf(c))
}

/// Slope of demand in ρ: (1 − θ)·g((z − ρ)/ψ)/ψ.
pub fn demand_slope(rho: f64, p: &TwoLayerParams) -> f64 {
    (1.0 - p.theta) * p.density((p.z - rho) / p.psi) / p.psi
}

/// Which branch of the complementarity condition holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PremiumCase {
    /// Demand at zero premium strictly exceeds the requirement.
    Interior,
    /// Demand at zero premium exactly meets it.
    Boundary,
    /// A positive premium clears the market.
    Stress,
    /// No premium up to z clears the market.
    HardFailure,
}

impl PremiumCase {
    pub fn code(&self) -> &'static str {
        match self {
            Self::Interior => "a",
            Self::Boundary => "b",
            Self::Stress => "c",
            Self::HardFailure => "d",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Interior => "a_interior",
            Self::Boundary => "b_boundary",
            Self::Stress => "c_stress",
            Self::HardFailure => "d_hard_failure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PremiumSolution {
    pub case: PremiumCase,
    /// Equilibrium premium; `None` in case d.
    pub rho: Option<f64>,
    pub phi_d_at_zero: f64,
    pub phi_d_max: f64,
    pub slack: f64,
}

/// Slack below which zero-premium demand counts as exactly at the requirement.
pub const BOUNDARY_TOL: f64 = 1e-12;
const BISECTION_TOL: f64 = 1e-12;
const BISECTION_MAX_ITER: usize = 200;

pub fn solve_premium(p: &TwoLayerParams) -> Result<PremiumSolution> {
    p.validate()?;
    let phi_d_at_zero = demand_at(0.0, p);
    let phi_d_max = demand_at(p.z, p);
    let slack = phi_d_at_zero - p.phi_req;
    let (case, rho) = if slack > BOUNDARY_TOL {
        (PremiumCase::Interior, Some(0.0))
    } else if slack >= -BOUNDARY_TOL {
        (PremiumCase::Boundary, Some(0.0))
    } else if p.phi_req > phi_d_max {
        (PremiumCase::HardFailure, None)
    } else {
        let rho = match p.dist {
            MarginDist::Uniform => rho_closed_form(p).clamp(0.0, p.z),
            MarginDist::Table(_) => rho_bisection(p),
        };
        (PremiumCase::Stress, Some(rho))
    };
    Ok(PremiumSolution {
        case,
        rho,
        phi_d_at_zero,
        phi_d_max,
        slack,
    })
}

/// ρ* = z − ψ·c̄·(1 − (φ_req − θ)/(1 − θ)) for a uniform margin. Negative
/// values mean the requirement is met at zero premium.
pub fn rho_closed_form(p: &TwoLayerParams) -> f64 {
    p.z - p.psi * p.c_bar * (1.0 - (p.phi_req - p.theta) / (1.0 - p.theta))
}

/// Smallest premium in [0, z] at which demand reaches φ_req, by bisection.
/// Returns the upper end of the final bracket so demand never falls short.
pub fn rho_bisection(p: &TwoLayerParams) -> f64 {
    let excess = |rho: f64| demand_at(rho, p) - p.phi_req;
    let (mut lo, mut hi) = (0.0, p.z);
    if excess(lo) >= 0.0 {
        return 0.0;
    }
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = excess(mid);
        if f >= 0.0 {
            hi = mid;
            if f <= BISECTION_TOL && hi - lo <= 4.0 * f64::EPSILON * p.z {
                break;
            }
        } else {
            lo = mid;
        }
    }
    hi
}

/// Local partials of the premium in case c (uniform margin).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PremiumPartials {
    pub d_rho_d_theta: f64,
    pub d_rho_d_psi: f64,
    pub d_rho_d_z: f64,
}

/// Partials of the closed-form premium. The θ-partial is the exact
/// derivative −ψ·c̄·(1 − φ_req)/(1 − θ)².
pub fn comparative_statics(p: &TwoLayerParams) -> Result<PremiumPartials> {
    if p.dist != MarginDist::Uniform {
        return Err(Error::Scope(
            "comparative statics need a uniform margin".into(),
        ));
    }
    let sol = solve_premium(p)?;
    if sol.case != PremiumCase::Stress {
        return Err(Error::Scope(format!(
            "comparative statics are defined in case c, got case {}",
            sol.case.code()
        )));
    }
    let gap = 1.0 - p.theta;
    Ok(PremiumPartials {
        d_rho_d_theta: -p.psi * p.c_bar * (1.0 - p.phi_req) / (gap * gap),
        d_rho_d_psi: -p.c_bar * (1.0 - (p.phi_req - p.theta) / gap),
        d_rho_d_z: 1.0,
    })
}

/// |∂ρ/∂θ| at the clearing margin, where demand equals φ_req: by the
/// implicit function theorem G(x)·ψ / ((1 − θ)·g(x)) with G(x) = (1 − φ_req)/(1 − θ).
/// This is the premium response per unit of core erosion once the premium is
/// positive; for a uniform margin it is ψ·c̄·(1 − φ_req)/(1 − θ)².
pub fn price_impact(p: &TwoLayerParams) -> f64 {
    let gap = 1.0 - p.theta;
    if gap <= 0.0 {
        return f64::INFINITY;
    }
    if p.theta >= p.phi_req {
        return 0.0;
    }
    let q = (1.0 - p.phi_req) / gap;
    match p.dist {
        MarginDist::Uniform => p.psi * p.c_bar * (1.0 - p.phi_req) / (gap * gap),
        MarginDist::Table(_) => {
            let x = p.cdf_inverse(q);
            // Avoid the zero density exactly at the top knot.
            let g = p.density(x.min(p.c_bar * (1.0 - 1e-12)));
            if g <= 0.0 {
                f64::INFINITY
            } else {
                q * p.psi / (gap * g)
            }
        }
    }
}

/// Sensitivities of the zero-premium demand score to θ, ψ and z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreSensitivities {
    pub d_b_d_theta: f64,
    pub d_b_d_psi: f64,
    pub d_b_d_z: f64,
}

/// Analytic sensitivities for a uniform margin: z/(ψc̄), (1−θ)z/(ψ²c̄) and
/// −(1−θ)/(ψc̄) while z/ψ lies inside the support; once the whole margin has
/// left (z/ψ ≥ c̄) only the core moves the score.
pub fn pe_sensitivities(p: &TwoLayerParams) -> Result<ScoreSensitivities> {
    p.validate()?;
    if p.dist != MarginDist::Uniform {
        return Err(Error::Scope(
            "analytic sensitivities need a uniform margin".into(),
        ));
    }
    let pc = p.psi * p.c_bar;
    if p.z / pc >= 1.0 {
        return Ok(ScoreSensitivities {
            d_b_d_theta: 1.0,
            d_b_d_psi: 0.0,
            d_b_d_z: 0.0,
        });
    }
    Ok(ScoreSensitivities {
        d_b_d_theta: p.z / pc,
        d_b_d_psi: (1.0 - p.theta) * p.z / (p.psi * pc),
        d_b_d_z: -(1.0 - p.theta) / pc,
    })
}
