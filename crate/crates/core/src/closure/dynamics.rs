//! Law of motion for the hard core and the premium feedback loop.

use super::{price_impact, solve_premium, PremiumCase, TwoLayerParams};
use crate::error::{Error, Result};

/// Erosion and maintenance of the hard captive core.
///
/// Maintenance is γ(ε) = g0·min(ε, ε_cap) for ε > 0 and exactly zero
/// otherwise, so repression stops supporting the core once it stops paying.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaLaw {
    /// Structural erosion per year.
    pub kappa_theta: f64,
    /// Maintenance slope |∂γ/∂ε| below the cap.
    pub g0: f64,
    pub eps_cap: f64,
}

impl Default for ThetaLaw {
    fn default() -> Self {
        Self {
            kappa_theta: 0.005,
            g0: 1.0,
            eps_cap: 0.02,
        }
    }
}

impl ThetaLaw {
    pub fn validate(&self) -> Result<()> {
        for (name, x) in [
            ("kappa_theta", self.kappa_theta),
            ("g0", self.g0),
            ("eps_cap", self.eps_cap),
        ] {
            if !(x >= 0.0 && x.is_finite()) {
                return Err(Error::Domain(format!("{name} must be >= 0, got {x}")));
            }
        }
        Ok(())
    }

    pub fn gamma(&self, epsilon: f64) -> f64 {
        if epsilon > 0.0 {
            self.g0 * epsilon.min(self.eps_cap)
        } else {
            0.0
        }
    }

    /// Nominal sensitivity |∂γ/∂ε| at an operating point inside the linear range.
    pub fn sensitivity(&self) -> f64 {
        self.g0
    }

    /// Local slope of γ at ε: g0 strictly inside (0, ε_cap), zero outside.
    pub fn sensitivity_at(&self, epsilon: f64) -> f64 {
        if epsilon > 0.0 && epsilon < self.eps_cap {
            self.g0
        } else {
            0.0
        }
    }
}

/// θ − κ_θ + γ(ε), clamped to [0, 1].
pub fn theta_step(theta: f64, law: &ThetaLaw, epsilon: f64) -> f64 {
    (theta - law.kappa_theta + law.gamma(epsilon)).clamp(0.0, 1.0)
}

/// One-period gain of the loop premium → repression loss → erosion → premium:
/// η = |∂ρ/∂θ|·|∂γ/∂ε| with the price impact taken at the clearing margin.
/// Returns +∞ at θ = 1.
pub fn feedback_gain(p: &TwoLayerParams, law: &ThetaLaw) -> f64 {
    feedback_gain_with(p, law.sensitivity())
}

fn feedback_gain_with(p: &TwoLayerParams, sensitivity: f64) -> f64 {
    if p.theta >= 1.0 {
        return f64::INFINITY;
    }
    if sensitivity == 0.0 {
        return 0.0;
    }
    price_impact(p) * sensitivity
}

/// Geometric bound δ/(1 − η) on the cumulative response to a one-shot shock;
/// `None` without contraction.
pub fn amplification_bound(delta: f64, eta: f64) -> Option<f64> {
    (eta < 1.0).then(|| delta / (1.0 - eta))
}

/// Premium used by the repression margin at core share `theta`. In case d no
/// premium clears the market and the full outside option z is charged.
fn effective_rho(p: &TwoLayerParams, theta: f64) -> Result<(f64, PremiumCase)> {
    let q = TwoLayerParams { theta, ..p.clone() };
    let sol = solve_premium(&q)?;
    Ok((sol.rho.unwrap_or(p.z), sol.case))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub t: usize,
    pub theta: f64,
    /// `None` in case d.
    pub rho: Option<f64>,
    pub epsilon: f64,
    /// Feedback gain at the clearing margin with the local γ slope.
    pub eta: f64,
    pub case: PremiumCase,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PremiumPath {
    pub points: Vec<PathPoint>,
    /// First period with η ≥ 1.
    pub first_contraction_failure: Option<usize>,
    /// First period in case c or d.
    pub first_stress: Option<usize>,
    pub max_eta: f64,
}

/// Iterates ρ_t from the closure, ε_t = π − r_rep − ρ_t and θ_{t+1} from the
/// law of motion for `horizon` annual periods.
pub fn monotone_path(
    p: &TwoLayerParams,
    law: &ThetaLaw,
    pi: f64,
    r_rep: f64,
    horizon: usize,
) -> Result<PremiumPath> {
    if horizon < 1 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    p.validate()?;
    law.validate()?;
    let mut theta = p.theta;
    let mut points = Vec::with_capacity(horizon);
    for t in 0..horizon {
        let q = TwoLayerParams { theta, ..p.clone() };
        let sol = solve_premium(&q)?;
        let rho_eff = sol.rho.unwrap_or(q.z);
        let epsilon = pi - r_rep - rho_eff;
        let eta = feedback_gain_with(&q, law.sensitivity_at(epsilon));
        points.push(PathPoint {
            t,
            theta,
            rho: sol.rho,
            epsilon,
            eta,
            case: sol.case,
        });
        theta = theta_step(theta, law, epsilon);
    }
    let first_contraction_failure = points.iter().find(|pt| pt.eta >= 1.0).map(|pt| pt.t);
    let first_stress = points
        .iter()
        .find(|pt| matches!(pt.case, PremiumCase::Stress | PremiumCase::HardFailure))
        .map(|pt| pt.t);
    let max_eta = points.iter().map(|pt| pt.eta).fold(0.0, f64::max);
    Ok(PremiumPath {
        points,
        first_contraction_failure,
        first_stress,
        max_eta,
    })
}

/// Which map the fixed-point scan studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    /// Stationary states of the law of motion: Φ(θ) = θ − κ_θ + γ(ε(ρ(θ))).
    Recursion,
    /// Self-consistent beliefs about next period's core given today's core θ₀:
    /// Φ(θᵉ) = θ₀ − κ_θ + γ(ε(ρ(θᵉ))). Its slope is the local feedback gain.
    Expectations,
}

impl MapKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "recursion" => Some(Self::Recursion),
            "expectations" => Some(Self::Expectations),
            _ => None,
        }
    }
}

struct LoopMap<'a> {
    p: &'a TwoLayerParams,
    law: &'a ThetaLaw,
    pi: f64,
    r_rep: f64,
    kind: MapKind,
    anchor: f64,
}

impl LoopMap<'_> {
    fn maintenance(&self, theta: f64) -> Result<f64> {
        let (rho, _) = effective_rho(self.p, theta)?;
        Ok(self.law.gamma(self.pi - self.r_rep - rho))
    }

    fn phi(&self, theta: f64) -> Result<f64> {
        let base = match self.kind {
            MapKind::Recursion => theta,
            MapKind::Expectations => self.anchor,
        };
        Ok((base - self.law.kappa_theta + self.maintenance(theta)?).clamp(0.0, 1.0))
    }

    /// Φ(θ) − θ, computed without cancellation for the recursion map.
    fn excess(&self, theta: f64) -> Result<f64> {
        match self.kind {
            MapKind::Recursion => Ok(self.maintenance(theta)? - self.law.kappa_theta),
            MapKind::Expectations => Ok(self.phi(theta)? - theta),
        }
    }

    fn slope(&self, theta: f64) -> Result<f64> {
        let h = 1e-7;
        let lo = (theta - h).max(0.0);
        let hi = (theta + h).min(1.0);
        Ok(((self.phi(hi)? - self.phi(lo)?) / (hi - lo)).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointKind {
    /// Zero-premium branch with maintenance active.
    Safe,
    /// Positive-premium branch.
    Stress,
}

impl FixedPointKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Safe => "safe",
            Self::Stress => "stress",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub theta_star: f64,
    pub kind: FixedPointKind,
    /// |dΦ/dθ| by central differences.
    pub slope: f64,
    /// Slope below one: iterating the map converges back to this point.
    pub stable: bool,
    /// |Φ(θ*) − θ*|.
    pub residual: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanDiagnostic {
    Found,
    /// Φ(θ) > θ on the whole grid.
    AboveDiagonal,
    /// Φ(θ) < θ on the whole grid.
    BelowDiagonal,
    /// Φ(θ) = θ on an interval of the grid.
    DegenerateContinuum {
        lo: f64,
        hi: f64,
    },
    /// Φ crosses the diagonal only by jumping, e.g. where the premium
    /// switches between case d and a corner solution.
    JumpOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointScan {
    pub points: Vec<FixedPoint>,
    /// Sign changes of Φ(θ) − θ at discontinuities of Φ.
    pub jump_crossings: Vec<f64>,
    pub diagnostic: ScanDiagnostic,
    /// Core share at which zero-premium demand meets the requirement.
    pub theta_boundary: Option<f64>,
    /// Distance from the highest stable safe fixed point down to the boundary.
    pub buffer: Option<f64>,
}

impl FixedPointScan {
    pub fn stable(&self) -> impl Iterator<Item = &FixedPoint> {
        self.points.iter().filter(|f| f.stable)
    }
}

/// Residual below which a grid point counts as an exact fixed point.
const ZERO_TOL: f64 = 1e-12;
/// Accuracy required of every reported fixed point.
pub const FIXED_POINT_TOL: f64 = 1e-10;

/// Scans Φ(θ) − θ on `grid_points` equally spaced points of [0, 1], refines
/// every sign change by bisection and classifies the roots.
pub fn fixed_point_scan(
    p: &TwoLayerParams,
    law: &ThetaLaw,
    pi: f64,
    r_rep: f64,
    kind: MapKind,
    grid_points: usize,
) -> Result<FixedPointScan> {
    if grid_points < 1000 {
        return Err(Error::Domain(format!(
            "fixed-point grid needs >= 1000 points, got {grid_points}"
        )));
    }
    p.validate()?;
    law.validate()?;
    let map = LoopMap {
        p,
        law,
        pi,
        r_rep,
        kind,
        anchor: p.theta,
    };
    let n = grid_points - 1;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let f: Vec<f64> = grid.iter().map(|&t| map.excess(t)).collect::<Result<_>>()?;
    let is_zero: Vec<bool> = f.iter().map(|v| v.abs() <= ZERO_TOL).collect();

    // Runs of two or more exact zeros form a continuum rather than isolated roots.
    let mut continuum: Option<(f64, f64)> = None;
    let mut in_run = vec![false; grid.len()];
    let mut i = 0;
    while i < grid.len() {
        if is_zero[i] {
            let start = i;
            while i + 1 < grid.len() && is_zero[i + 1] {
                i += 1;
            }
            if i > start {
                in_run[start..=i].iter_mut().for_each(|v| *v = true);
                if continuum.is_none() {
                    continuum = Some((grid[start], grid[i]));
                }
            }
        }
        i += 1;
    }

    let mut roots = Vec::new();
    for i in 0..grid.len() {
        if in_run[i] {
            continue;
        }
        if is_zero[i] {
            roots.push(grid[i]);
        } else if i + 1 < grid.len() && !is_zero[i + 1] && f[i] * f[i + 1] < 0.0 {
            roots.push(bisect(&map, grid[i], grid[i + 1], f[i])?);
        }
    }

    let mut points = Vec::with_capacity(roots.len());
    let mut jump_crossings = Vec::new();
    for theta_star in roots {
        let residual = (map.phi(theta_star)? - theta_star).abs();
        if residual > FIXED_POINT_TOL {
            // Φ jumps over the diagonal here; there is no root to report.
            jump_crossings.push(theta_star);
            continue;
        }
        let (rho, _) = effective_rho(p, theta_star)?;
        let slope = map.slope(theta_star)?;
        points.push(FixedPoint {
            theta_star,
            kind: if rho > 0.0 {
                FixedPointKind::Stress
            } else {
                FixedPointKind::Safe
            },
            slope,
            stable: slope < 1.0,
            residual,
            rho,
        });
    }

    let diagnostic = if let Some((lo, hi)) = continuum {
        ScanDiagnostic::DegenerateContinuum { lo, hi }
    } else if !points.is_empty() {
        ScanDiagnostic::Found
    } else if !jump_crossings.is_empty() {
        ScanDiagnostic::JumpOnly
    } else if f.iter().all(|&v| v > 0.0) {
        ScanDiagnostic::AboveDiagonal
    } else {
        ScanDiagnostic::BelowDiagonal
    };
    let theta_boundary = p.boundary_theta();
    let buffer = theta_boundary.and_then(|tb| {
        points
            .iter()
            .filter(|f| f.stable && f.kind == FixedPointKind::Safe)
            .map(|f| f.theta_star - tb)
            .reduce(f64::max)
    });
    Ok(FixedPointScan {
        points,
        jump_crossings,
        diagnostic,
        theta_boundary,
        buffer,
    })
}

fn bisect(map: &LoopMap<'_>, mut lo: f64, mut hi: f64, f_lo: f64) -> Result<f64> {
    let lo_sign = f_lo.signum();
    let mut best = 0.5 * (lo + hi);
    for _ in 0..200 {
        best = 0.5 * (lo + hi);
        let fm = map.excess(best)?;
        if fm.abs() <= ZERO_TOL || hi - lo <= f64::EPSILON {
            break;
        }
        if fm.signum() == lo_sign {
            lo = best;
        } else {
            hi = best;
        }
    }
    Ok(best)
}

/// Response of the expectations loop to a one-shot cut δ in today's core.
#[derive(Debug, Clone, PartialEq)]
pub struct Amplification {
    pub delta: f64,
    /// Self-consistent core before and after the shock.
    pub theta_before: f64,
    pub theta_after: f64,
    /// Total erosion of the self-consistent core (δ plus induced rounds).
    pub theta_shift: f64,
    /// Total premium increase.
    pub rho_shift: f64,
    /// Erosion added in each round of the loop.
    pub rounds: Vec<f64>,
    /// Largest local feedback gain over the visited range.
    pub eta_max: f64,
    /// Largest |∂ρ/∂θ| over the visited range.
    pub impact_max: f64,
    /// δ/(1 − η_max); `None` when η_max ≥ 1.
    pub bound_theta: Option<f64>,
    /// δ·max|∂ρ/∂θ|/(1 − η_max).
    pub bound_rho: Option<f64>,
}

const LOOP_MAX_ROUNDS: usize = 100_000;

/// Runs the expectations loop to convergence before and after the shock and
/// compares the cumulative response with the geometric bound. Local gains
/// are measured on `grid_points` points across the visited range.
pub fn amplification_response(
    p: &TwoLayerParams,
    law: &ThetaLaw,
    pi: f64,
    r_rep: f64,
    delta: f64,
    grid_points: usize,
) -> Result<Amplification> {
    p.validate()?;
    law.validate()?;
    if !(delta >= 0.0 && delta <= p.theta) {
        return Err(Error::Domain(format!(
            "delta must lie in [0, theta], got {delta}"
        )));
    }
    let base = LoopMap {
        p,
        law,
        pi,
        r_rep,
        kind: MapKind::Expectations,
        anchor: p.theta,
    };
    let (theta_before, _) = iterate_to_fixed_point(&base, p.theta)?;
    let shocked = LoopMap {
        anchor: p.theta - delta,
        ..base
    };
    let (theta_after, rounds) = iterate_to_fixed_point(&shocked, theta_before)?;

    let lo = theta_after.min(theta_before);
    let hi = theta_after.max(theta_before);
    let n = grid_points.max(2) - 1;
    let (mut eta_max, mut impact_max) = (0.0_f64, 0.0_f64);
    let h = 1e-7;
    for i in 0..=n {
        let t = lo + (hi - lo) * i as f64 / n as f64;
        eta_max = eta_max.max(shocked.slope(t)?);
        let a = (t - h).max(0.0);
        let b = (t + h).min(1.0);
        let impact = ((effective_rho(p, b)?.0 - effective_rho(p, a)?.0) / (b - a)).abs();
        impact_max = impact_max.max(impact);
    }
    let rho_shift = effective_rho(p, theta_after)?.0 - effective_rho(p, theta_before)?.0;
    let bound_theta = amplification_bound(delta, eta_max);
    let bound_rho = bound_theta.map(|b| b * impact_max);
    Ok(Amplification {
        delta,
        theta_before,
        theta_after,
        theta_shift: theta_before - theta_after,
        rho_shift,
        rounds,
        eta_max,
        impact_max,
        bound_theta,
        bound_rho,
    })
}

fn iterate_to_fixed_point(map: &LoopMap<'_>, start: f64) -> Result<(f64, Vec<f64>)> {
    let mut theta = start;
    let mut rounds = Vec::new();
    for _ in 0..LOOP_MAX_ROUNDS {
        let next = map.phi(theta)?;
        let step = theta - next;
        rounds.push(step);
        theta = next;
        if step.abs() <= 1e-15 {
            return Ok((theta, rounds));
        }
    }
    Err(Error::Domain(
        "expectations loop did not converge; feedback gain too high".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn base() -> TwoLayerParams {
        TwoLayerParams::default()
    }

    #[test]
    fn theta_step_cases() {
        let law = ThetaLaw {
            kappa_theta: 0.002,
            g0: 1.0,
            eps_cap: 0.02,
        };
        assert_abs_diff_eq!(theta_step(0.65, &law, -0.0081), 0.648, epsilon = 1e-15);
        assert_eq!(law.gamma(-1e-300), 0.0);
        assert_eq!(law.gamma(0.0), 0.0);
        let paused = ThetaLaw {
            kappa_theta: 0.005,
            g0: 1.0,
            eps_cap: 0.02,
        };
        assert_eq!(theta_step(0.65, &paused, 0.005), 0.65);
        assert_eq!(theta_step(0.001, &law, -1.0), 0.0);
        assert_eq!(law.gamma(0.5), 0.02);
    }

    #[test]
    fn gain_values() {
        let law = ThetaLaw {
            g0: 1.0,
            ..ThetaLaw::default()
        };
        let eta = feedback_gain(&base(), &law);
        assert_abs_diff_eq!(eta, 0.0582 * 0.15 / 0.1225, epsilon = 1e-15);
        assert_eq!(feedback_gain(&base(), &ThetaLaw { g0: 0.0, ..law }), 0.0);
        assert!(feedback_gain(
            &TwoLayerParams {
                theta: 1.0,
                ..base()
            },
            &law
        )
        .is_infinite());
        assert_abs_diff_eq!(
            amplification_bound(0.01, 0.09502).unwrap(),
            0.01105,
            epsilon = 1e-5
        );
        assert!(amplification_bound(0.01, 1.0).is_none());
    }

    #[test]
    fn stationary_path() {
        let law = ThetaLaw {
            kappa_theta: 0.0,
            ..ThetaLaw::default()
        };
        let path = monotone_path(&base(), &law, 0.027, 0.022, 10).unwrap();
        assert!(path
            .points
            .iter()
            .all(|pt| pt.case == PremiumCase::Interior && pt.rho == Some(0.0)));
        assert_eq!(path.first_stress, None);
    }

    #[test]
    fn eroding_path_matches_forward_simulation() {
        let law = ThetaLaw {
            kappa_theta: 0.02,
            g0: 1.0,
            eps_cap: 0.02,
        };
        let path = monotone_path(&base(), &law, 0.027, 0.022, 10).unwrap();
        // Independent forward simulation with the uniform closed form.
        let (z, pc, phi) = (0.02, 0.97 * 0.06, 0.85);
        let mut theta: f64 = 0.65;
        let mut first = None;
        for t in 0..10 {
            let d0 = theta + (1.0 - theta) * (1.0 - z / pc);
            let rho = if d0 >= phi {
                0.0
            } else {
                z - pc * (1.0 - (phi - theta) / (1.0 - theta))
            };
            if d0 < phi && first.is_none() {
                first = Some(t);
            }
            let eps: f64 = 0.005 - rho;
            assert_abs_diff_eq!(path.points[t].theta, theta, epsilon = 1e-12);
            assert_abs_diff_eq!(path.points[t].rho.unwrap(), rho, epsilon = 1e-12);
            let gamma = if eps > 0.0 { eps.min(0.02) } else { 0.0 };
            theta = (theta - 0.02 + gamma).clamp(0.0, 1.0);
        }
        assert_eq!(path.first_stress, first);
        assert!(first.is_some());
    }

    #[test]
    fn severe_instance_starts_in_stress() {
        let p = TwoLayerParams {
            theta: 0.45,
            z: 0.035,
            ..base()
        };
        let path = monotone_path(&p, &ThetaLaw::default(), 0.027, 0.022, 3).unwrap();
        assert_eq!(path.first_stress, Some(0));
        assert!(path.points[0].rho.unwrap() > 0.015);
    }

    #[test]
    fn identity_map_is_a_continuum() {
        let law = ThetaLaw {
            kappa_theta: 0.0,
            g0: 0.0,
            eps_cap: 0.02,
        };
        let scan = fixed_point_scan(&base(), &law, 0.027, 0.022, MapKind::Recursion, 1000).unwrap();
        assert!(
            matches!(scan.diagnostic, ScanDiagnostic::DegenerateContinuum { lo, hi } if lo == 0.0 && hi == 1.0)
        );
    }

    #[test]
    fn recursion_map_stress_state() {
        // Maintenance below erosion once the premium eats into ε.
        let law = ThetaLaw {
            kappa_theta: 0.003,
            g0: 1.0,
            eps_cap: 0.02,
        };
        let scan = fixed_point_scan(&base(), &law, 0.027, 0.022, MapKind::Recursion, 2000).unwrap();
        assert_eq!(scan.points.len(), 1);
        let fp = scan.points[0];
        assert_eq!(fp.kind, FixedPointKind::Stress);
        assert!(fp.residual <= FIXED_POINT_TOL);
        assert_abs_diff_eq!(fp.rho, 0.002, epsilon = 1e-9);
    }

    #[test]
    fn jumps_over_the_diagonal_are_not_fixed_points() {
        // The whole margin has left, so the premium switches from z straight
        // to zero once θ reaches φ_req and Φ jumps up across the diagonal.
        let p = TwoLayerParams {
            theta: 0.0,
            psi: 0.05,
            z: 0.0995,
            c_bar: 0.005,
            phi_req: 0.701,
            ..base()
        };
        let law = ThetaLaw {
            kappa_theta: 0.0022,
            g0: 21.4,
            eps_cap: 0.02,
        };
        let scan = fixed_point_scan(&p, &law, 0.027, 0.0, MapKind::Recursion, 1001).unwrap();
        assert!(scan.points.iter().all(|f| f.residual <= FIXED_POINT_TOL));
        assert_eq!(scan.jump_crossings.len(), 1);
        assert!((scan.jump_crossings[0] - 0.701).abs() < 1e-9);
    }

    #[test]
    fn scan_rejects_coarse_grid() {
        assert!(fixed_point_scan(
            &base(),
            &ThetaLaw::default(),
            0.027,
            0.022,
            MapKind::Expectations,
            999
        )
        .is_err());
    }

    #[test]
    fn amplification_respects_bound() {
        let p = TwoLayerParams {
            theta: 0.55,
            ..base()
        };
        let law = ThetaLaw {
            kappa_theta: 0.04,
            g0: 8.0,
            eps_cap: 0.02,
        };
        let a = amplification_response(&p, &law, 0.027, 0.022, 0.01, 2001).unwrap();
        assert!(a.eta_max > 0.2 && a.eta_max < 0.9);
        assert!(a.theta_shift > 0.01);
        assert!(a.theta_shift <= a.bound_theta.unwrap());
        assert!(a.rho_shift <= a.bound_rho.unwrap());
        let summed: f64 = a.rounds.iter().sum();
        assert_abs_diff_eq!(
            summed,
            a.theta_before - a.theta_after + 0.0,
            epsilon = 1e-12
        );
    }
}
