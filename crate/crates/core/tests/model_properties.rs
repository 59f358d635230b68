//! Spec invariants for the debt recursion, extensions, investment bounds and
//! transition thresholds.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sovereign_regime::closure::{solve_premium, PremiumCase, TwoLayerParams};
use sovereign_regime::extensions::{
    clock, estimate_kappa, marginal_gain_sequence, paradox_test, psi_composite, ratchet_gap,
    sprint_cumulative_improvement, ClockSpec, PsiSpec, SprintSpec,
};
use sovereign_regime::investment::{
    allocate_ascent, allocate_grid, compute_bounds, AllocationProblem, InvestmentInputs,
};
use sovereign_regime::model::{
    check_scope, effective_deficit, stability_surplus, step_debt, step_debt_stochastic, EconState,
    FiscalMode, FiscalResponse, RegimeParams,
};
use sovereign_regime::scenario::tables::{PSI_COUNTRIES, PSI_WEIGHTS};
use sovereign_regime::transition::{
    feasibility_label, required_growth_endogenous, required_growth_exogenous, FeasibilityLabel,
    TransitionSpec,
};

fn state() -> impl Strategy<Value = EconState> {
    (
        0.1..4.0,
        -0.05..0.1,
        -0.05..0.1,
        -0.02..0.08,
        -0.05..0.08,
        -0.03..0.05,
    )
        .prop_map(|(b_prev, r_n, g_n, pi, d, s)| EconState {
            b_prev,
            r_n,
            g_n,
            pi,
            d,
            s,
        })
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #[test]
    fn step_debt_is_linear_in_debt(s in state(), b2 in 0.1..4.0) {
        let a = EconState { d: 0.0, ..s };
        let b = EconState { b_prev: b2, ..a };
        let sum = EconState { b_prev: a.b_prev + b2, ..a };
        let lhs = step_debt(&sum).unwrap();
        let rhs = step_debt(&a).unwrap() + step_debt(&b).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn surplus_substitutes_repression_for_growth(s in state(), eps in -0.02..0.03, c in -0.05..0.05) {
        let r = RegimeParams { epsilon: eps, ..RegimeParams::default() };
        let shifted = RegimeParams { epsilon: eps - c, g_star: r.g_star + c, ..r };
        let a = stability_surplus(&s, &r).unwrap();
        let b = stability_surplus(&s, &shifted).unwrap();
        prop_assert!((a - b).abs() <= 1e-15);
    }

    #[test]
    fn scope_is_monotone(phi in 0.0..1.0f64, bar in 0.0..1.0f64, up in 0.0..0.5f64) {
        let r = RegimeParams { phi, phi_bar: bar, ..RegimeParams::default() };
        let higher_phi = RegimeParams { phi: (phi + up).min(1.0), ..r };
        let higher_bar = RegimeParams { phi_bar: (bar + up).min(1.0), ..r };
        prop_assert!(check_scope(&higher_phi).sc1 >= check_scope(&r).sc1);
        prop_assert!(check_scope(&higher_bar).sc1 <= check_scope(&r).sc1);
    }

    #[test]
    fn relief_deficit_derivative(s in state(), gamma in 0.0..0.05) {
        let fr = FiscalResponse { mode: FiscalMode::DeficitRelief, gamma, ..FiscalResponse::default() };
        let next = |b: f64| {
            let st = EconState { b_prev: b, d: effective_deficit(&fr, b).unwrap(), ..s };
            step_debt(&st).unwrap() - b
        };
        let h = 1e-4;
        let fd = (next(s.b_prev + h) - next(s.b_prev - h)) / (2.0 * h);
        let exact = s.r_n - s.g_n + gamma;
        prop_assert!((fd - exact).abs() <= 1e-8 * exact.abs().max(1e-2), "fd {fd} exact {exact}");
    }

    #[test]
    fn ratchet_gap_stays_positive(base in -0.05..0.0, deepen in 0.0001..0.02, years in 1u32..6, b0 in 0.5..3.0, s in 0.0..200.0) {
        let spec = SprintSpec { baseline_spread: base, sprint_spread: base - deepen, years, b0 };
        let dt = sprint_cumulative_improvement(&spec).unwrap();
        prop_assert!(ratchet_gap(dt, base, s).unwrap() > 0.0);
    }

    #[test]
    fn marginal_gains_are_bounded(mu in 0.01..0.1, lambda in 0.05..1.0, eps in 0.001..0.02, path in prop::collection::vec(0.5..3.0f64, 1..20)) {
        let c = marginal_gain_sequence(mu, lambda, eps, &path).unwrap();
        let b_max = path.iter().cloned().fold(0.0, f64::max);
        let bound = mu * lambda * eps * b_max * b_max;
        prop_assert!(c.iter().all(|&x| x <= bound * (1.0 + 1e-12)));
        let mut decreasing = path.clone();
        decreasing.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let cd = marginal_gain_sequence(mu, lambda, eps, &decreasing).unwrap();
        prop_assert!(cd.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn paradox_flips_at_the_spread(spread in -0.05..-0.001) {
        prop_assert!(paradox_test(spread, spread.abs() - 1e-9).unwrap().holds);
        prop_assert!(!paradox_test(spread, spread.abs() + 1e-9).unwrap().holds);
    }

    #[test]
    fn normalised_exponential_clock_is_longer(phi in 0.2..1.0, frac in 0.05..0.999, kappa in 0.0005..0.05) {
        let phi_bar = phi * frac;
        let c = clock(&ClockSpec { phi, phi_bar, kappa, kappa_exp: Some(kappa / phi) }).unwrap();
        prop_assert!(c.t_exp.unwrap() > c.t_linear);
    }

    #[test]
    fn psi_ordering_under_convex_weights(w_mon in 0.0..1.0, split in 0.0..1.0, fx_cap in 0.0..1.0) {
        let w_fx = (1.0 / 3.0) * fx_cap;
        let rest = 1.0 - w_fx;
        let weights = (rest * w_mon * split, rest * (1.0 - w_mon * split), w_fx);
        let norm = weights.0 + weights.1 + weights.2;
        let weights = (weights.0 / norm, weights.1 / norm, 1.0 - weights.0 / norm - weights.1 / norm);
        let psi: Vec<f64> = PSI_COUNTRIES
            .iter()
            .map(|&(_, mon, abs_proxy, fx)| psi_composite(&PsiSpec { mon, abs_proxy, fx, weights }).unwrap())
            .collect();
        prop_assert!(psi[0] > psi[1] && psi[1] > psi[2], "{psi:?} under {weights:?}");
    }

    #[test]
    fn kappa_recovers_noiseless_slope(phi0 in 0.5..1.0f64, slope in -0.05..0.05f64, n in 8usize..60) {
        let series: Vec<(f64, f64)> = (0..n).map(|i| (i as f64 * 0.25, phi0 + slope * i as f64 * 0.25)).collect();
        let est = estimate_kappa(&series, None).unwrap();
        prop_assert!((est.slope_full - slope).abs() <= 1e-10 * slope.abs().max(1e-6));
    }

    #[test]
    fn bounds_compose(eps in -0.01..0.02, g_star in 0.0..0.05, mu in 0.01..0.1, m in 0.0..0.01) {
        let regime = RegimeParams { epsilon: eps, g_star, ..RegimeParams::default() };
        let inp = InvestmentInputs { regime, mu, m, ..InvestmentInputs::default() };
        let b = compute_bounds(&inp).unwrap();
        prop_assert!(b.x_max_operational <= b.x_max_arith && b.x_max_operational <= b.x_max_safe);
        if let Some(rd) = b.x_max_rd {
            prop_assert!(b.x_max_operational <= rd);
        }
        for lower in [b.x_min_static, b.x_min_shock, b.x_min_demo_lo, b.x_min_demo_hi] {
            prop_assert!(b.x_min_operational >= lower);
        }
    }

    #[test]
    fn safe_bound_monotonicity(eps in -0.01..0.02, g_star in 0.0..0.05, bump in 0.0001..0.01) {
        let regime = RegimeParams { epsilon: eps, g_star, ..RegimeParams::default() };
        // Large μ keeps the safe bound positive so the comparison is strict.
        let inp = InvestmentInputs { regime, mu: 0.5, ..InvestmentInputs::default() };
        let at = |f: &dyn Fn(&mut InvestmentInputs)| {
            let mut i = inp;
            f(&mut i);
            compute_bounds(&i).unwrap()
        };
        let base = compute_bounds(&inp).unwrap();
        prop_assert!(at(&|i| i.regime.epsilon += bump).x_max_safe > base.x_max_safe);
        prop_assert!(at(&|i| i.regime.g_star += bump).x_max_safe > base.x_max_safe);
        prop_assert!(at(&|i| i.state.pi += bump).x_max_safe < base.x_max_safe);
        prop_assert!(at(&|i| i.m += bump).x_max_safe < base.x_max_safe);
        let faster = at(&|i| i.mu += bump);
        prop_assert!(faster.x_min_shock < base.x_min_shock);
        prop_assert!(faster.x_min_demo_hi < base.x_min_demo_hi);
    }

    #[test]
    fn growth_pass_through(c in -0.01..0.01f64) {
        let inp = InvestmentInputs::default();
        let mut shifted = inp;
        shifted.regime.g_star += c;
        let a = compute_bounds(&inp).unwrap().x_max_safe;
        let b = compute_bounds(&shifted).unwrap().x_max_safe;
        prop_assert!((b - a - c * inp.state.b_prev).abs() <= 1e-12);
    }

    #[test]
    fn allocation_is_feasible(mu in prop::collection::vec(-0.05..0.1f64, 1..6), g in -0.05..0.05, budget in 0.0..0.05) {
        let j = mu.len();
        let gamma = vec![vec![g; j]; j];
        let p = AllocationProblem { mu, gamma, budget, base_surplus: 0.0 };
        let r = allocate_ascent(&p).unwrap();
        prop_assert!(r.allocation.iter().all(|&x| x >= 0.0));
        prop_assert!(r.allocation.iter().sum::<f64>() <= budget + 1e-12);
    }

    #[test]
    fn threshold_monotonicity(rho in 0.0..0.02, m in 0.0..0.01, d in 0.0..0.05, b in 0.5..3.0, bump in 0.0001..0.01) {
        let mut spec = TransitionSpec { rho_bar: rho, m, ..TransitionSpec::default() };
        spec.state.d = d;
        spec.state.b_prev = b;
        let t = |f: &dyn Fn(&mut TransitionSpec)| {
            let mut s = spec.clone();
            f(&mut s);
            required_growth_exogenous(&s).unwrap().threshold
        };
        let base = t(&|_| {});
        prop_assert!(t(&|s| s.rho_bar += bump) > base);
        prop_assert!(t(&|s| s.m += bump) > base);
        prop_assert!(t(&|s| s.state.d += bump) > base);
        prop_assert!(t(&|s| s.state.s += bump) < base);
        if d > spec.state.s {
            prop_assert!(t(&|s| s.state.b_prev += bump) < base);
        }
    }

    #[test]
    fn endogenous_premium_adds_to_threshold(theta in 0.3..0.8, z in 0.005..0.04) {
        let closure = TwoLayerParams { theta, z, ..TwoLayerParams::default() };
        let spec = TransitionSpec { closure: Some(closure.clone()), ..TransitionSpec::default() };
        if solve_premium(&closure).unwrap().case == PremiumCase::Stress {
            let endo = required_growth_endogenous(&spec).unwrap().unwrap();
            let exo = required_growth_exogenous(&spec).unwrap();
            prop_assert!(endo.threshold >= exo.threshold);
        }
    }

    #[test]
    fn labels_are_ordered(x_max in 0.001..0.2, a in 0.0..0.03f64, b in 0.0..0.03f64) {
        let rank = |l: FeasibilityLabel| match l {
            FeasibilityLabel::Conditional => 0,
            FeasibilityLabel::Tight => 1,
            FeasibilityLabel::Unlikely => 2,
            FeasibilityLabel::Infeasible => 3,
        };
        let (lo, hi) = (a.min(b), a.max(b));
        let l_lo = feasibility_label(lo, (0.02, 0.08), x_max).unwrap();
        let l_hi = feasibility_label(hi, (0.02, 0.08), x_max).unwrap();
        prop_assert!(rank(l_lo) <= rank(l_hi));
    }
}

#[test]
fn stochastic_step_preserves_the_mean() {
    let s = EconState::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 20_000;
    let sigma = 0.02;
    let draws: Vec<f64> = (0..n)
        .map(|_| step_debt_stochastic(&s, sigma, rng.random_range(-1.0..=1.0)).unwrap())
        .collect();
    let mean = draws.iter().sum::<f64>() / n as f64;
    let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    assert!((mean - step_debt(&s).unwrap()).abs() <= 3.0 * se);
}

#[test]
fn psi_ordering_under_listed_weights() {
    for (name, weights) in PSI_WEIGHTS {
        let psi: Vec<f64> = PSI_COUNTRIES
            .iter()
            .map(|&(_, mon, abs_proxy, fx)| {
                psi_composite(&PsiSpec {
                    mon,
                    abs_proxy,
                    fx,
                    weights,
                })
                .unwrap()
            })
            .collect();
        assert!(psi[0] > psi[1] && psi[1] > psi[2], "{name}: {psi:?}");
    }
}

#[test]
fn ascent_matches_grid_on_small_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let j = rng.random_range(1..=3);
        let mu: Vec<f64> = (0..j).map(|_| rng.random_range(0.0..0.1)).collect();
        let mut gamma = vec![vec![0.0; j]; j];
        for (a, row) in gamma.iter_mut().enumerate() {
            for g in row.iter_mut().skip(a + 1) {
                *g = rng.random_range(-0.5..0.0);
            }
        }
        let p = AllocationProblem {
            mu,
            gamma,
            budget: rng.random_range(0.0..0.05),
            base_surplus: 0.0,
        };
        let grid = allocate_grid(&p, 400).unwrap();
        let ascent = allocate_ascent(&p).unwrap();
        assert!(
            rel_close(ascent.objective, grid.objective, 1e-6)
                || (ascent.objective - grid.objective).abs() <= 1e-6,
            "ascent {} grid {}",
            ascent.objective,
            grid.objective
        );
    }
}
