//! Spec invariants for the two-layer demand closure and the θ feedback loop.

use proptest::prelude::*;
use sovereign_regime::closure::{
    amplification_response, demand_at, demand_slope, fixed_point_scan, power_cdf_table,
    rho_bisection, rho_closed_form, solve_premium, MapKind, MarginDist, PremiumCase, ThetaLaw,
    TwoLayerParams, FIXED_POINT_TOL,
};

fn uniform_params() -> impl Strategy<Value = TwoLayerParams> {
    (0.0..0.99, 0.05..1.0, 0.001..0.1, 0.005..0.2, 0.0..1.0).prop_map(
        |(theta, psi, z, c_bar, phi_req)| TwoLayerParams {
            theta,
            psi,
            z,
            c_bar,
            phi_req,
            dist: MarginDist::Uniform,
        },
    )
}

fn any_params() -> impl Strategy<Value = TwoLayerParams> {
    (uniform_params(), prop::option::of(0.3..3.0f64)).prop_map(|(mut p, power)| {
        if let Some(pw) = power {
            p.dist = MarginDist::Table(power_cdf_table(p.c_bar, pw, 60));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn complementarity_holds(p in any_params()) {
        let sol = solve_premium(&p).unwrap();
        match sol.rho {
            Some(rho) => {
                let excess = demand_at(rho, &p) - p.phi_req;
                prop_assert!(rho >= 0.0);
                prop_assert!(excess >= -1e-12, "excess {excess}");
                prop_assert!(rho * excess <= 1e-10);
            }
            None => {
                prop_assert_eq!(sol.case, PremiumCase::HardFailure);
                prop_assert!(demand_at(p.z, &p) < p.phi_req);
            }
        }
    }

    #[test]
    fn closed_form_matches_bisection(p in uniform_params()) {
        let sol = solve_premium(&p).unwrap();
        if sol.case == PremiumCase::Stress {
            prop_assert!((rho_closed_form(&p) - rho_bisection(&p)).abs() <= 1e-10);
        }
    }

    #[test]
    fn corner_solution_iff_zero_premium_demand_suffices(p in any_params()) {
        let sol = solve_premium(&p).unwrap();
        let corner = matches!(sol.case, PremiumCase::Interior | PremiumCase::Boundary);
        prop_assert_eq!(corner, demand_at(0.0, &p) >= p.phi_req - 1e-12);
    }
}

proptest! {
    #[test]
    fn demand_is_monotone_with_the_stated_slope(p in any_params(), u in 0.02..0.98f64, v in 0.0..1.0f64) {
        let (a, b) = (p.z * u.min(v), p.z * u.max(v));
        prop_assert!(demand_at(a, &p) <= demand_at(b, &p) + 1e-15);
        if p.dist == MarginDist::Uniform {
            let rho = p.z * u;
            let h = 1e-7 * p.z;
            let fd = (demand_at(rho + h, &p) - demand_at(rho - h, &p)) / (2.0 * h);
            let x = (p.z - rho) / p.psi;
            let g = if x > 0.0 && x < p.c_bar { 1.0 / p.c_bar } else { 0.0 };
            let exact = (1.0 - p.theta) * g / p.psi;
            // Skip points next to the kink at the top of the support.
            if (x - p.c_bar).abs() > 1e-6 {
                prop_assert!((demand_slope(rho, &p) - exact).abs() <= 1e-6 * exact.max(1.0));
                prop_assert!((fd - exact).abs() <= 1e-6 * exact.max(1.0));
            }
        }
    }

    #[test]
    fn maintenance_shuts_off_without_repression(eps in -1.0..=0.0f64, g0 in 0.0..50.0, cap in 0.0..0.1) {
        let law = ThetaLaw { kappa_theta: 0.005, g0, eps_cap: cap };
        prop_assert_eq!(law.gamma(eps), 0.0);
        prop_assert_eq!(law.gamma(-1e-300), 0.0);
        prop_assert_eq!(law.gamma(-0.0), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reported_fixed_points_are_exact(
        p in uniform_params(),
        kappa in 0.0..0.05,
        g0 in 0.0..30.0,
        r_rep in 0.0..0.03,
        expectations in any::<bool>(),
    ) {
        let law = ThetaLaw { kappa_theta: kappa, g0, eps_cap: 0.02 };
        let kind = if expectations { MapKind::Expectations } else { MapKind::Recursion };
        let scan = fixed_point_scan(&p, &law, 0.027, r_rep, kind, 1001).unwrap();
        for f in &scan.points {
            prop_assert!(f.residual <= FIXED_POINT_TOL, "{f:?}");
        }
    }

    #[test]
    fn contraction_obeys_the_geometric_bound(
        theta in 0.4..0.7,
        kappa in 0.0..0.05,
        g0 in 0.0..10.0,
        delta in 0.001..0.03,
    ) {
        let p = TwoLayerParams { theta, ..TwoLayerParams::default() };
        let law = ThetaLaw { kappa_theta: kappa, g0, eps_cap: 0.02 };
        let a = amplification_response(&p, &law, 0.027, 0.022, delta, 401).unwrap();
        if a.eta_max <= 0.9 {
            let bound = a.bound_theta.unwrap();
            prop_assert!(a.theta_shift <= 1.05 * bound, "shift {} bound {}", a.theta_shift, bound);
        }
    }
}
