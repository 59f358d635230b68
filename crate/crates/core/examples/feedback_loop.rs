//! The premium / repression / erosion loop: a monotone path, a bistable
//! fixed-point scan and the contraction bound on shock amplification.

use sovereign_regime::closure::{
    amplification_response, feedback_gain, fixed_point_scan, monotone_path, MapKind, ThetaLaw,
    TwoLayerParams,
};

fn main() -> sovereign_regime::Result<()> {
    let (pi, r_rep) = (0.027, 0.022);
    let p = TwoLayerParams::default();
    let eroding = ThetaLaw {
        kappa_theta: 0.02,
        g0: 1.0,
        eps_cap: 0.02,
    };
    let path = monotone_path(&p, &eroding, pi, r_rep, 15)?;
    println!(
        "eroding path: first stress year {:?}, max eta {:.3}",
        path.first_stress, path.max_eta
    );
    for pt in path.points.iter().step_by(3) {
        println!(
            "  t={:<2} theta {:.3} rho {:.4}% case {}",
            pt.t,
            pt.theta,
            pt.rho.unwrap_or(f64::NAN) * 100.0,
            pt.case.code()
        );
    }

    // Thin margin above the boundary with strong maintenance.
    let thin = TwoLayerParams {
        theta: 0.95,
        phi_req: 0.97,
        ..p.clone()
    };
    let strong = ThetaLaw {
        kappa_theta: 0.06,
        g0: 30.0,
        eps_cap: 0.02,
    };
    let scan = fixed_point_scan(&thin, &strong, pi, 0.026, MapKind::Expectations, 20001)?;
    println!(
        "bistable scan: boundary {:?}, diagnostic {:?}",
        scan.theta_boundary, scan.diagnostic
    );
    for f in &scan.points {
        println!(
            "  theta* {:.4} {:<6} stable {:<5} residual {:.1e}",
            f.theta_star,
            f.kind.as_str(),
            f.stable,
            f.residual
        );
    }

    let law = ThetaLaw {
        kappa_theta: 0.04,
        g0: 8.0,
        eps_cap: 0.02,
    };
    let shocked = TwoLayerParams { theta: 0.55, ..p };
    println!(
        "gain at the clearing margin: {:.3}",
        feedback_gain(&shocked, &law)
    );
    let a = amplification_response(&shocked, &law, pi, r_rep, 0.01, 2001)?;
    println!(
        "one-point core shock: total erosion {:.4} vs bound {:.4} (eta_max {:.3}, {} rounds)",
        a.theta_shift,
        a.bound_theta.unwrap_or(f64::INFINITY),
        a.eta_max,
        a.rounds.len()
    );
    Ok(())
}
