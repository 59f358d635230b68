//! Two-layer domestic demand: the baseline corner solution, a stress
//! instance with comparative statics, and a non-uniform margin.

use sovereign_regime::closure::{
    comparative_statics, pe_sensitivities, power_cdf_table, solve_premium, MarginDist,
    TwoLayerParams,
};

fn report(label: &str, p: &TwoLayerParams) -> sovereign_regime::Result<()> {
    let s = solve_premium(p)?;
    let rho = s
        .rho
        .map_or("none".to_string(), |r| format!("{:.4}%", r * 100.0));
    println!(
        "{label:<16} case {}  phi_d(0) {:.4}  rho* {rho}  slack {:+.2} pp",
        s.case.code(),
        s.phi_d_at_zero,
        s.slack * 100.0
    );
    Ok(())
}

fn main() -> sovereign_regime::Result<()> {
    let base = TwoLayerParams::default();
    report("baseline", &base)?;
    let sens = pe_sensitivities(&base)?;
    println!(
        "  score sensitivities d/dtheta {:.3}, d/dpsi {:.3}, d/dz {:.2}",
        sens.d_b_d_theta, sens.d_b_d_psi, sens.d_b_d_z
    );

    let stress = TwoLayerParams {
        theta: 0.55,
        z: 0.03,
        ..base.clone()
    };
    report("combined stress", &stress)?;
    let cs = comparative_statics(&stress)?;
    println!(
        "  drho/dtheta {:.4}, drho/dpsi {:.4}, drho/dz {:.1}",
        cs.d_rho_d_theta, cs.d_rho_d_psi, cs.d_rho_d_z
    );

    let convex = TwoLayerParams {
        dist: MarginDist::Table(power_cdf_table(base.c_bar, 1.25, 240)),
        ..stress
    };
    report("convex margin", &convex)?;
    Ok(())
}
