//! Growth required for a safe exit from repression, with exogenous and
//! closure-priced premia, and the feasibility label.

use sovereign_regime::closure::TwoLayerParams;
use sovereign_regime::transition::{
    feasibility_label, joint_feasibility, required_growth_endogenous, required_growth_exogenous,
    TransitionSpec, DEFAULT_LABEL_X_MAX, DEFAULT_MU_RANGE,
};

fn main() -> sovereign_regime::Result<()> {
    let spec = TransitionSpec::default();
    for rho_bar in [0.0, 0.005, 0.01] {
        let t = required_growth_exogenous(&TransitionSpec {
            rho_bar,
            ..spec.clone()
        })?;
        let label = feasibility_label(t.delta_g_min, DEFAULT_MU_RANGE, DEFAULT_LABEL_X_MAX)?;
        println!(
            "rho_bar {:.1}%: growth gap {:.3} pp -> {}",
            rho_bar * 100.0,
            t.delta_g_min * 100.0,
            label.as_str()
        );
    }

    let mut monitoring = spec.clone();
    monitoring.state.b_prev = 1.574;
    let mon = required_growth_exogenous(&monitoring)?.delta_g_min;
    println!("monitoring debt concept: growth gap {:.3} pp", mon * 100.0);

    let stressed = TransitionSpec {
        closure: Some(TwoLayerParams {
            theta: 0.55,
            z: 0.02,
            ..TwoLayerParams::default()
        }),
        ..spec
    };
    match required_growth_endogenous(&stressed)? {
        Some(t) => {
            let j = joint_feasibility(&stressed, t.delta_g_min)?;
            println!(
                "closure premium {:.3}%: growth gap {:.3} pp, financeable {}, timely {}",
                t.rho * 100.0,
                t.delta_g_min * 100.0,
                j.financeable,
                j.timely
            );
        }
        None => println!("no premium clears the bond market: infeasible"),
    }
    Ok(())
}
