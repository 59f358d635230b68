//! Debt recursion, stability surplus, scope checks and residual-time clocks
//! at the baseline calibration.

use sovereign_regime::extensions::{
    clock, paradox_test, repression_dividend, sprint_cumulative_improvement, ClockSpec, SprintSpec,
};
use sovereign_regime::model::{check_scope, stability_surplus, step_debt, EconState, RegimeParams};

fn main() -> sovereign_regime::Result<()> {
    let state = EconState::default();
    let regime = RegimeParams::default();

    println!("debt next year      {:.4} x GDP", step_debt(&state)?);
    println!(
        "stability surplus   {:+.3} pp",
        stability_surplus(&state, &regime)? * 100.0
    );
    let scope = check_scope(&regime);
    println!("scope               SC1 {} / SC2 {}", scope.sc1, scope.sc2);

    let sprint = SprintSpec::default();
    println!(
        "sprint improvement  {:.2} pp of GDP",
        sprint_cumulative_improvement(&sprint)? * 100.0
    );
    let rd = repression_dividend(regime.epsilon, state.b_prev);
    println!("repression dividend {:.2}% of GDP", rd.value * 100.0);
    let paradox = paradox_test(state.spread(), 0.005)?;
    println!(
        "relief paradox      holds {} below gamma = {:.2} pp",
        paradox.holds,
        paradox.gamma_threshold * 100.0
    );

    for kappa in [0.01, 0.0075, 0.005] {
        let c = clock(&ClockSpec {
            phi: regime.phi,
            phi_bar: regime.phi_bar,
            kappa,
            kappa_exp: Some(kappa),
        })?;
        println!(
            "clock kappa={kappa:<6}  linear {:.2} yr, exponential {:.2} yr",
            c.t_linear,
            c.t_exp.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
