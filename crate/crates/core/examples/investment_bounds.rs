//! Upper and lower investment bounds, and a three-sector allocation with
//! complementarities.

use sovereign_regime::investment::{allocate, compute_bounds, AllocationProblem, InvestmentInputs};

fn main() -> sovereign_regime::Result<()> {
    let inputs = InvestmentInputs::default();
    let b = compute_bounds(&inputs)?;
    let pct = |x: f64| x * 100.0;
    println!("x_max arithmetic  {:7.3}% GDP", pct(b.x_max_arith));
    if let Some(rd) = b.x_max_rd {
        println!("x_max dividend    {:7.3}% GDP", pct(rd));
    }
    println!("x_max safe        {:7.3}% GDP", pct(b.x_max_safe));
    println!("x_min shock       {:7.3}% GDP", pct(b.x_min_shock));
    println!(
        "x_min demography  {:.1}-{:.1}% GDP",
        pct(b.x_min_demo_lo),
        pct(b.x_min_demo_hi)
    );
    println!(
        "operational range [{:.3}, {:.3}]% GDP, feasible: {}",
        pct(b.x_min_operational),
        pct(b.x_max_operational),
        b.feasible
    );

    let problem = AllocationProblem {
        mu: vec![0.05, 0.04, 0.03],
        gamma: vec![vec![0.0, 0.8, 0.0], vec![0.0, 0.0, 0.4], vec![0.0; 3]],
        budget: 0.02,
        base_surplus: 0.0,
    };
    let r = allocate(&problem, 200)?;
    let shares: Vec<String> = r
        .allocation
        .iter()
        .map(|x| format!("{:.3}", pct(*x)))
        .collect();
    println!(
        "allocation        [{}]% GDP, growth gain {:.4} pp",
        shares.join(", "),
        pct(r.objective)
    );
    Ok(())
}
