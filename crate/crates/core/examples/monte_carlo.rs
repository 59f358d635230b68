//! Seeded Monte Carlo comparison of the set-valued classifiers against
//! point-estimate rules. Pass a replication count as the first argument.

use sovereign_regime::inference::mc::{run_mc_pe, run_mc_tf, McConfig, PeMethod, TfMethod};

fn main() -> sovereign_regime::Result<()> {
    let n_reps = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(200);
    let cfg = McConfig {
        n_reps,
        ..McConfig::default()
    };

    let pe = run_mc_pe(&cfg)?;
    let last = pe.horizons.len() - 1;
    println!(
        "premium emergence at {} years ({} reps, seed {}):",
        pe.horizons[last].years, n_reps, cfg.seed
    );
    for m in PeMethod::ALL {
        let c = pe.get(last, m);
        println!(
            "  {:<18} false safety {:5.1}%  coverage {:5.1}%  warning {:5.1}%",
            m.name(),
            c.false_positive_rate() * 100.0,
            c.coverage() * 100.0,
            c.ambiguous_rate() * 100.0
        );
    }

    let tf = run_mc_tf(&cfg)?;
    println!(
        "transition feasibility (envelope width {:.1} bp):",
        tf.width_mean * 1e4
    );
    for (i, row) in tf.rows.iter().enumerate() {
        for m in [TfMethod::Tier2, TfMethod::NaiveBaseline] {
            let c = tf.get(i, m);
            println!(
                "  rho_bar {:.1}% {:<16} false feasible {:5.1}%  marginal {:5.1}%",
                row.rho_bar * 100.0,
                m.name(),
                c.false_positive_rate() * 100.0,
                c.ambiguous_rate() * 100.0
            );
        }
    }
    Ok(())
}
