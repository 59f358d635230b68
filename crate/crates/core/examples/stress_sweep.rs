//! The built-in stress grid with engine premia, thresholds and labels next to
//! the reference premia.

use sovereign_regime::scenario::tables::{resolve_sweep, stress_rows};
use sovereign_regime::scenario::{ReferenceValues, Scenario};

fn main() -> sovereign_regime::Result<()> {
    let s = Scenario::from_text("")?;
    let sweep = resolve_sweep(&s, "stress_v2")?;
    let reference = ReferenceValues::builtin();
    println!(
        "{:<16} {:>5} {:>6} {:>8} {:>9} {:>9} {:>9}  label",
        "scenario", "theta", "z", "phi_d0", "rho* %", "ref %", "dg pp"
    );
    for row in stress_rows(&s, &sweep)? {
        let show = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{:.3}", v * 100.0));
        let ref_rho = reference.num(&format!("stress_v2.{}.rho_star", row.name));
        println!(
            "{:<16} {:>5.2} {:>6.3} {:>8.4} {:>9} {:>9} {:>9}  {}",
            row.name,
            row.theta,
            row.z,
            row.phi_d0,
            show(row.rho_star),
            ref_rho.map_or("-".to_string(), |v| format!("{v:.3}")),
            show(row.required_dg),
            row.label
        );
    }
    Ok(())
}
