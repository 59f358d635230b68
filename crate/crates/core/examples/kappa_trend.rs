//! Captive-share decline rate with a trend-break test, read from a `t,value`
//! CSV when a path is given and from a synthetic series otherwise.

use std::path::Path;

use sovereign_regime::extensions::{clock, estimate_kappa, ClockSpec};
use sovereign_regime::scenario::read_series;

fn main() -> sovereign_regime::Result<()> {
    let series = match std::env::args().nth(1) {
        Some(path) => read_series(Path::new(&path))?,
        // Nearly flat until 2022, then a half-point-a-year decline, with small
        // deterministic measurement noise.
        None => (0..16)
            .map(|i| {
                let t = 2011.0 + i as f64;
                let trend = if t < 2022.0 {
                    0.90 - 0.0005 * i as f64
                } else {
                    0.895 - 0.005 * (t - 2021.0)
                };
                (t, trend + 0.0004 * (i as f64 * 2.1).sin())
            })
            .collect(),
    };
    let break_index = series.iter().position(|&(t, _)| t >= 2022.0);
    let est = estimate_kappa(&series, break_index)?;
    println!("full-sample kappa {:.4} per year", est.kappa());
    if let (Some(pre), Some(post), Some(f)) = (est.slope_pre, est.slope_post, est.chow_f) {
        println!("slope before {pre:+.4}, after {post:+.4}, Chow F {f:.1}");
        let phi = series.last().map_or(0.88, |&(_, v)| v);
        if phi > 0.85 {
            let c = clock(&ClockSpec {
                phi,
                phi_bar: 0.85,
                kappa: -post,
                kappa_exp: None,
            })?;
            println!("years left at the recent rate: {:.1}", c.t_linear);
        }
    }
    Ok(())
}
