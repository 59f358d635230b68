//! Tier envelopes over admissible readings and subsampling bands along an
//! observed core-share path.

use sovereign_regime::closure::TwoLayerParams;
use sovereign_regime::inference::{
    banded_envelope, default_pe_variants, envelope, tier_scores_pe, InferenceMode, SubsampleConfig,
};

fn main() -> sovereign_regime::Result<()> {
    let base = TwoLayerParams::default();
    let variants = default_pe_variants(0.02, &[0.8, 1.25], base.c_bar);
    for tier in 1..=3 {
        let env = envelope(0, &tier_scores_pe(&base, &variants, tier))?;
        println!(
            "tier {tier}: [{:+.2}, {:+.2}] pp  ({} .. {})  {}",
            env.lower * 100.0,
            env.upper * 100.0,
            env.argmin_id,
            env.argmax_id,
            env.label.name(InferenceMode::Pe)
        );
    }

    // A slowly eroding observed core share with small measurement wobble.
    let theta: Vec<f64> = (0..32)
        .map(|t| 0.66 - 0.0012 * t as f64 + 0.003 * (t as f64 * 1.3).sin())
        .collect();
    let (mut lower, mut upper) = (Vec::new(), Vec::new());
    for &th in &theta {
        let env = envelope(
            0,
            &tier_scores_pe(
                &TwoLayerParams {
                    theta: th,
                    ..base.clone()
                },
                &variants,
                2,
            ),
        )?;
        lower.push(env.lower);
        upper.push(env.upper);
    }
    let cfg = SubsampleConfig::default();
    for pt in banded_envelope(&lower, &upper, &cfg)?.iter().step_by(3) {
        println!(
            "t={:<2} [{:+.2} -{:.2}, {:+.2} +{:.2}] pp  {}",
            pt.t,
            pt.lower * 100.0,
            pt.c_lower * 100.0,
            pt.upper * 100.0,
            pt.c_upper * 100.0,
            pt.label.name(InferenceMode::Pe)
        );
    }
    Ok(())
}
