//! Monte Carlo comparison of regime classifiers on simulated quarterly data.
//!
//! Replication `i` draws from `ChaCha8Rng::seed_from_u64(seed ^ i)`; the
//! premium-emergence and transition-feasibility experiments use ChaCha
//! streams 0 and 1. Per-replication results are integer counts combined in
//! index order, so metrics do not depend on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::{
    classify, default_pe_variants, score_pe, window_band, BandLabel, MeasurementVariant, PeOverlay,
    SubsampleConfig, TierEnvelope,
};
use crate::closure::{solve_premium, ThetaLaw, TwoLayerParams};
use crate::error::{Error, Result};

const PE_STREAM: u64 = 0;
const TF_STREAM: u64 = 1;
const BREACH_STREAM: u64 = 2;
/// Floor that keeps the simulated outside-option spread strictly positive.
const Z_FLOOR: f64 = 1e-6;

/// Generator for one replication: keyed by `seed ⊕ index`, on a stream picked
/// by the experiment and the master seed. Keying alone would make seeds that
/// differ only in low bits replay the same set of replications in another
/// order, which leaves aggregate metrics unchanged.
pub fn replication_rng(seed: u64, index: usize, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ index as u64);
    let salt: u64 = ChaCha8Rng::seed_from_u64(seed).random();
    rng.set_stream(salt ^ stream);
    rng
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Premium-emergence data-generating process, quarterly.
#[derive(Debug, Clone, PartialEq)]
pub struct PeDgp {
    /// Closure at the starting point; ψ, c̄ and φ_req stay fixed.
    pub closure: TwoLayerParams,
    /// Annual law of motion, applied at a quarter of its rates.
    pub law: ThetaLaw,
    pub pi: f64,
    pub r_rep: f64,
    /// AR(1) deviation of θ around its law-of-motion path.
    pub rho_theta: f64,
    pub sd_theta: f64,
    /// AR(1) deviation of z around `closure.z`.
    pub rho_z: f64,
    pub sd_z: f64,
    /// Per-quarter probability of a stress shift in z.
    pub stress_prob: f64,
    pub stress_jump: f64,
    /// Geometric decay of accumulated stress shifts per quarter.
    pub stress_decay: f64,
}

impl Default for PeDgp {
    fn default() -> Self {
        Self {
            closure: TwoLayerParams::default(),
            law: ThetaLaw::default(),
            pi: 0.027,
            r_rep: 0.022,
            rho_theta: 0.8,
            sd_theta: 0.005,
            rho_z: 0.9,
            sd_z: 0.0025,
            stress_prob: 0.05,
            stress_jump: 0.0075,
            stress_decay: 0.8,
        }
    }
}

/// Transition-feasibility data-generating process, quarterly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfDgp {
    /// Debt concepts; the true concept is uniform between them.
    pub b_monitoring: f64,
    pub b_baseline: f64,
    pub pi: f64,
    pub d: f64,
    pub g_new: f64,
    /// Common AR(1) persistence of π, d and g_new deviations.
    pub rho: f64,
    pub sd_pi: f64,
    pub sd_d: f64,
    pub sd_g: f64,
}

impl Default for TfDgp {
    fn default() -> Self {
        Self {
            b_monitoring: 1.574,
            b_baseline: 2.40,
            pi: 0.027,
            d: 0.02,
            g_new: 0.037,
            rho: 0.9,
            sd_pi: 0.001,
            sd_d: 0.0005,
            sd_g: 0.001,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub n_reps: usize,
    pub quarters: usize,
    pub seed: u64,
    pub sigma_theta_obs: f64,
    pub subsample: SubsampleConfig,
    pub horizons_years: Vec<f64>,
    /// Quarters pooled up to and including each evaluation horizon.
    pub pool_quarters: usize,
    /// Tier-2 θ readings sit this far either side of the observed θ.
    pub theta_shift: f64,
    /// Tier-3 margin CDFs (c/c̄)^p.
    pub tier3_powers: Vec<f64>,
    /// Dead zone of the single-threshold rule.
    pub dead_zone: f64,
    pub pe: PeDgp,
    pub tf: TfDgp,
    pub rho_bar_list: Vec<f64>,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_reps: 500,
            quarters: 60,
            seed: 42,
            sigma_theta_obs: 0.02,
            subsample: SubsampleConfig::default(),
            horizons_years: vec![3.75, 7.5, 11.25, 15.0],
            pool_quarters: 2,
            theta_shift: 0.02,
            tier3_powers: vec![0.8, 1.25],
            dead_zone: 0.01,
            pe: PeDgp::default(),
            tf: TfDgp::default(),
            rho_bar_list: vec![0.0, 0.005, 0.01],
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_reps < 1 {
            return Err(Error::Domain("n_reps must be >= 1".into()));
        }
        self.subsample.validate()?;
        self.pe.closure.validate()?;
        self.pe.law.validate()?;
        if self.pool_quarters < 1 {
            return Err(Error::Domain("pool_quarters must be >= 1".into()));
        }
        if self.horizons_years.is_empty() {
            return Err(Error::Domain(
                "at least one evaluation horizon is needed".into(),
            ));
        }
        let earliest = self.subsample.window_h + self.pool_quarters - 1;
        for &y in &self.horizons_years {
            let q = horizon_quarter(y);
            if q < earliest || q > self.quarters {
                return Err(Error::Domain(format!(
                    "horizon {y} yr (quarter {q}) must lie in [{earliest}, {}] quarters",
                    self.quarters
                )));
            }
        }
        let nonneg = [
            ("sigma_theta_obs", self.sigma_theta_obs),
            ("sd_theta", self.pe.sd_theta),
            ("sd_z", self.pe.sd_z),
            ("stress_jump", self.pe.stress_jump),
            ("sd_pi", self.tf.sd_pi),
            ("sd_d", self.tf.sd_d),
            ("sd_g", self.tf.sd_g),
            ("theta_shift", self.theta_shift),
            ("dead_zone", self.dead_zone),
        ];
        for (name, x) in nonneg {
            if !(x >= 0.0 && x.is_finite()) {
                return Err(Error::Domain(format!("{name} must be >= 0, got {x}")));
            }
        }
        for (name, x) in [
            ("rho_theta", self.pe.rho_theta),
            ("rho_z", self.pe.rho_z),
            ("stress_decay", self.pe.stress_decay),
            ("tf rho", self.tf.rho),
        ] {
            if !(0.0..1.0).contains(&x) {
                return Err(Error::Domain(format!("{name} must lie in [0,1), got {x}")));
            }
        }
        if !(0.0..=1.0).contains(&self.pe.stress_prob) {
            return Err(Error::Domain(format!(
                "stress_prob must lie in [0,1], got {}",
                self.pe.stress_prob
            )));
        }
        if !(self.tf.b_monitoring > 0.0 && self.tf.b_monitoring <= self.tf.b_baseline) {
            return Err(Error::Domain(
                "debt concepts must satisfy 0 < b_monitoring <= b_baseline".into(),
            ));
        }
        if self.tier3_powers.iter().any(|p| !(*p > 0.0)) {
            return Err(Error::Domain("tier-3 powers must be > 0".into()));
        }
        Ok(())
    }

    fn eval_quarters(&self, years: f64) -> std::ops::RangeInclusive<usize> {
        let q = horizon_quarter(years);
        (q - self.pool_quarters)..=(q - 1)
    }
}

fn horizon_quarter(years: f64) -> usize {
    (years * 4.0).round().max(0.0) as usize
}

/// Classification tallies against the true sign of the score.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LabelCounts {
    pub n: u64,
    /// Positive label while the truth is negative.
    pub false_positive: u64,
    /// Negative label while the truth is positive.
    pub false_negative: u64,
    pub ambiguous: u64,
}

impl LabelCounts {
    pub fn record(&mut self, truth_positive: bool, label: BandLabel) {
        self.n += 1;
        match (label, truth_positive) {
            (BandLabel::Positive, false) => self.false_positive += 1,
            (BandLabel::Negative, true) => self.false_negative += 1,
            (BandLabel::Ambiguous, _) => self.ambiguous += 1,
            _ => {}
        }
    }

    fn add(&mut self, other: &Self) {
        self.n += other.n;
        self.false_positive += other.false_positive;
        self.false_negative += other.false_negative;
        self.ambiguous += other.ambiguous;
    }

    fn rate(&self, k: u64) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            k as f64 / self.n as f64
        }
    }

    pub fn false_positive_rate(&self) -> f64 {
        self.rate(self.false_positive)
    }

    pub fn false_negative_rate(&self) -> f64 {
        self.rate(self.false_negative)
    }

    /// Share of cases whose reported label set contains the truth.
    pub fn coverage(&self) -> f64 {
        1.0 - self.rate(self.false_positive + self.false_negative)
    }

    pub fn ambiguous_rate(&self) -> f64 {
        self.rate(self.ambiguous)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeMethod {
    Tier2,
    Tier3,
    Naive,
    SingleThreshold,
    FixedSpec,
}

impl PeMethod {
    pub const ALL: [PeMethod; 5] = [
        Self::Tier2,
        Self::Tier3,
        Self::Naive,
        Self::SingleThreshold,
        Self::FixedSpec,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Tier2 => "proposed_tier2",
            Self::Tier3 => "proposed_tier3",
            Self::Naive => "naive_plugin",
            Self::SingleThreshold => "single_threshold",
            Self::FixedSpec => "fixed_spec",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeHorizon {
    pub years: f64,
    pub methods: Vec<(PeMethod, LabelCounts)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeMetrics {
    pub horizons: Vec<PeHorizon>,
    /// Tier-2 classifier at the last horizon for each block length.
    pub blocks: Vec<(usize, LabelCounts)>,
    /// Share of evaluated periods whose true score is negative.
    pub truth_stress_share: f64,
}

impl PeMetrics {
    pub fn get(&self, horizon: usize, method: PeMethod) -> LabelCounts {
        self.horizons[horizon]
            .methods
            .iter()
            .find(|(m, _)| *m == method)
            .map(|(_, c)| *c)
            .unwrap_or_default()
    }
}

struct PeRep {
    horizons: Vec<[LabelCounts; 5]>,
    blocks: Vec<LabelCounts>,
    stress: u64,
    evaluated: u64,
}

/// Envelope window over the variants of tiers ≤ `tier` ending at `t`.
fn window_envelope(
    scores: &[Vec<f64>],
    tiers: &[u8],
    tier: u8,
    t: usize,
    h: usize,
) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![f64::INFINITY; h];
    let mut hi = vec![f64::NEG_INFINITY; h];
    for (s, &vt) in scores.iter().zip(tiers) {
        if vt > tier {
            continue;
        }
        for (i, v) in s[t + 1 - h..=t].iter().enumerate() {
            lo[i] = lo[i].min(*v);
            hi[i] = hi[i].max(*v);
        }
    }
    (lo, hi)
}

/// Subsampling half-widths for the detrended lower and upper envelopes.
fn label_of(lo: &[f64], hi: &[f64], c_lo: f64, c_hi: f64) -> BandLabel {
    let last = lo.len() - 1;
    let env = TierEnvelope {
        t: last,
        lower: lo[last],
        upper: hi[last],
        argmin_id: String::new(),
        argmax_id: String::new(),
        label: BandLabel::Ambiguous,
    };
    classify(&env, c_lo, c_hi)
}

fn simulate_pe(
    cfg: &McConfig,
    variants: &[MeasurementVariant<PeOverlay>],
    index: usize,
) -> Result<PeRep> {
    let dgp = &cfg.pe;
    let n = cfg.quarters;
    let mut rng = replication_rng(cfg.seed, index, PE_STREAM);

    let mut protos: Vec<TwoLayerParams> = variants
        .iter()
        .map(|v| v.overlay.apply(&dgp.closure))
        .collect();
    let tiers: Vec<u8> = variants.iter().map(|v| v.tier).collect();
    let mut scores = vec![vec![0.0; n]; variants.len()];
    let mut truth = vec![0.0; n];

    let sd_u = dgp.sd_theta / (1.0 - dgp.rho_theta * dgp.rho_theta).sqrt();
    let sd_a = dgp.sd_z / (1.0 - dgp.rho_z * dgp.rho_z).sqrt();
    let (mut u, mut a, mut stress) = (sd_u * normal(&mut rng), sd_a * normal(&mut rng), 0.0);
    let mut theta_path = dgp.closure.theta;
    let mut truth_p = dgp.closure.clone();

    for t in 0..n {
        let theta = (theta_path + u).clamp(0.0, 1.0);
        let z = (dgp.closure.z + a + stress).max(Z_FLOOR);
        truth_p.theta = theta;
        truth_p.z = z;
        truth[t] = score_pe(&truth_p);
        let sol = solve_premium(&truth_p)?;
        let epsilon = dgp.pi - dgp.r_rep - sol.rho.unwrap_or(z);
        theta_path =
            (theta_path + 0.25 * (dgp.law.gamma(epsilon) - dgp.law.kappa_theta)).clamp(0.0, 1.0);

        let theta_obs = (theta + cfg.sigma_theta_obs * normal(&mut rng)).clamp(0.0, 1.0);
        for ((v, p), s) in variants
            .iter()
            .zip(protos.iter_mut())
            .zip(scores.iter_mut())
        {
            p.theta =
                (v.overlay.theta.unwrap_or(theta_obs) + v.overlay.theta_shift).clamp(0.0, 1.0);
            p.z = v.overlay.z.unwrap_or(z);
            s[t] = score_pe(p);
        }

        u = dgp.rho_theta * u + dgp.sd_theta * normal(&mut rng);
        a = dgp.rho_z * a + dgp.sd_z * normal(&mut rng);
        let jump: f64 = rng.random();
        stress = dgp.stress_decay * stress
            + if jump < dgp.stress_prob {
                dgp.stress_jump
            } else {
                0.0
            };
    }

    let h = cfg.subsample.window_h;
    let mut rep = PeRep {
        horizons: Vec::with_capacity(cfg.horizons_years.len()),
        blocks: vec![LabelCounts::default(); cfg.subsample.block_grid.len()],
        stress: 0,
        evaluated: 0,
    };
    let last = cfg.horizons_years.len() - 1;
    for (k, &years) in cfg.horizons_years.iter().enumerate() {
        let mut counts = [LabelCounts::default(); 5];
        for t in cfg.eval_quarters(years) {
            let positive = truth[t] >= 0.0;
            rep.evaluated += 1;
            rep.stress += u64::from(!positive);
            let (lo1, hi1) = window_envelope(&scores, &tiers, 1, t, h);
            let (lo2, hi2) = window_envelope(&scores, &tiers, 2, t, h);
            let (lo3, hi3) = window_envelope(&scores, &tiers, 3, t, h);
            let (c2l, c2h) = window_band(&lo2, &hi2, &cfg.subsample)?;
            let (c3l, c3h) = window_band(&lo3, &hi3, &cfg.subsample)?;
            let (c1l, c1h) = window_band(&lo1, &hi1, &cfg.subsample)?;
            counts[0].record(positive, label_of(&lo2, &hi2, c2l, c2h));
            counts[1].record(positive, label_of(&lo3, &hi3, c3l, c3h));
            counts[2].record(positive, label_of(&lo1, &hi1, 0.0, 0.0));
            counts[3].record(positive, label_of(&lo1, &hi1, cfg.dead_zone, cfg.dead_zone));
            counts[4].record(positive, label_of(&lo1, &hi1, c1l, c1h));
            if k == last {
                for (b, &l) in rep.blocks.iter_mut().zip(&cfg.subsample.block_grid) {
                    let (cl, ch) = window_band(&lo2, &hi2, &cfg.subsample.with_block(l))?;
                    b.record(positive, label_of(&lo2, &hi2, cl, ch));
                }
            }
        }
        rep.horizons.push(counts);
    }
    Ok(rep)
}

/// Premium-emergence experiment across all horizons and methods.
pub fn run_mc_pe(cfg: &McConfig) -> Result<PeMetrics> {
    cfg.validate()?;
    let variants = default_pe_variants(cfg.theta_shift, &cfg.tier3_powers, cfg.pe.closure.c_bar);
    let reps: Vec<PeRep> = (0..cfg.n_reps)
        .into_par_iter()
        .map(|i| simulate_pe(cfg, &variants, i))
        .collect::<Result<_>>()?;

    let mut horizons: Vec<[LabelCounts; 5]> =
        vec![[LabelCounts::default(); 5]; cfg.horizons_years.len()];
    let mut blocks = vec![LabelCounts::default(); cfg.subsample.block_grid.len()];
    let (mut stress, mut evaluated) = (0u64, 0u64);
    for rep in &reps {
        for (acc, r) in horizons.iter_mut().zip(&rep.horizons) {
            for (a, b) in acc.iter_mut().zip(r) {
                a.add(b);
            }
        }
        for (a, b) in blocks.iter_mut().zip(&rep.blocks) {
            a.add(b);
        }
        stress += rep.stress;
        evaluated += rep.evaluated;
    }
    Ok(PeMetrics {
        horizons: cfg
            .horizons_years
            .iter()
            .zip(horizons)
            .map(|(&years, counts)| PeHorizon {
                years,
                methods: PeMethod::ALL.iter().copied().zip(counts).collect(),
            })
            .collect(),
        blocks: cfg
            .subsample
            .block_grid
            .iter()
            .copied()
            .zip(blocks)
            .collect(),
        truth_stress_share: stress as f64 / evaluated.max(1) as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfMethod {
    Tier1,
    Tier2,
    NaiveBaseline,
    NaiveMonitoring,
    FixedSpec,
}

impl TfMethod {
    pub const ALL: [TfMethod; 5] = [
        Self::Tier1,
        Self::Tier2,
        Self::NaiveBaseline,
        Self::NaiveMonitoring,
        Self::FixedSpec,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Tier1 => "proposed_tier1",
            Self::Tier2 => "proposed_tier2",
            Self::NaiveBaseline => "naive_baseline",
            Self::NaiveMonitoring => "naive_monitoring",
            Self::FixedSpec => "fixed_spec",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TfPremiumRow {
    pub rho_bar: f64,
    pub methods: Vec<(TfMethod, LabelCounts)>,
    /// Tier-2 classifier for each block length.
    pub blocks: Vec<(usize, LabelCounts)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TfMetrics {
    pub rows: Vec<TfPremiumRow>,
    /// Tier-2 envelope width at the final quarter, in fractions.
    pub width_mean: f64,
    pub width_median: f64,
}

impl TfMetrics {
    pub fn get(&self, row: usize, method: TfMethod) -> LabelCounts {
        self.rows[row]
            .methods
            .iter()
            .find(|(m, _)| *m == method)
            .map(|(_, c)| *c)
            .unwrap_or_default()
    }
}

struct TfRep {
    rows: Vec<[LabelCounts; 5]>,
    blocks: Vec<Vec<LabelCounts>>,
    width: f64,
}

fn simulate_tf(cfg: &McConfig, index: usize) -> Result<TfRep> {
    let dgp = &cfg.tf;
    let n = cfg.quarters;
    let mut rng = replication_rng(cfg.seed, index, TF_STREAM);
    let u: f64 = rng.random();
    let b_true = dgp.b_monitoring + u * (dgp.b_baseline - dgp.b_monitoring);
    let stat = (1.0 - dgp.rho * dgp.rho).sqrt();
    let mut dev = [
        dgp.sd_pi / stat * normal(&mut rng),
        dgp.sd_d / stat * normal(&mut rng),
        dgp.sd_g / stat * normal(&mut rng),
    ];
    // Scores before the premium bound, which shifts every reading equally.
    let mut truth = vec![0.0; n];
    let mut base = vec![0.0; n];
    let mut mon = vec![0.0; n];
    let mut width = 0.0;
    for t in 0..n {
        let (pi, d, g) = (dgp.pi + dev[0], dgp.d + dev[1], dgp.g_new + dev[2]);
        truth[t] = g - pi - d / b_true;
        base[t] = g - pi - d / dgp.b_baseline;
        mon[t] = g - pi - d / dgp.b_monitoring;
        width = base[t] - mon[t];
        for (x, sd) in dev.iter_mut().zip([dgp.sd_pi, dgp.sd_d, dgp.sd_g]) {
            *x = dgp.rho * *x + sd * normal(&mut rng);
        }
    }

    let h = cfg.subsample.window_h;
    let years = *cfg.horizons_years.last().expect("validated");
    let grid = &cfg.subsample.block_grid;
    let mut rows = vec![[LabelCounts::default(); 5]; cfg.rho_bar_list.len()];
    let mut blocks = vec![vec![LabelCounts::default(); grid.len()]; cfg.rho_bar_list.len()];
    for t in cfg.eval_quarters(years) {
        let w = t + 1 - h..=t;
        let lo2: Vec<f64> = base[w.clone()]
            .iter()
            .zip(&mon[w.clone()])
            .map(|(b, m)| b.min(*m))
            .collect();
        let hi2: Vec<f64> = base[w.clone()]
            .iter()
            .zip(&mon[w.clone()])
            .map(|(b, m)| b.max(*m))
            .collect();
        let b1 = &base[w.clone()];
        let m1 = &mon[w];
        let (c1l, c1h) = window_band(b1, b1, &cfg.subsample)?;
        let (c2l, c2h) = window_band(&lo2, &hi2, &cfg.subsample)?;
        let block_bands: Vec<(f64, f64)> = grid
            .iter()
            .map(|&l| window_band(&lo2, &hi2, &cfg.subsample.with_block(l)))
            .collect::<Result<_>>()?;
        for (k, &rb) in cfg.rho_bar_list.iter().enumerate() {
            let shift = |v: &[f64]| v.iter().map(|x| x - rb).collect::<Vec<_>>();
            let (b1s, m1s, lo2s, hi2s) = (shift(b1), shift(m1), shift(&lo2), shift(&hi2));
            let positive = truth[t] - rb >= 0.0;
            let r = &mut rows[k];
            r[0].record(positive, label_of(&b1s, &b1s, c1l, c1h));
            r[1].record(positive, label_of(&lo2s, &hi2s, c2l, c2h));
            r[2].record(positive, label_of(&b1s, &b1s, 0.0, 0.0));
            r[3].record(positive, label_of(&m1s, &m1s, 0.0, 0.0));
            r[4].record(positive, label_of(&b1s, &b1s, c1l, c1h));
            for (acc, &(cl, ch)) in blocks[k].iter_mut().zip(&block_bands) {
                acc.record(positive, label_of(&lo2s, &hi2s, cl, ch));
            }
        }
    }
    Ok(TfRep {
        rows,
        blocks,
        width,
    })
}

/// Transition-feasibility experiment at the last horizon for each premium bound.
pub fn run_mc_tf(cfg: &McConfig) -> Result<TfMetrics> {
    cfg.validate()?;
    if cfg.rho_bar_list.iter().any(|r| !(*r >= 0.0)) {
        return Err(Error::Domain("premium bounds must be >= 0".into()));
    }
    let reps: Vec<TfRep> = (0..cfg.n_reps)
        .into_par_iter()
        .map(|i| simulate_tf(cfg, i))
        .collect::<Result<_>>()?;
    let k = cfg.rho_bar_list.len();
    let g = cfg.subsample.block_grid.len();
    let mut rows = vec![[LabelCounts::default(); 5]; k];
    let mut blocks = vec![vec![LabelCounts::default(); g]; k];
    let mut widths = Vec::with_capacity(reps.len());
    for rep in &reps {
        for (acc, r) in rows.iter_mut().zip(&rep.rows) {
            for (a, b) in acc.iter_mut().zip(r) {
                a.add(b);
            }
        }
        for (acc, r) in blocks.iter_mut().zip(&rep.blocks) {
            for (a, b) in acc.iter_mut().zip(r) {
                a.add(b);
            }
        }
        widths.push(rep.width);
    }
    let width_mean = widths.iter().sum::<f64>() / widths.len() as f64;
    let mut sorted = widths.clone();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let width_median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    Ok(TfMetrics {
        rows: cfg
            .rho_bar_list
            .iter()
            .zip(rows)
            .zip(blocks)
            .map(|((&rho_bar, counts), b)| TfPremiumRow {
                rho_bar,
                methods: TfMethod::ALL.iter().copied().zip(counts).collect(),
                blocks: cfg.subsample.block_grid.iter().copied().zip(b).collect(),
            })
            .collect(),
        width_mean,
        width_median,
    })
}

/// Share of simulated periods with a negative realised score when z follows
/// a stationary AR(1) around `p.z` with standard deviation `z_sd` and all
/// other closure inputs stay fixed.
pub fn pathwise_breach_fraction(
    p: &TwoLayerParams,
    z_sd: f64,
    rho_z: f64,
    periods: usize,
    reps: usize,
    seed: u64,
) -> Result<f64> {
    p.validate()?;
    if !(0.0..1.0).contains(&rho_z) || !(z_sd >= 0.0) || periods == 0 || reps == 0 {
        return Err(Error::Domain(
            "breach simulation needs rho_z in [0,1), z_sd >= 0 and nonempty sizes".into(),
        ));
    }
    let innov = z_sd * (1.0 - rho_z * rho_z).sqrt();
    let breaches: u64 = (0..reps)
        .into_par_iter()
        .map(|i| {
            let mut rng = replication_rng(seed, i, BREACH_STREAM);
            let mut q = p.clone();
            let mut a = z_sd * normal(&mut rng);
            let mut count = 0u64;
            for _ in 0..periods {
                q.z = (p.z + a).max(Z_FLOOR);
                count += u64::from(score_pe(&q) < 0.0);
                a = rho_z * a + innov * normal(&mut rng);
            }
            count
        })
        .sum();
    Ok(breaches as f64 / (reps * periods) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet() -> McConfig {
        McConfig {
            n_reps: 20,
            sigma_theta_obs: 0.0,
            pe: PeDgp {
                sd_theta: 0.0,
                sd_z: 0.0,
                stress_prob: 0.0,
                ..PeDgp::default()
            },
            tf: TfDgp {
                sd_pi: 0.0,
                sd_d: 0.0,
                sd_g: 0.0,
                ..TfDgp::default()
            },
            ..McConfig::default()
        }
    }

    #[test]
    fn degenerate_pe_is_always_covered() {
        let m = run_mc_pe(&quiet()).unwrap();
        for h in 0..m.horizons.len() {
            for method in PeMethod::ALL {
                assert_eq!(m.get(h, method).coverage(), 1.0, "{}", method.name());
            }
            assert_eq!(m.get(h, PeMethod::Naive).ambiguous, 0);
        }
        assert_eq!(m.truth_stress_share, 0.0);
    }

    #[test]
    fn degenerate_tf_tier2_is_always_covered() {
        let m = run_mc_tf(&quiet()).unwrap();
        for row in 0..m.rows.len() {
            let c = m.get(row, TfMethod::Tier2);
            assert_eq!(
                (c.coverage(), c.false_positive, c.false_negative),
                (1.0, 0, 0)
            );
        }
        let w = 0.02 * (1.0 / 1.574 - 1.0 / 2.4);
        assert!((m.width_mean - w).abs() < 1e-15);
    }

    #[test]
    fn counts() {
        let mut c = LabelCounts::default();
        c.record(false, BandLabel::Positive);
        c.record(true, BandLabel::Negative);
        c.record(true, BandLabel::Ambiguous);
        c.record(true, BandLabel::Positive);
        assert_eq!(
            (c.n, c.false_positive, c.false_negative, c.ambiguous),
            (4, 1, 1, 1)
        );
        assert_eq!(c.coverage(), 0.5);
    }

    #[test]
    fn rejects_short_horizon() {
        let cfg = McConfig {
            horizons_years: vec![2.0],
            ..McConfig::default()
        };
        assert!(matches!(run_mc_pe(&cfg), Err(Error::Domain(_))));
        let cfg = McConfig {
            n_reps: 0,
            ..McConfig::default()
        };
        assert!(run_mc_tf(&cfg).is_err());
    }

    #[test]
    fn breach_fraction_positive() {
        let f =
            pathwise_breach_fraction(&TwoLayerParams::default(), 0.005, 0.9, 60, 200, 7).unwrap();
        assert!(f > 0.01, "{f}");
        let calm =
            pathwise_breach_fraction(&TwoLayerParams::default(), 0.0, 0.9, 60, 10, 7).unwrap();
        assert_eq!(calm, 0.0);
    }
}
