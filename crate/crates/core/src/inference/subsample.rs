use crate::error::{Error, Result};
use crate::stats::{mean, quantile_type1};

/// Below this many blocks the subsampling distribution is not trusted.
pub const MIN_BLOCKS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct SubsampleConfig {
    pub window_h: usize,
    pub block_len: usize,
    pub alpha: f64,
    /// Block lengths for sensitivity runs and the conservative grid band.
    pub block_grid: Vec<usize>,
}

impl Default for SubsampleConfig {
    fn default() -> Self {
        Self {
            window_h: 14,
            block_len: 6,
            alpha: 0.10,
            block_grid: vec![4, 6, 8],
        }
    }
}

impl SubsampleConfig {
    pub fn validate(&self) -> Result<()> {
        for &l in std::iter::once(&self.block_len).chain(&self.block_grid) {
            if !(3..self.window_h).contains(&l) {
                return Err(Error::Domain(format!(
                    "block length must satisfy 3 <= l < window_h = {}, got {l}",
                    self.window_h
                )));
            }
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Domain(format!(
                "alpha must lie in (0,1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn with_block(&self, block_len: usize) -> Self {
        Self {
            block_len,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalValue {
    /// Half-width applied to the envelope level.
    pub c: f64,
    pub blocks: usize,
    /// Fewer than `MIN_BLOCKS` blocks: `c` is the largest absolute deviation.
    pub degenerate: bool,
}

/// Subsampling half-width for the window mean of the last `window_h` values.
///
/// Each contiguous block of length ℓ yields √ℓ(τ_ℓ − τ_h), rescaled by
/// 1/√(1 − ℓ/h) because blocks overlap the full window. The band is the
/// type-1 (1 − α) quantile of the absolute statistics divided by √h.
pub fn subsample_critical_value(remainder: &[f64], cfg: &SubsampleConfig) -> Result<CriticalValue> {
    cfg.validate()?;
    let h = cfg.window_h;
    if remainder.len() < h {
        return Err(Error::Estimation(format!(
            "subsampling needs {h} observations, got {}",
            remainder.len()
        )));
    }
    let w = &remainder[remainder.len() - h..];
    let tau = mean(w);
    let l = cfg.block_len;
    let blocks = h - l + 1;
    if blocks < MIN_BLOCKS {
        let c = w.iter().map(|r| (r - tau).abs()).fold(0.0, f64::max);
        return Ok(CriticalValue {
            c,
            blocks,
            degenerate: true,
        });
    }
    let scale = (l as f64).sqrt() / (1.0 - l as f64 / h as f64).sqrt();
    let stats: Vec<f64> = w
        .windows(l)
        .map(|b| (scale * (mean(b) - tau)).abs())
        .collect();
    let q = quantile_type1(&stats, 1.0 - cfg.alpha);
    Ok(CriticalValue {
        c: q / (h as f64).sqrt(),
        blocks,
        degenerate: false,
    })
}

/// Largest half-width across the block-length grid.
pub fn grid_critical_value(remainder: &[f64], cfg: &SubsampleConfig) -> Result<CriticalValue> {
    let mut best: Option<CriticalValue> = None;
    for &l in &cfg.block_grid {
        let cv = subsample_critical_value(remainder, &cfg.with_block(l))?;
        if best.is_none_or(|b| cv.c > b.c) {
            best = Some(cv);
        }
    }
    best.map_or_else(|| subsample_critical_value(remainder, cfg), Ok)
}
