//! Confidence intervals for `H = 1/α`: asymptotic normal and permutation
//! bootstrap. Intervals for α come from inverting the H interval.

use crate::error::{Error, Result};
use crate::gls::{gls_fit, tail_estimate, weighted_increments, GlsFit, TailEstimate};
use crate::psi::PsiTable;
use crate::select::normal_upper_quantile;
use crate::spectrum::compute_spectrum;
use crate::stream::SeededStream;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

pub const DEFAULT_LEVEL: f64 = 0.95;
pub const DEFAULT_REPLICATES: usize = 1000;
pub const MIN_REPLICATES: usize = 100;
/// Largest fraction of bootstrap replicates that may be dropped.
pub const MAX_DROP_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AlphaInterval {
    pub low: f64,
    /// `+∞` when the H interval reaches zero (serialized as `null`).
    pub high: f64,
    pub unbounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CiMethod {
    Asymptotic,
    Permutation { replicates: usize, seed: u64, stream: u64, dropped: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfidenceReport {
    pub level: f64,
    #[serde(rename = "H")]
    pub h_hat: f64,
    pub h_interval: (f64, f64),
    /// `None` when the whole H interval is non-positive.
    pub alpha_interval: Option<AlphaInterval>,
    pub method: CiMethod,
    /// `None` when the point slope is not positive.
    pub point_estimate: Option<TailEstimate>,
}

/// Reciprocal of `(low, high)`, with an unbounded upper end once `low ≤ 0`.
pub fn invert_interval(low: f64, high: f64) -> Option<AlphaInterval> {
    if !(high > 0.0) {
        return None;
    }
    if low > 0.0 {
        Some(AlphaInterval { low: 1.0 / high, high: 1.0 / low, unbounded: false })
    } else {
        Some(AlphaInterval { low: 1.0 / high, high: f64::INFINITY, unbounded: true })
    }
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("confidence level must lie in (0,1), got {level}")))
    }
}

/// `Ĥ ∓ z Ĥ √c_w / √N_{j2}`.
pub fn asymptotic_ci(fit: &GlsFit, level: f64) -> Result<ConfidenceReport> {
    check_level(level)?;
    let point = tail_estimate(fit)?;
    let z = normal_upper_quantile((1.0 - level) / 2.0)?;
    let half = z * fit.h * fit.cw.sqrt() / (fit.n_top as f64).sqrt();
    let (low, high) = (fit.h - half, fit.h + half);
    Ok(ConfidenceReport {
        level,
        h_hat: fit.h,
        h_interval: (low, high),
        alpha_interval: invert_interval(low, high),
        method: CiMethod::Asymptotic,
        point_estimate: Some(point),
    })
}

/// Sample quantile with linear interpolation between order statistics
/// (position `q (n - 1)` in the sorted sample).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Bootstrap sample `Ĥ_1..Ĥ_M` from `M` uniform random permutations of the
/// data, refitting on `j1..=j2` each time. Replicate `i` shuffles with
/// `stream.substream(i)`. Returns the replicates kept (in index order) and
/// the number dropped because a permuted spectrum was undefined in range.
pub fn permutation_replicates(
    data: &[f64],
    fit: &GlsFit,
    replicates: usize,
    stream: SeededStream,
) -> Result<(Vec<f64>, usize)> {
    let (j1, j2) = (fit.j1, fit.j2);
    let outcomes: Vec<Result<Option<f64>>> = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.substream(i as u64).rng();
            let mut permuted = data.to_vec();
            permuted.shuffle(&mut rng);
            let spectrum = match compute_spectrum(&permuted) {
                Ok(s) => s,
                Err(Error::DegenerateData(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let y: Option<Vec<f64>> = (j1..=j2).map(|j| spectrum.y(j)).collect();
            Ok(y.map(|y| weighted_increments(&fit.w, &y)))
        })
        .collect();
    let mut kept = Vec::with_capacity(replicates);
    let mut dropped = 0;
    for o in outcomes {
        match o? {
            Some(h) => kept.push(h),
            None => dropped += 1,
        }
    }
    Ok((kept, dropped))
}

#[allow(clippy::too_many_arguments)]
pub fn permutation_bootstrap(
    data: &[f64],
    j1: usize,
    j2: usize,
    replicates: usize,
    level: f64,
    stream: SeededStream,
    psi: &PsiTable,
) -> Result<ConfidenceReport> {
    check_level(level)?;
    if replicates < MIN_REPLICATES {
        return Err(Error::Parameter(format!("need at least {MIN_REPLICATES} bootstrap replicates, got {replicates}")));
    }
    let spectrum = compute_spectrum(data)?;
    let fit = gls_fit(&spectrum, j1, j2, psi)?;
    let (mut hs, dropped) = permutation_replicates(data, &fit, replicates, stream)?;
    if dropped as f64 > MAX_DROP_FRACTION * replicates as f64 {
        return Err(Error::DegenerateData(format!(
            "{dropped} of {replicates} permuted replicates had undefined Y_j on scales {j1}..={j2}"
        )));
    }
    hs.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    let low = quantile_sorted(&hs, tail);
    let high = quantile_sorted(&hs, 1.0 - tail);
    Ok(ConfidenceReport {
        level,
        h_hat: fit.h,
        h_interval: (low, high),
        alpha_interval: invert_interval(low, high),
        method: CiMethod::Permutation { replicates, seed: stream.seed, stream: stream.stream, dropped },
        point_estimate: tail_estimate(&fit).ok(),
    })
}
