//! Dyadic block maxima and the max-spectrum.
//!
//! At scale `j` the series is cut into `N_j = ⌊n / 2^j⌋` consecutive blocks of
//! length `2^j` (trailing observations that do not fill a block are dropped),
//! and `Y_j` is the mean of `log₂` of the block maxima. Scale `j + 1` maxima are
//! pairwise maxima of scale `j` maxima, so the whole spectrum costs O(n).

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MaxSpectrum {
    pub n: usize,
    pub j_max: usize,
    /// `Y_j` for `j = 1..=j_max` at index `j - 1`; `None` where some block maximum is ≤ 0.
    pub yj: Vec<Option<f64>>,
    /// `N_j` at index `j - 1`.
    pub nj: Vec<usize>,
    /// Smallest scale whose block maxima are all positive.
    pub j_min_valid: usize,
}

impl MaxSpectrum {
    pub fn y(&self, j: usize) -> Option<f64> {
        j.checked_sub(1).and_then(|i| self.yj.get(i).copied().flatten())
    }

    pub fn n_j(&self, j: usize) -> usize {
        self.nj[j - 1]
    }

    pub fn is_valid(&self, j: usize) -> bool {
        j >= self.j_min_valid && j <= self.j_max
    }

    /// Number of scales with a defined `Y_j`.
    pub fn valid_scales(&self) -> usize {
        (self.j_max + 1).saturating_sub(self.j_min_valid)
    }

    /// Builds a spectrum directly from `Y_j` values (all defined), e.g. for
    /// synthetic tests. `n` fixes the block counts.
    pub fn from_values(n: usize, yj: &[f64]) -> Result<Self> {
        let j_max = floor_log2(n);
        if yj.len() != j_max || j_max == 0 {
            return Err(Error::Input(format!("expected {j_max} spectrum values for n = {n}, got {}", yj.len())));
        }
        Ok(MaxSpectrum {
            n,
            j_max,
            yj: yj.iter().map(|&y| Some(y)).collect(),
            nj: (1..=j_max).map(|j| n >> j).collect(),
            j_min_valid: 1,
        })
    }
}

pub(crate) fn floor_log2(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        (usize::BITS - 1 - n.leading_zeros()) as usize
    }
}

/// Maxima of the `⌊n/2^j⌋` complete blocks of length `2^j`.
pub fn block_maxima(data: &[f64], j: usize) -> Result<Vec<f64>> {
    if data.is_empty() {
        return Err(Error::Input("empty data".into()));
    }
    let j_max = floor_log2(data.len());
    if j == 0 || j > j_max {
        return Err(Error::Scale { j, max: j_max });
    }
    let size = 1usize << j;
    Ok(data.chunks_exact(size).map(|block| block.iter().copied().fold(f64::NEG_INFINITY, f64::max)).collect())
}

pub fn compute_spectrum(data: &[f64]) -> Result<MaxSpectrum> {
    let n = data.len();
    if n < 2 {
        return Err(Error::Input(format!("need at least 2 observations, got {n}")));
    }
    if let Some(i) = data.iter().position(|x| !x.is_finite()) {
        return Err(Error::Input(format!("non-finite value at position {}", i + 1)));
    }
    let j_max = floor_log2(n);
    let mut yj = Vec::with_capacity(j_max);
    let mut nj = Vec::with_capacity(j_max);
    let mut level: Vec<f64> = data.chunks_exact(2).map(|p| p[0].max(p[1])).collect();
    for j in 1..=j_max {
        if j > 1 {
            level = level.chunks_exact(2).map(|p| p[0].max(p[1])).collect();
        }
        nj.push(level.len());
        yj.push(mean_log2(&level));
    }
    let j_min_valid = yj.iter().position(Option::is_some).map_or(j_max + 1, |i| i + 1);
    if j_min_valid > j_max {
        return Err(Error::DegenerateData("block maxima are non-positive at every scale".into()));
    }
    Ok(MaxSpectrum { n, j_max, yj, nj, j_min_valid })
}

fn mean_log2(maxima: &[f64]) -> Option<f64> {
    if maxima.iter().any(|&m| m <= 0.0) {
        return None;
    }
    // centered on the first term so that equal maxima give an exact mean
    let first = maxima[0].log2();
    Some(first + maxima.iter().map(|m| m.log2() - first).sum::<f64>() / maxima.len() as f64)
}
