//! Generalized least squares fit of the max-spectrum.
//!
//! For i.i.d. α-Fréchet data the spectrum satisfies `E Y_j = j/α + C` and
//! `Cov(Y_i, Y_j) = 2^{j-i} ψ(|i-j|) / (α² N_i)` for `i ≤ j`. The unknown α only
//! scales the covariance, so the fit uses the α = 1 matrix and is exact.

use crate::error::{Error, Result};
use crate::frechet::LOG2_MEAN_STD;
use crate::linalg::SymMatrix;
use crate::psi::PsiTable;
use crate::spectrum::{floor_log2, MaxSpectrum};
use serde::Serialize;

/// Largest scale accepted where no sample size bounds it.
pub const MAX_SCALE: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GlsFit {
    pub j1: usize,
    pub j2: usize,
    /// Slope, the estimate of 1/α.
    #[serde(rename = "H")]
    pub h: f64,
    /// Intercept at scale 0.
    #[serde(rename = "C")]
    pub c: f64,
    /// Slope weights over `j1..=j2`: `H = Σ w_j Y_j`.
    pub w: Vec<f64>,
    /// Intercept weights: `C = Σ v_j Y_j`.
    pub v: Vec<f64>,
    pub cw: f64,
    #[serde(rename = "seH")]
    pub se_h: f64,
    /// `N_{j2}`, the block count behind the error bar.
    pub n_top: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TailEstimate {
    pub alpha: f64,
    pub sigma0: f64,
    pub fit: GlsFit,
}

fn check_scales(j1: usize, j2: usize, j_max: usize) -> Result<()> {
    if j1 == 0 {
        return Err(Error::Range("j1 must be at least 1".into()));
    }
    if j2 <= j1 {
        return Err(Error::Range(format!("need j1 < j2, got j1 = {j1}, j2 = {j2}")));
    }
    if j2 > j_max {
        return Err(Error::Range(format!("j2 = {j2} exceeds the largest scale {j_max}")));
    }
    Ok(())
}

/// Finite-sample covariance of `(Y_j1, …, Y_j2)` for 1-Fréchet data of size `n`.
pub fn covariance_matrix(j1: usize, j2: usize, n: usize, psi: &PsiTable) -> Result<SymMatrix> {
    check_scales(j1, j2, floor_log2(n))?;
    let m = SymMatrix::from_upper(j2 - j1 + 1, |a, b| {
        let (i, j) = (j1 + a, j1 + b);
        let n_i = (n >> i) as f64;
        2f64.powi((j - i) as i32) * psi.lookup(j - i) / n_i
    });
    m.cholesky()?;
    Ok(m)
}

/// Large-sample limit of `N_{j2} · covariance_matrix`: entry `2^{max(i,j)-j2} ψ(|i-j|)`.
pub fn asymptotic_sigma1(j1: usize, j2: usize, psi: &PsiTable) -> Result<SymMatrix> {
    check_scales(j1, j2, MAX_SCALE)?;
    let m = SymMatrix::from_upper(j2 - j1 + 1, |a, b| {
        let j = j1 + b;
        2f64.powi(j as i32 - j2 as i32) * psi.lookup(b - a)
    });
    m.cholesky()?;
    Ok(m)
}

/// Rows of `(AᵗΣ⁻¹A)⁻¹AᵗΣ⁻¹` with `A = [j, 1]` over `j1..j1+dim`: the slope
/// weights `w` and intercept weights `v`.
pub fn gls_weights(j1: usize, sigma: &SymMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let dim = sigma.dim();
    if dim < 2 {
        return Err(Error::Range("GLS needs at least two scales".into()));
    }
    let chol = sigma.cholesky()?;
    let scales: Vec<f64> = (0..dim).map(|k| (j1 + k) as f64).collect();
    let xa = chol.solve(&scales);
    let x1 = chol.solve(&vec![1.0; dim]);
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let (m00, m01) = (dot(&xa, &scales), dot(&x1, &scales));
    let (m10, m11) = (dot(&xa, &vec![1.0; dim]), dot(&x1, &vec![1.0; dim]));
    let det = m00 * m11 - m01 * m10;
    if !(det.abs() > 1e-14 * (m00 * m11).abs()) || !det.is_finite() {
        return Err(Error::Numeric("singular GLS normal equations".into()));
    }
    let (i00, i01, i10, i11) = (m11 / det, -m01 / det, -m10 / det, m00 / det);
    let w = (0..dim).map(|k| i00 * xa[k] + i01 * x1[k]).collect();
    let v = (0..dim).map(|k| i10 * xa[k] + i11 * x1[k]).collect();
    Ok((w, v))
}

/// Variance constant `c_w = wᵗ Σ₁ w`, with `w` the GLS slope weights for the
/// asymptotic matrix itself.
pub fn cw_constant(j1: usize, j2: usize, psi: &PsiTable) -> Result<f64> {
    let sigma1 = asymptotic_sigma1(j1, j2, psi)?;
    let (w, _) = gls_weights(j1, &sigma1)?;
    Ok(sigma1.quadratic_form(&w))
}

pub fn gls_fit(spec: &MaxSpectrum, j1: usize, j2: usize, psi: &PsiTable) -> Result<GlsFit> {
    check_scales(j1, j2, spec.j_max)?;
    if j1 < spec.j_min_valid {
        return Err(Error::Validity { j: j1, j_min_valid: spec.j_min_valid });
    }
    let sigma = covariance_matrix(j1, j2, spec.n, psi)?;
    fit_with_covariance(spec, j1, j2, &sigma, psi)
}

/// GLS fit with an explicit covariance for `Y_j1..=Y_j2`.
pub fn fit_with_covariance(
    spec: &MaxSpectrum,
    j1: usize,
    j2: usize,
    sigma: &SymMatrix,
    psi: &PsiTable,
) -> Result<GlsFit> {
    check_scales(j1, j2, spec.j_max)?;
    if sigma.dim() != j2 - j1 + 1 {
        return Err(Error::Range("covariance dimension does not match the scale range".into()));
    }
    let y = (j1..=j2)
        .map(|j| spec.y(j).ok_or(Error::Validity { j, j_min_valid: spec.j_min_valid }))
        .collect::<Result<Vec<_>>>()?;
    let (w, v) = gls_weights(j1, sigma)?;
    // Σw = 0 and Σv = 1: centering on Y_j1 makes a flat spectrum give exactly H = 0
    let h = weighted_increments(&w, &y);
    let c = y[0] + weighted_increments(&v, &y);
    let cw = asymptotic_sigma1(j1, j2, psi)?.quadratic_form(&w);
    let n_top = spec.n_j(j2);
    let se_h = h.abs() * cw.sqrt() / (n_top as f64).sqrt();
    Ok(GlsFit { j1, j2, h, c, w, v, cw, se_h, n_top })
}

/// `Σ_k weights_k (y_k - y_0)`.
pub(crate) fn weighted_increments(weights: &[f64], y: &[f64]) -> f64 {
    weights.iter().zip(y).map(|(a, b)| a * (b - y[0])).sum()
}

/// `α̂ = 1/Ĥ`, `σ̂₀ = 2^{Ĉ - Ĥ E log₂ Z}` with `Z` standard 1-Fréchet.
pub fn tail_estimate(fit: &GlsFit) -> Result<TailEstimate> {
    if !(fit.h > 0.0) {
        return Err(Error::NonPositiveSlope { h: fit.h });
    }
    Ok(TailEstimate { alpha: 1.0 / fit.h, sigma0: (fit.c - fit.h * LOG2_MEAN_STD).exp2(), fit: fit.clone() })
}

/// Standard error of `Y_j` as an estimate of `E Y_j`, plugging `Ĥ` for `1/α`.
pub fn scale_std_error(h: f64, psi: &PsiTable, n_j: usize) -> f64 {
    h.abs() * (psi.lookup(0) / n_j as f64).sqrt()
}
