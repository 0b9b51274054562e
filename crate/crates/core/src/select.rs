//! Automatic choice of the lower scale `j1` by backward sequential testing.
//!
//! Start from the top `b + 1` scales and widen the range one scale at a time.
//! Each widening is accepted while the change in slope, `Ĥ_new - Ĥ_old`, is
//! consistent with zero at level `p` under the Fréchet covariance model.

use crate::error::{Error, Result};
use crate::gls::{covariance_matrix, gls_fit, GlsFit};
use crate::psi::PsiTable;
use crate::spectrum::MaxSpectrum;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

pub const DEFAULT_P: f64 = 0.01;
pub const DEFAULT_BACK_START: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SelectionStep {
    pub j1_candidate: usize,
    pub h_new: f64,
    pub h_old: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SelectionTrace {
    pub steps: Vec<SelectionStep>,
    #[serde(rename = "selectedJ1")]
    pub selected_j1: usize,
    pub final_fit: GlsFit,
}

/// Upper `q` quantile of the standard normal, `Φ⁻¹(1 - q)`.
pub fn normal_upper_quantile(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Parameter(format!("quantile level must lie in (0,1), got {q}")));
    }
    Ok(Normal::standard().inverse_cdf(1.0 - q))
}

pub fn select_j1(spec: &MaxSpectrum, p: f64, b: usize, psi: &PsiTable) -> Result<SelectionTrace> {
    select_j1_below(spec, spec.j_max, p, b, psi)
}

/// As [`select_j1`] with the upper scale fixed at `j2` instead of `jMax`.
pub fn select_j1_below(spec: &MaxSpectrum, j2: usize, p: f64, b: usize, psi: &PsiTable) -> Result<SelectionTrace> {
    if j2 == 0 || j2 > spec.j_max {
        return Err(Error::Scale { j: j2, max: spec.j_max });
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Parameter(format!("significance p must lie in (0,1), got {p}")));
    }
    if b == 0 {
        return Err(Error::Parameter("back-start b must be at least 1".into()));
    }
    let valid = (j2 + 1).saturating_sub(spec.j_min_valid);
    if valid < b + 2 {
        return Err(Error::InsufficientScales { valid, needed: b + 2 });
    }
    let z = normal_upper_quantile(p / 2.0)?;
    let floor = spec.j_min_valid;
    // Σ₁(1, j2; N); padded weight vectors are indexed from scale 1
    let sigma_full = covariance_matrix(1, j2, spec.n, psi)?;

    let mut j1 = (j2 - b).max(floor);
    let mut old = gls_fit(spec, j1, j2, psi)?;
    let mut steps = Vec::new();
    while j1 > floor {
        let new = gls_fit(spec, j1 - 1, j2, psi)?;
        let mut diff = vec![0.0; j2];
        for (k, w) in new.w.iter().enumerate() {
            diff[j1 - 2 + k] += w;
        }
        for (k, w) in old.w.iter().enumerate() {
            diff[j1 - 1 + k] -= w;
        }
        let s1 = sigma_full.quadratic_form(&diff).max(0.0).sqrt();
        let delta = new.h - old.h;
        let half = z * old.h.abs() * s1;
        let (ci_low, ci_high) = (delta - half, delta + half);
        let accepted = ci_low <= 0.0 && 0.0 <= ci_high;
        steps.push(SelectionStep { j1_candidate: j1, h_new: new.h, h_old: old.h, ci_low, ci_high, accepted });
        if !accepted {
            break;
        }
        j1 -= 1;
        old = new;
    }
    Ok(SelectionTrace { steps, selected_j1: j1, final_fit: old })
}
