//! Closed-form Fréchet facts.
//!
//! A standard α-Fréchet variable Z has `P{Z ≤ x} = exp(-x^-α)`. Its power
//! moments are `E Z^p = Γ(1 - p/α)` for `p < α`, and `ln Z` is Gumbel
//! distributed, which gives the log₂ mean and variance below.

use crate::error::{Error, Result};
use statrs::function::gamma::gamma;
use std::f64::consts::{LN_2, PI};

/// Euler–Mascheroni constant (20 significant digits).
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `E log₂ Z` for a standard 1-Fréchet `Z`.
pub const LOG2_MEAN_STD: f64 = EULER_GAMMA / LN_2;

/// `E Z^p = σ^p Γ(1 - p/α)` for an α-Fréchet variable with scale σ.
pub fn frechet_moment(alpha: f64, sigma: f64, p: f64) -> Result<f64> {
    check(alpha, sigma)?;
    if !p.is_finite() || p >= alpha {
        return Err(Error::InfiniteMoment { p, alpha });
    }
    Ok(sigma.powf(p) * gamma(1.0 - p / alpha))
}

/// `E log₂ Z = log₂ σ + γ_E / (α ln 2)`.
pub fn frechet_log2_mean(alpha: f64, sigma: f64) -> Result<f64> {
    check(alpha, sigma)?;
    Ok(sigma.log2() + EULER_GAMMA / (alpha * LN_2))
}

/// `Var log₂ Z = π² / (6 α² ln² 2)`; independent of the scale.
pub fn frechet_log2_variance(alpha: f64) -> Result<f64> {
    check(alpha, 1.0)?;
    Ok(PI * PI / (6.0 * alpha * alpha * LN_2 * LN_2))
}

fn check(alpha: f64, sigma: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Parameter(format!("tail exponent must be positive, got {alpha}")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Parameter(format!("scale must be positive, got {sigma}")));
    }
    Ok(())
}
