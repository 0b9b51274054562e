//! Heavy-tailed distribution models: seeded sampling, CDFs, and the tail
//! representation `F(x) = exp(-σ^α(x) x^-α)` for the models with closed forms.

use crate::error::{Error, Result};
use crate::stable;
use crate::stream::SeededStream;
use rand::Rng;
use rand_distr::{Distribution, Exp, Open01, StudentT};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    Pareto {
        alpha: f64,
        sigma0: f64,
    },
    Frechet {
        alpha: f64,
        sigma0: f64,
    },
    /// `p` Pareto(α₀, σ₀) + `(1-p)` Pareto(α₁, σ₁), α₀ < α₁.
    ParetoMixture {
        p: f64,
        alpha0: f64,
        alpha1: f64,
        sigma0: f64,
        sigma1: f64,
    },
    /// `max(σ₀ Z₀, σ₁ Z₁)` with independent standard α₀-, α₁-Fréchet, α₀ < α₁.
    FrechetMaxProduct {
        alpha0: f64,
        alpha1: f64,
        sigma0: f64,
        sigma1: f64,
    },
    /// `p_frechet` α-Fréchet(σ₀) + `(1-p_frechet)` Exponential(mean `exp_mean`).
    ExpFrechetMixture {
        p_frechet: f64,
        alpha: f64,
        sigma0: f64,
        exp_mean: f64,
    },
    /// S1-parameterized α-stable law with zero location.
    Stable {
        alpha: f64,
        beta: f64,
        scale: f64,
    },
    StudentT {
        dof: f64,
    },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be positive and finite, got {v}")))
    }
}

fn unit_open(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must lie in (0,1), got {v}")))
    }
}

fn ordered(alpha0: f64, alpha1: f64) -> Result<()> {
    if alpha0 < alpha1 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("exponents must satisfy alpha0 < alpha1, got {alpha0} and {alpha1}")))
    }
}

impl DistributionSpec {
    /// 10% α-Fréchet, 90% Exponential of mean 5.
    pub fn exp_frechet_default(alpha: f64, sigma0: f64) -> Self {
        DistributionSpec::ExpFrechetMixture { p_frechet: 0.1, alpha, sigma0, exp_mean: 5.0 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DistributionSpec::Pareto { .. } => "pareto",
            DistributionSpec::Frechet { .. } => "frechet",
            DistributionSpec::ParetoMixture { .. } => "pareto_mixture",
            DistributionSpec::FrechetMaxProduct { .. } => "frechet_max_product",
            DistributionSpec::ExpFrechetMixture { .. } => "exp_frechet_mixture",
            DistributionSpec::Stable { .. } => "stable",
            DistributionSpec::StudentT { .. } => "student_t",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DistributionSpec::Pareto { alpha, sigma0 } | DistributionSpec::Frechet { alpha, sigma0 } => {
                positive("alpha", alpha)?;
                positive("sigma0", sigma0)
            }
            DistributionSpec::ParetoMixture { p, alpha0, alpha1, sigma0, sigma1 } => {
                unit_open("p", p)?;
                positive("alpha0", alpha0)?;
                positive("alpha1", alpha1)?;
                ordered(alpha0, alpha1)?;
                positive("sigma0", sigma0)?;
                positive("sigma1", sigma1)
            }
            DistributionSpec::FrechetMaxProduct { alpha0, alpha1, sigma0, sigma1 } => {
                positive("alpha0", alpha0)?;
                positive("alpha1", alpha1)?;
                ordered(alpha0, alpha1)?;
                positive("sigma0", sigma0)?;
                positive("sigma1", sigma1)
            }
            DistributionSpec::ExpFrechetMixture { p_frechet, alpha, sigma0, exp_mean } => {
                unit_open("p_frechet", p_frechet)?;
                positive("alpha", alpha)?;
                positive("sigma0", sigma0)?;
                positive("exp_mean", exp_mean)
            }
            DistributionSpec::Stable { alpha, beta, scale } => {
                if !(alpha > 0.0 && alpha < 2.0) {
                    return Err(Error::Parameter(format!("stable alpha must lie in (0,2), got {alpha}")));
                }
                if !(-1.0..=1.0).contains(&beta) {
                    return Err(Error::Parameter(format!("stable beta must lie in [-1,1], got {beta}")));
                }
                positive("scale", scale)
            }
            DistributionSpec::StudentT { dof } => positive("dof", dof),
        }
    }

    /// The dominant (smallest) tail exponent.
    pub fn tail_exponent(&self) -> f64 {
        match *self {
            DistributionSpec::Pareto { alpha, .. }
            | DistributionSpec::Frechet { alpha, .. }
            | DistributionSpec::ExpFrechetMixture { alpha, .. }
            | DistributionSpec::Stable { alpha, .. } => alpha,
            DistributionSpec::ParetoMixture { alpha0, .. } | DistributionSpec::FrechetMaxProduct { alpha0, .. } => {
                alpha0
            }
            DistributionSpec::StudentT { dof } => dof,
        }
    }

    /// Draws `n` i.i.d. variates; the sequence is a pure function of `stream`.
    pub fn sample(&self, n: usize, stream: SeededStream) -> Result<Vec<f64>> {
        self.validate()?;
        if n == 0 {
            return Err(Error::Parameter("sample size must be at least 1".into()));
        }
        let mut rng = stream.rng();
        let mut out = Vec::with_capacity(n);
        match *self {
            DistributionSpec::StudentT { dof } => {
                let t = StudentT::new(dof).map_err(|e| Error::Parameter(e.to_string()))?;
                out.extend((0..n).map(|_| t.sample(&mut rng)));
            }
            _ => out.extend((0..n).map(|_| self.draw(&mut rng))),
        }
        Ok(out)
    }

    /// One draw from an already validated spec.
    pub(crate) fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            DistributionSpec::Pareto { alpha, sigma0 } => pareto_quantile(alpha, sigma0, uniform(rng)),
            DistributionSpec::Frechet { alpha, sigma0 } => frechet_quantile(alpha, sigma0, uniform(rng)),
            DistributionSpec::ParetoMixture { p, alpha0, alpha1, sigma0, sigma1 } => {
                if rng.random::<f64>() < p {
                    pareto_quantile(alpha0, sigma0, uniform(rng))
                } else {
                    pareto_quantile(alpha1, sigma1, uniform(rng))
                }
            }
            DistributionSpec::FrechetMaxProduct { alpha0, alpha1, sigma0, sigma1 } => {
                let a = frechet_quantile(alpha0, sigma0, uniform(rng));
                let b = frechet_quantile(alpha1, sigma1, uniform(rng));
                a.max(b)
            }
            DistributionSpec::ExpFrechetMixture { p_frechet, alpha, sigma0, exp_mean } => {
                if rng.random::<f64>() < p_frechet {
                    frechet_quantile(alpha, sigma0, uniform(rng))
                } else {
                    Exp::new(1.0 / exp_mean).expect("validated mean").sample(rng)
                }
            }
            DistributionSpec::Stable { alpha, beta, scale } => stable::sample(alpha, beta, scale, rng),
            DistributionSpec::StudentT { dof } => StudentT::new(dof).expect("validated dof").sample(rng),
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        if x.is_nan() {
            return Err(Error::Parameter("cdf evaluated at NaN".into()));
        }
        Ok(match *self {
            DistributionSpec::Pareto { alpha, sigma0 } => pareto_cdf(alpha, sigma0, x),
            DistributionSpec::Frechet { alpha, sigma0 } => frechet_cdf(alpha, sigma0, x),
            DistributionSpec::ParetoMixture { p, alpha0, alpha1, sigma0, sigma1 } => {
                p * pareto_cdf(alpha0, sigma0, x) + (1.0 - p) * pareto_cdf(alpha1, sigma1, x)
            }
            DistributionSpec::FrechetMaxProduct { alpha0, alpha1, sigma0, sigma1 } => {
                frechet_cdf(alpha0, sigma0, x) * frechet_cdf(alpha1, sigma1, x)
            }
            DistributionSpec::ExpFrechetMixture { p_frechet, alpha, sigma0, exp_mean } => {
                let e = if x > 0.0 { -(-x / exp_mean).exp_m1() } else { 0.0 };
                p_frechet * frechet_cdf(alpha, sigma0, x) + (1.0 - p_frechet) * e
            }
            DistributionSpec::Stable { alpha, beta, scale } => stable::cdf(alpha, beta, scale, x),
            DistributionSpec::StudentT { dof } => {
                StudentsT::new(0.0, 1.0, dof).map_err(|e| Error::Parameter(e.to_string()))?.cdf(x)
            }
        })
    }

    /// `σ^α(x) = -x^α ln F(x)` with α the dominant exponent; `+∞` where `F(x) = 0`.
    pub fn sigma_alpha(&self, x: f64) -> Result<f64> {
        self.validate()?;
        if !(x > 0.0) {
            return Err(Error::Parameter(format!("sigma_alpha needs x > 0, got {x}")));
        }
        match *self {
            DistributionSpec::Pareto { alpha, sigma0 } => {
                if x <= sigma0 {
                    return Ok(f64::INFINITY);
                }
                Ok(-x.powf(alpha) * (-(x / sigma0).powf(-alpha)).ln_1p())
            }
            DistributionSpec::Frechet { alpha, sigma0 } => Ok(sigma0.powf(alpha)),
            DistributionSpec::ParetoMixture { p, alpha0, alpha1, sigma0, sigma1 } => {
                if x <= sigma0.min(sigma1) {
                    return Ok(f64::INFINITY);
                }
                // P{X > x}, kept in survival form so large x does not round F to 1
                let tail0 = if x > sigma0 { (x / sigma0).powf(-alpha0) } else { 1.0 };
                let tail1 = if x > sigma1 { (x / sigma1).powf(-alpha1) } else { 1.0 };
                let survival = p * tail0 + (1.0 - p) * tail1;
                Ok(-x.powf(alpha0) * (-survival).ln_1p())
            }
            DistributionSpec::FrechetMaxProduct { alpha0, alpha1, sigma0, sigma1 } => {
                Ok(sigma0.powf(alpha0) + sigma1.powf(alpha1) * x.powf(alpha0 - alpha1))
            }
            _ => Err(Error::UnsupportedModel(self.name())),
        }
    }
}

fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Open01.sample(rng)
}

/// Pareto inverse CDF `σ₀ (1-u)^{-1/α}`.
pub fn pareto_quantile(alpha: f64, sigma0: f64, u: f64) -> f64 {
    sigma0 * (1.0 - u).powf(-1.0 / alpha)
}

/// Fréchet inverse CDF `σ₀ (-ln u)^{-1/α}`.
pub fn frechet_quantile(alpha: f64, sigma0: f64, u: f64) -> f64 {
    sigma0 * (-u.ln()).powf(-1.0 / alpha)
}

fn pareto_cdf(alpha: f64, sigma0: f64, x: f64) -> f64 {
    if x <= sigma0 {
        0.0
    } else {
        1.0 - (x / sigma0).powf(-alpha)
    }
}

fn frechet_cdf(alpha: f64, sigma0: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-(x / sigma0).powf(-alpha)).exp()
    }
}
