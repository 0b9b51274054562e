//! α-stable laws in the S1 (Samorodnitsky–Taqqu) parameterization with zero
//! location: characteristic function `exp(-σ^α|t|^α (1 - iβ sign(t) tan(πα/2)))`
//! for α ≠ 1 and `exp(-σ|t| (1 + iβ (2/π) sign(t) ln|t|))` for α = 1.
//!
//! Sampling uses the Chambers–Mallows–Stuck transform. The CDF is evaluated by
//! Nolan's single-integral representation after shifting to the S0 form.

use crate::quad;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Open01};
use std::f64::consts::{FRAC_PI_2, PI};

const ALPHA_ONE_EPS: f64 = 1e-12;

pub(crate) fn sample<R: Rng + ?Sized>(alpha: f64, beta: f64, scale: f64, rng: &mut R) -> f64 {
    let u: f64 = Open01.sample(rng);
    let v = PI * (u - 0.5);
    let w: f64 = Exp1.sample(rng);
    if (alpha - 1.0).abs() < ALPHA_ONE_EPS {
        let a = FRAC_PI_2 + beta * v;
        let x = (a * v.tan() - beta * (FRAC_PI_2 * w * v.cos() / a).ln()) / FRAC_PI_2;
        scale * x + beta * scale * scale.ln() / FRAC_PI_2
    } else {
        let t = beta * (PI * alpha / 2.0).tan();
        let b = t.atan() / alpha;
        let s = (1.0 + t * t).powf(1.0 / (2.0 * alpha));
        let x = s * (alpha * (v + b)).sin() / v.cos().powf(1.0 / alpha)
            * ((v - alpha * (v + b)).cos() / w).powf((1.0 - alpha) / alpha);
        scale * x
    }
}

pub(crate) fn cdf(alpha: f64, beta: f64, scale: f64, x: f64) -> f64 {
    if (alpha - 1.0).abs() < ALPHA_ONE_EPS {
        let z = (x - beta * scale * scale.ln() / FRAC_PI_2) / scale;
        cdf_s0_alpha_one(beta, z)
    } else {
        let z = x / scale - beta * (PI * alpha / 2.0).tan();
        cdf_s0(alpha, beta, z)
    }
    .clamp(0.0, 1.0)
}

/// Standard S0 CDF, α ≠ 1.
fn cdf_s0(alpha: f64, beta: f64, x: f64) -> f64 {
    let tan_a = (PI * alpha / 2.0).tan();
    let zeta = -beta * tan_a;
    let theta0 = (beta * tan_a).atan() / alpha;
    if (x - zeta).abs() < 1e-14 * (1.0 + zeta.abs()) {
        return (FRAC_PI_2 - theta0) / PI;
    }
    if x < zeta {
        return 1.0 - cdf_s0(alpha, -beta, -x);
    }
    let c1 = if alpha < 1.0 { (FRAC_PI_2 - theta0) / PI } else { 1.0 };
    let lo = -theta0;
    let hi = FRAC_PI_2;
    if hi - lo < 1e-15 {
        return c1;
    }
    let power = (x - zeta).powf(alpha / (alpha - 1.0));
    let cos_a0 = (alpha * theta0).cos();
    // log of the exponent h(θ) = (x-ζ)^{α/(α-1)} V(θ)
    let log_h = |theta: f64| -> f64 {
        let v = cos_a0.powf(1.0 / (alpha - 1.0))
            * (theta.cos() / (alpha * (theta0 + theta)).sin()).powf(alpha / (alpha - 1.0))
            * (alpha * theta0 + (alpha - 1.0) * theta).cos()
            / theta.cos();
        (power * v).ln()
    };
    let integrand = |theta: f64| -> f64 {
        let lh = log_h(theta);
        if lh.is_nan() {
            0.0
        } else {
            (-lh.exp()).exp()
        }
    };
    let integral = split_integral(&integrand, &log_h, lo, hi);
    let sign = if alpha < 1.0 { 1.0 } else { -1.0 };
    c1 + sign * integral / PI
}

/// Standard S0 (= S1) CDF at α = 1.
fn cdf_s0_alpha_one(beta: f64, x: f64) -> f64 {
    if beta.abs() < 1e-15 {
        return 0.5 + x.atan() / PI;
    }
    if beta < 0.0 {
        return 1.0 - cdf_s0_alpha_one(-beta, -x);
    }
    let shift = -PI * x / (2.0 * beta);
    let log_h = |theta: f64| -> f64 {
        let a = FRAC_PI_2 + beta * theta;
        let log_v = (a / theta.cos() / FRAC_PI_2).ln() + a * theta.tan() / beta;
        shift + log_v
    };
    let integrand = |theta: f64| -> f64 {
        let lh = log_h(theta);
        if lh.is_nan() {
            0.0
        } else {
            (-lh.exp()).exp()
        }
    };
    split_integral(&integrand, &log_h, -FRAC_PI_2, FRAC_PI_2) / PI
}

/// The integrand `exp(-h(θ))` switches from ≈1 to ≈0 where `h(θ) = 1`, and `h`
/// is monotone, so the interval is split there before adaptive integration.
fn split_integral<F, L>(integrand: &F, log_h: &L, lo: f64, hi: f64) -> f64
where
    F: Fn(f64) -> f64,
    L: Fn(f64) -> f64,
{
    let eps = 1e-12 * (hi - lo);
    let (a, b) = (lo + eps, hi - eps);
    let (la, lb) = (log_h(a), log_h(b));
    let tol = 1e-13;
    if la.is_finite() && lb.is_finite() && la.signum() != lb.signum() {
        let increasing = la < lb;
        let (mut l, mut r) = (a, b);
        for _ in 0..200 {
            let m = 0.5 * (l + r);
            let lm = log_h(m);
            if (lm < 0.0) == increasing {
                l = m;
            } else {
                r = m;
            }
            if r - l < 1e-15 {
                break;
            }
        }
        let m = 0.5 * (l + r);
        quad::integrate(integrand, lo, m, tol) + quad::integrate(integrand, m, hi, tol)
    } else {
        quad::integrate(integrand, lo, hi, tol)
    }
}
