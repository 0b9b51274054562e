//! Heavy-tail exponent estimation from the dyadic max-spectrum.
//!
//! The pipeline is [`compute_spectrum`] → [`select_j1`] → [`gls_fit`] →
//! [`tail_estimate`] → [`asymptotic_ci`] or [`permutation_bootstrap`], with
//! the Hill estimator as a baseline and seeded heavy-tailed generators for
//! validation.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod frechet;
pub mod gls;
pub mod hill;
pub mod inference;
pub mod io;
pub mod linalg;
pub mod models;
pub mod psi;
mod quad;
pub mod rates;
pub mod select;
pub mod spectrum;
mod stable;
pub mod stream;

pub use error::{Error, Result};
pub use gls::{cw_constant, gls_fit, tail_estimate, GlsFit, TailEstimate};
pub use hill::{hill_estimate, hill_plot};
pub use inference::{asymptotic_ci, permutation_bootstrap, ConfidenceReport};
pub use models::DistributionSpec;
pub use psi::{builtin_psi, psi_mc, PsiTable};
pub use select::{select_j1, SelectionTrace};
pub use spectrum::{compute_spectrum, MaxSpectrum};
pub use stream::{SeededStream, DEFAULT_SEED};
