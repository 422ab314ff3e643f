//! Geometrically convergent dyadic factorial expansions for special functions.
//!
//! The crate evaluates Ei (on both sides of its Stokes ray), Ψ, the incomplete
//! gamma function, erfc, Airy Ai and the modified Bessel function K_ν through
//! dyadic decompositions of the Cauchy kernel. Every evaluator returns an
//! [`special::EvalResult`] carrying the truncation plan it used.
//!
//! Module map:
//!
//! * [`scalar`]: log-gamma, Pochhammer symbols, Stirling numbers, polylogarithms,
//!   the Lerch transcendent and classical factorial series.
//! * [`dyadic`]: the dyadic identities themselves, remainder models and the planner.
//! * [`special`]: Ei, Ψ, Γ(s, x) and erfc evaluators.
//! * [`borel`]: the Borel-plane kernel for Airy/Bessel and its coefficient tables.
//! * [`operator`]: matrix versions of the identities for Hermitian matrices.
//! * [`oracle`]: independent reference implementations used for verification.
//! * [`cli`]: the command-line front end used by the `dyadic` binary.

pub mod borel;
pub mod cli;
pub mod dyadic;
pub mod error;
pub mod operator;
pub mod oracle;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};

/// Complex binary64 scalar used throughout the crate.
pub type Complex = num_complex::Complex64;

/// Shorthand constructor for [`Complex`].
#[inline]
pub fn c64(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}
