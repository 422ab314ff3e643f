//! Scalar building blocks shared by the dyadic evaluators.

mod factorial;
mod gamma;
mod lerch;
mod polylog;
mod stirling;
mod zeta;

pub use factorial::{
    factorial_series_eval, factorial_to_borel, CoefficientStream, EiLeftClassicalStream, FnStream, GeometricBound,
    GeometricFactorialStream, VecStream,
};
pub use gamma::{gamma_real, ln_gamma, ln_gamma_real, pochhammer};
pub use lerch::lerch_phi_1;
pub use polylog::{polylog, polylog_continued, polylog_deriv, polylog_exp, polylog_with_error, POLYLOG_RADIUS};
pub use stirling::{stirling_first, stirling_table, StirlingTable, STIRLING_MAX};
pub use zeta::{bernoulli_scaled, zeta, zeta_ln};

use crate::Complex;

/// e^z - 1 without cancellation for small |z|.
pub fn cexpm1(z: Complex) -> Complex {
    let (s, c) = z.im.sin_cos();
    let half = (z.im * 0.5).sin();
    let em1 = z.re.exp_m1();
    Complex::new(em1 * c - 2.0 * half * half, z.re.exp() * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn expm1_small() {
        let z = c64(1e-12, -2e-12);
        let v = cexpm1(z);
        assert!((v - z).norm() < 1e-23);
        let z = c64(0.3, 2.0);
        assert!((cexpm1(z) - (z.exp() - 1.0)).norm() < 1e-15);
    }
}
