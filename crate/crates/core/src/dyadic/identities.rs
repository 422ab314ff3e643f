//! Dyadic decompositions of 1/p, of the Cauchy kernel and of p^{s-1}.

use crate::scalar::{cexpm1, ln_gamma, polylog_continued};
use crate::{c64, Complex, Error, Result};

/// Minimum admissible modulus of a dyadic denominator.
pub const DENOMINATOR_FLOOR: f64 = 1e-8;

/// Level cap shared by every dyadic sum.
pub const MAX_LEVEL: usize = 60;

fn check_level(n: usize) -> Result<()> {
    if n > MAX_LEVEL {
        return Err(Error::OutOfRange(format!("level {n} exceeds {MAX_LEVEL}")));
    }
    Ok(())
}

/// 1/(1 - e^{-u}) - Σ_{k=1}^n 2^{-k}/(1 + e^{-u/2^k}).
fn reciprocal_sum(u: Complex, n: usize) -> Result<Complex> {
    let base_den = -cexpm1(-u);
    if base_den.norm() < DENOMINATOR_FLOOR {
        return Err(Error::SingularDenominator { at: u });
    }
    let mut acc = base_den.inv();
    let mut w = 1.0;
    for _ in 1..=n {
        w *= 0.5;
        let den = 1.0 + (-u * w).exp();
        if den.norm() < DENOMINATOR_FLOOR {
            return Err(Error::SingularDenominator { at: u });
        }
        acc -= w / den;
    }
    Ok(acc)
}

/// Partial dyadic sum for 1/p through level n; equals 1/(2ⁿ(1 - e^{-p/2ⁿ})).
pub fn dyadic_reciprocal_partial(p: Complex, n: usize) -> Result<Complex> {
    check_level(n)?;
    if p.norm() == 0.0 {
        return Err(Error::Domain("p = 0".into()));
    }
    reciprocal_sum(p, n)
}

/// Partial dyadic decomposition of 1/(s - p) with scale β through level K.
pub fn dyadic_cauchy_partial(s: Complex, p: Complex, beta: Complex, k: usize) -> Result<Complex> {
    check_level(k)?;
    if beta.norm() == 0.0 {
        return Err(Error::ZeroBeta);
    }
    if p == s {
        return Err(Error::Domain("p = s".into()));
    }
    // 1/(s-p) = -β/u with u = β(p-s)
    Ok(-beta * reciprocal_sum(beta * (p - s), k)?)
}

/// Partial dyadic decomposition of 1/(s - p)² (the p-derivative at β = 1).
pub fn dyadic_cauchy_deriv_partial(s: Complex, p: Complex, k: usize) -> Result<Complex> {
    check_level(k)?;
    if p == s {
        return Err(Error::Domain("p = s".into()));
    }
    let u = p - s;
    let e = (-u).exp();
    let den = -cexpm1(-u);
    if den.norm() < DENOMINATOR_FLOOR {
        return Err(Error::SingularDenominator { at: u });
    }
    let mut acc = e / (den * den);
    let mut w = 1.0;
    for _ in 1..=k {
        w *= 0.5;
        let ek = (-u * w).exp();
        let d = 1.0 + ek;
        if d.norm() < DENOMINATOR_FLOOR {
            return Err(Error::SingularDenominator { at: u });
        }
        acc += w * w * ek / (d * d);
    }
    Ok(acc)
}

/// Partial ramified decomposition of p^{s-1} through level K:
/// [Li_s(e^{-p}) - Σ_k 2^{-k(1-s)} Li_s(-e^{-p/2^k})] / Γ(1-s).
pub fn ramified_partial(s: f64, p: Complex, k: usize) -> Result<Complex> {
    check_level(k)?;
    if s >= 1.0 {
        return Err(Error::Domain(format!("exponent s = {s} must be below 1")));
    }
    if p.norm() == 0.0 || p.re <= 0.0 {
        return Err(Error::Domain(format!("ramified decomposition needs Re p > 0, got {p}")));
    }
    if s == 0.0 {
        return dyadic_reciprocal_partial(p, k);
    }
    let mut acc = polylog_continued(s, (-p).exp())?;
    let mut w = 1.0;
    for level in 1..=k {
        w *= 0.5;
        let weight = (-(level as f64) * (1.0 - s) * std::f64::consts::LN_2).exp();
        acc -= weight * polylog_continued(s, -(-p * w).exp())?;
    }
    let inv_gamma = (-ln_gamma(c64(1.0 - s, 0.0))?).exp();
    Ok(acc * inv_gamma)
}
