//! Riemann zeta on the real line and scaled Bernoulli numbers.

use super::gamma::ln_gamma_real;
use crate::{Error, Result};
use once_cell::sync::Lazy;
use std::f64::consts::PI;

const BORWEIN_N: usize = 40;

static BORWEIN_D: Lazy<Vec<f64>> = Lazy::new(|| {
    let n = BORWEIN_N as f64;
    let mut d = Vec::with_capacity(BORWEIN_N + 1);
    let mut term = 1.0 / n;
    let mut acc = 0.0;
    for i in 0..=BORWEIN_N {
        acc += term;
        d.push(n * acc);
        let fi = i as f64;
        term *= 4.0 * (n + fi) * (n - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
    }
    d
});

/// sin(πx) with exact argument reduction.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    (PI * r).sin()
}

// Borwein's alternating-series algorithm, accurate for s ≥ 0, s ≠ 1.
fn zeta_borwein(s: f64) -> f64 {
    let d = &*BORWEIN_D;
    let dn = d[BORWEIN_N];
    let mut acc = 0.0;
    for k in 0..BORWEIN_N {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * (d[k] - dn) * (-(s * ((k + 1) as f64).ln())).exp();
    }
    let eta = -acc / dn;
    eta / (1.0 - (2f64).powf(1.0 - s))
}

/// ln|ζ(s)| and the sign of ζ(s); the sign is 0 at the trivial zeros.
pub fn zeta_ln(s: f64) -> Result<(f64, f64)> {
    if s == 1.0 {
        return Err(Error::Pole { at: crate::c64(1.0, 0.0) });
    }
    if s >= 0.0 {
        let z = zeta_borwein(s);
        return Ok((z.abs().ln(), z.signum()));
    }
    let sn = sin_pi(s / 2.0);
    if sn == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    let (lg, _) = ln_gamma_real(1.0 - s)?;
    let z1 = zeta_borwein(1.0 - s);
    let l = s * 2f64.ln() + (s - 1.0) * PI.ln() + sn.abs().ln() + lg + z1.ln();
    Ok((l, sn.signum()))
}

/// Riemann zeta function for real s ≠ 1.
pub fn zeta(s: f64) -> Result<f64> {
    let (l, sg) = zeta_ln(s)?;
    if sg == 0.0 {
        return Ok(0.0);
    }
    Ok(sg * l.exp())
}

/// B_n / n! (with B_1 = -1/2).
pub fn bernoulli_scaled(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => -0.5,
        _ if n % 2 == 1 => 0.0,
        _ => {
            let half = n / 2;
            let sign = if half % 2 == 1 { 1.0 } else { -1.0 };
            let z = zeta_borwein(n as f64);
            sign * 2.0 * z * (-(n as f64) * (2.0 * PI).ln()).exp()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(0.0).unwrap() + 0.5).abs() < 1e-15);
        assert!((zeta(-1.0).unwrap() + 1.0 / 12.0).abs() < 1e-15);
        assert!((zeta(0.5).unwrap() + 1.460_354_508_809_586_8).abs() < 1e-14);
        assert!((zeta(-0.5).unwrap() + 0.207_886_224_977_354_57).abs() < 1e-14);
        assert_eq!(zeta(-4.0).unwrap(), 0.0);
        assert!((zeta(-3.0).unwrap() - 1.0 / 120.0).abs() < 1e-16);
        assert!(zeta(1.0).is_err());
        // ζ(-21) = -B_22/22 = -854513/138/22
        let z = zeta(-21.0).unwrap();
        assert!((z + 854513.0 / 138.0 / 22.0).abs() < 1e-12 * z.abs());
    }

    #[test]
    fn bernoulli() {
        assert!((bernoulli_scaled(2) - 1.0 / 12.0).abs() < 1e-16);
        assert!((bernoulli_scaled(4) + 1.0 / 720.0).abs() < 1e-18);
        assert_eq!(bernoulli_scaled(7), 0.0);
    }
}
