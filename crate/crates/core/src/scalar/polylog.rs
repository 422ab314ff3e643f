//! Polylogarithm Li_s(z) by direct summation and by the zeta series in ln z.

use super::gamma::{ln_gamma, ln_gamma_real};
use super::stirling::{stirling_table, STIRLING_MAX};
use super::zeta::zeta_ln;
use crate::{c64, Complex, Error, Result};
use std::f64::consts::PI;

/// Largest |z| accepted by the direct series.
pub const POLYLOG_RADIUS: f64 = 1.0 - 1e-6;

const MAX_DIRECT_TERMS: usize = 100_000_000;

/// Li_s(z) = Σ_{k≥1} k^{-s} z^k for |z| ≤ 1 - 10⁻⁶, with the magnitude of the
/// first omitted term divided by 1 - |z| as an error estimate.
pub fn polylog_with_error(s: f64, z: Complex) -> Result<(Complex, f64)> {
    let r = z.norm();
    if r > POLYLOG_RADIUS {
        return Err(Error::Domain(format!("|z| = {r} is outside the direct polylog series domain")));
    }
    if r == 0.0 {
        return Ok((c64(0.0, 0.0), 0.0));
    }
    // terms grow until k ≈ -s / ln(1/|z|) when s < 0
    let peak = if s < 0.0 { (-s / -r.ln()).ceil() as usize } else { 0 };
    let mut sum = c64(0.0, 0.0);
    let mut zk = c64(1.0, 0.0);
    let mut k = 1usize;
    loop {
        zk *= z;
        let t = zk * (-s * (k as f64).ln()).exp();
        sum += t;
        let tn = t.norm();
        if k > peak && tn < 1e-17 * sum.norm() {
            return Ok((sum, tn / (1.0 - r)));
        }
        if zk.norm() == 0.0 {
            return Ok((sum, f64::MIN_POSITIVE));
        }
        k += 1;
        if k > MAX_DIRECT_TERMS {
            return Err(Error::NonConvergence(format!("polylog series at z = {z}")));
        }
    }
}

/// Li_s(z) by the defining series (|z| ≤ 1 - 10⁻⁶).
pub fn polylog(s: f64, z: Complex) -> Result<Complex> {
    polylog_with_error(s, z).map(|(v, _)| v)
}

/// Li_s(e^μ) for |μ| < 2π through Li_s(e^μ) = Γ(1-s)(-μ)^{s-1} + Σ ζ(s-n) μⁿ/n!
/// (with the harmonic-number form of the singular term at positive integer s).
pub fn polylog_exp(s: f64, mu: Complex) -> Result<Complex> {
    if mu.norm() >= 2.0 * PI {
        return Err(Error::Domain(format!("|ln z| = {} must be below 2π", mu.norm())));
    }
    let int_order = s >= 1.0 && s == s.round();
    let mut sum = c64(0.0, 0.0);
    if mu.norm() == 0.0 {
        if s > 1.0 {
            let (l, sg) = zeta_ln(s)?;
            return Ok(c64(sg * l.exp(), 0.0));
        }
        return Err(Error::Pole { at: c64(1.0, 0.0) });
    }
    let ln_mu = mu.ln();
    if int_order {
        let m = s as usize;
        let h: f64 = (1..m).map(|j| 1.0 / j as f64).sum();
        let (lf, _) = ln_gamma_real(m as f64)?;
        let lead = ((m - 1) as f64 * ln_mu - lf).exp();
        sum += lead * (c64(h, 0.0) - (-mu).ln());
    } else {
        let lg = ln_gamma(c64(1.0 - s, 0.0))?;
        sum += (lg + (s - 1.0) * (-mu).ln()).exp();
    }
    let mut n = 0usize;
    let mut small = 0;
    loop {
        let order = s - n as f64;
        if !(int_order && order == 1.0) {
            let (lz, sg) = zeta_ln(order)?;
            if sg != 0.0 {
                let (lf, _) = ln_gamma_real(n as f64 + 1.0)?;
                let t = (c64(lz - lf, 0.0) + n as f64 * ln_mu).exp() * sg;
                sum += t;
                if t.norm() < 1e-17 * sum.norm() && (n as f64) > (-s).max(0.0) {
                    small += 1;
                } else {
                    small = 0;
                }
            }
        }
        n += 1;
        if small >= 3 {
            return Ok(sum);
        }
        if n > 600 {
            return Err(Error::NonConvergence(format!("zeta series for Li_{s}(e^{mu})")));
        }
    }
}

/// Li_s(z) on the closed unit disk minus z = 1, switching to the zeta series
/// in ln z for |z| > 1/2 where the direct series is slow or cancels badly.
pub fn polylog_continued(s: f64, z: Complex) -> Result<Complex> {
    let r = z.norm();
    if r <= 0.5 {
        return polylog(s, z);
    }
    if r > 1.0 {
        return Err(Error::Domain(format!("|z| = {r} > 1")));
    }
    polylog_exp(s, z.ln())
}

/// k-th derivative of Li_ν at z: z^{-k} Σ_j s(k, j) Li_{ν-j}(z).
pub fn polylog_deriv(nu: f64, z: Complex, k: usize) -> Result<Complex> {
    if k > STIRLING_MAX {
        return Err(Error::OutOfRange(format!("derivative order {k} > {STIRLING_MAX}")));
    }
    if z.norm() == 0.0 {
        return Err(Error::Domain("polylog derivative at z = 0".into()));
    }
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!("|z| = {} ≥ 1", z.norm())));
    }
    let row = stirling_table().row_f64(k)?;
    let mut acc = c64(0.0, 0.0);
    for (j, &sk) in row.iter().enumerate() {
        if sk != 0.0 {
            acc += polylog_continued(nu - j as f64, z)? * sk;
        }
    }
    Ok(acc * z.powi(-(k as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex, b: Complex, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn direct_examples() {
        assert_eq!(polylog(2.0, c64(0.0, 0.0)).unwrap(), c64(0.0, 0.0));
        assert!(close(polylog(0.0, c64(0.5, 0.0)).unwrap(), c64(1.0, 0.0), 1e-15));
        assert!(close(polylog(1.0, c64(0.5, 0.0)).unwrap(), c64(2f64.ln(), 0.0), 1e-15));
        assert!(polylog(1.0, c64(0.9999999, 0.0)).is_err());
    }

    #[test]
    fn zeta_route_matches_direct() {
        for &s in &[-3.5, -1.0, 0.0, 0.5, 1.0, 2.0, 2.5] {
            for &z in &[c64(0.6, 0.0), c64(-0.7, 0.1), c64(0.3, 0.6), c64(-0.55, -0.2)] {
                let a = polylog(s, z).unwrap();
                let b = polylog_exp(s, z.ln()).unwrap();
                assert!(close(a, b, 1e-12), "s={s} z={z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn closed_forms_on_unit_circle() {
        // Li_s(-1) = -(1 - 2^{1-s}) ζ(s)
        let v = polylog_continued(2.0, c64(-1.0, 0.0)).unwrap();
        assert!(close(v, c64(-PI * PI / 12.0, 0.0), 1e-14));
        // Li_0(z) = z / (1 - z)
        let z = c64(-0.999, 0.0);
        assert!(close(polylog_continued(0.0, z).unwrap(), z / (1.0 - z), 1e-13));
        // Li_{-1}(z) = z / (1 - z)^2
        let z = c64(0.2, 0.95);
        let expect = z / ((1.0 - z) * (1.0 - z));
        assert!(close(polylog_continued(-1.0, z).unwrap(), expect, 1e-13));
    }

    #[test]
    fn deep_negative_orders() {
        // Li_{-n}(-1) = -η(-n) = -(1 - 2^{1+n}) ζ(-n)
        for n in [5usize, 11, 21] {
            let nf = n as f64;
            let expect = -(1.0 - 2f64.powf(1.0 + nf)) * super::super::zeta::zeta(-nf).unwrap();
            let v = polylog_continued(-nf, c64(-1.0, 0.0)).unwrap();
            assert!(
                (v.re - expect).abs() < 1e-11 * expect.abs() && v.im.abs() < 1e-11 * expect.abs(),
                "n={n}: {v} vs {expect}"
            );
        }
    }

    #[test]
    fn derivative_first_order() {
        let z = c64(0.3, 0.1);
        let a = polylog_deriv(0.5, z, 1).unwrap();
        let b = polylog(-0.5, z).unwrap() / z;
        assert!(close(a, b, 1e-14));
        assert!(close(polylog_deriv(0.5, z, 0).unwrap(), polylog(0.5, z).unwrap(), 1e-15));
    }

    #[test]
    fn derivative_finite_difference() {
        let z = c64(0.3, 0.0);
        let h = 1e-5;
        let fd = (polylog_deriv(0.5, z + h, 1).unwrap() - polylog_deriv(0.5, z - h, 1).unwrap()) / (2.0 * h);
        let d2 = polylog_deriv(0.5, z, 2).unwrap();
        assert!(close(d2, fd, 1e-6));
    }
}
