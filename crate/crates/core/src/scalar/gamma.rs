use crate::{c64, Complex, Error, Result};
use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2n} / (2n (2n - 1)) for n = 1..=12
const STIRLING: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    77683.0 / 5796.0,
    -236364091.0 / 1506960.0,
];

fn is_nonpositive_integer(z: Complex) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn stirling_series(z: Complex) -> Complex {
    let zinv = z.inv();
    let z2 = zinv * zinv;
    let mut acc = Complex::new(0.0, 0.0);
    let mut p = zinv;
    for c in STIRLING {
        let t = p * c;
        acc += t;
        if t.norm() < 1e-18 * acc.norm() {
            break;
        }
        p *= z2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + acc
}

/// ln sin(πz), computed without overflow for large |Im z|.
fn ln_sin_pi(z: Complex) -> Complex {
    if z.im.abs() < 1.0 {
        return (z * PI).sin().ln();
    }
    // sin(πz) = e^{-iπz}(e^{2iπz} - 1)/(2i) for Im z > 0; conjugate otherwise.
    let flip = z.im < 0.0;
    let w = if flip { z.conj() } else { z };
    let i = c64(0.0, 1.0);
    let e2 = (i * 2.0 * PI * w).exp();
    let r = -i * PI * w + (e2 - 1.0).ln() - c64(0.0, 2.0).ln();
    if flip {
        r.conj()
    } else {
        r
    }
}

/// Complex log-gamma.
///
/// Uses the Stirling series after shifting |z| past 15, and the reflection
/// formula far in the left half-plane. The imaginary part is continuous along
/// paths that avoid the negative real axis; `exp` of the result is Γ(z).
pub fn ln_gamma(z: Complex) -> Result<Complex> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole { at: z });
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z.re < -10.0 {
        let refl = ln_sin_pi(z);
        return Ok(c64(PI.ln(), 0.0) - refl - ln_gamma(1.0 - z)?);
    }
    let mut w = z;
    let mut shift = Complex::new(0.0, 0.0);
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling_series(w) - shift)
}

/// Real log |Γ(x)| together with the sign of Γ(x).
pub fn ln_gamma_real(x: f64) -> Result<(f64, f64)> {
    let z = c64(x, 0.0);
    let lg = ln_gamma(z)?;
    let sign = if x > 0.0 {
        1.0
    } else {
        // Γ(x) for negative non-integer x has sign (-1)^{ceil(-x)}
        let n = (-x).ceil() as i64;
        if n % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    };
    Ok((lg.re, sign))
}

/// Real Γ(x) for moderate arguments.
pub fn gamma_real(x: f64) -> Result<f64> {
    let (l, s) = ln_gamma_real(x)?;
    Ok(s * l.exp())
}

/// Largest k for which (x)_k is formed as a direct product.
const PRODUCT_MAX_K: usize = 64;

/// Rising factorial (x)_k = x (x+1) ... (x+k-1).
///
/// Exact zero when x is a nonpositive integer with |x| < k.
pub fn pochhammer(x: Complex, k: usize) -> Complex {
    if k == 0 {
        return c64(1.0, 0.0);
    }
    if is_nonpositive_integer(x) {
        if (-x.re) < k as f64 {
            return c64(0.0, 0.0);
        }
        // all factors negative integers: (x)_k = (-1)^k (1 - x - k)_k
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        return pochhammer(c64(1.0 - x.re - k as f64, 0.0), k) * sign;
    }
    // the running product keeps (x)_{k+1} = (x)_k·(x+k) bit-exact
    if k <= PRODUCT_MAX_K {
        let p = pochhammer_product(x, k);
        if p.re.is_finite() && p.im.is_finite() {
            return p;
        }
    }
    match (ln_gamma(x + k as f64), ln_gamma(x)) {
        (Ok(a), Ok(b)) => (a - b).exp(),
        _ => pochhammer_product(x, k),
    }
}

pub(crate) fn pochhammer_product(x: Complex, k: usize) -> Complex {
    let mut p = c64(1.0, 0.0);
    for j in 0..k {
        p *= x + j as f64;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex, b: Complex, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm().max(1e-300)
    }

    #[test]
    fn ln_gamma_values() {
        assert!(ln_gamma(c64(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((ln_gamma(c64(0.5, 0.0)).unwrap().re - 0.572_364_942_924_700_1).abs() < 1e-14);
        assert!(matches!(ln_gamma(c64(-2.0, 0.0)), Err(Error::Pole { .. })));
        // Γ(11) = 10!
        assert!((ln_gamma(c64(11.0, 0.0)).unwrap().re - 3628800f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn gamma_reflection_region() {
        // Γ(-10.5) = π / (sin(-10.5π) Γ(11.5))
        let g = ln_gamma(c64(-10.5, 0.0)).unwrap().exp();
        let g115 = ln_gamma(c64(11.5, 0.0)).unwrap().exp();
        let expect = PI / ((-10.5 * PI).sin() * g115.re);
        assert!(close(g, c64(expect, 0.0), 1e-12));
        // Γ(-12.3 + 4i) via recurrence from Γ(-2.3 + 4i)
        let z = c64(-12.3, 4.0);
        let a = ln_gamma(z).unwrap().exp();
        let b = ln_gamma(z + 10.0).unwrap().exp() / pochhammer_product(z, 10);
        assert!(close(a, b, 1e-12));
    }

    #[test]
    fn gamma_recurrence_complex() {
        for &z in &[c64(0.7, 3.0), c64(2.5, -8.0), c64(30.0, 100.0), c64(1e5, 3e5)] {
            let lhs = ln_gamma(z + 1.0).unwrap();
            let rhs = ln_gamma(z).unwrap() + z.ln();
            let d = lhs - rhs;
            // equal up to a multiple of 2πi
            let k = (d.im / (2.0 * PI)).round();
            assert!((d - c64(0.0, 2.0 * PI * k)).norm() < 1e-12 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(c64(7.0, 1.0), 0), c64(1.0, 0.0));
        assert_eq!(pochhammer(c64(2.0, 0.0), 3), c64(24.0, 0.0));
        assert_eq!(pochhammer(c64(0.5, 0.0), 2), c64(0.75, 0.0));
        assert_eq!(pochhammer(c64(-3.0, 0.0), 5), c64(0.0, 0.0));
        assert_eq!(pochhammer(c64(-3.0, 0.0), 3), c64(-6.0, 0.0));
    }

    #[test]
    fn pochhammer_paths_agree() {
        for &x in &[c64(0.3, 0.0), c64(2.5, 1.5), c64(-4.5, 0.2), c64(40.0, -7.0)] {
            for k in 17..40 {
                let a = pochhammer(x, k);
                let b = pochhammer_product(x, k);
                assert!(close(a, b, 1e-12), "x={x} k={k}: {a} vs {b}");
            }
        }
    }
}
