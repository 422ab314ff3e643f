//! Classical (non-dyadic) factorial series Σ c_k/(x)_{k+1} and their Borel images.

use super::cexpm1;
use crate::{c64, Complex, Error, Result};

/// Known geometric bound |c_k| ≤ prefactor · k! · ratioᵏ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricBound {
    pub ratio: f64,
    pub prefactor: f64,
}

/// Deterministic source of factorial-series coefficients c_0, c_1, ...
pub trait CoefficientStream {
    fn coeff(&self, k: usize) -> Complex;

    fn geometric_bound(&self) -> Option<GeometricBound> {
        None
    }
}

/// Coefficients from an explicit list; indices past the end are zero.
#[derive(Debug, Clone, Default)]
pub struct VecStream(pub Vec<Complex>);

impl CoefficientStream for VecStream {
    fn coeff(&self, k: usize) -> Complex {
        self.0.get(k).copied().unwrap_or_default()
    }
}

/// Coefficients from a closure.
pub struct FnStream<F: Fn(usize) -> Complex> {
    f: F,
    bound: Option<GeometricBound>,
}

impl<F: Fn(usize) -> Complex> FnStream<F> {
    pub fn new(f: F) -> Self {
        FnStream { f, bound: None }
    }

    pub fn with_bound(f: F, bound: GeometricBound) -> Self {
        FnStream { f, bound: Some(bound) }
    }
}

impl<F: Fn(usize) -> Complex> CoefficientStream for FnStream<F> {
    fn coeff(&self, k: usize) -> Complex {
        (self.f)(k)
    }

    fn geometric_bound(&self) -> Option<GeometricBound> {
        self.bound
    }
}

/// c_k = k!·qᵏ, whose Borel image is 1/(1 - q(1 - e^{-p})).
#[derive(Debug, Clone, Copy)]
pub struct GeometricFactorialStream {
    pub q: f64,
}

impl CoefficientStream for GeometricFactorialStream {
    fn coeff(&self, k: usize) -> Complex {
        let mut v = 1.0;
        for j in 1..=k {
            v *= j as f64 * self.q;
        }
        c64(v, 0.0)
    }

    fn geometric_bound(&self) -> Option<GeometricBound> {
        Some(GeometricBound { ratio: self.q.abs(), prefactor: 1.0 })
    }
}

/// Classical factorial-series coefficients of ∫₀^∞ e^{-xp}/(1+p) dp.
///
/// With w = 1 - e^{-p}, 1/(1+p) = 1/(1 - ln(1-w)) = Σ g_k wᵏ and c_k = k!·g_k.
#[derive(Debug, Clone)]
pub struct EiLeftClassicalStream {
    c: Vec<f64>,
}

impl EiLeftClassicalStream {
    pub fn new(n: usize) -> Self {
        let n = n.max(1);
        // (1 + L(w)) g(w) = 1 with L(w) = Σ_{i≥1} wⁱ/i
        let mut g = vec![0.0; n];
        g[0] = 1.0;
        for k in 1..n {
            let mut acc = 0.0;
            for i in 1..=k {
                acc += g[k - i] / i as f64;
            }
            g[k] = -acc;
        }
        let mut fact = 1.0;
        let c = g
            .iter()
            .enumerate()
            .map(|(k, gk)| {
                if k > 0 {
                    fact *= k as f64;
                }
                gk * fact
            })
            .collect();
        EiLeftClassicalStream { c }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }
}

impl CoefficientStream for EiLeftClassicalStream {
    fn coeff(&self, k: usize) -> Complex {
        c64(self.c.get(k).copied().unwrap_or(0.0), 0.0)
    }
}

/// Partial sum Σ_{k<n} c_k/(x)_{k+1}.
pub fn factorial_series_eval(c: &dyn CoefficientStream, x: Complex, n: usize) -> Result<Complex> {
    if n == 0 {
        return Err(Error::Domain("factorial series needs n ≥ 1".into()));
    }
    // 1/(x)_{k+1} is carried directly: (x)_{k+1} itself overflows long
    // before the terms stop mattering
    let mut inv_poch = c64(1.0, 0.0);
    let mut sum = c64(0.0, 0.0);
    for k in 0..n {
        let f = x + k as f64;
        if f.norm() == 0.0 {
            return Err(Error::Pole { at: x });
        }
        inv_poch /= f;
        let ck = c.coeff(k);
        if inv_poch.norm() == 0.0 && ck.norm().is_finite() {
            break;
        }
        sum += ck * inv_poch;
    }
    Ok(sum)
}

/// Partial sum Σ_{k<n} c_k (1 - e^{-p})ᵏ/k!.
pub fn factorial_to_borel(c: &dyn CoefficientStream, p: Complex, n: usize) -> Complex {
    let w = -cexpm1(-p);
    let mut pw = c64(1.0, 0.0);
    let mut sum = c64(0.0, 0.0);
    for k in 0..n {
        if k > 0 {
            pw *= w / k as f64;
        }
        sum += c.coeff(k) * pw;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_examples() {
        let one = VecStream(vec![c64(1.0, 0.0)]);
        let v = factorial_series_eval(&one, c64(2.0, 0.0), 5).unwrap();
        assert!((v - c64(0.5, 0.0)).norm() < 1e-16);
        // φ(s) = s: c_0 = 1, c_1 = -1
        let phi = VecStream(vec![c64(1.0, 0.0), c64(-1.0, 0.0)]);
        let v = factorial_series_eval(&phi, c64(3.0, 0.0), 2).unwrap();
        assert!((v - c64(0.25, 0.0)).norm() < 1e-16);
        assert!(factorial_series_eval(&one, c64(-1.0, 0.0), 3).is_err());
    }

    #[test]
    fn borel_examples() {
        let s = VecStream(vec![c64(3.0, 1.0), c64(2.0, 0.0)]);
        assert_eq!(factorial_to_borel(&s, c64(0.0, 0.0), 4), c64(3.0, 1.0));
        let e1 = VecStream(vec![c64(0.0, 0.0), c64(1.0, 0.0)]);
        let v = factorial_to_borel(&e1, c64(2f64.ln(), 0.0), 3);
        assert!((v - c64(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ei_left_classical() {
        let s = EiLeftClassicalStream::new(60);
        let v = factorial_to_borel(&s, c64(0.5, 0.0), 40);
        assert!((v - c64(1.0 / 1.5, 0.0)).norm() < 1e-10);
        // ∫₀^∞ e^{-5p}/(1+p) dp
        let v = factorial_series_eval(&s, c64(5.0, 0.0), 30).unwrap();
        assert!((v.re - 0.170_422_176_284_732).abs() < 1e-8);
    }
}
