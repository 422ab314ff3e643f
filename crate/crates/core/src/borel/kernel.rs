//! The Legendre kernel F(p) = P_{ν−½}(1+2p), solution of
//! p(p+1)F'' + (2p+1)F' + (¼ − ν²)F = 0 analytic at p = 0.

use crate::{Error, Result};

/// Default upper end of the continuation grid.
pub const P_MAX_DEFAULT: f64 = 200.0;
/// Largest grid the coefficient quadratures may extend to on their own.
pub const P_MAX_EXTENDED: f64 = 2000.0;
/// Largest |ν| accepted.
pub const NU_MAX: f64 = 5.0;

/// Taylor branch is used up to here; beyond it, the continuation grid.
pub const TAYLOR_EDGE: f64 = 0.5;

const FIRST_NODE: f64 = 0.4;
const NODE_RATIO: f64 = 1.5;
// Local expansions are evaluated at |h| ≤ p_i/2 = H, i.e. at ratio 1, and
// converge there like 2^{-n} because the nearest singularity is at distance p_i.
const LOCAL_TERMS: usize = 64;
const TAYLOR_TERMS: usize = 90;

#[derive(Debug, Clone)]
struct Node {
    p: f64,
    /// Local Taylor coefficients scaled by H^n, H = p/2.
    scaled: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct BorelKernel {
    nu: f64,
    p_max: f64,
    taylor_coeffs: Vec<f64>,
    nodes: Vec<Node>,
}

impl BorelKernel {
    pub fn new(nu: f64) -> Result<Self> {
        Self::with_p_max(nu, P_MAX_DEFAULT)
    }

    pub fn with_p_max(nu: f64, p_max: f64) -> Result<Self> {
        if !nu.is_finite() || nu.abs() > NU_MAX {
            return Err(Error::Domain(format!("|nu| must be at most {NU_MAX}, got {nu}")));
        }
        if !(p_max >= TAYLOR_EDGE) || !p_max.is_finite() {
            return Err(Error::Domain(format!("p_max must be finite and at least {TAYLOR_EDGE}")));
        }
        let c = 0.25 - nu * nu;
        let mut taylor_coeffs = Vec::with_capacity(TAYLOR_TERMS);
        let mut a = 1.0;
        for n in 0..TAYLOR_TERMS {
            taylor_coeffs.push(a);
            let nf = n as f64;
            a *= -(nf * (nf + 1.0) + c) / ((nf + 1.0) * (nf + 1.0));
        }
        let mut kern = BorelKernel { nu, p_max, taylor_coeffs, nodes: Vec::new() };

        let (mut f, mut df) = kern.taylor_with_derivative(FIRST_NODE);
        let mut p = FIRST_NODE;
        loop {
            let node = Node::new(p, f, df, c);
            let next = p * NODE_RATIO;
            let last = p >= p_max;
            if !last {
                let (nf, ndf) = node.eval(next);
                f = nf;
                df = ndf;
            }
            kern.nodes.push(node);
            if last {
                break;
            }
            p = next;
        }
        Ok(kern)
    }

    /// The same order on a grid reaching at least `p_max`.
    pub fn extended(&self, p_max: f64) -> Result<Self> {
        if p_max <= self.p_max {
            return Ok(self.clone());
        }
        Self::with_p_max(self.nu, p_max)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn taylor_coeffs(&self) -> &[f64] {
        &self.taylor_coeffs
    }

    /// Grid points of the continuation.
    pub fn node_points(&self) -> impl Iterator<Item = f64> + '_ {
        self.nodes.iter().map(|n| n.p)
    }

    fn check(&self, p: f64) -> Result<()> {
        if !(p >= 0.0) {
            return Err(Error::Domain(format!("kernel argument must be nonnegative, got {p}")));
        }
        if p > self.p_max {
            return Err(Error::OutOfRange(format!("p = {p} beyond P_max = {}", self.p_max)));
        }
        Ok(())
    }

    fn taylor_with_derivative(&self, p: f64) -> (f64, f64) {
        let (f, df, _) = horner(&self.taylor_coeffs, p);
        (f, df)
    }

    /// F(p) from the series at the origin (|p| < 1 only).
    pub fn eval_taylor(&self, p: f64) -> Result<f64> {
        if p.abs() > 0.75 {
            return Err(Error::OutOfRange(format!("Taylor branch used at p = {p}")));
        }
        Ok(self.taylor_with_derivative(p).0)
    }

    /// F(p) from the continuation grid (p ≥ first grid point).
    pub fn eval_ode(&self, p: f64) -> Result<f64> {
        Ok(self.ode_with_derivative(p)?.0)
    }

    fn ode_with_derivative(&self, p: f64) -> Result<(f64, f64)> {
        let (f, df, _) = self.ode_derivs(p)?;
        Ok((f, df))
    }

    fn ode_derivs(&self, p: f64) -> Result<(f64, f64, f64)> {
        self.check(p)?;
        if p < FIRST_NODE {
            return Err(Error::OutOfRange(format!("p = {p} below the first grid point")));
        }
        let i = ((p / FIRST_NODE).ln() / NODE_RATIO.ln()).floor() as usize;
        let mut i = i.min(self.nodes.len() - 1);
        // guard the floor against rounding at node boundaries
        while i > 0 && self.nodes[i].p > p {
            i -= 1;
        }
        while i + 1 < self.nodes.len() && self.nodes[i + 1].p <= p {
            i += 1;
        }
        Ok(self.nodes[i].derivs(p))
    }

    /// (F, F') at p.
    pub fn eval_with_derivative(&self, p: f64) -> Result<(f64, f64)> {
        self.check(p)?;
        if p <= TAYLOR_EDGE {
            Ok(self.taylor_with_derivative(p))
        } else {
            self.ode_with_derivative(p)
        }
    }

    /// F(p).
    pub fn eval(&self, p: f64) -> Result<f64> {
        Ok(self.eval_with_derivative(p)?.0)
    }

    /// |p(p+1)F'' + (2p+1)F' + (¼ − ν²)F| relative to the largest of the
    /// three terms.
    pub fn ode_residual(&self, p: f64) -> Result<f64> {
        self.check(p)?;
        let (f, df, d2) = if p <= TAYLOR_EDGE { horner(&self.taylor_coeffs, p) } else { self.ode_derivs(p)? };
        let c = 0.25 - self.nu * self.nu;
        let terms = [p * (p + 1.0) * d2, (2.0 * p + 1.0) * df, c * f];
        let scale = terms.iter().fold(f.abs(), |m, t| m.max(t.abs())).max(1e-300);
        Ok(terms.iter().sum::<f64>().abs() / scale)
    }

    /// The k-th derivative at 0: k!·a_k.
    pub fn derivative_at_zero(&self, k: usize) -> f64 {
        let mut f = self.taylor_coeffs[k];
        for j in 2..=k {
            f *= j as f64;
        }
        f
    }
}

impl Node {
    fn new(p: f64, f: f64, df: f64, c: f64) -> Self {
        let h = 0.5 * p;
        let mut scaled = Vec::with_capacity(LOCAL_TERMS);
        scaled.push(f);
        scaled.push(df * h);
        let q = p * (p + 1.0);
        let b = 2.0 * p + 1.0;
        for n in 0..LOCAL_TERMS - 2 {
            let nf = n as f64;
            let e = -(b * (nf + 1.0) * (nf + 1.0) * h * scaled[n + 1] + (nf * (nf + 1.0) + c) * h * h * scaled[n])
                / (q * (nf + 2.0) * (nf + 1.0));
            scaled.push(e);
        }
        Node { p, scaled }
    }

    fn eval(&self, p: f64) -> (f64, f64) {
        let (f, df, _) = self.derivs(p);
        (f, df)
    }

    fn derivs(&self, p: f64) -> (f64, f64, f64) {
        let h = 0.5 * self.p;
        let (f, df, d2) = horner(&self.scaled, (p - self.p) / h);
        (f, df / h, d2 / (h * h))
    }
}

/// Value, first and second derivative of Σ c_n tⁿ.
fn horner(c: &[f64], t: f64) -> (f64, f64, f64) {
    let mut f = 0.0;
    let mut df = 0.0;
    let mut d2 = 0.0;
    for (n, &a) in c.iter().enumerate().rev() {
        let nf = n as f64;
        f = f * t + a;
        if n > 0 {
            df = df * t + nf * a;
        }
        if n > 1 {
            d2 = d2 * t + nf * (nf - 1.0) * a;
        }
    }
    (f, df, d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::legendre_kernel_reference;

    #[test]
    fn origin() {
        let k = BorelKernel::new(1.0 / 3.0).unwrap();
        assert_eq!(k.eval(0.0).unwrap(), 1.0);
        let (_, d) = k.eval_with_derivative(0.0).unwrap();
        assert!((d - (1.0 / 9.0 - 0.25)).abs() < 1e-15);
        let p = 1e-6;
        assert!((k.eval(p).unwrap() - (1.0 - 0.138_888_888_888_888_9 * p)).abs() < 1e-12);
    }

    #[test]
    fn half_order_is_constant() {
        let k = BorelKernel::new(0.5).unwrap();
        for p in [0.0, 0.3, 7.0, 199.0] {
            assert_eq!(k.eval(p).unwrap(), 1.0);
        }
    }

    #[test]
    fn matches_euler_integral() {
        let k = BorelKernel::new(1.0 / 3.0).unwrap();
        for p in [0.2, 0.5, 1.0, 10.0, 150.0] {
            let r = legendre_kernel_reference(1.0 / 3.0, p).unwrap();
            let v = k.eval(p).unwrap();
            assert!((v / r - 1.0).abs() < 1e-10, "p={p}: {v} vs {r}");
        }
    }

    #[test]
    fn handoff_continuity() {
        for nu in [0.0, 1.0 / 3.0, 1.0, 2.7, 5.0] {
            let k = BorelKernel::new(nu).unwrap();
            let a = k.eval_taylor(TAYLOR_EDGE).unwrap();
            let b = k.eval_ode(TAYLOR_EDGE).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "nu={nu}: {a} vs {b}");
        }
    }

    #[test]
    fn range() {
        let k = BorelKernel::new(1.0).unwrap();
        assert!(matches!(k.eval(201.0), Err(Error::OutOfRange(_))));
        assert!(k.eval(-1.0).is_err());
        assert!(BorelKernel::new(5.5).is_err());
        assert!(k.extended(2000.0).unwrap().eval(1999.0).is_ok());
    }

    #[test]
    fn large_p_power_law() {
        // log-log slope of F between 10³ and 2·10³ approaches ν − ½
        // (ν = 0 is excluded: both exponents coincide and a log factor appears)
        for nu in [1.0 / 3.0, 1.0, 2.5, 3.2, 4.9] {
            let k = BorelKernel::with_p_max(nu, 1e4).unwrap();
            let (a, b) = (k.eval(1e3).unwrap(), k.eval(2e3).unwrap());
            let slope = (b / a).ln() / 2f64.ln();
            let want = nu - 0.5;
            assert!((slope - want).abs() <= 0.02 * want.abs().max(0.5), "nu={nu}: {slope} vs {want}");
        }
    }

    #[test]
    fn residual_small() {
        for nu in [0.0, 1.0 / 3.0, 1.7, 4.2] {
            let k = BorelKernel::new(nu).unwrap();
            for i in 0..50 {
                let p = 0.01 + i as f64 * 2.0;
                let r = k.ode_residual(p).unwrap();
                assert!(r < 1e-10, "nu={nu} p={p}: {r}");
            }
        }
    }
}
