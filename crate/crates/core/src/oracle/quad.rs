//! Adaptive Clenshaw-Curtis quadrature (nested 17/33-point rule) on straight
//! segments and half-lines of the complex plane.

use crate::{Complex, Error, Result};
use once_cell::sync::Lazy;
use std::f64::consts::PI;

const MAX_DEPTH: u32 = 40;
// Panels whose error estimate is within this many ulps of their L1 mass are
// accepted: the requested absolute tolerance is then below roundoff.
const ROUNDOFF_FACTOR: f64 = 50.0;

struct Rule {
    nodes: Vec<f64>,
    coarse: Vec<f64>,
    fine: Vec<f64>,
}

fn cc_weights(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|j| {
            let c = if j == 0 || j == n { 1.0 } else { 2.0 };
            let mut s = 0.0;
            for k in 1..=n / 2 {
                let b = if k == n / 2 { 1.0 } else { 2.0 };
                s += b / (4.0 * (k * k) as f64 - 1.0) * (2.0 * (k * j) as f64 * PI / n as f64).cos();
            }
            c / n as f64 * (1.0 - s)
        })
        .collect()
}

static RULE: Lazy<Rule> = Lazy::new(|| {
    let n = 32;
    let nodes = (0..=n).map(|j| (j as f64 * PI / n as f64).cos()).collect();
    let fine = cc_weights(n);
    // the 17-point rule uses every other node
    let half = cc_weights(n / 2);
    let mut coarse = vec![0.0; n + 1];
    for (j, w) in half.into_iter().enumerate() {
        coarse[2 * j] = w;
    }
    Rule { nodes, coarse, fine }
});

/// Kahan-Babuska compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex,
    comp: Complex,
}

impl CompensatedSum {
    pub fn add(&mut self, v: Complex) {
        let t = self.sum + v;
        let fix = |s: f64, v: f64, t: f64| if s.abs() >= v.abs() { (s - t) + v } else { (v - t) + s };
        self.comp += Complex::new(fix(self.sum.re, v.re, t.re), fix(self.sum.im, v.im, t.im));
        self.sum = t;
    }

    pub fn value(&self) -> Complex {
        self.sum + self.comp
    }
}

// (integral, error estimate, roundoff floor from the L1 mass of the panel)
fn panel(f: &dyn Fn(Complex) -> Complex, a: Complex, b: Complex) -> (Complex, f64, f64) {
    let rule = &*RULE;
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let mut fine = Complex::new(0.0, 0.0);
    let mut coarse = Complex::new(0.0, 0.0);
    let mut mass = 0.0;
    for (i, &t) in rule.nodes.iter().enumerate() {
        let v = f(mid + half * t);
        fine += v * rule.fine[i];
        coarse += v * rule.coarse[i];
        mass += v.norm() * rule.fine[i];
    }
    let h = half.norm();
    (fine * half, ((fine - coarse) * half).norm(), ROUNDOFF_FACTOR * f64::EPSILON * mass * h)
}

/// ∫ f along the straight segment from a to b to absolute accuracy `abs_tol`.
pub fn quad_segment(f: &dyn Fn(Complex) -> Complex, a: Complex, b: Complex, abs_tol: f64) -> Result<Complex> {
    let total = (b - a).norm();
    if total == 0.0 {
        return Ok(Complex::new(0.0, 0.0));
    }
    let mut acc = CompensatedSum::default();
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err, floor) = panel(f, lo, hi);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonConvergence(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        let share = abs_tol * (hi - lo).norm() / total;
        if err <= share.max(floor) {
            acc.add(v);
            continue;
        }
        if depth >= MAX_DEPTH {
            return Err(Error::NonConvergence(format!("quadrature depth {MAX_DEPTH} reached near {lo}")));
        }
        let mid = (lo + hi) * 0.5;
        stack.push((mid, hi, depth + 1));
        stack.push((lo, mid, depth + 1));
    }
    Ok(acc.value())
}

/// ∫ f along the half-line start + t·dir, t ≥ 0 (|dir| = 1), on panels of
/// doubling length starting from `scale`, stopping once a panel contributes
/// less than abs_tol/100.
pub fn quad_ray(
    f: &dyn Fn(Complex) -> Complex,
    start: Complex,
    dir: Complex,
    scale: f64,
    abs_tol: f64,
) -> Result<Complex> {
    let dir = dir / dir.norm();
    let mut acc = CompensatedSum::default();
    let mut lo = 0.0;
    let mut len = scale;
    for _ in 0..200 {
        let hi = lo + len;
        let v = quad_segment(f, start + dir * lo, start + dir * hi, abs_tol * 1e-2)?;
        acc.add(v);
        let edge = f(start + dir * hi).norm() * len;
        if v.norm() < abs_tol * 1e-2 && edge < abs_tol * 1e-2 {
            return Ok(acc.value());
        }
        lo = hi;
        len *= 2.0;
    }
    Err(Error::NonConvergence("half-line integral did not settle".into()))
}

/// Integrates a real function over [a, b].
pub fn quad_real(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    let g = |z: Complex| Complex::new(f(z.re), 0.0);
    Ok(quad_segment(&g, Complex::new(a, 0.0), Complex::new(b, 0.0), abs_tol)?.re)
}

/// Integrates a real function over [a, ∞).
pub fn quad_real_inf(f: &dyn Fn(f64) -> f64, a: f64, scale: f64, abs_tol: f64) -> Result<f64> {
    let g = |z: Complex| Complex::new(f(z.re), 0.0);
    Ok(quad_ray(&g, Complex::new(a, 0.0), Complex::new(1.0, 0.0), scale, abs_tol)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn weights_sum_to_two() {
        let r = &*RULE;
        assert!((r.fine.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!((r.coarse.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn examples() {
        let v = quad_real(&|t| t, 0.0, 1.0, 1e-14).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        let v = quad_real_inf(&|p| (-p).exp(), 0.0, 1.0, 1e-13).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let v = quad_real_inf(&|p| (-p).exp() / (1.0 + p), 0.0, 1.0, 1e-13).unwrap();
        assert!((v - 0.596_347_362_323_194_1).abs() < 1e-12);
    }

    #[test]
    fn complex_segment() {
        // ∫_0^{i} e^z dz = e^i - 1
        let v = quad_segment(&|z: Complex| z.exp(), c64(0.0, 0.0), c64(0.0, 1.0), 1e-14).unwrap();
        assert!((v - (c64(0.0, 1.0).exp() - 1.0)).norm() < 1e-14);
    }
}
