//! Dyadic factorial expansion of h_ν(x) = ∫₀^∞ e^{-xp} F(p) dp.
//!
//! After k = ⌈|ν| + ½⌉ integrations by parts,
//!
//!   h = Σ_{j<k} F^{(j)}(0)/x^{j+1}
//!     + C_k x^{1−k} [ base + Σ_{j=1}^{K} level_j ] + closure_K,
//!
//! with C_k = (−1)^k k! cos(πν)/π. The base series carries d_m, level j
//! carries d_{jm} in the variable 2^j x, and the closure replaces all levels
//! past K by a series in 2^{-K}/x whose coefficients are the Ω_{K,j}.

use super::table::{coefficient_table, parts_count, CoefficientTable};
use crate::dyadic::DyadicPlan;
use crate::special::EvalResult;
use crate::{Complex, Error, Result};
use std::f64::consts::PI;

/// Airy order.
pub const AIRY_NU: f64 = 1.0 / 3.0;
/// Smallest |x| accepted by the expansions.
pub const H_MIN_ABS: f64 = 1.0;

// Two consecutive terms below the budget end a series.
const QUIET_TERMS: usize = 2;

/// Coefficients a_{L,i} of n^{k−1}·n^{(L)} = Σ_{i<k} a_{L,i} n^{(L+i)}
/// (falling factorials).
fn falling_expansion(k: usize, big_l: usize) -> Vec<f64> {
    let mut v = vec![0.0; k];
    v[0] = 1.0;
    for step in 0..k - 1 {
        let mut next = vec![0.0; k];
        for i in 0..=step {
            next[i + 1] += v[i];
            next[i] += (big_l + i) as f64 * v[i];
        }
        v = next;
    }
    v
}

struct Setup<'a> {
    table: &'a CoefficientTable,
    k: usize,
    kfact: f64,
}

impl Setup<'_> {
    /// Term m of the base series (m = 0, 1, ...), given
    /// r = (m+1)!/(x)_{m+2}.
    fn base_term(&self, m: usize, r: Complex) -> Result<Complex> {
        let a = falling_expansion(self.k, m + 1);
        let mut s = 0.0;
        let mut rise = 1.0;
        for (i, ai) in a.iter().enumerate() {
            if i > 0 {
                rise *= (m + 1 + i) as f64;
            }
            s += ai * rise * self.table.d(m + 2 + i)?;
        }
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        Ok(r * (sign * s / self.kfact))
    }

    fn level_term(&self, level: usize, m: usize, r: Complex, pre: Complex) -> Result<Complex> {
        let a = falling_expansion(self.k, m + 1);
        let mut s = 0.0;
        let mut rise = 1.0;
        for (i, ai) in a.iter().enumerate() {
            if i > 0 {
                rise *= (m + 1 + i) as f64;
            }
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * ai * rise * self.table.dk(level, m + 2 + i)?;
        }
        Ok(pre * r * (s / self.kfact))
    }
}

/// Sums a series given as a term generator, stopping after QUIET_TERMS
/// consecutive terms below `budget`. Returns (sum, terms used, |last term|,
/// Σ|term|).
fn sum_series(mut term: impl FnMut(usize) -> Result<Complex>, budget: f64) -> Result<(Complex, usize, f64, f64)> {
    let mut sum = Complex::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut quiet = 0;
    let mut m = 0;
    loop {
        let t = term(m)?;
        sum += t;
        abs_sum += t.norm();
        m += 1;
        if t.norm() < budget {
            quiet += 1;
            if quiet == QUIET_TERMS {
                return Ok((sum, m, t.norm(), abs_sum));
            }
        } else {
            quiet = 0;
        }
    }
}

struct Assembly {
    value: Complex,
    counts: Vec<usize>,
    closure_terms: usize,
    error: f64,
}

fn assemble(table: &CoefficientTable, x: Complex, levels: usize, tol: f64) -> Result<Assembly> {
    let nu = table.nu;
    let k = parts_count(nu);
    let kfact: f64 = (1..=k).map(|i| i as f64).product();
    let one = Complex::new(1.0, 0.0);

    // explicit terms Σ_{j<k} F^{(j)}(0)/x^{j+1}, F^{(j)}(0) = j!·a_j
    let mut poly = Complex::new(0.0, 0.0);
    let mut a = 1.0;
    let mut xp = one / x;
    for j in 0..k {
        let jf = j as f64;
        poly += xp * a;
        // a_{j+1}·(j+1)! from a_j·j!
        a *= -(jf * (jf + 1.0) + 0.25 - nu * nu) / (jf + 1.0);
        xp /= x;
    }

    let cos = (PI * nu).cos();
    // half-integer order: F is a polynomial and the explicit terms are exact
    if cos.abs() < 1e-15 {
        let plan = vec![0usize];
        return Ok(Assembly { value: poly, counts: plan, closure_terms: 0, error: 4.0 * f64::EPSILON * poly.norm() });
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let ck = sign * kfact * cos / PI;
    let outer = x.powi(1 - k as i32) * ck;

    let scale = poly.norm().max(1.0 / x.norm());
    let budget = 0.2 * tol * scale / ((levels + 2) as f64 * outer.norm().max(1e-300));
    let setup = Setup { table, k, kfact };

    let mut counts = Vec::with_capacity(levels + 1);
    let mut err = 0.0;
    let mut abs_total = 0.0;

    // r_m = (m+1)!/(x)_{m+2}
    let mut r = Complex::new(0.0, 0.0);
    let (base, n, last, abs) = sum_series(
        |m| {
            r = if m == 0 { one / (x * (x + 1.0)) } else { r * ((m + 1) as f64) / (x + (m + 1) as f64) };
            setup.base_term(m, r)
        },
        budget,
    )?;
    counts.push(n);
    err += last;
    abs_total += abs;
    let mut series = base;

    for level in 1..=levels {
        let w = 0.5f64.powi(level as i32);
        let big_x = x / w;
        let pre = big_x.powi(1 - k as i32) * w.exp() * x.powi(k as i32 - 1);
        let mut r = Complex::new(0.0, 0.0);
        let (s, n, last, abs) = sum_series(
            |m| {
                r = if m == 0 {
                    one / (big_x * (big_x + 1.0))
                } else {
                    r * ((m + 1) as f64) / (big_x + (m + 1) as f64)
                };
                setup.level_term(level, m, r, pre)
            },
            budget,
        )?;
        counts.push(n);
        err += last;
        abs_total += abs;
        series += s;
    }

    // closure: C_k x^{-k} (−1)^{k+1}/k! 2^{-K(k+1)} Σ_n 2^{-Kn} x^{-n-1} Ω_{K,k+n}
    let w = 0.5f64.powi(levels as i32);
    let lead = ck * x.powi(-(k as i32)) * (-sign / kfact) * w.powi(k as i32 + 1);
    let mut closure = Complex::new(0.0, 0.0);
    let mut q = one / x;
    let mut prev = f64::INFINITY;
    let mut quiet = 0;
    let mut nc = 0;
    let closure_budget = budget * outer.norm();
    loop {
        let j = k + nc;
        let omega = match table.omega(levels, j) {
            Ok(v) => v,
            Err(_) => {
                return Err(Error::NonConvergence(format!(
                    "closure after {levels} levels needs more than {nc} terms at x = {x}"
                )))
            }
        };
        let t = lead * q * omega;
        let a = t.norm();
        if a > prev && a > closure_budget {
            return Err(Error::NonConvergence(format!("closure after {levels} levels diverges at x = {x}")));
        }
        closure += t;
        nc += 1;
        prev = a;
        q *= w / x;
        if a < closure_budget {
            quiet += 1;
            if quiet == QUIET_TERMS {
                err += a / outer.norm().max(1e-300);
                break;
            }
        } else {
            quiet = 0;
        }
    }

    let value = poly + outer * series + closure;
    // truncation (scaled by the outer factor) plus quadrature noise of the
    // coefficients, and rounding
    let error = outer.norm() * (err + abs_total * 10.0 * table.tolerance) + 8.0 * f64::EPSILON * value.norm();
    Ok(Assembly { value, counts, closure_terms: nc, error })
}

fn check_x(x: Complex) -> Result<()> {
    if !(x.re > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("h expansion needs Re x > 0, got {x}")));
    }
    if x.norm() < H_MIN_ABS {
        return Err(Error::Domain(format!("h expansion needs |x| ≥ {H_MIN_ABS}, got |x| = {}", x.norm())));
    }
    Ok(())
}

/// h_ν(x) from a given table with exactly `levels` dyadic levels.
pub fn h_with_levels(table: &CoefficientTable, x: Complex, levels: usize, tol: f64) -> Result<EvalResult> {
    check_x(x)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if levels > table.k_max {
        return Err(Error::OutOfRange(format!("{levels} levels requested, table holds {}", table.k_max)));
    }
    let a = assemble(table, x, levels, tol)?;
    let plan = DyadicPlan { levels: a.counts.len() - 1, n_terms: a.counts, predicted_error: a.error };
    Ok(EvalResult::new(a.value, a.error, plan, a.closure_terms))
}

/// h_ν(x) with the number of levels chosen to minimize the total term count.
pub fn h_from_table(table: &CoefficientTable, x: Complex, tol: f64) -> Result<EvalResult> {
    check_x(x)?;
    let mut best: Option<EvalResult> = None;
    let mut last_err = None;
    for levels in 0..=table.k_max {
        match h_with_levels(table, x, levels, tol) {
            Ok(r) => {
                if best.as_ref().map_or(true, |b| r.terms_with_closure() < b.terms_with_closure()) {
                    best = Some(r);
                }
            }
            Err(e @ Error::Domain(_)) => return Err(e),
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or_else(|| Error::NonConvergence(format!("no plan reaches {tol:e} at x = {x}"))))
}

/// h for the Bessel order ν, using the shared per-ν table.
pub fn bessel_h(nu: f64, x: Complex, tol: f64) -> Result<EvalResult> {
    if !nu.is_finite() || nu.abs() > super::kernel::NU_MAX {
        return Err(Error::Domain(format!("|nu| must be at most {}, got {nu}", super::kernel::NU_MAX)));
    }
    check_x(x)?;
    // F, d and Ω depend on ν only through ν²
    let table = coefficient_table(nu.abs())?;
    h_from_table(&table, x, tol)
}

/// h for the Airy order ν = 1/3.
pub fn airy_h(x: Complex, tol: f64) -> Result<EvalResult> {
    bessel_h(AIRY_NU, x, tol)
}

/// Default relative tolerance of the real-argument wrappers.
pub const DEFAULT_TOL: f64 = 1e-13;

/// Ai(x) = (2/(3√π)) x^{5/4} e^{-ζ} h(2ζ), ζ = (2/3)x^{3/2}; the result's value
/// and error are those of Ai.
pub fn airy_ai(x: f64, tol: f64) -> Result<EvalResult> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Airy evaluation needs x > 0, got {x}")));
    }
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let mut r = airy_h(Complex::new(2.0 * zeta, 0.0), tol)?;
    let c = 2.0 / (3.0 * PI.sqrt()) * x.powf(1.25) * (-zeta).exp();
    r.value *= c;
    r.error_estimate *= c;
    r.plan.predicted_error *= c;
    Ok(r)
}

pub fn airy_from_h(x: f64) -> Result<f64> {
    Ok(airy_ai(x, DEFAULT_TOL)?.value.re)
}

/// K_ν(z) = √(2π) z^{1/2} e^{-z} h_ν(2z); the result's value and error are
/// those of K_ν.
pub fn bessel_k(nu: f64, z: f64, tol: f64) -> Result<EvalResult> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("K_ν evaluation needs z > 0, got {z}")));
    }
    let mut r = bessel_h(nu, Complex::new(2.0 * z, 0.0), tol)?;
    let c = (2.0 * PI * z).sqrt() * (-z).exp();
    r.value *= c;
    r.error_estimate *= c;
    r.plan.predicted_error *= c;
    Ok(r)
}

pub fn bessel_k_from_h(nu: f64, z: f64) -> Result<f64> {
    Ok(bessel_k(nu, z, DEFAULT_TOL)?.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::oracle::{airy_reference, bessel_k_reference, borel_h_reference};

    #[test]
    fn falling_factorial_identity() {
        // n^{k-1} n^(L) = Σ a_i n^(L+i) at a few integers
        let falling = |n: f64, l: usize| (0..l).map(|i| n - i as f64).product::<f64>();
        for k in 1..5usize {
            for l in [1usize, 3, 6] {
                let a = falling_expansion(k, l);
                for n in [7.0f64, 11.0, 13.0] {
                    let lhs = n.powi(k as i32 - 1) * falling(n, l);
                    let rhs: f64 = a.iter().enumerate().map(|(i, ai)| ai * falling(n, l + i)).sum();
                    assert!((lhs - rhs).abs() < 1e-9 * lhs.abs(), "k={k} l={l} n={n}");
                }
            }
        }
    }

    #[test]
    fn airy_h_against_oracle() {
        for u in [1.5, 3.77, 10.0, 40.0, 119.0] {
            let r = airy_h(c64(u, 0.0), 1e-12).unwrap();
            let h = borel_h_reference(AIRY_NU, u).unwrap();
            let rel = (r.value.re / h - 1.0).abs();
            assert!(rel < 1e-11, "u={u}: {} vs {h} ({rel:e}), plan {:?}", r.value, r.plan);
            assert!(r.value.im.abs() < 1e-14 * h);
        }
    }

    #[test]
    fn bessel_orders_against_oracle() {
        for nu in [0.0, 0.2, 1.0, 1.7, 2.3, 4.6] {
            for u in [2.0, 10.0, 30.0] {
                let r = bessel_h(nu, c64(u, 0.0), 1e-12).unwrap();
                let h = borel_h_reference(nu, u).unwrap();
                let rel = (r.value.re / h - 1.0).abs();
                assert!(rel < 1e-10, "nu={nu} u={u}: {} vs {h} ({rel:e}), plan {:?}", r.value, r.plan);
            }
        }
    }

    #[test]
    fn half_order_closed_form() {
        let r = bessel_k(0.5, 3.0, 1e-13).unwrap();
        let exact = (PI / 6.0).sqrt() * (-3.0f64).exp();
        assert!((r.value.re / exact - 1.0).abs() < 1e-15);
        let r = bessel_k(1.5, 3.0, 1e-13).unwrap();
        let exact = (PI / 6.0).sqrt() * (-3.0f64).exp() * (1.0 + 1.0 / 3.0);
        assert!((r.value.re / exact - 1.0).abs() < 1e-14);
    }

    #[test]
    fn airy_examples() {
        let a5 = airy_from_h(5.0).unwrap();
        assert!((a5 / 1.083_444_281_4e-4 - 1.0).abs() < 1e-9);
        let a10 = airy_from_h(10.0).unwrap();
        assert!((a10 / 1.104_753_255_3e-10 - 1.0).abs() < 1e-9);
        for x in [4.0, 7.5, 20.0] {
            let rel = (airy_from_h(x).unwrap() / airy_reference(x).unwrap() - 1.0).abs();
            assert!(rel < 1e-10, "x={x}: {rel:e}");
        }
    }

    #[test]
    fn bessel_k1_at_five() {
        let v = bessel_k_from_h(1.0, 5.0).unwrap();
        let r = bessel_k_reference(1.0, 5.0).unwrap();
        assert!((v / r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn complex_argument_matches_integral() {
        // h(x) = ∫ e^{-xp} F(p) dp by direct quadrature along p ≥ 0
        let kern = super::super::BorelKernel::with_p_max(AIRY_NU, 2000.0).unwrap();
        let x = c64(6.0, 4.0);
        let re = |p: f64| (-(x * p)).exp().re * kern.eval(p).unwrap();
        let im = |p: f64| (-(x * p)).exp().im * kern.eval(p).unwrap();
        let (a, _) = super::super::quad::integrate(&re, 0.0, 12.0, 1e-14, 0.0).unwrap();
        let (b, _) = super::super::quad::integrate(&im, 0.0, 12.0, 1e-14, 0.0).unwrap();
        let r = airy_h(x, 1e-12).unwrap();
        assert!((r.value - c64(a, b)).norm() < 1e-11 * r.value.norm(), "{} vs {a}+{b}i", r.value);
    }

    #[test]
    fn error_falls_as_plan_deepens() {
        for u in [4.0, 10.0, 20.0] {
            let h = borel_h_reference(AIRY_NU, u).unwrap();
            let mut prev = f64::INFINITY;
            let mut prev_terms = 0;
            for e in 3..=14 {
                let r = airy_h(c64(u, 0.0), 10f64.powi(-e)).unwrap();
                let err = (r.value.re - h).abs() / h;
                assert!(err <= prev + 1e-14, "u={u} tol=1e-{e}: {err:e} after {prev:e}");
                assert!(r.terms_with_closure() >= prev_terms);
                assert!(err <= 10f64.powi(-e), "u={u} tol=1e-{e}: {err:e}");
                prev = err;
                prev_terms = r.terms_with_closure();
            }
        }
    }

    #[test]
    fn normalization_is_flat() {
        let ratios: Vec<f64> =
            (0..=16).map(|i| 4.0 + i as f64).map(|x| airy_from_h(x).unwrap() / airy_reference(x).unwrap()).collect();
        for r in &ratios {
            assert!((r - ratios[0]).abs() < 1e-9, "{ratios:?}");
        }
    }

    #[test]
    fn domain() {
        assert!(airy_h(c64(-2.0, 0.0), 1e-10).is_err());
        assert!(airy_h(c64(0.5, 0.0), 1e-10).is_err());
        assert!(bessel_h(6.0, c64(3.0, 0.0), 1e-10).is_err());
        assert!(airy_from_h(0.0).is_err());
    }
}
