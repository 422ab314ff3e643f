//! Term generators for the dyadic factorial series of each family.
//!
//! Every series has the shape Σ_{m≥1} a·Γ(m)·qᵐ⁻¹/(Y)_m, produced by the
//! recurrence t₁ = a/Y, t_{m+1} = t_m·m·q/(Y+m).

use crate::dyadic::{DyadicPlan, Family, DENOMINATOR_FLOOR};
use crate::{Complex, Error, Result};
use std::f64::consts::{E, PI};

#[derive(Debug, Clone, Copy)]
struct Shape {
    a: Complex,
    y: Complex,
    q: Complex,
}

fn shape(family: Family, x: Complex, k: usize) -> Shape {
    let scale = 2f64.powi(k as i32);
    let one = Complex::new(1.0, 0.0);
    match family {
        Family::EiStokes => {
            let y = Complex::new(0.0, -1.0 / PI) * x;
            if k == 0 {
                Shape { a: Complex::new(-0.5, 0.0), y, q: Complex::new(0.5, 0.0) }
            } else {
                let ek = Complex::from_polar(1.0, -PI / scale);
                Shape { a: ek / (one + ek), y: y * scale, q: (one + ek).inv() }
            }
        }
        Family::EiLeft => {
            if k == 0 {
                Shape { a: Complex::new(E / (E - 1.0), 0.0), y: x, q: Complex::new(-1.0 / (E - 1.0), 0.0) }
            } else {
                let c = (1.0 / scale).exp();
                Shape { a: Complex::new(-c / (c + 1.0), 0.0), y: x * scale, q: Complex::new(1.0 / (c + 1.0), 0.0) }
            }
        }
        Family::Psi => Shape { a: Complex::new(0.5, 0.0), y: x * (2.0 * scale) + 1.0, q: Complex::new(0.5, 0.0) },
    }
}

/// Terms m = 1, 2, ... of series k (0 = base; for Ψ, series k is dyadic level k+1).
#[derive(Debug, Clone)]
pub struct SeriesTerms {
    s: Shape,
    m: usize,
    current: Option<Complex>,
}

impl SeriesTerms {
    pub fn new(family: Family, x: Complex, k: usize) -> Self {
        let s = shape(family, x, k);
        SeriesTerms { s, m: 1, current: None }
    }
}

impl Iterator for SeriesTerms {
    type Item = Result<Complex>;

    fn next(&mut self) -> Option<Result<Complex>> {
        let den = self.s.y + (self.m - 1) as f64;
        if den.norm() < DENOMINATOR_FLOOR {
            return Some(Err(Error::Pole { at: self.s.y }));
        }
        let t = match self.current {
            None => self.s.a / den,
            Some(prev) => prev * (self.m - 1) as f64 * self.s.q / den,
        };
        self.current = Some(t);
        self.m += 1;
        Some(Ok(t))
    }
}

/// Partial sum of the first n terms of series k.
pub fn series_partial(family: Family, x: Complex, k: usize, n: usize) -> Result<Complex> {
    let mut sum = Complex::new(0.0, 0.0);
    for t in SeriesTerms::new(family, x, k).take(n) {
        sum += t?;
    }
    Ok(sum)
}

/// Sum of series k to convergence (terms below 1e-18 relative, after the peak).
pub fn series_limit(family: Family, x: Complex, k: usize) -> Result<Complex> {
    let mut sum = Complex::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut quiet = 0;
    for (i, t) in SeriesTerms::new(family, x, k).enumerate() {
        let t = t?;
        sum += t;
        let a = t.norm();
        if a <= prev && a < 1e-18 * sum.norm() {
            quiet += 1;
            if quiet >= 3 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        prev = a;
        if i > 100_000 {
            break;
        }
    }
    Err(Error::NonConvergence(format!("{} series {k} at x = {x}", family.name())))
}

/// Executes a plan: Σ over kept series of their partial sums.
pub fn execute_plan(family: Family, x: Complex, plan: &DyadicPlan) -> Result<Complex> {
    let mut sum = Complex::new(0.0, 0.0);
    for (k, &n) in plan.n_terms.iter().enumerate() {
        sum += series_partial(family, x, k, n)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn magnitudes_match_planner_model() {
        for family in [Family::EiStokes, Family::EiLeft, Family::Psi] {
            let x = c64(2.5, 0.7);
            for k in [0usize, 1, 3] {
                let exact: Vec<f64> = SeriesTerms::new(family, x, k).take(12).map(|t| t.unwrap().norm()).collect();
                let model: Vec<f64> = family.term_magnitudes(x, k).take(12).collect();
                for (a, b) in exact.iter().zip(&model) {
                    assert!((a / b - 1.0).abs() < 1e-12, "{family:?} k={k}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn pole_reported() {
        let r = series_partial(Family::EiLeft, c64(-2.0, 0.0), 0, 5);
        assert!(matches!(r, Err(Error::Pole { .. })));
    }
}
