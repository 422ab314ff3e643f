//! Remainder models for the dyadic factorial expansions and the truncation planner.

use super::identities::MAX_LEVEL;
use crate::scalar::ln_gamma;
use crate::{Complex, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};

/// Relative distance from a forbidden cut below which planning is refused.
pub const CUT_MARGIN: f64 = 0.05;

const TAIL_ITER_CAP: usize = 20_000;

/// Truncation schedule: series 0 is the base series, series k ≥ 1 the k-th
/// dyadic level (for Ψ, series i is dyadic level i + 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicPlan {
    pub levels: usize,
    pub n_terms: Vec<usize>,
    pub predicted_error: f64,
}

impl DyadicPlan {
    /// Plan with explicit term counts; `levels` is `n_terms.len() - 1`.
    pub fn fixed(n_terms: Vec<usize>) -> Result<Self> {
        if n_terms.is_empty() || n_terms.contains(&0) {
            return Err(Error::Domain("plan needs at least one series and n ≥ 1 per series".into()));
        }
        if n_terms.len() > MAX_LEVEL + 1 {
            return Err(Error::OutOfRange(format!("plan with {} series", n_terms.len())));
        }
        Ok(DyadicPlan { levels: n_terms.len() - 1, n_terms, predicted_error: f64::MIN_POSITIVE })
    }

    pub fn total_terms(&self) -> usize {
        self.n_terms.iter().sum()
    }
}

/// Expansion families with a modeled remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Family {
    /// e^{-x}Ei⁺(x) in the Stokes sector, effective variable y = -ix/π.
    EiStokes,
    /// e^{x}Ei(-x) away from the negative axis.
    EiLeft,
    /// Ψ(x+1) - ln x.
    Psi,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::EiStokes => "ei-stokes",
            Family::EiLeft => "ei-left",
            Family::Psi => "psi",
        }
    }

    // (effective variable of series k, geometric ratio, first-term numerator)
    fn series_params(&self, x: Complex, k: usize) -> (Complex, f64, f64) {
        let scale = 2f64.powi(k as i32);
        match self {
            Family::EiStokes => {
                let y = Complex::new(0.0, -1.0 / PI) * x;
                if k == 0 {
                    (y, 0.5, 1.0)
                } else {
                    let ek = Complex::from_polar(1.0, -PI / scale);
                    (y * scale, 1.0 / (1.0 + ek).norm(), 1.0)
                }
            }
            Family::EiLeft => {
                if k == 0 {
                    (x, 1.0 / (E - 1.0), E)
                } else {
                    let ck = (1.0 / scale).exp();
                    (x * scale, 1.0 / (ck + 1.0), ck)
                }
            }
            Family::Psi => (x * (2.0 * scale) + 1.0, 0.5, 1.0),
        }
    }

    /// Magnitudes of the terms m = 1, 2, ... of series k:
    /// numerator · Γ(m) · ratioᵐ / |(Y)_m|.
    pub fn term_magnitudes(&self, x: Complex, k: usize) -> TermIter {
        let (y, ratio, num) = self.series_params(x, k);
        TermIter { y, ratio, numerator: num, m: 1, current: num * ratio / y.norm() }
    }

    /// Rejects x closer to the family's cut than `margin`·|x|.
    pub fn check_cut(&self, x: Complex, margin: f64) -> Result<()> {
        let r = x.norm();
        match self {
            Family::EiStokes => {
                let d = if x.im <= 0.0 { x.re.abs() } else { r };
                if r == 0.0 || d < margin * r {
                    return Err(Error::CutProximity { x, cut: "-i[0, ∞)" });
                }
            }
            Family::EiLeft => {
                let d = if x.re <= 0.0 { x.im.abs() } else { r };
                if r == 0.0 || d < margin * r {
                    return Err(Error::CutProximity { x, cut: "(-∞, 0]" });
                }
            }
            Family::Psi => {
                if x.re <= 0.0 {
                    return Err(Error::Domain(format!("Ψ expansion needs Re x > 0, got {x}")));
                }
            }
        }
        Ok(())
    }
}

/// Iterator over term magnitudes of one series.
#[derive(Debug, Clone)]
pub struct TermIter {
    y: Complex,
    ratio: f64,
    numerator: f64,
    m: usize,
    current: f64,
}

impl TermIter {
    /// Upper bound for the ratio of consecutive terms from the current index on.
    fn sup_ratio(&self) -> f64 {
        let (a, b) = (self.y.re, self.y.im);
        let m = self.m as f64;
        let f = |t: f64| t * t / ((a + t) * (a + t) + b * b);
        let peak = if a < 0.0 { (a * a + b * b) / -a } else { f64::INFINITY };
        let g = if a >= 0.0 {
            1.0
        } else if m >= peak {
            f(m).max(1.0)
        } else {
            f(peak).max(1.0)
        };
        self.ratio * g.sqrt()
    }

    // ln of the magnitude of term m
    fn ln_term(&self, m: f64) -> Option<f64> {
        let lg = |z: Complex| ln_gamma(z).ok().map(|v| v.re);
        let poch = lg(self.y + m)? - lg(self.y)?;
        Some(self.numerator.ln() + ln_gamma(Complex::new(m, 0.0)).ok()?.re + m * self.ratio.ln() - poch)
    }

    // largest m where the ratio m·r/|Y+m| equals c
    fn crossing(&self, c: f64) -> Option<f64> {
        let (a, b, r) = (self.y.re, self.y.im, self.ratio);
        let (qa, qb, qc) = (c * c - r * r, 2.0 * c * c * a, c * c * (a * a + b * b));
        let disc = qb * qb - 4.0 * qa * qc;
        (disc >= 0.0).then(|| (-qb + disc.sqrt()) / (2.0 * qa))
    }

    /// Bound on the summed magnitudes from the current term on, for a series
    /// whose ratio still exceeds 1 further out (Re Y < 0): the terms dip,
    /// climb to a single bump at the upper unit crossing m*, then decay.
    fn bump_bound(&self) -> Option<f64> {
        let rho = 0.5 * (1.0 + self.ratio);
        let m_star = self.crossing(1.0)?;
        let m_rho = self.crossing(rho)?;
        let m = self.m as f64;
        if m_star <= m {
            return None;
        }
        let top = self.ln_term(m_star.ceil())?.exp().max(self.ln_term(m_star.floor().max(1.0))?.exp());
        let rising = self.current.max(top) * (m_star - m + 2.0);
        let falling = top * ((m_rho - m_star).max(0.0) + 2.0 + rho / (1.0 - rho));
        Some(rising + falling)
    }
}

impl Iterator for TermIter {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.current;
        let m = self.m as f64;
        self.current *= m * self.ratio / (self.y + m).norm();
        self.m += 1;
        Some(out)
    }
}

/// Sum of the magnitudes of all terms after the first n (n ≥ 0).
fn tail_after(mut it: TermIter, n: usize) -> f64 {
    for _ in 0..n {
        it.next();
    }
    let mut sum = 0.0;
    for i in 0..TAIL_ITER_CAP {
        let rs = it.sup_ratio();
        if rs >= 1.0 && i % 32 == 0 {
            if let Some(bound) = it.bump_bound() {
                if bound <= 1e-3 * sum || (sum == 0.0 && bound == 0.0) {
                    return sum + bound;
                }
            }
        }
        let t = it.next().unwrap_or(0.0);
        sum += t;
        if rs < 1.0 {
            let rest = t * rs / (1.0 - rs);
            if rest <= 1e-3 * sum || sum == 0.0 {
                return sum + rest;
            }
        }
    }
    f64::INFINITY
}

/// Remainder model: geometric base per series, algebraic exponent and a
/// calibrated prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainderModel {
    pub family: Family,
    pub prefactor: f64,
}

impl RemainderModel {
    pub fn new(family: Family, prefactor: f64) -> Self {
        RemainderModel { family, prefactor }
    }

    /// Limit ratio of consecutive terms in series k.
    pub fn geometric_base(&self, k: usize) -> f64 {
        let x = Complex::new(1.0, 0.0);
        self.family.series_params(x, k).1
    }

    /// Exponent a in the large-n behavior baseⁿ·nᵃ of series k.
    pub fn algebraic_exponent(&self, x: Complex, k: usize) -> f64 {
        let (y, _, _) = self.family.series_params(x, k);
        -y.re
    }

    /// prefactor times the summed magnitudes of the terms omitted after n terms;
    /// its large-n form is prefactor·A·baseⁿ·n^{exponent}.
    pub fn remainder_bound(&self, x: Complex, k: usize, n: usize) -> f64 {
        self.prefactor * tail_after(self.family.term_magnitudes(x, k), n)
    }

    /// Total magnitude of series k (used for discarded levels).
    fn series_size(&self, x: Complex, k: usize) -> f64 {
        tail_after(self.family.term_magnitudes(x, k), 0)
    }

    /// prefactor times the magnitude of every series deeper than `levels`,
    /// counted up to the level cap.
    pub fn discarded_bound(&self, x: Complex, levels: usize) -> f64 {
        let sum: f64 = (levels + 1..=MAX_LEVEL).map(|k| self.series_size(x, k)).sum();
        self.prefactor * sum
    }
}

/// Chooses the number of levels and per-series term counts for accuracy `tol`.
pub fn plan_truncation(model: &RemainderModel, x: Complex, tol: f64) -> Result<DyadicPlan> {
    plan_truncation_with_margin(model, x, tol, CUT_MARGIN)
}

/// As [`plan_truncation`] with an explicit relative cut margin.
///
/// K is the first level whose leading term is below tol/2 and whose deeper
/// levels together stay below tol/2; the remaining budget is split equally.
pub fn plan_truncation_with_margin(model: &RemainderModel, x: Complex, tol: f64, margin: f64) -> Result<DyadicPlan> {
    if !(tol > 1e-14 && tol < 1e-1) {
        return Err(Error::Domain(format!("tolerance {tol:e} outside (1e-14, 1e-1)")));
    }
    model.family.check_cut(x, margin)?;
    let first = |k: usize| model.prefactor * model.family.term_magnitudes(x, k).next().unwrap_or(0.0);
    let levels =
        (0..=MAX_LEVEL).find(|&k| first(k) < tol / 2.0 && model.discarded_bound(x, k) < tol / 2.0).unwrap_or(MAX_LEVEL);
    let share = tol / (2.0 * (levels + 1) as f64);
    let mut n_terms = Vec::with_capacity(levels + 1);
    let mut predicted = model.discarded_bound(x, levels);
    for k in 0..=levels {
        let mut it = model.family.term_magnitudes(x, k);
        let mut n = 1usize;
        it.next();
        loop {
            let rb = model.prefactor * tail_after(it.clone(), 0);
            if rb < share {
                predicted += rb;
                break;
            }
            it.next();
            n += 1;
            if n > TAIL_ITER_CAP {
                return Err(Error::NonConvergence(format!(
                    "{} series {k} needs more than {TAIL_ITER_CAP} terms at x = {x}",
                    model.family.name()
                )));
            }
        }
        n_terms.push(n);
    }
    Ok(DyadicPlan { levels, n_terms, predicted_error: predicted.max(f64::MIN_POSITIVE) })
}

/// Modeled error of executing an arbitrary plan.
pub fn plan_error(model: &RemainderModel, x: Complex, plan: &DyadicPlan) -> f64 {
    let kept: f64 = plan.n_terms.iter().enumerate().map(|(k, &n)| model.remainder_bound(x, k, n)).sum();
    (kept + model.discarded_bound(x, plan.levels)).max(f64::MIN_POSITIVE)
}
