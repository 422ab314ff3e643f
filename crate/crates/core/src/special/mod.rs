//! Dyadic factorial evaluators for Ei, Ψ, the incomplete gamma function and erfc.

mod incgamma;
mod series;

pub use incgamma::{erfc_dyadic, gamma_coefficients, incomplete_gamma_dyadic, GammaCoefficients};
pub use series::{execute_plan, series_limit, series_partial, SeriesTerms};

use crate::dyadic::{plan_error, plan_truncation_with_margin, DyadicPlan, Family, RemainderModel, CUT_MARGIN};
use crate::oracle::{ei_left_reference, ei_plus_reference, psi_reference};
use crate::{Complex, Error, Result};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Smallest |x| accepted by [`ei_stokes`].
pub const EI_STOKES_MIN_ABS: f64 = 0.2;

/// Value, error estimate and the plan that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex,
    pub error_estimate: f64,
    pub plan: DyadicPlan,
    /// Σ plan.n_terms
    pub terms_total: usize,
    /// Terms of an asymptotic closure standing in for the levels past the plan (0 if none).
    pub closure_terms: usize,
}

impl EvalResult {
    pub(crate) fn new(value: Complex, error_estimate: f64, plan: DyadicPlan, closure_terms: usize) -> Self {
        let terms_total = plan.total_terms();
        EvalResult { value, error_estimate: error_estimate.max(f64::MIN_POSITIVE), plan, terms_total, closure_terms }
    }

    /// All terms summed, closure included.
    pub fn terms_with_closure(&self) -> usize {
        self.terms_total + self.closure_terms
    }
}

/// Constants of the Ei-Stokes expansion in y = -ix/π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EiStokesParams {
    pub y: Complex,
}

impl EiStokesParams {
    pub fn new(x: Complex) -> Self {
        EiStokesParams { y: Complex::new(0.0, -1.0 / PI) * x }
    }

    /// e_k = e^{-iπ2^{-k}}
    pub fn e(k: usize) -> Complex {
        Complex::from_polar(1.0, -PI * 2f64.powi(-(k as i32)))
    }

    /// r_k = iπ2^{-k}
    pub fn r(k: usize) -> Complex {
        Complex::new(0.0, PI * 2f64.powi(-(k as i32)))
    }
}

const CALIBRATION_TOL: f64 = 1e-7;

fn calibration_points(family: Family) -> Vec<Complex> {
    (0..20)
        .map(|i| {
            let t = i as f64;
            match family {
                Family::EiStokes => Complex::from_polar(1.0 + 0.65 * t, -1.2 + 0.6 * (i % 5) as f64),
                Family::EiLeft => Complex::from_polar(0.5 + 0.5 * t, -2.0 + (i % 5) as f64),
                Family::Psi => Complex::from_polar(0.3 + 1.2 * t, -1.0 + 0.5 * (i % 5) as f64),
            }
        })
        .collect()
}

fn reference(family: Family, x: Complex) -> Result<Complex> {
    match family {
        Family::EiStokes => ei_plus_reference(x),
        Family::EiLeft => ei_left_reference(x),
        Family::Psi => Ok(psi_reference(x + 1.0)? - x.ln()),
    }
}

/// Fits the prefactor: 4 × the worst ratio of actual to modeled error over
/// 20 reference points, never below 1.
pub fn calibrate(family: Family) -> Result<RemainderModel> {
    let unit = RemainderModel::new(family, 1.0);
    let mut worst: f64 = 0.0;
    for x in calibration_points(family) {
        let plan = plan_truncation_with_margin(&unit, x, CALIBRATION_TOL, CUT_MARGIN)?;
        let value = execute_plan(family, x, &plan)?;
        let actual = (value - reference(family, x)?).norm();
        worst = worst.max(actual / plan.predicted_error);
    }
    Ok(RemainderModel::new(family, (4.0 * worst).max(1.0)))
}

static EI_STOKES_MODEL: Lazy<RemainderModel> =
    Lazy::new(|| calibrate(Family::EiStokes).unwrap_or(RemainderModel::new(Family::EiStokes, 4.0)));
static EI_LEFT_MODEL: Lazy<RemainderModel> =
    Lazy::new(|| calibrate(Family::EiLeft).unwrap_or(RemainderModel::new(Family::EiLeft, 4.0)));
static PSI_MODEL: Lazy<RemainderModel> =
    Lazy::new(|| calibrate(Family::Psi).unwrap_or(RemainderModel::new(Family::Psi, 4.0)));

/// Calibrated remainder model of a family (fitted once on first use).
pub fn model(family: Family) -> &'static RemainderModel {
    match family {
        Family::EiStokes => &EI_STOKES_MODEL,
        Family::EiLeft => &EI_LEFT_MODEL,
        Family::Psi => &PSI_MODEL,
    }
}

/// Options for [`ei_stokes_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EiStokesOptions {
    /// Relative distance from -i[0, ∞) below which evaluation is refused.
    pub cut_margin: f64,
}

impl Default for EiStokesOptions {
    fn default() -> Self {
        EiStokesOptions { cut_margin: CUT_MARGIN }
    }
}

fn check_stokes_abs(x: Complex) -> Result<()> {
    if !(x.norm() >= EI_STOKES_MIN_ABS) {
        return Err(Error::Domain(format!("|x| = {} below {EI_STOKES_MIN_ABS}", x.norm())));
    }
    Ok(())
}

/// e^{-x}Ei⁺(x) for x off the cut -i[0, ∞).
pub fn ei_stokes(x: Complex, tol: f64) -> Result<EvalResult> {
    ei_stokes_with(x, tol, EiStokesOptions::default())
}

/// [`ei_stokes`] with a configurable cut margin.
pub fn ei_stokes_with(x: Complex, tol: f64, opts: EiStokesOptions) -> Result<EvalResult> {
    check_stokes_abs(x)?;
    evaluate(Family::EiStokes, x, tol, opts.cut_margin)
}

/// e^{-x}Ei⁻(x), the other lateral branch, as the conjugate of Ei⁺ at x̄.
pub fn ei_stokes_minus(x: Complex, tol: f64) -> Result<EvalResult> {
    let mut r = ei_stokes(x.conj(), tol)?;
    r.value = r.value.conj();
    Ok(r)
}

/// e^{x}E₁(x) = ∫₀^∞ e^{-xp}/(1+p) dp, i.e. -e^{x}Ei(-x) on the principal branch.
pub fn ei_left(x: Complex, tol: f64) -> Result<EvalResult> {
    evaluate(Family::EiLeft, x, tol, CUT_MARGIN)
}

/// Ψ(x+1) for Re x > 0.
pub fn psi_dyadic(x: Complex, tol: f64) -> Result<EvalResult> {
    let mut r = evaluate(Family::Psi, x, tol, CUT_MARGIN)?;
    r.value += x.ln();
    Ok(r)
}

fn evaluate(family: Family, x: Complex, tol: f64, margin: f64) -> Result<EvalResult> {
    let m = model(family);
    let plan = plan_truncation_with_margin(m, x, tol, margin)?;
    let value = execute_plan(family, x, &plan)?;
    let err = plan.predicted_error;
    Ok(EvalResult::new(value, err, plan, 0))
}

/// Executes an explicit plan; the error estimate is the calibrated model's
/// bound for that plan. Ψ results include the ln x term.
pub fn evaluate_with_plan(family: Family, x: Complex, plan: &DyadicPlan) -> Result<EvalResult> {
    family.check_cut(x, 0.0)?;
    let mut value = execute_plan(family, x, plan)?;
    if family == Family::Psi {
        value += x.ln();
    }
    let err = plan_error(model(family), x, plan);
    let mut plan = plan.clone();
    plan.predicted_error = err;
    Ok(EvalResult::new(value, err, plan, 0))
}

/// Σ_{m=1}^n Γ(m)/(2^m (x)_m), which tends to ½Ψ((x+1)/2) - ½Ψ(x/2) = ∫₀¹ t^{x-1}/(t+1) dt.
pub fn psi_half_difference(x: Complex, n: usize) -> Result<Complex> {
    if !(x.re > 0.0) {
        return Err(Error::Domain(format!("half-difference series needs Re x > 0, got {x}")));
    }
    let mut t = (x * 2.0).inv();
    let mut sum = Complex::new(0.0, 0.0);
    for m in 1..=n {
        if m > 1 {
            t = t * (m - 1) as f64 / ((x + (m - 1) as f64) * 2.0);
        }
        sum += t;
    }
    Ok(sum)
}

/// |Ψ(x+1) - ln x - ½Σ_{k=0}^{K}[Ψ(2^k x+1) - Ψ(2^k x+½)]| with the reference Ψ.
pub fn verify_strange_identity(x: Complex, levels: usize) -> Result<f64> {
    if !(x.re > 0.0) {
        return Err(Error::Domain(format!("identity check needs Re x > 0, got {x}")));
    }
    let mut sum = psi_reference(x + 1.0)? - x.ln();
    for k in 0..=levels {
        let xk = x * 2f64.powi(k as i32);
        sum -= 0.5 * (psi_reference(xk + 1.0)? - psi_reference(xk + 0.5)?);
    }
    Ok(sum.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn ei_stokes_examples() {
        let x = c64(5.0, 0.0);
        let r = ei_stokes(x, 1e-10).unwrap();
        let o = ei_plus_reference(x).unwrap();
        assert!((r.value - o).norm() < 3e-10, "{} vs {o}", r.value);
        assert!((r.value.im + PI * (-5f64).exp()).abs() < 1e-8);
        assert_eq!(r.terms_total, r.plan.total_terms());
        assert!(ei_stokes(c64(0.1, 0.0), 1e-6).is_err());
        assert!(matches!(ei_stokes(c64(0.01, -2.0), 1e-6), Err(Error::CutProximity { .. })));
    }

    #[test]
    fn ei_stokes_branches() {
        let x = c64(3.0, 0.0);
        let plus = ei_stokes(x, 1e-9).unwrap().value;
        let minus = ei_stokes_minus(x, 1e-9).unwrap().value;
        assert!((plus.re - minus.re).abs() < 1e-9);
        assert!((plus.im + minus.im).abs() < 1e-9);
    }

    #[test]
    fn ei_left_examples() {
        let r = ei_left(c64(1.0, 0.0), 1e-10).unwrap();
        assert!((r.value.re - 0.596_347_362_4).abs() < 1e-9);
        let r = ei_left(c64(10.0, 0.0), 1e-10).unwrap();
        assert!((r.value.re - 0.091_563_333_939_788_08).abs() < 1e-9);
        assert!(ei_left(c64(-3.0, 0.01), 1e-6).is_err());
    }

    #[test]
    fn psi_examples() {
        let r = psi_dyadic(c64(1.0, 0.0), 1e-10).unwrap();
        assert!((r.value.re - 0.422_784_335_1).abs() < 1e-9);
        let r = psi_dyadic(c64(10.0, 0.0), 1e-10).unwrap();
        assert!((r.value.re - 2.351_752_589_1).abs() < 1e-9);
        assert!(psi_dyadic(c64(-1.0, 0.0), 1e-6).is_err());
    }

    #[test]
    fn half_difference() {
        let v = psi_half_difference(c64(1.0, 0.0), 60).unwrap();
        assert!((v.re - 2f64.ln()).abs() < 1e-10);
        let v = psi_half_difference(c64(2.0, 0.0), 60).unwrap();
        assert!((v.re - (1.0 - 2f64.ln())).abs() < 1e-10);
        let x = c64(3.0, 1.0);
        assert!((psi_half_difference(x, 1).unwrap() - (x * 2.0).inv()).norm() < 1e-16);
    }

    #[test]
    fn strange_identity() {
        for x in [0.5, 1.0] {
            assert!(verify_strange_identity(c64(x, 0.0), 40).unwrap() < 1e-10);
        }
        let r0 = verify_strange_identity(c64(1.0, 0.0), 0).unwrap();
        let r10 = verify_strange_identity(c64(1.0, 0.0), 10).unwrap();
        assert!(r10 * 256.0 <= r0);
    }

    #[test]
    fn calibrated_prefactors() {
        for f in [Family::EiStokes, Family::EiLeft, Family::Psi] {
            let m = calibrate(f).unwrap();
            assert!(m.prefactor >= 1.0 && m.prefactor < 100.0, "{f:?}: {}", m.prefactor);
        }
    }

    #[test]
    fn ei_left_base_series_is_lerch_at_x() {
        // ∫ e·e^{-xp}/(e - e^{-p}) dp = Σ_j e^{-j}/(x + j) = Φ(1/e, 1, x); the
        // argument is x, not x - 1
        use crate::oracle::quad_real_inf;
        use crate::scalar::lerch_phi_1;
        let z = c64((-1f64).exp(), 0.0);
        for x in [0.5, 1.0, 2.0, 7.5] {
            let kernel = |p: f64| std::f64::consts::E * (-x * p).exp() / (std::f64::consts::E - (-p).exp());
            let integral = quad_real_inf(&kernel, 0.0, 1.0 / x, 1e-14).unwrap();
            let base = series_limit(Family::EiLeft, c64(x, 0.0), 0).unwrap();
            let phi = lerch_phi_1(z, c64(x, 0.0)).unwrap();
            assert!((phi.re / integral - 1.0).abs() < 1e-12, "x={x}");
            assert!((base.re / integral - 1.0).abs() < 1e-12, "x={x}");
            // at x = 1 the shifted form sits on its pole
            if let Ok(shifted) = lerch_phi_1(z, c64(x - 1.0, 0.0)) {
                assert!((shifted.re / integral - 1.0).abs() > 1e-2);
            }
        }
    }
}
