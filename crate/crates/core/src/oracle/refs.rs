//! Classical reference values: quadrature of Laplace-type integrals and
//! convergent power series, with no dependence on the dyadic machinery.

use super::contour::Contour;
use super::quad::{quad_real, quad_real_inf, CompensatedSum};
use crate::{Complex, Error, Result};
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const QUAD_TOL: f64 = 1e-13;

/// e^{-x}Ei⁺(x) as ∫ e^{-px}/(1-p) dp along a given contour from 0.
pub fn ei_plus_on_contour(x: Complex, contour: &Contour) -> Result<Complex> {
    let f = move |p: Complex| (-p * x).exp() / (1.0 - p);
    let scale = if x.re > 0.0 { (1.0 / x.re).clamp(0.05, 10.0) } else { 1.0 };
    contour.integrate(&f, scale, QUAD_TOL)
}

/// e^{-x}Ei⁺(x): the branch obtained with the path passing below p = 1,
/// continued to ℂ minus -i[0, ∞).
pub fn ei_plus_reference(x: Complex) -> Result<Complex> {
    if x.norm() == 0.0 || (x.re == 0.0 && x.im < 0.0) {
        return Err(Error::Domain(format!("{x} lies on the cut -i[0, ∞)")));
    }
    let mut arg = x.arg();
    if arg <= -PI / 2.0 {
        arg += 2.0 * PI;
    }
    if (-0.3..PI / 4.0).contains(&arg) && x.im.abs() < 3.0 {
        return ei_plus_on_contour(x, &Contour::below_real_axis(1.0));
    }
    let ray = ei_plus_on_contour(x, &Contour::ray(-arg))?;
    if arg < 0.0 {
        // the ray passes above the pole at p = 1
        return Ok(ray - Complex::new(0.0, 2.0 * PI) * (-x).exp());
    }
    Ok(ray)
}

/// e^{x}E₁(x) = ∫₀^∞ e^{-xp}/(1+p) dp for arg x ≠ π.
pub fn ei_left_reference(x: Complex) -> Result<Complex> {
    if x.norm() == 0.0 || (x.im == 0.0 && x.re < 0.0) {
        return Err(Error::Domain(format!("{x} lies on the cut (-∞, 0]")));
    }
    let f = move |p: Complex| (-p * x).exp() / (1.0 + p);
    let scale = (1.0 / x.norm()).clamp(0.05, 10.0);
    Contour::ray(-x.arg()).integrate(&f, scale, QUAD_TOL)
}

/// Ei(x) from γ + ln|x| + Σ xⁿ/(n·n!) (principal value for x > 0).
pub fn ei_series(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Domain("Ei has a logarithmic singularity at 0".into()));
    }
    let mut acc = CompensatedSum::default();
    acc.add(Complex::new(EULER_GAMMA + x.abs().ln(), 0.0));
    let mut t = 1.0;
    for n in 1..500 {
        t *= x / n as f64;
        let term = t / n as f64;
        acc.add(Complex::new(term, 0.0));
        if term.abs() < 1e-18 * acc.value().re.abs() && n as f64 > x.abs() {
            break;
        }
    }
    Ok(acc.value().re)
}

// B_{2n}/(2n) for n = 1..=8
const PSI_ASYMPTOTIC: [f64; 8] =
    [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0, -3617.0 / 8160.0];

/// Digamma Ψ(z) by upward recurrence and the asymptotic series.
pub fn psi_reference(z: Complex) -> Result<Complex> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Domain(format!("Ψ has a pole at {z}")));
    }
    let mut acc = CompensatedSum::default();
    let mut w = z;
    while w.norm() < 20.0 || w.re < 10.0 {
        acc.add(-w.inv());
        w += 1.0;
    }
    let w2 = (w * w).inv();
    let mut p = w2;
    let mut tail = Complex::new(0.0, 0.0);
    for c in PSI_ASYMPTOTIC {
        tail += p * c;
        p *= w2;
    }
    acc.add(w.ln() - 0.5 * w.inv() - tail);
    Ok(acc.value())
}

/// erfc for real x: positive-term series for erf below 3, continued fraction above.
pub fn erfc_reference(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc_reference(-x);
    }
    if x < 3.0 {
        // erf(x) = 2/√π e^{-x²} Σ 2ⁿ x^{2n+1}/(1·3···(2n+1))
        let mut t = x;
        let mut s = x;
        for n in 1..200 {
            t *= 2.0 * x * x / (2 * n + 1) as f64;
            s += t;
            if t < 1e-18 * s {
                break;
            }
        }
        return 1.0 - 2.0 / PI.sqrt() * (-x * x).exp() * s;
    }
    let mut f = x;
    for n in (1..300).rev() {
        f = x + (n as f64 / 2.0) / f;
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// Γ(s, x) = xˢe^{-x} ∫₀^∞ (1+p)^{s-1} e^{-xp} dp for Re x > 0.
pub fn inc_gamma_reference(s: f64, x: Complex) -> Result<Complex> {
    if x.re <= 0.0 {
        return Err(Error::Domain(format!("incomplete gamma oracle needs Re x > 0, got {x}")));
    }
    let f = move |p: Complex| (1.0 + p).powf(s - 1.0) * (-p * x).exp();
    let scale = (1.0 / x.norm()).clamp(0.02, 10.0);
    let v = Contour::ray(-x.arg()).integrate(&f, scale, QUAD_TOL * (1.0 / x.norm()).min(1.0))?;
    Ok(v * x.powf(s) * (-x).exp())
}

/// e^{x}K_ν(x) = ∫₀^∞ e^{-x(cosh t - 1)} cosh(νt) dt for x > 0.
pub fn bessel_k_scaled_reference(nu: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("K_ν oracle needs x > 0, got {x}")));
    }
    let f = move |t: f64| {
        let sh = (0.5 * t).sinh();
        (-2.0 * x * sh * sh).exp() * (nu * t).cosh()
    };
    let scale = (1.0 / x.sqrt()).clamp(0.05, 2.0);
    // large orders at small x give large values; make the tolerance relative
    let coarse = quad_real_inf(&f, 0.0, scale, 1e-4)?;
    quad_real_inf(&f, 0.0, scale, QUAD_TOL * coarse.abs().max(1.0))
}

/// K_ν(x) for x > 0.
pub fn bessel_k_reference(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_k_scaled_reference(nu, x)? * (-x).exp())
}

/// Ai(x) = π⁻¹√(x/3) K_{1/3}(2x^{3/2}/3) for x > 0.
pub fn airy_reference(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("Airy oracle needs x > 0, got {x}")));
    }
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    Ok((x / 3.0).sqrt() / PI * bessel_k_scaled_reference(1.0 / 3.0, zeta)? * (-zeta).exp())
}

/// Ai(x) from its Maclaurin series (accurate for |x| ≲ 2).
pub fn airy_series(x: f64) -> f64 {
    const C1: f64 = 0.355_028_053_887_817_2;
    const C2: f64 = 0.258_819_403_792_806_8;
    let x3 = x * x * x;
    let (mut f, mut g) = (1.0, x);
    let (mut tf, mut tg) = (1.0, x);
    for k in 1..100 {
        let k3 = 3.0 * k as f64;
        tf *= x3 / ((k3 - 1.0) * k3);
        tg *= x3 / (k3 * (k3 + 1.0));
        f += tf;
        g += tg;
        if tf.abs() < 1e-18 && tg.abs() < 1e-18 {
            break;
        }
    }
    C1 * f - C2 * g
}

/// P_{ν-1/2}(1+2p) = ₂F₁(1/2+ν, 1/2-ν; 1; -p) through Euler's integral, |ν| ≤ 1/2.
pub fn legendre_kernel_reference(nu: f64, p: f64) -> Result<f64> {
    if nu.abs() > 0.5 {
        return Err(Error::Domain(format!("Euler-integral oracle needs |ν| ≤ 1/2, got {nu}")));
    }
    if p < 0.0 {
        return Err(Error::Domain(format!("kernel oracle needs p ≥ 0, got {p}")));
    }
    let b = 0.5 - nu.abs();
    let a = 0.5 + nu.abs();
    if b == 0.0 {
        return Ok(1.0);
    }
    // t = u^{1/b} on [0, 1/2], 1 - t = v^{1/(1-b)} on [1/2, 1]
    let left = move |u: f64| {
        let t = u.powf(1.0 / b);
        (1.0 - t).powf(-b) * (1.0 + p * t).powf(-a) / b
    };
    let right = move |v: f64| {
        let t = 1.0 - v.powf(1.0 / (1.0 - b));
        t.powf(b - 1.0) * (1.0 + p * t).powf(-a) / (1.0 - b)
    };
    let l = quad_real(&left, 0.0, 0.5f64.powf(b), QUAD_TOL)?;
    let r = quad_real(&right, 0.0, 0.5f64.powf(1.0 - b), QUAD_TOL)?;
    Ok((PI * b).sin() / PI * (l + r))
}

/// Laplace transform h_ν(x) = ∫₀^∞ e^{-xp} P_{ν-1/2}(1+2p) dp = e^{x/2}K_ν(x/2)/√(πx).
pub fn borel_h_reference(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_k_scaled_reference(nu, 0.5 * x)? / (PI * x).sqrt())
}
