//! Globally adaptive Gauss-Kronrod (7/15) quadrature on finite intervals and
//! half-lines, for the smooth decaying integrands of the coefficient tables.

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const MAX_PANELS: usize = 4000;

/// One 15-point panel: (Kronrod value, |Kronrod - Gauss|).
pub fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let fs = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        k += WGK[i] * fs;
        if i % 2 == 1 {
            g += WG[i / 2] * fs;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// ∫_a^b f to max(rel_tol·|I|, abs_tol), splitting the worst panel first.
/// Returns (value, error estimate).
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<(f64, f64)> {
    let mut panels = vec![(a, b, gk15(f, a, b))];
    loop {
        let (total, err) = panels.iter().fold((0.0, 0.0), |(s, e), p| (s + p.2 .0, e + p.2 .1));
        if !total.is_finite() {
            return Err(Error::NonConvergence(format!("non-finite integrand on [{a}, {b}]")));
        }
        if err <= (rel_tol * total.abs()).max(abs_tol) {
            return Ok((total, err));
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::NonConvergence(format!("quadrature on [{a}, {b}] stalled at error {err:e}")));
        }
        let worst =
            panels.iter().enumerate().max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1)).map(|(i, _)| i).unwrap_or(0);
        let (lo, hi, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        panels.push((lo, mid, gk15(f, lo, mid)));
        panels.push((mid, hi, gk15(f, mid, hi)));
    }
}

/// ∫_a^∞ f over chunks of doubling length, stopping after two chunks whose
/// contribution is below `rel_tol`·|I|. Fails if the integrand is still
/// significant beyond `limit`.
pub fn integrate_to_infinity(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    first_len: f64,
    limit: f64,
    rel_tol: f64,
) -> Result<(f64, f64, f64)> {
    let mut lo = a;
    let mut len = first_len;
    let mut total: f64 = 0.0;
    let mut err = 0.0;
    let mut quiet = 0;
    while lo < limit {
        let hi = (lo + len).min(limit);
        let (v, e) = integrate(f, lo, hi, rel_tol * 0.1, rel_tol * 1e-3 * total.abs())?;
        total += v;
        err += e;
        if hi >= limit && v.abs() <= rel_tol * total.abs() {
            return Ok((total, err, hi));
        }
        if v.abs() <= rel_tol * 1e-2 * total.abs() {
            quiet += 1;
            if quiet == 2 {
                return Ok((total, err, hi));
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        len *= 2.0;
    }
    Err(Error::OutOfRange(format!("integrand still significant at the truncation limit {limit}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        let k: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        let g: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exactness() {
        // Kronrod is exact to degree 22 on one panel
        let (v, _) = gk15(&|t| t.powi(22), -1.0, 1.0);
        assert!((v - 2.0 / 23.0).abs() < 1e-14);
        let (v, e) = integrate(&|t| t.sin(), 0.0, std::f64::consts::PI, 1e-14, 0.0).unwrap();
        assert!((v - 2.0).abs() < 1e-14 && e < 1e-13);
    }

    #[test]
    fn half_line() {
        let (v, _, _) = integrate_to_infinity(&|t| (-t).exp(), 0.0, 1.0, 1e3, 1e-14).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
        assert!(integrate_to_infinity(&|t| 1.0 / (1.0 + t), 0.0, 1.0, 100.0, 1e-12).is_err());
    }
}
