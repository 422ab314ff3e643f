use crate::{c64, Complex, Error, Result};

const EULER_STAGES: usize = 20;
const EULER_START: usize = 40;

fn check_pole(a: Complex, upto: usize) -> Result<()> {
    if a.im == 0.0 && a.re <= 0.0 && a.re == a.re.round() && (-a.re) as usize <= upto {
        return Err(Error::Pole { at: a });
    }
    Ok(())
}

/// Φ(z, 1, a) = Σ_{j≥0} zʲ/(a + j) for |z| < 1, or z = -1 where the
/// alternating series is accelerated by repeated averaging of partial sums.
pub fn lerch_phi_1(z: Complex, a: Complex) -> Result<Complex> {
    if z == c64(-1.0, 0.0) {
        check_pole(a, usize::MAX)?;
        let n = EULER_START + EULER_STAGES;
        let mut partial = Vec::with_capacity(n + 1);
        let mut s = c64(0.0, 0.0);
        for j in 0..=n {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            s += sign / (a + j as f64);
            partial.push(s);
        }
        let mut row: Vec<Complex> = partial[EULER_START..].to_vec();
        for _ in 0..EULER_STAGES {
            row = row.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
        }
        return Ok(row[0]);
    }
    let r = z.norm();
    if r >= 1.0 {
        return Err(Error::Domain(format!("|z| = {r} ≥ 1 and z ≠ -1")));
    }
    check_pole(a, usize::MAX)?;
    let mut sum = a.inv();
    let mut zj = c64(1.0, 0.0);
    for j in 1..1_000_000usize {
        zj *= z;
        let t = zj / (a + j as f64);
        sum += t;
        if t.norm() < 1e-17 * sum.norm() || zj.norm() == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence(format!("Lerch series at z = {z}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let a = c64(2.5, 1.0);
        assert!((lerch_phi_1(c64(0.0, 0.0), a).unwrap() - a.inv()).norm() < 1e-16);
        let v = lerch_phi_1(c64(-1.0, 0.0), c64(1.0, 0.0)).unwrap();
        assert!((v.re - 2f64.ln()).abs() < 1e-13);
        assert!(lerch_phi_1(c64(0.5, 0.0), c64(-3.0, 0.0)).is_err());
    }

    #[test]
    fn alternating_matches_half_difference() {
        // Σ (-1)^n/(x+n) at x = 2 is 1 - ln 2
        let v = lerch_phi_1(c64(-1.0, 0.0), c64(2.0, 0.0)).unwrap();
        assert!((v.re - (1.0 - 2f64.ln())).abs() < 1e-13);
    }

    #[test]
    fn geometric_kernel() {
        // Φ(z, 1, 1) = -ln(1 - z)/z
        let z = c64(0.4, -0.3);
        let v = lerch_phi_1(z, c64(1.0, 0.0)).unwrap();
        let e = -(1.0 - z).ln() / z;
        assert!((v - e).norm() < 1e-15);
    }
}
