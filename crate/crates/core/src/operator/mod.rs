//! Dyadic series for functions of a Hermitian matrix: the resolvent through
//! the unitary group e^{-itA}, the inverse through the semigroup e^{-tA}, and
//! fractional powers through the polylogarithm decomposition.
//!
//! Every matrix function is applied spectrally through one eigendecomposition
//! computed at construction.

use crate::dyadic::{dyadic_reciprocal_partial, ramified_partial, MAX_LEVEL};
use crate::{Complex, Error, Result};
use nalgebra::{DMatrix, DVector};
use std::fmt::Write as _;
use std::path::Path;

pub type Matrix = DMatrix<Complex>;
pub type Vector = DVector<Complex>;

pub const MAX_DIM: usize = 256;
/// Relative Hermiticity tolerance on the max-norm.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Positive definite means λ_min > POSITIVITY_GAP·λ_max.
pub const POSITIVITY_GAP: f64 = 1e-8;
/// Spectrum window accepted by `fractional_power_dyadic`.
pub const FRACTIONAL_SPECTRUM: (f64, f64) = (1e-3, 1e3);
/// Size limits of the double-sum demonstration.
pub const DOUBLE_SUM_MAX_DIM: usize = 8;
pub const DOUBLE_SUM_MAX_J: usize = 1000;

fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

const JACOBI_MAX_SWEEPS: usize = 12;

/// Cyclic complex Jacobi on a nearly diagonal Hermitian `b`, accumulating the
/// rotations into the columns of `v`.
fn jacobi_sweeps(b: &mut Matrix, v: &mut Matrix) {
    let n = b.nrows();
    let scale = b.norm();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| b[(i, j)].norm_sqr())
            .sum();
        if off.sqrt() <= f64::EPSILON * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let bpq = b[(p, q)];
                let r = bpq.norm();
                if r <= f64::MIN_POSITIVE {
                    continue;
                }
                // make b_pq real with a phase on index q, then rotate
                let phase = bpq / r;
                b.column_mut(q).iter_mut().for_each(|z| *z *= phase.conj());
                b.row_mut(q).iter_mut().for_each(|z| *z *= phase);
                v.column_mut(q).iter_mut().for_each(|z| *z *= phase.conj());
                let tau = (b[(q, q)].re - b[(p, p)].re) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                rotate(b, v, p, q, c, sn);
            }
        }
    }
}

/// B ← RᵀBR and V ← VR for the plane rotation R = [[c, s], [-s, c]] on (p, q).
fn rotate(b: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = b.nrows();
    for i in 0..n {
        let (x, y) = (b[(i, p)], b[(i, q)]);
        b[(i, p)] = x * c - y * s;
        b[(i, q)] = x * s + y * c;
        let (x, y) = (v[(i, p)], v[(i, q)]);
        v[(i, p)] = x * c - y * s;
        v[(i, q)] = x * s + y * c;
    }
    for j in 0..n {
        let (x, y) = (b[(p, j)], b[(q, j)]);
        b[(p, j)] = x * c - y * s;
        b[(q, j)] = x * s + y * c;
    }
    b[(p, q)] = Complex::new(0.0, 0.0);
    b[(q, p)] = Complex::new(0.0, 0.0);
}

/// Dense Hermitian matrix with its spectral decomposition A = V diag(λ) V*.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    entries: Matrix,
    eigenvalues: Vec<f64>,
    eigenvectors: Matrix,
}

impl HermitianOperator {
    pub fn new(entries: Matrix) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::Domain(format!("matrix must be square and nonempty, got {}×{}", n, entries.ncols())));
        }
        if n > MAX_DIM {
            return Err(Error::OutOfRange(format!("dimension {n} exceeds {MAX_DIM}")));
        }
        if entries.iter().any(|z| !z.is_finite()) {
            return Err(Error::Domain("matrix has non-finite entries".into()));
        }
        let scale = max_abs(&entries);
        let asymmetry = max_abs(&(&entries - entries.adjoint()));
        if asymmetry > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { asymmetry });
        }
        let entries = (&entries + entries.adjoint()) * Complex::new(0.5, 0.0);
        let first = entries.clone().symmetric_eigen();
        // the QR iteration stops with up to ~1e-9 relative off-diagonal mass
        // left on clustered spectra; Jacobi sweeps on V*AV clean it up
        let mut projected = first.eigenvectors.adjoint() * &entries * &first.eigenvectors;
        let mut vectors = first.eigenvectors;
        jacobi_sweeps(&mut projected, &mut vectors);
        let values: Vec<f64> = (0..n).map(|i| projected[(i, i)].re).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let eigenvalues = order.iter().map(|&i| values[i]).collect();
        let eigenvectors = Matrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
        Ok(HermitianOperator { entries, eigenvalues, eigenvectors })
    }

    /// Diagonal matrix with real entries.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        Self::new(Matrix::from_fn(
            n,
            n,
            |r, c| if r == c { Complex::new(values[r], 0.0) } else { Complex::new(0.0, 0.0) },
        ))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    /// V diag(f(λ_j)) V*.
    pub fn apply_fn(&self, f: impl Fn(f64) -> Result<Complex>) -> Result<Matrix> {
        let n = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            let fj = f(l)?;
            for r in 0..n {
                scaled[(r, j)] *= fj;
            }
        }
        Ok(scaled * self.eigenvectors.adjoint())
    }

    /// V diag(f(λ_j)) V* v without forming the matrix.
    pub fn apply_fn_to(&self, v: &Vector, f: impl Fn(f64) -> Result<Complex>) -> Result<Vector> {
        if v.len() != self.dim() {
            return Err(Error::Domain(format!("vector length {} does not match dimension {}", v.len(), self.dim())));
        }
        let mut c = self.eigenvectors.adjoint() * v;
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            c[j] *= f(l)?;
        }
        Ok(&self.eigenvectors * c)
    }

    /// ‖V*V − I‖_max.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        max_abs(&(self.eigenvectors.adjoint() * &self.eigenvectors - Matrix::identity(n, n)))
    }

    /// ‖VΛV* − A‖_F / ‖A‖_F.
    pub fn reconstruction_error(&self) -> f64 {
        let r = self.apply_fn(|l| Ok(Complex::new(l, 0.0))).unwrap_or_else(|_| self.entries.clone());
        (r - &self.entries).norm() / self.entries.norm().max(f64::MIN_POSITIVE)
    }

    fn require_positive(&self) -> Result<()> {
        let min = self.eigenvalues[0];
        let max = *self.eigenvalues.last().unwrap_or(&min);
        if !(min > 0.0) || min <= POSITIVITY_GAP * max {
            return Err(Error::NonPositiveSpectrum { min });
        }
        Ok(())
    }

    /// U_t = e^{-itA}.
    pub fn evolution(&self, t: f64) -> Matrix {
        self.apply_fn(|l| Ok(Complex::from_polar(1.0, -t * l))).unwrap_or_else(|_| unreachable!())
    }

    /// (A − iλ)⁻¹ from the eigendecomposition, for reference.
    pub fn resolvent_exact(&self, lambda: f64) -> Result<Matrix> {
        self.apply_fn(|l| Ok(Complex::new(l, -lambda).inv()))
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    Ok(())
}

fn check_levels(k: usize) -> Result<()> {
    if k > MAX_LEVEL {
        return Err(Error::OutOfRange(format!("level {k} exceeds {MAX_LEVEL}")));
    }
    Ok(())
}

/// i(1 − e^{-λ}U₁)⁻¹v − i Σ_{k=1}^K 2^{-k}(1 + e^{-λ/2^k}U_{2^{-k}})⁻¹v,
/// which tends to (A − iλ)⁻¹v.
pub fn resolvent_dyadic(a: &HermitianOperator, lambda: f64, k: usize, v: &Vector) -> Result<Vector> {
    check_lambda(lambda)?;
    check_levels(k)?;
    let i = Complex::new(0.0, 1.0);
    a.apply_fn_to(v, |l| Ok(i * dyadic_reciprocal_partial(Complex::new(lambda, l), k)?))
}

/// The conjugate series, tending to (A + iλ)⁻¹v.
pub fn resolvent_dyadic_conj(a: &HermitianOperator, lambda: f64, k: usize, v: &Vector) -> Result<Vector> {
    check_lambda(lambda)?;
    check_levels(k)?;
    let i = Complex::new(0.0, 1.0);
    a.apply_fn_to(v, |l| Ok(-i * dyadic_reciprocal_partial(Complex::new(lambda, -l), k)?))
}

/// (1 − T₁)⁻¹ − Σ_{k=1}^K 2^{-k}(1 + T_{2^{-k}})⁻¹ with T_t = e^{-tA}.
pub fn inverse_dyadic(a: &HermitianOperator, k: usize) -> Result<Matrix> {
    a.require_positive()?;
    check_levels(k)?;
    a.apply_fn(|l| dyadic_reciprocal_partial(Complex::new(l, 0.0), k))
}

/// Γ(s) sin(πs)[Li_s(T₁) − Σ_{k=1}^K 2^{-k(1-s)} Li_s(−T_{2^{-k}})], which
/// tends to π A^{s−1}.
pub fn fractional_power_dyadic(a: &HermitianOperator, s: f64, k: usize) -> Result<Matrix> {
    if !(s < 1.0) || s.fract() == 0.0 || !s.is_finite() {
        return Err(Error::Domain(format!("exponent s = {s} must be below 1 and not an integer")));
    }
    check_levels(k)?;
    let (lo, hi) = FRACTIONAL_SPECTRUM;
    let (min, max) = (a.eigenvalues[0], *a.eigenvalues.last().unwrap_or(&0.0));
    if !(min > lo && max < hi) {
        return Err(Error::OutOfRange(format!("spectrum [{min:e}, {max:e}] outside ({lo:e}, {hi:e})")));
    }
    a.apply_fn(|l| Ok(std::f64::consts::PI * ramified_partial(s, Complex::new(l, 0.0), k)?))
}

/// A truncated series together with its error against a reference, level by level.
#[derive(Debug, Clone)]
pub struct OperatorSeriesReport {
    pub partial: Matrix,
    pub k_used: usize,
    /// Inner-sum truncation (0 when the inner sums are summed in closed form).
    pub j_used: usize,
    /// (K, norm of partial(K) − reference) for K = 0..=k_used.
    pub error_curve: Vec<(usize, f64)>,
}

impl OperatorSeriesReport {
    /// log₂ of successive error ratios.
    pub fn slopes(&self) -> Vec<f64> {
        self.error_curve.windows(2).map(|w| (w[0].1 / w[1].1).log2()).collect()
    }
}

/// Spectral norm of a Hermitian-or-not matrix (largest singular value).
pub fn operator_norm(m: &Matrix) -> f64 {
    m.clone().singular_values().iter().fold(0.0, |a, &b| a.max(b))
}

/// inverse_dyadic at every K ≤ k with operator-norm errors against A⁻¹.
pub fn inverse_dyadic_report(a: &HermitianOperator, k: usize) -> Result<OperatorSeriesReport> {
    a.require_positive()?;
    let exact = a.apply_fn(|l| Ok(Complex::new(1.0 / l, 0.0)))?;
    let mut curve = Vec::with_capacity(k + 1);
    let mut partial = exact.clone();
    for level in 0..=k {
        partial = inverse_dyadic(a, level)?;
        curve.push((level, operator_norm(&(&partial - &exact))));
    }
    Ok(OperatorSeriesReport { partial, k_used: k, j_used: 0, error_curve: curve })
}

/// resolvent_dyadic at every K ≤ k with vector-norm errors against (A − iλ)⁻¹v.
pub fn resolvent_dyadic_report(
    a: &HermitianOperator,
    lambda: f64,
    k: usize,
    v: &Vector,
) -> Result<OperatorSeriesReport> {
    check_lambda(lambda)?;
    let exact = a.resolvent_exact(lambda)? * v;
    let mut curve = Vec::with_capacity(k + 1);
    let mut partial = exact.clone();
    for level in 0..=k {
        partial = resolvent_dyadic(a, lambda, level, v)?;
        curve.push((level, (&partial - &exact).norm()));
    }
    let n = partial.len();
    Ok(OperatorSeriesReport {
        partial: Matrix::from_column_slice(n, 1, partial.as_slice()),
        k_used: k,
        j_used: 0,
        error_curve: curve,
    })
}

/// The double-sum form with every inverse expanded as a Neumann series in
/// the group, truncated at J terms each:
/// i Σ_{j<J} e^{-jλ}U_j v − i Σ_k 2^{-k} Σ_{j<J} (−1)^j e^{-jλ/2^k} U_{j/2^k} v.
/// For fixed J the level sum stops converging once 2^k/λ exceeds J.
pub fn resolvent_double_sum(
    a: &HermitianOperator,
    lambda: f64,
    k: usize,
    j_terms: usize,
    v: &Vector,
) -> Result<OperatorSeriesReport> {
    check_lambda(lambda)?;
    check_levels(k)?;
    if a.dim() > DOUBLE_SUM_MAX_DIM || j_terms > DOUBLE_SUM_MAX_J || j_terms == 0 {
        return Err(Error::OutOfRange(format!(
            "double-sum demonstration limited to n ≤ {DOUBLE_SUM_MAX_DIM}, 1 ≤ J ≤ {DOUBLE_SUM_MAX_J}"
        )));
    }
    let exact = a.resolvent_exact(lambda)? * v;
    let i = Complex::new(0.0, 1.0);
    // Σ_{j<J} (±1)^j e^{-jλw} U_{jw} v as explicit products of U_w
    let neumann = |w: f64, alternate: bool| -> Vector {
        let step = a.evolution(w) * Complex::new((-lambda * w).exp(), 0.0);
        let mut term = v.clone();
        let mut acc = v.clone();
        for j in 1..j_terms {
            term = &step * term;
            if alternate && j % 2 == 1 {
                acc -= &term;
            } else {
                acc += &term;
            }
        }
        acc
    };
    let mut partial = neumann(1.0, false) * i;
    let mut curve = vec![(0, (&partial - &exact).norm())];
    let mut w = 1.0;
    for level in 1..=k {
        w *= 0.5;
        partial -= neumann(w, true) * (i * w);
        curve.push((level, (&partial - &exact).norm()));
    }
    let n = partial.len();
    Ok(OperatorSeriesReport {
        partial: Matrix::from_column_slice(n, 1, partial.as_slice()),
        k_used: k,
        j_used: j_terms,
        error_curve: curve,
    })
}

/// Plain-text matrix: first line n, then n rows of 2n numbers (re im interleaved).
pub fn matrix_to_text(m: &Matrix) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", m.nrows());
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| format!("{:.16e} {:.16e}", m[(r, c)].re, m[(r, c)].im)).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

pub fn matrix_from_text(text: &str) -> Result<Matrix> {
    let mut tokens = text.split_whitespace();
    let n: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?
        .parse()
        .map_err(|_| Error::Parse("first token must be the dimension".into()))?;
    if n == 0 || n > MAX_DIM {
        return Err(Error::Parse(format!("dimension {n} outside 1..={MAX_DIM}")));
    }
    let values: Vec<f64> = tokens
        .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{t}'"))))
        .collect::<Result<_>>()?;
    if values.len() != 2 * n * n {
        return Err(Error::Parse(format!(
            "expected {} numbers after the dimension, found {}",
            2 * n * n,
            values.len()
        )));
    }
    Ok(Matrix::from_fn(n, n, |r, c| {
        let i = 2 * (r * n + c);
        Complex::new(values[i], values[i + 1])
    }))
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    matrix_from_text(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(path: &Path, m: &Matrix) -> Result<()> {
    std::fs::write(path, matrix_to_text(m))?;
    Ok(())
}

/// Random Hermitian matrix with entries of unit scale, for tests and demos.
pub fn random_hermitian(n: usize, rng: &mut impl rand::Rng) -> Matrix {
    let mut m = Matrix::from_fn(n, n, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    m = (&m + m.adjoint()) * Complex::new(0.5, 0.0);
    m
}

/// Random unitary matrix (QR of a random complex matrix).
pub fn random_unitary(n: usize, rng: &mut impl rand::Rng) -> Matrix {
    let m = Matrix::from_fn(n, n, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    m.qr().q()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x5eed)
    }

    #[test]
    fn construction_invariants() {
        let mut r = rng();
        for n in [1usize, 5, 16, 64] {
            let a = HermitianOperator::new(random_hermitian(n, &mut r)).unwrap();
            assert!(a.unitarity_defect() < 1e-10);
            assert!(a.reconstruction_error() < 1e-9);
            assert!(a.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        }
        let mut m = random_hermitian(4, &mut r);
        m[(0, 1)] += c64(1e-3, 0.0);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
        assert!(HermitianOperator::new(Matrix::zeros(257, 257)).is_err());
    }

    #[test]
    fn evolution_examples() {
        let mut r = rng();
        let a = HermitianOperator::new(random_hermitian(8, &mut r)).unwrap();
        assert!(max_abs(&(a.evolution(0.0) - Matrix::identity(8, 8))) < 1e-12);
        let (s, t) = (0.37, 1.9);
        let lhs = a.evolution(s) * a.evolution(t);
        assert!(max_abs(&(lhs - a.evolution(s + t))) < 1e-10);
        let u = a.evolution(2.5);
        assert!(max_abs(&(u.adjoint() * &u - Matrix::identity(8, 8))) < 1e-10);
        let one = HermitianOperator::diagonal(&[0.8]).unwrap();
        assert!((one.evolution(2.0)[(0, 0)] - Complex::from_polar(1.0, -1.6)).norm() < 1e-15);
    }

    #[test]
    fn resolvent_examples() {
        let zero = HermitianOperator::diagonal(&[0.0]).unwrap();
        let e = Vector::from_element(1, c64(1.0, 0.0));
        let v = resolvent_dyadic(&zero, 1.0, 40, &e).unwrap();
        assert!((v[0] - c64(0.0, 1.0)).norm() < 1e-11);

        let d = HermitianOperator::diagonal(&[1.0, 2.0, 5.0]).unwrap();
        let e1 = Vector::from_fn(3, |i, _| if i == 0 { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
        let v = resolvent_dyadic(&d, 0.7, 45, &e1).unwrap();
        assert!((v[0] - c64(1.0, -0.7).inv()).norm() < 1e-12);
        assert!(v[1].norm() < 1e-15 && v[2].norm() < 1e-15);

        let mut r = rng();
        let a = HermitianOperator::new(random_hermitian(16, &mut r)).unwrap();
        let x = Vector::from_fn(16, |_, _| c64(rand::Rng::gen_range(&mut r, -1.0..1.0), 0.0)).normalize();
        let exact = a.entries().clone() - Matrix::identity(16, 16) * c64(0.0, 1.0);
        let direct = exact.lu().solve(&x).unwrap();
        let v = resolvent_dyadic(&a, 1.0, 40, &x).unwrap();
        assert!((v - direct).norm() <= 1e-6);

        let conj = resolvent_dyadic_conj(&d, 0.7, 45, &e1).unwrap();
        assert!((conj[0] - c64(1.0, 0.7).inv()).norm() < 1e-12);
        assert!(resolvent_dyadic(&d, 0.0, 3, &e1).is_err());
    }

    #[test]
    fn inverse_examples() {
        let one = HermitianOperator::diagonal(&[1.0]).unwrap();
        assert!((inverse_dyadic(&one, 40).unwrap()[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-10);
        let d = HermitianOperator::diagonal(&[0.5, 2.0, 8.0]).unwrap();
        let inv = inverse_dyadic(&d, 40).unwrap();
        for (i, want) in [2.0, 0.5, 0.125].iter().enumerate() {
            assert!((inv[(i, i)].re / want - 1.0).abs() < 1e-9);
        }
        let report = inverse_dyadic_report(&d, 32).unwrap();
        for s in &report.slopes()[10..30] {
            assert!((0.8..=1.2).contains(s), "{s}");
        }
        assert!(matches!(
            inverse_dyadic(&HermitianOperator::diagonal(&[-1.0, 2.0]).unwrap(), 3),
            Err(Error::NonPositiveSpectrum { .. })
        ));
        assert!(inverse_dyadic(&HermitianOperator::diagonal(&[1e-12, 2.0]).unwrap(), 3).is_err());
    }

    #[test]
    fn fractional_examples() {
        let pi = std::f64::consts::PI;
        let one = HermitianOperator::diagonal(&[1.0]).unwrap();
        assert!((fractional_power_dyadic(&one, 0.5, 60).unwrap()[(0, 0)].re / pi - 1.0).abs() < 1e-6);
        let d = HermitianOperator::diagonal(&[0.5, 2.0]).unwrap();
        let f = fractional_power_dyadic(&d, 0.5, 60).unwrap();
        assert!((f[(0, 0)].re / (pi * 0.5f64.powf(-0.5)) - 1.0).abs() < 1e-6);
        assert!((f[(1, 1)].re / (pi * 2f64.powf(-0.5)) - 1.0).abs() < 1e-6);
        assert!(fractional_power_dyadic(&d, 1.5, 10).is_err());
        assert!(fractional_power_dyadic(&d, -1.0, 10).is_err());
        assert!(fractional_power_dyadic(&HermitianOperator::diagonal(&[1e-4, 1.0]).unwrap(), 0.5, 10).is_err());
    }

    #[test]
    fn double_sum_plateaus_for_fixed_j() {
        let a = HermitianOperator::diagonal(&[0.3, 1.2]).unwrap();
        let v = Vector::from_element(2, c64(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let short = resolvent_double_sum(&a, 1.0, 20, 100, &v).unwrap();
        let long = resolvent_double_sum(&a, 1.0, 20, 1000, &v).unwrap();
        let spectral = resolvent_dyadic_report(&a, 1.0, 20, &v).unwrap();
        // for fixed J the error plateaus once 2^k outgrows J·λ; the spectral
        // form keeps halving
        let (s12, s20) = (short.error_curve[12].1, short.error_curve[20].1);
        assert!((s20 / s12 - 1.0).abs() < 0.05 && s20 > 1e-3, "{:?}", short.error_curve);
        assert!(long.error_curve[20].1 < 0.2 * s20);
        assert!(spectral.error_curve[20].1 < 1e-6);
        assert!(resolvent_double_sum(
            &HermitianOperator::diagonal(&[1.0; 9]).unwrap(),
            1.0,
            2,
            5,
            &Vector::from_element(9, c64(1.0, 0.0))
        )
        .is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut r = rng();
        let m = random_hermitian(5, &mut r);
        let back = matrix_from_text(&matrix_to_text(&m)).unwrap();
        assert_eq!(back, m);
        assert!(matrix_from_text("2\n1 0 0 0").is_err());
        assert!(matrix_from_text("x").is_err());
    }
}
