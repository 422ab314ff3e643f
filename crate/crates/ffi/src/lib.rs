//! C ABI for the `dyadic` library.
//!
//! Conventions:
//!
//! * Every fallible function returns a [`DyadicStatus`]; results go through
//!   out-pointers that are written only on success.
//! * Coefficient tables and Hermitian operators are opaque handles created by
//!   `*_new` and released by the matching `*_free`.
//! * The message of the last failure on the calling thread is available from
//!   [`dyadic_last_error_message`].
//! * Complex matrices and vectors are passed as interleaved (re, im) doubles,
//!   row-major.

use dyadic::borel::{airy_ai, bessel_k, coefficient_table, h_from_table, CoefficientTable};
use dyadic::operator::{fractional_power_dyadic, inverse_dyadic, resolvent_dyadic, HermitianOperator, Matrix, Vector};
use dyadic::special::{
    ei_left, ei_stokes, ei_stokes_minus, erfc_dyadic, incomplete_gamma_dyadic, psi_dyadic, EvalResult,
};
use dyadic::{Complex, Error};
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DyadicStatus {
    Ok = 0,
    Domain = 1,
    Pole = 2,
    CutProximity = 3,
    OutOfRange = 4,
    NonConvergence = 5,
    NotHermitian = 6,
    NonPositiveSpectrum = 7,
    Io = 8,
    Parse = 9,
    NullPointer = 10,
    Panic = 11,
}

impl From<&Error> for DyadicStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Pole { .. } | Error::SingularDenominator { .. } => DyadicStatus::Pole,
            Error::Domain(_) | Error::ZeroBeta => DyadicStatus::Domain,
            Error::CutProximity { .. } => DyadicStatus::CutProximity,
            Error::OutOfRange(_) => DyadicStatus::OutOfRange,
            Error::NonConvergence(_) => DyadicStatus::NonConvergence,
            Error::NotHermitian { .. } => DyadicStatus::NotHermitian,
            Error::NonPositiveSpectrum { .. } => DyadicStatus::NonPositiveSpectrum,
            Error::Io(_) => DyadicStatus::Io,
            Error::Parse(_) => DyadicStatus::Parse,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DyadicComplex {
    pub re: f64,
    pub im: f64,
}

/// Value of an evaluation with its error estimate and plan summary.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DyadicResult {
    pub value: DyadicComplex,
    pub error_estimate: f64,
    /// Factorial-series terms summed, closure terms included.
    pub terms_total: usize,
    /// Dyadic levels K of the plan.
    pub levels: usize,
}

impl From<&EvalResult> for DyadicResult {
    fn from(r: &EvalResult) -> Self {
        DyadicResult {
            value: DyadicComplex { re: r.value.re, im: r.value.im },
            error_estimate: r.error_estimate,
            terms_total: r.terms_with_closure(),
            levels: r.plan.levels,
        }
    }
}

/// Opaque coefficient table for one Bessel order.
pub struct DyadicTable {
    inner: Arc<CoefficientTable>,
}

/// Opaque Hermitian operator with its eigendecomposition.
pub struct DyadicOperator {
    inner: HermitianOperator,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Error>) -> DyadicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DyadicStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            DyadicStatus::from(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            DyadicStatus::Panic
        }
    }
}

// Null checks are reported as their own status rather than as domain errors.
macro_rules! require {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            set_error("null pointer argument".into());
            return DyadicStatus::NullPointer;
        })+
    };
}

unsafe fn write_result(out: *mut DyadicResult, r: Result<EvalResult, Error>) -> Result<(), Error> {
    let r = r?;
    *out = DyadicResult::from(&r);
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length.
///
/// # Safety
/// `buf` must be valid for `len` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn dyadic_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dyadic_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// e^{-x}Ei⁺(x).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dyadic_ei_stokes(x: DyadicComplex, tol: f64, out: *mut DyadicResult) -> DyadicStatus {
    require!(out);
    guard(|| write_result(out, ei_stokes(Complex::new(x.re, x.im), tol)))
}

/// e^{-x}Ei⁻(x).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dyadic_ei_stokes_minus(x: DyadicComplex, tol: f64, out: *mut DyadicResult) -> DyadicStatus {
    require!(out);
    guard(|| write_result(out, ei_stokes_minus(Complex::new(x.re, x.im), tol)))
}

/// e^{x}E₁(x).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dyadic_ei_left(x: DyadicComplex, tol: f64, out: *mut DyadicResult) -> DyadicStatus {
    require!(out);
    guard(|| write_result(out, ei_left(Complex::new(x.re, x.im), tol)))
}

/// Ψ(x+1).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dyadic_psi(x: DyadicComplex, tol: f64, out: *mut DyadicResult) -> DyadicStatus {
    require!(out);
    guard(|| write_result(out, psi_dyadic(Complex::new(x.re, x.im), tol)))
}

/// Γ(s, x) for s < 1 not an integer.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dyadic_incomplete_gamma(
    s: f64,
    x: DyadicComplex,
    tol: f64,
    out: *mut DyadicResult,
) -> DyadicStatus {
    require!(out);
    guard(|| write_result(out, incomplete_gamma_dyadic(s, Complex::new(x.re, x.im), tol)))
}

/// erfc(√x) for x > 0.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dyadic_erfc(x: f64, tol: f64, out: *mut DyadicResult) -> DyadicStatus {
    require!(out);
    guard(|| write_result(out, erfc_dyadic(x, tol)))
}

/// Ai(x) for real x past the turning region.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dyadic_airy_ai(x: f64, tol: f64, out: *mut DyadicResult) -> DyadicStatus {
    require!(out);
    guard(|| write_result(out, airy_ai(x, tol)))
}

/// K_ν(z) for real z, |ν| ≤ 5.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dyadic_bessel_k(nu: f64, z: f64, tol: f64, out: *mut DyadicResult) -> DyadicStatus {
    require!(out);
    guard(|| write_result(out, bessel_k(nu, z, tol)))
}

/// Builds (or fetches from the process cache) the coefficient table of order ν.
///
/// # Safety
/// `out` must be valid for writes; the handle must be released with
/// [`dyadic_table_free`].
#[no_mangle]
pub unsafe extern "C" fn dyadic_table_new(nu: f64, out: *mut *mut DyadicTable) -> DyadicStatus {
    require!(out);
    guard(|| {
        let inner = coefficient_table(nu)?;
        *out = Box::into_raw(Box::new(DyadicTable { inner }));
        Ok(())
    })
}

/// # Safety
/// `table` must come from [`dyadic_table_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dyadic_table_free(table: *mut DyadicTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Order ν of a table.
///
/// # Safety
/// `table` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dyadic_table_nu(table: *const DyadicTable) -> f64 {
    table.as_ref().map_or(f64::NAN, |t| t.inner.nu)
}

/// The Borel sum h_ν(x) for Re x > 0 from a table.
///
/// # Safety
/// `table` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dyadic_table_h(
    table: *const DyadicTable,
    x: DyadicComplex,
    tol: f64,
    out: *mut DyadicResult,
) -> DyadicStatus {
    require!(table, out);
    let t = &*table;
    guard(|| write_result(out, h_from_table(&t.inner, Complex::new(x.re, x.im), tol)))
}

unsafe fn read_complex(ptr: *const f64, count: usize) -> Vec<Complex> {
    let s = std::slice::from_raw_parts(ptr, 2 * count);
    s.chunks_exact(2).map(|c| Complex::new(c[0], c[1])).collect()
}

unsafe fn write_complex(ptr: *mut f64, values: impl Iterator<Item = Complex>) {
    for (i, v) in values.enumerate() {
        *ptr.add(2 * i) = v.re;
        *ptr.add(2 * i + 1) = v.im;
    }
}

// row-major interleaved output
unsafe fn write_matrix(ptr: *mut f64, m: &Matrix) {
    let n = m.nrows();
    write_complex(ptr, (0..n * n).map(|i| m[(i / n, i % n)]));
}

/// Creates an operator from an n×n Hermitian matrix given as 2n² doubles.
///
/// # Safety
/// `entries` must hold 2n² doubles; `out` must be valid for writes. Release
/// the handle with [`dyadic_operator_free`].
#[no_mangle]
pub unsafe extern "C" fn dyadic_operator_new(
    n: usize,
    entries: *const f64,
    out: *mut *mut DyadicOperator,
) -> DyadicStatus {
    require!(entries, out);
    guard(|| {
        if n == 0 || n > dyadic::operator::MAX_DIM {
            return Err(Error::Domain(format!("dimension {n} outside 1..={}", dyadic::operator::MAX_DIM)));
        }
        let values = read_complex(entries, n * n);
        let m = Matrix::from_fn(n, n, |r, c| values[r * n + c]);
        let inner = HermitianOperator::new(m)?;
        *out = Box::into_raw(Box::new(DyadicOperator { inner }));
        Ok(())
    })
}

/// # Safety
/// `op` must come from [`dyadic_operator_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dyadic_operator_free(op: *mut DyadicOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Dimension of an operator (0 for null).
///
/// # Safety
/// `op` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn dyadic_operator_dim(op: *const DyadicOperator) -> usize {
    op.as_ref().map_or(0, |o| o.inner.dim())
}

/// Eigenvalues in ascending order into `out` (n doubles).
///
/// # Safety
/// `op` must be a live handle and `out` valid for n doubles.
#[no_mangle]
pub unsafe extern "C" fn dyadic_operator_eigenvalues(op: *const DyadicOperator, out: *mut f64) -> DyadicStatus {
    require!(op, out);
    let ev = (*op).inner.eigenvalues();
    std::ptr::copy_nonoverlapping(ev.as_ptr(), out, ev.len());
    DyadicStatus::Ok
}

/// Dyadic series for (A − iλ)⁻¹v with K levels; v and out hold 2n doubles.
///
/// # Safety
/// `op` must be a live handle; `v` and `out` valid for 2n doubles.
#[no_mangle]
pub unsafe extern "C" fn dyadic_operator_resolvent(
    op: *const DyadicOperator,
    lambda: f64,
    levels: usize,
    v: *const f64,
    out: *mut f64,
) -> DyadicStatus {
    require!(op, v, out);
    let a = &(*op).inner;
    guard(|| {
        let v = Vector::from_vec(read_complex(v, a.dim()));
        let r = resolvent_dyadic(a, lambda, levels, &v)?;
        write_complex(out, r.iter().copied());
        Ok(())
    })
}

/// Dyadic series for A⁻¹ (positive spectrum) into `out` (2n² doubles).
///
/// # Safety
/// `op` must be a live handle and `out` valid for 2n² doubles.
#[no_mangle]
pub unsafe extern "C" fn dyadic_operator_inverse(
    op: *const DyadicOperator,
    levels: usize,
    out: *mut f64,
) -> DyadicStatus {
    require!(op, out);
    guard(|| {
        let m = inverse_dyadic(&(*op).inner, levels)?;
        write_matrix(out, &m);
        Ok(())
    })
}

/// Dyadic series for πA^{s−1} into `out` (2n² doubles).
///
/// # Safety
/// `op` must be a live handle and `out` valid for 2n² doubles.
#[no_mangle]
pub unsafe extern "C" fn dyadic_operator_fractional_power(
    op: *const DyadicOperator,
    s: f64,
    levels: usize,
    out: *mut f64,
) -> DyadicStatus {
    require!(op, out);
    guard(|| {
        let m = fractional_power_dyadic(&(*op).inner, s, levels)?;
        write_matrix(out, &m);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(DyadicStatus::from(&Error::NonConvergence(String::new())), DyadicStatus::NonConvergence);
        assert_eq!(DyadicStatus::from(&Error::ZeroBeta), DyadicStatus::Domain);
    }
}
