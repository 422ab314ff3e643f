use dyadic_ffi::*;
use std::ffi::{c_char, CStr};
use std::path::Path;
use std::ptr;

fn c(re: f64, im: f64) -> DyadicComplex {
    DyadicComplex { re, im }
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        dyadic_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn scalar_functions() {
    let mut r = DyadicResult::default();
    unsafe {
        assert_eq!(dyadic_psi(c(1.0, 0.0), 1e-10, &mut r), DyadicStatus::Ok);
        assert!((r.value.re - 0.422_784_335_098_467_1).abs() < 1e-9);
        assert!(r.terms_total > 0);

        assert_eq!(dyadic_ei_stokes(c(5.0, 0.0), 1e-10, &mut r), DyadicStatus::Ok);
        assert!((r.value.im + std::f64::consts::PI * (-5f64).exp()).abs() < 1e-8);
        let plus = r.value;
        assert_eq!(dyadic_ei_stokes_minus(c(5.0, 0.0), 1e-10, &mut r), DyadicStatus::Ok);
        assert!((r.value.re - plus.re).abs() < 1e-9 && (r.value.im + plus.im).abs() < 1e-9);

        assert_eq!(dyadic_ei_left(c(1.0, 0.0), 1e-10, &mut r), DyadicStatus::Ok);
        assert!((r.value.re - 0.596_347_362_323_194_1).abs() < 1e-9);

        assert_eq!(dyadic_erfc(1.0, 1e-10, &mut r), DyadicStatus::Ok);
        assert!((r.value.re - 0.157_299_207_050_285_13).abs() < 1e-9);

        assert_eq!(dyadic_incomplete_gamma(0.5, c(1.0, 0.0), 1e-10, &mut r), DyadicStatus::Ok);
        assert!((r.value.re - 0.278_805_585_280_661_8).abs() < 1e-9);

        assert_eq!(dyadic_airy_ai(5.0, 1e-12, &mut r), DyadicStatus::Ok);
        assert!((r.value.re / 1.083_444_281_360_744e-4 - 1.0).abs() < 1e-9);

        assert_eq!(dyadic_bessel_k(0.5, 2.0, 1e-12, &mut r), DyadicStatus::Ok);
        let k_half = (std::f64::consts::PI / 4.0).sqrt() * (-2f64).exp();
        assert!((r.value.re / k_half - 1.0).abs() < 1e-12);
    }
}

#[test]
fn errors_and_messages() {
    let mut r = DyadicResult::default();
    unsafe {
        assert_eq!(dyadic_ei_stokes(c(0.01, -3.0), 1e-8, &mut r), DyadicStatus::CutProximity);
        assert!(last_error().contains("cut"));
        assert_eq!(dyadic_erfc(-1.0, 1e-8, &mut r), DyadicStatus::Domain);
        assert_eq!(dyadic_psi(c(1.0, 0.0), 1e-8, ptr::null_mut()), DyadicStatus::NullPointer);
        assert_eq!(last_error(), "null pointer argument");
        // truncation keeps the terminator
        let mut small = [1 as c_char; 5];
        let full = dyadic_last_error_message(small.as_mut_ptr(), small.len());
        assert_eq!(full, "null pointer argument".len());
        assert_eq!(CStr::from_ptr(small.as_ptr()).to_bytes(), b"null");
        assert!(!CStr::from_ptr(dyadic_version()).to_bytes().is_empty());
    }
}

#[test]
fn table_handle() {
    unsafe {
        let mut t: *mut DyadicTable = ptr::null_mut();
        assert_eq!(dyadic_table_new(0.5, &mut t), DyadicStatus::Ok);
        assert_eq!(dyadic_table_nu(t), 0.5);
        let mut r = DyadicResult::default();
        // h_{1/2} ≡ 1/x
        assert_eq!(dyadic_table_h(t, c(4.0, 0.0), 1e-12, &mut r), DyadicStatus::Ok);
        assert!((r.value.re - 0.25).abs() < 1e-14);
        dyadic_table_free(t);
        assert_eq!(dyadic_table_new(7.0, &mut t), DyadicStatus::Domain);
        assert_eq!(dyadic_table_h(ptr::null(), c(4.0, 0.0), 1e-12, &mut r), DyadicStatus::NullPointer);
        dyadic_table_free(ptr::null_mut());
    }
}

#[test]
fn operator_handle() {
    // [[2, i], [-i, 3]], eigenvalues (5 ∓ √5)/2
    let entries = [2.0, 0.0, 0.0, 1.0, 0.0, -1.0, 3.0, 0.0];
    unsafe {
        let mut op: *mut DyadicOperator = ptr::null_mut();
        assert_eq!(dyadic_operator_new(2, entries.as_ptr(), &mut op), DyadicStatus::Ok);
        assert_eq!(dyadic_operator_dim(op), 2);
        let mut ev = [0.0; 2];
        assert_eq!(dyadic_operator_eigenvalues(op, ev.as_mut_ptr()), DyadicStatus::Ok);
        assert!((ev[0] - (5.0 - 5f64.sqrt()) / 2.0).abs() < 1e-13);

        // A⁻¹ = [[3, -i], [i, 2]]/5
        let mut inv = [0.0; 8];
        assert_eq!(dyadic_operator_inverse(op, 40, inv.as_mut_ptr()), DyadicStatus::Ok);
        let want = [0.6, 0.0, 0.0, -0.2, 0.0, 0.2, 0.4, 0.0];
        for (a, b) in inv.iter().zip(want) {
            assert!((a - b).abs() < 1e-10, "{inv:?}");
        }

        // π A^{-1/2} from s = 1/2 against the inverse squared
        let mut half = [0.0; 8];
        assert_eq!(dyadic_operator_fractional_power(op, 0.5, 60, half.as_mut_ptr()), DyadicStatus::Ok);
        let m = |a: &[f64; 8], r: usize, k: usize| dyadic::c64(a[2 * (2 * r + k)], a[2 * (2 * r + k) + 1]);
        let pi2 = std::f64::consts::PI.powi(2);
        for r in 0..2 {
            for k in 0..2 {
                let sq = (0..2).map(|j| m(&half, r, j) * m(&half, j, k)).sum::<dyadic::Complex>() / pi2;
                assert!((sq - m(&inv, r, k)).norm() < 1e-8);
            }
        }

        // (A − i)⁻¹e₁ against a direct 2×2 solve
        let v = [1.0, 0.0, 0.0, 0.0];
        let mut out = [0.0; 4];
        assert_eq!(dyadic_operator_resolvent(op, 1.0, 40, v.as_ptr(), out.as_mut_ptr()), DyadicStatus::Ok);
        let i = dyadic::c64(0.0, 1.0);
        let (a, b, d) = (2.0 - i, i, 3.0 - i);
        let det = a * d - b * b.conj();
        let want = [d / det, -b.conj() / det];
        for (k, w) in want.iter().enumerate() {
            assert!((dyadic::c64(out[2 * k], out[2 * k + 1]) - w).norm() < 1e-9);
        }
        dyadic_operator_free(op);

        let bad = [1.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        assert_eq!(dyadic_operator_new(2, bad.as_ptr(), &mut op), DyadicStatus::NotHermitian);
        let indefinite = [-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        assert_eq!(dyadic_operator_new(2, indefinite.as_ptr(), &mut op), DyadicStatus::Ok);
        assert_eq!(dyadic_operator_inverse(op, 10, inv.as_mut_ptr()), DyadicStatus::NonPositiveSpectrum);
        dyadic_operator_free(op);
        assert_eq!(dyadic_operator_new(0, bad.as_ptr(), &mut op), DyadicStatus::Domain);
    }
}

#[test]
fn header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/dyadic.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in [
        "DyadicStatus dyadic_ei_stokes(",
        "dyadic_table_new(",
        "dyadic_table_free(",
        "dyadic_operator_resolvent(",
        "typedef struct DyadicTable DyadicTable;",
        "DYADIC_STATUS_NULL_POINTER = 10",
    ] {
        assert!(text.contains(sym), "missing {sym}");
    }
    // compiles as C when a compiler is present
    let Ok(status) =
        std::process::Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"]).arg(&header).status()
    else {
        return;
    };
    assert!(status.success());
}
