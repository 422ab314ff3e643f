//! Quadrature of the expansion coefficients
//!
//!   d_m    = ∫₀^∞ F(t) e^{t+1} / (e^{t+1} − 1)^m dt,
//!   d_km   = ∫₀^∞ e^{wt} F(t) / (e^{w(1+t)} + 1)^m dt,   w = 2^{-k},
//!   Ω_{K,j} = ∫₀^∞ F(t) θ^{(j)}((1+t) 2^{-K}) dt,
//!
//! with θ(u) = 1/(1 − e^{-u}) − 1/u, and their per-ν cache.

use super::kernel::{BorelKernel, P_MAX_EXTENDED};
use super::quad::integrate;
use crate::scalar::bernoulli_scaled;
use crate::{Complex, Error, Result};
use once_cell::sync::{Lazy, OnceCell};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

/// Relative accuracy requested from every coefficient quadrature.
pub const COEFFICIENT_TOL: f64 = 1e-13;
pub const TABLE_M: usize = 120;
pub const TABLE_K: usize = 4;
/// Closure integrals are tabulated for j < k + TABLE_CLOSURE.
pub const TABLE_CLOSURE: usize = 40;

const FORMAT_TAG: &str = "dyadic-coefficient-table";
const FORMAT_VERSION: u32 = 1;
// Grid used for the closure integrals, whose integrands decay only algebraically.
const OMEGA_P_MAX: f64 = 1e18;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::Domain(format!("coefficient index m must be at least 2, got {m}")));
    }
    Ok(())
}

/// d_m by adaptive quadrature.
pub fn compute_dm(kern: &BorelKernel, m: usize) -> Result<Estimate> {
    check_m(m)?;
    let mf = m as f64;
    let f = |t: f64| -> f64 {
        let u = t + 1.0;
        let w = (-(mf - 1.0) * u - mf * (-(-u).exp()).ln_1p()).exp();
        match kern.eval(t) {
            Ok(v) => v * w,
            Err(_) => f64::NAN,
        }
    };
    let end = truncation(kern.nu(), m as f64 - 1.0);
    if end > kern.p_max() {
        return Err(Error::OutOfRange(format!("d_{m} needs the kernel up to p = {end:.0}")));
    }
    let (value, error) = integrate(&f, 0.0, end, COEFFICIENT_TOL, 0.0)?;
    Ok(Estimate { value, error })
}

/// Point beyond which the d_km integrand is below about 1e-19 of its scale.
pub fn dkm_truncation(nu: f64, k: usize, m: usize) -> f64 {
    truncation(nu, (m as f64 - 1.0) * 0.5f64.powi(k as i32))
}

// Where F(t)·e^{-rate·t} has dropped by e^{-44}, allowing for the algebraic
// growth of F.
fn truncation(nu: f64, rate: f64) -> f64 {
    let growth = (nu.abs() - 0.5).max(0.0);
    let mut t: f64 = 44.0 / rate;
    for _ in 0..3 {
        t = (44.0 + growth * t.max(1.0).ln()) / rate;
    }
    t
}

/// d_km by adaptive quadrature. A kernel grid shorter than the required
/// truncation is extended up to P_MAX_EXTENDED; beyond that it is an error.
pub fn compute_dkm(kern: &BorelKernel, k: usize, m: usize) -> Result<Estimate> {
    check_m(m)?;
    if k == 0 {
        return Err(Error::Domain("level index k must be at least 1".into()));
    }
    let need = dkm_truncation(kern.nu(), k, m);
    let extended;
    let kern = if need <= kern.p_max() {
        kern
    } else if need <= P_MAX_EXTENDED {
        extended = kern.extended(P_MAX_EXTENDED)?;
        &extended
    } else {
        return Err(Error::OutOfRange(format!(
            "d_km for k = {k}, m = {m} needs the kernel up to p = {need:.0}, beyond {P_MAX_EXTENDED}"
        )));
    };
    let w = 0.5f64.powi(k as i32);
    let mf = m as f64;
    let f = |t: f64| -> f64 {
        let e = (-(mf - 1.0) * w * t - mf * w - mf * (-w * (1.0 + t)).exp().ln_1p()).exp();
        match kern.eval(t) {
            Ok(v) => v * e,
            Err(_) => f64::NAN,
        }
    };
    let (value, error) = integrate(&f, 0.0, need, COEFFICIENT_TOL, 0.0)?;
    Ok(Estimate { value, error })
}

/// j-th derivative of θ(u) = 1/(1 − e^{-u}) − 1/u for u > 0.
pub fn theta_derivative(j: usize, u: f64) -> f64 {
    let jf = j as f64;
    let fact: f64 = (1..=j).map(|i| i as f64).product();
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    if u > 40.0 + jf || (j <= 5 && u > 3.0) {
        // 1/(1 − e^{-u}) = Σ_{m≥0} e^{-mu}
        let mut s = if j == 0 { 1.0 } else { 0.0 };
        for m in 1..200 {
            let mf = m as f64;
            let t = sign * mf.powi(j as i32) * (-mf * u).exp();
            s += t;
            if t.abs() < 1e-18 * s.abs().max(1e-300) && mf * u > jf {
                break;
            }
        }
        return s - sign * fact / u.powi(j as i32 + 1);
    }
    if j <= 5 {
        // θ(u) = ½ + Σ_{n≥2} (B_n/n!) u^{n−1}
        let mut s = if j == 0 { 0.5 } else { 0.0 };
        for n in (j + 1).max(2)..200 {
            let b = bernoulli_scaled(n);
            if b == 0.0 {
                continue;
            }
            let falling: f64 = (n - j..n).map(|i| i as f64).product();
            let t = b * falling * u.powi((n - 1 - j) as i32);
            s += t;
            if t.abs() < 1e-18 * s.abs().max(1e-300) {
                break;
            }
        }
        return s;
    }
    // partial fractions: θ^{(j)}(u) = (−1)^j j! Σ_{n≠0} (u + 2πin)^{−j−1}
    const N: usize = 40;
    let mut s = Complex::new(0.0, 0.0);
    for n in 1..=N {
        s += Complex::new(u, 2.0 * PI * n as f64).powi(-(j as i32) - 1);
    }
    let edge = Complex::new(u, 2.0 * PI * (N as f64 + 0.5));
    s += edge.powi(-(j as i32)) / Complex::new(0.0, 2.0 * PI * jf);
    sign * fact * 2.0 * s.re
}

/// Ω_{K,j} on the kernel grid `kern`, which must reach far enough for the
/// algebraic tail (see `omega_kernel`).
pub fn compute_omega(kern: &BorelKernel, levels: usize, j: usize) -> Result<Estimate> {
    let w = 0.5f64.powi(levels as i32);
    // t = e^s − 1
    let f = |s: f64| -> f64 {
        let t = s.exp_m1();
        match kern.eval(t) {
            Ok(v) => v * theta_derivative(j, (1.0 + t) * w) * (1.0 + t),
            Err(_) => f64::NAN,
        }
    };
    let end = kern.p_max().ln_1p();
    // crude L1 size of the integrand, to give near-zero values an absolute floor
    let steps = (end * 8.0) as usize;
    let mag = (0..=steps).map(|i| f(i as f64 * end / steps as f64).abs()).sum::<f64>() * end / steps as f64;
    if !mag.is_finite() {
        return Err(Error::NonConvergence(format!("closure integrand ({levels}, {j}) not finite")));
    }
    let mut total = 0.0;
    let mut error = 0.0;
    let mut lo = 0.0;
    let mut len = 1.0;
    while lo < end {
        let hi = f64::min(lo + len, end);
        let (v, e) = integrate(&f, lo, hi, 1e-14, 1e-15 * mag)?;
        total += v;
        error += e;
        lo = hi;
        len *= 2.0;
    }
    // the integrand decays like e^{-rs} past the grid; add ∫_end^∞ ≈ f(end)/r
    let (f0, f1) = (f(end - 1.0), f(end));
    if f1 != 0.0 {
        let ratio = f0 / f1;
        if !(ratio > 1.0) {
            return Err(Error::OutOfRange(format!(
                "closure integrand ({levels}, {j}) not decaying at p = {:e}",
                kern.p_max()
            )));
        }
        let tail = f1 / ratio.ln();
        total += tail;
        error += 0.1 * tail.abs();
    }
    Ok(Estimate { value: total, error })
}

/// Kernel grid long enough for the closure integrals.
pub fn omega_kernel(nu: f64) -> Result<BorelKernel> {
    BorelKernel::with_p_max(nu, OMEGA_P_MAX)
}

/// Number of integrations by parts, ⌈|ν| + ½⌉.
pub fn parts_count(nu: f64) -> usize {
    ((nu.abs() + 0.5).ceil() as usize).max(1)
}

/// All coefficients the expansions of order ν use, with quadrature error
/// estimates per entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub nu: f64,
    pub m_max: usize,
    pub k_max: usize,
    pub j_max: usize,
    pub tolerance: f64,
    /// d_m, m = 2..=m_max
    d: Vec<Estimate>,
    /// d_km, row k−1, column m−2
    dk: Vec<Vec<Estimate>>,
    /// Ω_{K,j}, row K = 0..=k_max, column j = 0..=j_max (entries j < k unused)
    omega: Vec<Vec<Estimate>>,
}

impl CoefficientTable {
    pub fn build(nu: f64) -> Result<Self> {
        Self::build_with(nu, TABLE_M, TABLE_K)
    }

    pub fn build_with(nu: f64, m_max: usize, k_max: usize) -> Result<Self> {
        use rayon::prelude::*;
        if m_max < 2 {
            return Err(Error::Domain("m_max must be at least 2".into()));
        }
        let need = (1..=k_max).map(|k| dkm_truncation(nu, k, 2)).fold(0.0, f64::max);
        let kern = BorelKernel::with_p_max(nu, need.clamp(super::kernel::P_MAX_DEFAULT, P_MAX_EXTENDED))?;
        let d = (2..=m_max).into_par_iter().map(|m| compute_dm(&kern, m)).collect::<Result<Vec<_>>>()?;
        let dk = (1..=k_max)
            .map(|k| (2..=m_max).into_par_iter().map(|m| compute_dkm(&kern, k, m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let first = parts_count(nu);
        let j_max = first + TABLE_CLOSURE - 1;
        let big = omega_kernel(nu)?;
        let omega = (0..=k_max)
            .map(|levels| {
                (0..=j_max)
                    .into_par_iter()
                    .map(|j| {
                        if j < first {
                            Ok(Estimate { value: 0.0, error: 0.0 })
                        } else {
                            compute_omega(&big, levels, j)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CoefficientTable { nu, m_max, k_max, j_max, tolerance: COEFFICIENT_TOL, d, dk, omega })
    }

    pub fn d(&self, m: usize) -> Result<f64> {
        check_m(m)?;
        self.d
            .get(m - 2)
            .map(|e| e.value)
            .ok_or_else(|| Error::OutOfRange(format!("d_{m} beyond the table (m_max = {})", self.m_max)))
    }

    pub fn dk(&self, k: usize, m: usize) -> Result<f64> {
        check_m(m)?;
        if k == 0 || k > self.k_max {
            return Err(Error::OutOfRange(format!("level {k} outside the table (k_max = {})", self.k_max)));
        }
        self.dk[k - 1]
            .get(m - 2)
            .map(|e| e.value)
            .ok_or_else(|| Error::OutOfRange(format!("d_{k},{m} beyond the table (m_max = {})", self.m_max)))
    }

    pub fn omega(&self, levels: usize, j: usize) -> Result<f64> {
        self.omega
            .get(levels)
            .and_then(|row| row.get(j))
            .map(|e| e.value)
            .ok_or_else(|| Error::OutOfRange(format!("closure integral ({levels}, {j}) outside the table")))
    }

    /// Largest relative quadrature error over all entries.
    pub fn worst_relative_error(&self) -> f64 {
        self.d
            .iter()
            .chain(self.dk.iter().flatten())
            .chain(self.omega.iter().flatten())
            .filter(|e| e.value != 0.0)
            .map(|e| e.error / e.value.abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.d
            .iter()
            .chain(self.dk.iter().flatten())
            .chain(self.omega.iter().flatten())
            .all(|e| e.value.is_finite() && e.error.is_finite())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{FORMAT_TAG} {FORMAT_VERSION}");
        let _ = writeln!(s, "nu {:.16e}", self.nu);
        let _ = writeln!(s, "m_max {}", self.m_max);
        let _ = writeln!(s, "k_max {}", self.k_max);
        let _ = writeln!(s, "j_max {}", self.j_max);
        let _ = writeln!(s, "tolerance {:.16e}", self.tolerance);
        for (i, e) in self.d.iter().enumerate() {
            let _ = writeln!(s, "d {} {:.16e} {:.16e}", i + 2, e.value, e.error);
        }
        for (k, row) in self.dk.iter().enumerate() {
            for (i, e) in row.iter().enumerate() {
                let _ = writeln!(s, "dk {} {} {:.16e} {:.16e}", k + 1, i + 2, e.value, e.error);
            }
        }
        for (levels, row) in self.omega.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let _ = writeln!(s, "omega {levels} {j} {:.16e} {:.16e}", e.value, e.error);
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("coefficient table: {what}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head = lines.next().ok_or_else(|| bad("empty file"))?;
        let mut h = head.split_whitespace();
        if h.next() != Some(FORMAT_TAG) {
            return Err(bad("missing format tag"));
        }
        let version: u32 = h.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad("missing version"))?;
        if version != FORMAT_VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let mut field = |name: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| bad(&format!("missing {name}")))?;
            let mut it = line.split_whitespace();
            if it.next() != Some(name) {
                return Err(bad(&format!("expected {name}")));
            }
            it.next().map(str::to_string).ok_or_else(|| bad(&format!("missing {name} value")))
        };
        let num = |s: String| s.parse::<f64>().map_err(|_| bad(&format!("bad number {s}")));
        let int = |s: String| s.parse::<usize>().map_err(|_| bad(&format!("bad integer {s}")));
        let nu = num(field("nu")?)?;
        let m_max = int(field("m_max")?)?;
        let k_max = int(field("k_max")?)?;
        let j_max = int(field("j_max")?)?;
        let tolerance = num(field("tolerance")?)?;
        if m_max < 2 || m_max > 100_000 || k_max > 64 || j_max > 10_000 {
            return Err(bad("implausible dimensions"));
        }
        let blank = Estimate { value: f64::NAN, error: f64::NAN };
        let mut t = CoefficientTable {
            nu,
            m_max,
            k_max,
            j_max,
            tolerance,
            d: vec![blank; m_max - 1],
            dk: vec![vec![blank; m_max - 1]; k_max],
            omega: vec![vec![blank; j_max + 1]; k_max + 1],
        };
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let est = |a: &str, b: &str| -> Result<Estimate> {
                Ok(Estimate {
                    value: a.parse().map_err(|_| bad(&format!("bad value in '{line}'")))?,
                    error: b.parse().map_err(|_| bad(&format!("bad error in '{line}'")))?,
                })
            };
            let idx = |s: &str| s.parse::<usize>().map_err(|_| bad(&format!("bad index in '{line}'")));
            let slot = match parts.as_slice() {
                ["d", m, v, e] => {
                    let m = idx(m)?;
                    (m >= 2).then(|| t.d.get_mut(m - 2)).flatten().map(|s| (s, est(v, e)))
                }
                ["dk", k, m, v, e] => {
                    let (k, m) = (idx(k)?, idx(m)?);
                    (k >= 1 && m >= 2)
                        .then(|| t.dk.get_mut(k - 1).and_then(|r| r.get_mut(m - 2)))
                        .flatten()
                        .map(|s| (s, est(v, e)))
                }
                ["omega", l, j, v, e] => {
                    let (l, j) = (idx(l)?, idx(j)?);
                    t.omega.get_mut(l).and_then(|r| r.get_mut(j)).map(|s| (s, est(v, e)))
                }
                _ => return Err(bad(&format!("unrecognized line '{line}'"))),
            };
            let (s, e) = slot.ok_or_else(|| bad(&format!("index out of range in '{line}'")))?;
            *s = e?;
        }
        if !t.is_finite() {
            return Err(bad("missing or non-finite entries"));
        }
        Ok(t)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

type Slot = Arc<OnceCell<Arc<CoefficientTable>>>;

static TABLES: Lazy<Mutex<HashMap<u64, Slot>>> = Lazy::new(|| Mutex::new(HashMap::new()));
static CACHE_DIR: Lazy<Mutex<Option<PathBuf>>> = Lazy::new(|| Mutex::new(None));

/// Directory where tables are persisted between runs (None disables it).
pub fn set_cache_dir(dir: Option<PathBuf>) {
    *CACHE_DIR.lock().unwrap_or_else(|e| e.into_inner()) = dir;
}

fn cache_file(nu: f64) -> Option<PathBuf> {
    let dir = CACHE_DIR.lock().unwrap_or_else(|e| e.into_inner()).clone()?;
    Some(dir.join(format!("borel-table-{:016x}.txt", nu.to_bits())))
}

/// The shared table for order ν, built (or loaded from the cache directory)
/// once per process; concurrent callers for the same ν wait for one build.
pub fn coefficient_table(nu: f64) -> Result<Arc<CoefficientTable>> {
    let slot = {
        let mut map = TABLES.lock().unwrap_or_else(|e| e.into_inner());
        map.entry(nu.to_bits()).or_default().clone()
    };
    slot.get_or_try_init(|| {
        let file = cache_file(nu);
        if let Some(path) = &file {
            if let Ok(t) = CoefficientTable::load(path) {
                if t.nu.to_bits() == nu.to_bits() && t.m_max >= TABLE_M && t.k_max >= TABLE_K {
                    return Ok(Arc::new(t));
                }
            }
        }
        let t = CoefficientTable::build(nu)?;
        if let Some(path) = &file {
            // a failed write only costs a rebuild next time
            let _ = std::fs::create_dir_all(path.parent().unwrap_or(Path::new(".")));
            let _ = t.save(path);
        }
        Ok(Arc::new(t))
    })
    .cloned()
}
