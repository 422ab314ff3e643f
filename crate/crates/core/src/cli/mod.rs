//! Command-line front end: evaluation over grids, truncation plans, figure
//! datasets, method comparisons and the operator identities.
//!
//! Every command produces a [`Table`], rendered as CSV (17 significant
//! digits, header row) or as a JSON array of row objects.

use crate::borel::{airy_ai, bessel_k, set_cache_dir};
use crate::dyadic::{DyadicPlan, Family};
use crate::operator::{
    fractional_power_dyadic, inverse_dyadic_report, random_hermitian, random_unitary, read_matrix,
    resolvent_dyadic_report, HermitianOperator, Matrix, Vector,
};
use crate::oracle::{
    airy_reference, bessel_k_reference, ei_left_reference, ei_plus_reference, erfc_reference, inc_gamma_reference,
    psi_reference,
};
use crate::scalar::{factorial_series_eval, EiLeftClassicalStream};
use crate::special::{
    ei_left, ei_stokes, ei_stokes_minus, ei_stokes_with, erfc_dyadic, evaluate_with_plan, incomplete_gamma_dyadic,
    psi_dyadic, EiStokesOptions, EvalResult, SeriesTerms,
};
use crate::{c64, Complex, Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::PathBuf;

const COLUMNS_HELP: &str = "\
CSV columns:
  eval      x_re,x_im,value_re,value_im,error_estimate,terms_total
            (+ oracle_re,oracle_im,abs_error with --with-oracle)
  plan      x_re,x_im,levels,n_terms,closure_terms,predicted_error,terms_total
  figure    fig-terms:  m,series_0,...,series_4
            fig-errors: x,value_re,value_im,oracle_re,oracle_im,abs_error,terms_total
            fig-stokes: t,im_right,im_left,abs_right,abs_left
            fig-airy:   x,ai,oracle,rel_error,terms_total,closure_terms
  compare   method,terms,error,note
  operator  level,error,log2_ratio
Exit codes: 0 success, 2 domain error, 3 no convergence, 4 i/o.";

#[derive(Debug, Parser)]
#[command(name = "dyadic", version, about = "Dyadic factorial-series evaluation of special functions", after_help = COLUMNS_HELP)]
pub struct Cli {
    /// Directory for cached Airy/Bessel coefficient tables.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a function over a grid on a ray.
    Eval(EvalArgs),
    /// Print the truncation plan chosen at each grid point.
    Plan(EvalArgs),
    /// Emit a figure dataset.
    Figure(FigureArgs),
    /// Terms needed by the dyadic, classical factorial and asymptotic series.
    Compare(CompareArgs),
    /// Error curves of the operator identities on a Hermitian matrix.
    Operator(OperatorArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    /// e^{-x}Ei⁺(x)
    EiStokes,
    /// e^{-x}Ei⁻(x)
    EiStokesMinus,
    /// e^{x}E₁(x)
    EiLeft,
    /// Ψ(x+1)
    Psi,
    /// Γ(s, x), order from --s
    IncGamma,
    /// erfc(√x)
    Erfc,
    /// Ai(x)
    Airy,
    /// K_ν(x), order from --nu
    BesselK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub function: Function,
    /// Modulus of the first grid point.
    #[arg(long)]
    pub x_start: f64,
    /// Modulus of the last grid point (defaults to --x-start).
    #[arg(long)]
    pub x_stop: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub points: usize,
    /// Direction of the ray in degrees.
    #[arg(long, default_value_t = 0.0)]
    pub ray_angle: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Add oracle values and the absolute difference.
    #[arg(long)]
    pub with_oracle: bool,
    /// Order of the incomplete gamma function.
    #[arg(long)]
    pub s: Option<f64>,
    /// Order of K_ν.
    #[arg(long)]
    pub nu: Option<f64>,
    /// Explicit term counts per series, e.g. 10,5,3 (Ei and Ψ only).
    #[arg(long, value_delimiter = ',')]
    pub plan: Option<Vec<usize>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    FigTerms,
    FigErrors,
    FigStokes,
    FigAiry,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub figure: FigureId,
    /// Evaluation point of fig-terms.
    #[arg(long, default_value_t = 5.0)]
    pub x: f64,
    /// Number of grid points (terms per series for fig-terms).
    #[arg(long)]
    pub points: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct CompareArgs {
    #[arg(long, value_enum)]
    pub function: Function,
    #[arg(long)]
    pub x: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Resolvent,
    Inverse,
    Power,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct OperatorArgs {
    /// Matrix file: dimension, then rows of interleaved re/im pairs.
    #[arg(long, conflicts_with = "random")]
    pub matrix: Option<PathBuf>,
    /// Use a seeded random Hermitian matrix of this size instead.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// With --random: eigenvalues drawn uniformly from LO,HI instead of a
    /// matrix with unit-scale entries.
    #[arg(long, value_delimiter = ',', value_name = "LO,HI")]
    pub spectrum: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = Mode::Resolvent)]
    pub mode: Mode,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Exponent for --mode power.
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    /// Number of dyadic levels K.
    #[arg(long, default_value_t = 40)]
    pub levels: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// One output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, serde_json::Value::Number),
            Cell::Int(n) => (*n).into(),
            Cell::Text(s) => s.clone().into(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(n) => Some(*n as f64),
            Cell::Text(s) => s.parse().ok(),
        }
    }
}

/// Rows under a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    /// Column by name as numbers.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj = self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).unwrap_or_default();
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 1e-14 && tol < 1e-1) {
        return Err(Error::Domain(format!("tolerance {tol:e} outside (1e-14, 1e-1)")));
    }
    Ok(())
}

/// Grid points r·e^{iθ} with r evenly spaced from start to stop.
pub fn grid(start: f64, stop: f64, points: usize, angle_deg: f64) -> Result<Vec<Complex>> {
    if points == 0 {
        return Err(Error::Domain("--points must be at least 1".into()));
    }
    if !start.is_finite() || !stop.is_finite() || !angle_deg.is_finite() {
        return Err(Error::Domain("grid bounds and angle must be finite".into()));
    }
    let dir = Complex::from_polar(1.0, angle_deg.to_radians());
    Ok((0..points)
        .map(|i| {
            let r = if points == 1 { start } else { start + (stop - start) * i as f64 / (points - 1) as f64 };
            // keep real grids exactly real
            if angle_deg == 0.0 {
                c64(r, 0.0)
            } else {
                dir * r
            }
        })
        .collect())
}

fn real_arg(x: Complex, what: &str) -> Result<f64> {
    if x.im != 0.0 {
        return Err(Error::Domain(format!("{what} is implemented for real x only, got {x}")));
    }
    Ok(x.re)
}

fn required(v: Option<f64>, flag: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Domain(format!("{flag} is required for this function")))
}

fn family(f: Function) -> Option<Family> {
    match f {
        Function::EiStokes => Some(Family::EiStokes),
        Function::EiLeft => Some(Family::EiLeft),
        Function::Psi => Some(Family::Psi),
        _ => None,
    }
}

/// Evaluates `args.function` at x.
pub fn evaluate(args: &EvalArgs, x: Complex) -> Result<EvalResult> {
    if let Some(plan) = &args.plan {
        let fam = family(args.function)
            .ok_or_else(|| Error::Domain("--plan applies to ei-stokes, ei-left and psi only".into()))?;
        return evaluate_with_plan(fam, x, &DyadicPlan::fixed(plan.clone())?);
    }
    let tol = args.tol;
    match args.function {
        Function::EiStokes => ei_stokes(x, tol),
        Function::EiStokesMinus => ei_stokes_minus(x, tol),
        Function::EiLeft => ei_left(x, tol),
        Function::Psi => psi_dyadic(x, tol),
        Function::IncGamma => incomplete_gamma_dyadic(required(args.s, "--s")?, x, tol),
        Function::Erfc => erfc_dyadic(real_arg(x, "erfc")?, tol),
        Function::Airy => airy_ai(real_arg(x, "airy")?, tol),
        Function::BesselK => bessel_k(required(args.nu, "--nu")?, real_arg(x, "bessel-k")?, tol),
    }
}

/// Reference value from the oracle module.
pub fn oracle(args: &EvalArgs, x: Complex) -> Result<Complex> {
    let re = |v: f64| c64(v, 0.0);
    match args.function {
        Function::EiStokes => ei_plus_reference(x),
        Function::EiStokesMinus => Ok(ei_plus_reference(x.conj())?.conj()),
        Function::EiLeft => ei_left_reference(x),
        Function::Psi => psi_reference(x + 1.0),
        Function::IncGamma => inc_gamma_reference(required(args.s, "--s")?, x),
        Function::Erfc => Ok(re(erfc_reference(real_arg(x, "erfc")?.sqrt()))),
        Function::Airy => Ok(re(airy_reference(real_arg(x, "airy")?)?)),
        Function::BesselK => Ok(re(bessel_k_reference(required(args.nu, "--nu")?, real_arg(x, "bessel-k")?)?)),
    }
}

// Adds the offending point to messages that do not carry it already.
fn at_point(e: Error, x: Complex) -> Error {
    match e {
        Error::Domain(s) => Error::Domain(format!("at x = {x}: {s}")),
        Error::OutOfRange(s) => Error::OutOfRange(format!("at x = {x}: {s}")),
        Error::NonConvergence(s) => Error::NonConvergence(format!("at x = {x}: {s}")),
        other => other,
    }
}

fn eval_points(args: &EvalArgs) -> Result<Vec<(Complex, EvalResult)>> {
    check_tol(args.tol)?;
    let xs = grid(args.x_start, args.x_stop.unwrap_or(args.x_start), args.points, args.ray_angle)?;
    // evaluated concurrently, collected in grid order
    xs.par_iter().map(|&x| evaluate(args, x).map(|r| (x, r)).map_err(|e| at_point(e, x))).collect()
}

pub fn cmd_eval(args: &EvalArgs) -> Result<Table> {
    let points = eval_points(args)?;
    let mut cols = vec!["x_re", "x_im", "value_re", "value_im", "error_estimate", "terms_total"];
    if args.with_oracle {
        cols.extend(["oracle_re", "oracle_im", "abs_error"]);
    }
    let mut t = Table::new(&cols);
    let oracles: Vec<Option<Complex>> = if args.with_oracle {
        points
            .par_iter()
            .map(|(x, _)| oracle(args, *x).map(Some).map_err(|e| at_point(e, *x)))
            .collect::<Result<_>>()?
    } else {
        vec![None; points.len()]
    };
    for ((x, r), o) in points.iter().zip(oracles) {
        let mut row = vec![
            Cell::Num(x.re),
            Cell::Num(x.im),
            Cell::Num(r.value.re),
            Cell::Num(r.value.im),
            Cell::Num(r.error_estimate),
            Cell::Int(r.terms_with_closure()),
        ];
        if let Some(o) = o {
            row.extend([Cell::Num(o.re), Cell::Num(o.im), Cell::Num((r.value - o).norm())]);
        }
        t.rows.push(row);
    }
    Ok(t)
}

pub fn cmd_plan(args: &EvalArgs) -> Result<Table> {
    let points = eval_points(args)?;
    let mut t = Table::new(&["x_re", "x_im", "levels", "n_terms", "closure_terms", "predicted_error", "terms_total"]);
    for (x, r) in points {
        let counts: Vec<String> = r.plan.n_terms.iter().map(|n| n.to_string()).collect();
        t.rows.push(vec![
            Cell::Num(x.re),
            Cell::Num(x.im),
            Cell::Int(r.plan.levels),
            Cell::Text(counts.join(";")),
            Cell::Int(r.closure_terms),
            Cell::Num(r.plan.predicted_error),
            Cell::Int(r.terms_with_closure()),
        ]);
    }
    Ok(t)
}

/// Cut margin used for the fig-stokes lines, which pass within 0.3 of the cut.
pub const STOKES_FIGURE_MARGIN: f64 = 0.01;
/// Offset of the fig-stokes lines from the cut.
pub const STOKES_FIGURE_OFFSET: f64 = 0.3;

/// Magnitudes of the first `terms` terms of the Ei-Stokes series 0..=4 at x.
pub fn figure_terms(x: f64, terms: usize) -> Result<Table> {
    let mut t = Table::new(&["m", "series_0", "series_1", "series_2", "series_3", "series_4"]);
    let z = c64(x, 0.0);
    Family::EiStokes.check_cut(z, 0.0)?;
    let series: Vec<Vec<f64>> = (0..5)
        .map(|k| SeriesTerms::new(Family::EiStokes, z, k).take(terms).map(|c| c.map(|c| c.norm())).collect())
        .collect::<Result<_>>()?;
    for m in 0..terms {
        let mut row = vec![Cell::Int(m + 1)];
        row.extend(series.iter().map(|s| Cell::Num(s[m])));
        t.rows.push(row);
    }
    Ok(t)
}

/// e^{-x}Ei⁺(x) against the oracle over [1, 14] at tolerance 1e-8.
pub fn figure_errors(points: usize) -> Result<Table> {
    let xs = grid(1.0, 14.0, points, 0.0)?;
    let rows: Vec<Vec<Cell>> = xs
        .par_iter()
        .map(|&x| {
            let r = ei_stokes(x, 1e-8).map_err(|e| at_point(e, x))?;
            let o = ei_plus_reference(x)?;
            Ok(vec![
                Cell::Num(x.re),
                Cell::Num(r.value.re),
                Cell::Num(r.value.im),
                Cell::Num(o.re),
                Cell::Num(o.im),
                Cell::Num((r.value - o).norm()),
                Cell::Int(r.terms_total),
            ])
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&["x", "value_re", "value_im", "oracle_re", "oracle_im", "abs_error", "terms_total"]);
    t.rows = rows;
    Ok(t)
}

/// e^{-x}Ei⁺(x) on the lines x = ±0.3 − it, t ∈ [1, 10], on either side of the cut.
pub fn figure_stokes(points: usize) -> Result<Table> {
    let ts = grid(1.0, 10.0, points, 0.0)?;
    let opts = EiStokesOptions { cut_margin: STOKES_FIGURE_MARGIN };
    let rows: Vec<Vec<Cell>> = ts
        .par_iter()
        .map(|t| {
            let t = t.re;
            let right = ei_stokes_with(c64(STOKES_FIGURE_OFFSET, -t), 1e-10, opts)?.value;
            let left = ei_stokes_with(c64(-STOKES_FIGURE_OFFSET, -t), 1e-10, opts)?.value;
            Ok(vec![
                Cell::Num(t),
                Cell::Num(right.im),
                Cell::Num(left.im),
                Cell::Num(right.norm()),
                Cell::Num(left.norm()),
            ])
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&["t", "im_right", "im_left", "abs_right", "abs_left"]);
    t.rows = rows;
    Ok(t)
}

/// Relative error of Ai over [1, 20] against the oracle.
pub fn figure_airy(points: usize) -> Result<Table> {
    let xs = grid(1.0, 20.0, points, 0.0)?;
    let rows: Vec<Vec<Cell>> = xs
        .iter()
        .map(|x| {
            let x = x.re;
            let r = airy_ai(x, crate::borel::DEFAULT_TOL)?;
            let o = airy_reference(x)?;
            Ok(vec![
                Cell::Num(x),
                Cell::Num(r.value.re),
                Cell::Num(o),
                Cell::Num((r.value.re / o - 1.0).abs()),
                Cell::Int(r.terms_total),
                Cell::Int(r.closure_terms),
            ])
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&["x", "ai", "oracle", "rel_error", "terms_total", "closure_terms"]);
    t.rows = rows;
    Ok(t)
}

pub fn cmd_figure(args: &FigureArgs) -> Result<Table> {
    match args.figure {
        FigureId::FigTerms => figure_terms(args.x, args.points.unwrap_or(40)),
        FigureId::FigErrors => figure_errors(args.points.unwrap_or(100)),
        FigureId::FigStokes => figure_stokes(args.points.unwrap_or(100)),
        FigureId::FigAiry => figure_airy(args.points.unwrap_or(77)),
    }
}

const CLASSICAL_MAX_TERMS: usize = 4000;

/// Terms of the optimally truncated series Σ(∓1)ⁿn!/x^{n+1} and its best error.
fn asymptotic_floor(x: f64, alternating: bool, reference: Complex, tol: f64) -> (usize, f64, bool) {
    let mut term = 1.0 / x;
    let mut sum = 0.0;
    let mut best = (0usize, f64::INFINITY);
    let mut n = 0usize;
    loop {
        sum += term;
        n += 1;
        let err = (c64(sum, 0.0) - reference).norm();
        if err < best.1 {
            best = (n, err);
        }
        if err <= tol {
            return (n, err, true);
        }
        let next = term * n as f64 / x * if alternating { -1.0 } else { 1.0 };
        if next.abs() >= term.abs() {
            return (best.0, best.1, false);
        }
        term = next;
    }
}

pub fn cmd_compare(args: &CompareArgs) -> Result<Table> {
    check_tol(args.tol)?;
    let x = c64(args.x, 0.0);
    let mut t = Table::new(&["method", "terms", "error", "note"]);
    let (dyadic, reference) = match args.function {
        Function::EiLeft => (ei_left(x, args.tol)?, ei_left_reference(x)?),
        Function::EiStokes => (ei_stokes(x, args.tol)?, ei_plus_reference(x)?),
        other => {
            return Err(Error::Domain(format!(
                "compare supports ei-left and ei-stokes, not {}",
                other.to_possible_value().map_or("this function".into(), |v| v.get_name().to_string())
            )))
        }
    };
    t.rows.push(vec![
        Cell::Text("dyadic".into()),
        Cell::Int(dyadic.terms_total),
        Cell::Num((dyadic.value - reference).norm()),
        Cell::Text(format!("levels = {}", dyadic.plan.levels)),
    ]);
    match args.function {
        Function::EiLeft => {
            let stream = EiLeftClassicalStream::new(CLASSICAL_MAX_TERMS);
            let mut found = None;
            let mut last = f64::INFINITY;
            // partial sums are cheap to extend one term at a time by doubling
            let mut n = 1;
            while n <= CLASSICAL_MAX_TERMS {
                last = (factorial_series_eval(&stream, x, n)? - reference).norm();
                if last <= args.tol {
                    found = Some(n);
                    break;
                }
                n = if n < 64 { n + 1 } else { n + n / 8 };
            }
            let (terms, note) = match found {
                Some(hi) => {
                    // refine between the last miss and the hit
                    let mut lo = hi.saturating_sub((hi / 9).max(1));
                    let mut hi = hi;
                    while hi - lo > 1 {
                        let mid = (lo + hi) / 2;
                        if (factorial_series_eval(&stream, x, mid)? - reference).norm() <= args.tol {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    last = (factorial_series_eval(&stream, x, hi)? - reference).norm();
                    (hi, "convergent in Re x > 0".to_string())
                }
                None => (CLASSICAL_MAX_TERMS, format!("tolerance not reached in {CLASSICAL_MAX_TERMS} terms")),
            };
            t.rows.push(vec![
                Cell::Text("classical-factorial".into()),
                Cell::Int(terms),
                Cell::Num(last),
                Cell::Text(note),
            ]);
        }
        _ => t.rows.push(vec![
            Cell::Text("classical-factorial".into()),
            Cell::Int(0),
            Cell::Num(f64::NAN),
            Cell::Text("divergent/no half-plane: classical factorial series do not cross the Stokes ray".into()),
        ]),
    }
    let alternating = args.function == Function::EiLeft;
    let (n, err, reached) = asymptotic_floor(args.x, alternating, reference, args.tol);
    let note = if reached {
        "tolerance reached before the smallest term".to_string()
    } else {
        format!("optimal truncation floor; e^(-x) = {:.3e}", (-args.x).exp())
    };
    t.rows.push(vec![Cell::Text("asymptotic".into()), Cell::Int(n), Cell::Num(err), Cell::Text(note)]);
    Ok(t)
}

/// U·diag(λ)·U* with λ uniform in [lo, hi] and U Haar-random.
pub fn random_with_spectrum(n: usize, lo: f64, hi: f64, rng: &mut impl rand::Rng) -> Result<Matrix> {
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!("bad spectrum bounds [{lo}, {hi}]")));
    }
    let u = random_unitary(n, rng);
    let d = Matrix::from_diagonal(&Vector::from_fn(n, |_, _| c64(rng.gen_range(lo..=hi), 0.0)));
    Ok(&u * d * u.adjoint())
}

fn load_operator(args: &OperatorArgs) -> Result<(HermitianOperator, ChaCha8Rng)> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let m: Matrix = match (&args.matrix, args.random) {
        (Some(path), _) => read_matrix(path)?,
        (None, Some(n)) if (1..=crate::operator::MAX_DIM).contains(&n) => match &args.spectrum {
            Some(b) if b.len() == 2 => random_with_spectrum(n, b[0], b[1], &mut rng)?,
            Some(_) => return Err(Error::Domain("--spectrum takes two values LO,HI".into())),
            None => random_hermitian(n, &mut rng),
        },
        (None, Some(n)) => return Err(Error::Domain(format!("--random {n} outside 1..={}", crate::operator::MAX_DIM))),
        (None, None) => return Err(Error::Domain("either --matrix or --random is required".into())),
    };
    Ok((HermitianOperator::new(m)?, rng))
}

pub fn cmd_operator(args: &OperatorArgs) -> Result<Table> {
    let (a, mut rng) = load_operator(args)?;
    let curve: Vec<(usize, f64)> = match args.mode {
        Mode::Resolvent => {
            let v = Vector::from_fn(a.dim(), |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let v = &v / c64(v.norm(), 0.0);
            resolvent_dyadic_report(&a, args.lambda, args.levels, &v)?.error_curve
        }
        Mode::Inverse => inverse_dyadic_report(&a, args.levels)?.error_curve,
        Mode::Power => {
            let exact = a.apply_fn(|l| Ok(c64(std::f64::consts::PI * l.powf(args.s - 1.0), 0.0)))?;
            let scale = exact.norm();
            (0..=args.levels)
                .map(|k| Ok((k, (fractional_power_dyadic(&a, args.s, k)? - &exact).norm() / scale)))
                .collect::<Result<_>>()?
        }
    };
    let mut t = Table::new(&["level", "error", "log2_ratio"]);
    let mut prev: Option<f64> = None;
    for (k, e) in curve {
        let slope = prev.map_or(f64::NAN, |p| (p / e).log2());
        t.rows.push(vec![Cell::Int(k), Cell::Num(e), Cell::Num(slope)]);
        prev = Some(e);
    }
    Ok(t)
}

/// Runs a parsed command and returns the rendered output.
pub fn run(cli: &Cli) -> Result<String> {
    if let Some(dir) = &cli.cache_dir {
        std::fs::create_dir_all(dir)?;
        set_cache_dir(Some(dir.clone()));
    }
    let (table, output) = match &cli.command {
        Command::Eval(a) => (cmd_eval(a)?, &a.output),
        Command::Plan(a) => (cmd_plan(a)?, &a.output),
        Command::Figure(a) => (cmd_figure(a)?, &a.output),
        Command::Compare(a) => (cmd_compare(a)?, &a.output),
        Command::Operator(a) => (cmd_operator(a)?, &a.output),
    };
    let text = table.render(output.format);
    if let Some(path) = &output.out {
        std::fs::write(path, &text)?;
        Ok(String::new())
    } else {
        Ok(text)
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
