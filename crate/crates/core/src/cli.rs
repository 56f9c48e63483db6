//! Command-line front end. Every command parses and validates its inputs,
//! computes everything in memory and only then writes output files, so a
//! failed run leaves nothing behind.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ndarray::Array2;
use ndarray_linalg::{EigValsh, UPLO};
use serde::Serialize;

use crate::admm::{off_diagonal_sparsity, AdmmConfig, FitResult};
use crate::error::{Error, Result};
use crate::experiments::{
    bench_timing, cross_validate, run_simulation, summarize, BenchConfig, CaseKind, Estimator,
    Method, SimulationConfig,
};
use crate::matrix::{thin_svd_gram, DataMatrix};
use crate::penalty::{lla_refit, PenaltyFamily};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "equal",
    version,
    about = "Sparse precision-matrix estimation with quadratic losses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one λ and write the estimated precision matrix.
    Estimate(EstimateArgs),
    /// Fit a warm-started solution path and write per-λ diagnostics.
    Path(PathArgs),
    /// Choose λ by K-fold cross-validation and write the refitted estimate.
    Cv(CvArgs),
    /// Replicated accuracy study on a synthetic model.
    Simulate(SimulateArgs),
    /// Time full solution paths across dimensions.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV file, rows are samples and columns are variables.
    #[arg(long, short)]
    pub input: PathBuf,
    /// The first row of the CSV is a header.
    #[arg(long)]
    pub header: bool,
    /// Centre the columns before forming the covariance.
    #[arg(long)]
    pub center: bool,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value = "equals")]
    pub method: Method,
    /// Leave the diagonal unpenalised.
    #[arg(long)]
    pub no_diag_penalty: bool,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol_abs: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub tol_rel: f64,
}

impl SolverArgs {
    fn admm(&self) -> AdmmConfig {
        AdmmConfig {
            rho: self.rho,
            max_iter: self.max_iter,
            tol_abs: self.tol_abs,
            tol_rel: self.tol_rel,
            ..AdmmConfig::default()
        }
    }

    fn estimator(&self, center: bool) -> Estimator {
        Estimator::new(self.method)
            .with_admm(self.admm())
            .with_diagonal(!self.no_diag_penalty)
            .with_center(center)
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 50)]
    pub grid_size: usize,
    /// Multiplier on the grid floor λ_max·√(ln p / n).
    #[arg(long, default_value_t = 1.0)]
    pub floor_scale: f64,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub lambda: f64,
    /// SCAD and MCP run a LASSO fit followed by one LLA refit.
    #[arg(long, value_enum, default_value = "lasso")]
    pub penalty: PenaltyFamily,
    /// Concavity parameter; defaults to 3.7 for SCAD and 2 for MCP.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Estimate CSV; diagnostics go to the same path with a .json extension.
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Per-λ diagnostics CSV; the grid and settings go to a .json sidecar.
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Refitted estimate CSV; the CV curve goes to a .json sidecar.
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long = "case", value_enum)]
    pub case: CaseKind,
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "equals,equal"
    )]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 20)]
    pub grid_size: usize,
    #[arg(long, default_value_t = 1.0)]
    pub floor_scale: f64,
    #[arg(long)]
    pub no_diag_penalty: bool,
    #[arg(long)]
    pub center: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Per-replication loss rows; per-method means go to a .json sidecar.
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long = "case", value_enum, default_value = "case1")]
    pub case: CaseKind,
    #[arg(long = "p", value_delimiter = ',', required = true)]
    pub p_list: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "equals,equal,glasso"
    )]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = 50)]
    pub grid_size: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, short)]
    pub output: PathBuf,
}

/// Parse `args` (program name first), run the command and return the exit
/// code. Messages go to stderr, a one-line summary to stdout.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(summary) => {
            println!("{summary}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical(_) => EXIT_NUMERICAL,
        _ => EXIT_INPUT,
    }
}

fn dispatch(cmd: Command) -> Result<String> {
    match cmd {
        Command::Estimate(a) => cmd_estimate(&a),
        Command::Path(a) => cmd_path(&a),
        Command::Cv(a) => cmd_cv(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

/// Read a numeric CSV into a data matrix.
pub fn read_csv(path: &Path, header: bool) -> Result<DataMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        match cols {
            None => cols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(Error::invalid(format!(
                    "row {} has {} fields, expected {c}",
                    r + 1,
                    record.len()
                )))
            }
            _ => {}
        }
        for (c, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                Error::invalid(format!(
                    "row {}, column {}: {field:?} is not a number",
                    r + 1,
                    c + 1
                ))
            })?;
            values.push(v);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| Error::invalid("CSV has no data rows"))?;
    let arr =
        Array2::from_shape_vec((rows, cols), values).map_err(|e| Error::invalid(e.to_string()))?;
    DataMatrix::new(arr)
}

/// Write a matrix as CSV with 17 significant digits.
pub fn write_matrix(path: &Path, m: &Array2<f64>) -> Result<()> {
    let mut out = String::with_capacity(m.len() * 25);
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `out.csv` → `out.json`; refuses to let the two collide.
pub fn sidecar_path(output: &Path) -> Result<PathBuf> {
    let side = output.with_extension("json");
    if side == output {
        return Err(Error::invalid(
            "output path must not have a .json extension",
        ));
    }
    Ok(side)
}

fn check_output(output: &Path) -> Result<PathBuf> {
    if let Some(dir) = output.parent().filter(|d| !d.as_os_str().is_empty()) {
        if !dir.is_dir() {
            return Err(Error::invalid(format!(
                "output directory {} does not exist",
                dir.display()
            )));
        }
    }
    sidecar_path(output)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "--{name} must be positive, got {v}"
        )))
    }
}

fn min_eigen(m: &Array2<f64>) -> Result<f64> {
    let sym = (m + &m.t()) * 0.5;
    Ok(sym
        .eigvalsh(UPLO::Lower)?
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min))
}

#[derive(Serialize)]
struct FitReport {
    method: Method,
    penalty: PenaltyFamily,
    lambda: f64,
    tau: Option<f64>,
    penalize_diagonal: bool,
    n: usize,
    p: usize,
    iterations: usize,
    converged: bool,
    objective: f64,
    kkt_residual: f64,
    min_eigen: f64,
    sparsity: f64,
}

fn cmd_estimate(a: &EstimateArgs) -> Result<String> {
    let side = check_output(&a.output)?;
    if !(a.lambda >= 0.0 && a.lambda.is_finite()) {
        return Err(Error::invalid(format!(
            "--lambda must be non-negative, got {}",
            a.lambda
        )));
    }
    let refine = a.penalty != PenaltyFamily::Lasso;
    if refine && a.solver.method == Method::Glasso {
        return Err(Error::invalid(
            "SCAD/MCP refits are available for equal and equals only",
        ));
    }
    let tau = a.tau.unwrap_or(a.penalty.default_tau());
    if refine {
        crate::penalty::PenaltySpec::new(a.penalty, a.lambda)
            .with_tau(tau)
            .validate(1)?;
        if a.lambda == 0.0 {
            return Err(Error::invalid("SCAD/MCP need a positive --lambda"));
        }
    }
    let x = read_csv(&a.input.input, a.input.header)?;
    let est = a.solver.estimator(a.input.center);
    est.config().validate()?;

    let fit: FitResult = if refine {
        let svd = thin_svd_gram(&x, a.input.center)?;
        let initial = est.fit(&x, a.lambda)?;
        lla_refit(&svd, &initial, a.penalty, a.lambda, tau, &est.config())?
    } else {
        est.fit(&x, a.lambda)?
    };
    let report = FitReport {
        method: a.solver.method,
        penalty: a.penalty,
        lambda: a.lambda,
        tau: refine.then_some(tau),
        penalize_diagonal: !a.solver.no_diag_penalty && !refine,
        n: x.n(),
        p: x.p(),
        iterations: fit.iterations,
        converged: fit.converged,
        objective: fit.objective,
        kkt_residual: fit.kkt_residual,
        min_eigen: min_eigen(&fit.estimate)?,
        sparsity: off_diagonal_sparsity(&fit.estimate),
    };
    write_matrix(&a.output, &fit.estimate)?;
    write_json(&side, &report)?;
    Ok(format!(
        "estimate: p = {}, {} iterations, converged = {}, written to {}",
        x.p(),
        fit.iterations,
        fit.converged,
        a.output.display()
    ))
}

#[derive(Serialize)]
struct PathRow {
    lambda: f64,
    sparsity: f64,
    iterations: usize,
    converged: bool,
    objective: f64,
    kkt_residual: f64,
}

#[derive(Serialize)]
struct PathReport {
    method: Method,
    n: usize,
    p: usize,
    penalize_diagonal: bool,
    lambdas: Vec<f64>,
    sparsity: Vec<f64>,
    total_iterations: usize,
}

fn cmd_path(a: &PathArgs) -> Result<String> {
    let side = check_output(&a.output)?;
    check_positive("floor-scale", a.grid.floor_scale)?;
    let x = read_csv(&a.input.input, a.input.header)?;
    let est = a
        .solver
        .estimator(a.input.center)
        .with_floor_scale(a.grid.floor_scale);
    est.config().validate()?;
    let grid = est.grid(&x, a.grid.grid_size)?;
    let path = est.path(&x, &grid)?;
    let rows: Vec<PathRow> = path
        .fits
        .iter()
        .zip(&grid)
        .zip(&path.sparsity)
        .map(|((f, &lambda), &sparsity)| PathRow {
            lambda,
            sparsity,
            iterations: f.iterations,
            converged: f.converged,
            objective: f.objective,
            kkt_residual: f.kkt_residual,
        })
        .collect();
    let report = PathReport {
        method: a.solver.method,
        n: x.n(),
        p: x.p(),
        penalize_diagonal: !a.solver.no_diag_penalty,
        total_iterations: rows.iter().map(|r| r.iterations).sum(),
        lambdas: grid,
        sparsity: path.sparsity.clone(),
    };
    write_rows(&a.output, &rows)?;
    write_json(&side, &report)?;
    Ok(format!(
        "path: {} lambdas, {} iterations, written to {}",
        rows.len(),
        report.total_iterations,
        a.output.display()
    ))
}

#[derive(Serialize)]
struct CvReport {
    method: Method,
    n: usize,
    p: usize,
    seed: u64,
    #[serde(flatten)]
    cv: crate::experiments::CvResult,
    refit_iterations: usize,
    refit_converged: bool,
    min_eigen: f64,
    sparsity: f64,
}

fn cmd_cv(a: &CvArgs) -> Result<String> {
    let side = check_output(&a.output)?;
    check_positive("floor-scale", a.grid.floor_scale)?;
    let x = read_csv(&a.input.input, a.input.header)?;
    if a.folds < 2 || a.folds > x.n() {
        return Err(Error::invalid(format!(
            "--folds must lie in [2, n = {}], got {}",
            x.n(),
            a.folds
        )));
    }
    let est = a
        .solver
        .estimator(a.input.center)
        .with_floor_scale(a.grid.floor_scale);
    est.config().validate()?;
    let grid = est.grid(&x, a.grid.grid_size)?;
    let cv = cross_validate(&x, &grid, &est, a.folds, a.seed)?;
    let path = est.path(&x, &grid[..=cv.best_index])?;
    let fit = path.fits.last().expect("non-empty grid prefix");
    let report = CvReport {
        method: a.solver.method,
        n: x.n(),
        p: x.p(),
        seed: a.seed,
        refit_iterations: fit.iterations,
        refit_converged: fit.converged,
        min_eigen: min_eigen(&fit.estimate)?,
        sparsity: off_diagonal_sparsity(&fit.estimate),
        cv,
    };
    write_matrix(&a.output, &fit.estimate)?;
    write_json(&side, &report)?;
    Ok(format!(
        "cv: best lambda {:.6e} (index {} of {}), written to {}",
        report.cv.best_lambda,
        report.cv.best_index,
        grid.len(),
        a.output.display()
    ))
}

#[derive(Serialize)]
struct SimulateReport {
    config: SimulationConfig,
    summary: Vec<crate::experiments::MethodSummary>,
}

#[derive(Serialize)]
struct LossRow {
    rep: usize,
    method: Method,
    best_lambda: f64,
    iterations: usize,
    converged: bool,
    loss1: f64,
    loss2: f64,
    loss3: Option<f64>,
    loss4: f64,
    min_eigen: f64,
}

fn cmd_simulate(a: &SimulateArgs) -> Result<String> {
    let side = check_output(&a.output)?;
    check_positive("floor-scale", a.floor_scale)?;
    let cfg = SimulationConfig {
        seed: a.seed,
        methods: a.methods.clone(),
        folds: a.folds,
        grid_size: a.grid_size,
        floor_scale: a.floor_scale,
        center: a.center,
        penalize_diagonal: !a.no_diag_penalty,
        ..SimulationConfig::new(a.case, a.p, a.n, a.reps)
    };
    cfg.validate()?;
    let rows = run_simulation(&cfg)?;
    let flat: Vec<LossRow> = rows
        .iter()
        .map(|r| LossRow {
            rep: r.rep,
            method: r.method,
            best_lambda: r.best_lambda,
            iterations: r.iterations,
            converged: r.converged,
            loss1: r.losses.loss1,
            loss2: r.losses.loss2,
            loss3: r.losses.loss3,
            loss4: r.losses.loss4,
            min_eigen: r.losses.min_eigen,
        })
        .collect();
    let summary = summarize(&rows);
    let line = summary
        .iter()
        .map(|s| format!("{} loss1 {:.3} ({:.3})", s.method, s.loss1.0, s.loss1.1))
        .collect::<Vec<_>>()
        .join("; ");
    write_rows(&a.output, &flat)?;
    write_json(
        &side,
        &SimulateReport {
            config: cfg,
            summary,
        },
    )?;
    Ok(format!("simulate: {line}"))
}

fn cmd_bench(a: &BenchArgs) -> Result<String> {
    let side = check_output(&a.output)?;
    let cfg = BenchConfig {
        methods: a.methods.clone(),
        reps: a.reps,
        grid_size: a.grid_size,
        seed: a.seed,
        ..BenchConfig::new(a.case, a.p_list.clone(), a.n)
    };
    cfg.validate()?;
    if cfg.p_list.iter().any(|&p| p < 2) {
        return Err(Error::invalid("every p must be at least 2"));
    }
    let rows = bench_timing(&cfg)?;
    write_rows(&a.output, &rows)?;
    write_json(&side, &serde_json::json!({ "config": cfg, "rows": rows }))?;
    Ok(format!(
        "bench: {} timing rows written to {}",
        rows.len(),
        a.output.display()
    ))
}
