//! Command-line front end.
//!
//! Exit status is 0 on success, 1 when a computation or invariant check
//! fails and 2 on a usage error. Output is a pure function of the flags.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::operator::{arc_fourier, assemble_matrix, classical_probability, symmetric_fourier};
use crate::special::sine_integral;
use crate::spectral::{convergence_csv, convergence_table, extremal_eigs, SpectralResult};
use crate::weyl::{
    hs_norm_integral, matrix_side_estimates, triple_symbol, TailModel, WeylReport,
    DEFAULT_HS_RADIUS, DEFAULT_HS_TOLERANCE,
};
use crate::wigner::{
    angular_coeff_contour_default, angular_coeff_genfun, angular_coeff_sum, angular_profile,
    AngularCoefficientTable, ModePair, SuperpositionState,
};
use crate::InstantTriple;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "OSC_POSITIVITY_THREADS";

/// Margin kept from the edges of the window `s < π < t < s + π` by `sweep`.
pub const SWEEP_MARGIN: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(
    name = "osc-positivity",
    version,
    about = "Maximal probability of a positive oscillator coordinate at one of three instants"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// λ_max(N) for several truncation sizes.
    Table(TableArgs),
    /// Extremal eigenpair at one truncation size.
    Spectrum(SpectrumArgs),
    /// Angular Wigner profile of the top eigenvector.
    Angular(AngularArgs),
    /// λ_max over a grid of instant triples inside the window.
    Sweep(SweepArgs),
    /// Hilbert–Schmidt norm of A² - 1 from the Weyl symbol, with matrix-side traces.
    WeylNorm(WeylArgs),
    /// Reduced-scale run of the invariant suite.
    Selfcheck(SelfcheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct InstantArgs {
    /// Second instant s [default: 2π/3]
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Third instant t [default: 4π/3]
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
}

impl InstantArgs {
    fn triple(&self) -> Result<InstantTriple, CliError> {
        let sym = InstantTriple::symmetric();
        match (self.s, self.t) {
            (None, None) => Ok(sym),
            (s, t) => Ok(InstantTriple::new(s.unwrap_or(sym.s), t.unwrap_or(sym.t))?),
        }
    }
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![25, 50, 100, 200, 300])]
    pub sizes: Vec<usize>,
    #[command(flatten)]
    pub instants: InstantArgs,
    /// Destination of the machine-readable table ("-" for standard output)
    #[arg(long, default_value = "convergence.csv")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, default_value_t = 300)]
    pub n: usize,
    #[command(flatten)]
    pub instants: InstantArgs,
    /// Output file [default: standard output]
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AngularArgs {
    #[arg(long, default_value_t = 300)]
    pub n: usize,
    /// Number of uniformly spaced angles in [-π, π)
    #[arg(long, default_value_t = 720)]
    pub resolution: usize,
    #[command(flatten)]
    pub instants: InstantArgs,
    /// Output file [default: standard output]
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 150)]
    pub n: usize,
    /// Grid points per axis
    #[arg(long, default_value_t = 11)]
    pub resolution: usize,
    /// Output file [default: standard output]
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct WeylArgs {
    #[command(flatten)]
    pub instants: InstantArgs,
    /// Truncation sizes for the matrix-side trace
    #[arg(long, value_delimiter = ',', default_values_t = vec![100, 200, 300])]
    pub sizes: Vec<usize>,
    /// Output file [default: standard output]
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SelfcheckArgs {
    /// Perturb one coefficient-table entry before checking.
    #[arg(long, hide = true)]
    pub corrupt_table: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Failure(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::InvalidArgument(_) | Error::DegenerateInstants(_) => {
                CliError::Usage(err.to_string())
            }
            _ => CliError::Failure(err.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(err: io::Error) -> Self {
        CliError::Failure(err.to_string())
    }
}

/// Parse `args`, run the command and return the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return err.exit_code();
        }
    };
    if let Err(err) = configure_threads() {
        eprintln!("{err}");
        return err.exit_code();
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => 0,
        Err(err) => {
            let _ = out.flush();
            eprintln!("{err}");
            err.exit_code()
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    // a second initialisation in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

/// Run a parsed command, writing standard-output text to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Table(args) => cmd_table(args, out),
        Command::Spectrum(args) => cmd_spectrum(args, out),
        Command::Angular(args) => cmd_angular(args, out),
        Command::Sweep(args) => cmd_sweep(args, out),
        Command::WeylNorm(args) => cmd_weyl(args, out),
        Command::Selfcheck(args) => cmd_selfcheck(args, out),
    }
}

fn emit(path: Option<&PathBuf>, body: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::write(p, body)?,
        _ => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Failure(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn require_dimension(n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    Ok(())
}

fn cmd_table(args: TableArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let sizes = &args.sizes;
    if sizes.is_empty() || sizes[0] == 0 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(format!(
            "--sizes must be positive and strictly ascending, got {sizes:?}"
        )));
    }
    let instants = args.instants.triple()?;
    let table = AngularCoefficientTable::build(*sizes.last().expect("nonempty"))?;
    let rows = convergence_table(sizes, instants, &table)?;

    let body = match args.format {
        Format::Csv => convergence_csv(&rows),
        Format::Json => to_json(&rows)?,
    };
    emit(Some(&args.output), &body, out)?;

    let mut text = format!("{:<12}", "N");
    for row in &rows {
        let _ = write!(text, "{:>8}", row.n);
    }
    let _ = write!(text, "\n{:<12}", "lambda_max");
    for row in &rows {
        let _ = write!(text, "{:>8.4}", row.lambda_max);
    }
    text.push('\n');
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn top_eigenpair(
    n: usize,
    instants: InstantTriple,
) -> Result<(SpectralResult, AngularCoefficientTable), CliError> {
    require_dimension(n)?;
    let table = AngularCoefficientTable::build(n)?;
    let matrix = assemble_matrix(n, instants, &table)?;
    Ok((extremal_eigs(&matrix)?, table))
}

fn cmd_spectrum(args: SpectrumArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (result, _) = top_eigenpair(args.n, args.instants.triple()?)?;
    let body = match args.format {
        Format::Json => to_json(&result)?,
        Format::Csv => format!(
            "n,lambda_min,lambda_max\n{},{:.16e},{:.16e}\n",
            result.n, result.lambda_min, result.lambda_max
        ),
    };
    emit(args.output.as_ref(), &body, out)
}

#[derive(Debug, Clone, Copy, Serialize)]
struct ProfilePoint {
    phi: f64,
    w_ang: f64,
}

fn cmd_angular(args: AngularArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.resolution == 0 {
        return Err(CliError::Usage("--resolution must be positive".into()));
    }
    let (result, table) = top_eigenpair(args.n, args.instants.triple()?)?;
    let state = SuperpositionState::new(result.top_vector)?;
    let grid: Vec<f64> = (0..args.resolution)
        .map(|j| -PI + 2.0 * PI * j as f64 / args.resolution as f64)
        .collect();
    let values = angular_profile(&state, &table, &grid)?;
    let points: Vec<ProfilePoint> = grid
        .iter()
        .zip(&values)
        .map(|(&phi, &w_ang)| ProfilePoint { phi, w_ang })
        .collect();
    let body = match args.format {
        Format::Json => to_json(&points)?,
        Format::Csv => {
            let mut s = String::from("phi,w_ang\n");
            for p in &points {
                let _ = writeln!(s, "{:.16e},{:.16e}", p.phi, p.w_ang);
            }
            s
        }
    };
    emit(args.output.as_ref(), &body, out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub s: f64,
    pub t: f64,
    pub lambda_max: f64,
}

/// `resolution × resolution` triples with `a = π - s`, `b = t - π` on a
/// square grid centred at `a = b = π/3`, scaled so that `a`, `b` and
/// `π - a - b` all stay at least `margin`. For odd `resolution` the centre
/// is exactly the symmetric triple.
pub fn sweep_grid(resolution: usize, margin: f64) -> Vec<InstantTriple> {
    let centre = (resolution as f64 - 1.0) / 2.0;
    let step = if resolution > 1 {
        (PI / 3.0 - margin) / (resolution as f64 - 1.0)
    } else {
        0.0
    };
    let mut grid = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            if 2 * i + 1 == resolution && 2 * j + 1 == resolution {
                grid.push(InstantTriple::symmetric());
                continue;
            }
            let a = PI / 3.0 + (i as f64 - centre) * step;
            let b = PI / 3.0 + (j as f64 - centre) * step;
            grid.push(InstantTriple {
                s: PI - a,
                t: PI + b,
            });
        }
    }
    grid
}

/// `λ_max` at dimension `n` for every triple, in input order.
pub fn sweep(
    n: usize,
    grid: &[InstantTriple],
    table: &AngularCoefficientTable,
) -> Result<Vec<SweepRow>, Error> {
    grid.par_iter()
        .map(|&instants| {
            let res = extremal_eigs(&assemble_matrix(n, instants, table)?)?;
            Ok(SweepRow {
                s: instants.s,
                t: instants.t,
                lambda_max: res.lambda_max,
            })
        })
        .collect()
}

fn cmd_sweep(args: SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    require_dimension(args.n)?;
    if args.resolution == 0 {
        return Err(CliError::Usage("--resolution must be positive".into()));
    }
    let table = AngularCoefficientTable::build(args.n)?;
    let rows = sweep(args.n, &sweep_grid(args.resolution, SWEEP_MARGIN), &table)?;
    let body = match args.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut s = String::from("s,t,lambda_max\n");
            for r in &rows {
                let _ = writeln!(s, "{:.16e},{:.16e},{:.16e}", r.s, r.t, r.lambda_max);
            }
            s
        }
    };
    emit(args.output.as_ref(), &body, out)
}

fn cmd_weyl(args: WeylArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.sizes.contains(&0) {
        return Err(CliError::Usage("--sizes must be positive".into()));
    }
    let instants = args.instants.triple()?;
    let result = hs_norm_integral(instants, DEFAULT_HS_RADIUS, DEFAULT_HS_TOLERANCE)?;
    let largest = args.sizes.iter().copied().max().unwrap_or(0);
    let table = AngularCoefficientTable::build(largest)?;
    let report = WeylReport::new(
        &result,
        matrix_side_estimates(instants, &args.sizes, &table)?,
    );
    let body = match args.format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut s = String::from("s,t,radius,value,tail_bound,n,trace\n");
            for e in &report.matrix_side_estimates {
                let _ = writeln!(
                    s,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}",
                    report.s,
                    report.t,
                    report.radius,
                    report.value,
                    report.tail_bound,
                    e.n,
                    e.trace
                );
            }
            s
        }
    };
    emit(args.output.as_ref(), &body, out)
}

const CHECK_DIM: usize = 60;
const CHECK_PAIRS: usize = 40;

type Check = fn(&AngularCoefficientTable) -> Result<String, String>;

fn cmd_selfcheck(args: SelfcheckArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut table = AngularCoefficientTable::build(CHECK_DIM)?;
    if args.corrupt_table {
        table = table.perturbed(3, 8, 1e-3);
    }
    let checks: [(&str, Check); 13] = [
        ("si-tail-inequality", check_si_tail),
        ("si-lipschitz", check_si_lipschitz),
        ("angular-oracle-triangle", check_oracle_triangle),
        ("table-matches-exact-sum", check_table),
        ("diagonal-law", check_diagonal),
        ("symmetric-fourier-sum", check_fourier),
        ("hermitian-general-triple", check_hermitian),
        ("parity-symmetric-spectrum", check_parity),
        ("interlacing", check_interlacing),
        ("quantum-exceeds-classical", check_classical),
        ("angular-profile-normalised", check_profile),
        ("symbol-rotation-invariance", check_symbol_symmetry),
        ("symbol-majorant-and-tail", check_majorant),
    ];
    for (name, check) in checks {
        match check(&table) {
            Ok(detail) => writeln!(out, "ok   {name}: {detail}")?,
            Err(detail) => {
                writeln!(out, "FAIL {name}: {detail}")?;
                return Err(CliError::Failure(format!(
                    "invariant {name} failed: {detail}"
                )));
            }
        }
    }
    Ok(())
}

fn within(name: &str, worst: f64, tol: f64) -> Result<String, String> {
    if worst <= tol {
        Ok(format!("max deviation {worst:.3e} <= {tol:.0e}"))
    } else {
        Err(format!("{name} deviation {worst:.3e} > {tol:.0e}"))
    }
}

fn check_si_tail(_: &AngularCoefficientTable) -> Result<String, String> {
    let worst = (0..=140)
        .map(|i| 10f64.powf(-1.0 + i as f64 * 0.05))
        .map(|x| (sine_integral(x) - PI / 2.0).abs() - 2.0 / x)
        .fold(f64::NEG_INFINITY, f64::max);
    if worst <= 0.0 {
        Ok("|Si(x) - π/2| <= 2/x on [0.1, 1e6]".into())
    } else {
        Err(format!("excess {worst:.3e}"))
    }
}

fn check_si_lipschitz(_: &AngularCoefficientTable) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let x = -50.0 + 0.5 * i as f64 + 0.123;
        for h in [1e-6, 1e-3, 0.7, 3.1] {
            let ratio = (sine_integral(x + h) - sine_integral(x)).abs() / h;
            worst = worst.max(ratio);
        }
    }
    within(
        "Lipschitz constant above 1 by",
        (worst - 1.0).max(0.0),
        1e-9,
    )
}

fn check_oracle_triangle(_: &AngularCoefficientTable) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for n in 0..=CHECK_PAIRS {
        for m in 0..=n {
            let pair = ModePair::new(m, n);
            let vals = [
                angular_coeff_sum(pair),
                angular_coeff_genfun(pair),
                angular_coeff_contour_default(pair),
            ]
            .map(|v| v.map_err(|e| e.to_string()));
            let [a, b, c] = [vals[0].clone()?, vals[1].clone()?, vals[2].clone()?];
            let scale = a.abs().max(b.abs()).max(c.abs());
            if scale > 0.0 {
                let spread = (a - b).abs().max((a - c).abs()).max((b - c).abs());
                worst = worst.max(spread / scale);
            }
        }
    }
    within("relative", worst, 1e-8)
}

fn check_table(table: &AngularCoefficientTable) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for n in 0..CHECK_PAIRS {
        for m in 0..=n {
            let exact = angular_coeff_sum(ModePair::new(m, n)).map_err(|e| e.to_string())?;
            worst = worst.max((table.get(m, n) - exact).abs());
        }
    }
    within("absolute", worst, 1e-14)
}

fn check_diagonal(table: &AngularCoefficientTable) -> Result<String, String> {
    let worst = (0..table.max_index())
        .map(|n| (2.0 * PI * table.get(n, n) - 1.0).abs())
        .fold(0.0, f64::max);
    within("2π w_nn - 1", worst, 1e-10)
}

fn check_fourier(_: &AngularCoefficientTable) -> Result<String, String> {
    let times = InstantTriple::symmetric().times();
    let worst = (-120i64..=120)
        .map(|k| {
            let sum: Complex64 = times.iter().map(|&tau| arc_fourier(k, tau)).sum();
            (sum - symmetric_fourier(k)).norm()
        })
        .fold(0.0, f64::max);
    within("arc sum vs closed form", worst, 1e-12)
}

fn check_hermitian(table: &AngularCoefficientTable) -> Result<String, String> {
    let instants = InstantTriple::new(2.4, 4.0).map_err(|e| e.to_string())?;
    let matrix = assemble_matrix(CHECK_DIM, instants, table).map_err(|e| e.to_string())?;
    let e = matrix.entries();
    let worst = (0..CHECK_DIM)
        .flat_map(|i| (0..CHECK_DIM).map(move |j| (i, j)))
        .map(|(i, j)| (e[(i, j)] - e[(j, i)].conj()).norm())
        .fold(0.0, f64::max);
    within("M - M†", worst, 0.0)
}

fn spectra(table: &AngularCoefficientTable) -> Result<Vec<SpectralResult>, String> {
    let full =
        assemble_matrix(CHECK_DIM, InstantTriple::symmetric(), table).map_err(|e| e.to_string())?;
    [10, 20, 40, CHECK_DIM]
        .iter()
        .map(|&n| {
            full.truncated(n)
                .and_then(|m| extremal_eigs(&m))
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn check_parity(table: &AngularCoefficientTable) -> Result<String, String> {
    let worst = spectra(table)?
        .iter()
        .map(|r| (r.lambda_min + r.lambda_max - 1.0).abs())
        .fold(0.0, f64::max);
    within("λ_min + λ_max - 1", worst, 1e-9)
}

fn check_interlacing(table: &AngularCoefficientTable) -> Result<String, String> {
    let rows = spectra(table)?;
    let worst = rows
        .windows(2)
        .map(|w| (w[0].lambda_max - w[1].lambda_max).max(0.0))
        .fold(0.0, f64::max);
    let top = rows.last().expect("nonempty").lambda_max;
    if top >= 1.0 {
        return Err(format!("λ_max = {top} is not below 1"));
    }
    within("decrease of λ_max", worst, 1e-10)
}

fn check_classical(table: &AngularCoefficientTable) -> Result<String, String> {
    let instants = InstantTriple::symmetric();
    let mut classical_max = 0.0f64;
    for i in 0..360 {
        let phi = 2.0 * PI * (i as f64 + 0.5) / 360.0;
        classical_max =
            classical_max.max(classical_probability(phi.cos(), phi.sin(), instants).as_f64());
    }
    let quantum = spectra(table)?.last().expect("nonempty").lambda_max;
    if classical_max <= 2.0 / 3.0 && quantum > 2.0 / 3.0 {
        Ok(format!(
            "classical {classical_max:.4} <= 2/3 < quantum {quantum:.6}"
        ))
    } else {
        Err(format!(
            "classical {classical_max:.4}, quantum {quantum:.6}"
        ))
    }
}

fn check_profile(table: &AngularCoefficientTable) -> Result<String, String> {
    let top = spectra(table)?.pop().expect("nonempty");
    let state = SuperpositionState::new(top.top_vector).map_err(|e| e.to_string())?;
    let points = 4 * CHECK_DIM;
    let grid: Vec<f64> = (0..points)
        .map(|j| -PI + 2.0 * PI * j as f64 / points as f64)
        .collect();
    let values = angular_profile(&state, table, &grid).map_err(|e| e.to_string())?;
    let integral = values.iter().sum::<f64>() * 2.0 * PI / points as f64;
    within("trapezoid integral - 1", (integral - 1.0).abs(), 1e-6)
}

fn sample_points() -> impl Iterator<Item = (f64, f64)> {
    (0..200).map(|i| {
        let r = 0.05 + 0.37 * i as f64;
        let a = 0.731 * i as f64;
        (r * a.cos(), r * a.sin())
    })
}

fn check_symbol_symmetry(_: &AngularCoefficientTable) -> Result<String, String> {
    let sym = InstantTriple::symmetric();
    let (sin, cos) = (PI / 3.0).sin_cos();
    let mut worst: f64 = 0.0;
    for (q, p) in sample_points() {
        let f = |q, p| triple_symbol(q, p, sym).map_err(|e| e.to_string());
        let base = f(q, p)?;
        worst = worst.max((f(cos * q - sin * p, sin * q + cos * p)? - base).abs());
        worst = worst.max((f(-q, p)? - base).abs());
    }
    within("rotation/reflection", worst, 1e-10)
}

fn check_majorant(_: &AngularCoefficientTable) -> Result<String, String> {
    let instants = InstantTriple::new(2.3, 4.1).map_err(|e| e.to_string())?;
    let model = TailModel::new(instants).map_err(|e| e.to_string())?;
    let mut excess = f64::NEG_INFINITY;
    for (q, p) in sample_points() {
        let f = triple_symbol(q, p, instants).map_err(|e| e.to_string())?;
        excess = excess.max((f + 1.0).abs() - model.majorant(q, p));
    }
    if excess > 1e-12 {
        return Err(format!("|f + 1| exceeds its majorant by {excess:.3e}"));
    }
    let bounds: Vec<f64> = [8.0, 16.0, 32.0]
        .iter()
        .map(|&r| model.tail_bound(r))
        .collect();
    if !(bounds[0] > bounds[1] && bounds[1] > bounds[2]) {
        return Err(format!("tail bound not decreasing: {bounds:?}"));
    }
    let small =
        hs_norm_integral(InstantTriple::symmetric(), 4.0, 1e-3).map_err(|e| e.to_string())?;
    if !(small.value.is_finite() && small.value > 0.0) {
        return Err(format!("disk integral {} at R = 4", small.value));
    }
    Ok(format!(
        "majorant holds; tail bound {:.4} at R = 32",
        bounds[2]
    ))
}
