//! Command-line front end.
//!
//! Every command writes plain data: `theta,value` or `k,coefficient` CSV, or
//! a JSON report. Exit status is 0 on success, 1 for usage errors and invalid
//! arguments, 2 when a series fails to converge or a self-check fails.

use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use crate::complex::{complex_filter_coeffs, complex_filter_eval, eval_inner, DiskPoint, InnerAnalytic};
use crate::error::{invalid, Error, Result};
use crate::filters::{apply_filter_coeffs, filter_direct, filter_multiplier, sinc, KernelSpec, Variant};
use crate::io as files;
use crate::kernel::Kernel;
use crate::oracle::{oracle_iterated_filter, OracleConfig};
use crate::scaled::{
    effective_range, filtered_waveform, invariant_points, zero_derivative_points, ScaledDerivative, ScaledKernelParams,
    SelfSimilarDerivative,
};
use crate::series::{grid_point, render_signal, EvalOptions, SampledSignal, Waveform};

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(
    name = "dpfilter",
    version,
    about = "Low-pass filters for definite-parity Fourier series"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub numeric: NumericArgs,
}

#[derive(Debug, Clone, Args)]
pub struct NumericArgs {
    /// Largest harmonic index a series may use.
    #[arg(long = "kmax", global = true, default_value_t = 1 << 20)]
    pub k_max: usize,

    /// Absolute tolerance on the discarded series tail.
    #[arg(long = "tol", global = true, default_value_t = 1e-12)]
    pub tail_tol: f64,

    /// Output file (a directory for `sweep`); standard output when omitted.
    #[arg(long = "out", global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Kernel of an order-N filter over one period.
    Kernel {
        #[arg(long = "N", default_value_t = 1)]
        order: u32,
        #[arg(long = "eps", default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value = "naive")]
        variant: Variant,
        #[arg(long, default_value_t = 1024)]
        points: usize,
        /// Let the support wrap around the circle (only each stage must fit).
        #[arg(long)]
        periodic: bool,
    },
    /// Order-N scaled kernel over one period.
    ScaledKernel {
        #[arg(long = "eps", default_value_t = 0.5)]
        eps: f64,
        #[arg(long = "N", default_value_t = 100)]
        order: u32,
        #[arg(long, default_value_t = 1024)]
        points: usize,
    },
    /// Term-wise derivative of the scaled kernel.
    Derivative {
        #[arg(long = "eps", default_value_t = 0.5)]
        eps: f64,
        #[arg(long = "N", default_value_t = 100)]
        order: u32,
        /// Derivative order.
        #[arg(long = "order", default_value_t = 1)]
        derivative: u32,
        #[arg(long, default_value_t = 1024)]
        points: usize,
    },
    /// Filter a signal CSV (moving averages) or a coefficient JSON (multipliers).
    Filter {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "eps", default_value_t = 0.5)]
        eps: f64,
        #[arg(long = "N", default_value_t = 1)]
        order: u32,
        #[arg(long, default_value = "naive")]
        variant: Variant,
        /// Render filtered coefficients on this many grid points instead of
        /// writing the coefficient table.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Scaled-filtered square, sawtooth or triangle wave.
    Waveform {
        #[arg(long, default_value = "square")]
        kind: Waveform,
        #[arg(long = "eps", default_value_t = 0.5)]
        eps: f64,
        #[arg(long = "N", default_value_t = 100)]
        order: u32,
        #[arg(long, default_value_t = 4096)]
        points: usize,
    },
    /// JSON report on the invariant points and the zero-derivative table.
    Invariants {
        #[arg(long = "eps", default_value_t = 0.5)]
        eps: f64,
        #[arg(long = "N", default_value_t = 100)]
        order: u32,
        /// Largest table row.
        #[arg(long = "order", default_value_t = 4)]
        table_order: u32,
    },
    /// One kernel CSV per order; the default orders follow the usual regimes.
    Sweep {
        #[arg(long, default_value = "naive")]
        variant: Variant,
        #[arg(long = "eps", default_value_t = 0.5)]
        eps: f64,
        /// Comma-separated orders.
        #[arg(long = "N", value_delimiter = ',')]
        orders: Option<Vec<u32>>,
        #[arg(long, default_value_t = 1024)]
        points: usize,
    },
    /// Quick agreement checks against independent references.
    Selfcheck,
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    ChecksFailed,
}

impl RunConfig {
    pub fn eval_options(&self) -> EvalOptions {
        EvalOptions {
            k_max: self.numeric.k_max,
            tail_tol: self.numeric.tail_tol,
            ..EvalOptions::default()
        }
    }
}

/// Default order lists per variant for `sweep`.
pub fn default_sweep_orders(variant: Variant) -> Vec<u32> {
    let powers = |max: u32| (0..).map(|i| 1u32 << i).take_while(move |&n| n <= max).collect();
    match variant {
        Variant::Naive => powers(128),
        Variant::Fixed => powers(8192),
        Variant::Gaussian => powers(1024),
        Variant::Scaled => (1..=10).collect(),
    }
}

/// Executes a parsed command, writing to `--out` or to `stdout`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<Status> {
    let opts = config.eval_options();
    opts.validate()?;
    let out = config.numeric.out.as_deref();
    match &config.command {
        Command::Kernel {
            order,
            eps,
            variant,
            points,
            periodic,
        } => {
            let spec = if *periodic {
                KernelSpec::periodic(*order, *eps, *variant)?
            } else {
                KernelSpec::new(*order, *eps, *variant)?
            };
            let kernel = Kernel::new(&spec, &opts)?;
            emit(out, stdout, |w| write_grid(w, *points, |x| kernel.value(x)))?;
        }
        Command::ScaledKernel { eps, order, points } => {
            let kernel = Kernel::scaled(&ScaledKernelParams::new(*eps, *order)?, &opts)?;
            emit(out, stdout, |w| write_grid(w, *points, |x| kernel.value(x)))?;
        }
        Command::Derivative {
            eps,
            order,
            derivative,
            points,
        } => {
            let d = ScaledDerivative::new(&ScaledKernelParams::new(*eps, *order)?, *derivative, &opts)?;
            emit(out, stdout, |w| write_grid(w, *points, |x| d.value(x)))?;
        }
        Command::Filter {
            input,
            eps,
            order,
            variant,
            points,
        } => {
            let spec = KernelSpec::new(*order, *eps, *variant)?;
            run_filter(input, &spec, *points, &opts, out, stdout)?;
        }
        Command::Waveform {
            kind,
            eps,
            order,
            points,
        } => {
            check_points(*points)?;
            let coeffs = filtered_waveform(*kind, &ScaledKernelParams::new(*eps, *order)?, &opts)?;
            let signal = render_signal(&coeffs, *points, &opts)?;
            emit(out, stdout, |w| files::write_signal(w, &signal))?;
        }
        Command::Invariants {
            eps,
            order,
            table_order,
        } => {
            let report = invariants_report(*eps, *order, *table_order, &opts)?;
            emit(out, stdout, |w| {
                serde_json::to_writer_pretty(&mut *w, &report)?;
                writeln!(w)?;
                Ok(())
            })?;
        }
        Command::Sweep {
            variant,
            eps,
            orders,
            points,
        } => {
            let dir = out.ok_or_else(|| invalid("sweep needs --out <directory>"))?;
            let orders = orders.clone().unwrap_or_else(|| default_sweep_orders(*variant));
            run_sweep(dir, *variant, *eps, &orders, *points, &opts, stdout)?;
        }
        Command::Selfcheck => {
            let results = selfcheck(&opts);
            let mut failed = 0;
            for r in &results {
                writeln!(
                    stdout,
                    "{} {} ({})",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                )?;
                failed += usize::from(!r.passed);
            }
            writeln!(stdout, "{} of {} checks passed", results.len() - failed, results.len())?;
            if let Some(path) = out {
                let report: Vec<_> = results
                    .iter()
                    .map(|r| json!({"name": r.name, "passed": r.passed, "detail": r.detail}))
                    .collect();
                fs::write(path, serde_json::to_string_pretty(&report)? + "\n")?;
            }
            if failed > 0 {
                return Ok(Status::ChecksFailed);
            }
        }
    }
    Ok(Status::Ok)
}

fn check_points(points: usize) -> Result<()> {
    if points < 2 {
        return Err(invalid(format!("--points must be at least 2, got {points}")));
    }
    Ok(())
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            body(&mut file)?;
            file.flush()?;
        }
        None => body(stdout)?,
    }
    Ok(())
}

fn write_grid(w: &mut dyn Write, points: usize, f: impl Fn(f64) -> f64) -> Result<()> {
    check_points(points)?;
    files::write_curve(w, (0..points).map(|j| grid_point(j, points)).map(|x| (x, f(x))))
}

fn run_filter(
    input: &Path,
    spec: &KernelSpec,
    points: Option<usize>,
    opts: &EvalOptions,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<()> {
    let is_json = input.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        let filtered = apply_filter_coeffs(&files::read_coefficients(input)?, spec);
        return match points {
            Some(m) => {
                check_points(m)?;
                let signal = render_signal(&filtered, m, opts)?;
                emit(out, stdout, |w| files::write_signal(w, &signal))
            }
            None => emit(out, stdout, |w| files::write_coefficient_table(w, filtered.coeffs())),
        };
    }
    if points.is_some() {
        return Err(invalid("--points applies to coefficient input only"));
    }
    let mut signal = files::read_signal_file(input)?;
    for range in spec.stage_ranges() {
        signal = filter_direct(&signal, range, opts)?;
    }
    emit(out, stdout, |w| files::write_signal(w, &signal))
}

fn invariants_report(eps: f64, order: u32, table_order: u32, opts: &EvalOptions) -> Result<serde_json::Value> {
    let params = ScaledKernelParams::new(eps, order)?;
    let kernel = Kernel::scaled(&params, opts)?;
    let points: Vec<_> = invariant_points(eps)?
        .into_iter()
        .map(|(theta, expected)| json!({"theta": theta, "expected": expected, "kernel": kernel.value(theta)}))
        .collect();
    let table = (0..=table_order)
        .map(|n| {
            let pts = zero_derivative_points(eps, n)?;
            Ok(json!({"n": n, "count": pts.len(), "points": pts}))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "eps": eps,
        "N": order,
        "effective_range": effective_range(&params),
        "invariant_points": points,
        "zero_derivative_points": table,
    }))
}

fn run_sweep(
    dir: &Path,
    variant: Variant,
    eps: f64,
    orders: &[u32],
    points: usize,
    opts: &EvalOptions,
    stdout: &mut dyn Write,
) -> Result<()> {
    check_points(points)?;
    fs::create_dir_all(dir)?;
    for &n in orders {
        let spec = KernelSpec::periodic(n, eps, variant)?;
        let kernel = Kernel::new(&spec, opts)?;
        let path = dir.join(format!("{variant}_N{n}.csv"));
        let mut file = BufWriter::new(File::create(&path)?);
        write_grid(&mut file, points, |x| kernel.value(x))?;
        file.flush()?;
        writeln!(stdout, "{}", path.display())?;
    }
    Ok(())
}

/// Outcome of one self-check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, error: Result<f64>, tol: f64) -> CheckResult {
    match error {
        Ok(e) => CheckResult {
            name,
            passed: e <= tol,
            detail: format!("error {e:.3e}, tolerance {tol:.0e}"),
        },
        Err(err) => CheckResult {
            name,
            passed: false,
            detail: err.to_string(),
        },
    }
}

/// A fast subset of the agreement checks; each compares two independent
/// computations of the same quantity.
pub fn selfcheck(opts: &EvalOptions) -> Vec<CheckResult> {
    let mut results = Vec::new();

    results.push(check(
        "eigenfunction law of the moving average",
        (|| {
            let m = 1 << 14;
            let mut worst: f64 = 0.0;
            for k in [1usize, 8, 64] {
                let kf = k as f64;
                let s = SampledSignal::from_fn(m, |t| (kf * t).sin())?;
                let out = filter_direct(&s, 0.5, opts)?;
                for (t, v) in out.thetas().zip(out.values()) {
                    worst = worst.max((v - sinc(kf * 0.5) * (kf * t).sin()).abs());
                }
            }
            Ok(worst)
        })(),
        1e-6,
    ));

    results.push(check(
        "unit integral of the kernels",
        (|| {
            let mut worst: f64 = 0.0;
            for spec in [
                KernelSpec::new(1, 0.5, Variant::Naive)?,
                KernelSpec::new(4, 0.5, Variant::Fixed)?,
            ] {
                worst = worst.max((Kernel::new(&spec, opts)?.integral(opts.quad_resolution) - 1.0).abs());
            }
            for n in [3, 100] {
                let k = Kernel::scaled(&ScaledKernelParams::new(0.5, n)?, opts)?;
                worst = worst.max((k.integral(opts.quad_resolution) - 1.0).abs());
            }
            Ok(worst)
        })(),
        1e-8,
    ));

    results.push(check(
        "invariant points of the scaled kernel",
        (|| {
            let k = Kernel::scaled(&ScaledKernelParams::new(0.5, 100)?, opts)?;
            Ok(invariant_points(0.5)?
                .into_iter()
                .map(|(t, v)| (k.value(t) - v).abs())
                .fold(0.0, f64::max))
        })(),
        1e-6,
    ));

    results.push(check(
        "scaled multipliers against nested Simpson averages",
        (|| {
            let cfg = OracleConfig {
                resolution: 400,
                k_cap: 0,
            };
            let spec = KernelSpec::new(2, 0.5, Variant::Scaled)?;
            let mut worst: f64 = 0.0;
            for k in [1usize, 3] {
                let kf = k as f64;
                let f = move |t: f64| (kf * t).cos();
                let theta = 0.3;
                let oracle = oracle_iterated_filter(&f, theta, &spec.stage_ranges(), &cfg)?;
                worst = worst.max((oracle - filter_multiplier(k, &spec) * f(theta)).abs());
            }
            Ok(worst)
        })(),
        1e-8,
    ));

    results.push(check(
        "complex filter operator against coefficient multipliers",
        (|| {
            // Low-discrepancy points keep the check deterministic.
            let frac = |i: usize, a: f64| (i as f64 * a).fract();
            let w = InnerAnalytic::new((1..=32).map(|i| 2.0 * frac(i, 0.618_033_988_75) - 1.0).collect())?;
            let filtered = complex_filter_coeffs(&w, 0.5)?;
            let mut worst: f64 = 0.0;
            for i in 1..=20 {
                let p = DiskPoint::new(
                    0.99 * frac(i, 0.754_877_666_2),
                    PI * (2.0 * frac(i, 0.569_840_290_9) - 1.0),
                )?;
                let a: Complex64 = complex_filter_eval(&w, 0.5, p, opts)?;
                worst = worst.max((a - eval_inner(&filtered, p, opts)?).norm());
            }
            Ok(worst)
        })(),
        1e-12,
    ));

    results.push(check(
        "derivative self-similarity",
        (|| {
            let params = ScaledKernelParams::new(0.5, 30)?;
            let direct = ScaledDerivative::new(&params, 1, opts)?;
            let copies = SelfSimilarDerivative::new(&params, 1, opts)?;
            Ok((0..64)
                .map(|j| grid_point(j, 64))
                .map(|x| (direct.value(x) - copies.value(x)).abs())
                .fold(0.0, f64::max))
        })(),
        1e-6,
    ));

    results
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NonConvergence { .. } => 2,
        _ => 1,
    }
}

/// Parses `std::env::args`, runs the command and maps the outcome to an exit code.
pub fn main_entry() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut stdout = BufWriter::new(std::io::stdout().lock());
    let status = run(&config, &mut stdout);
    let flushed = stdout.flush();
    match (status, flushed) {
        (Ok(Status::Ok), Ok(())) => ExitCode::SUCCESS,
        (Ok(Status::ChecksFailed), _) => ExitCode::from(2),
        (Err(e), _) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        (Ok(_), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
