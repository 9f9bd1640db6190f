//! Command-line front end for `spinpoly`: coefficient tables, identity
//! sweeps, a benchmark of polynomial against direct evaluation, and the
//! central factorial triangle.

pub mod output;

use std::ffi::OsString;
use std::hint::black_box;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use spinpoly::coeffs::{central_factorial_magnitudes, det_polynomial, CfzExpansion, ResolventExpansion};
use spinpoly::spin::max_abs;
use spinpoly::verify::{
    oracle_cayley, oracle_expm, random_axes, run_identity_suite, SweepGrid, ToleranceConfig, VerificationReport,
    DEFAULT_SEED,
};
use spinpoly::{Axis, SpinLabel, SpinMatrix};

use output::{float, OutputRecord};

/// Building the exact exponential series takes a few seconds at this size
/// and grows steeply beyond it.
pub const MAX_TWO_J: u32 = 160;

#[derive(Debug, Parser)]
#[command(name = "spinpoly", version, about = "Spin-j rotation operators as matrix polynomials")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the document here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive_f64)]
    pub rel_matrix_tol: f64,

    #[arg(long, global = true, default_value_t = 1e-10, value_parser = positive_f64)]
    pub unitarity_tol: f64,

    #[arg(long, global = true, default_value_t = 1e-6, value_parser = positive_f64)]
    pub quad_tol: f64,

    #[arg(long, global = true, default_value_t = 40.0, value_parser = positive_f64)]
    pub quad_cutoff_base: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expansion coefficients for k = 0..2j.
    Coeffs(CoeffsArgs),
    /// Run the identity suite for every spin up to --max-two-j.
    Verify(VerifyArgs),
    /// Time polynomial evaluation against direct inversion and exponentiation.
    Bench(BenchArgs),
    /// Central factorial magnitudes and determinant coefficients.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Cfz,
    Cayley,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SpinArg {
    #[arg(long)]
    pub two_j: Option<u32>,

    /// Spin as a fraction ("3/2") or decimal ("1.5").
    #[arg(long)]
    pub spin: Option<SpinLabel>,
}

impl SpinArg {
    fn label(&self) -> Result<SpinLabel, CliError> {
        let j = match (self.two_j, self.spin) {
            (Some(t), _) => SpinLabel::from_two_j(t),
            (None, Some(s)) => s,
            (None, None) => return Err(CliError::Usage("one of --two-j or --spin is required".into())),
        };
        check_two_j(j.two_j())?;
        Ok(j)
    }
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub spin: SpinArg,

    #[arg(long, value_enum)]
    pub form: Form,

    #[arg(long, allow_negative_numbers = true, value_parser = finite_f64)]
    pub theta: Option<f64>,

    #[arg(long, allow_negative_numbers = true, value_parser = finite_f64)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 25)]
    pub max_two_j: u32,

    /// Number of random rotation axes in the sweep.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub axes: u32,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated list of 2j values.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub two_j: Vec<u32>,

    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub reps: u32,

    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true, value_parser = finite_f64)]
    pub alpha: f64,

    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true, value_parser = finite_f64)]
    pub theta: f64,

    /// Rotation axis "x,y,z"; a seeded random axis when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub axis: Option<Axis>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub max_j: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

fn finite_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v = finite_f64(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{s:?} must be positive"))
    }
}

fn check_two_j(two_j: u32) -> Result<(), CliError> {
    if two_j > MAX_TWO_J {
        return Err(CliError::Usage(format!("two_j = {two_j} exceeds the limit of {MAX_TWO_J}")));
    }
    Ok(())
}

/// Outcome of one command: the document and whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub record: OutputRecord,
    pub all_passed: bool,
}

impl Cli {
    pub fn tolerances(&self) -> ToleranceConfig {
        ToleranceConfig {
            rel_matrix_tol: self.rel_matrix_tol,
            unitarity_tol: self.unitarity_tol,
            quad_tol: self.quad_tol,
            quad_cutoff_base: self.quad_cutoff_base,
        }
    }

    pub fn execute(&self) -> Result<Outcome, CliError> {
        let cfg = self.tolerances();
        match &self.command {
            Command::Coeffs(a) => cmd_coeffs(a),
            Command::Verify(a) => cmd_verify(a, &cfg),
            Command::Bench(a) => cmd_bench(a, &cfg),
            Command::Table(a) => cmd_table(a),
        }
    }
}

fn inputs_spin(inputs: &mut Map<String, Value>, j: SpinLabel) {
    inputs.insert("two_j".into(), Value::from(j.two_j()));
    inputs.insert("spin".into(), Value::from(j.to_string()));
}

pub fn cmd_coeffs(args: &CoeffsArgs) -> Result<Outcome, CliError> {
    let j = args.spin.label()?;
    let mut record = OutputRecord::new("coeffs");
    inputs_spin(&mut record.inputs, j);
    match (args.form, args.theta, args.alpha) {
        (Form::Cfz, Some(theta), None) => {
            record.inputs.insert("form".into(), Value::from("cfz"));
            record.inputs.insert("theta".into(), float(theta));
            let set = CfzExpansion::new(j).coefficients(theta);
            for (k, a) in set.values.iter().enumerate() {
                let mut row = Map::new();
                row.insert("k".into(), Value::from(k));
                row.insert("cfz".into(), float(*a));
                record.rows.push(row);
            }
        }
        (Form::Cayley, None, Some(alpha)) => {
            record.inputs.insert("form".into(), Value::from("cayley"));
            record.inputs.insert("alpha".into(), float(alpha));
            let set = ResolventExpansion::new(j).coefficients(alpha);
            for (k, (b, c)) in set.resolvent_values.iter().zip(&set.cayley_values).enumerate() {
                let mut row = Map::new();
                row.insert("k".into(), Value::from(k));
                row.insert("resolvent".into(), float(*b));
                row.insert("cayley".into(), float(*c));
                record.rows.push(row);
            }
        }
        (Form::Cfz, _, _) => return Err(CliError::Usage("--form cfz takes --theta and not --alpha".into())),
        (Form::Cayley, _, _) => return Err(CliError::Usage("--form cayley takes --alpha and not --theta".into())),
    }
    Ok(Outcome {
        record,
        all_passed: true,
    })
}

pub fn report_row(two_j: u32, r: &VerificationReport) -> Map<String, Value> {
    let mut row = Map::new();
    row.insert("two_j".into(), Value::from(two_j));
    row.insert("identity".into(), Value::from(r.identity_name.clone()));
    let params: Map<String, Value> = r
        .parameters
        .iter()
        .filter(|(k, _)| k.as_str() != "two_j")
        .map(|(k, v)| (k.clone(), float(*v)))
        .collect();
    row.insert("parameters".into(), Value::Object(params));
    row.insert("residual".into(), float(r.residual));
    row.insert("tolerance".into(), float(r.tolerance));
    row.insert("passed".into(), Value::from(r.passed));
    row
}

fn tolerance_inputs(inputs: &mut Map<String, Value>, cfg: &ToleranceConfig) {
    inputs.insert("rel_matrix_tol".into(), float(cfg.rel_matrix_tol));
    inputs.insert("unitarity_tol".into(), float(cfg.unitarity_tol));
    inputs.insert("quad_tol".into(), float(cfg.quad_tol));
    inputs.insert("quad_cutoff_base".into(), float(cfg.quad_cutoff_base));
}

pub fn cmd_verify(args: &VerifyArgs, cfg: &ToleranceConfig) -> Result<Outcome, CliError> {
    check_two_j(args.max_two_j)?;
    let grid = SweepGrid::with_axes(args.axes as usize, args.seed);
    let mut record = OutputRecord::new("verify");
    record.inputs.insert("max_two_j".into(), Value::from(args.max_two_j));
    record.inputs.insert("axes".into(), Value::from(args.axes));
    record.inputs.insert("seed".into(), Value::from(args.seed));
    tolerance_inputs(&mut record.inputs, cfg);

    let mut all_passed = true;
    for two_j in 0..=args.max_two_j {
        for r in run_identity_suite(SpinLabel::from_two_j(two_j), cfg, &grid) {
            all_passed &= r.passed;
            record.rows.push(report_row(two_j, &r));
        }
    }
    Ok(Outcome { record, all_passed })
}

fn median_seconds<T>(reps: u32, mut f: impl FnMut() -> T) -> (f64, T) {
    let mut times = Vec::with_capacity(reps as usize);
    let mut last = None;
    for _ in 0..reps {
        let start = Instant::now();
        let v = black_box(f());
        times.push(start.elapsed().as_secs_f64());
        last = Some(v);
    }
    times.sort_by(f64::total_cmp);
    let n = times.len();
    let median = if n % 2 == 1 {
        times[n / 2]
    } else {
        0.5 * (times[n / 2 - 1] + times[n / 2])
    };
    (median, last.expect("reps >= 1"))
}

pub fn cmd_bench(args: &BenchArgs, cfg: &ToleranceConfig) -> Result<Outcome, CliError> {
    if args.two_j.is_empty() {
        return Err(CliError::Usage("--two-j needs at least one value".into()));
    }
    for &t in &args.two_j {
        check_two_j(t)?;
    }
    let axis = args.axis.unwrap_or_else(|| random_axes(1, DEFAULT_SEED)[0]);
    let mut record = OutputRecord::new("bench");
    record.inputs.insert(
        "two_j".into(),
        Value::Array(args.two_j.iter().map(|&t| Value::from(t)).collect()),
    );
    record.inputs.insert("reps".into(), Value::from(args.reps));
    record.inputs.insert("alpha".into(), float(args.alpha));
    record.inputs.insert("theta".into(), float(args.theta));
    let [nx, ny, nz] = axis.components();
    record.inputs.insert("axis".into(), Value::Array(vec![float(nx), float(ny), float(nz)]));
    tolerance_inputs(&mut record.inputs, cfg);

    let mut all_passed = true;
    for &two_j in &args.two_j {
        let j = SpinLabel::from_two_j(two_j);
        let d = j.dim() as f64;
        let resolvent = ResolventExpansion::new(j);
        let cfz = CfzExpansion::new(j);

        let (t_cayley, cayley) = median_seconds(args.reps, || resolvent.cayley_polynomial(args.alpha, &axis));
        let (t_lu, lu) = median_seconds(args.reps, || {
            oracle_cayley(j, args.alpha, &axis).expect("I - 2ia n.J is invertible for real a")
        });
        let (t_cfz, exp_poly) = median_seconds(args.reps, || cfz.polynomial(args.theta, &axis));
        let (t_eig, exp_eig) = median_seconds(args.reps, || oracle_expm(j, args.theta, &axis));

        let cayley_residual = max_abs(&(&cayley - &lu));
        let cayley_tol = cfg.rel_matrix_tol * max_abs(&lu);
        let exp_residual = max_abs(&(&exp_poly - &exp_eig));
        let exp_tol = cfg.rel_matrix_tol * d;

        for (method, seconds, residual, tol, m) in [
            ("cayley_polynomial", t_cayley, cayley_residual, cayley_tol, &cayley),
            ("lu_inverse", t_lu, cayley_residual, cayley_tol, &lu),
            ("cfz_polynomial", t_cfz, exp_residual, exp_tol, &exp_poly),
            ("eigen_exponential", t_eig, exp_residual, exp_tol, &exp_eig),
        ] {
            let passed = residual <= tol;
            all_passed &= passed;
            let mut row = Map::new();
            row.insert("two_j".into(), Value::from(two_j));
            row.insert("method".into(), Value::from(method));
            row.insert("median_seconds".into(), float(seconds));
            row.insert("residual".into(), float(residual));
            row.insert("tolerance".into(), float(tol));
            row.insert("unitarity".into(), float(unitarity(m)));
            row.insert("passed".into(), Value::from(passed));
            record.rows.push(row);
        }
    }
    Ok(Outcome { record, all_passed })
}

fn unitarity(u: &SpinMatrix) -> f64 {
    let d = u.nrows();
    max_abs(&(u * u.adjoint() - SpinMatrix::identity(d, d)))
}

pub fn cmd_table(args: &TableArgs) -> Result<Outcome, CliError> {
    if args.max_j < 0 {
        return Err(CliError::Usage(format!("--max-j must be non-negative, got {}", args.max_j)));
    }
    let max_j = u32::try_from(args.max_j)
        .ok()
        .filter(|j| j.saturating_mul(2) <= MAX_TWO_J)
        .ok_or_else(|| CliError::Usage(format!("--max-j {} exceeds the limit of {}", args.max_j, MAX_TWO_J / 2)))?;

    let mut record = OutputRecord::new("table");
    record.inputs.insert("max_j".into(), Value::from(max_j));
    for jj in 0..=max_j {
        let j = SpinLabel::from_two_j(2 * jj);
        let magnitudes = central_factorial_magnitudes(j).expect("integer spin");
        let det = det_polynomial(j);
        for (m, (mag, c)) in magnitudes.iter().zip(&det.even_coeffs).enumerate() {
            let mut row = Map::new();
            row.insert("j".into(), Value::from(jj));
            row.insert("m".into(), Value::from(m));
            row.insert("magnitude".into(), Value::from(mag.to_string()));
            row.insert("det_coefficient".into(), Value::from(c.to_string()));
            record.rows.push(row);
        }
    }
    Ok(Outcome {
        record,
        all_passed: true,
    })
}

/// Parses `args`, runs the command and writes the document. Returns the
/// process exit code: 0 when every check passed, 1 on verification
/// failures, 2 on usage or I/O errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let outcome = match cli.execute() {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let text = match cli.format {
        Format::Json => outcome.record.to_json(),
        Format::Csv => outcome.record.to_csv(),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    if outcome.all_passed {
        0
    } else {
        1
    }
}
