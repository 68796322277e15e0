//! Command-line interface to the `lomax` crate.
//!
//! The binary exposes the library workflows as subcommands:
//!
//! * `fit` estimates Lomax parameters from a data file,
//! * `simulate` runs a Monte Carlo estimator comparison for one configuration,
//! * `grid` runs many configurations from a config file,
//! * `gof` runs the parametric-bootstrap Kolmogorov-Smirnov test,
//! * `degroup` spreads runs of tied observations before fitting,
//! * `sample` draws a reproducible Lomax sample.
//!
//! Every subcommand honors `--format table|csv|json` and `--out <path>`.
//! Exit codes: 0 success, 1 usage or invalid parameters, 2 unreadable or
//! invalid data, 3 estimation or bootstrap failure.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lomax::data::{degroup, load_sample, SampleFormat};
use lomax::gof::ks_bootstrap_test;
use lomax::simulation::{run_grid, run_monte_carlo, substream, MCConfig};
use lomax::{estimate_many, LomaxError, LomaxParams, Method, Sample};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_ESTIMATION: u8 = 3;

/// A terminal failure: message for stderr plus the process exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<LomaxError> for Failure {
    fn from(e: LomaxError) -> Self {
        let code = match &e {
            LomaxError::DataError { .. } | LomaxError::InvalidSample { .. } => EXIT_DATA,
            LomaxError::EstimationFailed { .. }
            | LomaxError::BootstrapUnstable { .. }
            | LomaxError::NumericalFailure { .. } => EXIT_ESTIMATION,
            LomaxError::InvalidParameter { .. } | LomaxError::MomentDoesNotExist { .. } => {
                EXIT_USAGE
            }
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn data_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_DATA,
        message: message.into(),
    }
}

#[derive(Parser)]
#[command(
    name = "lomax",
    version,
    about = "Fit, simulate, and test the Lomax (Pareto type II) distribution",
    after_help = "Methods: MME, LME, PWME, MLE, MLE.b, MDE.CvM, MDE.SD, MDE.KL, \
                  MDE.chi2, MDE.TV (names are case-insensitive)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads for simulation and bootstrap loops (0 = all cores).
    /// Results are identical for every thread count.
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    threads: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Aligned columns for reading.
    Table,
    /// Machine-readable CSV with full float precision.
    Csv,
    /// Pretty-printed JSON with full float precision.
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one or all estimators to a sample file.
    Fit {
        /// Data file: one value per line, or CSV when --column is given.
        file: PathBuf,

        /// Method name, or "all" for every estimator, or a comma-separated
        /// list.
        #[arg(long, default_value = "all")]
        method: String,

        /// Subtract this location shift from every observation first.
        #[arg(long, value_name = "C", allow_hyphen_values = true)]
        shift: Option<f64>,

        /// Spread runs of tied values evenly over unit-width intervals
        /// before fitting (for data recorded to the nearest integer).
        #[arg(long)]
        degroup: bool,

        /// Read values from this named column of a CSV file.
        #[arg(long, value_name = "NAME")]
        column: Option<String>,
    },

    /// Monte Carlo comparison of estimators for one true parameter pair.
    Simulate {
        /// True scale parameter.
        #[arg(long)]
        sigma: f64,

        /// True shape parameter.
        #[arg(long)]
        beta: f64,

        /// Sample size per replication.
        #[arg(long)]
        n: usize,

        /// Number of replications.
        #[arg(long)]
        reps: usize,

        /// Base seed; each replication derives its own stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Methods to compare: "all" or a comma-separated list.
        #[arg(long, default_value = "all")]
        methods: String,

        /// Percentage of the largest estimates dropped for the trimmed
        /// variance, in [0, 100).
        #[arg(long, default_value_t = 0.0, value_name = "PCT")]
        trim: f64,
    },

    /// Run every simulation cell listed in a config file.
    ///
    /// Each non-empty line defines one cell with whitespace-separated
    /// key=value pairs: n, sigma, beta, and reps are required; seed, trim,
    /// and methods are optional. Text after # is a comment.
    Grid {
        /// Config file, one cell per line.
        #[arg(long, value_name = "FILE")]
        config: PathBuf,

        /// Seed for cells that do not set their own.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Parametric-bootstrap Kolmogorov-Smirnov goodness-of-fit test.
    Gof {
        /// Data file: one value per line, or CSV when --column is given.
        file: PathBuf,

        /// Estimator used for the fit and every bootstrap refit.
        #[arg(long)]
        method: String,

        /// Bootstrap replications.
        #[arg(long, default_value_t = 1000)]
        reps: usize,

        /// Seed for the bootstrap streams.
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Subtract this location shift from every observation first.
        #[arg(long, value_name = "C", allow_hyphen_values = true)]
        shift: Option<f64>,

        /// Read values from this named column of a CSV file.
        #[arg(long, value_name = "NAME")]
        column: Option<String>,
    },

    /// Spread runs of tied values evenly over unit-width intervals.
    Degroup {
        /// Data file: one value per line, or CSV when --column is given.
        file: PathBuf,

        /// Read values from this named column of a CSV file.
        #[arg(long, value_name = "NAME")]
        column: Option<String>,
    },

    /// Draw a reproducible Lomax sample.
    Sample {
        /// Scale parameter.
        #[arg(long)]
        sigma: f64,

        /// Shape parameter.
        #[arg(long)]
        beta: f64,

        /// Number of observations.
        #[arg(long)]
        n: usize,

        /// Seed for the stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };

    if cli.threads > 0 {
        let built = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
        if let Err(e) = built {
            eprintln!("error: could not configure {} threads: {e}", cli.threads);
            return ExitCode::from(EXIT_USAGE);
        }
    }

    let out = cli.out.clone();
    match run(cli) {
        Ok((text, code)) => {
            if let Err(f) = emit(&text, out.as_deref()) {
                eprintln!("error: {}", f.message);
                return ExitCode::from(f.code);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Dispatch one parsed invocation, returning the rendered output and the
/// exit code to use after it is emitted.
fn run(cli: Cli) -> Result<(String, u8), Failure> {
    let format = cli.format;
    let (mut text, code) = match cli.command {
        Command::Fit {
            file,
            method,
            shift,
            degroup: spread,
            column,
        } => cmd_fit(&file, &method, shift, spread, column.as_deref(), format)?,
        Command::Simulate {
            sigma,
            beta,
            n,
            reps,
            seed,
            methods,
            trim,
        } => cmd_simulate(sigma, beta, n, reps, seed, &methods, trim, format)?,
        Command::Grid { config, seed } => cmd_grid(&config, seed, format)?,
        Command::Gof {
            file,
            method,
            reps,
            seed,
            shift,
            column,
        } => cmd_gof(&file, &method, reps, seed, shift, column.as_deref(), format)?,
        Command::Degroup { file, column } => cmd_degroup(&file, column.as_deref(), format)?,
        Command::Sample {
            sigma,
            beta,
            n,
            seed,
        } => cmd_sample(sigma, beta, n, seed, format)?,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    Ok((text, code))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| data_error(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path, column: Option<&str>) -> Result<Sample, Failure> {
    let format = match column {
        Some(column) => SampleFormat::Csv { column },
        None => SampleFormat::Plain,
    };
    Ok(load_sample(path, format)?)
}

fn parse_methods(spec: &str) -> Result<Vec<Method>, Failure> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(Method::ALL.to_vec());
    }
    let mut methods = Vec::new();
    for token in spec.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let method = Method::parse(token).ok_or_else(|| {
            usage(format!(
                "unknown method {token:?}; known methods: {} (or \"all\")",
                method_names()
            ))
        })?;
        if !methods.contains(&method) {
            methods.push(method);
        }
    }
    if methods.is_empty() {
        return Err(usage("no methods given"));
    }
    Ok(methods)
}

fn method_names() -> String {
    Method::ALL
        .iter()
        .map(|m| m.name())
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_fit(
    file: &Path,
    method: &str,
    shift: Option<f64>,
    spread: bool,
    column: Option<&str>,
    format: Format,
) -> Result<(String, u8), Failure> {
    let sample = load(file, column)?;
    let sample = if spread { degroup(&sample)? } else { sample };
    let sample = match shift {
        Some(c) => sample.shifted(c)?,
        None => sample,
    };
    let methods = parse_methods(method)?;
    let rows = estimate_many(&sample, &methods);
    let text = match format {
        Format::Table => render::fit_table(&rows),
        Format::Csv => render::fit_csv(&rows),
        Format::Json => render::fit_json(&rows),
    };
    let code = if methods.len() == 1 && !rows[0].converged {
        EXIT_ESTIMATION
    } else {
        0
    };
    Ok((text, code))
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    sigma: f64,
    beta: f64,
    n: usize,
    reps: usize,
    seed: u64,
    methods: &str,
    trim: f64,
    format: Format,
) -> Result<(String, u8), Failure> {
    let config = MCConfig {
        n,
        sigma,
        beta,
        replications: reps,
        seed,
        methods: parse_methods(methods)?,
        trim_percent: trim,
    };
    let report = run_monte_carlo(&config)?;
    let reports = std::slice::from_ref(&report);
    let text = match format {
        Format::Table => render::report_table(&report),
        Format::Csv => render::reports_csv(reports),
        Format::Json => render::reports_json(reports),
    };
    Ok((text, 0))
}

fn cmd_grid(config: &Path, default_seed: u64, format: Format) -> Result<(String, u8), Failure> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| data_error(format!("{}: {e}", config.display())))?;
    let configs = parse_grid_config(&text, default_seed)?;
    let total = configs.len();
    let mut done = 0usize;
    let reports = run_grid(&configs, |r| {
        done += 1;
        eprintln!(
            "[{done}/{total}] n={} sigma={} beta={} reps={} done",
            r.n, r.sigma, r.beta, r.replications
        );
    })?;
    let text = match format {
        Format::Table => render::reports_table(&reports),
        Format::Csv => render::reports_csv(&reports),
        Format::Json => render::reports_json(&reports),
    };
    Ok((text, 0))
}

/// Parse a grid config: one cell per line as key=value pairs, `#` comments.
fn parse_grid_config(text: &str, default_seed: u64) -> Result<Vec<MCConfig>, Failure> {
    let mut configs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let mut n = None;
        let mut sigma = None;
        let mut beta = None;
        let mut reps = None;
        let mut seed = default_seed;
        let mut trim = 0.0;
        let mut methods = Method::ALL.to_vec();
        for token in line.split_whitespace() {
            let (key, value) = token.split_once('=').ok_or_else(|| {
                data_error(format!("config line {lineno}: expected key=value, got {token:?}"))
            })?;
            match key {
                "n" => n = Some(parse_field(value, lineno, key)?),
                "sigma" => sigma = Some(parse_field(value, lineno, key)?),
                "beta" => beta = Some(parse_field(value, lineno, key)?),
                "reps" => reps = Some(parse_field(value, lineno, key)?),
                "seed" => seed = parse_field(value, lineno, key)?,
                "trim" => trim = parse_field(value, lineno, key)?,
                "methods" => {
                    methods = parse_methods(value)
                        .map_err(|f| data_error(format!("config line {lineno}: {}", f.message)))?
                }
                other => {
                    return Err(data_error(format!(
                        "config line {lineno}: unknown key {other:?}"
                    )))
                }
            }
        }
        configs.push(MCConfig {
            n: require(n, "n", lineno)?,
            sigma: require(sigma, "sigma", lineno)?,
            beta: require(beta, "beta", lineno)?,
            replications: require(reps, "reps", lineno)?,
            seed,
            methods,
            trim_percent: trim,
        });
    }
    if configs.is_empty() {
        return Err(data_error("config contains no cells"));
    }
    Ok(configs)
}

fn require<T>(field: Option<T>, key: &str, lineno: usize) -> Result<T, Failure> {
    field.ok_or_else(|| data_error(format!("config line {lineno}: missing {key}=")))
}

fn parse_field<T>(value: &str, lineno: usize, key: &str) -> Result<T, Failure>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| {
        data_error(format!("config line {lineno}: bad value for {key}: {e}"))
    })
}

fn cmd_gof(
    file: &Path,
    method: &str,
    reps: usize,
    seed: u64,
    shift: Option<f64>,
    column: Option<&str>,
    format: Format,
) -> Result<(String, u8), Failure> {
    let sample = load(file, column)?;
    let sample = match shift {
        Some(c) => sample.shifted(c)?,
        None => sample,
    };
    let method = Method::parse(method).ok_or_else(|| {
        usage(format!(
            "unknown method {method:?}; known methods: {}",
            method_names()
        ))
    })?;
    let result = ks_bootstrap_test(&sample, method, reps, seed)?;
    let text = match format {
        Format::Table => render::gof_table(&result),
        Format::Csv => render::gof_csv(&result),
        Format::Json => render::gof_json(&result),
    };
    Ok((text, 0))
}

fn cmd_degroup(
    file: &Path,
    column: Option<&str>,
    format: Format,
) -> Result<(String, u8), Failure> {
    let sample = load(file, column)?;
    let spread = degroup(&sample)?;
    Ok((render_values(spread.values(), format), 0))
}

fn cmd_sample(
    sigma: f64,
    beta: f64,
    n: usize,
    seed: u64,
    format: Format,
) -> Result<(String, u8), Failure> {
    if n == 0 {
        return Err(usage("n must be at least 1"));
    }
    let params = LomaxParams::new(sigma, beta)?;
    let mut rng = substream(seed, 0);
    let values = params.sample(&mut rng, n);
    Ok((render_values(&values, format), 0))
}

fn render_values(values: &[f64], format: Format) -> String {
    match format {
        Format::Table => render::values_plain(values),
        Format::Csv => render::values_csv(values),
        Format::Json => render::values_json(values),
    }
}
