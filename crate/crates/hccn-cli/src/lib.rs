//! `hccn`: command-line front end for the hybrid-network coverage and rate
//! engines in `hccn-core`.
//!
//! Subcommands map one-to-one onto the library surface: `coverage` and `rate`
//! run the analytic chains, `mc-coverage`, `mc-rate` and `ap-terms` run the
//! Monte Carlo reference engine, `sweep` evaluates a metric over a parameter
//! grid and writes CSV or JSON, and `validate` checks a config file.
//!
//! Exit codes: `0` success, `1` bad input (flags, config files, grids, I/O),
//! `2` a numeric engine failed its accuracy contract — the failing module is
//! named on stderr.
//!
//! Environment: `HCCN_THREADS` fixes the worker-thread count (every result is
//! bit-identical for any value, threads only change wall time);
//! `SOURCE_DATE_EPOCH` pins the metadata timestamp for reproducible files.

pub mod emit;
pub mod sweep;

use clap::{Args, Parser, Subcommand};
use emit::Format;
use hccn_core::coverage::{coverage, CoverageContext};
use hccn_core::mcsim::{self, McEstimate};
use hccn_core::moments;
use hccn_core::params::NetworkParams;
use hccn_core::rate::{rate, RateContext};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use sweep::{Engines, Metric, SweepParam, SweepSpec, SWEEP_PARAMS};

/// The built-in reference configuration, used whenever `--config` is omitted.
pub const DEFAULT_CONFIG_JSON: &str = include_str!("../../../configs/tableI.json");

/// Parameters of the built-in reference configuration.
pub fn default_params() -> NetworkParams {
    NetworkParams::from_config(DEFAULT_CONFIG_JSON).expect("the built-in config is valid")
}

/// Everything that can go wrong after argument parsing, split by exit code.
#[derive(Debug)]
pub enum AppError {
    /// Unusable input: flags, config contents, value grids. Exit code 1.
    Validation(String),
    /// An engine failed its numeric contract. Exit code 2.
    Numeric {
        module: &'static str,
        message: String,
    },
    /// Filesystem failure, reported with the offending path. Exit code 1.
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl AppError {
    pub fn numeric(module: &'static str, message: impl Into<String>) -> Self {
        AppError::Numeric {
            module,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Validation(_) | AppError::Io { .. } => 1,
            AppError::Numeric { .. } => 2,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Validation(msg) => write!(f, "{msg}"),
            AppError::Numeric { module, message } => {
                write!(f, "numeric failure in {module}: {message}")
            }
            AppError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for AppError {}

#[derive(Parser, Debug)]
#[command(
    name = "hccn",
    version,
    about = "Coverage and rate engines for a hybrid cellular / cell-free network",
    after_help = "Environment:\n  HCCN_THREADS       worker-thread count; results are identical for any value\n  SOURCE_DATE_EPOCH  pins the output timestamp for reproducible files"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a JSON config; prints OK or lists the violations
    Validate {
        /// Path to the JSON configuration
        #[arg(long)]
        config: PathBuf,
    },
    /// Analytic coverage probability P[SINR > T]
    Coverage {
        /// JSON config; defaults to the built-in reference setup
        #[arg(long)]
        config: Option<PathBuf>,
        /// SINR threshold in dB
        #[arg(long = "T-dB", allow_hyphen_values = true, default_value_t = 5.0)]
        t_db: f64,
    },
    /// Analytic mean spectral efficiency E[ln(1 + SINR)], nats
    Rate {
        /// JSON config; defaults to the built-in reference setup
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Monte Carlo coverage probability with a 95% confidence interval
    McCoverage {
        /// JSON config; defaults to the built-in reference setup
        #[arg(long)]
        config: Option<PathBuf>,
        /// SINR threshold in dB
        #[arg(long = "T-dB", allow_hyphen_values = true, default_value_t = 5.0)]
        t_db: f64,
        /// Independent network realizations
        #[arg(long, default_value_t = mcsim::DEFAULT_TRIALS, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Master seed; every trial derives its own stream from it
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo mean rate with a 95% confidence interval
    McRate {
        /// JSON config; defaults to the built-in reference setup
        #[arg(long)]
        config: Option<PathBuf>,
        /// Independent network realizations
        #[arg(long, default_value_t = mcsim::DEFAULT_TRIALS, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Master seed; every trial derives its own stream from it
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Mean AP signal amplitude and AP interference power: analytic vs Monte Carlo
    ApTerms {
        /// JSON config; defaults to the built-in reference setup
        #[arg(long)]
        config: Option<PathBuf>,
        /// Independent deployments to average over
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Master seed; every trial derives its own stream from it
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate a metric over a one-parameter grid and write CSV or JSON
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// JSON config; defaults to the built-in reference setup
    #[arg(long)]
    config: Option<PathBuf>,
    /// Stock figure grid (fig4..fig9); exclusive with --param/--values/--metric
    #[arg(long)]
    preset: Option<String>,
    /// Quantity to vary: P_A_dBm, lambda_A_per_km2, lambda_U_per_km2, alpha2 or T_dB
    #[arg(long)]
    param: Option<String>,
    /// Grid: inclusive start:step:stop or a comma-separated list
    #[arg(long, allow_hyphen_values = true)]
    values: Option<String>,
    /// Quantity to evaluate at each point [default: coverage]
    #[arg(long, value_enum)]
    metric: Option<Metric>,
    /// Engines to run at each point
    #[arg(long, value_enum, default_value = "both")]
    engines: Engines,
    /// Monte Carlo trials per grid point
    #[arg(long, default_value_t = mcsim::DEFAULT_TRIALS, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Master seed for the Monte Carlo engine
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coverage threshold in dB for sweeps over parameters other than T_dB
    #[arg(long = "T-dB", allow_hyphen_values = true, default_value_t = 5.0)]
    t_db: f64,
    /// Output file; the extension picks the format unless --format is given
    #[arg(long)]
    out: PathBuf,
    /// Output encoding, overriding the extension
    #[arg(long, value_enum)]
    format: Option<Format>,
}

/// Parse arguments, size the worker pool and dispatch. Returns the process
/// exit code instead of exiting so tests can call it in-process.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = init_thread_pool() {
        eprintln!("hccn: {msg}");
        return 1;
    }
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("hccn: {e}");
            e.exit_code()
        }
    }
}

/// Apply `HCCN_THREADS` to the global worker pool, once per process.
fn init_thread_pool() -> Result<(), String> {
    static INIT: OnceLock<Result<(), String>> = OnceLock::new();
    INIT.get_or_init(|| {
        let raw = match std::env::var("HCCN_THREADS") {
            Err(_) => return Ok(()),
            Ok(raw) => raw,
        };
        let threads: usize = raw
            .trim()
            .parse()
            .map_err(|_| format!("HCCN_THREADS must be a positive integer, got {raw:?}"))?;
        if threads == 0 {
            return Err("HCCN_THREADS must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| format!("could not size the worker pool: {e}"))
    })
    .clone()
}

fn read_config_file(path: &Path) -> Result<String, AppError> {
    std::fs::read_to_string(path).map_err(|e| AppError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Resolve the parameters for a run: the given config file, or the built-in
/// reference setup when none is given.
fn load_params(config: Option<&Path>) -> Result<NetworkParams, AppError> {
    let text = match config {
        Some(path) => read_config_file(path)?,
        None => DEFAULT_CONFIG_JSON.to_string(),
    };
    NetworkParams::from_config(&text).map_err(|e| AppError::Validation(e.to_string()))
}

fn dispatch(command: Command) -> Result<(), AppError> {
    match command {
        Command::Validate { config } => cmd_validate(&config),
        Command::Coverage { config, t_db } => cmd_coverage(config.as_deref(), t_db),
        Command::Rate { config } => cmd_rate(config.as_deref()),
        Command::McCoverage {
            config,
            t_db,
            trials,
            seed,
        } => cmd_mc_coverage(config.as_deref(), t_db, trials, seed),
        Command::McRate {
            config,
            trials,
            seed,
        } => cmd_mc_rate(config.as_deref(), trials, seed),
        Command::ApTerms {
            config,
            trials,
            seed,
        } => cmd_ap_terms(config.as_deref(), trials, seed),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

fn cmd_validate(path: &Path) -> Result<(), AppError> {
    let text = read_config_file(path)?;
    let params =
        NetworkParams::from_config(&text).map_err(|e| AppError::Validation(e.to_string()))?;
    // Errors were fatal above; anything left is a warning worth seeing.
    for violation in params.validate() {
        eprintln!("hccn: {violation}");
    }
    println!("OK");
    Ok(())
}

fn linear_threshold_flag(t_db: f64) -> Result<f64, AppError> {
    let t = 10f64.powf(t_db / 10.0);
    if !t.is_finite() || t <= 0.0 {
        return Err(AppError::Validation(format!(
            "--T-dB {t_db} is outside the evaluable range"
        )));
    }
    Ok(t)
}

fn cmd_coverage(config: Option<&Path>, t_db: f64) -> Result<(), AppError> {
    let p = load_params(config)?;
    let threshold = linear_threshold_flag(t_db)?;
    let ctx = CoverageContext::new(&p, threshold);
    let summary = coverage(&ctx).map_err(|e| AppError::numeric("coverage", e.to_string()))?;
    println!("{}", summary.probability);
    Ok(())
}

fn cmd_rate(config: Option<&Path>) -> Result<(), AppError> {
    let p = load_params(config)?;
    let ctx = RateContext::new(&p);
    let r = rate(&ctx).map_err(|e| AppError::numeric("rate", e.to_string()))?;
    println!("{r}");
    Ok(())
}

fn print_mc_estimate(est: &McEstimate) {
    println!(
        "approx={} ci={} exact={} exact_ci={} trials={} seed={} resampled={}",
        est.approx.mean,
        est.approx.ci_half_width,
        est.exact.mean,
        est.exact.ci_half_width,
        est.approx.trials,
        est.approx.seed,
        est.resampled_deployments
    );
}

fn cmd_mc_coverage(config: Option<&Path>, t_db: f64, trials: u64, seed: u64) -> Result<(), AppError> {
    let p = load_params(config)?;
    let threshold = linear_threshold_flag(t_db)?;
    let d = p.derive();
    let est = mcsim::estimate_coverage(&p, &d, threshold, trials, seed)
        .map_err(|e| AppError::numeric("mcsim", e.to_string()))?;
    print_mc_estimate(&est);
    Ok(())
}

fn cmd_mc_rate(config: Option<&Path>, trials: u64, seed: u64) -> Result<(), AppError> {
    let p = load_params(config)?;
    let d = p.derive();
    let est = mcsim::estimate_rate(&p, &d, trials, seed)
        .map_err(|e| AppError::numeric("mcsim", e.to_string()))?;
    print_mc_estimate(&est);
    Ok(())
}

fn cmd_ap_terms(config: Option<&Path>, trials: u64, seed: u64) -> Result<(), AppError> {
    let p = load_params(config)?;
    let d = p.derive();
    let analytic_signal = moments::mean_ap_signal(&p, &d);
    let analytic_interference = moments::mean_ap_interference(&p, &d);
    let (signal, interference) = mcsim::estimate_ap_terms(&p, &d, trials, seed);
    println!(
        "ap_signal analytic={} mc={} ci={}",
        analytic_signal, signal.mean, signal.ci_half_width
    );
    println!(
        "ap_interference analytic={} mc={} ci={}",
        analytic_interference, interference.mean, interference.ci_half_width
    );
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), AppError> {
    let base = load_params(args.config.as_deref())?;
    let (metric, param, values_text) = if let Some(name) = &args.preset {
        let preset = sweep::find_preset(name).ok_or_else(|| {
            let names: Vec<&str> = sweep::PRESETS.iter().map(|p| p.name).collect();
            AppError::Validation(format!(
                "unknown preset {name:?}; available: {}",
                names.join(", ")
            ))
        })?;
        if args.param.is_some() || args.values.is_some() || args.metric.is_some() {
            return Err(AppError::Validation(
                "--preset already fixes the metric, parameter and grid; \
                 drop --param/--values/--metric or drop --preset"
                    .into(),
            ));
        }
        (preset.metric, preset.param, preset.values.to_string())
    } else {
        let key = args.param.as_deref().ok_or_else(|| {
            AppError::Validation("one of --preset or --param is required".into())
        })?;
        let param = SweepParam::from_key(key).ok_or_else(|| {
            let keys: Vec<&str> = SWEEP_PARAMS.iter().map(|p| p.key()).collect();
            AppError::Validation(format!(
                "unknown sweep parameter {key:?}; recognized: {}",
                keys.join(", ")
            ))
        })?;
        let values = args
            .values
            .clone()
            .ok_or_else(|| AppError::Validation("--values is required with --param".into()))?;
        (args.metric.unwrap_or(Metric::Coverage), param, values)
    };
    if metric == Metric::Rate && param == SweepParam::TDb {
        return Err(AppError::Validation(
            "T_dB sweeps only make sense for the coverage metric; \
             the rate metric has no threshold"
                .into(),
        ));
    }
    let values = sweep::parse_values(&values_text).map_err(AppError::Validation)?;
    let format = args
        .format
        .or_else(|| Format::from_extension(&args.out))
        .ok_or_else(|| {
            AppError::Validation(format!(
                "cannot infer the output format from {:?}; use a .csv/.json \
                 extension or pass --format",
                args.out
            ))
        })?;
    let spec = SweepSpec {
        base,
        param,
        values,
        metric,
        engines: args.engines,
        trials: args.trials,
        seed: args.seed,
        t_db: args.t_db,
    };
    let rows = sweep::run_sweep(&spec)?;
    let meta = sweep::metadata(&spec);
    let text = match format {
        Format::Csv => emit::to_csv(&meta, metric, &rows),
        Format::Json => emit::to_json(&meta, metric, &rows),
    };
    std::fs::write(&args.out, &text).map_err(|e| AppError::Io {
        path: args.out.clone(),
        source: e,
    })?;
    println!(
        "wrote {} rows to {} ({} vs {}, engines {})",
        rows.len(),
        args.out.display(),
        metric.name(),
        param.key(),
        args.engines.name()
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_built_in_config_resolves_to_the_reference_setup() {
        let p = default_params();
        assert_eq!(p.lambda_b, 40.0 * 1e-6);
        assert_eq!(p.lambda_a, 200.0 * 1e-6);
        assert_eq!(p.lambda_u, 120.0 * 1e-6);
        assert_eq!(p.alpha1, 2.8);
        assert_eq!(p.alpha2, 1.5);
        assert!((p.p_b - 100.0).abs() < 1e-9);
        assert!((p.p_a - 0.01).abs() < 1e-12);
        assert_eq!(p.n_b, 8);
        assert_eq!(p.n_a, 2);
        assert_eq!(p.radius, 500.0);
        assert!(p.validate().is_empty());
    }

    #[test]
    fn exit_codes_split_validation_from_numerics() {
        assert_eq!(AppError::Validation("x".into()).exit_code(), 1);
        assert_eq!(
            AppError::Io {
                path: "x".into(),
                source: std::io::Error::from(std::io::ErrorKind::NotFound)
            }
            .exit_code(),
            1
        );
        assert_eq!(AppError::numeric("coverage", "x").exit_code(), 2);
        let msg = AppError::numeric("mcsim", "ran dry").to_string();
        assert!(msg.contains("mcsim"), "{msg}");
    }

    #[test]
    fn missing_config_files_surface_the_path() {
        let err = load_params(Some(Path::new("/definitely/not/here.json"))).unwrap_err();
        match &err {
            AppError::Io { path, .. } => {
                assert!(path.to_string_lossy().contains("not/here.json"));
            }
            other => panic!("expected an I/O error, got {other:?}"),
        }
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn bad_config_contents_are_validation_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, r#"{"lambda_B_per_km2": -4}"#).unwrap();
        let err = load_params(Some(&path)).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        let msg = err.to_string();
        assert!(
            msg.contains("missing field") || msg.contains("lambda_B"),
            "{msg}"
        );
    }

    #[test]
    fn absurd_thresholds_fail_validation_before_the_engines_run() {
        assert!(linear_threshold_flag(5.0).is_ok());
        assert!(linear_threshold_flag(-5000.0).is_err());
        assert!(linear_threshold_flag(5000.0).is_err());
        assert!(linear_threshold_flag(f64::NAN).is_err());
    }
}
