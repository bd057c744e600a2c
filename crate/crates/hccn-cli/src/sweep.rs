//! Parameter sweeps: grids, figure presets and per-point evaluation.
//!
//! A sweep varies exactly one quantity over a grid and evaluates the chosen
//! metric — coverage probability or mean rate — with the analytic engines,
//! the Monte Carlo reference engine, or both. Grid points are independent and
//! evaluated in parallel; Monte Carlo points all use the same master seed, so
//! neighbouring rows share common random numbers and the sampled curve is
//! smooth in the seed, not just in expectation.

use crate::emit::{self, Metadata};
use crate::AppError;
use hccn_core::coverage::{coverage, CoverageContext, CoverageSummary, COVERAGE_NODES};
use hccn_core::mathkit::gauss_legendre;
use hccn_core::mcsim;
use hccn_core::moments;
use hccn_core::params::{dbm_to_watts, NetworkParams, Severity};
use hccn_core::rate::{rate, RateContext};
use rayon::prelude::*;

/// Largest number of grid points a range expression may expand to.
const MAX_GRID_POINTS: usize = 100_000;

/// Quantity evaluated at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Metric {
    /// `P[SINR > T]` for the typical user.
    Coverage,
    /// Mean spectral efficiency `E[ln(1 + SINR)]`, nats.
    Rate,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Coverage => "coverage",
            Metric::Rate => "rate",
        }
    }

    /// Prefix of the per-metric output columns (`p_c_analytic`, `r_mc`, ...).
    pub fn column_prefix(self) -> &'static str {
        match self {
            Metric::Coverage => "p_c",
            Metric::Rate => "r",
        }
    }

    pub fn from_name(name: &str) -> Option<Metric> {
        match name {
            "coverage" => Some(Metric::Coverage),
            "rate" => Some(Metric::Rate),
            _ => None,
        }
    }
}

/// Which engines run at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Engines {
    Analytic,
    Mc,
    Both,
}

impl Engines {
    pub fn name(self) -> &'static str {
        match self {
            Engines::Analytic => "analytic",
            Engines::Mc => "mc",
            Engines::Both => "both",
        }
    }

    pub fn wants_analytic(self) -> bool {
        matches!(self, Engines::Analytic | Engines::Both)
    }

    pub fn wants_mc(self) -> bool {
        matches!(self, Engines::Mc | Engines::Both)
    }
}

/// The quantity a sweep varies. Grid values are in the same human units as
/// the JSON config (dBm, per km², dB); conversion to SI happens per point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    PADbm,
    LambdaAPerKm2,
    LambdaUPerKm2,
    Alpha2,
    TDb,
}

/// Every sweepable quantity, in the order shown to users.
pub const SWEEP_PARAMS: [SweepParam; 5] = [
    SweepParam::PADbm,
    SweepParam::LambdaAPerKm2,
    SweepParam::LambdaUPerKm2,
    SweepParam::Alpha2,
    SweepParam::TDb,
];

impl SweepParam {
    /// Key used on the command line, in output headers and in metadata.
    pub fn key(self) -> &'static str {
        match self {
            SweepParam::PADbm => "P_A_dBm",
            SweepParam::LambdaAPerKm2 => "lambda_A_per_km2",
            SweepParam::LambdaUPerKm2 => "lambda_U_per_km2",
            SweepParam::Alpha2 => "alpha2",
            SweepParam::TDb => "T_dB",
        }
    }

    pub fn from_key(key: &str) -> Option<SweepParam> {
        SWEEP_PARAMS.into_iter().find(|p| p.key() == key)
    }

    /// The base parameters with this quantity set to `value`. `T_dB` does not
    /// live in [`NetworkParams`]; it reaches the coverage engine as the
    /// per-point threshold instead.
    pub fn apply(self, base: &NetworkParams, value: f64) -> NetworkParams {
        let mut p = *base;
        match self {
            SweepParam::PADbm => p.p_a = dbm_to_watts(value),
            SweepParam::LambdaAPerKm2 => p.lambda_a = value * 1e-6,
            SweepParam::LambdaUPerKm2 => p.lambda_u = value * 1e-6,
            SweepParam::Alpha2 => p.alpha2 = value,
            SweepParam::TDb => {}
        }
        p
    }
}

/// Parse a value grid: either an inclusive `start:step:stop` range or a
/// comma-separated list. All values must be finite.
pub fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("the value grid is empty".into());
    }
    let parse_one = |tok: &str| -> Result<f64, String> {
        let v: f64 = tok
            .trim()
            .parse()
            .map_err(|e| format!("bad number {tok:?} in value grid: {e}"))?;
        if !v.is_finite() {
            return Err(format!("value grid entries must be finite, got {tok:?}"));
        }
        Ok(v)
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("a range grid must be start:step:stop, got {text:?}"));
        }
        let start = parse_one(parts[0])?;
        let step = parse_one(parts[1])?;
        let stop = parse_one(parts[2])?;
        if step == 0.0 {
            return Err("the range step must be nonzero".into());
        }
        let span = stop - start;
        if span != 0.0 && span.signum() != step.signum() {
            return Err(format!(
                "a step of {step} never reaches {stop} from {start}"
            ));
        }
        // Count-based expansion keeps the endpoints exact; the epsilon admits
        // spans that miss an integer multiple of the step by float rounding.
        let n = (span / step + 1e-9).floor() as usize + 1;
        if n > MAX_GRID_POINTS {
            return Err(format!("range expands to {n} points (limit {MAX_GRID_POINTS})"));
        }
        Ok((0..n).map(|i| start + step * i as f64).collect())
    } else {
        text.split(',').map(parse_one).collect()
    }
}

/// A named, ready-made sweep reproducing one figure of the evaluation.
#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub metric: Metric,
    pub param: SweepParam,
    pub values: &'static str,
    /// Coverage threshold used when the sweep parameter is not `T_dB`.
    pub t_db: f64,
    pub about: &'static str,
}

/// The stock figure grids. Each emits the curve at the default configuration;
/// the figures' remaining curves come from rerunning with an edited config.
pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig4",
        metric: Metric::Coverage,
        param: SweepParam::TDb,
        values: "-10:2:20",
        t_db: 5.0,
        about: "coverage vs SINR threshold; rerun with other P_A values for the power family",
    },
    Preset {
        name: "fig5",
        metric: Metric::Coverage,
        param: SweepParam::TDb,
        values: "-10:2:20",
        t_db: 5.0,
        about: "coverage vs SINR threshold; rerun with other lambda_A values for the density family",
    },
    Preset {
        name: "fig6",
        metric: Metric::Coverage,
        param: SweepParam::LambdaAPerKm2,
        values: "100:100:600",
        t_db: 5.0,
        about: "coverage at a 5 dB threshold vs AP density",
    },
    Preset {
        name: "fig7",
        metric: Metric::Rate,
        param: SweepParam::LambdaAPerKm2,
        values: "100:100:600",
        t_db: 5.0,
        about: "mean rate vs AP density",
    },
    Preset {
        name: "fig8",
        metric: Metric::Rate,
        param: SweepParam::PADbm,
        values: "-20:5:20",
        t_db: 5.0,
        about: "mean rate vs AP transmit power",
    },
    Preset {
        name: "fig9",
        metric: Metric::Rate,
        param: SweepParam::LambdaUPerKm2,
        values: "60:30:240",
        t_db: 5.0,
        about: "mean rate vs user density",
    },
];

pub fn find_preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

/// A fully resolved sweep: base parameters, grid and engine selection.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: NetworkParams,
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub metric: Metric,
    pub engines: Engines,
    pub trials: u64,
    pub seed: u64,
    /// Coverage threshold in dB for sweeps whose parameter is not `T_dB`.
    pub t_db: f64,
}

/// One evaluated grid point. `None` marks quantities the selected engines did
/// not produce; they become empty CSV cells and JSON nulls.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub analytic: Option<f64>,
    pub mc: Option<f64>,
    pub mc_ci: Option<f64>,
    pub mc_exact: Option<f64>,
    pub mc_exact_ci: Option<f64>,
    pub k_s0_min: Option<f64>,
    pub k_s0_max: Option<f64>,
    pub engine_path: Option<String>,
    pub mc_resampled: Option<u64>,
}

impl SweepRow {
    fn empty(value: f64) -> Self {
        SweepRow {
            value,
            analytic: None,
            mc: None,
            mc_ci: None,
            mc_exact: None,
            mc_exact_ci: None,
            k_s0_min: None,
            k_s0_max: None,
            engine_path: None,
            mc_resampled: None,
        }
    }
}

/// Label describing which analytic route(s) served the quadrature nodes.
fn coverage_path_label(summary: &CoverageSummary) -> &'static str {
    match (summary.bell_nodes > 0, summary.large_shape_nodes > 0) {
        (true, true) => "bell+large-k",
        (true, false) => "bell",
        (false, true) => "large-k",
        (false, false) => "none",
    }
}

/// Range of the matched Gamma shape of the desired signal over the standard
/// serving-distance quadrature grid. Matches the node placement the coverage
/// and rate averages use, so the reported range describes the same fits.
fn s0_shape_range(p: &NetworkParams) -> (f64, f64) {
    let d = p.derive();
    let l_a = moments::mean_ap_signal(p, &d);
    let (nodes, _) = gauss_legendre(COVERAGE_NODES);
    let half = 0.5 * p.radius;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in &nodes {
        let r = half * (x + 1.0);
        let (m1, m2) = moments::s0_moments(r, p, &d, l_a);
        let shape = moments::match_gamma(m1, m2).shape;
        lo = lo.min(shape);
        hi = hi.max(shape);
    }
    (lo, hi)
}

fn linear_threshold(t_db: f64, context: &str) -> Result<f64, AppError> {
    let t = 10f64.powf(t_db / 10.0);
    if !t.is_finite() || t <= 0.0 {
        return Err(AppError::Validation(format!(
            "{context}: a {t_db} dB threshold is outside the evaluable range"
        )));
    }
    Ok(t)
}

fn eval_point(spec: &SweepSpec, value: f64) -> Result<SweepRow, AppError> {
    let key = spec.param.key();
    let point = format!("sweep point {key} = {value}");
    let p = spec.param.apply(&spec.base, value);
    let violations: Vec<String> = p
        .validate()
        .into_iter()
        .filter(|v| v.severity == Severity::Error)
        .map(|v| v.to_string())
        .collect();
    if !violations.is_empty() {
        return Err(AppError::Validation(format!(
            "{point}: {}",
            violations.join("; ")
        )));
    }
    let t_db = if spec.param == SweepParam::TDb {
        value
    } else {
        spec.t_db
    };
    let threshold = match spec.metric {
        Metric::Coverage => Some(linear_threshold(t_db, &point)?),
        Metric::Rate => None,
    };

    let mut row = SweepRow::empty(value);
    if spec.engines.wants_analytic() {
        match spec.metric {
            Metric::Coverage => {
                let ctx = CoverageContext::new(&p, threshold.expect("coverage threshold"));
                let summary = coverage(&ctx)
                    .map_err(|e| AppError::numeric("coverage", format!("{point}: {e}")))?;
                row.analytic = Some(summary.probability);
                row.k_s0_min = Some(summary.shape_range.0);
                row.k_s0_max = Some(summary.shape_range.1);
                row.engine_path = Some(coverage_path_label(&summary).to_string());
            }
            Metric::Rate => {
                let ctx = RateContext::new(&p);
                let r =
                    rate(&ctx).map_err(|e| AppError::numeric("rate", format!("{point}: {e}")))?;
                let (lo, hi) = s0_shape_range(&p);
                row.analytic = Some(r);
                row.k_s0_min = Some(lo);
                row.k_s0_max = Some(hi);
                row.engine_path = Some("laplace".to_string());
            }
        }
    } else {
        // Monte-Carlo-only rows still report the matched-shape range: it is
        // cheap and lets readers judge how peaked the signal law is.
        let (lo, hi) = s0_shape_range(&p);
        row.k_s0_min = Some(lo);
        row.k_s0_max = Some(hi);
    }
    if spec.engines.wants_mc() {
        let d = p.derive();
        let est = match spec.metric {
            Metric::Coverage => mcsim::estimate_coverage(
                &p,
                &d,
                threshold.expect("coverage threshold"),
                spec.trials,
                spec.seed,
            ),
            Metric::Rate => mcsim::estimate_rate(&p, &d, spec.trials, spec.seed),
        }
        .map_err(|e| AppError::numeric("mcsim", format!("{point}: {e}")))?;
        row.mc = Some(est.approx.mean);
        row.mc_ci = Some(est.approx.ci_half_width);
        row.mc_exact = Some(est.exact.mean);
        row.mc_exact_ci = Some(est.exact.ci_half_width);
        row.mc_resampled = Some(est.resampled_deployments);
    }
    Ok(row)
}

/// Evaluate every grid point, in input order. Points run in parallel; the
/// first failure aborts the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, AppError> {
    spec.values
        .par_iter()
        .map(|&v| eval_point(spec, v))
        .collect()
}

/// Provenance block for a sweep. The seed and trial count are recorded only
/// when a Monte Carlo engine actually ran, so analytic output is byte-for-byte
/// independent of the seed flag; the fixed threshold is recorded only where it
/// matters (coverage sweeps over a parameter other than `T_dB`).
pub fn metadata(spec: &SweepSpec) -> Metadata {
    Metadata {
        tool: format!("hccn {}", env!("CARGO_PKG_VERSION")),
        build_id: env!("HCCN_BUILD_ID").to_string(),
        generated_utc: emit::timestamp_utc(),
        metric: spec.metric.name().to_string(),
        param: spec.param.key().to_string(),
        engines: spec.engines.name().to_string(),
        t_db: (spec.metric == Metric::Coverage && spec.param != SweepParam::TDb)
            .then_some(spec.t_db),
        trials: spec.engines.wants_mc().then_some(spec.trials),
        seed: spec.engines.wants_mc().then_some(spec.seed),
        config: serde_json::to_value(spec.base).expect("parameters serialize"),
    }
}
