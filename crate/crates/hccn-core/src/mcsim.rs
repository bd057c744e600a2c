//! Monte Carlo reference engine for the hybrid network.
//!
//! Everything the analytic modules approximate is simulated here from first
//! principles: base stations, access points, and users are drawn as
//! independent Poisson processes on the disk, each link gets a Rayleigh
//! channel vector, every transmitter forms conjugate beams toward its own
//! users, and the typical user's SINR is assembled term by term.  Estimators
//! report sample means with 95% normal-approximation confidence half-widths.
//!
//! Randomness is counter-based: trial `t` of an estimator reads stream `t` of
//! a ChaCha generator keyed by the master seed, so results are bit-identical
//! regardless of how trials are scheduled across threads.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;

use crate::params::{DerivedParams, NetworkParams};

/// Default number of Monte Carlo trials used by the command-line front end.
pub const DEFAULT_TRIALS: u64 = 2500;

/// Access-point links closer than this distance (metres) are evaluated at
/// this distance instead, guarding the unbounded path-loss law.  Zero keeps
/// the law exact; the near-field singularity has probability zero anyway.
pub const AP_EXCLUSION_RADIUS: f64 = 0.0;

/// A deployment with no base station cannot serve the typical user; sampling
/// retries up to this many times before giving up.
const MAX_EMPTY_RESAMPLES: u64 = 10_000;

/// Conditioned sampling rejects deployments whose serving distance falls
/// outside the requested band; give up after this many rejections.
const MAX_CONDITION_REJECTIONS: u64 = 1_000_000;

/// Failures of the Monte Carlo engine.
#[derive(Debug, thiserror::Error)]
pub enum McError {
    /// The deployment contains no base station, so the typical user has no
    /// serving cell and the trial cannot be realized.
    #[error("deployment has no serving base station")]
    NoServingBs,
    /// Resampling could not produce an acceptable deployment.
    #[error("no acceptable deployment after {attempts} resampling attempts")]
    ResamplingExhausted {
        /// Number of deployments drawn and discarded.
        attempts: u64,
    },
}

/// One snapshot of the network geometry.
///
/// The typical user is always `ue_points[0]` and sits at the origin for
/// sampled deployments.  `serving_bs[i]` is the index of the base station
/// nearest to user `i` (lowest index on ties); it is empty exactly when
/// `bs_points` is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    /// Base-station positions, metres.
    pub bs_points: Vec<[f64; 2]>,
    /// Access-point positions, metres.
    pub ap_points: Vec<[f64; 2]>,
    /// User positions, metres; index 0 is the typical user.
    pub ue_points: Vec<[f64; 2]>,
    /// Per-user serving base-station index; empty when there is no BS.
    pub serving_bs: Vec<usize>,
}

impl Deployment {
    /// Builds a deployment from raw positions, associating every user with
    /// its nearest base station (lowest index wins ties).
    pub fn new(
        bs_points: Vec<[f64; 2]>,
        ap_points: Vec<[f64; 2]>,
        ue_points: Vec<[f64; 2]>,
    ) -> Self {
        assert!(
            !ue_points.is_empty(),
            "a deployment must contain the typical user"
        );
        let serving_bs = if bs_points.is_empty() {
            Vec::new()
        } else {
            ue_points
                .iter()
                .map(|&ue| nearest_bs_index(&bs_points, ue).expect("non-empty BS list"))
                .collect()
        };
        Deployment {
            bs_points,
            ap_points,
            ue_points,
            serving_bs,
        }
    }

    /// Distance from the typical user to its serving base station, if any.
    pub fn serving_distance(&self) -> Option<f64> {
        let m0 = *self.serving_bs.first()?;
        Some(distance(self.bs_points[m0], self.ue_points[0]))
    }
}

/// Small-scale fading and large-scale gains for every link in a deployment.
///
/// Small-scale entries are i.i.d. circularly-symmetric complex normals with
/// unit power, laid out row-major as (transmitter, user, antenna).  Gains are
/// the distance-law powers `β₀·d^{−α₁}` (BS links) and `δ₀·l^{−α₂}` (AP
/// links), laid out (transmitter, user).
#[derive(Debug, Clone)]
pub struct ChannelDraw {
    n_b: usize,
    n_a: usize,
    n_ue: usize,
    bs_small: Vec<Complex64>,
    ap_small: Vec<Complex64>,
    bs_gain: Vec<f64>,
    ap_gain: Vec<f64>,
}

impl ChannelDraw {
    /// Draws fading for every BS and AP link of `dep`.
    ///
    /// The generator is consumed in a fixed order: all BS coefficients
    /// (station-major), then all AP coefficients (point-major).
    pub fn draw(
        dep: &Deployment,
        p: &NetworkParams,
        d: &DerivedParams,
        exclusion_radius: f64,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let mut ch = ChannelDraw::empty(dep, p);
        ch.fill_bs(dep, p, d, rng);
        ch.fill_ap(dep, p, d, exclusion_radius, rng);
        ch
    }

    /// Draws only the AP-side fading, leaving the BS block empty.  Used by
    /// estimators that never touch cellular links.
    pub fn draw_ap_only(
        dep: &Deployment,
        p: &NetworkParams,
        d: &DerivedParams,
        exclusion_radius: f64,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let mut ch = ChannelDraw::empty(dep, p);
        ch.fill_ap(dep, p, d, exclusion_radius, rng);
        ch
    }

    fn empty(dep: &Deployment, p: &NetworkParams) -> Self {
        ChannelDraw {
            n_b: p.n_b as usize,
            n_a: p.n_a as usize,
            n_ue: dep.ue_points.len(),
            bs_small: Vec::new(),
            ap_small: Vec::new(),
            bs_gain: Vec::new(),
            ap_gain: Vec::new(),
        }
    }

    fn fill_bs(
        &mut self,
        dep: &Deployment,
        p: &NetworkParams,
        d: &DerivedParams,
        rng: &mut ChaCha8Rng,
    ) {
        let n_links = dep.bs_points.len() * self.n_ue;
        self.bs_small = draw_cn_entries(n_links * self.n_b, rng);
        self.bs_gain = Vec::with_capacity(n_links);
        for &bs in &dep.bs_points {
            for &ue in &dep.ue_points {
                self.bs_gain
                    .push(d.beta0 * distance(bs, ue).powf(-p.alpha1));
            }
        }
    }

    fn fill_ap(
        &mut self,
        dep: &Deployment,
        p: &NetworkParams,
        d: &DerivedParams,
        exclusion_radius: f64,
        rng: &mut ChaCha8Rng,
    ) {
        let n_links = dep.ap_points.len() * self.n_ue;
        self.ap_small = draw_cn_entries(n_links * self.n_a, rng);
        self.ap_gain = Vec::with_capacity(n_links);
        for &ap in &dep.ap_points {
            for &ue in &dep.ue_points {
                let dist = distance(ap, ue).max(exclusion_radius);
                self.ap_gain.push(d.delta0 * dist.powf(-p.alpha2));
            }
        }
    }

    /// Small-scale vector of the BS `m` → user `i` link.
    pub fn bs_vector(&self, m: usize, i: usize) -> &[Complex64] {
        let start = (m * self.n_ue + i) * self.n_b;
        &self.bs_small[start..start + self.n_b]
    }

    /// Small-scale vector of the AP `j` → user `i` link.
    pub fn ap_vector(&self, j: usize, i: usize) -> &[Complex64] {
        let start = (j * self.n_ue + i) * self.n_a;
        &self.ap_small[start..start + self.n_a]
    }

    /// Large-scale power gain of the BS `m` → user `i` link.
    pub fn bs_gain(&self, m: usize, i: usize) -> f64 {
        self.bs_gain[m * self.n_ue + i]
    }

    /// Large-scale power gain of the AP `j` → user `i` link.
    pub fn ap_gain(&self, j: usize, i: usize) -> f64 {
        self.ap_gain[j * self.n_ue + i]
    }

    /// All small-scale coefficients, BS block then AP block.
    pub fn small_scale_entries(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.bs_small.iter().chain(self.ap_small.iter()).copied()
    }
}

/// The typical user's received powers and SINRs for one channel realization.
#[derive(Debug, Clone, Copy)]
pub struct SinrSample {
    /// Distance to the serving base station, metres.
    pub serving_distance: f64,
    /// Coherent useful power: BS beam plus all AP beams toward the typical
    /// user, amplitudes added before squaring.
    pub s0: f64,
    /// Power of the serving cell's beams toward its other users.
    pub i_b0: f64,
    /// Power of every other cell's beams.
    pub i_b: f64,
    /// Power of AP beams toward other users, each path counted on its own.
    pub i_a: f64,
    /// Interference with per-user BS and AP paths summed coherently before
    /// squaring — the quantity the `i_b0 + i_b + i_a` split approximates.
    pub i_exact: f64,
    /// `s0 / (i_b0 + i_b + i_a + σ²)`.
    pub sinr_approx: f64,
    /// `s0 / (i_exact + σ²)`.
    pub sinr_exact: f64,
}

/// A Monte Carlo sample mean.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Estimate {
    /// Sample mean over trials.
    pub mean: f64,
    /// 95% confidence half-width, `1.96·s/√n` with `s` the sample standard
    /// deviation.
    pub ci_half_width: f64,
    /// Number of trials averaged.
    pub trials: u64,
    /// Master seed the trials were drawn from.
    pub seed: u64,
}

impl Estimate {
    fn from_samples(values: &[f64], seed: u64) -> Self {
        assert!(!values.is_empty(), "an estimate needs at least one trial");
        let n = values.len() as f64;
        let mean = compensated_sum(values.iter().copied()) / n;
        let ci_half_width = if values.len() > 1 {
            let ss = compensated_sum(values.iter().map(|v| {
                let dev = v - mean;
                dev * dev
            }));
            1.96 * (ss / (n - 1.0)).sqrt() / n.sqrt()
        } else {
            0.0
        };
        Estimate {
            mean,
            ci_half_width,
            trials: values.len() as u64,
            seed,
        }
    }
}

/// Paired estimates from the split-interference and coherent-interference
/// SINR definitions, plus resampling diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct McEstimate {
    /// Estimate under `sinr_approx` (split interference terms).
    pub approx: Estimate,
    /// Estimate under `sinr_exact` (coherent per-user interference).
    pub exact: Estimate,
    /// Deployments discarded because they contained no base station.
    pub resampled_deployments: u64,
}

/// Samples drawn conditioned on the serving distance lying in a band.
#[derive(Debug, Clone)]
pub struct ConditionedSamples {
    /// One realization per trial, serving distance inside the band.
    pub samples: Vec<SinrSample>,
    /// Deployments rejected because the serving distance missed the band.
    pub rejected_deployments: u64,
}

/// Draws one deployment: Poisson-distributed numbers of base stations,
/// access points, and users, each placed uniformly on the disk, with the
/// typical user pinned at the origin (it occupies one of the Poisson user
/// slots, so the ensemble user density is exactly `λ_U`).
pub fn sample_deployment(p: &NetworkParams, d: &DerivedParams, seed: u64) -> Deployment {
    sample_deployment_with(p, d, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn sample_deployment_with(
    p: &NetworkParams,
    d: &DerivedParams,
    rng: &mut ChaCha8Rng,
) -> Deployment {
    let bs_points = sample_ppp(p.lambda_b * d.area, p.radius, rng);
    let ap_points = sample_ppp(p.lambda_a * d.area, p.radius, rng);
    let ue_points = sample_ue_points(p, d, rng);
    Deployment::new(bs_points, ap_points, ue_points)
}

fn sample_ue_points(p: &NetworkParams, d: &DerivedParams, rng: &mut ChaCha8Rng) -> Vec<[f64; 2]> {
    let budget = poisson_count(p.lambda_u * d.area, rng).max(1);
    let mut ue_points = Vec::with_capacity(budget);
    ue_points.push([0.0, 0.0]);
    for _ in 1..budget {
        ue_points.push(uniform_disk_point(p.radius, rng));
    }
    ue_points
}

/// Realizes channels for `dep` and assembles the typical user's SINR.
///
/// Fails with [`McError::NoServingBs`] when the deployment has no base
/// station.
pub fn realize_sinr(
    dep: &Deployment,
    p: &NetworkParams,
    d: &DerivedParams,
    seed: u64,
) -> Result<SinrSample, McError> {
    realize_sinr_with(dep, p, d, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn realize_sinr_with(
    dep: &Deployment,
    p: &NetworkParams,
    d: &DerivedParams,
    rng: &mut ChaCha8Rng,
) -> Result<SinrSample, McError> {
    if dep.bs_points.is_empty() {
        return Err(McError::NoServingBs);
    }
    let ch = ChannelDraw::draw(dep, p, d, AP_EXCLUSION_RADIUS, rng);
    Ok(sinr_from_channels(dep, &ch, d))
}

/// Assembles the typical user's powers from an explicit channel draw.
///
/// Every transmitter beams toward each of its own users with the conjugate
/// of that user's channel, normalized to unit power, so the amplitude
/// received at the typical user from the beam toward user `n` is
/// `⟨h_n, h_0⟩ / ‖h_n‖` scaled by the beam power and the receive-path gain.
pub fn sinr_from_channels(dep: &Deployment, ch: &ChannelDraw, d: &DerivedParams) -> SinrSample {
    let m0 = dep.serving_bs[0];
    let n_ue = dep.ue_points.len();
    let n_ap = dep.ap_points.len();

    // Useful power: the typical user's own beams arrive phase-aligned, so the
    // BS and AP amplitudes add coherently as real numbers.
    let mut s0_amp = (d.rho_b * ch.bs_gain(m0, 0)).sqrt() * vector_norm(ch.bs_vector(m0, 0));
    for j in 0..n_ap {
        s0_amp += (d.rho_a * ch.ap_gain(j, 0)).sqrt() * vector_norm(ch.ap_vector(j, 0));
    }
    let s0 = s0_amp * s0_amp;

    let mut i_b0 = 0.0;
    let mut i_b = 0.0;
    let mut i_a = 0.0;
    let mut i_exact = 0.0;
    for n in 1..n_ue {
        let m = dep.serving_bs[n];
        let bs_amp = received_amplitude(
            ch.bs_vector(m, n),
            ch.bs_vector(m, 0),
            d.rho_b * ch.bs_gain(m, 0),
        );
        let bs_power = bs_amp.norm_sqr();
        if m == m0 {
            i_b0 += bs_power;
        } else {
            i_b += bs_power;
        }
        let mut coherent = bs_amp;
        for j in 0..n_ap {
            let ap_amp = received_amplitude(
                ch.ap_vector(j, n),
                ch.ap_vector(j, 0),
                d.rho_a * ch.ap_gain(j, 0),
            );
            i_a += ap_amp.norm_sqr();
            coherent += ap_amp;
        }
        i_exact += coherent.norm_sqr();
    }

    let safe_sinr = |interference: f64| {
        if s0 > 0.0 {
            s0 / (interference + d.sigma2)
        } else {
            0.0
        }
    };
    SinrSample {
        serving_distance: dep.serving_distance().expect("serving BS exists"),
        s0,
        i_b0,
        i_b,
        i_a,
        i_exact,
        sinr_approx: safe_sinr(i_b0 + i_b + i_a),
        sinr_exact: safe_sinr(i_exact),
    }
}

/// Amplitude received at the typical user from a unit-power beam matched to
/// `beam`, traveling through the typical user's channel `recv`, with
/// `power_gain` the product of beam power and receive-path gain.
fn received_amplitude(beam: &[Complex64], recv: &[Complex64], power_gain: f64) -> Complex64 {
    hermitian_dot(beam, recv) / vector_norm(beam) * power_gain.sqrt()
}

/// Estimates the probability that the typical user's SINR exceeds
/// `threshold` (linear, not dB).
///
/// Deployments without a base station are resampled; the count of discarded
/// deployments is reported in the result.
pub fn estimate_coverage(
    p: &NetworkParams,
    d: &DerivedParams,
    threshold: f64,
    trials: u64,
    seed: u64,
) -> Result<McEstimate, McError> {
    assert!(
        threshold.is_finite() && threshold >= 0.0,
        "the SINR threshold must be finite and non-negative"
    );
    let (samples, resampled) = collect_network_trials(p, d, trials, seed)?;
    Ok(paired_estimate(&samples, resampled, seed, |sinr| {
        if sinr > threshold {
            1.0
        } else {
            0.0
        }
    }))
}

/// Estimates the typical user's mean spectral efficiency `E[ln(1 + SINR)]`
/// in nats.
pub fn estimate_rate(
    p: &NetworkParams,
    d: &DerivedParams,
    trials: u64,
    seed: u64,
) -> Result<McEstimate, McError> {
    let (samples, resampled) = collect_network_trials(p, d, trials, seed)?;
    Ok(paired_estimate(&samples, resampled, seed, f64::ln_1p))
}

/// Estimates the mean coherent AP amplitude received by the typical user
/// (first return) and the mean AP interference power (second return).
///
/// Base-station channels are never drawn, so the estimator is cheap even in
/// dense cellular networks.
pub fn estimate_ap_terms(
    p: &NetworkParams,
    d: &DerivedParams,
    trials: u64,
    seed: u64,
) -> (Estimate, Estimate) {
    assert!(trials > 0, "at least one trial is required");
    let values: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let dep = sample_deployment_with(p, d, &mut rng);
            let ch = ChannelDraw::draw_ap_only(&dep, p, d, AP_EXCLUSION_RADIUS, &mut rng);
            ap_terms_from_channels(&dep, &ch, d)
        })
        .collect();
    let amplitudes: Vec<f64> = values.iter().map(|&(a, _)| a).collect();
    let powers: Vec<f64> = values.iter().map(|&(_, p)| p).collect();
    (
        Estimate::from_samples(&amplitudes, seed),
        Estimate::from_samples(&powers, seed),
    )
}

fn ap_terms_from_channels(dep: &Deployment, ch: &ChannelDraw, d: &DerivedParams) -> (f64, f64) {
    let n_ap = dep.ap_points.len();
    let n_ue = dep.ue_points.len();
    let mut amplitude = 0.0;
    for j in 0..n_ap {
        amplitude += (d.rho_a * ch.ap_gain(j, 0)).sqrt() * vector_norm(ch.ap_vector(j, 0));
    }
    let mut power = 0.0;
    for n in 1..n_ue {
        for j in 0..n_ap {
            power += received_amplitude(
                ch.ap_vector(j, n),
                ch.ap_vector(j, 0),
                d.rho_a * ch.ap_gain(j, 0),
            )
            .norm_sqr();
        }
    }
    (amplitude, power)
}

/// Draws SINR samples conditioned on the serving distance lying within
/// `d00 ± band_halfwidth`, by rejection on the base-station process alone
/// (access points and users are only drawn once a geometry is accepted).
pub fn sample_conditioned(
    p: &NetworkParams,
    d: &DerivedParams,
    d00: f64,
    band_halfwidth: f64,
    trials: u64,
    seed: u64,
) -> Result<ConditionedSamples, McError> {
    assert!(
        d00 > 0.0 && d00 <= p.radius,
        "the conditioning distance must lie inside the disk"
    );
    assert!(band_halfwidth > 0.0, "the band must have positive width");
    assert!(trials > 0, "at least one trial is required");
    let lo = (d00 - band_halfwidth).max(0.0);
    let hi = (d00 + band_halfwidth).min(p.radius);
    let outcomes: Result<Vec<(SinrSample, u64)>, McError> = (0..trials)
        .into_par_iter()
        .map(|trial| run_conditioned_trial(p, d, lo, hi, seed, trial))
        .collect();
    let outcomes = outcomes?;
    let rejected_deployments = outcomes.iter().map(|&(_, r)| r).sum();
    Ok(ConditionedSamples {
        samples: outcomes.into_iter().map(|(s, _)| s).collect(),
        rejected_deployments,
    })
}

fn run_conditioned_trial(
    p: &NetworkParams,
    d: &DerivedParams,
    lo: f64,
    hi: f64,
    seed: u64,
    trial: u64,
) -> Result<(SinrSample, u64), McError> {
    let mut rng = trial_rng(seed, trial);
    let mut rejected = 0u64;
    let bs_points = loop {
        let bs = sample_ppp(p.lambda_b * d.area, p.radius, &mut rng);
        let nearest = nearest_bs_index(&bs, [0.0, 0.0]).map(|i| distance(bs[i], [0.0, 0.0]));
        if nearest.is_some_and(|dist| dist >= lo && dist <= hi) {
            break bs;
        }
        rejected += 1;
        if rejected >= MAX_CONDITION_REJECTIONS {
            return Err(McError::ResamplingExhausted { attempts: rejected });
        }
    };
    let ap_points = sample_ppp(p.lambda_a * d.area, p.radius, &mut rng);
    let ue_points = sample_ue_points(p, d, &mut rng);
    let dep = Deployment::new(bs_points, ap_points, ue_points);
    let sample = realize_sinr_with(&dep, p, d, &mut rng)?;
    Ok((sample, rejected))
}

fn collect_network_trials(
    p: &NetworkParams,
    d: &DerivedParams,
    trials: u64,
    seed: u64,
) -> Result<(Vec<SinrSample>, u64), McError> {
    assert!(trials > 0, "at least one trial is required");
    let outcomes: Result<Vec<(SinrSample, u64)>, McError> = (0..trials)
        .into_par_iter()
        .map(|trial| run_network_trial(p, d, seed, trial))
        .collect();
    let outcomes = outcomes?;
    let resampled = outcomes.iter().map(|&(_, r)| r).sum();
    Ok((outcomes.into_iter().map(|(s, _)| s).collect(), resampled))
}

fn run_network_trial(
    p: &NetworkParams,
    d: &DerivedParams,
    seed: u64,
    trial: u64,
) -> Result<(SinrSample, u64), McError> {
    let mut rng = trial_rng(seed, trial);
    let mut resamples = 0u64;
    let dep = loop {
        let dep = sample_deployment_with(p, d, &mut rng);
        if !dep.bs_points.is_empty() {
            break dep;
        }
        resamples += 1;
        if resamples >= MAX_EMPTY_RESAMPLES {
            return Err(McError::ResamplingExhausted {
                attempts: resamples,
            });
        }
    };
    let sample = realize_sinr_with(&dep, p, d, &mut rng)?;
    Ok((sample, resamples))
}

fn paired_estimate(
    samples: &[SinrSample],
    resampled_deployments: u64,
    seed: u64,
    metric: impl Fn(f64) -> f64,
) -> McEstimate {
    let approx: Vec<f64> = samples.iter().map(|s| metric(s.sinr_approx)).collect();
    let exact: Vec<f64> = samples.iter().map(|s| metric(s.sinr_exact)).collect();
    McEstimate {
        approx: Estimate::from_samples(&approx, seed),
        exact: Estimate::from_samples(&exact, seed),
        resampled_deployments,
    }
}

/// Generator for trial `trial` under master seed `seed`: same key, distinct
/// ChaCha stream, so trials are independent and order-insensitive.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn poisson_count(mean: f64, rng: &mut ChaCha8Rng) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let draw: f64 = Poisson::new(mean)
        .expect("Poisson mean must be finite")
        .sample(rng);
    draw as usize
}

fn uniform_disk_point(radius: f64, rng: &mut ChaCha8Rng) -> [f64; 2] {
    let r = radius * rng.random::<f64>().sqrt();
    let angle = TAU * rng.random::<f64>();
    [r * angle.cos(), r * angle.sin()]
}

fn sample_ppp(mean_count: f64, radius: f64, rng: &mut ChaCha8Rng) -> Vec<[f64; 2]> {
    let count = poisson_count(mean_count, rng);
    (0..count).map(|_| uniform_disk_point(radius, rng)).collect()
}

fn nearest_bs_index(bs: &[[f64; 2]], point: [f64; 2]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (idx, &b) in bs.iter().enumerate() {
        let dx = b[0] - point[0];
        let dy = b[1] - point[1];
        let dist2 = dx * dx + dy * dy;
        if best.is_none_or(|(_, d2)| dist2 < d2) {
            best = Some((idx, dist2));
        }
    }
    best.map(|(idx, _)| idx)
}

fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn draw_cn_entries(count: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..count)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * FRAC_1_SQRT_2
        })
        .collect()
}

fn hermitian_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn vector_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() {
            (sum - t) + v
        } else {
            (v - t) + sum
        };
        sum = t;
    }
    sum + comp
}
