//! Average achievable rate (nats/s/Hz) of the typical user.
//!
//! The mean of `ln(1 + Omega)`, with `Omega` the signal-to-interference
//! ratio, is evaluated through the transform identity
//!
//! ```text
//! E[ln(1 + S0/(I + c))] =
//!     Integral_0^inf  (e^{-s c} / s) * L_I(s) * [L_I(s-part) ...] ds
//! ```
//!
//! specialized to this model: conditioned on the serving distance `d00`,
//!
//! ```text
//! R(d00) = Integral_0^inf (e^{-s(I_A + sigma^2)}/s) * L_IB(s)
//!              * [L_IB0(s) - L_SI(s)] ds
//! ```
//!
//! where `L_IB` is the out-of-cell interference transform (shared with the
//! coverage module so the two modules agree bit for bit), `L_IB0` the exact
//! Gamma transform of intra-cell interference, and `L_SI` the matched-Gamma
//! transform of the combined quantity `S_I = S0 + I_B0` (the combination
//! absorbs the correlation between the serving signal and the intra-cell
//! beams, which share the serving channel vector). The network-average rate
//! then integrates `R(d00)` against the nearest-BS distance density.
//!
//! The `s`-integrand tends to `E[S_I] - E[I_B0] = E[S0]` as `s -> 0` and is
//! killed beyond `s_max` by the exponential noise-plus-AP floor envelope;
//! integration runs on geometrically growing panels so the many decades of
//! `s` are each resolved with a fixed Gauss-Legendre rule and a fixed
//! summation order.

use rayon::prelude::*;

use crate::coverage::nearest_bs_pdf;
use crate::mathkit::{gauss_legendre, QuadError};
use crate::moments::{self, GammaFit};
use crate::params::{DerivedParams, NetworkParams};
use crate::pgfl;

/// Relative share of the running integral the discarded `s > s_max` tail is
/// allowed to contribute.
pub const TAIL_BUDGET: f64 = 1e-8;
/// Default truncation point: `s_max * (I_A + sigma^2)` e-folds of envelope
/// decay leave a tail below `e^{-45}/45 ~ 6e-22` of the integral scale.
const TAIL_EFOLDS: f64 = 45.0;
/// The first panel covers `[0, FIRST_PANEL_FRACTION * (inner scale)]`;
/// subsequent panels double in width until the truncation point.
const FIRST_PANEL_FRACTION: f64 = 1e-6;
/// How many octaves past `s_max` the integral may extend when the tail
/// certificate is not yet met (each octave squares the envelope decay, so
/// one extension nearly always suffices).
const MAX_TAIL_EXTENSIONS: u32 = 8;
/// Gauss-Legendre points per panel of the `s`-integral.
const PANEL_NODES: usize = 16;
/// Gauss-Legendre points for the outer nearest-BS-distance average.
pub const RATE_NODES: usize = 64;

/// Rate evaluation failures.
#[derive(Debug, thiserror::Error)]
pub enum RateError {
    /// The out-of-cell transform's ring quadrature did not converge.
    #[error("interference transform quadrature failed: {0}")]
    Quad(#[from] QuadError),
    /// The truncated `s`-tail cannot be certified below the budget.
    #[error("s-integral tail bound {bound:e} exceeds budget {budget:e} of the running integral")]
    Truncation { bound: f64, budget: f64 },
}

/// Precomputed network-level state for rate evaluation.
#[derive(Debug, Clone, Copy)]
pub struct RateContext {
    pub params: NetworkParams,
    pub derived: DerivedParams,
    /// Mean coherent AP amplitude `L_A` entering the signal.
    pub mean_ap_amplitude: f64,
    /// Mean AP interference power substituted for the AP interference term.
    pub mean_ap_interference: f64,
    /// `I_A + sigma^2`: the deterministic part of the denominator.
    pub interference_floor: f64,
    /// Initial truncation point of the `s`-integral; extended in octaves at
    /// evaluation time while the tail certificate demands it.
    pub s_max: f64,
    /// Relative tail tolerance certified at `s_max`.
    pub tail_budget: f64,
}

/// Per-distance law of the combined quantity `S_I = S0 + I_B0` and of the
/// intra-cell interference it contains.
#[derive(Debug, Clone, Copy)]
pub struct CombinedProfile {
    /// Per-beam serving power scale `rho_B beta0 d00^{-alpha_1}`.
    pub serving_scale: f64,
    /// `E[S_I]`.
    pub mean: f64,
    /// `E[S0] = E[S_I] - E[I_B0]`: the `s -> 0` limit of the rate integrand.
    pub signal_mean: f64,
    /// Matched Gamma of `S_I`; `None` when the BS power vanishes and `S_I`
    /// degenerates to a point mass at `mean` (zero variance).
    pub fit: Option<GammaFit>,
}

impl RateContext {
    pub fn new(params: &NetworkParams) -> Self {
        let derived = params.derive();
        let mean_ap_amplitude = moments::mean_ap_signal(params, &derived);
        let mean_ap_interference = moments::mean_ap_interference(params, &derived);
        let interference_floor = mean_ap_interference + derived.sigma2;
        assert!(
            interference_floor >= 0.0,
            "AP interference plus noise must be nonnegative"
        );
        RateContext {
            params: *params,
            derived,
            mean_ap_amplitude,
            mean_ap_interference,
            interference_floor,
            s_max: TAIL_EFOLDS / interference_floor,
            tail_budget: TAIL_BUDGET,
        }
    }

    /// Moment-match the combined signal-plus-intra-cell-interference law at
    /// serving distance `d00`.
    pub fn combined_profile(&self, d00: f64) -> CombinedProfile {
        let serving_scale = self.derived.rho_b * self.derived.beta0 * d00.powf(-self.params.alpha1);
        let (m1, m2) = moments::si_moments(d00, &self.params, &self.derived, self.mean_ap_amplitude);
        let (s0_m1, _) = moments::s0_moments(d00, &self.params, &self.derived, self.mean_ap_amplitude);
        let fit = if self.derived.rho_b == 0.0 {
            // Zero BS power: S0 = L_A^2 deterministically and I_B0 = 0, so
            // the variance vanishes and moment matching would divide by it.
            None
        } else {
            let fit = moments::match_gamma(m1, m2);
            debug_assert!(fit.shape > 0.0 && fit.scale > 0.0);
            Some(fit)
        };
        CombinedProfile {
            serving_scale,
            mean: m1,
            signal_mean: s0_m1,
            fit,
        }
    }
}

/// Laplace transform of the out-of-cell interference conditioned on `d00`.
///
/// Shares the ring-exponent evaluator with the coverage module, so the two
/// modules compute bit-identical transforms.
pub fn laplace_ib(s: f64, d00: f64, ctx: &RateContext) -> Result<f64, RateError> {
    assert!(s >= 0.0, "transform argument must be nonnegative");
    let c = s * ctx.derived.rho_b * ctx.derived.beta0;
    Ok(pgfl::interference_exponent(c, d00, &ctx.params, &ctx.derived)?.exp())
}

/// Laplace transform of the intra-cell interference conditioned on `d00`:
/// `(1 + s rho_B beta0 d00^{-alpha_1})^{1-phi}`.
pub fn laplace_ib0(s: f64, d00: f64, ctx: &RateContext) -> f64 {
    assert!(s >= 0.0, "transform argument must be nonnegative");
    let rb00 = ctx.derived.rho_b * ctx.derived.beta0 * d00.powf(-ctx.params.alpha1);
    ((1.0 - ctx.derived.mean_ues_per_bs) * (s * rb00).ln_1p()).exp()
}

/// Laplace transform of the combined quantity `S_I = S0 + I_B0` under its
/// matched Gamma law (point mass at the mean when the BS power vanishes).
pub fn laplace_si(s: f64, d00: f64, ctx: &RateContext) -> f64 {
    assert!(s >= 0.0, "transform argument must be nonnegative");
    let prof = ctx.combined_profile(d00);
    log_laplace_si(s, &prof).exp()
}

fn log_laplace_si(s: f64, prof: &CombinedProfile) -> f64 {
    match prof.fit {
        Some(fit) => -fit.shape * (s * fit.scale).ln_1p(),
        None => -s * prof.mean,
    }
}

/// `L_IB0(s) - L_SI(s)` without cancellation: with `a = ln L_IB0` and
/// `b = ln L_SI` (both nonpositive, `a >= b`), the gap is
/// `e^b (e^{a-b} - 1)`, which stays accurate even when both transforms are
/// within rounding of 1.
fn transform_gap(s: f64, phi: f64, prof: &CombinedProfile) -> f64 {
    let a = (1.0 - phi) * (s * prof.serving_scale).ln_1p();
    let b = log_laplace_si(s, prof);
    b.exp() * (a - b).exp_m1()
}

/// Mean rate in nats/s/Hz conditioned on the serving distance `d00`.
pub fn rate_at_distance(d00: f64, ctx: &RateContext) -> Result<f64, RateError> {
    assert!(
        d00 > 0.0 && d00 <= ctx.params.radius,
        "serving distance must lie in (0, R]"
    );
    let prof = ctx.combined_profile(d00);
    if prof.signal_mean == 0.0 {
        // No BS power and no AP amplitude: the integrand is identically 0.
        return Ok(0.0);
    }
    let phi = ctx.derived.mean_ues_per_bs;
    let floor = ctx.interference_floor;
    assert!(
        floor > 0.0,
        "the mean rate diverges without a noise or AP interference floor"
    );
    let cb = ctx.derived.rho_b * ctx.derived.beta0;
    let integrand = |s: f64| -> Result<f64, RateError> {
        if s == 0.0 {
            // Analytic limit: (L_IB0 - L_SI)/s -> E[S_I] - E[I_B0] = E[S0].
            return Ok(prof.signal_mean);
        }
        let exponent = pgfl::interference_exponent(s * cb, d00, &ctx.params, &ctx.derived)?;
        Ok((exponent - s * floor).exp() / s * transform_gap(s, phi, &prof))
    };
    let rule = gauss_legendre(PANEL_NODES);
    let panel = |a: f64, b: f64| -> Result<f64, RateError> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in rule.0.iter().zip(rule.1.iter()) {
            acc += w * integrand(mid + half * x)?;
        }
        Ok(acc * half)
    };
    // The integrand rolls off on two scales: the transform gap collapses
    // beyond s ~ 1/E[S_I] and the envelope kills everything beyond
    // s ~ s_max; the first panel must sit inside the smaller of the two.
    let mut total = 0.0;
    let mut lo = 0.0;
    let mut hi = FIRST_PANEL_FRACTION * ctx.s_max.min(prof.mean.recip());
    let mut target = ctx.s_max;
    let mut extensions_left = MAX_TAIL_EXTENSIONS;
    loop {
        total += panel(lo, hi)?;
        if hi >= target {
            // Certify the discarded tail against the running integral:
            // |integrand| <= e^{-s floor} min(1/s, E[S0]) bounds it by
            // E[S0] e^{-hi floor} / floor. Extend by octaves if the budget
            // is not yet met.
            let tail_bound = prof.signal_mean * (-hi * floor).exp() / floor;
            if tail_bound <= ctx.tail_budget * total.max(f64::MIN_POSITIVE) {
                break;
            }
            if extensions_left == 0 {
                return Err(RateError::Truncation {
                    bound: tail_bound,
                    budget: ctx.tail_budget,
                });
            }
            extensions_left -= 1;
            target = hi * 2.0;
        }
        lo = hi;
        hi = (hi * 2.0).min(target);
    }
    Ok(total)
}

/// Network-average rate: `rate_at_distance` integrated against the
/// nearest-BS distance density over `(0, R]`.
pub fn rate(ctx: &RateContext) -> Result<f64, RateError> {
    let rule = gauss_legendre(RATE_NODES);
    let half = 0.5 * ctx.params.radius;
    let nodes: Vec<(f64, f64)> = rule
        .0
        .iter()
        .zip(rule.1.iter())
        .map(|(x, w)| (half * (x + 1.0), half * w))
        .collect();
    let values = nodes
        .par_iter()
        .map(|(r, _)| rate_at_distance(*r, ctx))
        .collect::<Result<Vec<_>, _>>()?;
    // Deterministic reduction in node-index order.
    let mut total = 0.0;
    for ((r, w), v) in nodes.iter().zip(values) {
        total += w * nearest_bs_pdf(*r, &ctx.params) * v;
    }
    Ok(total)
}
