//! Analytic coverage probability of the typical user.
//!
//! Conditioned on the serving-BS distance `d00`, the SINR numerator `S0` is
//! moment-matched to a Gamma(k, theta) law ([`crate::moments`]). Coverage
//! `P[S0 > T (I_B0 + I_B + floor)]` is then evaluated along one of two
//! routes, selected by the matched shape `k`:
//!
//! * **Bell series** (`k < k_switch`): the Gamma CCDF with integer shape
//!   `k_int` expands into `sum_{i<k_int} (-1)^i/i! d^i/ds^i L(s)|_{s=1}`
//!   where `L(s) = E[exp(-s T (I_B0 + I_B + floor)/theta)]`. Writing
//!   `L = exp(g)`, the derivatives follow from the complete Bell-polynomial
//!   recurrence over the derivatives of `g`. Everything is computed in the
//!   scaled form `y_i = g^(i)/(i-1)!`, `b_i = B_i/i!`, which keeps every
//!   intermediate bounded by `exp(-g(1)) <= exp(700)` — the same guard that
//!   the `g(1) < -700` early exit enforces — instead of juggling `i!`
//!   factors near the overflow edge. Non-integer shapes blend the floor and
//!   ceiling series linearly.
//! * **Gamma-averaged conditional CDF** (`k >= k_switch`): large shapes make
//!   the alternating series long and expensive, so coverage is computed as
//!   `E_{S0}[ P(I_B0 + I_B <= S0/T - floor) ]`: the out-of-cell interference
//!   CDF is tabulated once per `d00` by certified numerical inverse Laplace
//!   inversion, convolved with the Gamma(phi_bar - 1) intra-cell density,
//!   and averaged over the matched Gamma of `S0` (truncated at 1e-10 tail
//!   mass on both sides). Averaging over `S0` rather than pinning it at its
//!   mean keeps the two routes within a small fraction of a percent of each
//!   other across the switch, so the blend point is not visible in sweeps.
//!
//! The network-level value integrates the conditional coverage against the
//! nearest-BS distance density over `(0, R]` with a fixed Gauss-Legendre
//! rule. All inputs are carried by an immutable [`CoverageContext`]; per-d00
//! evaluations are independent and run in parallel with an index-ordered
//! reduction, so results are identical regardless of scheduling.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::mathkit::{
    gamma_ccdf, gamma_pdf, gamma_quantile, gamma_quantile_upper, gauss_legendre, gl_apply,
    integrate, integrate_power_singularity, inverse_laplace_cdf, InversionError, MonotoneCubic,
    QuadError,
};
use crate::moments::{self, GammaFit};
use crate::params::{DerivedParams, NetworkParams};
use crate::pgfl;

/// Shape threshold at which the Bell series hands over to the
/// Gamma-averaged conditional-CDF route. Series of ~40 alternating terms
/// are still stable in the scaled representation; beyond that the
/// large-shape route is both cheaper and equally accurate.
pub const DEFAULT_SHAPE_SWITCH: f64 = 40.0;

/// Nodes of the Gauss-Legendre rule for the d00 average in [`coverage`].
/// The inner per-distance evaluations dominate cost, so the node count —
/// not adaptivity — is the accuracy lever; 64 nodes hold the quadrature
/// error of the smooth integrand far below the 1e-4 target.
pub const COVERAGE_NODES: usize = 64;

/// Partial sums of the alternating CCDF series beyond this magnitude mark
/// the series as ill-conditioned (the limit is a probability, so legitimate
/// partials stay near [0, 1]).
pub const OSCILLATION_LIMIT: f64 = 10.0;

/// Tail mass clipped from each side of the matched Gamma of `S0` when
/// averaging the conditional CDF in the large-shape route.
const S0_TAIL_MASS: f64 = 1e-10;

/// Size of the tabulated out-of-cell interference CDF.
const CDF_TABLE_NODES: usize = 64;

/// Lowest tabulated CDF abscissa relative to the largest one; the CDF is
/// treated as exactly 0 below it (seven decades below the working point the
/// inversion returns values indistinguishable from 0).
const CDF_TABLE_SPAN: f64 = 1e-7;

/// Nodes of the outer Gauss-Legendre average over the matched Gamma of `S0`.
const OUTER_NODES: usize = 48;

/// Nodes of the per-panel Gauss-Legendre rule inside the convolution.
const CONV_NODES: usize = 16;

/// Absolute tolerance of the adaptive first convolution panel (the result
/// is a probability, so absolute and relative scales coincide).
const CONV_PANEL_TOL: f64 = 1e-9;

/// Below this value of `phi_bar - 1` the intra-cell interference is treated
/// as a point mass at zero (its Gamma shape vanishes with `phi_bar -> 1`).
const SHAPE_EPSILON: f64 = 1e-9;

/// Everything the coverage engines read. Immutable after construction;
/// per-d00 evaluations may run concurrently against a shared reference.
#[derive(Debug, Clone, Copy)]
pub struct CoverageContext {
    /// Validated network parameters.
    pub params: NetworkParams,
    /// Scalars derived from them.
    pub derived: DerivedParams,
    /// Linear SINR threshold `T > 0`.
    pub threshold: f64,
    /// Mean coherent AP amplitude contribution `L_A` to the desired signal
    /// (sqrt-watts); zero in a cellular-only network.
    pub mean_ap_amplitude: f64,
    /// Constant interference floor: mean AP interference plus noise, watts.
    pub interference_floor: f64,
    /// Shape threshold for the Bell / large-shape handover.
    pub shape_switch: f64,
}

impl CoverageContext {
    /// Build a context for `params` at linear threshold `threshold`.
    pub fn new(params: &NetworkParams, threshold: f64) -> Self {
        assert!(
            threshold > 0.0 && threshold.is_finite(),
            "linear SINR threshold must be positive and finite"
        );
        let derived = params.derive();
        Self {
            params: *params,
            derived,
            threshold,
            mean_ap_amplitude: moments::mean_ap_signal(params, &derived),
            interference_floor: moments::mean_ap_interference(params, &derived) + derived.sigma2,
            shape_switch: DEFAULT_SHAPE_SWITCH,
        }
    }

    /// Matched Gamma of the desired signal and the serving-BS power scale at
    /// distance `d00`.
    pub fn signal_profile(&self, d00: f64) -> SignalProfile {
        let (m1, m2) = moments::s0_moments(d00, &self.params, &self.derived, self.mean_ap_amplitude);
        SignalProfile {
            serving_scale: self.derived.rho_b * self.derived.beta0 * d00.powf(-self.params.alpha1),
            fit: moments::match_gamma(m1, m2),
        }
    }
}

/// Per-distance signal model: matched Gamma of `S0` and the per-beam
/// serving-BS power scale `rho_B beta_0 d00^{-alpha_1}`.
#[derive(Debug, Clone, Copy)]
pub struct SignalProfile {
    /// `rho_B beta_0 d00^{-alpha_1}`, watts.
    pub serving_scale: f64,
    /// Gamma(shape, scale) matched to the first two moments of `S0`.
    pub fit: GammaFit,
}

/// Failures of the analytic coverage chain.
#[derive(Debug, thiserror::Error)]
pub enum CoverageError {
    /// An adaptive quadrature did not converge.
    #[error("coverage quadrature failed: {0}")]
    Quad(#[from] QuadError),
    /// The two inverse-Laplace contours disagreed while tabulating the
    /// out-of-cell interference CDF.
    #[error("interference CDF tabulation failed: {0}")]
    Inversion(#[from] InversionError),
    /// Partial sums of the alternating CCDF series left the trusted band;
    /// the caller falls back to the large-shape route.
    #[error(
        "alternating CCDF series ill-conditioned at d00 = {d00} m: \
         partial sum reached {magnitude:.3e} (limit {limit})"
    )]
    IllConditioned {
        /// Serving distance at which the series degenerated.
        d00: f64,
        /// Magnitude of the offending partial sum.
        magnitude: f64,
        /// The configured [`OSCILLATION_LIMIT`].
        limit: f64,
    },
}

/// Which route produced a [`DistanceCoverage`] value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnginePath {
    /// Alternating Bell-polynomial series (shape below the switch).
    Bell,
    /// Gamma-averaged conditional CDF (shape at or above the switch).
    LargeShape,
}

/// Conditional coverage at one serving distance, with diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct DistanceCoverage {
    /// `P[SINR > T | d00]`, in [0, 1].
    pub probability: f64,
    /// Matched Gamma shape of `S0` at this distance.
    pub shape: f64,
    /// Route that produced the value.
    pub path: EnginePath,
    /// True when the Bell series tripped its ill-conditioning guard and the
    /// large-shape route supplied the value instead.
    pub fell_back: bool,
}

/// Network coverage with per-run diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct CoverageSummary {
    /// `P[SINR > T]` averaged over the serving distance.
    pub probability: f64,
    /// Smallest and largest matched shape met across quadrature nodes.
    pub shape_range: (f64, f64),
    /// Quadrature nodes served by the Bell series.
    pub bell_nodes: usize,
    /// Quadrature nodes served by the large-shape route.
    pub large_shape_nodes: usize,
    /// Nodes where the Bell series fell back to the large-shape route.
    pub fallback_nodes: usize,
}

/// Density of the nearest-BS distance on `(0, R]`: a Rayleigh-type law
/// conditioned on at least one BS inside the disk. Zero outside that range.
pub fn nearest_bs_pdf(r: f64, p: &NetworkParams) -> f64 {
    if r <= 0.0 || r > p.radius {
        return 0.0;
    }
    let lp = p.lambda_b * std::f64::consts::PI;
    let norm = -(-lp * p.radius * p.radius).exp_m1();
    2.0 * lp * r * (-lp * r * r).exp() / norm
}

/// Laplace transform at `s` of the threshold-scaled intra-cell interference
/// `Y_{IB0} = T I_B0 / theta_{S0}`: a Gamma transform with shape
/// `phi_bar - 1` and scale `T serving_scale / theta`.
pub fn laplace_y_ib0(s: f64, d00: f64, ctx: &CoverageContext) -> f64 {
    assert!(s >= 0.0, "Laplace transforms are evaluated at s >= 0");
    let prof = ctx.signal_profile(d00);
    let t_theta = ctx.threshold * ctx.derived.rho_b * ctx.derived.beta0 / prof.fit.scale;
    let c = s * t_theta * d00.powf(-ctx.params.alpha1);
    ((1.0 - ctx.derived.mean_ues_per_bs) * c.ln_1p()).exp()
}

/// Laplace transform at `s` of the threshold-scaled out-of-cell
/// interference `Y_{IB} = T I_B / theta_{S0}`, via the PGFL exponent over
/// the interfering ring `(d00, R]`.
pub fn laplace_y_ib(s: f64, d00: f64, ctx: &CoverageContext) -> Result<f64, CoverageError> {
    assert!(s >= 0.0, "Laplace transforms are evaluated at s >= 0");
    let prof = ctx.signal_profile(d00);
    let t_theta = ctx.threshold * ctx.derived.rho_b * ctx.derived.beta0 / prof.fit.scale;
    let exponent = pgfl::interference_exponent(s * t_theta, d00, &ctx.params, &ctx.derived)?;
    Ok(exponent.exp())
}

/// Derivatives `[d^i g / ds^i]_{s=1}` for `i = 1..=n` of the log-transform
/// `g(s) = ln E[exp(-s T (I_B0 + I_B + floor)/theta)]`.
pub fn g_derivatives(
    n: usize,
    d00: f64,
    ctx: &CoverageContext,
) -> Result<Vec<f64>, CoverageError> {
    assert!(n >= 1, "at least one derivative order required");
    let prof = ctx.signal_profile(d00);
    let scaled = scaled_g_derivatives(n, d00, ctx, &prof)?;
    let mut factorial = 1.0; // (i - 1)! for the current order i
    let mut out = Vec::with_capacity(n);
    for (index, y) in scaled.iter().enumerate() {
        if index > 0 {
            factorial *= index as f64;
        }
        out.push(y * factorial);
    }
    Ok(out)
}

/// Scaled derivatives `y_i = g^(i)(1)/(i-1)!` for `i = 1..=n`.
///
/// `g(s) = -s T floor/theta + (1-phi) ln(1 + s c) + pgfl(s T_theta)` with
/// `c = T_theta d00^{-alpha_1}`; the first term differentiates once, the
/// second has the closed form `(phi-1)(-1)^i w^i (i-1)!` with
/// `w = c/(1+c)`, and the PGFL term needs one ring quadrature per order
/// (each order has its own integrand decay, so sharing a grid across orders
/// would force the worst case on all of them).
fn scaled_g_derivatives(
    n: usize,
    d00: f64,
    ctx: &CoverageContext,
    prof: &SignalProfile,
) -> Result<Vec<f64>, QuadError> {
    let p = &ctx.params;
    let d = &ctx.derived;
    let phi = d.mean_ues_per_bs;
    let theta = prof.fit.scale;
    let t_theta = ctx.threshold * d.rho_b * d.beta0 / theta;
    let c = t_theta * d00.powf(-p.alpha1);
    let w = c / (1.0 + c);
    let drive = ctx.threshold * ctx.interference_floor / theta;
    let two_pi_lb = 2.0 * std::f64::consts::PI * p.lambda_b;
    let span = 0.5 * (p.radius * p.radius - d00 * d00);
    let u_far = t_theta * p.radius.powf(-p.alpha1);
    let mut rising = phi; // (phi)_i / (i-1)!
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let order = i as f64;
        let d2 = (phi - 1.0) * w.powi(i as i32);
        // psi(u) = u^i / (1+u)^{phi+i} is unimodal with peak at u = i/phi;
        // over the ring u runs from c down to u_far, so its maximum times
        // span = integral of r dr bounds the ring integral and sets an
        // absolute tolerance that tracks the term's shrinking scale. When
        // that bound itself underflows the term cannot influence the sum and
        // the quadrature (which could not certify such a tolerance) is
        // skipped.
        let u_peak = (order / phi).clamp(u_far, c.max(u_far));
        let bound = (order * u_peak.ln() - (phi + order) * u_peak.ln_1p()).exp() * span;
        let d3 = if t_theta == 0.0 || d00 == p.radius || bound < 1e-250 {
            0.0
        } else {
            let tol = 1e-12 * bound;
            let ring = integrate(
                |r: f64| {
                    let u = t_theta * r.powf(-p.alpha1);
                    (order * u.ln() - (phi + order) * u.ln_1p()).exp() * r
                },
                d00,
                p.radius,
                tol,
            )?
            .value;
            two_pi_lb * rising * ring
        };
        let mut y = d2 + d3;
        if i == 1 {
            y += drive;
        }
        out.push(if i % 2 == 1 { -y } else { y });
        rising *= (phi + order) / order;
    }
    Ok(out)
}

/// Scaled Bell recurrence: `b_0 = 1`,
/// `b_{m+1} = (1/(m+1)) sum_{j=0}^{m} b_{m-j} y_{j+1}` where `b_i = B_i/i!`
/// over the scaled derivatives `y`. Returns `[b_0, ..., b_{len(y)}]`.
fn scaled_bell(ys: &[f64]) -> Vec<f64> {
    let mut b = Vec::with_capacity(ys.len() + 1);
    b.push(1.0);
    for m in 0..ys.len() {
        let mut acc = 0.0;
        for (j, y) in ys[..=m].iter().enumerate() {
            acc += b[m - j] * y;
        }
        b.push(acc / (m as f64 + 1.0));
    }
    b
}

/// Conditional coverage at `d00` through the alternating Bell series with
/// integer shape `k_int` (`k_int = 0` is the empty sum, defined as 0).
pub fn coverage_at_distance_bell(
    d00: f64,
    ctx: &CoverageContext,
    k_int: u32,
) -> Result<f64, CoverageError> {
    let prof = ctx.signal_profile(d00);
    bell_with_profile(d00, ctx, k_int, &prof)
}

fn bell_with_profile(
    d00: f64,
    ctx: &CoverageContext,
    k_int: u32,
    prof: &SignalProfile,
) -> Result<f64, CoverageError> {
    if k_int == 0 {
        return Ok(0.0);
    }
    let d = &ctx.derived;
    let theta = prof.fit.scale;
    let t_theta = ctx.threshold * d.rho_b * d.beta0 / theta;
    let c = t_theta * d00.powf(-ctx.params.alpha1);
    let g1 = -ctx.threshold * ctx.interference_floor / theta
        + (1.0 - d.mean_ues_per_bs) * c.ln_1p()
        + pgfl::interference_exponent(t_theta, d00, &ctx.params, d)?;
    if g1 < -700.0 {
        // exp(g1) underflows and the scaled Bell terms would overflow first;
        // the coverage itself is indistinguishable from zero here.
        return Ok(0.0);
    }
    let ys = scaled_g_derivatives(k_int as usize - 1, d00, ctx, prof)?;
    let b = scaled_bell(&ys);
    let scale = g1.exp();
    // Neumaier-compensated alternating sum. The scaled derivatives carry
    // sign (-1)^i, which makes every b_i carry sign (-1)^i as well, so each
    // term below is non-negative in exact arithmetic and the partial sums
    // climb monotonically toward a probability. A partial sum outside the
    // trusted band therefore means the series has degenerated numerically.
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for (i, b_i) in b.iter().enumerate() {
        let term = scale * if i % 2 == 0 { *b_i } else { -*b_i };
        let fresh = sum + term;
        compensation += if sum.abs() >= term.abs() {
            (sum - fresh) + term
        } else {
            (term - fresh) + sum
        };
        sum = fresh;
        let partial = sum + compensation;
        if !partial.is_finite() || partial.abs() > OSCILLATION_LIMIT {
            return Err(CoverageError::IllConditioned {
                d00,
                magnitude: partial,
                limit: OSCILLATION_LIMIT,
            });
        }
    }
    Ok((sum + compensation).clamp(0.0, 1.0))
}

/// Tabulated CDF of the out-of-cell interference `I_B` given `d00`,
/// obtained by certified inverse Laplace inversion of the PGFL transform on
/// a geometric grid and monotonized, with shape-preserving cubic
/// interpolation on the log abscissa. Below the grid the CDF is 0.
struct InterferenceCdf {
    spline: MonotoneCubic,
    floor: f64,
}

impl InterferenceCdf {
    fn tabulate(d00: f64, x_max: f64, ctx: &CoverageContext) -> Result<Self, CoverageError> {
        let coeff = ctx.derived.rho_b * ctx.derived.beta0;
        let transform = |s: Complex64| {
            pgfl::interference_exponent_complex(s * coeff, d00, &ctx.params, &ctx.derived).exp()
        };
        let log_hi = x_max.ln();
        let log_lo = (x_max * CDF_TABLE_SPAN).ln();
        let mut xs = Vec::with_capacity(CDF_TABLE_NODES);
        let mut fs = Vec::with_capacity(CDF_TABLE_NODES);
        let mut running_max = 0.0f64;
        for i in 0..CDF_TABLE_NODES {
            let frac = i as f64 / (CDF_TABLE_NODES - 1) as f64;
            let log_x = log_lo + frac * (log_hi - log_lo);
            let value = inverse_laplace_cdf(&transform, log_x.exp())?;
            // Inversion wiggle in the deep tails must not break monotonicity
            // of the interpolated CDF.
            running_max = running_max.max(value).min(1.0);
            xs.push(log_x);
            fs.push(running_max);
        }
        Ok(Self {
            spline: MonotoneCubic::new(xs, fs),
            floor: x_max * CDF_TABLE_SPAN,
        })
    }

    fn eval(&self, x: f64) -> f64 {
        if x <= self.floor {
            0.0
        } else {
            self.spline.eval(x.ln()).clamp(0.0, 1.0)
        }
    }
}

/// CDF at `x` of `I_B0 + I_B`: the Gamma(phi_bar - 1, rb00) intra-cell
/// density convolved with the tabulated out-of-cell CDF. Panels double
/// geometrically from `min(rb00, x)`; the first panel is integrated with
/// the power-singularity rule because the density behaves like
/// `y^{phi_bar - 2}` at the origin.
fn convolved_cdf(
    x: f64,
    table: &InterferenceCdf,
    phi: f64,
    rb00: f64,
    panel_rule: &(Vec<f64>, Vec<f64>),
) -> Result<f64, QuadError> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    let shape = phi - 1.0;
    if shape <= SHAPE_EPSILON {
        // No intra-cell interferers: the Gamma factor degenerates to a
        // point mass at zero.
        return Ok(table.eval(x));
    }
    let first = rb00.min(x);
    let mut acc = integrate_power_singularity(
        |y| gamma_pdf(y, shape, rb00) * table.eval(x - y),
        first,
        shape - 1.0,
        CONV_PANEL_TOL,
    )?
    .value;
    let mut lo = first;
    while lo < x {
        let hi = (2.0 * lo).min(x);
        acc += gl_apply(panel_rule, |y| gamma_pdf(y, shape, rb00) * table.eval(x - y), lo, hi);
        lo = hi;
    }
    Ok(acc.clamp(0.0, 1.0))
}

/// Conditional coverage at `d00` through the Gamma-averaged conditional
/// CDF: `E_{S0}[ P(I_B0 + I_B <= S0/T - floor) ]` with `S0` truncated to
/// its central `1 - 2e-10` mass. Returns 0 when even the upper `S0`
/// quantile leaves no headroom above the interference floor.
pub fn coverage_large_shape(d00: f64, ctx: &CoverageContext) -> Result<f64, CoverageError> {
    let prof = ctx.signal_profile(d00);
    large_shape_with_profile(d00, ctx, &prof)
}

fn large_shape_with_profile(
    d00: f64,
    ctx: &CoverageContext,
    prof: &SignalProfile,
) -> Result<f64, CoverageError> {
    let GammaFit { shape: k, scale: theta } = prof.fit;
    let t = ctx.threshold;
    let floor = ctx.interference_floor;
    let s0_lo = gamma_quantile(S0_TAIL_MASS, k, theta);
    let s0_hi = gamma_quantile_upper(S0_TAIL_MASS, k, theta);
    let x_max = s0_hi / t - floor;
    if x_max <= 0.0 {
        return Ok(0.0);
    }
    let table = InterferenceCdf::tabulate(d00, x_max, ctx)?;
    let phi = ctx.derived.mean_ues_per_bs;
    let rb00 = prof.serving_scale;
    let panel_rule = gauss_legendre(CONV_NODES);
    let mut total = 0.0;
    let lower = s0_lo.max(t * floor);
    if lower < s0_hi {
        let outer_rule = gauss_legendre(OUTER_NODES);
        let center = 0.5 * (lower + s0_hi);
        let half = 0.5 * (s0_hi - lower);
        for (&node, &weight) in outer_rule.0.iter().zip(outer_rule.1.iter()) {
            let s0 = center + half * node;
            let x = s0 / t - floor;
            total += weight
                * half
                * gamma_pdf(s0, k, theta)
                * convolved_cdf(x, &table, phi, rb00, &panel_rule)?;
        }
    }
    // Mass above the truncation point: the conditional CDF is evaluated at
    // its largest tabulated argument (it is non-decreasing in S0).
    total += gamma_ccdf(s0_hi, k, theta) * convolved_cdf(x_max, &table, phi, rb00, &panel_rule)?;
    Ok(total.clamp(0.0, 1.0))
}

/// Conditional coverage at `d00`, dispatching on the matched shape: the
/// Bell series below the switch (floor/ceiling blend for non-integer
/// shapes, the empty `k = 0` sum contributing 0), the Gamma-averaged route
/// at or above it. An ill-conditioned Bell series falls back to the
/// large-shape route; the diagnostics record which route answered.
pub fn coverage_at_distance(
    d00: f64,
    ctx: &CoverageContext,
) -> Result<DistanceCoverage, CoverageError> {
    assert!(
        d00 > 0.0 && d00 <= ctx.params.radius,
        "serving distance must lie in (0, R]"
    );
    let prof = ctx.signal_profile(d00);
    let k = prof.fit.shape;
    if k >= ctx.shape_switch {
        return Ok(DistanceCoverage {
            probability: large_shape_with_profile(d00, ctx, &prof)?,
            shape: k,
            path: EnginePath::LargeShape,
            fell_back: false,
        });
    }
    let blended = (|| -> Result<f64, CoverageError> {
        let k_floor = k.floor();
        let k_ceil = k.ceil();
        if k_floor == k_ceil {
            return bell_with_profile(d00, ctx, k as u32, &prof);
        }
        let p_floor = bell_with_profile(d00, ctx, k_floor as u32, &prof)?;
        let p_ceil = bell_with_profile(d00, ctx, k_ceil as u32, &prof)?;
        Ok((k_ceil - k) * p_floor + (k - k_floor) * p_ceil)
    })();
    match blended {
        Ok(probability) => Ok(DistanceCoverage {
            probability,
            shape: k,
            path: EnginePath::Bell,
            fell_back: false,
        }),
        Err(CoverageError::IllConditioned { .. }) => Ok(DistanceCoverage {
            probability: large_shape_with_profile(d00, ctx, &prof)?,
            shape: k,
            path: EnginePath::LargeShape,
            fell_back: true,
        }),
        Err(other) => Err(other),
    }
}

/// Network coverage probability: the conditional coverage averaged over the
/// nearest-BS distance density with a fixed 64-node Gauss-Legendre rule on
/// `(0, R]`. Nodes are evaluated in parallel and reduced in index order, so
/// the result does not depend on thread count or scheduling.
pub fn coverage(ctx: &CoverageContext) -> Result<CoverageSummary, CoverageError> {
    let (nodes, weights) = gauss_legendre(COVERAGE_NODES);
    let half = 0.5 * ctx.params.radius;
    let evaluations = nodes
        .par_iter()
        .map(|&node| coverage_at_distance(half * (node + 1.0), ctx))
        .collect::<Result<Vec<_>, CoverageError>>()?;
    let mut probability = 0.0;
    let mut shape_range = (f64::INFINITY, f64::NEG_INFINITY);
    let mut bell_nodes = 0;
    let mut large_shape_nodes = 0;
    let mut fallback_nodes = 0;
    for ((&node, &weight), dist) in nodes.iter().zip(weights.iter()).zip(evaluations.iter()) {
        let r = half * (node + 1.0);
        probability += weight * half * nearest_bs_pdf(r, &ctx.params) * dist.probability;
        shape_range.0 = shape_range.0.min(dist.shape);
        shape_range.1 = shape_range.1.max(dist.shape);
        match dist.path {
            EnginePath::Bell => bell_nodes += 1,
            EnginePath::LargeShape => large_shape_nodes += 1,
        }
        if dist.fell_back {
            fallback_nodes += 1;
        }
    }
    Ok(CoverageSummary {
        probability,
        shape_range,
        bell_nodes,
        large_shape_nodes,
        fallback_nodes,
    })
}
