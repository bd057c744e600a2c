//! First and second moments of the received-power terms, and the Gamma
//! moment match.
//!
//! The aggregate AP signal amplitude at the typical user is a shot-noise sum
//! over the AP process; Campbell's theorem gives its mean `L_A` in closed
//! form, and likewise the mean aggregate AP interference `I_A_bar`. The
//! useful signal `S_0` (and the signal-plus-intra-cell term `S_I` used by
//! the rate engine) is approximated by a Gamma law matched to its exact
//! first two moments; the moments mix the serving-link Nakagami amplitude
//! with the constant `L_A`, conditioned on the serving distance `d00`.

use crate::mathkit::ln_gamma;
use crate::params::{DerivedParams, NetworkParams};

/// Gamma distribution matched to a pair of raw moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFit {
    /// Shape parameter `k = m1^2 / (m2 - m1^2)`.
    pub shape: f64,
    /// Scale parameter `theta = (m2 - m1^2) / m1`.
    pub scale: f64,
}

impl GammaFit {
    /// Mean of the fitted law, `k * theta`.
    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }
}

/// `Gamma(n + 1/2) / Gamma(n)` evaluated in log space.
fn gamma_ratio_half(n: f64) -> f64 {
    (ln_gamma(n + 0.5) - ln_gamma(n)).exp()
}

/// Mean aggregate AP signal amplitude at the typical user (units sqrt(W)):
///
/// `L_A = 4 pi sqrt(rho_A delta_0) lambda_A / (4 - alpha_2)
///        * Gamma(N_A + 1/2)/Gamma(N_A) * (|A|/pi)^{1 - alpha_2/4}`.
///
/// Campbell's theorem applied to the amplitude shot noise
/// `sum_j sqrt(rho_A delta_0 l_j^{-alpha_2}) ||xi_j||` over the AP disk.
pub fn mean_ap_signal(p: &NetworkParams, d: &DerivedParams) -> f64 {
    if p.lambda_a == 0.0 || p.p_a == 0.0 {
        return 0.0;
    }
    4.0 * std::f64::consts::PI * (d.rho_a * d.delta0).sqrt() * p.lambda_a
        / (4.0 - p.alpha2)
        * gamma_ratio_half(f64::from(p.n_a))
        * (d.area / std::f64::consts::PI).powf(1.0 - p.alpha2 / 4.0)
}

/// Mean aggregate AP interference power at the typical user (units W):
///
/// `I_A_bar = 2 pi rho_A lambda_A delta_0 (lambda_U |A| - 1) / (2 - alpha_2)
///            * (|A|/pi)^{1 - alpha_2/2}`.
///
/// The `lambda_U |A| - 1` factor counts the other users each AP beams to;
/// a network containing only the typical user has no AP interference.
pub fn mean_ap_interference(p: &NetworkParams, d: &DerivedParams) -> f64 {
    if p.lambda_a == 0.0 || p.p_a == 0.0 {
        return 0.0;
    }
    let mean_users = p.lambda_u * d.area;
    2.0 * std::f64::consts::PI * d.rho_a * p.lambda_a * d.delta0 * (mean_users - 1.0)
        / (2.0 - p.alpha2)
        * (d.area / std::f64::consts::PI).powf(1.0 - p.alpha2 / 2.0)
}

/// First two raw moments of the useful signal
/// `S_0 = (sqrt(rho_B beta_00) ||h_00|| + a_A)^2`, conditioned on serving
/// distance `d00`, with the AP amplitude pinned at its mean `l_a`.
///
/// `||h_00||^2` is Gamma(N_B, 1); odd amplitude moments bring in
/// `Gamma(N_B + 1/2)/Gamma(N_B)` and `Gamma(N_B + 3/2)/Gamma(N_B)` factors.
pub fn s0_moments(d00: f64, p: &NetworkParams, d: &DerivedParams, l_a: f64) -> (f64, f64) {
    let rb = d.rho_b * d.beta0 * d00.powf(-p.alpha1);
    let n_b = f64::from(p.n_b);
    let g12 = gamma_ratio_half(n_b);
    let g32 = (ln_gamma(n_b + 1.5) - ln_gamma(n_b)).exp();
    let m1 = rb * n_b + 2.0 * rb.sqrt() * l_a * g12 + l_a * l_a;
    let m2 = rb * rb * n_b * (n_b + 1.0)
        + 4.0 * rb.powf(1.5) * l_a * g32
        + 6.0 * rb * l_a * l_a * n_b
        + 4.0 * rb.sqrt() * l_a.powi(3) * g12
        + l_a.powi(4);
    (m1, m2)
}

/// First two raw moments of `S_I`: the useful signal plus the intra-cell
/// beams of the serving BS (its other `phi_bar - 1` users on average), again
/// conditioned on `d00` with the AP amplitude at its mean.
pub fn si_moments(d00: f64, p: &NetworkParams, d: &DerivedParams, l_a: f64) -> (f64, f64) {
    let rb = d.rho_b * d.beta0 * d00.powf(-p.alpha1);
    let n_b = f64::from(p.n_b);
    let phi = d.mean_ues_per_bs;
    let g12 = gamma_ratio_half(n_b);
    let g32 = (ln_gamma(n_b + 1.5) - ln_gamma(n_b)).exp();
    let m1 = rb * (n_b + phi - 1.0) + 2.0 * rb.sqrt() * l_a * g12 + l_a * l_a;
    let m2 = rb * rb * ((n_b + phi) * (n_b + phi) + phi - n_b - 2.0)
        + 4.0 * rb.powf(1.5) * l_a * g32 * (1.0 + (phi - 1.0) / n_b)
        + rb * l_a * l_a * (6.0 * n_b + 2.0 * phi - 2.0)
        + 4.0 * rb.sqrt() * l_a.powi(3) * g12
        + l_a.powi(4);
    (m1, m2)
}

/// Match a Gamma law to raw moments `(m1, m2)`:
/// `shape = m1^2 / var`, `scale = var / m1` with `var = m2 - m1^2`.
///
/// # Panics
/// Panics if the moments are not realizable (`m1 <= 0` or `m2 <= m1^2`),
/// which cannot happen for the moment pairs produced above.
pub fn match_gamma(m1: f64, m2: f64) -> GammaFit {
    let var = m2 - m1 * m1;
    assert!(
        m1 > 0.0 && var > 0.0,
        "match_gamma requires m1 > 0 and m2 > m1^2 (got m1 = {m1}, m2 = {m2})"
    );
    GammaFit {
        shape: m1 * m1 / var,
        scale: var / m1,
    }
}
