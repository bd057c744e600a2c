//! Network parameters and derived scalars.
//!
//! All internal math is in SI units: densities per m², powers in watts,
//! distances in meters. The JSON config speaks the units people actually use
//! (per km², dBm, GHz) and is converted exactly once, at parse time, so the
//! rest of the crate never multiplies by 10⁶ again.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Propagation speed used for the reference path gain, m/s.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// Validated scalar inputs describing one network configuration.
///
/// Densities are per m², powers in watts. Construct via [`NetworkParams::from_config`]
/// (JSON) or build the struct directly and call [`NetworkParams::validate`].
/// Serializes to the same SI fields, so tools can echo the exact resolved
/// values they computed with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkParams {
    /// Base-station density, per m².
    pub lambda_b: f64,
    /// Access-point density, per m².
    pub lambda_a: f64,
    /// User density, per m².
    pub lambda_u: f64,
    /// Path-loss exponent of the BS links; must exceed 2 so the inter-cell
    /// interference integral has an integrable tail.
    pub alpha1: f64,
    /// Path-loss exponent of the AP links; must be below 2 so the mean AP
    /// interference integral converges.
    pub alpha2: f64,
    /// BS transmit power, watts.
    pub p_b: f64,
    /// Per-AP transmit power, watts.
    pub p_a: f64,
    /// Reference SNR `P_B/σ²` in dB, from which the noise power is derived.
    pub snr_ref_db: f64,
    /// BS antenna count.
    pub n_b: u32,
    /// AP antenna count.
    pub n_a: u32,
    /// Network disk radius, meters.
    pub radius: f64,
    /// Carrier frequency, Hz.
    pub freq: f64,
}

/// Scalars derived from [`NetworkParams`] that every engine consumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Disk area |𝒜| = πR², m².
    pub area: f64,
    /// BS power-split factor η_B = λ_B/λ_U (each BS divides power across the
    /// network-average number of users it serves).
    pub eta_b: f64,
    /// AP power-split factor η_A = 1/(λ_U·|𝒜|) (each AP serves every user).
    pub eta_a: f64,
    /// Mean users per BS, φ̄ = λ_U/λ_B. Kept as a real number everywhere;
    /// Gamma shapes and Laplace exponents are well defined for non-integers.
    pub mean_ues_per_bs: f64,
    /// Per-user BS beam power ρ_B = P_B·η_B, watts.
    pub rho_b: f64,
    /// Per-user AP beam power ρ_A = P_A·η_A, watts.
    pub rho_a: f64,
    /// Noise power σ² = P_B/10^(snr_ref_db/10), watts.
    pub sigma2: f64,
    /// Reference path gain of BS links at 1 m, (C/4πf)².
    pub beta0: f64,
    /// Reference path gain of AP links at 1 m, (C/4πf)².
    pub delta0: f64,
}

/// How severe a [`Violation`] is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    /// The configuration is unusable.
    Error,
    /// Unusual but evaluable; reported, not fatal.
    Warning,
}

/// One failed validation check, naming the field and the violated bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub severity: Severity,
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}: {}", self.field, self.message)
    }
}

/// JSON configuration mirroring the usual simulation-parameter table.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(rename = "lambda_B_per_km2")]
    pub lambda_b_per_km2: f64,
    #[serde(rename = "lambda_A_per_km2")]
    pub lambda_a_per_km2: f64,
    #[serde(rename = "lambda_U_per_km2")]
    pub lambda_u_per_km2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    #[serde(rename = "P_B_dBm")]
    pub p_b_dbm: f64,
    #[serde(rename = "P_A_dBm")]
    pub p_a_dbm: f64,
    #[serde(rename = "snr_ref_dB")]
    pub snr_ref_db: f64,
    #[serde(rename = "N_B")]
    pub n_b: u32,
    #[serde(rename = "N_A")]
    pub n_a: u32,
    #[serde(rename = "freq_GHz")]
    pub freq_ghz: f64,
    pub radius_m: f64,
}

/// dBm → watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

/// watts → dBm.
pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * (w / 1e-3).log10()
}

const PER_KM2_TO_PER_M2: f64 = 1e-6;

impl From<Config> for NetworkParams {
    fn from(c: Config) -> Self {
        NetworkParams {
            lambda_b: c.lambda_b_per_km2 * PER_KM2_TO_PER_M2,
            lambda_a: c.lambda_a_per_km2 * PER_KM2_TO_PER_M2,
            lambda_u: c.lambda_u_per_km2 * PER_KM2_TO_PER_M2,
            alpha1: c.alpha1,
            alpha2: c.alpha2,
            p_b: dbm_to_watts(c.p_b_dbm),
            p_a: dbm_to_watts(c.p_a_dbm),
            snr_ref_db: c.snr_ref_db,
            n_b: c.n_b,
            n_a: c.n_a,
            radius: c.radius_m,
            freq: c.freq_ghz * 1e9,
        }
    }
}

impl NetworkParams {
    /// Parse and validate a JSON config; returns the violations on failure.
    pub fn from_config(json: &str) -> Result<Self, ConfigError> {
        let cfg: Config = serde_json::from_str(json).map_err(ConfigError::Parse)?;
        let p = NetworkParams::from(cfg);
        let errors: Vec<Violation> = p
            .validate()
            .into_iter()
            .filter(|v| v.severity == Severity::Error)
            .collect();
        if errors.is_empty() {
            Ok(p)
        } else {
            Err(ConfigError::Invalid(errors))
        }
    }

    /// Check every structural bound; empty result means the configuration is
    /// valid (warnings excluded — filter on [`Severity`] if they matter).
    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let mut err = |field: &'static str, message: String| {
            v.push(Violation {
                severity: Severity::Error,
                field,
                message,
            })
        };
        for (field, value) in [
            ("lambda_B", self.lambda_b),
            ("lambda_A", self.lambda_a),
            ("lambda_U", self.lambda_u),
            ("P_B", self.p_b),
            ("P_A", self.p_a),
            ("radius", self.radius),
            ("freq", self.freq),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                err(field, format!("must be strictly positive, got {value}"));
            }
        }
        if !(self.alpha1 > 2.0) {
            err(
                "alpha1",
                format!("must exceed 2 for the interference tail to converge, got {}", self.alpha1),
            );
        }
        if !(self.alpha2 < 2.0) || !(self.alpha2 > 0.0) {
            err(
                "alpha2",
                format!("must lie in (0, 2) for the mean AP interference to converge, got {}", self.alpha2),
            );
        }
        if self.n_b < 1 {
            err("N_B", "must be at least 1".into());
        }
        if self.n_a < 1 {
            err("N_A", "must be at least 1".into());
        }
        if !(self.lambda_u > self.lambda_b) {
            err(
                "lambda_U",
                format!(
                    "must exceed lambda_B so the intra-cell interference shape φ̄−1 stays positive \
                     (lambda_U = {:e}, lambda_B = {:e})",
                    self.lambda_u, self.lambda_b
                ),
            );
        }
        if self.p_b <= self.p_a {
            v.push(Violation {
                severity: Severity::Warning,
                field: "P_A",
                message: format!(
                    "P_B ({} W) is not above P_A ({} W); the model assumes macro BSs transmit \
                     stronger than APs",
                    self.p_b, self.p_a
                ),
            });
        }
        v
    }

    /// Compute every derived scalar. Pure and idempotent; call after `validate`.
    pub fn derive(&self) -> DerivedParams {
        let area = std::f64::consts::PI * self.radius * self.radius;
        let eta_b = self.lambda_b / self.lambda_u;
        let eta_a = 1.0 / (self.lambda_u * area);
        let gain = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * self.freq);
        let beta0 = gain * gain;
        DerivedParams {
            area,
            eta_b,
            eta_a,
            mean_ues_per_bs: self.lambda_u / self.lambda_b,
            rho_b: self.p_b * eta_b,
            rho_a: self.p_a * eta_a,
            sigma2: self.p_b / 10f64.powf(self.snr_ref_db / 10.0),
            beta0,
            delta0: beta0,
        }
    }
}

/// Errors from [`NetworkParams::from_config`].
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(#[source] serde_json::Error),
    #[error("invalid config: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::table1;
    use approx::assert_relative_eq;

    const TABLE1_JSON: &str = r#"{
        "lambda_B_per_km2": 40, "lambda_A_per_km2": 200, "lambda_U_per_km2": 120,
        "alpha1": 2.8, "alpha2": 1.5, "P_B_dBm": 50, "P_A_dBm": 10,
        "snr_ref_dB": 130, "N_B": 8, "N_A": 2, "freq_GHz": 3.5, "radius_m": 500
    }"#;

    #[test]
    fn derives_ratio_scalars_exactly() {
        let d = table1().derive();
        assert_relative_eq!(d.mean_ues_per_bs, 3.0, max_relative = 1e-15);
        assert_relative_eq!(d.eta_b, 1.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(d.eta_b * d.mean_ues_per_bs, 1.0, max_relative = 1e-15);
        assert_relative_eq!(d.eta_a * 120e-6 * d.area, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn derives_golden_reference_gain() {
        // (C/4πf)² at 3.5 GHz, pinned from an independent high-precision evaluation.
        let d = table1().derive();
        assert_relative_eq!(d.beta0, 4.652503330515511e-5, max_relative = 1e-14);
        assert_eq!(d.beta0, d.delta0);
    }

    #[test]
    fn derives_powers_and_noise() {
        let d = table1().derive();
        assert_relative_eq!(d.rho_b, 100.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(d.rho_a * 120e-6 * d.area, 0.01, max_relative = 1e-15);
        assert_relative_eq!(d.sigma2, 1e-11, max_relative = 1e-12);
    }

    #[test]
    fn half_user_density_gives_eta_half() {
        let mut p = table1();
        p.lambda_u = 2.0 * p.lambda_b;
        let d = p.derive();
        assert_eq!(d.eta_b, 0.5);
        assert_eq!(d.mean_ues_per_bs, 2.0);
    }

    #[test]
    fn unit_rescaling_leaves_derived_scalars_unchanged() {
        // Scaling all densities by a common factor must cancel wherever only
        // ratios enter, and scale η_A-type quantities consistently.
        let p = table1();
        let d = p.derive();
        let mut q = p;
        q.lambda_b *= 10.0;
        q.lambda_a *= 10.0;
        q.lambda_u *= 10.0;
        let e = q.derive();
        assert_relative_eq!(d.eta_b, e.eta_b, max_relative = 1e-14);
        assert_relative_eq!(d.mean_ues_per_bs, e.mean_ues_per_bs, max_relative = 1e-14);
        assert_relative_eq!(d.rho_b, e.rho_b, max_relative = 1e-14);
        assert_relative_eq!(e.eta_a, d.eta_a / 10.0, max_relative = 1e-15);
    }

    #[test]
    fn power_identities_hold_for_any_valid_params() {
        let p = table1();
        let d = p.derive();
        assert_relative_eq!(d.rho_a * p.lambda_u * d.area, p.p_a, max_relative = 1e-15);
        assert_relative_eq!(d.rho_b * p.lambda_u, p.p_b * p.lambda_b, max_relative = 1e-15);
    }

    #[test]
    fn validate_accepts_the_reference_config() {
        let errors: Vec<_> = table1()
            .validate()
            .into_iter()
            .filter(|v| v.severity == Severity::Error)
            .collect();
        assert!(errors.is_empty(), "{errors:?}");
    }

    #[test]
    fn validate_rejects_alpha2_at_least_two() {
        let mut p = table1();
        p.alpha2 = 2.5;
        let v = p.validate();
        assert!(v.iter().any(|v| v.field == "alpha2" && v.severity == Severity::Error));
    }

    #[test]
    fn validate_rejects_equal_user_and_bs_density() {
        let mut p = table1();
        p.lambda_u = p.lambda_b;
        let v = p.validate();
        assert!(v.iter().any(|v| v.field == "lambda_U" && v.severity == Severity::Error));
    }

    #[test]
    fn validate_warns_when_ap_power_reaches_bs_power() {
        let mut p = table1();
        p.p_a = p.p_b;
        let v = p.validate();
        assert!(v
            .iter()
            .any(|v| v.field == "P_A" && v.severity == Severity::Warning));
        assert!(v.iter().all(|v| v.severity != Severity::Error));
    }

    #[test]
    fn json_config_matches_direct_construction() {
        let p = NetworkParams::from_config(TABLE1_JSON).unwrap();
        let q = table1();
        assert_relative_eq!(p.lambda_b, q.lambda_b, max_relative = 1e-15);
        assert_relative_eq!(p.p_b, q.p_b, max_relative = 1e-12);
        assert_relative_eq!(p.p_a, q.p_a, max_relative = 1e-12);
        assert_eq!(p.n_b, 8);
        assert_eq!(p.freq, 3.5e9);
    }

    #[test]
    fn json_config_rejects_unknown_keys() {
        let bad = TABLE1_JSON.replace("\"alpha1\"", "\"alpha_one\"");
        assert!(NetworkParams::from_config(&bad).is_err());
    }

    #[test]
    fn dbm_round_trip() {
        for dbm in [-10.0, 0.0, 10.0, 30.0, 50.0] {
            assert_relative_eq!(watts_to_dbm(dbm_to_watts(dbm)), dbm, epsilon = 1e-12);
        }
    }
}
