//! Probability generating functional (PGFL) exponent of the out-of-cell BS
//! interference.
//!
//! For the typical user served by its nearest BS at distance `d00`, every
//! other BS lies beyond `d00`; each contributes `phi_bar` conjugate beams
//! whose aggregate per-BS power is Gamma(phi_bar, rho_B beta(r)) in the
//! moment-matched model. The PGFL of the Poisson process turns the Laplace
//! transform of the total into
//!
//! `L_{I_B}(s) = exp( 2 pi lambda_B int_{d00}^{R}
//!                    [ (1 + c r^{-alpha_1})^{-phi_bar} - 1 ] r dr )`
//!
//! with `c = s rho_B beta_0`. Both engines need this exponent: the coverage
//! chain on the real axis (and its derivatives) and the inverse-Laplace
//! tabulation along a complex contour. The integrand is evaluated through
//! `ln_1p`/`exp_m1` (principal branch in the complex case) so that huge `c`
//! — the live range reaches ~1e7 — loses no precision near the flat tail.

use num_complex::Complex64;

use crate::mathkit::{integrate, QuadError};
use crate::params::{DerivedParams, NetworkParams};

/// Absolute quadrature tolerance for an exponent over `[d00, R]`, scaled so
/// the final exponent (after the `2 pi lambda_B` factor) is good to ~1e-9.
fn quad_tol(d00: f64, radius: f64, lambda_b: f64) -> f64 {
    let span = 0.5 * (radius * radius - d00 * d00).max(1.0);
    1e-9 * span.max(1.0) / (2.0 * std::f64::consts::PI * lambda_b * span).max(1.0)
}

/// Real-axis exponent: `2 pi lambda_B int_{d00}^{R} expm1(-phi_bar *
/// ln1p(c r^{-alpha_1})) r dr`, for `c >= 0`. Always `<= 0`.
pub fn interference_exponent(
    c: f64,
    d00: f64,
    p: &NetworkParams,
    d: &DerivedParams,
) -> Result<f64, QuadError> {
    assert!(c >= 0.0, "real PGFL exponent requires c >= 0");
    assert!(d00 >= 0.0 && d00 <= p.radius, "serving distance inside the disk");
    if c == 0.0 || d00 == p.radius {
        return Ok(0.0);
    }
    let phi = d.mean_ues_per_bs;
    let f = |r: f64| (-phi * (c * r.powf(-p.alpha1)).ln_1p()).exp_m1() * r;
    let tol = quad_tol(d00, p.radius, p.lambda_b);
    let integral = integrate(f, d00, p.radius, tol)?.value;
    Ok(2.0 * std::f64::consts::PI * p.lambda_b * integral)
}

/// Complex-contour exponent (principal branch), for the inverse-Laplace
/// tabulation of the out-of-cell interference CDF.
///
/// A quadrature failure poisons the result with NaN rather than panicking:
/// the caller is an inverse-Laplace contour sum whose certification step
/// rejects NaN-contaminated inversions, so the failure surfaces as a
/// reported inversion error instead of a crash.
pub fn interference_exponent_complex(
    c: Complex64,
    d00: f64,
    p: &NetworkParams,
    d: &DerivedParams,
) -> Complex64 {
    assert!(d00 >= 0.0 && d00 <= p.radius, "serving distance inside the disk");
    if c == Complex64::new(0.0, 0.0) || d00 == p.radius {
        return Complex64::new(0.0, 0.0);
    }
    let phi = d.mean_ues_per_bs;
    let f = |r: f64| {
        let z = c * r.powf(-p.alpha1);
        ((-phi * (1.0 + z).ln()).exp() - 1.0) * r
    };
    let tol = quad_tol(d00, p.radius, p.lambda_b);
    match integrate(f, d00, p.radius, tol) {
        Ok(result) => 2.0 * std::f64::consts::PI * p.lambda_b * result.value,
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::table1;
    use approx::assert_relative_eq;

    #[test]
    fn matches_golden_values_over_the_live_coefficient_range() {
        let p = table1();
        let d = p.derive();
        let golden = [
            (1e4, 100.0, -0.168_838_106_453_898_05),
            (1.26e6, 100.0, -9.748_702_486_807_867),
            (2.7e6, 250.0, -8.767_711_641_610_82),
            (3e5, 60.0, -4.452_199_816_104_157),
            (1e7, 30.0, -24.896_502_041_661_8),
        ];
        for (c, d00, want) in golden {
            assert_relative_eq!(
                interference_exponent(c, d00, &p, &d).unwrap(),
                want,
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn complex_evaluation_matches_golden_values() {
        let p = table1();
        let d = p.derive();
        let v = interference_exponent_complex(Complex64::new(2e5, 4e5), 100.0, &p, &d);
        assert_relative_eq!(v.re, -3.813_695_278_846_239, max_relative = 1e-8);
        assert_relative_eq!(v.im, -3.833_155_687_019_571, max_relative = 1e-8);
        let v = interference_exponent_complex(Complex64::new(1e6, -2e6), 150.0, &p, &d);
        assert_relative_eq!(v.re, -10.630_124_959_453_317, max_relative = 1e-8);
        assert_relative_eq!(v.im, 7.692_919_616_298_818, max_relative = 1e-8);
    }

    #[test]
    fn complex_path_agrees_with_real_path_on_the_real_axis() {
        let p = table1();
        let d = p.derive();
        for (c, d00) in [(1e4, 100.0), (3e5, 60.0), (2.7e6, 250.0)] {
            let re = interference_exponent(c, d00, &p, &d).unwrap();
            let cx = interference_exponent_complex(Complex64::new(c, 0.0), d00, &p, &d);
            assert_relative_eq!(cx.re, re, max_relative = 1e-9);
            assert!(cx.im.abs() < 1e-12 * re.abs().max(1.0));
        }
    }

    #[test]
    fn exponent_is_zero_at_zero_and_decreases_in_c() {
        let p = table1();
        let d = p.derive();
        assert_eq!(interference_exponent(0.0, 120.0, &p, &d).unwrap(), 0.0);
        let mut last = 0.0;
        for c in [1e2, 1e4, 1e6, 1e8] {
            let v = interference_exponent(c, 120.0, &p, &d).unwrap();
            assert!(v < last, "exponent must strictly decrease in c");
            last = v;
        }
        // The induced Laplace transform stays a probability-like value.
        assert!((0.0..=1.0).contains(&last.exp()));
    }

    #[test]
    fn exponent_vanishes_when_no_interfering_ring_remains() {
        let p = table1();
        let d = p.derive();
        let v = interference_exponent(1e6, p.radius * (1.0 - 1e-12), &p, &d).unwrap();
        assert!(v.abs() < 1e-9);
        assert_eq!(interference_exponent(1e6, p.radius, &p, &d).unwrap(), 0.0);
        let cx = interference_exponent_complex(Complex64::new(1e6, 3e5), p.radius, &p, &d);
        assert_eq!(cx, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn derivative_in_c_matches_the_closed_form_kernel() {
        // d/dc exponent = -2 pi lambda_B phi int r^{-a1} (1+c r^{-a1})^{-phi-1} r dr,
        // checked against a central difference of the exponent itself.
        let p = table1();
        let d = p.derive();
        let (c, d00) = (2e5, 90.0);
        let phi = d.mean_ues_per_bs;
        let kernel = integrate(
            |r: f64| {
                let u = r.powf(-p.alpha1);
                u * (-(phi + 1.0) * (c * u).ln_1p()).exp() * r
            },
            d00,
            p.radius,
            1e-13,
        )
        .unwrap()
        .value;
        let closed = -2.0 * std::f64::consts::PI * p.lambda_b * phi * kernel;
        let h = c * 1e-6;
        let fd = (interference_exponent(c + h, d00, &p, &d).unwrap()
            - interference_exponent(c - h, d00, &p, &d).unwrap())
            / (2.0 * h);
        assert_relative_eq!(fd, closed, max_relative = 1e-6);
    }
}
