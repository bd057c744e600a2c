//! Numerical kernels shared by the analytic engines.
//!
//! Everything in here is deliberately self-contained and deterministic:
//! special functions ([`gamma`]), fixed and adaptive quadrature ([`quad`]),
//! complete Bell polynomials ([`bell`]), the Gauss hypergeometric function
//! ([`hyp2f1`]), numerical inversion of Laplace transforms ([`invlap`]) and
//! shape-preserving cubic interpolation ([`interp`]).
//!
//! The kernels are written against explicit accuracy contracts (each module
//! documents its own) and validated in the test suites against independent
//! oracles: closed forms, set-partition sums, finite-difference ladders and
//! high-precision reference values.

pub mod bell;
pub mod gamma;
pub mod hyp2f1;
pub mod interp;
pub mod invlap;
pub mod quad;

pub use bell::bell_complete;
pub use gamma::{
    gamma_ccdf, gamma_cdf, gamma_pdf, gamma_quantile, gamma_quantile_upper, ln_gamma,
    nakagami_mean,
};
pub use hyp2f1::gauss_2f1;
pub use interp::MonotoneCubic;
pub use invlap::{euler_invert, inverse_laplace_cdf, EulerConfig, InversionError};
pub use quad::{
    gauss_legendre, gl_apply, integrate, integrate_power_singularity, QuadError, QuadResult,
};

/// Errors produced by the numerical kernels.
#[derive(Debug, thiserror::Error)]
pub enum MathError {
    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error(transparent)]
    Quad(#[from] QuadError),
    /// The two inversion contours disagree beyond the certification band.
    #[error(transparent)]
    Inversion(#[from] InversionError),
    /// A special-function evaluation left its supported domain.
    #[error("domain error in {routine}: {message}")]
    Domain {
        routine: &'static str,
        message: String,
    },
}
