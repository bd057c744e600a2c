//! Dual-engine evaluation toolkit for hybrid cellular + cell-free downlink
//! networks.
//!
//! A *hybrid* network overlays two tiers on shared spectrum: cellular base
//! stations (BSs) that each serve the users of their own Voronoi cell through
//! conjugate beamforming, and a field of distributed access points (APs) that
//! all cooperatively serve every user. Both tiers, and the users, are drawn
//! from independent Poisson point processes on a disk; performance is read at
//! a typical user placed at the origin.
//!
//! Two independent engines compute the same two figures of merit:
//!
//! * **Analytic** ([`coverage`], [`rate`]) — closed-form stochastic-geometry
//!   pipeline: moment matching of the aggregate signal to a Gamma law
//!   ([`moments`]), probability generating functionals for the interference
//!   transforms ([`pgfl`]), Faà di Bruno / Bell-polynomial derivatives or
//!   numerical inverse Laplace transforms for the distribution functions
//!   ([`mathkit`]).
//! * **Monte Carlo** ([`mcsim`]) — explicit deployments, antenna channels and
//!   beamformers, no analytic shortcuts; used to validate the approximations
//!   the analytic chain makes.
//!
//! The crate is deterministic by construction: fixed seeds give bit-identical
//! results regardless of thread count.

pub mod mathkit;
pub mod mcsim;
pub mod moments;
pub mod params;
pub mod pgfl;
// Modules below are being brought up bottom-up; see git history.
pub mod coverage;
pub mod rate;
// pub mod mcsim;

pub use params::{Config, DerivedParams, NetworkParams};
