//! Estimation toolkit for the Lomax (Pareto type II) distribution.
//!
//! The Lomax distribution, with scale σ > 0 and shape β > 0, has density
//! f(x) = (β/σ)·(1 + x/σ)^−(β+1) on x ≥ 0. Its polynomial tail makes it a
//! standard model for heavy-tailed nonnegative data such as insurance losses,
//! but the same tail makes parameter estimation fragile: moments beyond order
//! β do not exist, and maximum likelihood can be wildly unstable at the
//! sample sizes practitioners actually have.
//!
//! This crate implements ten estimators side by side so they can be compared
//! on equal footing:
//!
//! * method of moments ([`estimators::estimate_mme`]),
//! * L-moments ([`estimators::estimate_lme`]),
//! * probability-weighted moments ([`estimators::estimate_pwme`]),
//! * maximum likelihood via the profile likelihood
//!   ([`estimators::estimate_mle`]) and its second-order bias-corrected
//!   variant ([`estimators::estimate_mle_bias_corrected`]),
//! * five minimum-distance estimators ([`estimators::estimate_mde`])
//!   minimizing the Cramér-von Mises, stabilized-distance,
//!   Kullback-Leibler, chi-square, or total-variation discrepancy between
//!   the fitted model and the sample.
//!
//! Around the estimators sit a reproducible Monte Carlo harness for
//! comparing them ([`simulation`]), a parametric-bootstrap
//! Kolmogorov-Smirnov goodness-of-fit test ([`gof`]), a de-grouping
//! routine for tied, rounded data ([`data::degroup`]), and a bundled case
//! study of 40 wind-catastrophe losses ([`data::wind_catastrophes`]).
//!
//! # Example
//!
//! ```
//! use lomax::data::wind_catastrophes;
//! use lomax::estimators::{estimate, Method};
//!
//! let s = wind_catastrophes();
//! let fit = estimate(&s, Method::Mle);
//! assert!(fit.converged);
//! let p = fit.params.unwrap();
//! assert!(p.sigma() > 0.0 && p.beta() > 0.0);
//! ```

pub mod data;
pub mod distribution;
pub mod error;
pub mod estimators;
pub mod gof;
pub mod numerics;
pub mod simulation;

pub use distribution::{LomaxParams, Sample};
pub use error::{LomaxError, LomaxResult};
pub use estimators::{estimate, estimate_many, EstimateResult, Method};
