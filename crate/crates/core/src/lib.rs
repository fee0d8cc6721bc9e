//! Secrecy outage analysis for a two-user MIMO NOMA downlink with transmit
//! antenna selection (TAS) over Nakagami-m fading.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds the scenario description and the derived symbols used by
//!   every closed form.
//! * [`kernel`] provides the numerical primitives: log-gamma, the regularized
//!   incomplete gamma function, weak-composition enumeration, signed
//!   log-domain summation, Gauss–Chebyshev nodes and an adaptive integrator.
//! * [`channel`] evaluates distribution functions of the channel power gains
//!   and the SINRs.
//! * [`secrecy`] evaluates the secrecy outage probabilities of the near user,
//!   the far user and the whole system, in closed form, by direct quadrature,
//!   and asymptotically.
//! * [`montecarlo`] simulates the raw system model as an independent check.
//! * [`sweep`] drives parameter sweeps, figure presets and CSV output.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod kernel;
pub mod model;
pub mod montecarlo;
pub mod secrecy;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{DerivedParams, Scenario, SolutionId, SystemConfig};
