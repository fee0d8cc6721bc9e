//! Secrecy outage probabilities of the near user, the far user and the
//! whole system.
//!
//! Every quantity comes in up to three flavours: a closed-form series, a
//! direct adaptive-quadrature evaluation of the defining integral (the
//! reference), and a high-SNR asymptote. The closed forms are written as
//! sums of signed log-domain terms; when those terms cancel so heavily that
//! fewer than nine significant digits survive, the public entry points fall
//! back to the quadrature form.

mod asymptotic;
mod far;
mod near;

pub use asymptotic::{sop_asymptotic, sop_far_asymptotic, sop_near_asymptotic, AsymptoticSop};
pub use far::{sop_far, sop_far_closed, sop_far_integral};
pub use near::{lambda1, lambda2, lambda3, lambda3_closed, lambda3_integral, sop_near, NearSop};

use crate::channel::SeriesValue;
use crate::error::{Error, Result};
use crate::model::{Scenario, SolutionId};

/// Largest excursion outside `[0, 1]` that is silently clamped away.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

/// Clamps a probability computed from a cancelling series. Excursions beyond
/// [`CLAMP_TOLERANCE`] indicate a defect and are reported as errors.
pub fn clamp_probability(expression: &'static str, raw: f64) -> Result<f64> {
    if !raw.is_finite() || !(-CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&raw) {
        return Err(Error::OutOfRange { expression, raw });
    }
    if !(0.0..=1.0).contains(&raw) {
        log::debug!("{expression}: clamped {raw:e} into [0, 1]");
    }
    Ok(raw.clamp(0.0, 1.0))
}

/// Uses the closed-form value when cancellation left it accurate, the
/// reference evaluation otherwise.
fn prefer_closed<F>(expression: &'static str, closed: SeriesValue, fallback: F) -> Result<f64>
where
    F: FnOnce() -> Result<f64>,
{
    if closed.is_accurate() {
        clamp_probability(expression, closed.value)
    } else {
        log::debug!(
            "{expression}: closed form {:e} has error bound {:e}, using quadrature",
            closed.value,
            closed.error_bound()
        );
        clamp_probability(expression, fallback()?)
    }
}

/// `1 − (1 − SOP_F)(1 − SOP_N)`: outage at either user, treating the two
/// events as independent.
pub fn sop_overall(sop_far: f64, sop_near: f64) -> f64 {
    1.0 - (1.0 - sop_far) * (1.0 - sop_near)
}

/// All exact secrecy outage quantities at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SopBreakdown {
    /// Near user fails to decode the far message. Zero when saturated.
    pub lambda1: f64,
    /// Near user decodes it, eavesdropper does not, near rate too low.
    pub lambda2: f64,
    /// Both decode it and the near secrecy rate falls short.
    pub lambda3: f64,
    pub sop_near: f64,
    pub sop_far: f64,
    pub sop_overall: f64,
    /// The near user can never decode the far message (`γ_th ≥ β`).
    pub saturated_near: bool,
}

/// Exact near, far and overall SOP for one selection rule.
pub fn sop_breakdown(sc: &Scenario, sol: SolutionId) -> Result<SopBreakdown> {
    let near = sop_near(sc, sol)?;
    let far = sop_far(sc, sol, sc.config.quadrature_n)?;
    Ok(SopBreakdown {
        lambda1: near.lambda1,
        lambda2: near.lambda2,
        lambda3: near.lambda3,
        sop_near: near.value,
        sop_far: far,
        sop_overall: sop_overall(far, near.value),
        saturated_near: near.saturated,
    })
}
