//! Far-user secrecy outage.
//!
//! `SOP_F = ∫_0^β F_{γ_F}(g(x)) f_{γ_E}(x) dx`. For `x ≥ u_F` the shifted
//! argument `g(x)` reaches `β`, where the far user's CDF is 1, so
//!
//! `SOP_F = ∫_0^{u_F} F_X(A_{g(x)}/γ0) f_{γ_E}(x) dx + 1 − F_{γ_E}(u_F)`.
//!
//! Substituting `F_X = 1 + Σ_j c_j y^{φ_j} e^{−r_j y}` and integrating the
//! constant analytically leaves `1 + Σ_j c_j ∫_0^{u_F} (…) f_{γ_E}`, whose
//! integral is taken by an N-point Gauss–Chebyshev rule.

use crate::channel::{eve_sinr_far_pdf, mrc_gain_sf, sinr_far_cdf, CdfSeries, SeriesValue};
use crate::error::{Error, Result};
use crate::kernel::gamma::log_factorial;
use crate::kernel::quadrature::{adaptive_integrate, ChebyshevRule};
use crate::kernel::signed::{signed_log_magnitude, signed_log_sum, SignedLogValue};
use crate::kernel::TERM_CAP;
use crate::model::{Scenario, SolutionId};

use super::{clamp_probability, prefer_closed, CLAMP_TOLERANCE};

/// The `n`-th term of the eavesdropper far-message SINR density,
/// `α_F s^n A_x^{n−1} (t − n) e^{−t} / (n! (α_F − α_N x)²)` with
/// `s = m_E/(γ_E λ_E)` and `t = s A_x`. Summing `n < a_E` gives the density.
pub(super) fn eve_pdf_term(sc: &Scenario, n: u32, x: f64) -> SignedLogValue {
    let af = sc.config.alpha_far;
    let denom = af - sc.config.alpha_near * x;
    let a = x / denom;
    let s = f64::from(sc.config.eve.fading.m) / (sc.config.gamma_e * sc.derived.lambda_eve);
    let t = s * a;
    let common = af.ln() - t - 2.0 * denom.ln();
    if n == 0 {
        // A^{−1}·t collapses to s.
        return SignedLogValue::positive(common + s.ln());
    }
    let gap = t - f64::from(n);
    SignedLogValue::from_f64(gap).scale_log(
        common + f64::from(n) * s.ln() + f64::from(n - 1) * a.ln() - log_factorial(u64::from(n)),
    )
}

/// Gauss–Chebyshev closed form with `n` nodes; raw value and magnitude.
pub fn sop_far_closed(sc: &Scenario, sol: SolutionId, n: usize) -> Result<SeriesValue> {
    if n == 0 {
        return Err(Error::invalid("quadratureN", "must be at least 1"));
    }
    let u_far = sc.derived.u_far;
    if u_far <= 0.0 {
        return Ok(SeriesValue {
            value: 1.0,
            magnitude: 1.0,
        });
    }
    let series = CdfSeries::for_distribution(&sc.far_gain(sol))?;
    let a_e = sc.derived.a_eve;
    let count = series.terms().len() * n * a_e as usize;
    if count > TERM_CAP {
        return Err(Error::TermCapExceeded {
            expression: "far-user secrecy series",
            needed: count as u128,
            cap: TERM_CAP,
        });
    }
    let g0 = sc.config.gamma0;
    let rule = ChebyshevRule::on_interval(n, 0.0, u_far);
    let mut terms = Vec::with_capacity(count + 1);
    terms.push(SignedLogValue::ONE);
    for (&x, &w) in rule.points.iter().zip(&rule.weights) {
        let y = sc.a_fraction(sc.g_shift(x))? / g0;
        let pdf: Vec<SignedLogValue> = (0..a_e).map(|k| eve_pdf_term(sc, k, x)).collect();
        for t in series.terms() {
            let weight = t.log_eval(y).scale_log(w.ln());
            terms.extend(pdf.iter().map(|&p| weight * p));
        }
    }
    Ok(SeriesValue {
        value: signed_log_sum(&terms),
        magnitude: signed_log_magnitude(&terms),
    })
}

/// Reference far-user SOP: adaptive quadrature over `[0, u_F]` plus the
/// eavesdropper tail mass beyond `u_F`.
pub fn sop_far_integral(sc: &Scenario, sol: SolutionId) -> Result<f64> {
    let u_far = sc.derived.u_far;
    if u_far <= 0.0 {
        return Ok(1.0);
    }
    let body = adaptive_integrate(
        |x| sinr_far_cdf(sc.g_shift(x), sc, sol) * eve_sinr_far_pdf(x, sc),
        0.0,
        u_far,
        0.0,
        1e-12,
    )?;
    Ok(body + eve_tail_beyond(sc, u_far))
}

/// `1 − F_{γ_E}(x)`, via the Erlang survival function; zero from `β` on.
pub(super) fn eve_tail_beyond(sc: &Scenario, x: f64) -> f64 {
    if x >= sc.derived.beta {
        return 0.0;
    }
    let a = sc.a_fraction(x).expect("x below beta");
    mrc_gain_sf(a / sc.config.gamma_e, &sc.eve_gain())
}

/// Far-user SOP with `n` Gauss–Chebyshev nodes, falling back to quadrature
/// if the series loses accuracy.
///
/// Unlike the exact series elsewhere, the Chebyshev rule carries a
/// discretisation error (around 1e-4 at `n = 100` for sharply peaked
/// eavesdropper densities), which can push a tiny true SOP below zero. Such
/// a value says nothing about the series itself, so it also triggers the
/// quadrature fallback instead of an out-of-range error.
pub fn sop_far(sc: &Scenario, sol: SolutionId, n: usize) -> Result<f64> {
    let closed = sop_far_closed(sc, sol, n)?;
    if !(-CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&closed.value) {
        log::warn!(
            "sop_far: {n}-node rule gave {:e} outside [0, 1], using quadrature",
            closed.value
        );
        return clamp_probability("sop_far", sop_far_integral(sc, sol)?);
    }
    prefer_closed("sop_far", closed, || sop_far_integral(sc, sol))
}
