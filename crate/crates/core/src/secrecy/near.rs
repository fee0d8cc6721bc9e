//! Near-user secrecy outage.
//!
//! The near user is in outage when it cannot decode the far message (Λ₁),
//! when it decodes it but the eavesdropper does not and the near rate is
//! below target (Λ₂), or when both decode it and the near secrecy capacity
//! is below target (Λ₃).

use crate::channel::{
    mrc_gain_cdf, mrc_gain_pdf, mrc_gain_sf, tas_best_cdf_direct, tas_best_mass_between,
    CdfSeries, SeriesValue,
};
use crate::error::{Error, Result};
use crate::kernel::gamma::{log_binomial, log_factorial, log_gamma};
use crate::kernel::quadrature::adaptive_integrate;
use crate::kernel::signed::{log_pow, signed_log_magnitude, signed_log_sum, SignedLogValue};
use crate::kernel::TERM_CAP;
use crate::model::{Scenario, SolutionId};

use super::{clamp_probability, prefer_closed};

fn require_unsaturated(sc: &Scenario, function: &'static str) -> Result<f64> {
    if sc.derived.near_saturated() {
        return Err(Error::Domain {
            function,
            value: sc.derived.gamma_th,
            reason: "near user cannot decode the far message (gamma_th >= beta)",
        });
    }
    sc.a_fraction(sc.derived.gamma_th)
}

/// `F_Y` evaluated through its series, falling back to the direct power
/// form where the series cancels.
fn near_cdf(sc: &Scenario, sol: SolutionId, series: &CdfSeries, y: f64) -> f64 {
    let v = series.evaluate(y);
    if v.is_accurate() {
        v.value
    } else {
        tas_best_cdf_direct(y, &sc.near_gain(sol))
    }
}

/// Λ₁ = `F_Y(A(γ_th)/γ0)`, the near user failing to decode the far message.
pub fn lambda1(sc: &Scenario, sol: SolutionId) -> Result<f64> {
    let a = require_unsaturated(sc, "lambda1")?;
    let series = CdfSeries::for_distribution(&sc.near_gain(sol))?;
    clamp_probability("lambda1", near_cdf(sc, sol, &series, a / sc.config.gamma0))
}

/// Λ₂ = `[F_Y(γ_sN/γ0) − F_Y(A/γ0)]·F_Z(A/γ_E)` when `R_sN ≥ η`, else 0.
pub fn lambda2(sc: &Scenario, sol: SolutionId) -> Result<f64> {
    let a = require_unsaturated(sc, "lambda2")?;
    let eta = sc.derived.eta.expect("eta exists below saturation");
    if sc.config.secrecy_rate_near < eta {
        return Ok(0.0);
    }
    let g0 = sc.config.gamma0;
    // A difference of two CDF values: taken from the side of the
    // distribution where neither is close to 1.
    let bracket = tas_best_mass_between(a / g0, sc.derived.gamma_s_near / g0, &sc.near_gain(sol));
    let eve = mrc_gain_cdf(a / sc.config.gamma_e, &sc.eve_gain());
    clamp_probability("lambda2", bracket.max(0.0) * eve)
}

/// Closed-form Λ₃: `B⁽¹⁾ + Σ_j Σ_m Σ_n Ψ (A B⁽²⁾/γ_E)^n e^{−A B⁽²⁾/γ_E}`,
/// generated from the series `F_Y = 1 + Σ_j c_j y^{φ_j} e^{−r_j y}`.
/// Returns the raw (unclamped) sum with its magnitude.
pub fn lambda3_closed(sc: &Scenario, sol: SolutionId) -> Result<SeriesValue> {
    let a = require_unsaturated(sc, "lambda3_closed")?;
    let cfg = &sc.config;
    let d = &sc.derived;
    let near = sc.near_gain(sol);
    let eve = sc.eve_gain();
    let series = CdfSeries::for_distribution(&near)?;

    let (g0, ge) = (cfg.gamma0, cfg.gamma_e);
    let gsn = d.gamma_s_near;
    let slope = cfg.secrecy_rate_near.exp2() * ge;
    let a_e = d.a_eve;
    let me_over_le = f64::from(cfg.eve.fading.m) / d.lambda_eve;
    let log_gamma_ae = log_gamma(f64::from(a_e))?;
    let log_eve_scale = f64::from(a_e) * me_over_le.ln() - log_gamma_ae;

    let count: usize = series
        .terms()
        .iter()
        .map(|t| (0..=t.power).map(|m| (a_e + m) as usize).sum::<usize>())
        .sum();
    if count > TERM_CAP {
        return Err(Error::TermCapExceeded {
            expression: "near-user secrecy series",
            needed: count as u128,
            cap: TERM_CAP,
        });
    }

    let b1 = (1.0 - near_cdf(sc, sol, &series, a / g0)) * mrc_gain_sf(a / ge, &eve);
    let mut terms = Vec::with_capacity(count + 1);
    terms.push(SignedLogValue::from_f64(b1));
    for t in series.terms() {
        let b2 = t.rate * slope / g0 + me_over_le;
        let z = a * b2 / ge;
        let phi = t.power;
        let base = t.coefficient.scale_log(
            -t.rate * gsn / g0 - f64::from(phi) * g0.ln() + log_eve_scale - z,
        );
        for m in 0..=phi {
            let log_m = log_binomial(u64::from(phi), u64::from(m))
                + log_pow(slope, m)
                + log_pow(gsn, phi - m)
                + log_gamma(f64::from(a_e + m))?
                - f64::from(a_e + m) * b2.ln();
            for n in 0..(a_e + m) {
                terms.push(base.scale_log(log_m + log_pow(z, n) - log_factorial(u64::from(n))));
            }
        }
    }
    Ok(SeriesValue {
        value: signed_log_sum(&terms),
        magnitude: signed_log_magnitude(&terms),
    })
}

/// Reference Λ₃ by adaptive quadrature of
/// `∫_{A/γ_E}^∞ [F_Y((2^{R_sN} γ_E x + γ_sN)/γ0) − F_Y(A/γ0)] f_Z(x) dx`.
pub fn lambda3_integral(sc: &Scenario, sol: SolutionId) -> Result<f64> {
    let a = require_unsaturated(sc, "lambda3_integral")?;
    let cfg = &sc.config;
    let near = sc.near_gain(sol);
    let eve = sc.eve_gain();
    let (g0, ge) = (cfg.gamma0, cfg.gamma_e);
    let slope = cfg.secrecy_rate_near.exp2() * ge;
    let gsn = sc.derived.gamma_s_near;
    let lower = a / ge;
    let y_lo = a / g0;
    // Integrate in units of the eavesdropper gain's scale so the infinite
    // range mapping puts its bulk near the middle of [0, 1).
    let scale = f64::from(eve.shape()) / eve.rate();
    let integrand = |u: f64| {
        let x = lower + scale * u;
        let y_hi = (slope * x + gsn) / g0;
        tas_best_mass_between(y_lo, y_hi.max(y_lo), &near) * mrc_gain_pdf(x, &eve) * scale
    };
    adaptive_integrate(integrand, 0.0, f64::INFINITY, 0.0, 1e-11)
}

/// Λ₃, closed form where accurate and quadrature otherwise.
pub fn lambda3(sc: &Scenario, sol: SolutionId) -> Result<f64> {
    let closed = lambda3_closed(sc, sol)?;
    prefer_closed("lambda3", closed, || lambda3_integral(sc, sol))
}

/// Near-user SOP with its three contributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearSop {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub value: f64,
    pub saturated: bool,
}

/// `1` when `γ_th ≥ β`, otherwise `Λ₁ + Λ₂ + Λ₃`.
pub fn sop_near(sc: &Scenario, sol: SolutionId) -> Result<NearSop> {
    if sc.derived.near_saturated() {
        return Ok(NearSop {
            lambda1: 0.0,
            lambda2: 0.0,
            lambda3: 0.0,
            value: 1.0,
            saturated: true,
        });
    }
    let lambda1 = lambda1(sc, sol)?;
    let lambda2 = lambda2(sc, sol)?;
    let lambda3 = lambda3(sc, sol)?;
    let value = clamp_probability("sop_near", lambda1 + lambda2 + lambda3)?;
    Ok(NearSop {
        lambda1,
        lambda2,
        lambda3,
        value,
        saturated: false,
    })
}
