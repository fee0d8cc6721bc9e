//! High-SNR asymptotes and secrecy diversity orders.
//!
//! As `γ0 → ∞` only the leading power of the legitimate gain CDFs survives:
//! `F(y) ≈ K y^P` with `P = a` and `K = (m/λ)^a / a!` for an unselected
//! gain, or `P = a·L_S` and `K = ((m/λ)^a / a!)^{L_S}` for a selected one.
//! The eavesdropper's distribution does not depend on `γ0` and is kept
//! exact. These expressions are only meaningful at high `γ0`; at low SNR
//! they can exceed 1.

use crate::channel::{mrc_gain_cdf, mrc_gain_sf, GainDistribution};
use crate::error::Result;
use crate::kernel::gamma::{log_binomial, log_factorial, log_gamma};
use crate::kernel::quadrature::ChebyshevRule;
use crate::kernel::signed::{log_pow, signed_log_sum, SignedLogValue};
use crate::model::{Scenario, SolutionId};

use super::far::{eve_pdf_term, eve_tail_beyond};
use super::sop_overall;

/// Leading-order SOPs and the diversity orders they imply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticSop {
    pub sop_near: f64,
    pub sop_far: f64,
    pub sop_overall: f64,
    pub diversity_near: u32,
    pub diversity_far: u32,
    pub diversity_overall: u32,
}

/// `(P, ln K)` of the small-argument CDF `F(y) ≈ K y^P`.
fn leading_power(d: &GainDistribution) -> (u32, f64) {
    let a = d.shape();
    let per_antenna = f64::from(a) * d.rate().ln() - log_factorial(u64::from(a));
    (a * d.tas_order, f64::from(d.tas_order) * per_antenna)
}

/// Asymptotic near-user SOP: 1 when saturated, else `Λ₁ + Λ₂ + Λ₃` with
/// the near gain's CDF replaced by its leading term.
pub fn sop_near_asymptotic(sc: &Scenario, sol: SolutionId) -> Result<f64> {
    if sc.derived.near_saturated() {
        return Ok(1.0);
    }
    let cfg = &sc.config;
    let d = &sc.derived;
    let a = sc.a_fraction(d.gamma_th)?;
    let (p, log_k) = leading_power(&sc.near_gain(sol));
    let g0 = cfg.gamma0;
    let eve = sc.eve_gain();
    let z_cdf = mrc_gain_cdf(a / cfg.gamma_e, &eve);
    let z_sf = mrc_gain_sf(a / cfg.gamma_e, &eve);
    let lead = (log_k + f64::from(p) * (a / g0).ln()).exp();

    let lambda1 = lead;
    let eta = d.eta.expect("eta exists below saturation");
    let lambda2 = if cfg.secrecy_rate_near < eta {
        0.0
    } else {
        (log_k - f64::from(p) * g0.ln()).exp()
            * (d.gamma_s_near.powi(p as i32) - a.powi(p as i32))
            * z_cdf
    };

    let a_e = d.a_eve;
    let m_e = f64::from(cfg.eve.fading.m);
    let tau = m_e * a / (cfg.gamma_e * d.lambda_eve);
    let slope = cfg.secrecy_rate_near.exp2() * cfg.gamma_e;
    let log_gamma_ae = log_gamma(f64::from(a_e))?;
    let mut terms = vec![SignedLogValue::from_f64(-lead * z_sf)];
    for m in 0..=p {
        let log_m = log_binomial(u64::from(p), u64::from(m)) + log_k
            + log_pow(d.gamma_s_near, p - m)
            + f64::from(m) * (slope * d.lambda_eve / m_e).ln()
            + log_gamma(f64::from(a_e + m))?
            - log_gamma_ae
            - f64::from(p) * g0.ln()
            - tau;
        for n in 0..(a_e + m) {
            terms.push(SignedLogValue::positive(
                log_m + log_pow(tau, n) - log_factorial(u64::from(n)),
            ));
        }
    }
    let lambda3 = signed_log_sum(&terms);
    Ok(lambda1 + lambda2 + lambda3)
}

/// Asymptotic far-user SOP with `n` Gauss–Chebyshev nodes. Tends to the
/// eavesdropper tail mass `1 − F_{γ_E}(u_F)`, a floor independent of `γ0`.
pub fn sop_far_asymptotic(sc: &Scenario, sol: SolutionId, n: usize) -> Result<f64> {
    let u_far = sc.derived.u_far;
    if u_far <= 0.0 {
        return Ok(1.0);
    }
    let (p, log_k) = leading_power(&sc.far_gain(sol));
    let g0 = sc.config.gamma0;
    let rule = ChebyshevRule::on_interval(n.max(1), 0.0, u_far);
    let mut terms = Vec::with_capacity(rule.points.len() * sc.derived.a_eve as usize);
    for (&x, &w) in rule.points.iter().zip(&rule.weights) {
        let y = sc.a_fraction(sc.g_shift(x))? / g0;
        let lead = log_k + f64::from(p) * y.ln() + w.ln();
        terms.extend((0..sc.derived.a_eve).map(|k| eve_pdf_term(sc, k, x).scale_log(lead)));
    }
    Ok(signed_log_sum(&terms) + eve_tail_beyond(sc, u_far))
}

/// All asymptotic SOPs with diversity orders: the near user's is its
/// leading power (`a_N·L_S` when it is the selected user, `a_N` otherwise)
/// unless saturated; the far user and the system have a floor, so zero.
pub fn sop_asymptotic(sc: &Scenario, sol: SolutionId) -> Result<AsymptoticSop> {
    let near = sop_near_asymptotic(sc, sol)?;
    let far = sop_far_asymptotic(sc, sol, sc.config.quadrature_n)?;
    let diversity_near = if sc.derived.near_saturated() {
        0
    } else {
        leading_power(&sc.near_gain(sol)).0
    };
    Ok(AsymptoticSop {
        sop_near: near,
        sop_far: far,
        sop_overall: sop_overall(far, near),
        diversity_near,
        diversity_far: 0,
        diversity_overall: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::base_config;
    use crate::model::SystemConfig;
    use crate::secrecy::{sop_far, sop_near};

    fn sc(f: impl FnOnce(&mut SystemConfig)) -> Scenario {
        let mut cfg = base_config();
        f(&mut cfg);
        Scenario::new(cfg).unwrap()
    }

    fn db(x: f64) -> f64 {
        10f64.powf(x / 10.0)
    }

    #[test]
    fn diversity_orders() {
        let s = sc(|_| {});
        let one = sop_asymptotic(&s, SolutionId::SolutionI).unwrap();
        assert_eq!(one.diversity_near, 8);
        let two = sop_asymptotic(&s, SolutionId::SolutionII).unwrap();
        assert_eq!(two.diversity_near, 4);
        for a in [one, two] {
            assert_eq!(a.diversity_far, 0);
            assert_eq!(a.diversity_overall, 0);
        }
        let saturated = sc(|c| c.rate_far = 2.0);
        let a = sop_asymptotic(&saturated, SolutionId::SolutionI).unwrap();
        assert_eq!(a.diversity_near, 0);
        assert_eq!(a.sop_near, 1.0);
    }

    #[test]
    fn leading_term_of_selected_cdf() {
        let d = GainDistribution::new(2, 4.0, 2, 2).unwrap();
        let (p, log_k) = leading_power(&d);
        assert_eq!(p, 8);
        let y = 1e-3;
        let exact = crate::channel::tas_best_cdf_direct(y, &d);
        let approx = (log_k + 8.0 * y.ln()).exp();
        assert!(((approx - exact) / exact).abs() < 1e-2);
    }

    #[test]
    fn near_asymptote_tracks_exact_at_high_snr() {
        let s = sc(|c| c.gamma0 = db(60.0));
        for sol in SolutionId::BOTH {
            let exact = sop_near(&s, sol).unwrap().value;
            let asym = sop_near_asymptotic(&s, sol).unwrap();
            assert!(((asym - exact) / exact).abs() <= 0.05, "{sol}: {asym} vs {exact}");
        }
    }

    #[test]
    fn far_asymptote_reaches_floor() {
        let s = sc(|c| c.gamma0 = db(60.0));
        for sol in SolutionId::BOTH {
            let exact = sop_far(&s, sol, 100).unwrap();
            let asym = sop_far_asymptotic(&s, sol, 100).unwrap();
            assert!(((asym - exact) / exact).abs() <= 1e-3, "{sol}: {asym} vs {exact}");
        }
    }
}
