//! Distribution functions of the channel power gains and of the SINRs they
//! induce.
//!
//! With MRC over `L` receive antennas and i.i.d. Nakagami-m fading, the power
//! gain of one transmit antenna is Gamma(`a = m·L`, `λ/m`), so its CDF is the
//! Erlang form `1 − Σ_{k<a} (m x/λ)^k/k! e^{−m x/λ}`. Selecting the best of
//! `L_S` transmit antennas raises that CDF to the power `L_S`.
//!
//! Antenna selection on one legitimate link leaves the other links'
//! marginals unselected: gains towards different receivers from the same
//! transmit antenna are independent, so the selected index carries no
//! information about them.

use crate::error::Result;
use crate::kernel::composition::{phi_term, weak_compositions, TERM_CAP};
use crate::kernel::gamma::{log_factorial, log_gamma, reg_lower_incomplete_gamma, reg_upper_incomplete_gamma};
use crate::kernel::signed::{log_pow, SignedLogValue};
use crate::model::{Scenario, SolutionId};
use crate::Error;

/// Marginal law of one channel power gain, optionally the best of
/// `tas_order` i.i.d. copies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainDistribution {
    pub m: u32,
    pub lambda: f64,
    /// Receive antennas combined by MRC.
    pub antennas: u32,
    /// Number of transmit antennas selected over; 1 means no selection.
    pub tas_order: u32,
}

impl GainDistribution {
    pub fn new(m: u32, lambda: f64, antennas: u32, tas_order: u32) -> Result<Self> {
        if m == 0 || antennas == 0 || tas_order == 0 {
            return Err(Error::invalid(
                "GainDistribution",
                "m, antennas and tas_order must be positive",
            ));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::invalid("lambda", format!("must be positive, got {lambda}")));
        }
        Ok(Self {
            m,
            lambda,
            antennas,
            tas_order,
        })
    }

    /// Gamma shape `a = m·L`.
    pub fn shape(&self) -> u32 {
        self.m * self.antennas
    }

    /// Gamma rate `m / λ`.
    pub fn rate(&self) -> f64 {
        f64::from(self.m) / self.lambda
    }

    pub fn unselected(&self) -> Self {
        Self {
            tas_order: 1,
            ..*self
        }
    }
}

const INCGAMMA_INVARIANT: &str = "validated shape and non-negative argument";

/// CDF of a single (unselected) MRC gain: `P(m·L, m x / λ)`.
pub fn mrc_gain_cdf(x: f64, d: &GainDistribution) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    reg_lower_incomplete_gamma(f64::from(d.shape()), d.rate() * x).expect(INCGAMMA_INVARIANT)
}

/// Survival function `1 − F(x)` of a single MRC gain, accurate in the tail.
pub fn mrc_gain_sf(x: f64, d: &GainDistribution) -> f64 {
    if !(x > 0.0) {
        return 1.0;
    }
    reg_upper_incomplete_gamma(f64::from(d.shape()), d.rate() * x).expect(INCGAMMA_INVARIANT)
}

/// PDF of a single MRC gain, `m^a x^{a−1} e^{−m x/λ} / (Γ(a) λ^a)`.
pub fn mrc_gain_pdf(x: f64, d: &GainDistribution) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let a = d.shape();
    if x == 0.0 {
        return if a == 1 { d.rate() } else { 0.0 };
    }
    let log_pdf = f64::from(a) * d.rate().ln() + f64::from(a - 1) * x.ln()
        - d.rate() * x
        - log_gamma(f64::from(a)).expect(INCGAMMA_INVARIANT);
    log_pdf.exp()
}

/// CDF of the best of `tas_order` i.i.d. MRC gains, `F(x)^{L_S}`.
pub fn tas_best_cdf_direct(x: f64, d: &GainDistribution) -> f64 {
    mrc_gain_cdf(x, d).powi(d.tas_order as i32)
}

/// `1 − F(x)^{L_S}`, computed without cancellation when `F(x)` is near 1.
pub fn tas_best_sf(x: f64, d: &GainDistribution) -> f64 {
    let sf = mrc_gain_sf(x, d);
    if d.tas_order == 1 {
        return sf;
    }
    -(f64::from(d.tas_order) * (-sf).ln_1p()).exp_m1()
}

/// `F(hi) − F(lo)` for `lo ≤ hi`, taken from whichever side of the
/// distribution keeps both values small.
pub fn tas_best_mass_between(lo: f64, hi: f64, d: &GainDistribution) -> f64 {
    let f_lo = tas_best_cdf_direct(lo, d);
    if f_lo < 0.5 {
        tas_best_cdf_direct(hi, d) - f_lo
    } else {
        tas_best_sf(lo, d) - tas_best_sf(hi, d)
    }
}

/// One term `c · y^power · e^{−rate·y}` of a CDF written as
/// `F(y) = 1 + Σ terms`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTerm {
    pub coefficient: SignedLogValue,
    pub power: u32,
    pub rate: f64,
}

impl SeriesTerm {
    pub fn log_eval(&self, y: f64) -> SignedLogValue {
        self.coefficient
            .scale_log(log_pow(y, self.power) - self.rate * y)
    }
}

/// A CDF value together with `1 + Σ|terms|`, the scale of rounding error
/// in the series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub magnitude: f64,
}

/// Relative accuracy demanded of a cancelling series before its value is
/// trusted over a direct evaluation.
pub const SERIES_REL_ACCURACY: f64 = 1e-9;

impl SeriesValue {
    /// Rough bound on the absolute rounding error.
    pub fn error_bound(&self) -> f64 {
        32.0 * f64::EPSILON * self.magnitude
    }

    /// Whether cancellation has left at least [`SERIES_REL_ACCURACY`]
    /// relative accuracy.
    pub fn is_accurate(&self) -> bool {
        self.error_bound() <= SERIES_REL_ACCURACY * self.value.abs()
    }
}

/// Exponential-polynomial expansion `F(y) = 1 + Σ c_j y^{φ_j} e^{−r_j y}`
/// of an Erlang or TAS-selected Erlang CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfSeries {
    terms: Vec<SeriesTerm>,
}

impl CdfSeries {
    /// `1 − Σ_{k<a} (m/λ)^k / k! · y^k e^{−m y/λ}`.
    pub fn erlang(d: &GainDistribution) -> Self {
        let rate = d.rate();
        let terms = (0..d.shape())
            .map(|k| SeriesTerm {
                coefficient: SignedLogValue::new(
                    -1,
                    f64::from(k) * rate.ln() - log_factorial(u64::from(k)),
                ),
                power: k,
                rate,
            })
            .collect();
        Self { terms }
    }

    /// Binomial then multinomial expansion of `F(y)^{L_S}`:
    /// `1 + Σ_{p=1}^{L_S} Σ_{|δ|=p} Φ y^φ e^{−p m y/λ}`.
    pub fn tas_expanded(d: &GainDistribution) -> Result<Self> {
        let slots = d.shape();
        let mut terms = Vec::new();
        for p in 1..=d.tas_order {
            let compositions = weak_compositions(p, slots)?;
            if terms.len() + compositions.len() > TERM_CAP {
                return Err(Error::TermCapExceeded {
                    expression: "TAS CDF expansion",
                    needed: (terms.len() + compositions.len()) as u128,
                    cap: TERM_CAP,
                });
            }
            let rate = f64::from(p) * d.rate();
            terms.extend(compositions.iter().map(|c| {
                let (coefficient, power) = phi_term(c, d.tas_order, d.m, d.lambda);
                SeriesTerm {
                    coefficient,
                    power,
                    rate,
                }
            }));
        }
        Ok(Self { terms })
    }

    /// Erlang form for `tas_order = 1`, expanded form otherwise.
    pub fn for_distribution(d: &GainDistribution) -> Result<Self> {
        if d.tas_order == 1 {
            Ok(Self::erlang(d))
        } else {
            Self::tas_expanded(d)
        }
    }

    pub fn terms(&self) -> &[SeriesTerm] {
        &self.terms
    }

    pub fn evaluate(&self, y: f64) -> SeriesValue {
        if !(y > 0.0) {
            return SeriesValue {
                value: 0.0,
                magnitude: 1.0,
            };
        }
        let mut logs: Vec<SignedLogValue> = self.terms.iter().map(|t| t.log_eval(y)).collect();
        let magnitude = 1.0 + crate::kernel::signed::signed_log_magnitude(&logs);
        logs.push(SignedLogValue::ONE);
        SeriesValue {
            value: crate::kernel::signed::signed_log_sum(&logs),
            magnitude,
        }
    }
}

/// The expanded TAS CDF evaluated term by term.
pub fn tas_best_cdf_expanded(x: f64, d: &GainDistribution) -> Result<f64> {
    Ok(CdfSeries::for_distribution(d)?.evaluate(x).value)
}

impl Scenario {
    /// Law of the near user's gain on the transmitting antenna.
    pub fn near_gain(&self, sol: SolutionId) -> GainDistribution {
        let tas_order = match sol {
            SolutionId::SolutionI => self.config.source_antennas,
            SolutionId::SolutionII => 1,
        };
        GainDistribution {
            m: self.config.near.fading.m,
            lambda: self.derived.lambda_near,
            antennas: self.config.near.antennas,
            tas_order,
        }
    }

    /// Law of the far user's gain on the transmitting antenna.
    pub fn far_gain(&self, sol: SolutionId) -> GainDistribution {
        let tas_order = match sol {
            SolutionId::SolutionI => 1,
            SolutionId::SolutionII => self.config.source_antennas,
        };
        GainDistribution {
            m: self.config.far.fading.m,
            lambda: self.derived.lambda_far,
            antennas: self.config.far.antennas,
            tas_order,
        }
    }

    /// Law of the eavesdropper's gain; never selected for.
    pub fn eve_gain(&self) -> GainDistribution {
        GainDistribution {
            m: self.config.eve.fading.m,
            lambda: self.derived.lambda_eve,
            antennas: self.config.eve.antennas,
            tas_order: 1,
        }
    }
}

/// CDF of the far user's SINR for its own message. Saturates at `β`.
pub fn sinr_far_cdf(x: f64, sc: &Scenario, sol: SolutionId) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    if x >= sc.derived.beta {
        return 1.0;
    }
    let a = sc.a_fraction(x).expect("0 < x < beta");
    tas_best_cdf_direct(a / sc.config.gamma0, &sc.far_gain(sol))
}

/// CDF of the eavesdropper's SINR for the far message while the near
/// message interferes. Saturates at `β`.
pub fn eve_sinr_far_cdf(x: f64, sc: &Scenario) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    if x >= sc.derived.beta {
        return 1.0;
    }
    let a = sc.a_fraction(x).expect("0 < x < beta");
    mrc_gain_cdf(a / sc.config.gamma_e, &sc.eve_gain())
}

/// PDF of the eavesdropper's far-message SINR, `f_Z(A_x/γ_E) · A'_x / γ_E`
/// with `A'_x = α_F / (α_F − α_N x)²`. Zero on `[β, ∞)`.
pub fn eve_sinr_far_pdf(x: f64, sc: &Scenario) -> f64 {
    if x < 0.0 || x >= sc.derived.beta {
        return 0.0;
    }
    let (af, an) = (sc.config.alpha_far, sc.config.alpha_near);
    let denom = af - an * x;
    let a = x / denom;
    let slope = af / (denom * denom);
    mrc_gain_pdf(a / sc.config.gamma_e, &sc.eve_gain()) * slope / sc.config.gamma_e
}

/// CDF of the eavesdropper's SNR for the near message after cancelling the
/// far one, `α_N γ_E Z`.
pub fn eve_snr_near_cdf(x: f64, sc: &Scenario) -> f64 {
    mrc_gain_cdf(x / (sc.config.alpha_near * sc.config.gamma_e), &sc.eve_gain())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::kernel::quadrature::adaptive_integrate;
    use crate::model::tests::fig_base;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn dist(m: u32, lambda: f64, l: u32, ls: u32) -> GainDistribution {
        GainDistribution::new(m, lambda, l, ls).unwrap()
    }

    #[test]
    fn mrc_cdf_examples() {
        let exp = dist(1, 1.0, 1, 1);
        assert_relative_eq!(mrc_gain_cdf(2.0_f64.ln(), &exp), 0.5, epsilon = 1e-15);
        assert_eq!(mrc_gain_cdf(0.0, &exp), 0.0);
        let p42 = 1.0 - (-2.0_f64).exp() * (1.0 + 2.0 + 2.0 + 4.0 / 3.0);
        assert_relative_eq!(mrc_gain_cdf(1.0, &dist(2, 1.0, 2, 1)), p42, epsilon = 1e-14);
        assert_relative_eq!(mrc_gain_sf(1.0, &dist(2, 1.0, 2, 1)), 1.0 - p42, epsilon = 1e-14);
    }

    #[test]
    fn mrc_pdf_examples() {
        assert_relative_eq!(mrc_gain_pdf(0.0, &dist(1, 1.0, 1, 1)), 1.0);
        assert_eq!(mrc_gain_pdf(0.0, &dist(2, 1.0, 1, 1)), 0.0);
        for d in [dist(1, 1.0, 1, 1), dist(2, 4.0, 2, 1), dist(3, 0.108, 2, 1)] {
            let total =
                adaptive_integrate(|x| mrc_gain_pdf(x, &d), 0.0, f64::INFINITY, 1e-13, 1e-12)
                    .unwrap();
            assert!((total - 1.0).abs() <= 1e-10, "{d:?}: {total}");
            let x = d.lambda * 0.7;
            let h = 1e-6 * d.lambda;
            let fd = (mrc_gain_cdf(x + h, &d) - mrc_gain_cdf(x - h, &d)) / (2.0 * h);
            assert_relative_eq!(fd, mrc_gain_pdf(x, &d), max_relative = 1e-6);
        }
    }

    #[test]
    fn tas_direct_examples() {
        let d = dist(2, 3.0, 2, 1);
        for i in 0..50 {
            let x = i as f64 * 0.3;
            assert_eq!(tas_best_cdf_direct(x, &d), mrc_gain_cdf(x, &d));
        }
        assert_relative_eq!(
            tas_best_cdf_direct(2.0_f64.ln(), &dist(1, 1.0, 1, 2)),
            0.25,
            epsilon = 1e-15
        );
        assert_eq!(tas_best_cdf_direct(0.0, &dist(2, 1.0, 2, 3)), 0.0);
    }

    #[test]
    fn survival_and_mass_between() {
        let d = dist(2, 1.0, 2, 3);
        for x in [0.01, 0.5, 2.0, 8.0] {
            assert_relative_eq!(
                tas_best_sf(x, &d),
                1.0 - tas_best_cdf_direct(x, &d),
                epsilon = 1e-14
            );
        }
        // Deep tail: the complement form would return exactly 0.
        let sf = tas_best_sf(40.0, &d);
        assert!(sf > 0.0);
        assert_relative_eq!(sf, 3.0 * mrc_gain_sf(40.0, &d), max_relative = 1e-9);
        let lo = tas_best_mass_between(0.2, 0.4, &d);
        assert_relative_eq!(
            lo,
            tas_best_cdf_direct(0.4, &d) - tas_best_cdf_direct(0.2, &d),
            max_relative = 1e-12
        );
        let hi = tas_best_mass_between(30.0, 31.0, &d);
        assert!(hi > 0.0 && hi < tas_best_sf(30.0, &d));
    }

    #[test]
    fn tas_expanded_examples() {
        let single = dist(2, 1.5, 2, 1);
        let x = 0.8;
        let erlang: f64 = 1.0
            - (0..4)
                .map(|k| (2.0 * x / 1.5_f64).powi(k) / (1..=k).product::<i32>().max(1) as f64)
                .sum::<f64>()
                * (-2.0 * x / 1.5_f64).exp();
        assert_relative_eq!(tas_best_cdf_expanded(x, &single).unwrap(), erlang, epsilon = 1e-14);

        let d = dist(2, 4.0, 2, 2);
        let direct = tas_best_cdf_direct(1.0, &d);
        let expanded = tas_best_cdf_expanded(1.0, &d).unwrap();
        assert!(((expanded - direct) / direct).abs() <= 1e-10);

        let zero = CdfSeries::tas_expanded(&d).unwrap();
        let at_zero: f64 = 1.0
            + zero
                .terms()
                .iter()
                .filter(|t| t.power == 0)
                .map(|t| t.coefficient.to_f64())
                .sum::<f64>();
        assert!(at_zero.abs() <= 1e-12);
        assert_eq!(tas_best_cdf_expanded(0.0, &d).unwrap(), 0.0);
    }

    #[test]
    fn series_accuracy_flag_detects_cancellation() {
        let d = dist(2, 4.0, 2, 2);
        let series = CdfSeries::tas_expanded(&d).unwrap();
        assert!(series.evaluate(2.0).is_accurate());
        assert!(!series.evaluate(1e-4).is_accurate());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn expansion_identity(
            m in 1u32..=3, l in 1u32..=3, ls in 1u32..=4,
            lambda in 0.1f64..5.0, scaled in 0.2f64..6.0,
        ) {
            let d = dist(m, lambda, l, ls);
            // Keep x where the CDF is not dominated by cancellation.
            let x = scaled * lambda * f64::from(l);
            let direct = tas_best_cdf_direct(x, &d);
            let series = CdfSeries::tas_expanded(&d).unwrap().evaluate(x);
            prop_assume!(series.is_accurate());
            prop_assert!(((series.value - direct) / direct).abs() <= 1e-9);
        }
    }

    // Printed form of the eavesdropper far-message SINR density,
    // Σ_k m^k α_F A^{k−1} e^{−t} (t − k) / (k! λ^k γ_E^k (α_F − α_N x)²).
    pub(crate) fn eve_pdf_printed(x: f64, sc: &Scenario) -> f64 {
        if x >= sc.derived.beta {
            return 0.0;
        }
        let (af, an) = (sc.config.alpha_far, sc.config.alpha_near);
        let me = f64::from(sc.config.eve.fading.m);
        let le = sc.derived.lambda_eve;
        let ge = sc.config.gamma_e;
        let a = x / (af - an * x);
        let t = me * a / (ge * le);
        (0..sc.derived.a_eve)
            .map(|k| {
                let k = k as i32;
                (me / (le * ge)).powi(k) * af * a.powi(k - 1) * (-t).exp() * (t - k as f64)
                    / ((1..=k).product::<i32>().max(1) as f64 * (af - an * x).powi(2))
            })
            .sum()
    }

    #[test]
    fn far_sinr_cdf_branches() {
        let sc = fig_base();
        let beta = sc.derived.beta;
        for sol in SolutionId::BOTH {
            assert_eq!(sinr_far_cdf(beta, &sc, sol), 1.0);
            assert_eq!(sinr_far_cdf(0.0, &sc, sol), 0.0);
            assert!(sinr_far_cdf(beta * (1.0 - 1e-9), &sc, sol) > 1.0 - 1e-6);
        }
        let mut cfg = sc.config.clone();
        cfg.far.path = crate::model::PathModel::MeanGain(1.0);
        cfg.gamma0 = 10.0;
        let sc = Scenario::new(cfg).unwrap();
        let want = mrc_gain_cdf(0.625 / 10.0, &dist(2, 1.0, 2, 1));
        assert_relative_eq!(
            sinr_far_cdf(0.3, &sc, SolutionId::SolutionI),
            want,
            epsilon = 1e-15
        );
    }

    #[test]
    fn eve_far_sinr_pdf_properties() {
        let sc = fig_base();
        let beta = sc.derived.beta;
        assert_eq!(eve_sinr_far_pdf(beta, &sc), 0.0);
        assert_eq!(eve_sinr_far_cdf(beta + 0.1, &sc), 1.0);
        let total =
            adaptive_integrate(|x| eve_sinr_far_pdf(x, &sc), 0.0, beta, 1e-13, 1e-12).unwrap();
        assert!((total - 1.0).abs() <= 1e-8, "{total}");
        for x in [0.1, 0.5, 1.0] {
            let h = 1e-5;
            let fd = (eve_sinr_far_cdf(x + h, &sc) - eve_sinr_far_cdf(x - h, &sc)) / (2.0 * h);
            let pdf = eve_sinr_far_pdf(x, &sc);
            assert!(((fd - pdf) / pdf).abs() <= 1e-5);
            assert_relative_eq!(eve_pdf_printed(x, &sc), pdf, max_relative = 1e-11);
        }
    }

    #[test]
    fn eve_near_snr_cdf() {
        let sc = fig_base();
        assert_eq!(eve_snr_near_cdf(0.0, &sc), 0.0);
        let eve = sc.eve_gain();
        let want = reg_lower_incomplete_gamma(4.0, 2.0 * (1.0 / 4.0) / sc.derived.lambda_eve)
            .unwrap();
        assert_relative_eq!(eve_snr_near_cdf(1.0, &sc), want, epsilon = 1e-15);
        let mut cfg = sc.config.clone();
        cfg.gamma_e = 1.0 / cfg.alpha_near;
        let unit = Scenario::new(cfg).unwrap();
        assert_relative_eq!(eve_snr_near_cdf(0.3, &unit), mrc_gain_cdf(0.3, &eve), epsilon = 1e-15);
    }

    #[test]
    fn cdfs_monotone_with_limits() {
        let sc = fig_base();
        let beta = sc.derived.beta;
        for sol in SolutionId::BOTH {
            let mut prev = [0.0; 3];
            for i in 0..1000 {
                let x = beta * i as f64 / 1000.0;
                let now = [
                    sinr_far_cdf(x, &sc, sol),
                    eve_sinr_far_cdf(x, &sc),
                    tas_best_cdf_direct(x * 20.0, &sc.near_gain(sol)),
                ];
                for k in 0..3 {
                    assert!(now[k] >= prev[k]);
                }
                prev = now;
            }
            assert!(tas_best_cdf_direct(1e4, &sc.near_gain(sol)) == 1.0);
        }
    }
}
