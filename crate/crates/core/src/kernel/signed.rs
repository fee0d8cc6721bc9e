//! Signed values stored as `(sign, ln |value|)` so that series terms with
//! huge factorials and SNR powers can be formed without overflow.

use std::ops::{Mul, Neg};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogValue {
    sign: i8,
    log_magnitude: f64,
}

impl SignedLogValue {
    pub const ZERO: Self = Self {
        sign: 0,
        log_magnitude: f64::NEG_INFINITY,
    };
    pub const ONE: Self = Self {
        sign: 1,
        log_magnitude: 0.0,
    };

    /// Builds a value from its sign and log-magnitude. A log-magnitude of
    /// `-∞` or a zero sign yields exact zero.
    pub fn new(sign: i8, log_magnitude: f64) -> Self {
        if sign == 0 || log_magnitude == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self {
                sign: sign.signum(),
                log_magnitude,
            }
        }
    }

    pub fn positive(log_magnitude: f64) -> Self {
        Self::new(1, log_magnitude)
    }

    pub fn from_f64(value: f64) -> Self {
        if value == 0.0 {
            Self::ZERO
        } else {
            Self::new(if value > 0.0 { 1 } else { -1 }, value.abs().ln())
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn log_magnitude(&self) -> f64 {
        self.log_magnitude
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.log_magnitude.exp()
        }
    }

    /// Multiplies by `e^{log_factor}`.
    pub fn scale_log(self, log_factor: f64) -> Self {
        if self.sign == 0 {
            self
        } else {
            Self::new(self.sign, self.log_magnitude + log_factor)
        }
    }
}

impl Mul for SignedLogValue {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self::new(self.sign * rhs.sign, self.log_magnitude + rhs.log_magnitude)
    }
}

impl Neg for SignedLogValue {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            sign: -self.sign,
            log_magnitude: self.log_magnitude,
        }
    }
}

/// `exponent · ln(base)` with the conventions `0^0 = 1` and `0^k = 0` for
/// `k > 0`.
pub fn log_pow(base: f64, exponent: u32) -> f64 {
    debug_assert!(base >= 0.0);
    if exponent == 0 {
        0.0
    } else {
        f64::from(exponent) * base.ln()
    }
}

const PAIRWISE_LEAF: usize = 32;

fn neumaier(values: &[f64]) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn pairwise(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_LEAF {
        neumaier(values)
    } else {
        let (lo, hi) = values.split_at(values.len() / 2);
        pairwise(lo) + pairwise(hi)
    }
}

/// Σ sign·exp(log_magnitude), rescaled by the largest magnitude and
/// accumulated pairwise with compensated leaves. Empty input gives exactly 0.
pub fn signed_log_sum(terms: &[SignedLogValue]) -> f64 {
    let peak = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.log_magnitude)
        .fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return 0.0;
    }
    let scaled: Vec<f64> = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| f64::from(t.sign) * (t.log_magnitude - peak).exp())
        .collect();
    pairwise(&scaled) * peak.exp()
}

/// Σ |value| of the same terms: the scale against which cancellation in
/// [`signed_log_sum`] is judged.
pub fn signed_log_magnitude(terms: &[SignedLogValue]) -> f64 {
    let peak = terms
        .iter()
        .map(|t| t.log_magnitude)
        .fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return 0.0;
    }
    let scaled: Vec<f64> = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| (t.log_magnitude - peak).exp())
        .collect();
    pairwise(&scaled) * peak.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Exact running sum as a list of non-overlapping partials (Shewchuk).
    fn exact_sum(values: &[f64]) -> f64 {
        let mut partials: Vec<f64> = Vec::new();
        for &v in values {
            let mut x = v;
            let mut kept = Vec::with_capacity(partials.len() + 1);
            for &p in &partials {
                let (mut a, mut b) = (x, p);
                if a.abs() < b.abs() {
                    std::mem::swap(&mut a, &mut b);
                }
                let hi = a + b;
                let lo = b - (hi - a);
                if lo != 0.0 {
                    kept.push(lo);
                }
                x = hi;
            }
            kept.push(x);
            partials = kept;
        }
        partials.iter().sum()
    }

    #[test]
    fn cancellation_is_exact() {
        let two = 2.0_f64.ln();
        let terms = [SignedLogValue::new(1, two), SignedLogValue::new(-1, two)];
        assert!(signed_log_sum(&terms).abs() <= 1e-15);
    }

    #[test]
    fn single_and_empty() {
        assert_eq!(signed_log_sum(&[SignedLogValue::positive(0.0)]), 1.0);
        assert_eq!(signed_log_sum(&[]), 0.0);
        assert_eq!(signed_log_sum(&[SignedLogValue::ZERO]), 0.0);
    }

    #[test]
    fn zero_sign_iff_zero_value() {
        assert!(SignedLogValue::from_f64(0.0).is_zero());
        assert!(SignedLogValue::new(1, f64::NEG_INFINITY).is_zero());
        assert!(!SignedLogValue::from_f64(-3.0).is_zero());
        assert!((SignedLogValue::from_f64(-3.0).to_f64() + 3.0).abs() < 1e-14);
    }

    #[test]
    fn random_terms_match_exact_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let terms: Vec<SignedLogValue> = (0..10_000)
            .map(|_| {
                let sign = if rng.random::<f64>() < 0.35 { -1 } else { 1 };
                SignedLogValue::new(sign, rng.random_range(-20.0..5.0))
            })
            .collect();
        let values: Vec<f64> = terms.iter().map(|t| t.to_f64()).collect();
        let reference = exact_sum(&values);
        let got = signed_log_sum(&terms);
        assert!(((got - reference) / reference).abs() <= 1e-12);
    }

    #[test]
    fn huge_magnitudes_do_not_overflow() {
        let terms = [
            SignedLogValue::positive(800.0),
            SignedLogValue::new(-1, 800.0 + (0.5_f64).ln()),
        ];
        // Neither term fits in an f64, the rescaled sum does. Log storage
        // costs about |ln x|·ε of relative precision.
        let scaled: Vec<_> = terms.iter().map(|t| t.scale_log(-800.0)).collect();
        assert!((signed_log_sum(&scaled) - 0.5).abs() < 1e-12);
        let big = [
            SignedLogValue::positive(700.0),
            SignedLogValue::new(-1, 700.0 + (0.5_f64).ln()),
        ];
        let got = signed_log_sum(&big);
        assert!(((got - 0.5 * 700.0_f64.exp()) / got).abs() < 1e-13);
    }

    #[test]
    fn log_pow_conventions() {
        assert_eq!(log_pow(0.0, 0), 0.0);
        assert_eq!(log_pow(0.0, 3), f64::NEG_INFINITY);
        assert!((log_pow(2.0, 3) - 8.0_f64.ln()).abs() < 1e-15);
    }
}
