//! Log-gamma, log-factorial and the regularized incomplete gamma functions.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest n for which n! is finite in double precision.
const MAX_FACTORIAL: usize = 170;

fn log_factorial_table() -> &'static [f64; MAX_FACTORIAL + 1] {
    static TABLE: OnceLock<[f64; MAX_FACTORIAL + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; MAX_FACTORIAL + 1];
        let mut factorial = 1.0_f64;
        for (n, slot) in table.iter_mut().enumerate().skip(1) {
            factorial *= n as f64;
            *slot = factorial.ln();
        }
        table
    })
}

/// `ln n!`, exact to rounding for n ≤ 170 and via Lanczos beyond.
pub fn log_factorial(n: u64) -> f64 {
    if (n as usize) <= MAX_FACTORIAL {
        log_factorial_table()[n as usize]
    } else {
        lanczos_ln_gamma(n as f64 + 1.0)
    }
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the series in its accurate range.
        return (PI / (PI * x).sin()).ln() - lanczos_ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Natural logarithm of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "log_gamma",
            value: x,
            reason: "argument must be positive and finite",
        });
    }
    if x.fract() == 0.0 && x <= (MAX_FACTORIAL + 1) as f64 {
        return Ok(log_factorial(x as u64 - 1));
    }
    Ok(lanczos_ln_gamma(x))
}

/// `ln C(n, k)`.
pub fn log_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    log_factorial(n) - log_factorial(k) - log_factorial(n - k)
}

const INCGAMMA_EPS: f64 = 1e-16;
const INCGAMMA_MAX_ITER: usize = 10_000;

/// Regularized lower incomplete gamma function `P(a, x)`.
///
/// Returns 0 for `x = 0` and 1 for `x = +∞`.
pub fn reg_lower_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    check_incgamma_args(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    if x < a + 1.0 {
        Ok(lower_series(a, x)?)
    } else {
        Ok(1.0 - upper_continued_fraction(a, x)?)
    }
}

/// Regularized upper incomplete gamma function `Q(a, x) = 1 − P(a, x)`,
/// computed without cancellation in the upper tail.
pub fn reg_upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    check_incgamma_args(a, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        Ok(1.0 - lower_series(a, x)?)
    } else {
        upper_continued_fraction(a, x)
    }
}

fn check_incgamma_args(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain {
            function: "incomplete_gamma",
            value: a,
            reason: "shape must be positive and finite",
        });
    }
    if !(x >= 0.0) {
        return Err(Error::Domain {
            function: "incomplete_gamma",
            value: x,
            reason: "argument must be non-negative",
        });
    }
    Ok(())
}

/// `ln(x^a e^{-x} / Γ(a))`, the common prefactor of both expansions.
fn log_prefactor(a: f64, x: f64) -> Result<f64> {
    Ok(a * x.ln() - x - log_gamma(a)?)
}

fn lower_series(a: f64, x: f64) -> Result<f64> {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut denom = a;
    for _ in 0..INCGAMMA_MAX_ITER {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * INCGAMMA_EPS {
            return Ok((log_prefactor(a, x)? + sum.ln()).exp());
        }
    }
    Err(Error::NoConvergence {
        intervals: INCGAMMA_MAX_ITER,
        error: term,
    })
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
fn upper_continued_fraction(a: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..INCGAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < INCGAMMA_EPS {
            return Ok((log_prefactor(a, x)? + h.ln()).exp());
        }
    }
    Err(Error::NoConvergence {
        intervals: INCGAMMA_MAX_ITER,
        error: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Independent reference: Stirling series after shifting the argument up
    // by recurrence.
    fn stirling_ln_gamma(x: f64) -> f64 {
        let mut shift = 0.0;
        let mut z = x;
        while z < 30.0 {
            shift -= z.ln();
            z += 1.0;
        }
        let inv = 1.0 / z;
        let inv2 = inv * inv;
        let series = inv
            * (1.0 / 12.0
                - inv2
                    * (1.0 / 360.0
                        - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
        shift + (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series
    }

    #[test]
    fn known_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        assert_relative_eq!(log_gamma(5.0).unwrap(), 24.0_f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(
            log_gamma(0.5).unwrap(),
            PI.sqrt().ln(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn rejects_non_positive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn matches_stirling_reference_on_grid() {
        let mut x = 1.0;
        while x <= 200.0 {
            let got = log_gamma(x).unwrap();
            let want = stirling_ln_gamma(x);
            let scale = want.abs().max(1.0);
            assert!(
                (got - want).abs() <= 1e-12 * scale,
                "x={x}: {got} vs {want}"
            );
            x += 0.37;
        }
    }

    #[test]
    fn incomplete_gamma_known_values() {
        assert_relative_eq!(
            reg_lower_incomplete_gamma(1.0, 2.0_f64.ln()).unwrap(),
            0.5,
            max_relative = 1e-14
        );
        assert_eq!(reg_lower_incomplete_gamma(3.0, 0.0).unwrap(), 0.0);
        // 1 − e^{−2}(1 + 2 + 2 + 4/3)
        let p42 = 1.0 - (-2.0_f64).exp() * (1.0 + 2.0 + 2.0 + 4.0 / 3.0);
        assert_relative_eq!(
            reg_lower_incomplete_gamma(4.0, 2.0).unwrap(),
            p42,
            max_relative = 1e-13
        );
        assert_relative_eq!(p42, 0.142877, epsilon = 5e-7);
    }

    #[test]
    fn incomplete_gamma_matches_erlang_finite_sum() {
        for a in 1..=12u32 {
            let mut x = 0.0;
            while x <= 50.0 {
                let mut sum = 0.0;
                let mut term = 1.0;
                for k in 0..a {
                    if k > 0 {
                        term *= x / k as f64;
                    }
                    sum += term;
                }
                let finite = 1.0 - (-x).exp() * sum;
                let got = reg_lower_incomplete_gamma(a as f64, x).unwrap();
                assert!((got - finite).abs() <= 1e-11, "a={a} x={x}");
                let upper = reg_upper_incomplete_gamma(a as f64, x).unwrap();
                assert!((got + upper - 1.0).abs() <= 1e-14);
                x += 0.25;
            }
        }
    }

    #[test]
    fn incomplete_gamma_tails() {
        assert_eq!(reg_lower_incomplete_gamma(2.5, f64::INFINITY).unwrap(), 1.0);
        // Small-argument behaviour P(a, x) ≈ x^a / Γ(a + 1).
        let x = 1e-8_f64;
        let p = reg_lower_incomplete_gamma(4.0, x).unwrap();
        assert_relative_eq!(p, x.powi(4) / 24.0, max_relative = 1e-7);
        let q = reg_upper_incomplete_gamma(2.0, 60.0).unwrap();
        assert_relative_eq!(q, (-60.0_f64).exp() * 61.0, max_relative = 1e-12);
    }

    #[test]
    fn monotone_in_x() {
        let mut prev = 0.0;
        for i in 0..1000 {
            let p = reg_lower_incomplete_gamma(3.5, i as f64 * 0.02).unwrap();
            assert!(p >= prev);
            prev = p;
        }
    }
}
