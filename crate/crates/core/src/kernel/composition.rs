//! Weak compositions and the multinomial coefficients of the TAS CDF
//! expansion.

use crate::error::{Error, Result};
use crate::kernel::gamma::{log_binomial, log_factorial};
use crate::kernel::signed::SignedLogValue;

/// Hard limit on the number of series terms formed for one expression.
pub const TERM_CAP: usize = 1_000_000;

/// A sequence of `slots` non-negative integers summing to `total`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeakComposition {
    parts: Vec<u32>,
    total: u32,
}

impl WeakComposition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::invalid("parts", "a composition needs at least one slot"));
        }
        let total = parts.iter().sum();
        Ok(Self { parts, total })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn slots(&self) -> usize {
        self.parts.len()
    }

    /// Σ_q q·δ_q, the power of x contributed by this composition.
    pub fn weighted_degree(&self) -> u32 {
        self.parts
            .iter()
            .enumerate()
            .map(|(q, &d)| q as u32 * d)
            .sum()
    }

    /// `ln( p! / Π δ_q! )`.
    pub fn log_multinomial(&self) -> f64 {
        log_factorial(u64::from(self.total))
            - self
                .parts
                .iter()
                .map(|&d| log_factorial(u64::from(d)))
                .sum::<f64>()
    }
}

/// Number of weak compositions of `total` into `slots` parts,
/// `C(total + slots − 1, slots − 1)`, saturating at `u128::MAX`.
pub fn composition_count(total: u32, slots: u32) -> u128 {
    if slots == 0 {
        return u128::from(total == 0);
    }
    let n = u128::from(total) + u128::from(slots) - 1;
    let k = u128::from(slots - 1).min(u128::from(total));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All weak compositions of `total` into `slots` parts, in decreasing
/// lexicographic order: `(total, 0, …, 0)` first, `(0, …, 0, total)` last.
pub fn weak_compositions(total: u32, slots: u32) -> Result<Vec<WeakComposition>> {
    if total == 0 || slots == 0 {
        return Err(Error::invalid(
            "weak_compositions",
            "total and slots must both be at least 1",
        ));
    }
    let count = composition_count(total, slots);
    if count > TERM_CAP as u128 {
        return Err(Error::TermCapExceeded {
            expression: "weak composition enumeration",
            needed: count,
            cap: TERM_CAP,
        });
    }
    let slots = slots as usize;
    let last = slots - 1;
    let mut current = vec![0u32; slots];
    current[0] = total;
    let mut out = Vec::with_capacity(count as usize);
    loop {
        out.push(WeakComposition {
            parts: current.clone(),
            total,
        });
        let Some(i) = (0..last).rev().find(|&i| current[i] > 0) else {
            break;
        };
        let tail = current[last];
        current[last] = 0;
        current[i] -= 1;
        current[i + 1] = tail + 1;
    }
    Ok(out)
}

/// Coefficient of one multinomial term of the TAS-selected CDF,
/// `C(L_S, p)(−1)^p · multinomial(p; δ) · Π_q (m^q / (q! λ^q))^{δ_q}`,
/// together with the power `φ = Σ q δ_q`.
pub fn phi_term(
    composition: &WeakComposition,
    source_antennas: u32,
    m: u32,
    lambda: f64,
) -> (SignedLogValue, u32) {
    let p = composition.total();
    debug_assert!(p >= 1 && p <= source_antennas);
    let sign = if p.is_multiple_of(2) { 1 } else { -1 };
    let per_slot: f64 = composition
        .parts()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .map(|(q, &d)| {
            let q = q as f64;
            f64::from(d) * (q * f64::from(m).ln() - log_factorial(q as u64) - q * lambda.ln())
        })
        .sum();
    let log_mag = log_binomial(u64::from(source_antennas), u64::from(p))
        + composition.log_multinomial()
        + per_slot;
    (
        SignedLogValue::new(sign, log_mag),
        composition.weighted_degree(),
    )
}
