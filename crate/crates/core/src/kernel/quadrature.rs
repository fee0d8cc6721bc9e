//! Gauss–Chebyshev nodes and a globally adaptive Gauss–Kronrod integrator.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Chebyshev nodes of the first kind, `v_i = cos((2i − 1)π / 2N)` for
/// `i = 1..=N`.
pub fn chebyshev_nodes(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| ((2 * i - 1) as f64 * PI / (2 * n) as f64).cos())
        .collect()
}

/// Abscissae and weights for `∫_a^b f(x) dx ≈ Σ w_i f(x_i)` obtained by
/// applying the N-point Chebyshev rule to `f(x)·√(1 − v²)` on the mapped
/// interval.
#[derive(Debug, Clone)]
pub struct ChebyshevRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ChebyshevRule {
    pub fn on_interval(n: usize, a: f64, b: f64) -> Self {
        let half = 0.5 * (b - a);
        let scale = PI * half / n as f64;
        let nodes = chebyshev_nodes(n);
        let points = nodes.iter().map(|v| a + (v + 1.0) * half).collect();
        let weights = nodes.iter().map(|v| scale * (1.0 - v * v).sqrt()).collect();
        Self { points, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights on the odd-indexed Kronrod nodes (1, 3, 5, 7).
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Maximum number of subintervals before giving up.
pub const MAX_SUBINTERVALS: usize = 4000;

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = KRONROD_WEIGHTS[7] * fc;
    let mut gauss = GAUSS_WEIGHTS[3] * fc;
    for j in 0..7 {
        let dx = half * GK_NODES[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += KRONROD_WEIGHTS[j] * pair;
        if j % 2 == 1 {
            gauss += GAUSS_WEIGHTS[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Segment { a, b, value, error }
}

/// Adaptive integration of `f` over `[a, b]`; `b` may be `+∞`, in which case
/// `x = a + t/(1 − t)` maps the range onto `[0, 1)`.
///
/// Stops once the summed error estimate is at most `max(tol_abs, tol_rel·|I|)`.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol_abs: f64,
    tol_rel: f64,
) -> Result<f64> {
    if b.is_infinite() {
        let mapped = |t: f64| {
            let s = 1.0 - t;
            let x = a + t / s;
            let v = f(x) / (s * s);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        };
        return integrate_finite(&mapped, 0.0, 1.0, tol_abs, tol_rel);
    }
    integrate_finite(&f, a, b, tol_abs, tol_rel)
}

fn integrate_finite<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol_abs: f64,
    tol_rel: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let first = gauss_kronrod(f, a, b);
    let mut total = first.value;
    let mut total_error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    while total_error > tol_abs.max(tol_rel * total.abs()) {
        if heap.len() >= MAX_SUBINTERVALS {
            return Err(Error::NoConvergence {
                intervals: heap.len(),
                error: total_error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval can no longer be split in floating point.
            heap.push(worst);
            break;
        }
        let left = gauss_kronrod(f, worst.a, mid);
        let right = gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed drift from the incremental updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    if error > tol_abs.max(tol_rel * value.abs()) && heap.len() >= MAX_SUBINTERVALS {
        return Err(Error::NoConvergence {
            intervals: heap.len(),
            error,
        });
    }
    Ok(value)
}
