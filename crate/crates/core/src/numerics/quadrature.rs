//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex integrands
//! along piecewise-linear paths in the complex plane.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and limits for [`integrate_path`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            rel_tol: 0.0,
            max_intervals: 50_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: Complex64,
    b: Complex64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(Complex64) -> Complex64>(f: &F, a: Complex64, b: Complex64) -> Piece {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dz = half * XGK[j];
        let s = f(center - dz) + f(center + dz);
        kronrod += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Piece { a, b, value, error }
}

/// Integrate `f(z) dz` along the polyline through `vertices`.
///
/// Every vertex starts a separate panel, so put singular or sharply peaked
/// points of the integrand there.
pub fn integrate_path<F>(f: F, vertices: &[Complex64], spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(Complex64) -> Complex64,
{
    if vertices.len() < 2 {
        return Err(Error::Precondition("path needs at least two vertices".into()));
    }
    let mut heap = BinaryHeap::new();
    for w in vertices.windows(2) {
        if w[0] != w[1] {
            heap.push(gk15(&f, w[0], w[1]));
        }
    }
    let mut evaluations = 15 * heap.len();
    let totals = |heap: &BinaryHeap<Piece>| {
        heap.iter()
            .fold((Complex64::default(), 0.0), |(v, e), p| (v + p.value, e + p.error))
    };
    let (mut value, mut error) = totals(&heap);
    let mut splits = 0usize;
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * value.norm());
        if error <= target {
            // Re-sum exactly before reporting; running sums drift slightly.
            let (value, error) = totals(&heap);
            if error <= target {
                return Ok(QuadratureResult {
                    value,
                    error,
                    intervals: heap.len(),
                    evaluations,
                });
            }
        }
        if heap.len() >= spec.max_intervals {
            return Err(Error::QuadratureFailed {
                error,
                target,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if (mid - worst.a).norm() < 1e-15 * (1.0 + mid.norm()) {
            return Err(Error::QuadratureFailed {
                error,
                target,
                intervals: heap.len() + 1,
            });
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        evaluations += 30;
        splits += 1;
        if splits % 512 == 0 {
            (value, error) = totals(&heap);
        }
    }
}
