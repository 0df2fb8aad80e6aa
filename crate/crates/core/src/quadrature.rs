//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex-valued
//! integrands on a finite interval.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below `max(abs_tol, rel_tol·|I|)`. The per-interval error is
//! the plain `|K15 - G7|` difference, which is pessimistic for smooth
//! integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::{Error, Result};

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error_estimate: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct GaussKronrod {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for GaussKronrod {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_intervals: 20_000,
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * w;
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

impl GaussKronrod {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F, a: f64, b: f64) -> Result<Integral> {
        self.integrate_with_breakpoints(f, a, b, &[])
    }

    /// Integrates over `[a, b]` with the interval pre-split at `breakpoints`
    /// (points outside `(a, b)` are ignored). Useful when the location of a
    /// sharp feature is known in advance.
    pub fn integrate_with_breakpoints<F: Fn(f64) -> Complex64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        breakpoints: &[f64],
    ) -> Result<Integral> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::Domain(format!(
                "quadrature interval must be finite and ordered, got [{a}, {b}]"
            )));
        }
        let mut edges: Vec<f64> = std::iter::once(a)
            .chain(breakpoints.iter().copied().filter(|&x| x > a && x < b))
            .chain(std::iter::once(b))
            .collect();
        edges.sort_by(f64::total_cmp);
        edges.dedup();

        let mut heap = BinaryHeap::new();
        let mut total = Complex64::new(0.0, 0.0);
        let mut total_error = 0.0;
        for w in edges.windows(2) {
            let (value, error) = kronrod15(&f, w[0], w[1]);
            total += value;
            total_error += error;
            heap.push(Segment {
                a: w[0],
                b: w[1],
                value,
                error,
            });
        }
        let mut evaluations = 15 * heap.len();

        while total_error > self.abs_tol.max(self.rel_tol * total.norm()) {
            if heap.len() >= self.max_intervals {
                return Err(Error::Quadrature {
                    estimate: total,
                    error_estimate: total_error,
                    intervals: heap.len(),
                    evaluations,
                });
            }
            let worst = heap.pop().expect("at least one segment");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // Interval exhausted at f64 resolution.
                return Err(Error::Quadrature {
                    estimate: total,
                    error_estimate: total_error,
                    intervals: heap.len() + 1,
                    evaluations,
                });
            }
            let (left, left_err) = kronrod15(&f, worst.a, mid);
            let (right, right_err) = kronrod15(&f, mid, worst.b);
            evaluations += 30;
            total += left + right - worst.value;
            total_error += left_err + right_err - worst.error;
            heap.push(Segment {
                a: worst.a,
                b: mid,
                value: left,
                error: left_err,
            });
            heap.push(Segment {
                a: mid,
                b: worst.b,
                value: right,
                error: right_err,
            });
        }

        // Re-sum to shed the drift of the incremental updates.
        let (value, error_estimate) = heap
            .iter()
            .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), s| {
                (v + s.value, e + s.error)
            });
        Ok(Integral {
            value,
            error_estimate,
            intervals: heap.len(),
            evaluations,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let q = GaussKronrod::default();
        let r = q
            .integrate(|x| Complex64::new(x.powi(5) - 2.0 * x, x * x), 0.0, 2.0)
            .unwrap();
        assert!((r.value - Complex64::new(64.0 / 6.0 - 4.0, 8.0 / 3.0)).norm() < 1e-13);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn lorentzian_peak() {
        // ∫_0^10 dx / ((x-3)^2 + a^2) = [atan((10-3)/a) + atan(3/a)] / a
        let a: f64 = 1e-3;
        let exact = ((7.0 / a).atan() + (3.0 / a).atan()) / a;
        let q = GaussKronrod::with_rel_tol(1e-11);
        let r = q
            .integrate(
                |x| Complex64::new(1.0 / ((x - 3.0).powi(2) + a * a), 0.0),
                0.0,
                10.0,
            )
            .unwrap();
        assert!((r.value.re - exact).abs() / exact < 1e-10);
        let split = q
            .integrate_with_breakpoints(
                |x| Complex64::new(1.0 / ((x - 3.0).powi(2) + a * a), 0.0),
                0.0,
                10.0,
                &[3.0, 42.0],
            )
            .unwrap();
        assert!((split.value.re - exact).abs() / exact < 1e-10);
        assert!(split.evaluations < r.evaluations);
    }

    #[test]
    fn complex_oscillatory() {
        // ∫_0^π e^{ix} dx = 2i
        let r = GaussKronrod::default()
            .integrate(|x| Complex64::new(0.0, x).exp(), 0.0, PI)
            .unwrap();
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn interval_budget_is_reported() {
        let q = GaussKronrod {
            rel_tol: 1e-14,
            abs_tol: 0.0,
            max_intervals: 3,
        };
        let err = q
            .integrate(|x| Complex64::new(x.abs().sqrt().recip(), 0.0), 1e-300, 1.0)
            .unwrap_err();
        assert!(matches!(err, Error::Quadrature { intervals: 3, .. }));
    }

    #[test]
    fn bad_interval() {
        let q = GaussKronrod::default();
        assert!(q.integrate(|_| Complex64::new(1.0, 0.0), 1.0, 1.0).is_err());
        assert!(q
            .integrate(|_| Complex64::new(1.0, 0.0), 0.0, f64::INFINITY)
            .is_err());
    }
}
