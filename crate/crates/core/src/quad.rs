// Copyright 2026 ddopt contributors
// SPDX-License-Identifier: Apache-2.0

//! Adaptive quadrature on a finite interval, built on the 7-15
//! Gauss-Kronrod pair. The worst interval (largest error estimate) is
//! bisected until the summed estimate meets the tolerance or the interval
//! budget runs out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::real::Real;

/// Abscissae of the 15-point Kronrod rule on [-1, 1] (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// Weights of the embedded 7-point Gauss rule.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Weights of the 15-point Kronrod rule.
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

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    /// Budget exhausted before reaching the tolerance; carries the best
    /// estimate and its error bound.
    #[error("quadrature reached {intervals} intervals with error {error_estimate:e} above tolerance (best estimate {value})")]
    ToleranceNotReached {
        value: f64,
        error_estimate: f64,
        intervals: usize,
    },
    /// The integrand produced a non-finite value.
    #[error("integrand returned a non-finite value")]
    NonFiniteIntegrand,
}

/// Converged quadrature output.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<R> {
    pub value: R,
    pub error_estimate: R,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment<R> {
    a: R,
    b: R,
    value: R,
    error: R,
}

impl<R: Real> PartialEq for Segment<R> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<R: Real> Eq for Segment<R> {}
impl<R: Real> PartialOrd for Segment<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<R: Real> Ord for Segment<R> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// One 7-15 Gauss-Kronrod application on `[a, b]`.
fn gk15<R: Real, F: Fn(R) -> R>(f: &F, a: R, b: R) -> Result<(R, R), QuadError> {
    let half = R::of(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let f_center = f(center);

    let mut res_gauss = R::zero();
    let mut res_kronrod = f_center * R::of(WGK[7]);
    let mut res_abs = res_kronrod.abs();
    let mut fv = [R::zero(); 15];
    fv[7] = f_center;

    for (j, &xj) in XGK.iter().enumerate().take(7) {
        let abscissa = half_len * R::of(xj);
        let f1 = f(center - abscissa);
        let f2 = f(center + abscissa);
        fv[j] = f1;
        fv[14 - j] = f2;
        let fsum = f1 + f2;
        res_kronrod += R::of(WGK[j]) * fsum;
        res_abs += R::of(WGK[j]) * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += R::of(WG[j / 2]) * fsum;
        }
    }

    if !res_kronrod.is_finite() {
        return Err(QuadError::NonFiniteIntegrand);
    }

    let mean = res_kronrod * half;
    let mut res_asc = R::of(WGK[7]) * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += R::of(WGK[j]) * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = res_kronrod * half_len;
    res_abs = res_abs * half_len.abs();
    res_asc = res_asc * half_len.abs();
    let raw = ((res_kronrod - res_gauss) * half_len).abs();

    // QUADPACK error rescaling
    let mut err = raw;
    if res_asc != R::zero() && err != R::zero() {
        let scale = (R::of(200.0) * err / res_asc).powf(R::of(1.5));
        err = if scale < R::one() { res_asc * scale } else { res_asc };
    }
    let floor = R::of(50.0) * R::epsilon() * res_abs;
    if res_abs > R::min_positive_value() / (R::of(50.0) * R::epsilon()) && floor > err {
        err = floor;
    }
    Ok((value, err))
}

/// Integrates `f` over `[a, b]` until the summed error estimate is at or
/// below `max(abs_tol, rel_tol * |value|)`, bisecting at most
/// `max_intervals` times.
pub fn integrate<R: Real, F: Fn(R) -> R>(
    f: F,
    a: R,
    b: R,
    abs_tol: R,
    rel_tol: R,
    max_intervals: usize,
) -> Result<QuadResult<R>, QuadError> {
    if a == b {
        return Ok(QuadResult {
            value: R::zero(),
            error_estimate: R::zero(),
            intervals: 0,
        });
    }
    let (value, error) = gk15(&f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total_value = value;
    let mut total_error = error;

    while total_error > abs_tol.max(rel_tol * total_value.abs()) {
        if heap.len() >= max_intervals {
            return Err(QuadError::ToleranceNotReached {
                value: resum(&heap).0.lossy_f64(),
                error_estimate: resum(&heap).1.lossy_f64(),
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap cannot be empty");
        let mid = R::of(0.5) * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating-point resolution; keep its estimate
            heap.push(Segment { error: R::zero(), ..worst });
            total_error = resum(&heap).1;
            if heap.iter().all(|s| s.error == R::zero()) {
                break;
            }
            continue;
        }
        let (lv, le) = gk15(&f, worst.a, mid)?;
        let (rv, re) = gk15(&f, mid, worst.b)?;
        total_value = total_value - worst.value + lv + rv;
        total_error = total_error - worst.error + le + re;
        heap.push(Segment { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Segment { a: mid, b: worst.b, value: rv, error: re });
    }

    let (value, error_estimate) = resum(&heap);
    Ok(QuadResult {
        value,
        error_estimate,
        intervals: heap.len(),
    })
}

/// Exact resummation, avoiding drift from incremental bookkeeping.
fn resum<R: Real>(heap: &BinaryHeap<Segment<R>>) -> (R, R) {
    let mut v = R::zero();
    let mut e = R::zero();
    for s in heap {
        v += s.value;
        e += s.error;
    }
    (v, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x: f64| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 1e-12, 1e-12, 100).unwrap();
        // antiderivative x^4/4 - x^2 + x at 2 = 4 - 4 + 2
        assert!((r.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let r = integrate(|x: f64| (10.0 * x).cos(), 0.0, 3.0, 1e-12, 1e-12, 10_000).unwrap();
        let want = (30.0f64).sin() / 10.0;
        assert!((r.value - want).abs() < 1e-12, "{} vs {want}", r.value);
        assert!(r.error_estimate >= (r.value - want).abs());
    }

    #[test]
    fn zero_width_interval() {
        let r = integrate(|x: f64| x.exp(), 1.0, 1.0, 1e-12, 1e-12, 10).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        // strong singularity that cannot converge with 2 intervals
        let err = integrate(|x: f64| x.abs().sqrt().recip().min(1e300), -1.0, 1.0, 1e-14, 1e-14, 2)
            .unwrap_err();
        match err {
            QuadError::ToleranceNotReached { value, intervals, .. } => {
                assert!(value.is_finite());
                assert_eq!(intervals, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn f32_instantiation() {
        let r = integrate(|x: f32| x.sin(), 0.0f32, 1.0, 1e-5, 1e-5, 100).unwrap();
        assert!((r.value - (1.0 - 1.0f32.cos())).abs() < 1e-5);
    }
}
