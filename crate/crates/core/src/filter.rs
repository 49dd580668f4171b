// Copyright 2026 ddopt contributors
// SPDX-License-Identifier: Apache-2.0

//! Spectral filter function of a pulse sequence.
//!
//! For a sequence with extended entries `delta_0 = 0 < delta_1 < ... <
//! delta_n < delta_{n+1} = 1` the filter function at dimensionless frequency
//! `z` is
//!
//! ```text
//! y_n(z) = sum_{j=0}^{n+1} 2^{q_j} (-1)^j exp(i z delta_j)
//! ```
//!
//! with `q_j = 0` on the boundary entries and 1 otherwise. `|y_n(z)|^2`
//! weights how much noise at frequency `z` leaks into dephasing. Two
//! independent evaluations are kept side by side: the direct complex sum
//! (production path, O(n)) and the expanded double sum (O(n^2)), each
//! validating the other.

use num_complex::Complex;

use crate::real::Real;
use crate::sequence::PulseSequence;

/// Signed integer coefficient `2^{q_j} (-1)^j` for extended index `j`.
#[inline]
pub(crate) fn signed_weight(j: usize, n: usize) -> i64 {
    let magnitude = if j == 0 || j == n + 1 { 1 } else { 2 };
    if j % 2 == 0 {
        magnitude
    } else {
        -magnitude
    }
}

/// Filter function evaluated at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterValue<R> {
    /// Dimensionless frequency `z = omega * t`.
    pub z: R,
    /// Complex value `y_n(z)`.
    pub value: Complex<R>,
    /// `|y_n(z)|^2`; never exceeds `(2n+2)^2`.
    pub magnitude_squared: R,
}

/// Direct complex evaluation of `y_n(z)`. Total on finite `z`.
pub fn filter_value<R: Real>(seq: &PulseSequence<R>, z: R) -> FilterValue<R> {
    let n = seq.pulse_count();
    let mut acc = Complex::new(R::zero(), R::zero());
    for j in 0..=n + 1 {
        let w = R::of(signed_weight(j, n) as f64);
        let phase = z * seq.delta_at(j);
        acc = acc + Complex::new(phase.cos() * w, phase.sin() * w);
    }
    FilterValue {
        z,
        value: acc,
        magnitude_squared: acc.norm_sqr(),
    }
}

/// `|y_n(z)|^2` through the expanded double sum
/// `sum_{i,j} 2^{q_i+q_j} (-1)^{i+j} cos(z (delta_i - delta_j))`.
///
/// Cross-check of the direct form; agrees with
/// [`filter_value`]`(..).magnitude_squared` to relative 1e-12 away from the
/// deep zeros of the filter.
pub fn magnitude_squared_sumform<R: Real>(seq: &PulseSequence<R>, z: R) -> R {
    let n = seq.pulse_count();
    let mut acc = R::zero();
    for i in 0..=n + 1 {
        let wi = signed_weight(i, n);
        let di = seq.delta_at(i);
        for j in 0..=n + 1 {
            let w = R::of((wi * signed_weight(j, n)) as f64);
            acc += w * (z * (di - seq.delta_at(j))).cos();
        }
    }
    acc
}

/// Exact integer evaluation of `sum_{i,j=0}^{n+1} 2^{q_i+q_j} (-1)^{i+j}`.
///
/// This is `|y_n(0)|^2` with every exponential collapsed to 1; the weight
/// and sign bookkeeping must make it vanish identically, which is what
/// guarantees the infrared convergence of the dephasing integral. Returns
/// the exact sum, which is 0 for every `n`.
pub fn dc_identity_check(n: usize) -> i64 {
    let mut acc: i64 = 0;
    for i in 0..=n + 1 {
        for j in 0..=n + 1 {
            acc += signed_weight(i, n) * signed_weight(j, n);
        }
    }
    acc
}

/// `|y_n(z)|^2 / z^2`, stable in the small-`z` limit where both the
/// numerator and denominator vanish quadratically.
pub(crate) fn magnitude_squared_over_z_squared<R: Real>(seq: &PulseSequence<R>, z: R) -> R {
    if z.abs() < R::of(1e-6) {
        // y(z) ~ i z sum_j w_j delta_j near the origin
        let n = seq.pulse_count();
        let mut slope = R::zero();
        for j in 0..=n + 1 {
            slope += R::of(signed_weight(j, n) as f64) * seq.delta_at(j);
        }
        slope * slope
    } else {
        filter_value(seq, z).magnitude_squared / (z * z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(deltas: &[f64]) -> PulseSequence<f64> {
        PulseSequence::new(deltas.to_vec()).unwrap()
    }

    #[test]
    fn vanishes_at_dc() {
        for s in [
            PulseSequence::<f64>::empty(),
            seq(&[0.5]),
            seq(&[0.25, 0.75]),
            PulseSequence::udd(5),
        ] {
            let fv = filter_value(&s, 0.0);
            assert!(fv.magnitude_squared < 1e-28, "{:?}", fv);
        }
    }

    #[test]
    fn free_evolution_at_pi() {
        let fv = filter_value(&PulseSequence::<f64>::empty(), std::f64::consts::PI);
        assert!((fv.value.re - 2.0).abs() < 1e-14);
        assert!(fv.value.im.abs() < 1e-14);
        assert!((fv.magnitude_squared - 4.0).abs() < 1e-13);
    }

    #[test]
    fn single_pulse_at_two_pi() {
        let fv = filter_value(&seq(&[0.5]), 2.0 * std::f64::consts::PI);
        assert!((fv.magnitude_squared - 16.0).abs() < 1e-12);
    }

    #[test]
    fn magnitude_consistent_with_value() {
        let s = PulseSequence::<f64>::udd(4);
        for k in 0..40 {
            let z = 0.37 * k as f64;
            let fv = filter_value(&s, z);
            assert_eq!(fv.magnitude_squared, fv.value.norm_sqr());
        }
    }

    #[test]
    fn triangle_bound_holds() {
        for n in [0, 1, 3, 7] {
            let s = PulseSequence::<f64>::udd(n);
            let cap = ((2 * n + 2) * (2 * n + 2)) as f64;
            for k in 0..200 {
                let z = -10.0 + 0.1 * k as f64;
                assert!(filter_value(&s, z).magnitude_squared <= cap * (1.0 + 1e-14));
            }
        }
    }

    #[test]
    fn sumform_matches_direct_form() {
        let s = PulseSequence::<f64>::udd(2);
        let a = magnitude_squared_sumform(&s, 1.0);
        let b = filter_value(&s, 1.0).magnitude_squared;
        assert!((a - b).abs() <= 1e-12 * b.max(1.0), "{a} vs {b}");

        let e = PulseSequence::<f64>::empty();
        assert!((magnitude_squared_sumform(&e, std::f64::consts::PI) - 4.0).abs() < 1e-13);
        assert!(magnitude_squared_sumform(&e, 0.0).abs() < 1e-13);
    }

    #[test]
    fn dc_identity_exact_zero_through_n_32() {
        for n in 0..=32 {
            assert_eq!(dc_identity_check(n), 0, "n={n}");
        }
    }

    #[test]
    fn small_z_ratio_is_bounded() {
        let s = PulseSequence::<f64>::udd(3);
        let mut prev = None;
        for e in 1..=8 {
            let z = 10f64.powi(-e);
            let r = filter_value(&s, z).magnitude_squared / (z * z);
            if e <= 5 {
                // quadratic zero: ratio approaches a finite constant
                if let Some(p) = prev {
                    assert!((r - p) / p < 0.1, "ratio drifting: {p} -> {r}");
                }
                prev = Some(r);
            }
            assert!(r.is_finite());
        }
        let lim = magnitude_squared_over_z_squared(&s, 0.0);
        assert!((lim - prev.unwrap()).abs() < 1e-3 * lim.abs().max(1e-30));
    }

    #[test]
    fn reversal_leaves_magnitude_invariant() {
        let s = seq(&[0.13, 0.4, 0.77]);
        let r = s.reversed();
        for k in 0..100 {
            let z = 0.23 * k as f64;
            let a = filter_value(&s, z).magnitude_squared;
            let b = filter_value(&r, z).magnitude_squared;
            let scale: f64 = a.max(b).max(1.0);
            assert!((a - b).abs() <= 1e-12 * scale, "z={z}: {a} vs {b}");
        }
    }

    #[test]
    fn generic_over_f32() {
        let s = PulseSequence::<f32>::udd(2);
        let fv = filter_value(&s, 1.0f32);
        let sf = magnitude_squared_sumform(&s, 1.0f32);
        assert!((fv.magnitude_squared - sf).abs() < 1e-4);
    }
}
