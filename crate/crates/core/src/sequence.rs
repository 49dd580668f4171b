// Copyright 2026 ddopt contributors
// SPDX-License-Identifier: Apache-2.0

//! Pulse-timing sequences: validated fractional pulse times, UDD and PDD
//! baselines, and the indexed accessors used by the filter and objective
//! kernels.
//!
//! A sequence stores the `n` interior fractions `delta_1 < ... < delta_n`,
//! all in the open interval (0, 1). The boundary entries `delta_0 = 0` and
//! `delta_{n+1} = 1` are not free variables but are addressable through
//! [`PulseSequence::delta_at`] so that summations over `j = 0..n+1` read the
//! same way they are usually written.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::real::Real;

/// Minimum allowed gap between consecutive pulse times (boundaries included).
///
/// Below this, two adjacent pi pulses cancel physically and the
/// `1/(delta_m - delta_i)` factors of the stationarity system become
/// ill-conditioned; such input is rejected rather than merged.
pub const MIN_SEPARATION: f64 = 1e-9;

/// Validation failure for a pulse-time list.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SequenceError {
    /// `delta_{j+1} <= delta_j` for the reported 1-based pulse index `j`.
    #[error("pulse times not strictly increasing at pulse {index}")]
    NonMonotonic { index: usize },
    /// A pulse time lies outside the open interval (0, 1).
    #[error("pulse {index} at {value} is outside the open interval (0, 1)")]
    OutOfRange { index: usize, value: f64 },
    /// Gap between consecutive entries (boundaries included) is below
    /// [`MIN_SEPARATION`]. `index` is the left entry in 0..=n indexing.
    #[error("gap {gap:e} after entry {index} is below the minimum separation {MIN_SEPARATION:e}")]
    TooClose { index: usize, gap: f64 },
}

/// An ordered sequence of `n` instantaneous pi-pulse times, as fractions of
/// the total evolution time.
///
/// Immutable after construction; freely shareable across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence<R> {
    deltas: Vec<R>,
}

impl<R: Real> PulseSequence<R> {
    /// Validates and wraps a list of fractional pulse times.
    ///
    /// The input is never reordered: non-monotonic input is an error, not a
    /// hint. Checks run in the order range, monotonicity, separation.
    pub fn new(deltas: Vec<R>) -> Result<Self, SequenceError> {
        let lo = R::zero();
        let hi = R::one();
        for (k, &d) in deltas.iter().enumerate() {
            if !(d > lo && d < hi) {
                return Err(SequenceError::OutOfRange {
                    index: k + 1,
                    value: d.lossy_f64(),
                });
            }
        }
        for k in 1..deltas.len() {
            if deltas[k] <= deltas[k - 1] {
                return Err(SequenceError::NonMonotonic { index: k + 1 });
            }
        }
        let min_gap = R::of(MIN_SEPARATION);
        let n = deltas.len();
        for j in 0..=n {
            let left = if j == 0 { lo } else { deltas[j - 1] };
            let right = if j == n { hi } else { deltas[j] };
            let gap = right - left;
            if gap < min_gap {
                return Err(SequenceError::TooClose {
                    index: j,
                    gap: gap.lossy_f64(),
                });
            }
        }
        Ok(Self { deltas })
    }

    /// The free-evolution sequence (no pulses).
    pub fn empty() -> Self {
        Self { deltas: Vec::new() }
    }

    /// Uhrig sequence: `delta_j = sin^2(j pi / (2(n+1)))`.
    ///
    /// `n = 0` yields the empty sequence (free evolution) by convention.
    pub fn udd(n: usize) -> Self {
        let deltas = (1..=n)
            .map(|j| {
                let x = (j as f64 * std::f64::consts::PI / (2.0 * (n as f64 + 1.0))).sin();
                R::of(x * x)
            })
            .collect();
        Self { deltas }
    }

    /// Periodic (equidistant) sequence: `delta_j = j / (n+1)`.
    pub fn pdd(n: usize) -> Self {
        let deltas = (1..=n)
            .map(|j| R::of(j as f64 / (n as f64 + 1.0)))
            .collect();
        Self { deltas }
    }

    /// Time-reversed sequence: `delta'_j = 1 - delta_{n+1-j}`.
    ///
    /// Reflection preserves strict ordering exactly and gaps to within a few
    /// ulps, so the result is constructed without re-validation.
    pub fn reversed(&self) -> Self {
        let one = R::one();
        let deltas = self.deltas.iter().rev().map(|&d| one - d).collect();
        Self { deltas }
    }

    /// Internal constructor for deltas already known to be sorted and valid.
    pub(crate) fn from_sorted_unchecked(deltas: Vec<R>) -> Self {
        debug_assert!(deltas.windows(2).all(|w| w[0] < w[1]));
        Self { deltas }
    }

    /// Number of pulses `n`.
    pub fn pulse_count(&self) -> usize {
        self.deltas.len()
    }

    /// Interior pulse times `delta_1..delta_n`.
    pub fn interior(&self) -> &[R] {
        &self.deltas
    }

    /// Indexed access over the extended range `j = 0..=n+1`, with
    /// `delta_0 = 0` and `delta_{n+1} = 1`.
    ///
    /// Panics if `j > n+1`.
    pub fn delta_at(&self, j: usize) -> R {
        let n = self.deltas.len();
        if j == 0 {
            R::zero()
        } else if j <= n {
            self.deltas[j - 1]
        } else if j == n + 1 {
            R::one()
        } else {
            panic!("pulse index {j} out of range 0..={}", n + 1);
        }
    }

    /// Weight `q_j`: 0 on the boundary entries, 1 on real pulses.
    pub fn weight(&self, j: usize) -> u8 {
        let n = self.deltas.len();
        assert!(j <= n + 1, "pulse index {j} out of range 0..={}", n + 1);
        u8::from(j != 0 && j != n + 1)
    }

    /// Pairwise time difference `delta_i - delta_j` over the extended index
    /// range. (The paper's antisymmetric pair symbol is the imaginary unit
    /// times this quantity.)
    pub fn pair_delta(&self, i: usize, j: usize) -> R {
        self.delta_at(i) - self.delta_at(j)
    }

    /// Owned copy of the interior times.
    pub fn to_vec(&self) -> Vec<R> {
        self.deltas.clone()
    }

    /// Extended delta vector `[0, delta_1, ..., delta_n, 1]`.
    pub(crate) fn extended(&self) -> Vec<R> {
        let mut full = Vec::with_capacity(self.deltas.len() + 2);
        full.push(R::zero());
        full.extend_from_slice(&self.deltas);
        full.push(R::one());
        full
    }
}

/// Serializes as a bare JSON array of fractional times, e.g. `[0.25,0.75]`.
impl<R: Real + Serialize> Serialize for PulseSequence<R> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.deltas.serialize(serializer)
    }
}

/// Deserializes from a JSON array, running full validation.
impl<'de, R: Real + Deserialize<'de>> Deserialize<'de> for PulseSequence<R> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let deltas = Vec::<R>::deserialize(deserializer)?;
        Self::new(deltas).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_well_ordered_input() {
        let s = PulseSequence::<f64>::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(s.pulse_count(), 2);
        assert_eq!(s.interior(), &[0.25, 0.75]);
    }

    #[test]
    fn rejects_reversed_input() {
        let err = PulseSequence::<f64>::new(vec![0.75, 0.25]).unwrap_err();
        assert_eq!(err, SequenceError::NonMonotonic { index: 2 });
    }

    #[test]
    fn rejects_equal_pulses_as_non_monotonic() {
        let err = PulseSequence::<f64>::new(vec![0.3, 0.3]).unwrap_err();
        assert_eq!(err, SequenceError::NonMonotonic { index: 2 });
    }

    #[test]
    fn rejects_sub_separation_gap() {
        let err = PulseSequence::<f64>::new(vec![0.3, 0.3 + MIN_SEPARATION / 2.0]).unwrap_err();
        assert!(matches!(err, SequenceError::TooClose { index: 2, .. }));
    }

    #[test]
    fn rejects_out_of_range() {
        let err = PulseSequence::<f64>::new(vec![-0.1, 0.5]).unwrap_err();
        assert!(matches!(err, SequenceError::OutOfRange { index: 1, .. }));
        let err = PulseSequence::<f64>::new(vec![0.5, 1.0]).unwrap_err();
        assert!(matches!(err, SequenceError::OutOfRange { index: 2, .. }));
    }

    #[test]
    fn rejects_pulse_too_close_to_boundary() {
        let err = PulseSequence::<f64>::new(vec![1e-10]).unwrap_err();
        assert!(matches!(err, SequenceError::TooClose { index: 0, .. }));
    }

    #[test]
    fn udd_matches_closed_form() {
        let s = PulseSequence::<f64>::udd(1);
        assert!((s.interior()[0] - 0.5).abs() < 1e-15);

        let s = PulseSequence::<f64>::udd(2);
        assert!((s.interior()[0] - 0.25).abs() < 1e-15);
        assert!((s.interior()[1] - 0.75).abs() < 1e-15);

        let s = PulseSequence::<f64>::udd(3);
        let expect = [0.14644660940672624, 0.5, 0.8535533905932737];
        for (a, b) in s.interior().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn udd_zero_is_free_evolution() {
        let s = PulseSequence::<f64>::udd(0);
        assert_eq!(s.pulse_count(), 0);
        assert_eq!(s.delta_at(0), 0.0);
        assert_eq!(s.delta_at(1), 1.0);
    }

    #[test]
    fn pdd_is_equidistant() {
        assert_eq!(PulseSequence::<f64>::pdd(1).interior(), &[0.5]);
        assert_eq!(PulseSequence::<f64>::pdd(3).interior(), &[0.25, 0.5, 0.75]);
        assert_eq!(PulseSequence::<f64>::pdd(4).interior(), &[0.2, 0.4, 0.6, 0.8]);
    }

    #[test]
    fn udd_satisfies_invariants_up_to_n_64() {
        for n in 1..=64 {
            let s = PulseSequence::<f64>::udd(n);
            PulseSequence::<f64>::new(s.to_vec()).unwrap();
        }
    }

    #[test]
    fn reverse_reflects_about_midpoint() {
        let s = PulseSequence::<f64>::new(vec![0.2, 0.6]).unwrap();
        let r = s.reversed();
        assert!((r.interior()[0] - 0.4).abs() < 1e-15);
        assert!((r.interior()[1] - 0.8).abs() < 1e-15);

        let s = PulseSequence::<f64>::new(vec![0.5]).unwrap();
        assert_eq!(s.reversed().interior(), &[0.5]);
    }

    #[test]
    fn udd_is_reflection_symmetric() {
        for n in 1..=12 {
            let s = PulseSequence::<f64>::udd(n);
            let r = s.reversed();
            for (a, b) in s.interior().iter().zip(r.interior()) {
                assert!((a - b).abs() < 1e-15, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn extended_indexing_and_weights() {
        let s = PulseSequence::<f64>::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(s.delta_at(0), 0.0);
        assert_eq!(s.delta_at(1), 0.25);
        assert_eq!(s.delta_at(3), 1.0);
        assert_eq!(s.weight(0), 0);
        assert_eq!(s.weight(1), 1);
        assert_eq!(s.weight(2), 1);
        assert_eq!(s.weight(3), 0);
        assert_eq!(s.pair_delta(2, 1), 0.5);
        assert_eq!(s.pair_delta(1, 2), -0.5);
        assert_eq!(s.pair_delta(1, 1), 0.0);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn delta_at_panics_past_boundary() {
        let s = PulseSequence::<f64>::new(vec![0.5]).unwrap();
        s.delta_at(3);
    }

    #[test]
    fn serializes_as_bare_array() {
        let s = PulseSequence::<f64>::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[0.25,0.75]");
        let back: PulseSequence<f64> = serde_json::from_str("[0.25,0.75]").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<PulseSequence<f64>>("[0.75,0.25]").is_err());
    }

    #[test]
    fn works_for_f32() {
        let s = PulseSequence::<f32>::udd(2);
        assert!((s.interior()[0] - 0.25).abs() < 1e-7);
    }
}
