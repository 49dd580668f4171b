// Copyright 2026 ddopt contributors
// SPDX-License-Identifier: Apache-2.0

//! Scalar abstraction: all numeric kernels are generic over [`Real`].

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar usable by every kernel in this crate.
///
/// Implemented by `f32` and `f64`. Tolerances and rule tables are stated
/// as `f64` literals and converted through [`Real::of`].
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// Conversion from an `f64` constant. Panics only on values outside the
    /// target type's range, which never happens for the literals used here.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant not representable in scalar type")
    }

    #[inline]
    fn lossy_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converts_constants_for_both_widths() {
        assert_eq!(f64::of(0.25), 0.25);
        assert_eq!(f32::of(0.25), 0.25f32);
        assert_eq!(1.5f64.lossy_f64(), 1.5);
    }
}
