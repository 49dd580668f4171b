// Copyright 2026 ddopt contributors
// SPDX-License-Identifier: Apache-2.0

//! Cosine-integral evaluation.
//!
//! `Cin(x) = integral_0^x (1 - cos u)/u du` is entire, even, and has the
//! everywhere-convergent series `sum_{m>=1} (-1)^{m+1} x^{2m} / ((2m)(2m)!)`.
//! The alternating series loses precision once its largest term dwarfs the
//! result, so for large arguments the identity
//! `Cin(x) = gamma + ln x - Ci(x)` is used instead, with `Ci` evaluated by a
//! Lentz continued fraction.

use num_complex::Complex;
use thiserror::Error;

use crate::real::Real;

/// Euler-Mascheroni constant, nearest `f64`.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Default argument threshold between the power series and the
/// `gamma + ln x - Ci(x)` route.
pub const DEFAULT_LARGE_ARG_SWITCH: f64 = 8.0;

/// Default maximum series index.
pub const DEFAULT_K_MAX: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("Cin power series did not converge within {k_max} terms at x = {x}")]
    SeriesTruncation { x: f64, k_max: usize },
    #[error("cosine-integral continued fraction stalled at x = {x}")]
    ContinuedFractionStall { x: f64 },
    #[error("Ci(x) requires x > 0, got {x}")]
    Domain { x: f64 },
}

/// Value plus a roundoff/truncation error bound.
#[derive(Debug, Clone, Copy)]
pub struct Eval<R> {
    pub value: R,
    pub error: R,
}

/// Entire cosine integral `Cin(x)` with default parameters.
pub fn cin<R: Real>(x: R) -> R {
    cin_with(x, DEFAULT_K_MAX, R::of(DEFAULT_LARGE_ARG_SWITCH), R::of(EULER_GAMMA))
        .expect("Cin with default parameters cannot fail")
        .value
}

/// `Cin(x)` with explicit series cap, branch switch, and gamma constant.
pub fn cin_with<R: Real>(
    x: R,
    k_max: usize,
    large_arg_switch: R,
    gamma: R,
) -> Result<Eval<R>, SpecialError> {
    let x = x.abs();
    if x <= large_arg_switch {
        cin_series(x, k_max)
    } else {
        let ci = ci_continued_fraction(x)?;
        let value = gamma + x.ln() - ci;
        let error = R::epsilon() * (gamma + x.ln().abs() + ci.abs() + value.abs());
        Ok(Eval { value, error })
    }
}

/// Cosine integral `Ci(x)` for `x > 0`.
pub fn ci<R: Real>(x: R) -> Result<R, SpecialError> {
    if x <= R::zero() {
        return Err(SpecialError::Domain { x: x.lossy_f64() });
    }
    if x <= R::of(DEFAULT_LARGE_ARG_SWITCH) {
        let series = cin_series(x, DEFAULT_K_MAX)?;
        Ok(R::of(EULER_GAMMA) + x.ln() - series.value)
    } else {
        ci_continued_fraction(x)
    }
}

/// Alternating power series; accurate for moderate `|x|`.
fn cin_series<R: Real>(x: R, k_max: usize) -> Result<Eval<R>, SpecialError> {
    if x == R::zero() {
        return Ok(Eval {
            value: R::zero(),
            error: R::zero(),
        });
    }
    let x2 = x * x;
    let mut acc = R::zero();
    // t_m = x^{2m} / (2m)!, starting at m = 1
    let mut t = x2 / R::of(2.0);
    let mut sign = R::one();
    for m in 1..=k_max {
        let two_m = R::of(2.0 * m as f64);
        let term = sign * t / two_m;
        acc += term;
        // next magnitude bounds the tail of an alternating series
        t = t * x2 / (two_m + R::one()) / (two_m + R::of(2.0));
        let next = t / (two_m + R::of(2.0));
        if next <= R::epsilon() * acc.abs() {
            return Ok(Eval {
                value: acc,
                error: next + R::epsilon() * acc.abs(),
            });
        }
        sign = -sign;
    }
    Err(SpecialError::SeriesTruncation {
        x: x.lossy_f64(),
        k_max,
    })
}

/// Lentz continued fraction for `Ci(x)`, reliable for `x >= 2`.
fn ci_continued_fraction<R: Real>(x: R) -> Result<R, SpecialError> {
    const MAX_ITERS: usize = 800;
    let one = Complex::new(R::one(), R::zero());
    let tiny = R::min_positive_value() / R::epsilon();
    let mut b = Complex::new(R::one(), x);
    let mut c = Complex::new(R::one() / tiny, R::zero());
    let mut d = one / b;
    let mut h = d;
    let mut converged = false;
    for i in 2..=MAX_ITERS {
        let a = -R::of(((i - 1) * (i - 1)) as f64);
        b = b + Complex::new(R::of(2.0), R::zero());
        d = one / (d * a + b);
        c = b + Complex::new(a, R::zero()) / c;
        let del = c * d;
        h = h * del;
        if (del.re - R::one()).abs() + del.im.abs() < R::epsilon() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SpecialError::ContinuedFractionStall { x: x.lossy_f64() });
    }
    h = h * Complex::new(x.cos(), -x.sin());
    Ok(-h.re)
}
