// Copyright 2026 ddopt contributors
// SPDX-License-Identifier: Apache-2.0

//! Minimal dense routines for the solver's small systems (n <= 64):
//! pivoted Gaussian elimination and Jacobi eigenvalues for symmetric
//! matrices. Matrices are row-major flat slices.

use crate::real::Real;

/// Solves `a x = b` in place; `b` holds the solution on success. Returns
/// `false` when a pivot degenerates (singular to working precision).
pub(crate) fn solve_linear<R: Real>(n: usize, a: &mut [R], b: &mut [R]) -> bool {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = a[col * n + col].abs();
        for row in (col + 1)..n {
            let mag = a[row * n + col].abs();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if !(pivot_mag > R::zero()) || !pivot_mag.is_finite() {
            return false;
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            b.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for row in (col + 1)..n {
            let factor = a[row * n + col] / pivot;
            if factor == R::zero() {
                continue;
            }
            a[row * n + col] = R::zero();
            for k in (col + 1)..n {
                let v = a[col * n + k];
                a[row * n + k] = a[row * n + k] - factor * v;
            }
            b[row] = b[row] - factor * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in (col + 1)..n {
            acc = acc - a[col * n + k] * b[k];
        }
        b[col] = acc / a[col * n + col];
        if !b[col].is_finite() {
            return false;
        }
    }
    true
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, ascending.
/// Returns `None` on non-finite input.
pub(crate) fn symmetric_eigenvalues<R: Real>(n: usize, matrix: &[R]) -> Option<Vec<R>> {
    debug_assert_eq!(matrix.len(), n * n);
    if matrix.iter().any(|v| !v.is_finite()) {
        return None;
    }
    if n == 1 {
        return Some(vec![matrix[0]]);
    }
    let mut m = matrix.to_vec();
    let scale = matrix.iter().fold(R::zero(), |acc, v| acc.max(v.abs()));
    let tol = R::epsilon() * R::epsilon() * scale * scale * R::of((n * n) as f64);
    for _sweep in 0..64 {
        let mut off = R::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off <= tol || off == R::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == R::zero() {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (R::of(2.0) * apq);
                let t = {
                    let s = if theta >= R::zero() { R::one() } else { -R::one() };
                    s / (theta.abs() + (theta * theta + R::one()).sqrt())
                };
                let c = R::one() / (t * t + R::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
            }
        }
    }
    let mut eigs: Vec<R> = (0..n).map(|k| m[k * n + k]).collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Some(eigs)
}
