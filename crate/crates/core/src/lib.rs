// Copyright 2026 ddopt contributors
// SPDX-License-Identifier: Apache-2.0

//! Design of dynamical-decoupling pulse sequences for a qubit dephasing in
//! an ohmic bath with a sharp UV cutoff.
//!
//! The crate evaluates the spectral filter function of a pulse sequence,
//! the resulting dephasing objective (by adaptive quadrature and by an
//! independent resummed series), its closed-form gradient, and solves the
//! stationarity system for optimized (HLODD) sequences with UDD warm starts
//! and continuation in the dimensionless cutoff `z_c = omega_c * t`.
//!
//! All numeric kernels are generic over the scalar type through [`Real`];
//! `f64` aliases for the main types sit at the crate root.

pub mod filter;
mod linalg;
pub mod objective;
pub mod quad;
pub mod real;
pub mod sequence;
pub mod solver;
pub mod special;

pub use filter::{dc_identity_check, filter_value, magnitude_squared_sumform, FilterValue};
pub use objective::{
    chi, gradient, i_quadrature, i_series, integrand, CutoffSpec, Method, ObjectiveError,
    ObjectiveReport, SeriesParams, SpectrumModel,
};
pub use real::Real;
pub use sequence::{PulseSequence, SequenceError, MIN_SEPARATION};
pub use solver::{
    continuation_schedule, solve_from_start, solve_hlodd, stationarity_residual, verify_minimum,
    MinimumCheck, OptimizationResult, SolveDiagnostics, SolverConfig, SolverError,
};

/// `f64` aliases for the workhorse precision.
pub type PulseSequence64 = sequence::PulseSequence<f64>;
pub type FilterValue64 = filter::FilterValue<f64>;
pub type ObjectiveReport64 = objective::ObjectiveReport<f64>;
pub type CutoffSpec64 = objective::CutoffSpec<f64>;
pub type SpectrumModel64 = objective::SpectrumModel<f64>;
pub type SeriesParams64 = objective::SeriesParams<f64>;
pub type SolverConfig64 = solver::SolverConfig<f64>;
pub type OptimizationResult64 = solver::OptimizationResult<f64>;
pub type MinimumCheck64 = solver::MinimumCheck<f64>;
