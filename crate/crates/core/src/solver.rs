// Copyright 2026 ddopt contributors
// SPDX-License-Identifier: Apache-2.0

//! Optimized (HLODD) sequences: damped Newton iteration on the stationarity
//! system, continuation in the dimensionless cutoff, local-minimum
//! verification, and a never-worse-than-UDD guarantee.
//!
//! The stationarity system is the closed-form gradient of the objective;
//! its zeros are candidate optimal pulse configurations. The landscape is
//! oscillatory at large `z_c`, so every solve starts at a small cutoff
//! (where UDD is nearly stationary) and tracks the solution branch upward,
//! warm-starting each step from the last.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::linalg;
use crate::objective::{self, Method, ObjectiveError, ObjectiveReport};
use crate::real::Real;
use crate::sequence::{PulseSequence, MIN_SEPARATION};

/// Saddle-escape restarts and their perturbation magnitude.
const ESCAPE_RESTARTS: usize = 8;
const ESCAPE_MAGNITUDE: f64 = 0.05;
/// Central-difference step for the verification Hessian.
const HESSIAN_STEP: f64 = 1e-5;
/// Probe count factor and magnitude for the verification perturbations.
const PROBE_MAGNITUDE: f64 = 1e-3;
/// Step damping underflow threshold; below this the solve aborts.
const MIN_DAMPING: f64 = 1e-12;
/// Extra Newton steps allowed after the residual tolerance is met, as long
/// as each keeps shrinking the residual strongly.
const POLISH_STEPS: usize = 8;
const POLISH_FACTOR: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a stationary point: residual max-norm {residual_norm:e} exceeds tolerance {tol:e}")]
    NotStationary { residual_norm: f64, tol: f64 },
}

/// Solver knobs. `continuation_steps = None` derives the step count from
/// the target cutoff (`ceil(z_c)`, capped at 64).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<R> {
    /// Max-norm target on the stationarity residual.
    pub residual_tol: R,
    /// Newton iteration cap per continuation step.
    pub max_iters: usize,
    /// Initial step-damping factor in (0, 1].
    pub damping: R,
    /// Cutoff at which continuation begins (clamped to the target).
    pub continuation_start: R,
    /// Number of continuation steps; `None` for the automatic schedule.
    pub continuation_steps: Option<usize>,
    /// Seed for the verification probes and saddle-escape restarts.
    pub seed: u64,
}

impl<R: Real> Default for SolverConfig<R> {
    fn default() -> Self {
        Self {
            residual_tol: R::of(1e-10),
            max_iters: 200,
            damping: R::one(),
            continuation_start: R::one(),
            continuation_steps: None,
            seed: 0x0dd0,
        }
    }
}

impl<R: Real> SolverConfig<R> {
    fn validate(&self) -> Result<(), SolverError> {
        if !(self.residual_tol > R::zero()) {
            return Err(SolverError::InvalidInput(format!(
                "residual_tol must be positive, got {}",
                self.residual_tol
            )));
        }
        if self.max_iters == 0 {
            return Err(SolverError::InvalidInput("max_iters must be positive".into()));
        }
        if !(self.damping > R::zero() && self.damping <= R::one()) {
            return Err(SolverError::InvalidInput(format!(
                "damping must be in (0, 1], got {}",
                self.damping
            )));
        }
        if self.continuation_steps == Some(0) {
            return Err(SolverError::InvalidInput(
                "continuation_steps must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of the local-minimum verification.
#[derive(Debug, Clone)]
pub struct MinimumCheck<R> {
    pub is_minimum: bool,
    /// Extremes of the finite-difference Hessian spectrum.
    pub eigenvalue_min: R,
    pub eigenvalue_max: R,
    /// Objective at the candidate.
    pub candidate_value: R,
    /// Objective at each random feasible probe (2n entries).
    pub probe_values: Vec<R>,
    /// Seed of the probe generator.
    pub seed: u64,
    /// Failure explanation when `is_minimum` is false.
    pub reason: Option<String>,
}

/// Per-solve diagnostics.
#[derive(Debug, Clone)]
pub struct SolveDiagnostics<R> {
    pub seed: u64,
    /// Saddle-escape restarts attempted.
    pub restarts: usize,
    /// Continuation intervals bisected after a failed step.
    pub bisections: usize,
    /// Result was replaced by UDD because the iterate was worse.
    pub fallback_to_udd: bool,
    /// Verification of the returned sequence, when it ran.
    pub minimum_check: Option<MinimumCheck<R>>,
}

/// A solve result; `converged` refers to the residual tolerance at the
/// target cutoff, `minimum_verified` to the second-order check.
#[derive(Debug, Clone)]
pub struct OptimizationResult<R> {
    pub sequence: PulseSequence<R>,
    pub z_c: R,
    pub objective: ObjectiveReport<R>,
    pub residual_norm: R,
    pub converged: bool,
    pub iterations: usize,
    /// Accepted continuation snapshots `(z_c, sequence)`.
    pub path: Vec<(R, PulseSequence<R>)>,
    pub minimum_verified: bool,
    pub diagnostics: SolveDiagnostics<R>,
}

#[derive(Serialize)]
struct PathEntry<'a, R> {
    z_c: R,
    deltas: &'a [R],
}

impl<R: Real + Serialize> Serialize for OptimizationResult<R> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("OptimizationResult", 9)?;
        st.serialize_field("n", &self.sequence.pulse_count())?;
        st.serialize_field("z_c", &self.z_c)?;
        st.serialize_field("deltas", self.sequence.interior())?;
        st.serialize_field("I_value", &self.objective.value)?;
        st.serialize_field("residual_norm", &self.residual_norm)?;
        st.serialize_field("converged", &self.converged)?;
        st.serialize_field("minimum_verified", &self.minimum_verified)?;
        st.serialize_field("iterations", &self.iterations)?;
        let path: Vec<PathEntry<'_, R>> = self
            .path
            .iter()
            .map(|(z, s)| PathEntry {
                z_c: *z,
                deltas: s.interior(),
            })
            .collect();
        st.serialize_field("continuation_path", &path)?;
        st.end()
    }
}

/// Left-hand side of the stationarity system, one entry per pulse.
///
/// Identical to [`objective::gradient`] by construction; the two names are
/// the same implementation.
pub fn stationarity_residual<R: Real>(seq: &PulseSequence<R>, z_c: R) -> Vec<R> {
    objective::gradient(seq, z_c)
}

/// Strictly increasing cutoff schedule ending exactly at the target.
pub fn continuation_schedule<R: Real>(z_c_target: R, config: &SolverConfig<R>) -> Vec<R> {
    let start = config.continuation_start.min(z_c_target);
    let steps = config
        .continuation_steps
        .unwrap_or_else(|| (z_c_target.ceil().lossy_f64() as usize).clamp(1, 64));
    if steps <= 1 || start >= z_c_target {
        return vec![z_c_target];
    }
    let span = z_c_target - start;
    let denom = R::of((steps - 1) as f64);
    let mut schedule: Vec<R> = (0..steps)
        .map(|k| start + span * R::of(k as f64) / denom)
        .collect();
    *schedule.last_mut().expect("nonempty") = z_c_target;
    schedule
}

fn max_norm<R: Real>(v: &[R]) -> R {
    v.iter().fold(R::zero(), |acc, x| acc.max(x.abs()))
}

fn feasible_full<R: Real>(full: &[R]) -> bool {
    let min_gap = R::of(MIN_SEPARATION);
    full.windows(2).all(|w| w[1] - w[0] >= min_gap)
}

/// Largest step factor along `dx` keeping every gap at or above the
/// minimum separation. `dx` covers interior entries only.
fn max_feasible_step<R: Real>(full: &[R], dx: &[R]) -> R {
    let n = dx.len();
    let min_gap = R::of(MIN_SEPARATION);
    let mut alpha = R::infinity();
    for k in 0..=n {
        let dleft = if k == 0 { R::zero() } else { dx[k - 1] };
        let dright = if k == n { R::zero() } else { dx[k] };
        let dgap = dright - dleft;
        if dgap < R::zero() {
            let room = (full[k + 1] - full[k]) - min_gap;
            alpha = alpha.min(room.max(R::zero()) / -dgap);
        }
    }
    alpha
}

/// Jacobian of the stationarity residual, assembled analytically.
fn jacobian_into<R: Real>(full: &[R], z_c: R, out: &mut [R]) {
    let n = full.len() - 2;
    debug_assert_eq!(out.len(), n * n);
    for m in 1..=n {
        let mut diag = R::zero();
        for i in 0..=n + 1 {
            if i == m {
                continue;
            }
            let magnitude = if i == 0 || i == n + 1 { 4.0 } else { 8.0 };
            let c = if (m + i) % 2 == 0 {
                R::of(magnitude)
            } else {
                R::of(-magnitude)
            };
            let gp = objective::pair_g_prime(full[m] - full[i], z_c);
            diag += c * gp;
            if (1..=n).contains(&i) {
                out[(m - 1) * n + (i - 1)] = -c * gp;
            }
        }
        out[(m - 1) * n + (m - 1)] = diag;
    }
}

struct NewtonOutcome<R> {
    residual_norm: R,
    iterations: usize,
    converged: bool,
}

/// Damped Newton on the stationarity system at fixed `z_c`, operating on an
/// extended delta vector in place.
///
/// Steps are clipped to 90% of the distance to the feasibility boundary and
/// halved until the residual max-norm strictly decreases; if damping
/// underflows the iteration aborts. After the tolerance is met a few extra
/// steps are taken while they still shrink the residual by at least 5x, so
/// flat landscapes are resolved well below the nominal tolerance.
fn newton_polish<R: Real>(full: &mut [R], z_c: R, config: &SolverConfig<R>) -> NewtonOutcome<R> {
    let n = full.len() - 2;
    let mut res = vec![R::zero(); n];
    objective::grad_into(full, z_c, &mut res);
    let mut rn = max_norm(&res);
    let mut jac = vec![R::zero(); n * n];
    let mut rhs = vec![R::zero(); n];
    let mut trial = vec![R::zero(); full.len()];
    let mut trial_res = vec![R::zero(); n];
    let mut polish_left = POLISH_STEPS;
    let mut iterations = 0usize;
    let min_alpha = R::of(MIN_DAMPING);

    for _ in 0..config.max_iters {
        let at_tol = rn <= config.residual_tol;
        if at_tol && polish_left == 0 {
            return NewtonOutcome { residual_norm: rn, iterations, converged: true };
        }
        jacobian_into(full, z_c, &mut jac);
        for (r, s) in rhs.iter_mut().zip(&res) {
            *r = -*s;
        }
        if !linalg::solve_linear(n, &mut jac, &mut rhs) {
            return NewtonOutcome { residual_norm: rn, iterations, converged: at_tol };
        }
        let mut alpha = config.damping.min(R::of(0.9) * max_feasible_step(full, &rhs));
        let mut accepted = false;
        while alpha >= min_alpha {
            trial.copy_from_slice(full);
            for k in 0..n {
                trial[k + 1] = full[k + 1] + alpha * rhs[k];
            }
            if feasible_full(&trial) {
                objective::grad_into(&trial, z_c, &mut trial_res);
                let trial_rn = max_norm(&trial_res);
                if trial_rn < rn {
                    full.copy_from_slice(&trial);
                    res.copy_from_slice(&trial_res);
                    iterations += 1;
                    if at_tol {
                        if trial_rn > R::of(POLISH_FACTOR) * rn {
                            // diminishing returns; stop polishing
                            return NewtonOutcome {
                                residual_norm: trial_rn,
                                iterations,
                                converged: true,
                            };
                        }
                        polish_left -= 1;
                    }
                    rn = trial_rn;
                    accepted = true;
                    break;
                }
            }
            alpha = alpha * R::of(0.5);
        }
        if !accepted {
            // damping underflow
            return NewtonOutcome { residual_norm: rn, iterations, converged: at_tol };
        }
    }
    NewtonOutcome {
        residual_norm: rn,
        iterations,
        converged: rn <= config.residual_tol,
    }
}

struct ContinuationRun<R> {
    interior: Vec<R>,
    residual_norm: R,
    iterations: usize,
    converged: bool,
    path: Vec<(R, PulseSequence<R>)>,
    bisections: usize,
}

/// Tracks the solution branch along the continuation schedule. A failed
/// step is retried at the midpoint of its interval (bounded number of
/// times); if the interval cannot be refined further the iterate is pushed
/// forward regardless, so the final step still gets its best shot.
fn run_continuation<R: Real>(start: &[R], z_c: R, config: &SolverConfig<R>) -> ContinuationRun<R> {
    let mut schedule = continuation_schedule(z_c, config);
    let mut full = Vec::with_capacity(start.len() + 2);
    full.push(R::zero());
    full.extend_from_slice(start);
    full.push(R::one());

    let mut path = Vec::new();
    let mut iterations = 0usize;
    let mut bisections = 0usize;
    let mut z_prev: Option<R> = None;
    let mut outcome = NewtonOutcome {
        residual_norm: R::infinity(),
        iterations: 0,
        converged: false,
    };
    let mut i = 0usize;
    while i < schedule.len() {
        let z = schedule[i];
        let mut attempt = full.clone();
        let out = newton_polish(&mut attempt, z, config);
        iterations += out.iterations;
        let refinable = match z_prev {
            Some(zp) => (z - zp) > R::of(1e-6) * z_c.max(R::one()) && bisections < 32,
            None => false,
        };
        if !out.converged && refinable {
            let mid = R::of(0.5) * (z_prev.expect("checked") + z);
            log::debug!("continuation step z={z:?} failed; bisecting at {mid:?}");
            schedule.insert(i, mid);
            bisections += 1;
            continue;
        }
        log::debug!(
            "continuation z={:?}: residual {:?} after {} iterations (converged {})",
            z,
            out.residual_norm,
            out.iterations,
            out.converged
        );
        full = attempt;
        let interior = full[1..full.len() - 1].to_vec();
        path.push((z, PulseSequence::from_sorted_unchecked(interior)));
        z_prev = Some(z);
        outcome = out;
        i += 1;
    }
    ContinuationRun {
        interior: full[1..full.len() - 1].to_vec(),
        residual_norm: outcome.residual_norm,
        iterations,
        converged: outcome.converged,
        path,
        bisections,
    }
}

/// Random feasible perturbation of a sequence: one uniform draw per pulse,
/// scaled down by halves until the result is a valid sequence. The all-zero
/// scale is reached before the scale underflows, so this always terminates.
fn perturbed<R: Real, G: Rng>(seq: &PulseSequence<R>, magnitude: f64, rng: &mut G) -> Vec<R> {
    let n = seq.pulse_count();
    let direction: Vec<R> = (0..n).map(|_| R::of(rng.random_range(-1.0..1.0))).collect();
    let mut scale = R::of(magnitude);
    loop {
        let trial: Vec<R> = seq
            .interior()
            .iter()
            .zip(&direction)
            .map(|(&d, &u)| d + scale * u)
            .collect();
        let mut full = Vec::with_capacity(n + 2);
        full.push(R::zero());
        full.extend_from_slice(&trial);
        full.push(R::one());
        if feasible_full(&full) {
            return trial;
        }
        scale = scale * R::of(0.5);
        if scale < R::epsilon() {
            return seq.to_vec();
        }
    }
}

/// Objective report that survives quadrature-tolerance failures by keeping
/// the best estimate; used for solver bookkeeping, never for tests.
fn objective_report_lenient<R: Real>(seq: &PulseSequence<R>, z_c: R) -> ObjectiveReport<R> {
    match objective::i_quadrature(seq, z_c) {
        Ok(report) => report,
        Err(ObjectiveError::QuadratureFailure {
            value,
            error_estimate,
            ..
        }) => ObjectiveReport {
            value: R::of(value),
            gradient: None,
            method: Method::Quadrature,
            error_estimate: R::of(error_estimate),
        },
        Err(_) => ObjectiveReport {
            value: R::infinity(),
            gradient: None,
            method: Method::Quadrature,
            error_estimate: R::infinity(),
        },
    }
}

/// Second-order check at a stationary point: the finite-difference Hessian
/// of the objective (central differences of the analytic gradient) must
/// have no eigenvalue below `-1e-8 * lambda_max`, and random feasible
/// probes of magnitude 1e-3 must not find a lower objective.
///
/// Errors if the point is not stationary to `config.residual_tol`.
pub fn verify_minimum<R: Real>(
    seq: &PulseSequence<R>,
    z_c: R,
    config: &SolverConfig<R>,
) -> Result<MinimumCheck<R>, SolverError> {
    config.validate()?;
    verify_minimum_impl(seq, z_c, config.residual_tol, config.seed)
}

fn verify_minimum_impl<R: Real>(
    seq: &PulseSequence<R>,
    z_c: R,
    tol: R,
    seed: u64,
) -> Result<MinimumCheck<R>, SolverError> {
    let n = seq.pulse_count();
    let residual = objective::gradient(seq, z_c);
    let rn = max_norm(&residual);
    if rn > tol {
        return Err(SolverError::NotStationary {
            residual_norm: rn.lossy_f64(),
            tol: tol.lossy_f64(),
        });
    }

    let mut check = MinimumCheck {
        is_minimum: false,
        eigenvalue_min: R::nan(),
        eigenvalue_max: R::nan(),
        candidate_value: R::nan(),
        probe_values: Vec::new(),
        seed,
        reason: None,
    };

    // Hessian by central differences of the analytic gradient.
    let h = R::of(HESSIAN_STEP);
    let full = seq.extended();
    let mut hess = vec![R::zero(); n * n];
    let mut gp = vec![R::zero(); n];
    let mut gm = vec![R::zero(); n];
    for k in 0..n {
        let mut fp = full.clone();
        let mut fm = full.clone();
        fp[k + 1] += h;
        fm[k + 1] -= h;
        objective::grad_into(&fp, z_c, &mut gp);
        objective::grad_into(&fm, z_c, &mut gm);
        for r in 0..n {
            hess[r * n + k] = (gp[r] - gm[r]) / (R::of(2.0) * h);
        }
    }
    for r in 0..n {
        for k in (r + 1)..n {
            let avg = R::of(0.5) * (hess[r * n + k] + hess[k * n + r]);
            hess[r * n + k] = avg;
            hess[k * n + r] = avg;
        }
    }
    let Some(eigs) = linalg::symmetric_eigenvalues(n, &hess) else {
        check.reason = Some("Hessian evaluation produced non-finite entries".into());
        return Ok(check);
    };
    check.eigenvalue_min = eigs[0];
    check.eigenvalue_max = eigs[n - 1];
    let eig_ok = eigs[0] > -R::of(1e-8) * eigs[n - 1];

    // Random feasible probes must not undercut the candidate.
    let candidate = match objective::i_quadrature(seq, z_c) {
        Ok(report) => report.value,
        Err(err) => {
            check.reason = Some(format!("objective evaluation failed: {err}"));
            return Ok(check);
        }
    };
    check.candidate_value = candidate;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probe_ok = true;
    for _ in 0..2 * n {
        let probe = PulseSequence::from_sorted_unchecked(perturbed(seq, PROBE_MAGNITUDE, &mut rng));
        let value = match objective::i_quadrature(&probe, z_c) {
            Ok(report) => report.value,
            Err(err) => {
                check.reason = Some(format!("probe evaluation failed: {err}"));
                return Ok(check);
            }
        };
        if value < candidate - R::of(1e-12) {
            probe_ok = false;
        }
        check.probe_values.push(value);
    }

    check.is_minimum = eig_ok && probe_ok;
    if !eig_ok {
        check.reason = Some(format!(
            "negative curvature: lambda_min = {:?} vs lambda_max = {:?}",
            eigs[0],
            eigs[n - 1]
        ));
    } else if !probe_ok {
        check.reason = Some("a feasible probe found a lower objective".into());
    }
    Ok(check)
}

/// Solves the stationarity system for `n` pulses at dimensionless cutoff
/// `z_c`, warm-starting from UDD.
///
/// The returned sequence never has a larger objective than `udd(n)`: if the
/// iteration lands somewhere worse, UDD itself is returned with
/// `converged = false`.
pub fn solve_hlodd<R: Real>(
    n: usize,
    z_c: R,
    config: &SolverConfig<R>,
) -> Result<OptimizationResult<R>, SolverError> {
    if n == 0 {
        return Err(SolverError::InvalidInput(
            "n must be at least 1; the empty sequence has nothing to optimize".into(),
        ));
    }
    solve_from_start(&PulseSequence::udd(n), z_c, config)
}

/// Same as [`solve_hlodd`] but warm-started from a caller-provided
/// sequence (the first continuation step begins there).
pub fn solve_from_start<R: Real>(
    start: &PulseSequence<R>,
    z_c: R,
    config: &SolverConfig<R>,
) -> Result<OptimizationResult<R>, SolverError> {
    config.validate()?;
    if start.pulse_count() == 0 {
        return Err(SolverError::InvalidInput("warm start must contain pulses".into()));
    }
    if !(z_c > R::zero()) || !z_c.is_finite() {
        return Err(SolverError::InvalidInput(format!(
            "z_c must be positive and finite, got {z_c}"
        )));
    }
    let n = start.pulse_count();

    let mut run = run_continuation(start.interior(), z_c, config);
    let mut iterations = run.iterations;
    let mut restarts = 0usize;
    let mut minimum_check: Option<MinimumCheck<R>> = None;

    if run.converged {
        let seq = PulseSequence::from_sorted_unchecked(run.interior.clone());
        match verify_minimum_impl(&seq, z_c, config.residual_tol, config.seed) {
            Ok(check) if check.is_minimum => minimum_check = Some(check),
            Ok(check) => {
                log::info!(
                    "stationary point failed minimum verification ({}); restarting from perturbed starts",
                    check.reason.as_deref().unwrap_or("no reason recorded")
                );
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                let mut best: Option<(ContinuationRun<R>, MinimumCheck<R>)> = None;
                for _ in 0..ESCAPE_RESTARTS {
                    let alt_start = perturbed(start, ESCAPE_MAGNITUDE, &mut rng);
                    let alt = run_continuation(&alt_start, z_c, config);
                    iterations += alt.iterations;
                    restarts += 1;
                    if !alt.converged {
                        continue;
                    }
                    let alt_seq = PulseSequence::from_sorted_unchecked(alt.interior.clone());
                    let Ok(alt_check) = verify_minimum_impl(&alt_seq, z_c, config.residual_tol, config.seed)
                    else {
                        continue;
                    };
                    if !alt_check.is_minimum {
                        continue;
                    }
                    let better = match &best {
                        None => true,
                        Some((_, incumbent)) => alt_check.candidate_value < incumbent.candidate_value,
                    };
                    if better {
                        best = Some((alt, alt_check));
                    }
                }
                match best {
                    Some((alt, alt_check)) => {
                        run = alt;
                        minimum_check = Some(alt_check);
                    }
                    None => minimum_check = Some(check),
                }
            }
            Err(_) => {}
        }
    }

    let minimum_verified = minimum_check.as_ref().map(|c| c.is_minimum).unwrap_or(false);
    let sequence = PulseSequence::from_sorted_unchecked(run.interior.clone());
    let mut objective_report = objective_report_lenient(&sequence, z_c);

    // Fallback guarantee: never return anything worse than UDD.
    let udd = PulseSequence::udd(n);
    let mut fallback = false;
    if sequence != udd {
        let udd_report = objective_report_lenient(&udd, z_c);
        if !(objective_report.value <= udd_report.value) {
            log::info!(
                "iterate objective {:?} exceeds UDD objective {:?}; falling back to UDD",
                objective_report.value,
                udd_report.value
            );
            fallback = true;
            let residual = objective::gradient(&udd, z_c);
            let residual_norm = max_norm(&residual);
            let mut report = udd_report;
            report.gradient = Some(residual);
            return Ok(OptimizationResult {
                sequence: udd,
                z_c,
                objective: report,
                residual_norm,
                converged: false,
                iterations,
                path: run.path,
                minimum_verified: false,
                diagnostics: SolveDiagnostics {
                    seed: config.seed,
                    restarts,
                    bisections: run.bisections,
                    fallback_to_udd: fallback,
                    minimum_check: None,
                },
            });
        }
    }

    let residual = objective::gradient(&sequence, z_c);
    let residual_norm = max_norm(&residual);
    objective_report.gradient = Some(residual);
    Ok(OptimizationResult {
        sequence,
        z_c,
        objective: objective_report,
        residual_norm,
        converged: run.converged && residual_norm <= config.residual_tol,
        iterations,
        path: run.path,
        minimum_verified,
        diagnostics: SolveDiagnostics {
            seed: config.seed,
            restarts,
            bisections: run.bisections,
            fallback_to_udd: fallback,
            minimum_check,
        },
    })
}
