//! Newton iteration on the discrete system with a dense direct solve.

use thiserror::Error;

use crate::discretization::{assemble_jacobian_into, assemble_residual, AssembleError};
use crate::grid::Grid;
use crate::linalg::{solve_linear_in_place, LinSolveError, Matrix};
use crate::physics::DimensionlessParams;
use crate::state::StateVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Assemble(#[from] AssembleError),
    #[error("linear solve failed: {0}")]
    Linear(#[from] LinSolveError),
    #[error(
        "iteration {iteration}: step drives density/temperature non-positive \
         even after {halvings} damping halvings"
    )]
    StepRejected { iteration: usize, halvings: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Hard cap on Newton iterations; exceeding it yields a non-converged
    /// report rather than an error.
    pub max_iterations: usize,
    /// Stop once the residual max-norm or the step max-norm drops below
    /// this.
    pub tolerance: f64,
    /// How many times a step may be halved when the full step leaves the
    /// positive density/temperature region.
    pub max_step_halvings: u32,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            max_iterations: 50,
            tolerance: 1e-12,
            max_step_halvings: 10,
        }
    }
}

/// Outcome of a Newton run. `converged` holds exactly when the final
/// residual max-norm or final step max-norm is below the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub state: StateVector,
    pub iterations: usize,
    pub final_residual_norm: f64,
    pub final_step_norm: f64,
    pub converged: bool,
    /// Residual max-norm before each iteration plus after the last one;
    /// `residual_history[k]` is the norm at iterate `k`.
    pub residual_history: Vec<f64>,
}

/// The flat-profile initial guess: tube 1 at the interior rest state, tube 2
/// at the exterior rest state, unit interior pressure, and a half-unit mass
/// flux to break the rest-state symmetry.
pub fn default_initial_guess(params: &DimensionlessParams, grid: &Grid) -> StateVector {
    let n = grid.n();
    let mut s = StateVector::zeros(n);
    for j in 0..n {
        s.set_rho1(j, 1.0 / params.t_int);
        s.set_rho2(j, 1.0);
        s.set_t1(j, params.t_int);
        s.set_t2(j, 1.0);
    }
    s.set_phi(0.5);
    s.set_p_int(1.0);
    s
}

/// Newton iteration with default options. See [`newton_solve_with`].
pub fn newton_solve(
    params: &DimensionlessParams,
    grid: &Grid,
    guess: StateVector,
) -> Result<SolveReport, SolveError> {
    newton_solve_with(params, grid, guess, &NewtonOptions::default())
}

/// Runs damped Newton from `guess`: solve `J(x) d = -F(x)`, step `x += d`,
/// halving `d` while the trial iterate has a non-positive density or
/// temperature or a non-finite residual. Stops when either the residual or
/// the step max-norm drops below the tolerance.
///
/// # Errors
///
/// Fails on a guess outside the physical region, a singular Jacobian, or a
/// step that damping cannot rescue. Running out of iterations is reported
/// through `converged = false`, not an error.
pub fn newton_solve_with(
    params: &DimensionlessParams,
    grid: &Grid,
    guess: StateVector,
    options: &NewtonOptions,
) -> Result<SolveReport, SolveError> {
    let mut x = guess;
    let mut residual = assemble_residual(&x, params, grid)?.into_vec();
    let mut residual_norm = max_norm(&residual);
    let mut history = vec![residual_norm];
    let mut jacobian = Matrix::zeros(x.len());
    let mut step_norm = 0.0;

    for iteration in 1..=options.max_iterations {
        if residual_norm < options.tolerance {
            return Ok(SolveReport {
                state: x,
                iterations: iteration - 1,
                final_residual_norm: residual_norm,
                final_step_norm: step_norm,
                converged: true,
                residual_history: history,
            });
        }

        assemble_jacobian_into(&mut jacobian, &x, params, grid)?;
        let mut step: Vec<f64> = residual.iter().map(|v| -v).collect();
        solve_linear_in_place(&mut jacobian, &mut step)?;

        // Damping: halve the step until the trial iterate is physical.
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..=options.max_step_halvings {
            let mut trial = x.clone();
            for (t, d) in trial.as_mut_slice().iter_mut().zip(&step) {
                *t += scale * d;
            }
            if trial.first_non_positive().is_none() {
                if let Ok(f) = assemble_residual(&trial, params, grid) {
                    let f = f.into_vec();
                    if f.iter().all(|v| v.is_finite()) {
                        accepted = Some((trial, f));
                        break;
                    }
                }
            }
            scale *= 0.5;
        }
        let Some((trial, f)) = accepted else {
            return Err(SolveError::StepRejected {
                iteration,
                halvings: options.max_step_halvings,
            });
        };

        step_norm = scale * max_norm(&step);
        x = trial;
        residual = f;
        residual_norm = max_norm(&residual);
        history.push(residual_norm);

        if residual_norm < options.tolerance || step_norm < options.tolerance {
            return Ok(SolveReport {
                state: x,
                iterations: iteration,
                final_residual_norm: residual_norm,
                final_step_norm: step_norm,
                converged: true,
                residual_history: history,
            });
        }
    }

    Ok(SolveReport {
        state: x,
        iterations: options.max_iterations,
        final_residual_norm: residual_norm,
        final_step_norm: step_norm,
        converged: false,
        residual_history: history,
    })
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
