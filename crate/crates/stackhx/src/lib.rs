//! Steady-state model of a buoyancy-driven, two-tube, air-to-air heat
//! exchanger.
//!
//! Warm air rises through tube 1 and cold air sinks through tube 2, the two
//! exchanging heat across a conductive partition. The crate discretizes the
//! steady compressible flow equations with an upwind finite-difference
//! scheme, solves the resulting nonlinear system by Newton iteration with a
//! dense direct linear solve, and cross-checks the computed states against a
//! small-gravity asymptotic solution. On top of the solver sit the design
//! studies: mesh-refinement convergence ladders, parameter sweeps, and the
//! efficiency / relative-mass-flux crossing point that fixes the optimal
//! partition conductance.
//!
//! Everything is dimensionless inside the solver. Three parameters govern
//! the device (see [`DimensionlessParams`]): the interior/exterior
//! temperature ratio `t_int`, the gravity parameter `g` (device height over
//! the adiabatic-atmosphere thickness), and the partition conductance
//! `sigma`. [`PhysicalParams`] holds the dimensional inputs and
//! [`nondimensionalize`] maps them onto the triple.
//!
//! All operations are pure functions of their inputs; independent solves may
//! run concurrently without shared state.

pub mod asymptotic;
pub mod diagnostics;
pub mod discretization;
pub mod grid;
pub mod linalg;
pub mod newton;
pub mod physics;
pub mod rootfind;
pub mod state;
pub mod studies;

pub use asymptotic::{
    asymptotic_efficiency, compare_to_numeric, leading_profiles, solve_phi0, AffineProfile,
    AsymptoticComparison, AsymptoticError, AsymptoticSolution,
};
pub use diagnostics::{
    discrete_power_flux, efficiency, exit_kinetic_energy, power_flux_spread, power_per_mass,
    total_heat, Diagnostics, DiagnosticsError,
};
pub use discretization::{assemble_jacobian, assemble_residual, AssembleError, Residual, RowLayout};
pub use grid::{Grid, GridError};
pub use linalg::{solve_linear, LinSolveError, Matrix};
pub use newton::{default_initial_guess, newton_solve, newton_solve_with, NewtonOptions, SolveError, SolveReport};
pub use physics::{
    adiabatic_column_delta, ideal_gas, nondimensionalize, DimensionlessParams, ParamError,
    PhysicalParams,
};
pub use state::StateVector;
pub use studies::{
    convergence_study, coupled_sweep, find_crossing, sweep, Crossing, LadderDiff, LadderLevel,
    RefinementLadder, StudyError, StudyOptions, SweepParameter, SweepRecord, SweepResult,
};
