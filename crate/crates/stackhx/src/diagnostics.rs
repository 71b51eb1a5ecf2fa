//! Scalar diagnostics of a converged state: exchanged heat, efficiency,
//! power per unit mass of fresh air, and the node-wise power flux.

use thiserror::Error;

use crate::grid::Grid;
use crate::physics::DimensionlessParams;
use crate::state::StateVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error("temperature profiles have lengths {t1_len} and {t2_len}, grid has {grid_n} nodes")]
    ProfileLengthMismatch {
        t1_len: usize,
        t2_len: usize,
        grid_n: usize,
    },
    #[error("mass flux must be positive, got {phi}")]
    NonPositiveMassFlux { phi: f64 },
    #[error("efficiency denominator (7/2)(t_int - 1) - g = {value} is not positive")]
    NonPositiveDenominator { value: f64 },
}

/// Scalar summary of a converged solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// Mass flux per unit area.
    pub phi: f64,
    /// Interior pressure.
    pub p_int: f64,
    /// Heat exchanged across the partition, `sigma * integral of (t1 - t2)`.
    pub q_total: f64,
    /// Fraction of the no-exchange heating power recovered by the exchanger.
    pub efficiency: f64,
    /// Heating power per unit mass flux of fresh air.
    pub power_per_mass: f64,
    /// Mass flux relative to the insulating-partition flux at the same
    /// `t_int` and `g`; requires a companion `sigma = 0` solve, so it is
    /// only present when the caller supplied one.
    pub phi_rel: Option<f64>,
}

impl Diagnostics {
    /// Computes all scalars derivable from a single converged state.
    pub fn compute(
        state: &StateVector,
        params: &DimensionlessParams,
        grid: &Grid,
    ) -> Result<Self, DiagnosticsError> {
        let q_total = total_heat(state.t1_slice(), state.t2_slice(), params.sigma, grid)?;
        let phi = state.phi();
        let e = efficiency(q_total, phi, params)?;
        let p = power_per_mass(q_total, phi, params)?;
        Ok(Diagnostics {
            phi,
            p_int: state.p_int(),
            q_total,
            efficiency: e,
            power_per_mass: p,
            phi_rel: None,
        })
    }

    /// Attaches the relative mass flux given the companion insulated flux.
    pub fn with_phi_rel(mut self, phi_insulated: f64) -> Self {
        self.phi_rel = Some(self.phi / phi_insulated);
        self
    }
}

/// Composite-trapezoid approximation of `sigma * ∫ (t1 - t2) dz` over [0, 1].
///
/// Exact for a constant gap, second order otherwise, matching the scheme.
pub fn total_heat(
    t1: &[f64],
    t2: &[f64],
    sigma: f64,
    grid: &Grid,
) -> Result<f64, DiagnosticsError> {
    let n = grid.n();
    if t1.len() != n || t2.len() != n {
        return Err(DiagnosticsError::ProfileLengthMismatch {
            t1_len: t1.len(),
            t2_len: t2.len(),
            grid_n: n,
        });
    }
    let mut sum = 0.5 * ((t1[0] - t2[0]) + (t1[n - 1] - t2[n - 1]));
    for j in 1..n - 1 {
        sum += t1[j] - t2[j];
    }
    Ok(sigma * grid.dz() * sum)
}

/// Heat-exchanger efficiency `E = (Q/phi) / ((7/2)(t_int - 1) - g)`.
///
/// # Errors
///
/// Rejects `phi <= 0` and a non-positive denominator.
pub fn efficiency(
    q_total: f64,
    phi: f64,
    params: &DimensionlessParams,
) -> Result<f64, DiagnosticsError> {
    if !(phi > 0.0) {
        return Err(DiagnosticsError::NonPositiveMassFlux { phi });
    }
    let denom = params.baseline_power_per_mass();
    if !(denom > 0.0) {
        return Err(DiagnosticsError::NonPositiveDenominator { value: denom });
    }
    Ok((q_total / phi) / denom)
}

/// Heating power per unit mass flux, `(7/2)(t_int - 1) - g - Q/phi`.
pub fn power_per_mass(
    q_total: f64,
    phi: f64,
    params: &DimensionlessParams,
) -> Result<f64, DiagnosticsError> {
    if !(phi > 0.0) {
        return Err(DiagnosticsError::NonPositiveMassFlux { phi });
    }
    Ok(params.baseline_power_per_mass() - q_total / phi)
}

/// Energy flux through the plane of node `j`, summed over both tubes:
/// `sum_i phi_i ((7/2) t_i + u_i^2 / 2)` with `phi_1 = phi`, `phi_2 = -phi`.
///
/// Constant in `j` up to discretization error on a converged state.
pub fn discrete_power_flux(state: &StateVector, j: usize) -> f64 {
    let phi = state.phi();
    phi * (state.bernoulli1(j) - state.bernoulli2(j))
}

/// Mean node-wise power flux and the largest absolute deviation from it.
pub fn power_flux_spread(state: &StateVector) -> (f64, f64) {
    let n = state.n();
    let fluxes: Vec<f64> = (0..n).map(|j| discrete_power_flux(state, j)).collect();
    let mean = fluxes.iter().sum::<f64>() / n as f64;
    let spread = fluxes
        .iter()
        .map(|p| (p - mean).abs())
        .fold(0.0, f64::max);
    (mean, spread)
}

/// Kinetic energy per unit mass discarded at each tube's exit,
/// `(u_exit^2 / 2)` for tube 1 (top) and tube 2 (bottom). Positive whenever
/// air flows, which is what makes the outflow condition dissipative.
pub fn exit_kinetic_energy(state: &StateVector) -> (f64, f64) {
    let n = state.n();
    (
        0.5 * state.velocity1(n - 1).powi(2),
        0.5 * state.velocity2(0).powi(2),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::newton::{default_initial_guess, newton_solve};

    fn profile(n: usize, f: impl Fn(f64) -> f64, grid: &Grid) -> Vec<f64> {
        (0..n).map(|j| f(grid.z(j))).collect()
    }

    #[test]
    fn trapezoid_is_exact_on_constant_gaps() {
        let grid = Grid::new(17).unwrap();
        let t1 = profile(17, |z| 1.3 + 0.2 * z, &grid);
        let t2 = profile(17, |z| 1.05 + 0.2 * z, &grid);
        let q = total_heat(&t1, &t2, 0.004, &grid).unwrap();
        assert!((q - 0.004 * 0.25).abs() < 1e-17);
        // Identical profiles exchange nothing.
        let q0 = total_heat(&t1, &t1, 0.004, &grid).unwrap();
        assert_eq!(q0, 0.0);
    }

    #[test]
    fn mismatched_profiles_are_rejected() {
        let grid = Grid::new(9).unwrap();
        let t1 = vec![1.0; 9];
        let t2 = vec![1.0; 8];
        assert!(matches!(
            total_heat(&t1, &t2, 1.0, &grid),
            Err(DiagnosticsError::ProfileLengthMismatch { .. })
        ));
    }

    #[test]
    fn efficiency_boundary_values() {
        let params = DimensionlessParams::new(1.0732, 1.2471e-4, 0.0018).unwrap();
        assert_eq!(efficiency(0.0, 0.3, &params).unwrap(), 0.0);
        let denom = params.baseline_power_per_mass();
        let e = efficiency(0.3 * denom, 0.3, &params).unwrap();
        assert!((e - 1.0).abs() < 1e-15);
        assert!(matches!(
            efficiency(0.1, 0.0, &params),
            Err(DiagnosticsError::NonPositiveMassFlux { .. })
        ));
        let degenerate = DimensionlessParams::new_unchecked(1.01, 1.0, 0.0);
        assert!(matches!(
            efficiency(0.1, 0.3, &degenerate),
            Err(DiagnosticsError::NonPositiveDenominator { .. })
        ));
    }

    #[test]
    fn power_identity_against_efficiency() {
        // power(q, phi) = (1 - E) * power(0, phi) algebraically.
        let params = DimensionlessParams::new(1.4, 2e-3, 0.01).unwrap();
        for (q, phi) in [(0.0, 0.5), (0.01, 0.25), (0.17, 0.9)] {
            let p = power_per_mass(q, phi, &params).unwrap();
            let e = efficiency(q, phi, &params).unwrap();
            let baseline = power_per_mass(0.0, phi, &params).unwrap();
            assert!((p - (1.0 - e) * baseline).abs() <= 1e-15 * baseline.abs());
        }
        // Zero-power boundary: q = phi * baseline.
        let baseline = params.baseline_power_per_mass();
        let p = power_per_mass(0.4 * baseline, 0.4, &params).unwrap();
        assert!(p.abs() < 1e-15);
    }

    #[test]
    fn rest_state_has_zero_power_flux() {
        let mut s = StateVector::zeros(6);
        for j in 0..6 {
            s.set_rho1(j, 0.8);
            s.set_rho2(j, 1.0);
            s.set_t1(j, 1.25);
            s.set_t2(j, 1.0);
        }
        s.set_phi(0.0);
        s.set_p_int(1.0);
        for j in 0..6 {
            assert_eq!(discrete_power_flux(&s, j), 0.0);
        }
    }

    #[test]
    fn power_flux_constant_across_nodes_on_converged_states() {
        let params = DimensionlessParams::new(1.0732, 1.2471e-4, 0.0018).unwrap();
        let mut spreads = Vec::new();
        for n in [21, 41, 81] {
            let grid = Grid::new(n).unwrap();
            let report =
                newton_solve(&params, &grid, default_initial_guess(&params, &grid)).unwrap();
            assert!(report.converged);
            let (mean, spread) = power_flux_spread(&report.state);
            assert!(mean > 0.0);
            let dz = grid.dz();
            assert!(
                spread / mean.abs() <= 10.0 * dz * dz,
                "n={n}: relative spread {} vs bound {}",
                spread / mean.abs(),
                10.0 * dz * dz
            );
            // Any two nodes agree to the same tolerance.
            let pa = discrete_power_flux(&report.state, 1);
            let pb = discrete_power_flux(&report.state, n - 2);
            assert!((pa - pb).abs() / mean.abs() <= 10.0 * dz * dz);
            spreads.push(spread);
        }
        // Refinement halves dz, so the spread should fall by about 4x.
        for w in spreads.windows(2) {
            let ratio = w[0] / w[1];
            assert!(ratio > 2.0, "spread ratio {ratio} not shrinking second order");
        }
    }

    #[test]
    fn exchanged_heat_positive_and_efficiency_in_unit_interval() {
        let params = DimensionlessParams::new(1.0732, 1.2471e-4, 0.0018).unwrap();
        let grid = Grid::new(41).unwrap();
        let report = newton_solve(&params, &grid, default_initial_guess(&params, &grid)).unwrap();
        let d = Diagnostics::compute(&report.state, &params, &grid).unwrap();
        assert!(d.q_total > 0.0);
        assert!(d.efficiency > 0.0 && d.efficiency < 1.0);
        assert!(d.phi > 0.0);
        assert!(d.power_per_mass > 0.0);
        let (ke1, ke2) = exit_kinetic_energy(&report.state);
        assert!(ke1 > 0.0 && ke2 > 0.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn power_splits_into_efficiency_complement(
                q in 0.0..0.2f64,
                phi in 0.05..1.0f64,
                t in 1.05..3.0f64,
            ) {
                let params = DimensionlessParams::new(t, 1e-4, 0.01).unwrap();
                let p = power_per_mass(q, phi, &params).unwrap();
                let e = efficiency(q, phi, &params).unwrap();
                let baseline = params.baseline_power_per_mass();
                prop_assert!((p - (1.0 - e) * baseline).abs() <= 1e-12 * baseline);
            }
        }
    }
}
