//! Upwind finite-difference residual of the steady flow equations and its
//! analytic Jacobian.
//!
//! Tube 1 carries rising warm air, so its upwind direction points down and
//! interior nodes use backward three-point stencils; tube 2 carries sinking
//! cold air and uses forward stencils. The node adjacent to each inflow has
//! only one upwind neighbour and falls back to a first-order difference,
//! which does not spoil the scheme's overall second-order accuracy.
//!
//! With `D` the upwind derivative approximation and `p = rho * t`
//! everywhere, the rows are, per tube:
//!
//! * momentum: `D(p) - (phi²/rho²) D(rho) + g rho = 0`
//! * energy:   `(7/2) D(t) - (phi²/rho³) D(rho) + (sigma/phi)(t1 - t2) + g = 0`
//!
//! plus six boundary rows: the compressible Bernoulli and adiabatic
//! equation-of-state conditions at each tube's inflow, and pressure
//! continuity with the receiving reservoir at each outflow. The adiabatic
//! rows are normalized by the reservoir constant so that both read
//! `(p rho_res^{7/5}) / (p_res rho^{7/5}) - 1 = 0`; for tube 2 the exterior
//! reservoir has `p_res = rho_res = 1` and the row reduces to
//! `p / rho^{7/5} - 1`, while tube 1 couples to the interior reservoir at
//! `p_res = p_int`, `rho_res = p_int / t_int`.
//!
//! Row ordering (`4n + 2` rows total, matching the unknown layout of
//! [`StateVector`]): tube-1 momentum at nodes `1..n-1` ascending (the node-1
//! row being first order), tube-2 momentum at nodes `0..n-2` ascending (the
//! node-`n-2` row first order), then tube-1 energy, tube-2 energy over the
//! same node ranges, then the six boundary rows in the order: tube-1
//! Bernoulli, tube-1 adiabatic, tube-2 Bernoulli, tube-2 adiabatic, tube-1
//! outflow pressure, tube-2 outflow pressure.

use thiserror::Error;

use crate::grid::Grid;
use crate::linalg::Matrix;
use crate::physics::DimensionlessParams;
use crate::state::StateVector;

const GAMMA_EXP: f64 = 1.4; // 7/5 for a diatomic gas

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AssembleError {
    #[error("state has {state_n} nodes but grid has {grid_n}")]
    DimensionMismatch { state_n: usize, grid_n: usize },
    #[error("non-positive {field} at node {node} ({value}); iterate left the physical region")]
    NonPositiveField {
        field: &'static str,
        node: usize,
        value: f64,
    },
}

/// Residual entries in the documented row ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    values: Vec<f64>,
}

impl Residual {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Maps (equation, node) pairs onto row indices of the residual/Jacobian.
#[derive(Debug, Clone, Copy)]
pub struct RowLayout {
    n: usize,
}

impl RowLayout {
    pub fn new(n: usize) -> Self {
        RowLayout { n }
    }

    /// Tube-1 momentum at node `j`, valid for `1 <= j <= n-1`.
    pub fn momentum1(&self, j: usize) -> usize {
        j - 1
    }

    /// Tube-2 momentum at node `j`, valid for `0 <= j <= n-2`.
    pub fn momentum2(&self, j: usize) -> usize {
        (self.n - 1) + j
    }

    /// Tube-1 energy at node `j`, valid for `1 <= j <= n-1`.
    pub fn energy1(&self, j: usize) -> usize {
        2 * (self.n - 1) + (j - 1)
    }

    /// Tube-2 energy at node `j`, valid for `0 <= j <= n-2`.
    pub fn energy2(&self, j: usize) -> usize {
        3 * (self.n - 1) + j
    }

    /// Tube-1 inflow Bernoulli row.
    pub fn bernoulli1(&self) -> usize {
        4 * (self.n - 1)
    }

    /// Tube-1 inflow adiabatic equation-of-state row.
    pub fn adiabatic1(&self) -> usize {
        4 * (self.n - 1) + 1
    }

    /// Tube-2 inflow Bernoulli row.
    pub fn bernoulli2(&self) -> usize {
        4 * (self.n - 1) + 2
    }

    /// Tube-2 inflow adiabatic equation-of-state row.
    pub fn adiabatic2(&self) -> usize {
        4 * (self.n - 1) + 3
    }

    /// Tube-1 outflow pressure row (`p1[n-1] = 1`).
    pub fn outflow1(&self) -> usize {
        4 * (self.n - 1) + 4
    }

    /// Tube-2 outflow pressure row (`p2[0] = p_int`).
    pub fn outflow2(&self) -> usize {
        4 * (self.n - 1) + 5
    }

    pub fn rows(&self) -> usize {
        4 * self.n + 2
    }
}

fn check_state(state: &StateVector, grid: &Grid) -> Result<(), AssembleError> {
    if state.n() != grid.n() {
        return Err(AssembleError::DimensionMismatch {
            state_n: state.n(),
            grid_n: grid.n(),
        });
    }
    if let Some((field, node)) = state.first_non_positive() {
        let value = match field {
            "rho1" => state.rho1(node),
            "rho2" => state.rho2(node),
            "t1" => state.t1(node),
            _ => state.t2(node),
        };
        return Err(AssembleError::NonPositiveField { field, node, value });
    }
    Ok(())
}

/// Evaluates all `4n + 2` residual rows at `state`.
pub fn assemble_residual(
    state: &StateVector,
    params: &DimensionlessParams,
    grid: &Grid,
) -> Result<Residual, AssembleError> {
    check_state(state, grid)?;
    let n = grid.n();
    let dz = grid.dz();
    let c2 = 1.0 / (2.0 * dz);
    let c1 = 1.0 / dz;
    let (t_int, g, sigma) = (params.t_int, params.g, params.sigma);
    let phi = state.phi();
    let p_int = state.p_int();
    let phi2 = phi * phi;
    // With an insulating partition the coupling term vanishes identically,
    // which keeps the rest state (phi = 0) well defined.
    let heat = if sigma == 0.0 { 0.0 } else { sigma / phi };

    let layout = RowLayout::new(n);
    let mut f = vec![0.0; layout.rows()];

    let r1 = state.rho1_slice();
    let r2 = state.rho2_slice();
    let t1 = state.t1_slice();
    let t2 = state.t2_slice();
    let p1 = |j: usize| r1[j] * t1[j];
    let p2 = |j: usize| r2[j] * t2[j];

    // Tube 1, first-order rows at the node above the inflow.
    f[layout.momentum1(1)] = c1 * ((p1(1) - p1(0)) - phi2 / (r1[1] * r1[1]) * (r1[1] - r1[0]))
        + g * r1[1];
    f[layout.energy1(1)] = c1
        * (3.5 * (t1[1] - t1[0]) - phi2 / (r1[1] * r1[1] * r1[1]) * (r1[1] - r1[0]))
        + heat * (t1[1] - t2[1])
        + g;
    // Tube 1, second-order backward rows.
    for j in 2..n {
        let dp = 3.0 * p1(j) - 4.0 * p1(j - 1) + p1(j - 2);
        let dr = 3.0 * r1[j] - 4.0 * r1[j - 1] + r1[j - 2];
        let dt = 3.0 * t1[j] - 4.0 * t1[j - 1] + t1[j - 2];
        f[layout.momentum1(j)] = c2 * (dp - phi2 / (r1[j] * r1[j]) * dr) + g * r1[j];
        f[layout.energy1(j)] = c2 * (3.5 * dt - phi2 / (r1[j] * r1[j] * r1[j]) * dr)
            + heat * (t1[j] - t2[j])
            + g;
    }

    // Tube 2, second-order forward rows.
    for j in 0..n - 2 {
        let dp = -p2(j + 2) + 4.0 * p2(j + 1) - 3.0 * p2(j);
        let dr = -r2[j + 2] + 4.0 * r2[j + 1] - 3.0 * r2[j];
        let dt = -t2[j + 2] + 4.0 * t2[j + 1] - 3.0 * t2[j];
        f[layout.momentum2(j)] = c2 * (dp - phi2 / (r2[j] * r2[j]) * dr) + g * r2[j];
        f[layout.energy2(j)] = c2 * (3.5 * dt - phi2 / (r2[j] * r2[j] * r2[j]) * dr)
            + heat * (t1[j] - t2[j])
            + g;
    }
    // Tube 2, first-order rows at the node below the inflow. The transport
    // coefficients are evaluated at the downwind node `n - 2`.
    let m = n - 2;
    f[layout.momentum2(m)] = c1
        * ((p2(n - 1) - p2(m)) - phi2 / (r2[m] * r2[m]) * (r2[n - 1] - r2[m]))
        + g * r2[m];
    f[layout.energy2(m)] = c1
        * (3.5 * (t2[n - 1] - t2[m]) - phi2 / (r2[m] * r2[m] * r2[m]) * (r2[n - 1] - r2[m]))
        + heat * (t1[m] - t2[m])
        + g;

    // Inflow conditions: compressible Bernoulli plus adiabatic equation of
    // state against each reservoir.
    f[layout.bernoulli1()] = 3.5 * t1[0] + 0.5 * phi2 / (r1[0] * r1[0]) - 3.5 * t_int;
    let rho_res = p_int / t_int;
    f[layout.adiabatic1()] =
        (p1(0) * rho_res.powf(GAMMA_EXP)) / (p_int * r1[0].powf(GAMMA_EXP)) - 1.0;
    f[layout.bernoulli2()] = 3.5 * t2[n - 1] + 0.5 * phi2 / (r2[n - 1] * r2[n - 1]) - 3.5;
    f[layout.adiabatic2()] = p2(n - 1) / r2[n - 1].powf(GAMMA_EXP) - 1.0;

    // Outflow: the jet loses its kinetic energy, so the tube pressure simply
    // matches the receiving reservoir.
    f[layout.outflow1()] = p1(n - 1) - 1.0;
    f[layout.outflow2()] = p2(0) - p_int;

    Ok(Residual { values: f })
}

/// Analytic Jacobian of [`assemble_residual`] with respect to the state, in
/// the same row/column ordering. Dense storage; each interior row touches
/// only its upwind neighbourhood plus the global `phi` column.
pub fn assemble_jacobian(
    state: &StateVector,
    params: &DimensionlessParams,
    grid: &Grid,
) -> Result<Matrix, AssembleError> {
    let mut jac = Matrix::zeros(4 * grid.n() + 2);
    assemble_jacobian_into(&mut jac, state, params, grid)?;
    Ok(jac)
}

/// Fills `jac` (which must be square of size `4n + 2`) with the Jacobian,
/// reusing the allocation across Newton iterations.
pub fn assemble_jacobian_into(
    jac: &mut Matrix,
    state: &StateVector,
    params: &DimensionlessParams,
    grid: &Grid,
) -> Result<(), AssembleError> {
    check_state(state, grid)?;
    let n = grid.n();
    assert_eq!(jac.size(), 4 * n + 2, "jacobian buffer has the wrong size");
    jac.fill_zero();

    let dz = grid.dz();
    let c2 = 1.0 / (2.0 * dz);
    let c1 = 1.0 / dz;
    let (t_int, g, sigma) = (params.t_int, params.g, params.sigma);
    let phi = state.phi();
    let p_int = state.p_int();
    let phi2 = phi * phi;
    let heat = if sigma == 0.0 { 0.0 } else { sigma / phi };
    let heat_dphi = if sigma == 0.0 { 0.0 } else { -sigma / phi2 };

    let layout = RowLayout::new(n);
    let ir1 = |j: usize| j;
    let ir2 = |j: usize| n + j;
    let it1 = |j: usize| 2 * n + j;
    let it2 = |j: usize| 3 * n + j;
    let iphi = 4 * n;
    let ipint = 4 * n + 1;

    let r1 = state.rho1_slice().to_vec();
    let r2 = state.rho2_slice().to_vec();
    let t1 = state.t1_slice().to_vec();
    let t2 = state.t2_slice().to_vec();

    // Tube 1 momentum, first order at node 1.
    {
        let row = layout.momentum1(1);
        let dr = r1[1] - r1[0];
        let rr = r1[1] * r1[1];
        jac.set(row, ir1(1), c1 * (t1[1] + 2.0 * phi2 / (rr * r1[1]) * dr - phi2 / rr) + g);
        jac.set(row, ir1(0), c1 * (-t1[0] + phi2 / rr));
        jac.set(row, it1(1), c1 * r1[1]);
        jac.set(row, it1(0), -c1 * r1[0]);
        jac.set(row, iphi, -c1 * 2.0 * phi / rr * dr);
    }
    // Tube 1 momentum, second order.
    for j in 2..n {
        let row = layout.momentum1(j);
        let dr = 3.0 * r1[j] - 4.0 * r1[j - 1] + r1[j - 2];
        let rr = r1[j] * r1[j];
        let u2 = phi2 / rr;
        jac.set(row, ir1(j), c2 * (3.0 * t1[j] + 2.0 * phi2 / (rr * r1[j]) * dr - 3.0 * u2) + g);
        jac.set(row, ir1(j - 1), c2 * (-4.0 * t1[j - 1] + 4.0 * u2));
        jac.set(row, ir1(j - 2), c2 * (t1[j - 2] - u2));
        jac.set(row, it1(j), 3.0 * c2 * r1[j]);
        jac.set(row, it1(j - 1), -4.0 * c2 * r1[j - 1]);
        jac.set(row, it1(j - 2), c2 * r1[j - 2]);
        jac.set(row, iphi, -c2 * 2.0 * phi / rr * dr);
    }
    // Tube 2 momentum, second order.
    for j in 0..n - 2 {
        let row = layout.momentum2(j);
        let dr = -r2[j + 2] + 4.0 * r2[j + 1] - 3.0 * r2[j];
        let rr = r2[j] * r2[j];
        let u2 = phi2 / rr;
        jac.set(row, ir2(j), c2 * (-3.0 * t2[j] + 2.0 * phi2 / (rr * r2[j]) * dr + 3.0 * u2) + g);
        jac.set(row, ir2(j + 1), c2 * (4.0 * t2[j + 1] - 4.0 * u2));
        jac.set(row, ir2(j + 2), c2 * (-t2[j + 2] + u2));
        jac.set(row, it2(j), -3.0 * c2 * r2[j]);
        jac.set(row, it2(j + 1), 4.0 * c2 * r2[j + 1]);
        jac.set(row, it2(j + 2), -c2 * r2[j + 2]);
        jac.set(row, iphi, -c2 * 2.0 * phi / rr * dr);
    }
    // Tube 2 momentum, first order at node n-2.
    let m = n - 2;
    {
        let row = layout.momentum2(m);
        let dr = r2[n - 1] - r2[m];
        let rr = r2[m] * r2[m];
        jac.set(row, ir2(n - 1), c1 * (t2[n - 1] - phi2 / rr));
        jac.set(row, ir2(m), c1 * (-t2[m] + 2.0 * phi2 / (rr * r2[m]) * dr + phi2 / rr) + g);
        jac.set(row, it2(n - 1), c1 * r2[n - 1]);
        jac.set(row, it2(m), -c1 * r2[m]);
        jac.set(row, iphi, -c1 * 2.0 * phi / rr * dr);
    }
    // Tube 1 energy, first order at node 1.
    {
        let row = layout.energy1(1);
        let dr = r1[1] - r1[0];
        let r3 = r1[1] * r1[1] * r1[1];
        jac.set(row, ir1(1), c1 * (3.0 * phi2 / (r3 * r1[1]) * dr - phi2 / r3));
        jac.set(row, ir1(0), c1 * phi2 / r3);
        jac.set(row, it1(1), 3.5 * c1 + heat);
        jac.set(row, it1(0), -3.5 * c1);
        jac.set(row, it2(1), -heat);
        jac.set(row, iphi, -c1 * 2.0 * phi / r3 * dr + heat_dphi * (t1[1] - t2[1]));
    }
    // Tube 1 energy, second order.
    for j in 2..n {
        let row = layout.energy1(j);
        let dr = 3.0 * r1[j] - 4.0 * r1[j - 1] + r1[j - 2];
        let r3 = r1[j] * r1[j] * r1[j];
        let w = phi2 / r3;
        jac.set(row, ir1(j), c2 * (3.0 * phi2 / (r3 * r1[j]) * dr - 3.0 * w));
        jac.set(row, ir1(j - 1), c2 * 4.0 * w);
        jac.set(row, ir1(j - 2), -c2 * w);
        jac.set(row, it1(j), 3.0 * c2 * 3.5 + heat);
        jac.set(row, it1(j - 1), -4.0 * c2 * 3.5);
        jac.set(row, it1(j - 2), c2 * 3.5);
        jac.set(row, it2(j), -heat);
        jac.set(row, iphi, -c2 * 2.0 * phi / r3 * dr + heat_dphi * (t1[j] - t2[j]));
    }
    // Tube 2 energy, second order.
    for j in 0..n - 2 {
        let row = layout.energy2(j);
        let dr = -r2[j + 2] + 4.0 * r2[j + 1] - 3.0 * r2[j];
        let r3 = r2[j] * r2[j] * r2[j];
        let w = phi2 / r3;
        jac.set(row, ir2(j), c2 * (3.0 * phi2 / (r3 * r2[j]) * dr + 3.0 * w));
        jac.set(row, ir2(j + 1), -c2 * 4.0 * w);
        jac.set(row, ir2(j + 2), c2 * w);
        jac.set(row, it2(j), -3.0 * c2 * 3.5 - heat);
        jac.set(row, it2(j + 1), 4.0 * c2 * 3.5);
        jac.set(row, it2(j + 2), -c2 * 3.5);
        jac.set(row, it1(j), heat);
        jac.set(row, iphi, -c2 * 2.0 * phi / r3 * dr + heat_dphi * (t1[j] - t2[j]));
    }
    // Tube 2 energy, first order at node n-2.
    {
        let row = layout.energy2(m);
        let dr = r2[n - 1] - r2[m];
        let r3 = r2[m] * r2[m] * r2[m];
        jac.set(row, ir2(n - 1), -c1 * phi2 / r3);
        jac.set(row, ir2(m), c1 * (3.0 * phi2 / (r3 * r2[m]) * dr + phi2 / r3));
        jac.set(row, it2(n - 1), 3.5 * c1);
        jac.set(row, it2(m), -3.5 * c1 - heat);
        jac.set(row, it1(m), heat);
        jac.set(row, iphi, -c1 * 2.0 * phi / r3 * dr + heat_dphi * (t1[m] - t2[m]));
    }

    // Tube 1 Bernoulli inflow.
    {
        let row = layout.bernoulli1();
        jac.set(row, it1(0), 3.5);
        jac.set(row, ir1(0), -phi2 / (r1[0] * r1[0] * r1[0]));
        jac.set(row, iphi, phi / (r1[0] * r1[0]));
    }
    // Tube 1 adiabatic inflow. With rho_res = p_int / t_int the row is
    // t1[0] * p_int^{2/5} / (t_int^{7/5} rho1[0]^{2/5}) - 1.
    {
        let row = layout.adiabatic1();
        let k = p_int.powf(GAMMA_EXP - 1.0) / t_int.powf(GAMMA_EXP);
        jac.set(row, it1(0), k * r1[0].powf(1.0 - GAMMA_EXP));
        jac.set(
            row,
            ir1(0),
            (1.0 - GAMMA_EXP) * k * t1[0] * r1[0].powf(-GAMMA_EXP),
        );
        jac.set(
            row,
            ipint,
            (GAMMA_EXP - 1.0) * p_int.powf(GAMMA_EXP - 2.0) * t1[0]
                * r1[0].powf(1.0 - GAMMA_EXP)
                / t_int.powf(GAMMA_EXP),
        );
    }
    // Tube 2 Bernoulli inflow.
    {
        let row = layout.bernoulli2();
        jac.set(row, it2(n - 1), 3.5);
        jac.set(row, ir2(n - 1), -phi2 / (r2[n - 1] * r2[n - 1] * r2[n - 1]));
        jac.set(row, iphi, phi / (r2[n - 1] * r2[n - 1]));
    }
    // Tube 2 adiabatic inflow: t2[n-1] * rho2[n-1]^{-2/5} - 1.
    {
        let row = layout.adiabatic2();
        jac.set(row, it2(n - 1), r2[n - 1].powf(1.0 - GAMMA_EXP));
        jac.set(
            row,
            ir2(n - 1),
            (1.0 - GAMMA_EXP) * t2[n - 1] * r2[n - 1].powf(-GAMMA_EXP),
        );
    }
    // Outflow pressure rows.
    {
        let row = layout.outflow1();
        jac.set(row, ir1(n - 1), t1[n - 1]);
        jac.set(row, it1(n - 1), r1[n - 1]);
    }
    {
        let row = layout.outflow2();
        jac.set(row, ir2(0), t2[0]);
        jac.set(row, it2(0), r2[0]);
        jac.set(row, ipint, -1.0);
    }

    Ok(())
}
