//! The discrete unknown vector of a solve.
//!
//! Layout is one flat array of `4n + 2` scalars in the order
//! `(rho1[0..n], rho2[0..n], t1[0..n], t2[0..n], phi, p_int)`. Node index 0
//! sits at the bottom of the exchanger (`z = 0`) and node `n - 1` at the top.
//! Pressure is never stored; it is always reconstructed through the ideal
//! gas law `p = rho * t`.

use crate::physics::ideal_gas;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    data: Vec<f64>,
}

impl StateVector {
    /// All-zero state for `n` grid nodes.
    pub fn zeros(n: usize) -> Self {
        StateVector {
            n,
            data: vec![0.0; 4 * n + 2],
        }
    }

    /// Rebuilds a state from its flat representation; `data.len()` must be
    /// `4n + 2` for some `n`.
    pub fn from_flat(data: Vec<f64>) -> Option<Self> {
        if data.len() < 6 || (data.len() - 2) % 4 != 0 {
            return None;
        }
        let n = (data.len() - 2) / 4;
        Some(StateVector { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of scalar unknowns, `4n + 2`.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    // Flat-vector offsets of each block.
    pub fn idx_rho1(&self, j: usize) -> usize {
        j
    }
    pub fn idx_rho2(&self, j: usize) -> usize {
        self.n + j
    }
    pub fn idx_t1(&self, j: usize) -> usize {
        2 * self.n + j
    }
    pub fn idx_t2(&self, j: usize) -> usize {
        3 * self.n + j
    }
    pub fn idx_phi(&self) -> usize {
        4 * self.n
    }
    pub fn idx_p_int(&self) -> usize {
        4 * self.n + 1
    }

    pub fn rho1(&self, j: usize) -> f64 {
        self.data[j]
    }
    pub fn rho2(&self, j: usize) -> f64 {
        self.data[self.n + j]
    }
    pub fn t1(&self, j: usize) -> f64 {
        self.data[2 * self.n + j]
    }
    pub fn t2(&self, j: usize) -> f64 {
        self.data[3 * self.n + j]
    }
    /// Mass flux per unit area; positive when warm air rises through tube 1.
    pub fn phi(&self) -> f64 {
        self.data[4 * self.n]
    }
    /// Interior (house) pressure.
    pub fn p_int(&self) -> f64 {
        self.data[4 * self.n + 1]
    }

    pub fn set_rho1(&mut self, j: usize, v: f64) {
        self.data[j] = v;
    }
    pub fn set_rho2(&mut self, j: usize, v: f64) {
        self.data[self.n + j] = v;
    }
    pub fn set_t1(&mut self, j: usize, v: f64) {
        self.data[2 * self.n + j] = v;
    }
    pub fn set_t2(&mut self, j: usize, v: f64) {
        self.data[3 * self.n + j] = v;
    }
    pub fn set_phi(&mut self, v: f64) {
        self.data[4 * self.n] = v;
    }
    pub fn set_p_int(&mut self, v: f64) {
        self.data[4 * self.n + 1] = v;
    }

    pub fn rho1_slice(&self) -> &[f64] {
        &self.data[0..self.n]
    }
    pub fn rho2_slice(&self) -> &[f64] {
        &self.data[self.n..2 * self.n]
    }
    pub fn t1_slice(&self) -> &[f64] {
        &self.data[2 * self.n..3 * self.n]
    }
    pub fn t2_slice(&self) -> &[f64] {
        &self.data[3 * self.n..4 * self.n]
    }

    /// Pressure in tube 1 at node `j` via the ideal gas law.
    pub fn pressure1(&self, j: usize) -> f64 {
        ideal_gas(self.rho1(j), self.t1(j))
    }
    pub fn pressure2(&self, j: usize) -> f64 {
        ideal_gas(self.rho2(j), self.t2(j))
    }

    /// Velocity in tube 1 at node `j`: `phi / rho1`, positive (upward).
    pub fn velocity1(&self, j: usize) -> f64 {
        self.phi() / self.rho1(j)
    }
    /// Velocity in tube 2 at node `j`: `-phi / rho2`, negative (downward).
    pub fn velocity2(&self, j: usize) -> f64 {
        -self.phi() / self.rho2(j)
    }

    /// Bernoulli quantity `(7/2) T + u²/2` in tube 1 at node `j`.
    pub fn bernoulli1(&self, j: usize) -> f64 {
        3.5 * self.t1(j) + 0.5 * self.velocity1(j).powi(2)
    }
    pub fn bernoulli2(&self, j: usize) -> f64 {
        3.5 * self.t2(j) + 0.5 * self.velocity2(j).powi(2)
    }

    /// First non-positive density or temperature, as (field name, node).
    pub fn first_non_positive(&self) -> Option<(&'static str, usize)> {
        let names = ["rho1", "rho2", "t1", "t2"];
        for (block, name) in names.iter().enumerate() {
            for j in 0..self.n {
                if !(self.data[block * self.n + j] > 0.0) {
                    return Some((name, j));
                }
            }
        }
        None
    }

    /// Linear interpolation onto the once-refined grid (`2n - 1` nodes):
    /// even fine nodes copy the coarse values, odd ones average neighbours.
    /// `phi` and `p_int` carry over unchanged. Used to warm-start
    /// refinement ladders.
    pub fn refine(&self) -> StateVector {
        let nf = 2 * self.n - 1;
        let mut fine = StateVector::zeros(nf);
        for block in 0..4 {
            let coarse = &self.data[block * self.n..(block + 1) * self.n];
            let out = &mut fine.data[block * nf..(block + 1) * nf];
            for j in 0..self.n {
                out[2 * j] = coarse[j];
            }
            for j in 0..self.n - 1 {
                out[2 * j + 1] = 0.5 * (coarse[j] + coarse[j + 1]);
            }
        }
        fine.set_phi(self.phi());
        fine.set_p_int(self.p_int());
        fine
    }

    /// Max-norm difference against another state of the same size.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_order_is_rho1_rho2_t1_t2_phi_pint() {
        let mut s = StateVector::zeros(3);
        assert_eq!(s.len(), 14);
        s.set_rho1(0, 1.0);
        s.set_rho2(0, 2.0);
        s.set_t1(0, 3.0);
        s.set_t2(0, 4.0);
        s.set_phi(5.0);
        s.set_p_int(6.0);
        assert_eq!(s.as_slice()[0], 1.0);
        assert_eq!(s.as_slice()[3], 2.0);
        assert_eq!(s.as_slice()[6], 3.0);
        assert_eq!(s.as_slice()[9], 4.0);
        assert_eq!(s.as_slice()[12], 5.0);
        assert_eq!(s.as_slice()[13], 6.0);
    }

    #[test]
    fn from_flat_checks_length() {
        assert!(StateVector::from_flat(vec![0.0; 14]).is_some());
        assert!(StateVector::from_flat(vec![0.0; 13]).is_none());
        assert!(StateVector::from_flat(vec![0.0; 4]).is_none());
    }

    #[test]
    fn derived_fields_follow_ideal_gas() {
        let mut s = StateVector::zeros(4);
        for j in 0..4 {
            s.set_rho1(j, 0.5);
            s.set_t1(j, 2.0);
            s.set_rho2(j, 1.0);
            s.set_t2(j, 1.0);
        }
        s.set_phi(0.25);
        assert_eq!(s.pressure1(1), 1.0);
        assert_eq!(s.velocity1(2), 0.5);
        assert_eq!(s.velocity2(2), -0.25);
        assert_eq!(s.bernoulli1(0), 7.0 + 0.125);
    }

    #[test]
    fn non_positive_detection_names_field_and_node() {
        let mut s = StateVector::zeros(4);
        for j in 0..4 {
            s.set_rho1(j, 1.0);
            s.set_rho2(j, 1.0);
            s.set_t1(j, 1.0);
            s.set_t2(j, 1.0);
        }
        assert_eq!(s.first_non_positive(), None);
        s.set_t2(2, -0.5);
        assert_eq!(s.first_non_positive(), Some(("t2", 2)));
    }

    #[test]
    fn refine_preserves_nodes_and_scalars() {
        let mut s = StateVector::zeros(4);
        for j in 0..4 {
            s.set_rho1(j, 1.0 + j as f64);
            s.set_rho2(j, 2.0 + j as f64);
            s.set_t1(j, 3.0 + j as f64);
            s.set_t2(j, 4.0 + j as f64);
        }
        s.set_phi(0.5);
        s.set_p_int(1.0);
        let f = s.refine();
        assert_eq!(f.n(), 7);
        for j in 0..4 {
            assert_eq!(f.rho1(2 * j), s.rho1(j));
            assert_eq!(f.t2(2 * j), s.t2(j));
        }
        assert_eq!(f.rho1(1), 1.5);
        assert_eq!(f.phi(), 0.5);
        assert_eq!(f.p_int(), 1.0);
    }
}
