//! Dense square matrices and Gaussian elimination with partial pivoting.
//!
//! The Jacobians here top out at a few thousand rows, where a straight
//! dense elimination is simple and fast enough; the bordered-banded
//! structure of the Jacobian (two dense columns for `phi` and `p_int`)
//! is deliberately not exploited.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinSolveError {
    #[error("matrix is {n}x{n} but right-hand side has length {rhs_len}")]
    DimensionMismatch { n: usize, rhs_len: usize },
    #[error("matrix is singular to working precision at pivot {index}")]
    SingularPivot { index: usize },
}

/// Square row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Builds from row-major data; `data.len()` must be `n * n`.
    pub fn from_rows(n: usize, data: Vec<f64>) -> Option<Self> {
        (data.len() == n * n).then_some(Matrix { n, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.n + col] = value;
    }

    pub fn fill_zero(&mut self) {
        self.data.fill(0.0);
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.n..(row + 1) * self.n]
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Solves `matrix * x = rhs` by Gaussian elimination with partial pivoting.
///
/// # Errors
///
/// Fails with the offending pivot index when elimination meets a pivot that
/// is zero relative to the matrix scale, and on dimension mismatch.
pub fn solve_linear(matrix: &Matrix, rhs: &[f64]) -> Result<Vec<f64>, LinSolveError> {
    let mut work = matrix.clone();
    let mut b = rhs.to_vec();
    solve_linear_in_place(&mut work, &mut b)?;
    Ok(b)
}

/// In-place variant of [`solve_linear`]: destroys `matrix` and overwrites
/// `rhs` with the solution. Lets the Newton loop reuse its Jacobian buffer
/// without an extra copy.
pub fn solve_linear_in_place(matrix: &mut Matrix, rhs: &mut [f64]) -> Result<(), LinSolveError> {
    let n = matrix.n;
    if rhs.len() != n {
        return Err(LinSolveError::DimensionMismatch {
            n,
            rhs_len: rhs.len(),
        });
    }
    if n == 0 {
        return Ok(());
    }
    // Singularity threshold relative to the largest entry of the input.
    let pivot_floor = f64::EPSILON * n as f64 * matrix.max_abs();

    let a = &mut matrix.data;
    for k in 0..n {
        // Partial pivoting: largest magnitude in column k at or below row k.
        let mut pivot_row = k;
        let mut pivot_val = a[k * n + k].abs();
        for r in k + 1..n {
            let v = a[r * n + k].abs();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = r;
            }
        }
        if !(pivot_val > pivot_floor) || !pivot_val.is_finite() {
            return Err(LinSolveError::SingularPivot { index: k });
        }
        if pivot_row != k {
            for c in k..n {
                a.swap(k * n + c, pivot_row * n + c);
            }
            rhs.swap(k, pivot_row);
        }
        let (upper, lower) = a.split_at_mut((k + 1) * n);
        let pivot = &upper[k * n..(k + 1) * n];
        let inv = 1.0 / pivot[k];
        for r in k + 1..n {
            let row = &mut lower[(r - k - 1) * n..(r - k) * n];
            let factor = row[k] * inv;
            if factor != 0.0 {
                row[k] = 0.0;
                for (x, p) in row[k + 1..].iter_mut().zip(&pivot[k + 1..]) {
                    *x -= factor * p;
                }
                rhs[r] -= factor * rhs[k];
            }
        }
    }
    // Back substitution.
    for k in (0..n).rev() {
        let mut s = rhs[k];
        let row = &a[k * n..(k + 1) * n];
        for c in k + 1..n {
            s -= row[c] * rhs[c];
        }
        rhs[k] = s / row[k];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_rng::XorShift;

    #[test]
    fn identity_returns_rhs() {
        let mut m = Matrix::zeros(4);
        for i in 0..4 {
            m.set(i, i, 1.0);
        }
        let rhs = vec![3.0, -1.0, 0.5, 7.0];
        assert_eq!(solve_linear(&m, &rhs).unwrap(), rhs);
    }

    #[test]
    fn two_by_two_hand_check() {
        let m = Matrix::from_rows(2, vec![2.0, 1.0, 1.0, 3.0]).unwrap();
        let x = solve_linear(&m, &[5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14);
        assert!((x[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn random_fifty_by_fifty_residual_is_tiny() {
        let n = 50;
        let mut rng = XorShift::new(987);
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, rng.uniform(-1.0, 1.0));
            }
            // Diagonal dominance keeps the system well conditioned.
            m.set(i, i, m.get(i, i) + n as f64);
        }
        let b: Vec<f64> = (0..n).map(|_| rng.uniform(-10.0, 10.0)).collect();
        let x = solve_linear(&m, &b).unwrap();
        let r = m.mul_vec(&x);
        let err = r
            .iter()
            .zip(&b)
            .map(|(a, bb)| (a - bb).abs())
            .fold(0.0, f64::max);
        let bmax = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(err / bmax <= 1e-12, "residual {err}");
    }

    #[test]
    fn singular_matrix_reports_pivot_index() {
        // Second row is twice the first.
        let m = Matrix::from_rows(2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        match solve_linear(&m, &[1.0, 2.0]) {
            Err(LinSolveError::SingularPivot { index }) => assert_eq!(index, 1),
            other => panic!("expected SingularPivot, got {other:?}"),
        }
        // All-zero matrix fails at the first pivot.
        let z = Matrix::zeros(3);
        assert!(matches!(
            solve_linear(&z, &[1.0, 1.0, 1.0]),
            Err(LinSolveError::SingularPivot { index: 0 })
        ));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let m = Matrix::zeros(3);
        assert!(matches!(
            solve_linear(&m, &[1.0, 2.0]),
            Err(LinSolveError::DimensionMismatch { n: 3, rhs_len: 2 })
        ));
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let m = Matrix::from_rows(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let x = solve_linear(&m, &[2.0, 3.0]).unwrap();
        assert_eq!(x, vec![3.0, 2.0]);
    }
}
