//! Uniform grid on the dimensionless height interval [0, 1].

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs at least 4 nodes for the second-order stencils, got {n}")]
    TooFewNodes { n: usize },
}

/// `n` equally spaced nodes with `z_j = j / (n - 1)`, `j = 0..n-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    dz: f64,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self, GridError> {
        if n < 4 {
            return Err(GridError::TooFewNodes { n });
        }
        Ok(Grid {
            n,
            dz: 1.0 / (n - 1) as f64,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dz(&self) -> f64 {
        self.dz
    }

    pub fn z(&self, j: usize) -> f64 {
        j as f64 * self.dz
    }

    pub fn zs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.z(j))
    }

    /// The next grid in a refinement ladder: every interval halved, so the
    /// current nodes are a subset of the refined ones.
    pub fn refined(&self) -> Grid {
        Grid {
            n: 2 * self.n - 1,
            dz: 0.5 * self.dz,
        }
    }
}
