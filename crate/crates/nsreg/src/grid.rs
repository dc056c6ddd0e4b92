//! Uniform periodic grid on the box [0, 2π)³.
//!
//! The box length is fixed at 2π so that wavenumbers are integers and the
//! quadrature weight is simply (2π/n)³. Real arrays are laid out row-major
//! with z fastest; spectral arrays use the real-input half-space layout
//! (n, n, n/2 + 1) over the z axis.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Box side length (fixed).
pub const BOX_LENGTH: f64 = 2.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    dealias_fraction: f64,
}

impl Grid {
    /// Grid with n points per axis and the default 2/3 dealias rule.
    ///
    /// n must be a power of two and at least 4.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_dealias_fraction(n, 2.0 / 3.0)
    }

    pub fn with_dealias_fraction(n: usize, dealias_fraction: f64) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n must be a power of two >= 4, got {n}"
            )));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(Error::InvalidGrid(format!(
                "dealias_fraction must lie in (0, 1], got {dealias_fraction}"
            )));
        }
        Ok(Self { n, dealias_fraction })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    /// Number of grid points n³.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing 2π/n.
    pub fn spacing(&self) -> f64 {
        BOX_LENGTH / self.n as f64
    }

    /// Quadrature weight h³ of the uniform Riemann sum.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    /// Coordinate of grid index i along any axis.
    pub fn coord(&self, i: usize) -> f64 {
        BOX_LENGTH * i as f64 / self.n as f64
    }

    /// Integer wavenumber stored at index j: the set {-n/2+1, ..., n/2}.
    pub fn wavenumber(&self, j: usize) -> i64 {
        let n = self.n as i64;
        let j = j as i64;
        if j <= n / 2 {
            j
        } else {
            j - n
        }
    }

    /// Wavenumber used for spectral differentiation.
    ///
    /// The unmatched Nyquist mode k = n/2 carries a pure cosine component
    /// whose derivative has no representation on the grid; it is mapped to 0.
    pub fn deriv_wavenumber(&self, j: usize) -> f64 {
        let k = self.wavenumber(j);
        if k == (self.n / 2) as i64 {
            0.0
        } else {
            k as f64
        }
    }

    /// Dealias cutoff: modes with |k_i| > dealias_fraction * n/2 are dropped.
    pub fn dealias_cutoff(&self) -> f64 {
        self.dealias_fraction * self.n as f64 / 2.0
    }

    /// Length of the half-space spectral axis, n/2 + 1.
    pub fn spectral_len_z(&self) -> usize {
        self.n / 2 + 1
    }

    pub fn same_as(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "expected n={} dealias={}, got n={} dealias={}",
                self.n, self.dealias_fraction, other.n, other.dealias_fraction
            )))
        }
    }
}
