//! Real-space sampled fields on the periodic grid.

use crate::error::{Error, Result};
use crate::grid::Grid;
use ndarray::Array3;

/// Scalar samples on the n³ grid, row-major with z fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Array3<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        let n = grid.n();
        Self {
            grid,
            values: Array3::zeros((n, n, n)),
        }
    }

    /// Build from a function of the grid coordinates.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        let n = grid.n();
        let values = Array3::from_shape_fn((n, n, n), |(i, j, k)| {
            f(grid.coord(i), grid.coord(j), grid.coord(k))
        });
        Self { grid, values }
    }

    /// Wrap raw values, rejecting non-finite entries.
    pub fn from_values(grid: Grid, values: Array3<f64>) -> Result<Self> {
        let n = grid.n();
        if values.dim() != (n, n, n) {
            return Err(Error::GridMismatch(format!(
                "values shape {:?} does not match grid n={}",
                values.dim(),
                n
            )));
        }
        if let Some(idx) = first_non_finite(&values) {
            return Err(Error::NonFinite {
                index: idx,
                value: values.as_slice().map(|s| s[idx]).unwrap_or(f64::NAN),
            });
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_values_unchecked(grid: Grid, values: Array3<f64>) -> Self {
        Self { grid, values }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &Array3<f64> {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut Array3<f64> {
        &mut self.values
    }

    pub fn check_finite(&self) -> Result<()> {
        match first_non_finite(&self.values) {
            Some(idx) => Err(Error::NonFinite {
                index: idx,
                value: self.values.as_slice().map(|s| s[idx]).unwrap_or(f64::NAN),
            }),
            None => Ok(()),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    /// Pointwise map into a new field.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.mapv(&f),
        }
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map(|v| a * v)
    }
}

fn first_non_finite(values: &Array3<f64>) -> Option<usize> {
    values.iter().position(|v| !v.is_finite())
}

/// Three scalar components sharing one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    components: [ScalarField; 3],
}

impl VectorField {
    pub fn new(components: [ScalarField; 3]) -> Result<Self> {
        let g = components[0].grid();
        g.same_as(&components[1].grid())?;
        g.same_as(&components[2].grid())?;
        Ok(Self { components })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            components: [
                ScalarField::zeros(grid),
                ScalarField::zeros(grid),
                ScalarField::zeros(grid),
            ],
        }
    }

    pub fn from_fns(
        grid: Grid,
        fx: impl Fn(f64, f64, f64) -> f64,
        fy: impl Fn(f64, f64, f64) -> f64,
        fz: impl Fn(f64, f64, f64) -> f64,
    ) -> Self {
        Self {
            components: [
                ScalarField::from_fn(grid, fx),
                ScalarField::from_fn(grid, fy),
                ScalarField::from_fn(grid, fz),
            ],
        }
    }

    pub fn grid(&self) -> Grid {
        self.components[0].grid()
    }

    pub fn component(&self, i: usize) -> &ScalarField {
        &self.components[i]
    }

    pub fn components(&self) -> &[ScalarField; 3] {
        &self.components
    }

    pub fn check_finite(&self) -> Result<()> {
        for c in &self.components {
            c.check_finite()?;
        }
        Ok(())
    }

    /// Pointwise magnitude |u|.
    pub fn magnitude(&self) -> ScalarField {
        let grid = self.grid();
        let (a, b, c) = (
            self.components[0].values(),
            self.components[1].values(),
            self.components[2].values(),
        );
        let mut out = a.clone();
        ndarray::Zip::from(&mut out).and(b).and(c).for_each(|o, &y, &z| {
            *o = (*o * *o + y * y + z * z).sqrt();
        });
        ScalarField::from_values_unchecked(grid, out)
    }

    pub fn max_abs(&self) -> f64 {
        // max over grid points of |u| (component-wise max is not the same)
        let (a, b, c) = (
            self.components[0].values(),
            self.components[1].values(),
            self.components[2].values(),
        );
        let mut m = 0.0f64;
        ndarray::Zip::from(a).and(b).and(c).for_each(|&x, &y, &z| {
            m = m.max((x * x + y * y + z * z).sqrt());
        });
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            components: [
                self.components[0].scale(s),
                self.components[1].scale(s),
                self.components[2].scale(s),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_values() {
        let g = Grid::new(4).unwrap();
        let mut v = Array3::zeros((4, 4, 4));
        v[[1, 2, 3]] = f64::NAN;
        let err = ScalarField::from_values(g, v).unwrap_err();
        match err {
            Error::NonFinite { index, .. } => {
                // flat index of (1,2,3) in row-major (z fastest)
                assert_eq!(index, 1 * 16 + 2 * 4 + 3);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_mismatched_component_grids() {
        let g4 = Grid::new(4).unwrap();
        let g8 = Grid::new(8).unwrap();
        let r = VectorField::new([
            ScalarField::zeros(g4),
            ScalarField::zeros(g8),
            ScalarField::zeros(g4),
        ]);
        assert!(r.is_err());
    }

    #[test]
    fn magnitude_of_unit_vector() {
        let g = Grid::new(4).unwrap();
        let v = VectorField::from_fns(g, |_, _, _| 3.0, |_, _, _| 4.0, |_, _, _| 0.0);
        let m = v.magnitude();
        assert!(m.values().iter().all(|&x| (x - 5.0).abs() < 1e-15));
    }
}
