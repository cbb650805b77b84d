//! Cell-centered scalar fields and face-valued flux/gradient arrays.

use crate::error::SimError;
use crate::grid::Grid;

/// One value per grid cell, row-major: index = i + nx * j.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    nx: usize,
    ny: usize,
    data: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: &Grid) -> Self {
        Field { nx: grid.nx(), ny: grid.ny(), data: vec![0.0; grid.n_cells()] }
    }

    pub fn constant(grid: &Grid, value: f64) -> Self {
        Field { nx: grid.nx(), ny: grid.ny(), data: vec![value; grid.n_cells()] }
    }

    pub fn from_vec(grid: &Grid, data: Vec<f64>) -> Result<Self, SimError> {
        if data.len() != grid.n_cells() {
            return Err(SimError::Shape { expected: grid.n_cells(), got: data.len(), what: "field" });
        }
        Ok(Field { nx: grid.nx(), ny: grid.ny(), data })
    }

    /// Sample a function of the cell-center coordinates.
    pub fn from_fn(grid: &Grid, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut data = Vec::with_capacity(grid.n_cells());
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                data.push(f(grid.x_center(i), grid.y_center(j)));
            }
        }
        Field { nx: grid.nx(), ny: grid.ny(), data }
    }

    pub fn matches(&self, grid: &Grid) -> bool {
        self.nx == grid.nx() && self.ny == grid.ny()
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i + self.nx * j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i + self.nx * j]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Midpoint quadrature of the field over the domain.
    pub fn integral(&self, grid: &Grid) -> f64 {
        self.data.iter().sum::<f64>() * grid.cell_volume()
    }
}

/// Face-valued data: one value per cell face along each axis.
///
/// x faces form an (nx+1) x ny array (index ix + (nx+1) * j), y faces an
/// nx x (ny+1) array (index i + nx * jy). Boundary faces always carry 0,
/// which is how the no-flux condition enters every operator built on top.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceField {
    nx: usize,
    ny: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl FaceField {
    pub fn zeros(grid: &Grid) -> Self {
        let (nx, ny) = (grid.nx(), grid.ny());
        FaceField { nx, ny, x: vec![0.0; (nx + 1) * ny], y: vec![0.0; nx * (ny + 1)] }
    }

    #[inline]
    pub fn xf(&self, ix: usize, j: usize) -> f64 {
        self.x[ix + (self.nx + 1) * j]
    }

    #[inline]
    pub fn xf_mut(&mut self, ix: usize, j: usize) -> &mut f64 {
        &mut self.x[ix + (self.nx + 1) * j]
    }

    #[inline]
    pub fn yf(&self, i: usize, jy: usize) -> f64 {
        self.y[i + self.nx * jy]
    }

    #[inline]
    pub fn yf_mut(&mut self, i: usize, jy: usize) -> &mut f64 {
        &mut self.y[i + self.nx * jy]
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_vec_checks_length() {
        let g = Grid::new_1d(1.0, 8).unwrap();
        assert!(Field::from_vec(&g, vec![0.0; 7]).is_err());
        assert!(Field::from_vec(&g, vec![0.0; 8]).is_ok());
    }

    #[test]
    fn indexing_is_row_major() {
        let g = Grid::new_2d(1.0, 1.0, 4, 5).unwrap();
        let mut f = Field::zeros(&g);
        *f.at_mut(3, 2) = 7.5;
        assert_eq!(f.data()[3 + 4 * 2], 7.5);
        assert_eq!(f.at(3, 2), 7.5);
    }

    #[test]
    fn integral_of_constant_is_measure_times_value() {
        let g = Grid::new_2d(2.0, 0.5, 8, 4).unwrap();
        let f = Field::constant(&g, 3.0);
        assert!((f.integral(&g) - 3.0 * g.measure()).abs() < 1e-12);
    }
}
