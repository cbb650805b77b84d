//! Discretized domain: a 1D interval or a 2D axis-aligned rectangle with
//! uniform cell-centered cells and a reflecting (Neumann) ghost layer.

use crate::error::SimError;

/// Uniform cell-centered grid on (0, lx) or (0, lx) x (0, ly).
///
/// In 1D `ny == 1` and the y extent is a dummy unit length that never enters
/// the domain measure or any stencil.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: usize,
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    dx: f64,
    dy: f64,
}

impl Grid {
    pub fn new_1d(length: f64, cells: usize) -> Result<Self, SimError> {
        if !(length > 0.0) {
            return Err(SimError::Invalid(format!("grid length must be positive, got {length}")));
        }
        if cells < 4 {
            return Err(SimError::Invalid(format!("grid needs at least 4 cells per axis, got {cells}")));
        }
        Ok(Grid {
            dim: 1,
            nx: cells,
            ny: 1,
            lx: length,
            ly: 1.0,
            dx: length / cells as f64,
            dy: 1.0,
        })
    }

    pub fn new_2d(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Self, SimError> {
        if !(lx > 0.0 && ly > 0.0) {
            return Err(SimError::Invalid(format!("grid lengths must be positive, got {lx} x {ly}")));
        }
        if nx < 4 || ny < 4 {
            return Err(SimError::Invalid(format!("grid needs at least 4 cells per axis, got {nx} x {ny}")));
        }
        Ok(Grid {
            dim: 2,
            nx,
            ny,
            lx,
            ly,
            dx: lx / nx as f64,
            dy: ly / ny as f64,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    pub fn n_cells(&self) -> usize {
        self.nx * self.ny
    }

    /// |Omega|: the domain measure (length in 1D, area in 2D).
    pub fn measure(&self) -> f64 {
        if self.dim == 1 {
            self.lx
        } else {
            self.lx * self.ly
        }
    }

    /// Volume of one cell; midpoint quadrature weight.
    pub fn cell_volume(&self) -> f64 {
        if self.dim == 1 {
            self.dx
        } else {
            self.dx * self.dy
        }
    }

    /// x coordinate of the center of cell column i.
    pub fn x_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx
    }

    /// y coordinate of the center of cell row j (0.5 in 1D, never used there).
    pub fn y_center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dy
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn measure_matches_quadrature_of_one() {
        let g = Grid::new_1d(2.5, 17).unwrap();
        let ones = Field::constant(&g, 1.0);
        let quad: f64 = ones.data().iter().sum::<f64>() * g.cell_volume();
        assert!((quad - g.measure()).abs() < 1e-12);

        let g2 = Grid::new_2d(1.5, 0.75, 12, 8).unwrap();
        let ones2 = Field::constant(&g2, 1.0);
        let quad2: f64 = ones2.data().iter().sum::<f64>() * g2.cell_volume();
        assert!((quad2 - g2.measure()).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(Grid::new_1d(0.0, 8).is_err());
        assert!(Grid::new_1d(1.0, 3).is_err());
        assert!(Grid::new_2d(1.0, 1.0, 4, 3).is_err());
        assert!(Grid::new_2d(-1.0, 1.0, 8, 8).is_err());
    }

    #[test]
    fn spacing_is_length_over_cells() {
        let g = Grid::new_1d(1.0, 128).unwrap();
        assert!((g.dx() - 1.0 / 128.0).abs() < 1e-15);
        let g2 = Grid::new_2d(2.0, 3.0, 10, 15).unwrap();
        assert!((g2.dx() - 0.2).abs() < 1e-15);
        assert!((g2.dy() - 0.2).abs() < 1e-15);
    }
}
