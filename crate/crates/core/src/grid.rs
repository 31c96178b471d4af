//! Uniform periodic grid on `[-L/2, L/2)` and its Fourier dual.

use crate::error::{Error, Result};

/// Which representation a kernel's values live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Physical,
    Fourier,
}

/// `M` equispaced nodes `x_j = -L/2 + j L/M` on a periodic box of length `L`.
///
/// Frequencies are stored in natural (monotone) order,
/// `k_m = m/L` for `m = -M/2, ..., M/2 - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    length: f64,
    nodes: usize,
}

impl Grid1D {
    pub fn new(length: f64, nodes: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        if nodes < 8 || !nodes.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "node count must be a power of two >= 8, got {nodes}"
            )));
        }
        Ok(Self { length, nodes })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.nodes
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Physical spacing `L/M`.
    pub fn spacing(&self) -> f64 {
        self.length / self.nodes as f64
    }

    /// Spectral spacing `1/L`.
    pub fn frequency_spacing(&self) -> f64 {
        1.0 / self.length
    }

    /// Quadrature weight of the star product in the given space.
    pub fn weight(&self, space: Space) -> f64 {
        match space {
            Space::Physical => self.spacing(),
            Space::Fourier => self.frequency_spacing(),
        }
    }

    pub fn point(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.nodes).map(|j| self.point(j)).collect()
    }

    /// Signed mode number `m` of the natural-order index `r`.
    pub fn mode(&self, r: usize) -> i64 {
        r as i64 - (self.nodes / 2) as i64
    }

    pub fn frequency(&self, r: usize) -> f64 {
        self.mode(r) as f64 / self.length
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.nodes).map(|r| self.frequency(r)).collect()
    }

    /// Natural-order index of the zero frequency.
    pub fn zero_mode(&self) -> usize {
        self.nodes / 2
    }

    /// Coordinates for the given space.
    pub fn coordinates(&self, space: Space) -> Vec<f64> {
        match space {
            Space::Physical => self.points(),
            Space::Fourier => self.frequencies(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reaction_diffusion_grid() {
        let g = Grid1D::new(20.0, 128).unwrap();
        assert_eq!(g.spacing(), 0.15625);
        assert_eq!(g.point(0), -10.0);
        assert_eq!(g.point(127), 10.0 - 0.15625);
    }

    #[test]
    fn kdv_grid_frequencies() {
        let g = Grid1D::new(40.0, 256).unwrap();
        assert_eq!(g.spacing(), 0.15625);
        let k = g.frequencies();
        assert_eq!(k[0], -3.2);
        assert!((k[255] - 3.175).abs() < 1e-15);
        for w in k.windows(2) {
            assert!((w[1] - w[0] - 0.025).abs() < 1e-14);
        }
    }

    #[test]
    fn small_grid_points_are_integers() {
        let g = Grid1D::new(8.0, 8).unwrap();
        assert_eq!(g.points(), vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn frequencies_symmetric_except_nyquist() {
        let g = Grid1D::new(10.0, 16).unwrap();
        let k = g.frequencies();
        assert_eq!(k[0], -0.8);
        for r in 1..16 {
            assert_eq!(k[r], -k[16 - r]);
        }
        assert_eq!(k[g.zero_mode()], 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Grid1D::new(20.0, 100).is_err());
        assert!(Grid1D::new(20.0, 4).is_err());
        assert!(Grid1D::new(0.0, 64).is_err());
        assert!(Grid1D::new(-1.0, 64).is_err());
        assert!(Grid1D::new(f64::NAN, 64).is_err());
    }
}
