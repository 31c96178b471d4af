//! Discrete approximations of the continuous Fourier transform on a
//! [`Grid1D`].
//!
//! Kernels are transformed as operators: the first (row) argument with
//! `e^{-2πikx}` and the second (column) argument with `e^{+2πiκy}`,
//!
//! ```text
//! k̂(k, κ) = ∫∫ k(x, y) e^{-2πi k x} e^{+2πi κ y} dx dy.
//! ```
//!
//! Under this pairing `∂_x` becomes multiplication by `2πik`, the star
//! product maps to the star product of transforms (with spectral weight
//! `1/L`), and the kernel adjoint is still the conjugate transpose. Both
//! directions are exact discrete inverses of each other; the centring phase
//! for the `-L/2` offset of the grid is `(-1)^m`.

use std::sync::Arc;

use faer::{c64, Mat};
use rustfft::{Fft, FftPlanner};

use crate::grid::Grid1D;

/// Sign of the exponent in a one-dimensional forward transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// `e^{-2πikx}`, used for the first argument.
    Minus,
    /// `e^{+2πiκy}`, used for the second argument.
    Plus,
}

/// FFT plans for one grid.
#[derive(Clone)]
pub struct Fourier {
    grid: Grid1D,
    minus: Arc<dyn Fft<f64>>,
    plus: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fourier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fourier").field("grid", &self.grid).finish()
    }
}

impl Fourier {
    pub fn new(grid: Grid1D) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            grid,
            minus: planner.plan_fft_forward(grid.len()),
            plus: planner.plan_fft_inverse(grid.len()),
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    fn plan(&self, sign: Sign) -> &Arc<dyn Fft<f64>> {
        match sign {
            Sign::Minus => &self.minus,
            Sign::Plus => &self.plus,
        }
    }

    fn scratch(&self) -> Vec<c64> {
        let len = self
            .minus
            .get_inplace_scratch_len()
            .max(self.plus.get_inplace_scratch_len());
        vec![c64::new(0.0, 0.0); len]
    }

    /// Physical samples to natural-order spectrum, in place.
    fn to_spectrum(&self, buf: &mut [c64], sign: Sign, scratch: &mut [c64]) {
        let half = self.grid.len() / 2;
        let dx = self.grid.spacing();
        self.plan(sign).process_with_scratch(buf, scratch);
        buf.rotate_left(half);
        for (r, v) in buf.iter_mut().enumerate() {
            *v *= if r % 2 == 0 { dx } else { -dx };
        }
    }

    /// Inverse of [`Self::to_spectrum`] for the same `sign`.
    fn from_spectrum(&self, buf: &mut [c64], sign: Sign, scratch: &mut [c64]) {
        let half = self.grid.len() / 2;
        let dk = self.grid.frequency_spacing();
        for (r, v) in buf.iter_mut().enumerate() {
            *v *= if r % 2 == 0 { dk } else { -dk };
        }
        buf.rotate_right(half);
        let opposite = match sign {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        };
        self.plan(opposite).process_with_scratch(buf, scratch);
    }

    /// `f̂(k_m) = Δ Σ_j f(x_j) e^{-2πi k_m x_j}`.
    pub fn forward_1d(&self, samples: &[c64]) -> Vec<c64> {
        assert_eq!(samples.len(), self.grid.len());
        let mut buf = samples.to_vec();
        let mut scratch = self.scratch();
        self.to_spectrum(&mut buf, Sign::Minus, &mut scratch);
        buf
    }

    /// `f(x_j) = (1/L) Σ_m f̂(k_m) e^{+2πi k_m x_j}`.
    pub fn inverse_1d(&self, spectrum: &[c64]) -> Vec<c64> {
        assert_eq!(spectrum.len(), self.grid.len());
        let mut buf = spectrum.to_vec();
        let mut scratch = self.scratch();
        self.from_spectrum(&mut buf, Sign::Minus, &mut scratch);
        buf
    }

    /// Two-dimensional forward transform of a physical kernel.
    pub fn forward_2d(&self, values: &Mat<c64>) -> Mat<c64> {
        let mut out = values.clone();
        self.apply_2d(&mut out, true);
        out
    }

    /// Exact discrete inverse of [`Self::forward_2d`].
    pub fn inverse_2d(&self, spectrum: &Mat<c64>) -> Mat<c64> {
        let mut out = spectrum.clone();
        self.apply_2d(&mut out, false);
        out
    }

    /// Transform of the first argument only (each column), in place.
    pub fn forward_rows_in_place(&self, values: &mut Mat<c64>) {
        let mut scratch = self.scratch();
        for j in 0..values.ncols() {
            self.to_spectrum(values.col_as_slice_mut(j), Sign::Minus, &mut scratch);
        }
    }

    pub fn inverse_rows_in_place(&self, values: &mut Mat<c64>) {
        let mut scratch = self.scratch();
        for j in 0..values.ncols() {
            self.from_spectrum(values.col_as_slice_mut(j), Sign::Minus, &mut scratch);
        }
    }

    fn apply_2d(&self, values: &mut Mat<c64>, forward: bool) {
        let n = self.grid.len();
        assert_eq!(values.nrows(), n);
        assert_eq!(values.ncols(), n);
        let mut scratch = self.scratch();
        // First argument: contiguous columns.
        for j in 0..n {
            let col = values.col_as_slice_mut(j);
            if forward {
                self.to_spectrum(col, Sign::Minus, &mut scratch);
            } else {
                self.from_spectrum(col, Sign::Minus, &mut scratch);
            }
        }
        // Second argument: strided rows, via a buffer.
        let mut row = vec![c64::new(0.0, 0.0); n];
        for i in 0..n {
            for (j, v) in row.iter_mut().enumerate() {
                *v = values[(i, j)];
            }
            if forward {
                self.to_spectrum(&mut row, Sign::Plus, &mut scratch);
            } else {
                self.from_spectrum(&mut row, Sign::Plus, &mut scratch);
            }
            for (j, v) in row.iter().enumerate() {
                values[(i, j)] = *v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn direct_dft(grid: &Grid1D, f: &[c64]) -> Vec<c64> {
        let x = grid.points();
        grid.frequencies()
            .iter()
            .map(|&k| {
                f.iter()
                    .zip(&x)
                    .map(|(v, &xj)| v * c64::from_polar(grid.spacing(), -2.0 * PI * k * xj))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_direct_sum() {
        let grid = Grid1D::new(6.0, 16).unwrap();
        let f: Vec<c64> = (0..16)
            .map(|j| c64::new((j as f64 * 0.37).sin(), (j as f64 * 0.11).cos()))
            .collect();
        let fast = Fourier::new(grid).forward_1d(&f);
        let slow = direct_dft(&grid, &f);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn gaussian_is_self_dual_1d() {
        let grid = Grid1D::new(20.0, 256).unwrap();
        let f: Vec<c64> = grid
            .points()
            .iter()
            .map(|x| c64::new((-PI * x * x).exp(), 0.0))
            .collect();
        let fhat = Fourier::new(grid).forward_1d(&f);
        for (v, k) in fhat.iter().zip(grid.frequencies()) {
            assert!((v - c64::new((-PI * k * k).exp(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn shift_by_one_multiplies_by_phase() {
        // f(x - 1) has transform e^{-2πik} f̂(k) under the e^{-2πikx} kernel
        let grid = Grid1D::new(20.0, 256).unwrap();
        let four = Fourier::new(grid);
        let gauss = |s: f64| -> Vec<c64> {
            grid.points().iter().map(|x| c64::new((-PI * (x - s).powi(2)).exp(), 0.0)).collect()
        };
        let (base, moved) = (four.forward_1d(&gauss(0.0)), four.forward_1d(&gauss(1.0)));
        let quadrature = direct_dft(&grid, &gauss(1.0));
        for (r, k) in grid.frequencies().iter().enumerate() {
            let expected = c64::from_polar(1.0, -2.0 * PI * k) * base[r];
            assert!((moved[r] - expected).norm() < 1e-12);
            assert!((moved[r] - quadrature[r]).norm() < 1e-12);
        }
    }

    #[test]
    fn derivative_is_multiplication_by_2_pi_i_k() {
        let grid = Grid1D::new(20.0, 128).unwrap();
        let four = Fourier::new(grid);
        let f: Vec<c64> = grid
            .points()
            .iter()
            .map(|x| c64::new((-x * x).exp(), 0.0))
            .collect();
        let mut fhat = four.forward_1d(&f);
        for (v, k) in fhat.iter_mut().zip(grid.frequencies()) {
            *v *= c64::new(0.0, 2.0 * PI * k);
        }
        let df = four.inverse_1d(&fhat);
        for (d, x) in df.iter().zip(grid.points()) {
            assert!((d - c64::new(-2.0 * x * (-x * x).exp(), 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn round_trip_2d() {
        let grid = Grid1D::new(5.0, 16).unwrap();
        let four = Fourier::new(grid);
        let m = Mat::from_fn(16, 16, |i, j| {
            c64::new((i as f64 - 2.0 * j as f64).sin(), (i * j) as f64 / 50.0)
        });
        let back = four.inverse_2d(&four.forward_2d(&m));
        for j in 0..16 {
            for i in 0..16 {
                assert!((back[(i, j)] - m[(i, j)]).norm() < 1e-13);
            }
        }
    }
}
