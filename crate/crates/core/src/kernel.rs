//! Discretized two-variable kernels and the star-product algebra.
//!
//! A kernel `k(x, y)` is stored as the `M × M` matrix `K[i, j] = k(x_i, y_j)`
//! (or `k̂(k_i, κ_j)` in Fourier space). The star product
//! `(a ★ b)(x, y) = ∫ a(x, z) b(z, y) dz` is discretized with the left
//! Riemann rule, `A · B · w`, where `w` is the grid spacing in the space the
//! kernels live in (`Δ = L/M` physically, `1/L` spectrally). The operator
//! represented by a kernel is therefore the matrix `K · w`, and the identity
//! (the delta kernel) is `I / w`.

use faer::{c64, Mat};

use crate::error::{Error, Result};
use crate::fourier::Fourier;
use crate::grid::{Grid1D, Space};
use crate::linalg;

#[derive(Debug, Clone)]
pub struct Kernel2D {
    grid: Grid1D,
    space: Space,
    values: Mat<c64>,
}

impl Kernel2D {
    pub fn new(grid: Grid1D, space: Space, values: Mat<c64>) -> Result<Self> {
        if values.nrows() != grid.len() || values.ncols() != grid.len() {
            return Err(Error::ShapeMismatch(format!(
                "kernel values are {}x{}, grid has {} nodes",
                values.nrows(),
                values.ncols(),
                grid.len()
            )));
        }
        Ok(Self { grid, space, values })
    }

    pub fn zeros(grid: Grid1D, space: Space) -> Self {
        let n = grid.len();
        Self {
            grid,
            space,
            values: Mat::zeros(n, n),
        }
    }

    /// Samples `f` at the grid coordinates of `space`.
    pub fn from_fn(grid: Grid1D, space: Space, f: impl Fn(f64, f64) -> c64) -> Self {
        let c = grid.coordinates(space);
        let values = Mat::from_fn(grid.len(), grid.len(), |i, j| f(c[i], c[j]));
        Self { grid, space, values }
    }

    pub fn from_real_fn(grid: Grid1D, space: Space, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::from_fn(grid, space, |x, y| c64::new(f(x, y), 0.0))
    }

    /// The star-product identity `δ(x - y)`, represented as `I / w`.
    pub fn delta(grid: Grid1D, space: Space) -> Self {
        let w = grid.weight(space);
        let n = grid.len();
        let values = Mat::from_fn(n, n, |i, j| {
            if i == j { c64::new(1.0 / w, 0.0) } else { c64::new(0.0, 0.0) }
        });
        Self { grid, space, values }
    }

    /// Kernel whose operator matrix is `op`, i.e. values `op / w`.
    pub fn from_operator(grid: Grid1D, space: Space, op: Mat<c64>) -> Result<Self> {
        let w = grid.weight(space);
        Self::new(grid, space, linalg::scaled(&op, c64::new(1.0 / w, 0.0)))
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &Mat<c64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Mat<c64> {
        &mut self.values
    }

    pub fn into_values(self) -> Mat<c64> {
        self.values
    }

    pub fn weight(&self) -> f64 {
        self.grid.weight(self.space)
    }

    /// Matrix of the integral operator, `K · w`.
    pub fn operator(&self) -> Mat<c64> {
        linalg::scaled(&self.values, c64::new(self.weight(), 0.0))
    }

    pub fn at(&self, i: usize, j: usize) -> c64 {
        self.values[(i, j)]
    }

    pub fn check_compatible(&self, other: &Kernel2D) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch {
                expected: self.space,
                found: other.space,
            });
        }
        if self.grid != other.grid {
            return Err(Error::ShapeMismatch(format!(
                "grids differ: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    fn expect_space(&self, space: Space) -> Result<()> {
        if self.space != space {
            return Err(Error::SpaceMismatch {
                expected: space,
                found: self.space,
            });
        }
        Ok(())
    }

    /// `(a ★ b)(x, y) = ∫ a(x, z) b(z, y) dz`.
    pub fn star(&self, other: &Kernel2D) -> Result<Kernel2D> {
        self.check_compatible(other)?;
        let values = linalg::mul(
            self.values.as_ref(),
            other.values.as_ref(),
            c64::new(self.weight(), 0.0),
        );
        Ok(Self {
            grid: self.grid,
            space: self.space,
            values,
        })
    }

    /// `(a ★ b†)(x, y) = ∫ a(x, z) b*(y, z) dz`.
    pub fn star_adjoint(&self, other: &Kernel2D) -> Result<Kernel2D> {
        self.check_compatible(other)?;
        let values = linalg::mul_adjoint(
            self.values.as_ref(),
            other.values.as_ref(),
            c64::new(self.weight(), 0.0),
        );
        Ok(Self {
            grid: self.grid,
            space: self.space,
            values,
        })
    }

    /// Kernel of the adjoint operator, `a†(x, y) = a*(y, x)`.
    pub fn adjoint(&self) -> Kernel2D {
        Self {
            grid: self.grid,
            space: self.space,
            values: self.values.adjoint().to_owned(),
        }
    }

    /// `L²` norm of the kernel, equal to the Hilbert–Schmidt norm of the operator.
    pub fn hs_norm(&self) -> f64 {
        self.weight() * self.values.norm_l2()
    }

    pub fn sup_norm(&self) -> f64 {
        linalg::max_abs(self.values.as_ref())
    }

    pub fn scale(&self, s: c64) -> Kernel2D {
        Self {
            grid: self.grid,
            space: self.space,
            values: linalg::scaled(&self.values, s),
        }
    }

    pub fn add(&self, other: &Kernel2D) -> Result<Kernel2D> {
        self.check_compatible(other)?;
        Ok(Self {
            values: &self.values + &other.values,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Kernel2D) -> Result<Kernel2D> {
        self.check_compatible(other)?;
        Ok(Self {
            values: &self.values - &other.values,
            ..self.clone()
        })
    }

    /// Multiplies row `i` (first argument `x_i` or `k_i`) by `factors[i]`.
    pub fn scale_rows(&self, factors: &[c64]) -> Kernel2D {
        assert_eq!(factors.len(), self.grid.len());
        let values = Mat::from_fn(self.grid.len(), self.grid.len(), |i, j| {
            factors[i] * self.values[(i, j)]
        });
        Self {
            values,
            ..self.clone()
        }
    }

    /// Forward transform (physical → Fourier).
    pub fn ft2(&self) -> Result<Kernel2D> {
        self.ft2_with(&Fourier::new(self.grid))
    }

    pub fn ft2_with(&self, fourier: &Fourier) -> Result<Kernel2D> {
        self.expect_space(Space::Physical)?;
        Ok(Self {
            grid: self.grid,
            space: Space::Fourier,
            values: fourier.forward_2d(&self.values),
        })
    }

    /// Inverse transform (Fourier → physical).
    pub fn ift2(&self) -> Result<Kernel2D> {
        self.ift2_with(&Fourier::new(self.grid))
    }

    pub fn ift2_with(&self, fourier: &Fourier) -> Result<Kernel2D> {
        self.expect_space(Space::Fourier)?;
        Ok(Self {
            grid: self.grid,
            space: Space::Physical,
            values: fourier.inverse_2d(&self.values),
        })
    }
}

/// An `n × n` array of kernels acting on `L²(ℝ; ℂⁿ)`.
#[derive(Debug, Clone)]
pub struct BlockKernel {
    n: usize,
    blocks: Vec<Kernel2D>,
    bisymmetric: bool,
}

impl BlockKernel {
    /// Blocks in row-major order.
    pub fn new(n: usize, blocks: Vec<Kernel2D>) -> Result<Self> {
        if n == 0 || blocks.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks for a {n}x{n} block kernel",
                blocks.len()
            )));
        }
        for b in &blocks[1..] {
            blocks[0].check_compatible(b)?;
        }
        Ok(Self {
            n,
            blocks,
            bisymmetric: false,
        })
    }

    /// `[[diag, off], [off, diag]]`.
    pub fn bisymmetric(diag: Kernel2D, off: Kernel2D) -> Result<Self> {
        diag.check_compatible(&off)?;
        Ok(Self {
            n: 2,
            blocks: vec![diag.clone(), off.clone(), off, diag],
            bisymmetric: true,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_bisymmetric(&self) -> bool {
        self.bisymmetric
    }

    pub fn block(&self, i: usize, j: usize) -> &Kernel2D {
        &self.blocks[i * self.n + j]
    }

    pub fn grid(&self) -> &Grid1D {
        self.blocks[0].grid()
    }

    pub fn space(&self) -> Space {
        self.blocks[0].space()
    }

    pub fn weight(&self) -> f64 {
        self.blocks[0].weight()
    }

    /// The `(nM) × (nM)` value matrix with block `(a, b)` at rows
    /// `a·M..(a+1)·M` and columns `b·M..(b+1)·M`.
    pub fn to_flat(&self) -> Mat<c64> {
        let m = self.grid().len();
        Mat::from_fn(self.n * m, self.n * m, |i, j| {
            self.block(i / m, j / m).at(i % m, j % m)
        })
    }

    pub fn from_flat(grid: Grid1D, space: Space, n: usize, flat: &Mat<c64>) -> Result<Self> {
        let m = grid.len();
        if flat.nrows() != n * m || flat.ncols() != n * m {
            return Err(Error::ShapeMismatch(format!(
                "flat block matrix is {}x{}, expected {}",
                flat.nrows(),
                flat.ncols(),
                n * m
            )));
        }
        let mut blocks = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let v = Mat::from_fn(m, m, |i, j| flat[(a * m + i, b * m + j)]);
                blocks.push(Kernel2D::new(grid, space, v)?);
            }
        }
        Self::new(n, blocks)
    }

    pub fn star(&self, other: &BlockKernel) -> Result<BlockKernel> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "block dimensions {} and {}",
                self.n, other.n
            )));
        }
        self.blocks[0].check_compatible(&other.blocks[0])?;
        let flat = linalg::mul(
            self.to_flat().as_ref(),
            other.to_flat().as_ref(),
            c64::new(self.weight(), 0.0),
        );
        let mut out = Self::from_flat(*self.grid(), self.space(), self.n, &flat)?;
        out.bisymmetric = self.bisymmetric && other.bisymmetric;
        Ok(out)
    }

    pub fn hs_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.hs_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// For a bisymmetric `[[a, b], [b, a]]`, the decoupled pair `(a + b, a - b)`.
    pub fn sum_difference(&self) -> Result<(Kernel2D, Kernel2D)> {
        if self.n != 2 {
            return Err(Error::ShapeMismatch("sum/difference needs 2x2 blocks".into()));
        }
        let a = self.block(0, 0);
        let b = self.block(0, 1);
        Ok((a.add(b)?, a.sub(b)?))
    }

    /// Inverse of [`Self::sum_difference`].
    pub fn from_sum_difference(plus: &Kernel2D, minus: &Kernel2D) -> Result<Self> {
        let half = c64::new(0.5, 0.0);
        let a = plus.add(minus)?.scale(half);
        let b = plus.sub(minus)?.scale(half);
        Self::bisymmetric(a, b)
    }

    pub fn map(&self, f: impl Fn(&Kernel2D) -> Result<Kernel2D>) -> Result<Self> {
        let blocks = self.blocks.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n: self.n,
            blocks,
            bisymmetric: self.bisymmetric,
        })
    }
}
