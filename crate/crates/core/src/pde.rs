//! Right-hand sides of the target equations, evaluated pseudo-spectrally.
//!
//! These define the PDEs independently of the Riccati construction; the
//! direct solvers integrate them and the residual checks plug Riccati
//! solutions into them.

use faer::{c64, Mat};

use crate::error::Result;
use crate::fourier::Fourier;
use crate::grid::{Grid1D, Space};
use crate::kernel::{BlockKernel, Kernel2D};
use crate::linalg::{self, ONE};
use crate::riccati::Coupling;
use crate::series::StarSeries;
use crate::symbol::Symbol;

/// `s(∂₁) k` for a physical kernel.
pub fn apply_symbol(s: &Symbol, k: &Kernel2D, fourier: &Fourier) -> Result<Kernel2D> {
    let factors: Vec<c64> = k.grid().frequencies().iter().map(|&f| s.eval(f)).collect();
    k.ft2_with(fourier)?.scale_rows(&factors).ift2_with(fourier)
}

/// `s(±∂) g` for samples on a line.
pub fn apply_symbol_1d(s: &Symbol, g: &[c64], fourier: &Fourier, reflect: bool) -> Vec<c64> {
    let sign = if reflect { -1.0 } else { 1.0 };
    let mut g_hat = fourier.forward_1d(g);
    for (v, k) in g_hat.iter_mut().zip(fourier.grid().frequencies()) {
        *v *= s.eval(sign * k);
    }
    fourier.inverse_1d(&g_hat)
}

/// `d(∂₁) g - g ★ (b g)`.
pub fn quadratic_rhs(d: &Symbol, b: &Coupling, g: &Kernel2D, fourier: &Fourier) -> Result<Kernel2D> {
    let linear = apply_symbol(d, g, fourier)?;
    let bg = b.apply_physical(g, fourier)?;
    linear.sub(&g.star(&bg)?)
}

/// `D G - G ★ (B G)` for 2×2 block kernels, operators row-major.
pub fn block_rhs(
    d: &[Symbol; 4],
    b: &[Coupling; 4],
    g: &BlockKernel,
    fourier: &Fourier,
) -> Result<BlockKernel> {
    let grid = *g.grid();
    let mut dg = Vec::with_capacity(4);
    let mut bg = Vec::with_capacity(4);
    for a in 0..2 {
        for col in 0..2 {
            let mut lin = Kernel2D::zeros(grid, Space::Physical);
            let mut cpl = Kernel2D::zeros(grid, Space::Physical);
            for c in 0..2 {
                if !d[2 * a + c].is_zero() {
                    lin = lin.add(&apply_symbol(&d[2 * a + c], g.block(c, col), fourier)?)?;
                }
                if !b[2 * a + c].is_zero() {
                    cpl = cpl.add(&b[2 * a + c].apply_physical(g.block(c, col), fourier)?)?;
                }
            }
            dg.push(lin);
            bg.push(cpl);
        }
    }
    let bg = BlockKernel::new(2, bg)?;
    let nonlinear = g.star(&bg)?;
    let blocks = (0..4)
        .map(|n| dg[n].sub(nonlinear.block(n / 2, n % 2)))
        .collect::<Result<Vec<_>>>()?;
    BlockKernel::new(2, blocks)
}

/// Operator matrix of `F(g ★ g†)`, where `f★ = i F`.
pub fn odd_nonlinear_operator(f: &StarSeries, g: &Kernel2D) -> Result<Mat<c64>> {
    let c = g.star_adjoint(g)?.operator();
    f.real_part_hermitian(&c)
}

/// `∂t g = -i (h(∂₁) g + g ★ F(g ★ g†))`.
pub fn odd_rhs(h: &Symbol, f: &StarSeries, g: &Kernel2D, fourier: &Fourier) -> Result<Kernel2D> {
    let linear = apply_symbol(h, g, fourier)?;
    let fc = odd_nonlinear_operator(f, g)?;
    let nonlinear = linalg::mul(g.values().as_ref(), fc.as_ref(), ONE);
    let total = Kernel2D::new(*g.grid(), g.space(), nonlinear)?.add(&linear)?;
    Ok(total.scale(c64::new(0.0, -1.0)))
}

/// Periodic convolution `(a ∗ g)(x_i) = Δ Σ_j a(x_j) g(x_i - x_j)` by direct
/// summation. On the centred grid `x_i - x_j` is node `i - j + M/2 (mod M)`.
pub fn convolve(grid: &Grid1D, a: &[c64], g: &[c64]) -> Vec<c64> {
    let m = grid.len();
    let h = grid.spacing();
    (0..m)
        .map(|i| {
            let mut acc = c64::new(0.0, 0.0);
            for (j, aj) in a.iter().enumerate() {
                acc += aj * g[(i + m + m / 2 - j) % m];
            }
            acc * h
        })
        .collect()
}

/// `∂t g = d(-∂) g - (b(-∂) g) ∗ g`.
pub fn conv_rhs(d: &Symbol, b: &Symbol, g: &[c64], fourier: &Fourier) -> Vec<c64> {
    let linear = apply_symbol_1d(d, g, fourier, true);
    let bg = apply_symbol_1d(b, g, fourier, true);
    let conv = convolve(fourier.grid(), &bg, g);
    linear.iter().zip(&conv).map(|(l, c)| l - c).collect()
}

/// `∂t g = d(∂) g - g ∫ g`.
pub fn fkpp_rhs(d: &Symbol, g: &[c64], fourier: &Fourier) -> Vec<c64> {
    let linear = apply_symbol_1d(d, g, fourier, false);
    let mass: c64 = g.iter().sum::<c64>() * fourier.grid().spacing();
    linear.iter().zip(g).map(|(l, v)| l - v * mass).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convolution_matches_spectral_product() {
        let grid = Grid1D::new(12.0, 64).unwrap();
        let fourier = Fourier::new(grid);
        let a: Vec<c64> = grid.points().iter().map(|x| c64::new((-x * x).exp(), 0.1 * x)).collect();
        let g: Vec<c64> = grid.points().iter().map(|x| c64::new(1.0 / (x - 0.5).cosh(), 0.0)).collect();
        let direct = convolve(&grid, &a, &g);
        let prod: Vec<c64> = fourier
            .forward_1d(&a)
            .iter()
            .zip(fourier.forward_1d(&g))
            .map(|(x, y)| x * y)
            .collect();
        let spectral = fourier.inverse_1d(&prod);
        for (u, v) in direct.iter().zip(&spectral) {
            assert!((u - v).norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_symbol_on_kernel() {
        let grid = Grid1D::new(20.0, 64).unwrap();
        let fourier = Fourier::new(grid);
        let g = Kernel2D::from_real_fn(grid, Space::Physical, |x, y| (-x * x - y * y).exp());
        let dg = apply_symbol(&Symbol::monomial(1, 1.0), &g, &fourier).unwrap();
        let exact = Kernel2D::from_real_fn(grid, Space::Physical, |x, y| -2.0 * x * (-x * x - y * y).exp());
        assert!(dg.sub(&exact).unwrap().sup_norm() < 1e-10);
    }
}
