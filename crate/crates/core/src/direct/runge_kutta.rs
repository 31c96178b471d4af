//! Classical RK4 method-of-lines solvers: the two-component reaction–diffusion
//! system and the one-dimensional oracles.

use faer::{c64, Mat};

use super::{DirectRun, Monitor, StepperConfig};
use crate::error::Result;
use crate::fourier::Fourier;
use crate::grid::{Grid1D, Space};
use crate::kernel::{BlockKernel, Kernel2D};
use crate::pde::{conv_rhs, fkpp_rhs};
use crate::riccati::Coupling;
use crate::symbol::Symbol;

fn combine(base: &[Mat<c64>], s: f64, k: &[Mat<c64>]) -> Vec<Mat<c64>> {
    base.iter()
        .zip(k)
        .map(|(a, b)| Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] + s * b[(i, j)]))
        .collect()
}

fn rk4_step(
    y: &[Mat<c64>],
    h: f64,
    rhs: &impl Fn(&[Mat<c64>]) -> Result<Vec<Mat<c64>>>,
) -> Result<Vec<Mat<c64>>> {
    let k1 = rhs(y)?;
    let k2 = rhs(&combine(y, 0.5 * h, &k1))?;
    let k3 = rhs(&combine(y, 0.5 * h, &k2))?;
    let k4 = rhs(&combine(y, h, &k3))?;
    Ok(y.iter()
        .enumerate()
        .map(|(n, a)| {
            Mat::from_fn(a.nrows(), a.ncols(), |i, j| {
                a[(i, j)] + (h / 6.0) * (k1[n][(i, j)] + 2.0 * k2[n][(i, j)] + 2.0 * k3[n][(i, j)] + k4[n][(i, j)])
            })
        })
        .collect())
}

/// `∂t G = D G - G ★ (B G)` for 2×2 block kernels, stepped in Fourier space.
/// Nonlinear terms are formed in physical space as Riemann-weighted matrix
/// products and transformed back.
pub fn rd_direct(
    d: &[Symbol; 4],
    b: &[Coupling; 4],
    g0: &BlockKernel,
    cfg: &StepperConfig,
) -> Result<DirectRun<BlockKernel>> {
    cfg.validate()?;
    let grid = *g0.grid();
    let fourier = Fourier::new(grid);
    let symbols: Vec<[c64; 4]> = grid
        .frequencies()
        .iter()
        .map(|&k| [d[0].eval(k), d[1].eval(k), d[2].eval(k), d[3].eval(k)])
        .collect();
    let to_blocks = |y: &[Mat<c64>], space: Space| -> Result<BlockKernel> {
        let blocks = y
            .iter()
            .map(|m| Kernel2D::new(grid, space, m.clone()))
            .collect::<Result<Vec<_>>>()?;
        BlockKernel::new(2, blocks)
    };
    let rhs = |y: &[Mat<c64>]| -> Result<Vec<Mat<c64>>> {
        let g_hat = to_blocks(y, Space::Fourier)?;
        let g = g_hat.map(|k| k.ift2_with(&fourier))?;
        let mut bg = Vec::with_capacity(4);
        for a in 0..2 {
            for col in 0..2 {
                let mut acc = Kernel2D::zeros(grid, Space::Physical);
                for c in 0..2 {
                    if !b[2 * a + c].is_zero() {
                        acc = acc.add(&b[2 * a + c].apply_spectral(g_hat.block(c, col), &fourier)?)?;
                    }
                }
                bg.push(acc);
            }
        }
        let nonlinear = g.star(&BlockKernel::new(2, bg)?)?;
        let m = grid.len();
        let mut out = Vec::with_capacity(4);
        for a in 0..2 {
            for col in 0..2 {
                let nl_hat = nonlinear.block(a, col).ft2_with(&fourier)?;
                out.push(Mat::from_fn(m, m, |i, j| {
                    let s = &symbols[i];
                    s[2 * a] * y[col][(i, j)] + s[2 * a + 1] * y[2 + col][(i, j)] - nl_hat.at(i, j)
                }));
            }
        }
        Ok(out)
    };
    let (n, h) = cfg.steps();
    let mut monitor = Monitor::new(cfg);
    let mut y: Vec<Mat<c64>> = (0..4)
        .map(|i| g0.block(i / 2, i % 2).ft2_with(&fourier).map(Kernel2D::into_values))
        .collect::<Result<_>>()?;
    for step in 1..=n {
        y = rk4_step(&y, h, &rhs)?;
        let g = to_blocks(&y, Space::Fourier)?;
        let sup = (0..4)
            .map(|i| g.block(i / 2, i % 2).ift2_with(&fourier).map(|k| k.sup_norm()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        monitor.observe(step, step as f64 * h, sup, g.hs_norm())?;
    }
    let g = to_blocks(&y, Space::Fourier)?.map(|k| k.ift2_with(&fourier))?;
    let g = if g0.is_bisymmetric() {
        BlockKernel::bisymmetric(g.block(0, 0).clone(), g.block(0, 1).clone())?
    } else {
        g
    };
    Ok(monitor.finish(g, n))
}

/// The one-dimensional equations used as oracles.
#[derive(Debug, Clone, PartialEq)]
pub enum LineForm {
    /// `∂t g = d(∂) g - g ∫ g`.
    Fkpp { d: Symbol },
    /// `∂t g = d(-∂) g - (b(-∂) g) ∗ g`.
    Convolutional { d: Symbol, b: Symbol },
}

/// RK4 on physical samples; linear terms spectral, the convolution by direct
/// summation.
pub fn oned_direct(
    grid: &Grid1D,
    g0: &[c64],
    form: &LineForm,
    cfg: &StepperConfig,
) -> Result<DirectRun<Vec<c64>>> {
    cfg.validate()?;
    let fourier = Fourier::new(*grid);
    let rhs = |y: &[Mat<c64>]| -> Result<Vec<Mat<c64>>> {
        let g: Vec<c64> = y[0].col_as_slice(0).to_vec();
        let r = match form {
            LineForm::Fkpp { d } => fkpp_rhs(d, &g, &fourier),
            LineForm::Convolutional { d, b } => conv_rhs(d, b, &g, &fourier),
        };
        Ok(vec![Mat::from_fn(r.len(), 1, |i, _| r[i])])
    };
    let (n, h) = cfg.steps();
    let mut monitor = Monitor::new(cfg);
    let mut y = vec![Mat::from_fn(g0.len(), 1, |i, _| g0[i])];
    for step in 1..=n {
        y = rk4_step(&y, h, &rhs)?;
        let col = y[0].col_as_slice(0);
        let sup = col.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let l2 = (grid.spacing() * col.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt();
        monitor.observe(step, step as f64 * h, sup, l2)?;
    }
    let state = y[0].col_as_slice(0).to_vec();
    Ok(monitor.finish(state, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direct::Scheme;
    use crate::riccati::BlockQuadraticProblem;

    fn sech(x: f64) -> f64 {
        1.0 / x.cosh()
    }

    #[test]
    fn symmetric_data_keeps_components_equal() {
        let grid = Grid1D::new(20.0, 32).unwrap();
        let u0 = Kernel2D::from_real_fn(grid, Space::Physical, |x, y| sech(x + y) * sech(y));
        let g0 = BlockKernel::bisymmetric(u0.clone(), u0).unwrap();
        let d11 = Symbol::new(vec![1.0, 0.0, 1.0]);
        let d12 = Symbol::constant(-0.5);
        let b11 = Coupling::Multiplier(grid.points().iter().map(|x| (-x * x).exp()).collect());
        let d = [d11.clone(), d12.clone(), d12, d11];
        let b = [b11.clone(), Coupling::zero(), Coupling::zero(), b11];
        let cfg = StepperConfig::new(1e-3, 0.05, Scheme::Rk4).unwrap();
        let run = rd_direct(&d, &b, &g0, &cfg).unwrap();
        assert!(run.state.block(0, 0).sub(run.state.block(0, 1)).unwrap().sup_norm() < 1e-14);
    }

    #[test]
    fn uncoupled_block_flow_is_linear() {
        let grid = Grid1D::new(20.0, 32).unwrap();
        let u0 = Kernel2D::from_real_fn(grid, Space::Physical, |x, y| sech(x + y) * sech(y));
        let v0 = Kernel2D::from_real_fn(grid, Space::Physical, |x, y| sech(x + y) * sech(x));
        let g0 = BlockKernel::bisymmetric(u0, v0).unwrap();
        let d11 = Symbol::new(vec![1.0, 0.0, 1.0]);
        let d12 = Symbol::constant(-0.5);
        let prob = BlockQuadraticProblem::bisymmetric(
            d11.clone(),
            d12.clone(),
            Coupling::zero(),
            Coupling::zero(),
            g0.clone(),
        )
        .unwrap();
        let t = 0.1;
        let exact = prob.base(t).unwrap().map(|k| k.ift2()).unwrap();
        let d = [d11.clone(), d12.clone(), d12, d11];
        let b = [Coupling::zero(), Coupling::zero(), Coupling::zero(), Coupling::zero()];
        let cfg = StepperConfig::new(1e-3, t, Scheme::Rk4).unwrap();
        let run = rd_direct(&d, &b, &g0, &cfg).unwrap();
        for i in 0..2 {
            assert!(run.state.block(0, i).sub(exact.block(0, i)).unwrap().sup_norm() < 1e-10);
        }
    }

    #[test]
    fn line_oracles_trivial_cases() {
        let grid = Grid1D::new(20.0, 64).unwrap();
        let cfg = StepperConfig::new(1e-3, 0.1, Scheme::Rk4).unwrap();
        let zero = vec![c64::new(0.0, 0.0); 64];
        let d = Symbol::monomial(2, 1.0);
        let conv = LineForm::Convolutional { d: d.clone(), b: Symbol::constant(1.0) };
        assert!(oned_direct(&grid, &zero, &conv, &cfg).unwrap().state.iter().all(|v| v.norm() == 0.0));

        // zero-mean data under FKPP with d(0) = 0 is linear
        let g0: Vec<c64> = grid.points().iter().map(|&x| c64::new(x * (-x * x).exp(), 0.0)).collect();
        let run = oned_direct(&grid, &g0, &LineForm::Fkpp { d: d.clone() }, &cfg).unwrap();
        let fourier = Fourier::new(grid);
        let lin: Vec<c64> = fourier
            .forward_1d(&g0)
            .iter()
            .zip(grid.frequencies())
            .map(|(v, k)| v * (d.eval(k) * 0.1).exp())
            .collect();
        let exact = fourier.inverse_1d(&lin);
        let err = run.state.iter().zip(&exact).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }
}
