//! One-dimensional special cases where the Fredholm relation is scalar.
//!
//! Convolutional case: the relation `p(y; t) = ∫ g(z; t) q(z + y; t) dz` is a
//! correlation, so in Fourier space it reads `p̂(k) = ĝ(-k) q̂(k)`. Choosing
//! `q(·; 0) = δ` forces `p(y; 0) = g₀(-y)`, whose transform is `ĝ₀(-k)`.
//! With `∂t p = d(∂) p` and `∂t q = b(∂) p`,
//!
//! ```text
//! p̂(k; t) = e^{d(2πik) t} ĝ₀(-k),   q̂(k; t) = 1 + b(2πik) Î(k; t) ĝ₀(-k),
//! ĝ(k; t) = p̂(-k; t) / q̂(-k; t)
//!         = e^{d(-2πik) t} ĝ₀(k) / (1 + b(-2πik) Î(-k; t) ĝ₀(k)),
//! ```
//!
//! which is the per-mode logistic solution of
//! `∂t g = d(-∂) g - (b(-∂) g) ∗ g`. For even `g₀` the reflection of the
//! initial data is invisible. Evaluating the last form directly keeps the
//! reflection off the discrete frequency grid, which is not symmetric.
//!
//! Nonlocal FKPP: `g = p / q̄` with `q̄(t) = 1 + Î(0; t) ĝ₀(0)`.

use faer::c64;

use super::{growth, i_hat, POLE_FLOOR};
use crate::error::{Error, Result};
use crate::fourier::Fourier;
use crate::grid::Grid1D;
use crate::symbol::Symbol;

fn check_len(grid: &Grid1D, g0: &[c64]) -> Result<()> {
    if g0.len() != grid.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} samples on a grid of {} nodes",
            g0.len(),
            grid.len()
        )));
    }
    Ok(())
}

/// `q̄(t) = 1 + Î(0; t) ĝ₀(0)`.
pub fn fkpp_denominator(d: &Symbol, mass: c64, t: f64) -> c64 {
    c64::new(1.0, 0.0) + i_hat(d, 0.0, t) * mass
}

/// Explicit solution of `∂t g = d(∂) g - g ∫ g`.
pub fn fkpp_solution(d: &Symbol, grid: &Grid1D, g0: &[c64], t: f64) -> Result<Vec<c64>> {
    check_len(grid, g0)?;
    let fourier = Fourier::new(*grid);
    let mut p_hat = fourier.forward_1d(g0);
    let mass = p_hat[grid.zero_mode()];
    let q = fkpp_denominator(d, mass, t);
    if q.norm() < POLE_FLOOR {
        return Err(Error::PoleEncountered { t, modulus: q.norm() });
    }
    for (v, k) in p_hat.iter_mut().zip(grid.frequencies()) {
        *v *= growth(d, k, t)?;
    }
    Ok(fourier.inverse_1d(&p_hat).into_iter().map(|v| v / q).collect())
}

/// `q̂(-k; t)` at every grid frequency `k`, given `ĝ₀`.
pub fn conv_transfer(d: &Symbol, b: &Symbol, grid: &Grid1D, g0_hat: &[c64], t: f64) -> Vec<c64> {
    grid.frequencies()
        .iter()
        .zip(g0_hat)
        .map(|(&k, &g)| c64::new(1.0, 0.0) + b.eval(-k) * i_hat(d, -k, t) * g)
        .collect()
}

/// Explicit solution of `∂t g = d(-∂) g - (b(-∂) g) ∗ g`.
pub fn conv_riccati_solution(
    d: &Symbol,
    b: &Symbol,
    grid: &Grid1D,
    g0: &[c64],
    t: f64,
) -> Result<Vec<c64>> {
    check_len(grid, g0)?;
    let fourier = Fourier::new(*grid);
    let g0_hat = fourier.forward_1d(g0);
    let q = conv_transfer(d, b, grid, &g0_hat, t);
    let mut g_hat = Vec::with_capacity(grid.len());
    for ((&k, &g), &qk) in grid.frequencies().iter().zip(&g0_hat).zip(&q) {
        if qk.norm() < POLE_FLOOR {
            return Err(Error::PoleEncountered { t, modulus: qk.norm() });
        }
        g_hat.push(growth(d, -k, t)? * g / qk);
    }
    Ok(fourier.inverse_1d(&g_hat))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(grid: &Grid1D, f: impl Fn(f64) -> f64) -> Vec<c64> {
        grid.points().iter().map(|&x| c64::new(f(x), 0.0)).collect()
    }

    fn sup_diff(a: &[c64], b: &[c64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn initial_time_returns_data() {
        let grid = Grid1D::new(20.0, 64).unwrap();
        let g0 = samples(&grid, |x| 1.0 / x.cosh() * (1.0 + 0.3 * x.tanh()));
        let d = Symbol::new(vec![1.0, 0.0, 1.0]);
        let g = fkpp_solution(&d, &grid, &g0, 0.0).unwrap();
        assert!(sup_diff(&g, &g0) < 1e-14);
        let g = conv_riccati_solution(&d, &Symbol::constant(1.0), &grid, &g0, 0.0).unwrap();
        assert!(sup_diff(&g, &g0) < 1e-14);
    }

    #[test]
    fn zero_mean_fkpp_is_linear() {
        let grid = Grid1D::new(20.0, 64).unwrap();
        let g0 = samples(&grid, |x| x * (-x * x).exp());
        let d = Symbol::monomial(2, 1.0);
        let g = fkpp_solution(&d, &grid, &g0, 0.4).unwrap();
        let fourier = Fourier::new(grid);
        let lin: Vec<c64> = fourier
            .forward_1d(&g0)
            .iter()
            .zip(grid.frequencies())
            .map(|(v, k)| v * (d.eval(k) * 0.4).exp())
            .collect();
        assert!(sup_diff(&g, &fourier.inverse_1d(&lin)) < 1e-14);
    }

    #[test]
    fn conv_without_coupling_is_linear() {
        let grid = Grid1D::new(20.0, 64).unwrap();
        let g0 = samples(&grid, |x| 1.0 / (x - 1.0).cosh());
        let d = Symbol::new(vec![0.0, 1.0, 1.0]);
        let g = conv_riccati_solution(&d, &Symbol::zero(), &grid, &g0, 0.5).unwrap();
        let fourier = Fourier::new(grid);
        let lin: Vec<c64> = fourier
            .forward_1d(&g0)
            .iter()
            .zip(grid.frequencies())
            .map(|(v, k)| v * (d.eval(-k) * 0.5).exp())
            .collect();
        assert!(sup_diff(&g, &fourier.inverse_1d(&lin)) < 1e-14);
    }

    #[test]
    fn fkpp_pole_is_reported() {
        // d = 0, negative mass: q̄(t) = 1 + t m vanishes at t = -1/m
        let grid = Grid1D::new(8.0, 32).unwrap();
        let g0 = vec![c64::new(-0.25, 0.0); 32];
        let mass = grid.length() * -0.25;
        let t = -1.0 / mass;
        match fkpp_solution(&Symbol::zero(), &grid, &g0, t) {
            Err(Error::PoleEncountered { .. }) => {}
            other => panic!("expected a pole, got {other:?}"),
        }
    }
}
