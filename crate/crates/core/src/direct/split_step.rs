//! Split-step Fourier solvers for the KdV-type and NLS-type equations.

use faer::c64;

use super::{DirectRun, Monitor, StepperConfig};
use crate::error::Result;
use crate::fourier::Fourier;
use crate::kernel::Kernel2D;
use crate::linalg;
use crate::pde::odd_nonlinear_operator;
use crate::series::StarSeries;
use crate::symbol::Symbol;

/// Lie splitting for `∂t g = d(∂₁) g - g ★ (b(∂₁) g)`: exact linear step in
/// Fourier space, then an explicit Euler step for the nonlocal term computed
/// as a Riemann-weighted matrix product of physical snapshots.
pub fn quadratic_split_step(
    d: &Symbol,
    b: &Symbol,
    g0: &Kernel2D,
    cfg: &StepperConfig,
) -> Result<DirectRun<Kernel2D>> {
    cfg.validate()?;
    let grid = *g0.grid();
    let fourier = Fourier::new(grid);
    let (n, h) = cfg.steps();
    let freqs = grid.frequencies();
    let phase: Vec<c64> = freqs.iter().map(|&k| (d.eval(k) * h).exp()).collect();
    let b_sym: Vec<c64> = freqs.iter().map(|&k| b.eval(k)).collect();
    let mut monitor = Monitor::new(cfg);
    let mut g_hat = g0.ft2_with(&fourier)?;
    for step in 1..=n {
        let v_hat = g_hat.scale_rows(&phase);
        let v = v_hat.ift2_with(&fourier)?;
        g_hat = if b.is_zero() {
            v_hat
        } else {
            let bv = v_hat.scale_rows(&b_sym).ift2_with(&fourier)?;
            let nonlinear = v.star(&bv)?.ft2_with(&fourier)?;
            v_hat.sub(&nonlinear.scale(c64::new(h, 0.0)))?
        };
        monitor.observe(step, step as f64 * h, v.sup_norm(), g_hat.hs_norm())?;
    }
    Ok(monitor.finish(g_hat.ift2_with(&fourier)?, n))
}

/// `∂t g = -∂₁³ g - g ★ (∂₁ g)`.
pub fn kdv_direct(g0: &Kernel2D, cfg: &StepperConfig) -> Result<DirectRun<Kernel2D>> {
    quadratic_split_step(&Symbol::monomial(3, -1.0), &Symbol::monomial(1, 1.0), g0, cfg)
}

/// Treatment of the nonlinear substep `i ∂t g = g ★ F(c)`, `c = g ★ g†`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonlinearStep {
    /// `g ← g - i Δt g ★ F(c)`.
    Euler,
    /// `g ← g ★ exp★(-i Δt F(c))`; exact, since `c` is invariant along
    /// this flow.
    Exp,
}

/// One nonlinear substep of length `dt` on a physical kernel.
pub fn nls_nonlinear_step(
    g: &Kernel2D,
    f: &StarSeries,
    dt: f64,
    variant: NonlinearStep,
) -> Result<Kernel2D> {
    let values = match variant {
        NonlinearStep::Euler => {
            let fc = odd_nonlinear_operator(f, g)?;
            let update = linalg::mul(g.values().as_ref(), fc.as_ref(), c64::new(0.0, -dt));
            g.values() + &update
        }
        NonlinearStep::Exp => {
            let c = g.star_adjoint(g)?.operator();
            let c = faer::Mat::from_fn(c.nrows(), c.ncols(), |i, j| (c[(i, j)] + c[(j, i)].conj()) * 0.5);
            let e = linalg::hermitian_function(c.as_ref(), |lambda| {
                c64::from_polar(1.0, -dt * f.eval_real(lambda))
            })?;
            linalg::mul(g.values().as_ref(), e.as_ref(), linalg::ONE)
        }
    };
    Kernel2D::new(*g.grid(), g.space(), values)
}

/// Strang splitting for `i ∂t g = h(∂₁) g + g ★ F(g ★ g†)`: half linear
/// phase, nonlinear substep, half linear phase.
pub fn nls_direct(
    g0: &Kernel2D,
    h: &Symbol,
    f: &StarSeries,
    cfg: &StepperConfig,
    variant: NonlinearStep,
) -> Result<DirectRun<Kernel2D>> {
    cfg.validate()?;
    let grid = *g0.grid();
    let fourier = Fourier::new(grid);
    let (n, dt) = cfg.steps();
    let half: Vec<c64> = grid
        .frequencies()
        .iter()
        .map(|&k| (c64::new(0.0, -0.5 * dt) * h.eval(k)).exp())
        .collect();
    let mut monitor = Monitor::new(cfg);
    let mut g = g0.clone();
    for step in 1..=n {
        let v = g.ft2_with(&fourier)?.scale_rows(&half).ift2_with(&fourier)?;
        let w = if f.is_zero() {
            v
        } else {
            nls_nonlinear_step(&v, f, dt, variant)?
        };
        g = w.ft2_with(&fourier)?.scale_rows(&half).ift2_with(&fourier)?;
        monitor.observe(step, step as f64 * dt, g.sup_norm(), g.hs_norm())?;
    }
    Ok(monitor.finish(g, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direct::Scheme;
    use crate::grid::{Grid1D, Space};

    fn sech(x: f64) -> f64 {
        1.0 / x.cosh()
    }

    fn linear_flow(g0: &Kernel2D, d: &Symbol, t: f64) -> Kernel2D {
        let e: Vec<c64> = g0.grid().frequencies().iter().map(|&k| (d.eval(k) * t).exp()).collect();
        g0.ft2().unwrap().scale_rows(&e).ift2().unwrap()
    }

    #[test]
    fn zero_data_stays_zero() {
        let grid = Grid1D::new(20.0, 32).unwrap();
        let g0 = Kernel2D::zeros(grid, Space::Physical);
        let cfg = StepperConfig::new(1e-3, 0.05, Scheme::SplitStep).unwrap();
        assert_eq!(kdv_direct(&g0, &cfg).unwrap().state.sup_norm(), 0.0);
    }

    #[test]
    fn linear_limits_are_exact() {
        let grid = Grid1D::new(20.0, 32).unwrap();
        let g0 = Kernel2D::from_real_fn(grid, Space::Physical, |x, y| sech(x + y) * sech(y));
        let cfg = StepperConfig::new(1e-3, 0.05, Scheme::SplitStep).unwrap();
        let d = Symbol::monomial(3, -1.0);
        let run = quadratic_split_step(&d, &Symbol::zero(), &g0, &cfg).unwrap();
        assert!(run.state.sub(&linear_flow(&g0, &d, 0.05)).unwrap().sup_norm() < 1e-12);

        let h = Symbol::even(vec![0.0, 0.0, 1.0]).unwrap();
        let run = nls_direct(&g0, &h, &StarSeries::new(vec![0.0]), &cfg, NonlinearStep::Exp).unwrap();
        let e: Vec<c64> = grid
            .frequencies()
            .iter()
            .map(|&k| (c64::new(0.0, -0.05) * h.eval(k)).exp())
            .collect();
        let exact = g0.ft2().unwrap().scale_rows(&e).ift2().unwrap();
        assert!(run.state.sub(&exact).unwrap().sup_norm() < 1e-12);
    }

    #[test]
    fn exp_step_preserves_gram_kernel() {
        let grid = Grid1D::new(20.0, 64).unwrap();
        let g = Kernel2D::from_real_fn(grid, Space::Physical, |x, y| sech(x + y) * sech(y));
        for f in [StarSeries::identity(), StarSeries::sin(12)] {
            let c0 = g.star_adjoint(&g).unwrap();
            let next = nls_nonlinear_step(&g, &f, 1e-3, NonlinearStep::Exp).unwrap();
            let c1 = next.star_adjoint(&next).unwrap();
            assert!(c1.sub(&c0).unwrap().hs_norm() <= 1e-10);
        }
    }

    #[test]
    fn linear_substep_keeps_mass() {
        let grid = Grid1D::new(40.0, 64).unwrap();
        let g0 = Kernel2D::from_real_fn(grid, Space::Physical, |x, y| sech(x + y).powi(2) * sech(y).powi(2));
        let d = Symbol::monomial(3, -1.0);
        let k0 = grid.zero_mode();
        let before = g0.ft2().unwrap();
        let e: Vec<c64> = grid.frequencies().iter().map(|&k| (d.eval(k) * 1e-4).exp()).collect();
        let after = before.scale_rows(&e);
        for j in 0..grid.len() {
            assert_eq!(after.at(k0, j), before.at(k0, j));
        }
    }
}
