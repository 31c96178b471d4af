//! Odd-degree nonlinearities, `i ∂t g = h(∂₁) g + g ★ F(g ★ g†)` where
//! `f★ = i F` is a star-series with real coefficients.
//!
//! Everything lives in Fourier space: `p̂ = e^{-i t h(2πik)} p̂₀` and
//! `q̂ = e^{-i t h(-2πik)} exp★(t (f★(p̂₀ ★ p̂₀†) + i h δ))`, and `ĝ` solves
//! `p̂ = ĝ ★ q̂`. Since `f† = -f`, `q̂` stays unitary.

use faer::{c64, Mat};

use super::{fredholm_right_solve, RiccatiSolution};
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::fourier::Fourier;
use crate::grid::Space;
use crate::kernel::Kernel2D;
use crate::linalg::{self, ONE};
use crate::series::StarSeries;
use crate::symbol::{Parity, Symbol};

#[derive(Debug, Clone)]
pub struct OddDegreeProblem {
    h: Symbol,
    f: StarSeries,
    g0: Kernel2D,
    fourier: Fourier,
    p0_hat: Kernel2D,
    /// `F(Ĉ₀)` as an operator matrix, `Ĉ₀ = p̂₀ ★ p̂₀†`.
    f_c0: Mat<c64>,
}

impl OddDegreeProblem {
    pub fn new(h: Symbol, f: StarSeries, g0: Kernel2D) -> Result<Self> {
        if h.parity() != Parity::EvenOnly {
            return Err(Error::InvalidSymbol(
                "the linear symbol of an odd-degree problem must be even-only".into(),
            ));
        }
        if g0.space() != Space::Physical {
            return Err(Error::SpaceMismatch {
                expected: Space::Physical,
                found: g0.space(),
            });
        }
        let fourier = Fourier::new(*g0.grid());
        let p0_hat = g0.ft2_with(&fourier)?;
        let c0 = p0_hat.star_adjoint(&p0_hat)?.operator();
        let f_c0 = f.real_part_hermitian(&hermitian_part(&c0))?;
        Ok(Self {
            h,
            f,
            g0,
            fourier,
            p0_hat,
            f_c0,
        })
    }

    pub fn h(&self) -> &Symbol {
        &self.h
    }

    pub fn f(&self) -> &StarSeries {
        &self.f
    }

    pub fn g0(&self) -> &Kernel2D {
        &self.g0
    }

    pub fn fourier(&self) -> &Fourier {
        &self.fourier
    }

    fn phases(&self, t: f64, reflect: bool) -> Vec<c64> {
        self.g0
            .grid()
            .frequencies()
            .iter()
            .map(|&k| {
                let hk = self.h.eval(if reflect { -k } else { k });
                (c64::new(0.0, -t) * hk).exp()
            })
            .collect()
    }

    /// `p̂(·, ·; t)`.
    pub fn base(&self, t: f64) -> Kernel2D {
        self.p0_hat.scale_rows(&self.phases(t, false))
    }

    /// Operator matrix of `q̂(t)`, i.e. the kernel times the spectral weight.
    pub fn aux_operator(&self, t: f64) -> Mat<c64> {
        let n = self.g0.grid().len();
        let freqs = self.g0.grid().frequencies();
        let i = c64::new(0.0, 1.0);
        let b = Mat::from_fn(n, n, |r, c| {
            let mut v = i * self.f_c0[(r, c)];
            if r == c {
                v += i * self.h.eval(-freqs[r]);
            }
            v * t
        });
        let theta = expm(b.as_ref());
        let phase = self.phases(t, true);
        Mat::from_fn(n, n, |r, c| phase[r] * theta[(r, c)])
    }

    /// `q̂(·, ·; t)`.
    pub fn aux(&self, t: f64) -> Kernel2D {
        Kernel2D::from_operator(*self.g0.grid(), Space::Fourier, self.aux_operator(t))
            .expect("shape preserved")
    }

    /// `hs_norm(q̂ ★ q̂† - δ)`.
    pub fn unitarity_defect(&self, t: f64) -> f64 {
        let q = self.aux_operator(t);
        let qq = linalg::mul_adjoint(q.as_ref(), q.as_ref(), ONE);
        let defect = &qq - &linalg::identity(q.nrows());
        Kernel2D::from_operator(*self.g0.grid(), Space::Fourier, defect)
            .expect("shape preserved")
            .hs_norm()
    }

    pub fn solve(&self, t: f64) -> Result<RiccatiSolution<Kernel2D>> {
        let p = self.base(t);
        let q = self.aux(t);
        let (g_hat, residual, det2) = solve_fredholm_fourier(&p, &q)?;
        let g = g_hat.ift2_with(&self.fourier)?;
        let hs = q.sub(&Kernel2D::delta(*q.grid(), Space::Fourier))?.hs_norm();
        Ok(RiccatiSolution {
            t,
            g,
            p,
            q,
            det2,
            hs,
            residual,
        })
    }
}

fn hermitian_part(a: &Mat<c64>) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

/// Solves `p̂ = ĝ ★ q̂` for `ĝ`. Returns `ĝ`, the relative residual and
/// `det₂(Q̂) = det₂(id + (Q̂ - id))`.
pub fn solve_fredholm_fourier(p_hat: &Kernel2D, q_hat: &Kernel2D) -> Result<(Kernel2D, f64, c64)> {
    p_hat.check_compatible(q_hat)?;
    let mut a = q_hat.operator();
    for i in 0..a.nrows() {
        a[(i, i)] -= ONE;
    }
    let (g, residual, det2) = fredholm_right_solve(p_hat.values(), &a)?;
    Ok((Kernel2D::new(*p_hat.grid(), p_hat.space(), g)?, residual, det2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;

    fn sech(x: f64) -> f64 {
        1.0 / x.cosh()
    }

    fn problem(grid: Grid1D, amp: f64) -> OddDegreeProblem {
        let g0 = Kernel2D::from_real_fn(grid, Space::Physical, |x, y| amp * sech(x + y) * sech(y));
        OddDegreeProblem::new(
            Symbol::even(vec![0.0, 0.0, 1.0]).unwrap(),
            StarSeries::identity(),
            g0,
        )
        .unwrap()
    }

    #[test]
    fn initial_data() {
        let grid = Grid1D::new(20.0, 32).unwrap();
        let prob = problem(grid, 1.0);
        let delta = Kernel2D::delta(grid, Space::Fourier);
        assert!(prob.aux(0.0).sub(&delta).unwrap().sup_norm() == 0.0);
        assert!(prob.base(0.0).sub(&prob.g0().ft2().unwrap()).unwrap().sup_norm() == 0.0);
        let sol = prob.solve(0.0).unwrap();
        assert!(sol.g.sub(prob.g0()).unwrap().sup_norm() < 1e-13);
    }

    #[test]
    fn zero_data_leaves_q_at_identity() {
        let grid = Grid1D::new(20.0, 32).unwrap();
        let prob = problem(grid, 0.0);
        let delta = Kernel2D::delta(grid, Space::Fourier);
        for t in [0.01, 0.3] {
            assert!(prob.aux(t).sub(&delta).unwrap().sup_norm() < 1e-12 * delta.sup_norm());
            assert_eq!(prob.base(t).sup_norm(), 0.0);
        }
    }

    #[test]
    fn rejects_odd_linear_symbol() {
        let grid = Grid1D::new(20.0, 16).unwrap();
        let g0 = Kernel2D::zeros(grid, Space::Physical);
        let h = Symbol::monomial(3, 1.0);
        assert!(OddDegreeProblem::new(h, StarSeries::identity(), g0).is_err());
    }

    #[test]
    fn unitary_solve_preserves_norm() {
        let grid = Grid1D::new(20.0, 64).unwrap();
        let prob = problem(grid, 1.0);
        let t = 0.02;
        assert!(prob.unitarity_defect(t) < 1e-8);
        let sol = prob.solve(t).unwrap();
        let g_hat = sol.g.ft2().unwrap();
        assert!((g_hat.hs_norm() / sol.p.hs_norm() - 1.0).abs() < 1e-9);
        assert!(sol.residual < 1e-12);
    }
}
