//! Closed-form base and auxiliary flows and the Fredholm solve that turns
//! them into solutions of the nonlinear equation.
//!
//! Time is a parameter throughout: every evaluation at `t` is an independent
//! closed-form computation followed by one dense linear solve.

mod line;
mod odd;
mod quadratic;

pub use line::{conv_riccati_solution, conv_transfer, fkpp_denominator, fkpp_solution};
pub use odd::{solve_fredholm_fourier, OddDegreeProblem};
pub use quadratic::{
    block_symbol_functions, solve_fredholm_physical, BlockQuadraticProblem, Coupling,
    QuadraticProblem,
};

use faer::{c64, Mat};

use crate::error::{Error, Result};
use crate::linalg::{self, Factored, ONE};
use crate::series::det2_operator;
use crate::symbol::Symbol;

/// Singularity thresholds of the Fredholm solve.
pub const DET2_FLOOR: f64 = 1e-6;
pub const CONDITION_CEILING: f64 = 1e12;
/// `|q| <` this is treated as a pole of the scalar solutions.
pub const POLE_FLOOR: f64 = 1e-12;
/// Largest admissible `Re(d) t` before `e^{d t}` overflows.
const MAX_EXPONENT: f64 = 690.0;

/// `φ₁(z) = (e^z - 1)/z`, with `φ₁(0) = 1`.
pub fn phi1(z: c64) -> c64 {
    if z.norm() < 1e-2 {
        phi1_taylor(z)
    } else {
        expm1(z) / z
    }
}

/// 12-term Taylor polynomial `Σ z^n/(n+1)!`, Horner form.
fn phi1_taylor(z: c64) -> c64 {
    let mut acc = ONE;
    for n in (1..12).rev() {
        acc = ONE + acc * z / (n as f64 + 1.0);
    }
    acc
}

/// `e^z - 1` without cancellation for small `Re z`.
fn expm1(z: c64) -> c64 {
    let (x, y) = (z.re, z.im);
    let s = (0.5 * y).sin();
    c64::new(x.exp_m1() * y.cos() - 2.0 * s * s, x.exp() * y.sin())
}

/// `Î(k; t) = (e^{d(2πik) t} - 1)/d(2πik) = ∫₀ᵗ e^{d(2πik) s} ds`.
pub fn i_hat(d: &Symbol, k: f64, t: f64) -> c64 {
    t * phi1(d.eval(k) * t)
}

/// `e^{d(2πik) t}` with an overflow guard for anti-diffusive symbols.
pub(crate) fn growth(d: &Symbol, k: f64, t: f64) -> Result<c64> {
    let z = d.eval(k) * t;
    if z.re > MAX_EXPONENT {
        return Err(Error::Overflow { t, growth: z.re });
    }
    Ok(z.exp())
}

/// Output of one Riccati evaluation.
#[derive(Debug, Clone)]
pub struct RiccatiSolution<K> {
    pub t: f64,
    /// Solution kernel, physical space.
    pub g: K,
    /// Base flow (Fourier space for the odd-degree case).
    pub p: K,
    /// `q′` for the quadratic case, `q̂` for the odd-degree case.
    pub q: K,
    pub det2: c64,
    /// Hilbert–Schmidt norm of `q′` (of `q̂ - δ` in the odd-degree case).
    pub hs: f64,
    /// Relative backward error of the Fredholm solve.
    pub residual: f64,
}

/// Solves `G · (I + A) = P` for the operator matrix `A`, after checking the
/// patch is non-singular. Returns `G`, the relative residual and `det₂(I + A)`.
pub(crate) fn fredholm_right_solve(p: &Mat<c64>, a: &Mat<c64>) -> Result<(Mat<c64>, f64, c64)> {
    let det2 = det2_operator(a)?;
    let system = &linalg::identity(a.nrows()) + a;
    let lu = Factored::new(system.as_ref());
    let condition = lu.condition_estimate();
    if det2.norm() < DET2_FLOOR || !(condition <= CONDITION_CEILING) {
        return Err(Error::NearSingular {
            det2_abs: det2.norm(),
            condition,
        });
    }
    let g = lu.solve_right(p.as_ref());
    let back = linalg::mul(g.as_ref(), system.as_ref(), ONE);
    let scale = p.norm_l2();
    let residual = if scale == 0.0 {
        back.norm_l2()
    } else {
        (&back - p).norm_l2() / scale
    };
    Ok((g, residual, det2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn i_hat_limits() {
        let zero = Symbol::new(vec![0.0, 0.0, 1.0]);
        for t in [0.0, 0.25, 3.0] {
            assert_eq!(i_hat(&zero, 0.0, t), c64::new(t, 0.0));
        }
        for k in [-2.0, 0.0, 1.5] {
            assert_eq!(i_hat(&zero, k, 0.0), c64::new(0.0, 0.0));
        }
        assert_eq!(i_hat(&Symbol::zero(), 4.0, 0.7), c64::new(0.7, 0.0));
    }

    #[test]
    fn i_hat_heat_mode_against_series() {
        let d = Symbol::monomial(2, 1.0);
        let t = 0.1;
        let expected = ((-0.4 * PI * PI).exp() - 1.0) / (-4.0 * PI * PI);
        assert!((i_hat(&d, 1.0, t) - c64::new(expected, 0.0)).norm() < 1e-15);
        // direct summation of t Σ (d t)^n/(n+1)!
        let z = -4.0 * PI * PI * t;
        let (mut term, mut sum) = (1.0f64, 0.0f64);
        for n in 0..200 {
            sum += term;
            term *= z / (n as f64 + 2.0);
        }
        assert!((i_hat(&d, 1.0, t).re - t * sum).abs() < 1e-15);
    }

    #[test]
    fn phi1_branches_agree_at_switch() {
        for arg in [0.0, 0.7, 1.6, 3.0, -2.2] {
            let z = c64::from_polar(1e-2, arg);
            assert!((phi1_taylor(z) - expm1(z) / z).norm() < 1e-14);
        }
    }

    #[test]
    fn phi1_on_imaginary_axis_is_bounded() {
        for y in [1e-6, 0.3, 5.0, 1e4] {
            assert!(phi1(c64::new(0.0, y)).norm() <= 1.0 + 1e-15);
        }
    }
}
