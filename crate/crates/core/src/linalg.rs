//! Dense complex linear algebra on top of `faer`.

use faer::linalg::matmul::matmul;
use faer::linalg::solvers::{PartialPivLu, ShapeCore, Solve};
use faer::{c64, get_global_parallelism, Accum, Mat, MatRef, Par, Side};

use crate::error::{Error, Result};

pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };

/// Caps the thread count used by the dense kernels (`0` = all cores).
pub fn set_threads(n: usize) {
    if n == 1 {
        faer::set_global_parallelism(Par::Seq);
    } else {
        faer::set_global_parallelism(Par::rayon(n));
    }
}

/// `alpha · a · b`.
pub fn mul(a: MatRef<'_, c64>, b: MatRef<'_, c64>, alpha: c64) -> Mat<c64> {
    let mut out = Mat::zeros(a.nrows(), b.ncols());
    matmul(out.as_mut(), Accum::Replace, a, b, alpha, get_global_parallelism());
    out
}

/// `alpha · a · b^H`.
pub fn mul_adjoint(a: MatRef<'_, c64>, b: MatRef<'_, c64>, alpha: c64) -> Mat<c64> {
    let mut out = Mat::zeros(a.nrows(), b.nrows());
    matmul(
        out.as_mut(),
        Accum::Replace,
        a,
        b.adjoint(),
        alpha,
        get_global_parallelism(),
    );
    out
}

pub fn identity(n: usize) -> Mat<c64> {
    Mat::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

pub fn scale_in_place(m: &mut Mat<c64>, s: c64) {
    for j in 0..m.ncols() {
        for v in m.col_as_slice_mut(j) {
            *v *= s;
        }
    }
}

pub fn scaled(m: &Mat<c64>, s: c64) -> Mat<c64> {
    let mut out = m.clone();
    scale_in_place(&mut out, s);
    out
}

/// `a + s·b`.
pub fn axpy(a: &Mat<c64>, s: c64, b: &Mat<c64>) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] + s * b[(i, j)])
}

pub fn frobenius(m: MatRef<'_, c64>) -> f64 {
    m.norm_l2()
}

pub fn max_abs(m: MatRef<'_, c64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

/// Maximum absolute column sum.
pub fn norm_1(m: MatRef<'_, c64>) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn trace(m: MatRef<'_, c64>) -> c64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

/// `f(A)` for Hermitian `A` via its eigendecomposition.
pub fn hermitian_function(a: MatRef<'_, c64>, f: impl Fn(f64) -> c64) -> Result<Mat<c64>> {
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let u = evd.U();
    let s = evd.S().column_vector();
    let mut us = u.to_owned();
    for j in 0..us.ncols() {
        let fj = f(s[j].re);
        for v in us.col_as_slice_mut(j) {
            *v *= fj;
        }
    }
    Ok(mul_adjoint(us.as_ref(), u, ONE))
}

pub fn eigenvalues(a: MatRef<'_, c64>) -> Result<Vec<c64>> {
    a.eigenvalues().map_err(|e| Error::Eigen(format!("{e:?}")))
}

/// LU factorization with partial pivoting plus a 1-norm condition estimate.
pub struct Factored {
    lu: PartialPivLu<c64>,
    norm1: f64,
}

impl Factored {
    pub fn new(a: MatRef<'_, c64>) -> Self {
        Self {
            lu: a.partial_piv_lu(),
            norm1: norm_1(a),
        }
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: MatRef<'_, c64>) -> Mat<c64> {
        self.lu.solve(b)
    }

    /// Solves `x A = b`, i.e. `A^T x^T = b^T`.
    pub fn solve_right(&self, b: MatRef<'_, c64>) -> Mat<c64> {
        let xt = self.lu.solve_transpose(b.transpose());
        xt.transpose().to_owned()
    }

    /// Hager–Higham estimate of `‖A‖₁ ‖A⁻¹‖₁`.
    pub fn condition_estimate(&self) -> f64 {
        let n = self.lu.nrows();
        if n == 0 {
            return 1.0;
        }
        let mut x = Mat::from_fn(n, 1, |_, _| c64::new(1.0 / n as f64, 0.0));
        let mut est = 0.0;
        for _ in 0..5 {
            let y = self.lu.solve(x.as_ref());
            let y_norm: f64 = (0..n).map(|i| y[(i, 0)].norm()).sum();
            if !y_norm.is_finite() {
                return f64::INFINITY;
            }
            if y_norm <= est {
                break;
            }
            est = y_norm;
            // conj(xi), with xi = sign(y)
            let xi_conj = Mat::from_fn(n, 1, |i, _| {
                let v = y[(i, 0)];
                let r = v.norm();
                if r == 0.0 { ONE } else { (v / r).conj() }
            });
            // z = A^{-H} xi = conj(A^{-T} conj(xi))
            let w = self.lu.solve_transpose(xi_conj.as_ref());
            let z = Mat::from_fn(n, 1, |i, _| w[(i, 0)].conj());
            let (jmax, zmax) = (0..n)
                .map(|i| (i, z[(i, 0)].norm()))
                .fold((0, 0.0), |acc, v| if v.1 > acc.1 { v } else { acc });
            let zx: f64 = (0..n).map(|i| (z[(i, 0)].conj() * x[(i, 0)]).re).sum();
            if zmax <= zx {
                break;
            }
            x = Mat::from_fn(n, 1, |i, _| if i == jmax { ONE } else { ZERO });
        }
        est * self.norm1
    }
}
