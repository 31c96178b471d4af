//! Star-series `f★(c) = i Σ α_m c^{★m}`, the star exponential and the
//! regularized Fredholm determinant.

use faer::{c64, Mat};

use crate::error::Result;
use crate::kernel::Kernel2D;
use crate::linalg::{self, ONE, ZERO};
use crate::expm::expm;

/// `f(x) = i Σ_m α_m x^m` with real `α_m`.
///
/// An optional closed form for the real part `Σ α_m x^m` lets Hermitian
/// arguments go through the spectral route without truncation.
#[derive(Debug, Clone)]
pub struct StarSeries {
    coeffs: Vec<f64>,
    closed_form: Option<fn(f64) -> f64>,
}

impl StarSeries {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        Self {
            coeffs: coeffs.into(),
            closed_form: None,
        }
    }

    /// `f(x) = i x`.
    pub fn identity() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    /// `f(x) = i sin x`, Taylor coefficients kept through degree `2·terms - 1`.
    pub fn sin(terms: usize) -> Self {
        let mut coeffs = vec![0.0; 2 * terms];
        let mut fact = 1.0;
        for n in 1..2 * terms {
            fact *= n as f64;
            if n % 2 == 1 {
                coeffs[n] = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 } / fact;
            }
        }
        Self {
            coeffs,
            closed_form: Some(f64::sin),
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    /// `Σ α_m x^m` (closed form when available).
    pub fn eval_real(&self, x: f64) -> f64 {
        match self.closed_form {
            Some(f) => f(x),
            None => self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c),
        }
    }

    /// `Σ α_m A^m` for an operator matrix, by Horner's rule on the
    /// truncated coefficients.
    pub fn real_part_truncated(&self, a: &Mat<c64>) -> Mat<c64> {
        let n = a.nrows();
        let mut acc = Mat::<c64>::zeros(n, n);
        for (m, &c) in self.coeffs.iter().enumerate().rev() {
            if m + 1 < self.coeffs.len() {
                acc = linalg::mul(acc.as_ref(), a.as_ref(), ONE);
            }
            if c != 0.0 {
                for i in 0..n {
                    acc[(i, i)] += c;
                }
            }
        }
        acc
    }

    /// `Σ α_m A^m` for Hermitian `A`. Polynomials of degree ≤ 3 use Horner;
    /// anything else goes through the eigendecomposition so closed forms are
    /// applied exactly.
    pub fn real_part_hermitian(&self, a: &Mat<c64>) -> Result<Mat<c64>> {
        if self.closed_form.is_none() && self.coeffs.len() <= 4 {
            return Ok(self.real_part_truncated(a));
        }
        linalg::hermitian_function(a.as_ref(), |x| c64::new(self.eval_real(x), 0.0))
    }
}

/// `f★(c) = i(α_0 δ + α_1 c + α_2 c★c + ...)` on the truncated series.
pub fn star_series(f: &StarSeries, c: &Kernel2D) -> Kernel2D {
    let op = f.real_part_truncated(&c.operator());
    Kernel2D::from_operator(*c.grid(), c.space(), linalg::scaled(&op, c64::new(0.0, 1.0)))
        .expect("shape preserved")
}

/// `f★(c)` for Hermitian `c` by operator functional calculus.
pub fn star_series_hermitian(f: &StarSeries, c: &Kernel2D) -> Result<Kernel2D> {
    let op = f.real_part_hermitian(&c.operator())?;
    Kernel2D::from_operator(*c.grid(), c.space(), linalg::scaled(&op, c64::new(0.0, 1.0)))
}

/// `exp★(t c) = δ + t c + t² c★c / 2 + ...`.
pub fn star_exp(c: &Kernel2D, t: f64) -> Kernel2D {
    let op = linalg::scaled(&c.operator(), c64::new(t, 0.0));
    Kernel2D::from_operator(*c.grid(), c.space(), expm(op.as_ref())).expect("shape preserved")
}

/// Regularized determinant `det₂(I + A) = Π (1 + λ_i) e^{-λ_i}` of an
/// operator matrix `A`.
pub fn det2_operator(a: &Mat<c64>) -> Result<c64> {
    let lambdas = linalg::eigenvalues(a.as_ref())?;
    let mut log = ZERO;
    for l in lambdas {
        let one_plus = ONE + l;
        if one_plus == ZERO {
            return Ok(ZERO);
        }
        log += one_plus.ln() - l;
    }
    Ok(log.exp())
}

/// `det₂(id + Q′)` for the integral operator with kernel `q′`.
pub fn det2(qprime: &Kernel2D) -> Result<c64> {
    det2_operator(&qprime.operator())
}

/// `det(I + A) e^{-tr A}` via LU; agrees with [`det2_operator`] in exact
/// arithmetic.
pub fn det2_lu(a: &Mat<c64>) -> c64 {
    let n = a.nrows();
    let shifted = &linalg::identity(n) + a;
    shifted.determinant() * (-linalg::trace(a.as_ref())).exp()
}

/// `exp(Σ_{ℓ=2}^{terms} (-1)^{ℓ-1} tr(A^ℓ)/ℓ)`; converges for spectral
/// radius below one.
pub fn det2_trace_series(a: &Mat<c64>, terms: usize) -> c64 {
    let mut power = a.clone();
    let mut sum = ZERO;
    for l in 2..=terms {
        power = linalg::mul(power.as_ref(), a.as_ref(), ONE);
        let sign = if l % 2 == 0 { -1.0 } else { 1.0 };
        sum += linalg::trace(power.as_ref()) * (sign / l as f64);
    }
    sum.exp()
}
