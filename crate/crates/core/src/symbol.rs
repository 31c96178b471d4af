//! Constant-coefficient polynomial symbols `s(∂) = Σ c_n ∂^n`.

use std::f64::consts::PI;

use faer::c64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    EvenOnly,
    Unrestricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Even-only with leading coefficient `(-1)^{N+1} α_{2N}`, `α_{2N} > 0`:
    /// `exp(s(2πik) t)` decays for large `|k|`.
    Diffusive,
    /// No even terms beyond the constant: `|exp(s(2πik) t)|` is constant in `k`.
    Dispersive,
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    coeffs: Vec<f64>,
    parity: Parity,
}

impl Symbol {
    /// Polynomial with coefficients `c_0, c_1, ...` (trailing zeros trimmed).
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self {
            coeffs,
            parity: Parity::Unrestricted,
        }
    }

    /// Polynomial restricted to even powers; rejects nonzero odd coefficients.
    pub fn even(coeffs: impl Into<Vec<f64>>) -> Result<Self> {
        let s = Self::new(coeffs);
        if let Some(n) = s.coeffs.iter().skip(1).step_by(2).position(|c| *c != 0.0) {
            return Err(Error::InvalidSymbol(format!(
                "even-only symbol has nonzero coefficient of degree {}",
                2 * n + 1
            )));
        }
        Ok(Self {
            parity: Parity::EvenOnly,
            ..s
        })
    }

    pub fn zero() -> Self {
        Self::new(vec![0.0])
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `c ∂^n`.
    pub fn monomial(degree: usize, c: f64) -> Self {
        let mut coeffs = vec![0.0; degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    /// Horner evaluation at an arbitrary complex argument.
    pub fn eval_at(&self, z: c64) -> c64 {
        self.coeffs
            .iter()
            .rev()
            .fold(c64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `s(2πik)`: the Fourier multiplier of `s(∂)` at frequency `k`.
    pub fn eval(&self, k: f64) -> c64 {
        self.eval_at(c64::new(0.0, 2.0 * PI * k))
    }

    pub fn classification(&self) -> Classification {
        let deg = self.degree();
        if deg == 0 {
            return Classification::Other;
        }
        let even_only = self.coeffs.iter().skip(1).step_by(2).all(|c| *c == 0.0);
        let no_even = self.coeffs.iter().skip(2).step_by(2).all(|c| *c == 0.0);
        if even_only && deg.is_multiple_of(2) {
            let n = deg / 2;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            if sign * self.coeffs[deg] > 0.0 {
                return Classification::Diffusive;
            }
        }
        if no_even {
            return Classification::Dispersive;
        }
        Classification::Other
    }

    /// Whether `Re s(2πik)` is bounded above in `k`, so `exp(s t)` cannot
    /// blow up for `t ≥ 0`.
    pub fn has_bounded_growth(&self) -> bool {
        self.degree() == 0
            || matches!(
                self.classification(),
                Classification::Diffusive | Classification::Dispersive
            )
    }
}

impl Symbol {
    fn zip_with(&self, other: &Symbol, sign: f64) -> Symbol {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |s: &Symbol, i: usize| s.coeffs.get(i).copied().unwrap_or(0.0);
        let sum = Symbol::new((0..n).map(|i| get(self, i) + sign * get(other, i)).collect::<Vec<_>>());
        if self.parity == Parity::EvenOnly && other.parity == Parity::EvenOnly {
            Symbol { parity: Parity::EvenOnly, ..sum }
        } else {
            sum
        }
    }
}

impl std::ops::Add for &Symbol {
    type Output = Symbol;
    fn add(self, other: &Symbol) -> Symbol {
        self.zip_with(other, 1.0)
    }
}

impl std::ops::Sub for &Symbol {
    type Output = Symbol;
    fn sub(self, other: &Symbol) -> Symbol {
        self.zip_with(other, -1.0)
    }
}
