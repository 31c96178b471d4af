//! Quadratic nonlinearities, `∂t g = d(∂₁) g - g ★ (b g)`.
//!
//! With `A = C = O` the base flow is `p̂(k, κ; t) = e^{d(2πik) t} p̂₀(k, κ)`,
//! the auxiliary flow is `q′ = b ∫₀ᵗ p ds`, and `g` solves
//! `p = g + g ★ q′` (physical space).

use faer::{c64, Mat};

use super::{fredholm_right_solve, growth, i_hat, RiccatiSolution};
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::fourier::Fourier;
use crate::grid::{Grid1D, Space};
use crate::kernel::{BlockKernel, Kernel2D};
use crate::symbol::Symbol;

/// The operator `b` of the auxiliary equation, acting on the first argument.
#[derive(Debug, Clone, PartialEq)]
pub enum Coupling {
    /// Pointwise multiplication by `b(x_i)`.
    Multiplier(Vec<f64>),
    /// Constant-coefficient differential operator `b(∂₁)`.
    Symbol(Symbol),
}

impl Coupling {
    pub fn zero() -> Self {
        Coupling::Symbol(Symbol::zero())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coupling::Multiplier(v) => v.iter().all(|x| *x == 0.0),
            Coupling::Symbol(s) => s.is_zero(),
        }
    }

    fn check(&self, grid: &Grid1D) -> Result<()> {
        match self {
            Coupling::Multiplier(v) if v.len() != grid.len() => Err(Error::ShapeMismatch(format!(
                "multiplier has {} samples, grid has {} nodes",
                v.len(),
                grid.len()
            ))),
            _ => Ok(()),
        }
    }

    /// `self + sign · other`, defined when both are of one kind or one side
    /// is a constant.
    pub fn combine(&self, other: &Coupling, sign: f64) -> Result<Coupling> {
        use Coupling::*;
        Ok(match (self, other) {
            (Symbol(a), Symbol(b)) => Symbol(if sign > 0.0 { a + b } else { a - b }),
            (Multiplier(a), Multiplier(b)) => {
                Multiplier(a.iter().zip(b).map(|(x, y)| x + sign * y).collect())
            }
            (Multiplier(a), Symbol(s)) if s.degree() == 0 => {
                Multiplier(a.iter().map(|x| x + sign * s.coeffs()[0]).collect())
            }
            (Symbol(s), Multiplier(b)) if s.degree() == 0 => {
                Multiplier(b.iter().map(|y| s.coeffs()[0] + sign * y).collect())
            }
            _ => {
                return Err(Error::InvalidSymbol(
                    "cannot combine a multiplier with a differential coupling".into(),
                ))
            }
        })
    }

    /// `b` applied to a Fourier-space kernel; the result is physical.
    pub fn apply_spectral(&self, j_hat: &Kernel2D, fourier: &Fourier) -> Result<Kernel2D> {
        match self {
            Coupling::Multiplier(b) => {
                let j = j_hat.ift2_with(fourier)?;
                let f: Vec<c64> = b.iter().map(|v| c64::new(*v, 0.0)).collect();
                Ok(j.scale_rows(&f))
            }
            Coupling::Symbol(s) => {
                let f: Vec<c64> = j_hat.grid().frequencies().iter().map(|&k| s.eval(k)).collect();
                j_hat.scale_rows(&f).ift2_with(fourier)
            }
        }
    }

    /// `b` applied to a physical-space kernel.
    pub fn apply_physical(&self, g: &Kernel2D, fourier: &Fourier) -> Result<Kernel2D> {
        match self {
            Coupling::Multiplier(b) => {
                let f: Vec<c64> = b.iter().map(|v| c64::new(*v, 0.0)).collect();
                Ok(g.scale_rows(&f))
            }
            Coupling::Symbol(_) => self.apply_spectral(&g.ft2_with(fourier)?, fourier),
        }
    }
}

fn row_factors(grid: &Grid1D, f: impl Fn(f64) -> Result<c64>) -> Result<Vec<c64>> {
    grid.frequencies().into_iter().map(f).collect()
}

/// Scalar quadratic problem with zero initial `q′`.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    d: Symbol,
    b: Coupling,
    g0: Kernel2D,
    fourier: Fourier,
    g0_hat: Kernel2D,
}

impl QuadraticProblem {
    pub fn new(d: Symbol, b: Coupling, g0: Kernel2D) -> Result<Self> {
        if g0.space() != Space::Physical {
            return Err(Error::SpaceMismatch {
                expected: Space::Physical,
                found: g0.space(),
            });
        }
        if !d.has_bounded_growth() {
            return Err(Error::InvalidSymbol(format!(
                "linear symbol {:?} is neither diffusive nor dispersive",
                d.coeffs()
            )));
        }
        b.check(g0.grid())?;
        let fourier = Fourier::new(*g0.grid());
        let g0_hat = g0.ft2_with(&fourier)?;
        Ok(Self {
            d,
            b,
            g0,
            fourier,
            g0_hat,
        })
    }

    pub fn d(&self) -> &Symbol {
        &self.d
    }

    pub fn b(&self) -> &Coupling {
        &self.b
    }

    pub fn g0(&self) -> &Kernel2D {
        &self.g0
    }

    pub fn fourier(&self) -> &Fourier {
        &self.fourier
    }

    /// `p̂(·, ·; t)`, Fourier space.
    pub fn base(&self, t: f64) -> Result<Kernel2D> {
        let e = row_factors(self.g0.grid(), |k| growth(&self.d, k, t))?;
        Ok(self.g0_hat.scale_rows(&e))
    }

    /// `q′(·, ·; t)`, physical space.
    pub fn aux(&self, t: f64) -> Result<Kernel2D> {
        let ih = row_factors(self.g0.grid(), |k| Ok(i_hat(&self.d, k, t)))?;
        self.b.apply_spectral(&self.g0_hat.scale_rows(&ih), &self.fourier)
    }

    pub fn solve(&self, t: f64) -> Result<RiccatiSolution<Kernel2D>> {
        let p = self.base(t)?.ift2_with(&self.fourier)?;
        let q = self.aux(t)?;
        let (g, residual, det2) = solve_fredholm_physical(&p, &q)?;
        Ok(RiccatiSolution {
            t,
            hs: q.hs_norm(),
            g,
            p,
            q,
            det2,
            residual,
        })
    }
}

/// Solves `p = g + g ★ q′` for `g`. Returns `g`, the relative residual of the
/// dense solve and `det₂(id + Q′)`.
pub fn solve_fredholm_physical(p: &Kernel2D, qprime: &Kernel2D) -> Result<(Kernel2D, f64, c64)> {
    p.check_compatible(qprime)?;
    let (g, residual, det2) = fredholm_right_solve(p.values(), &qprime.operator())?;
    Ok((Kernel2D::new(*p.grid(), p.space(), g)?, residual, det2))
}

/// `(e^{D t}, ∫₀ᵗ e^{D s} ds)` for the 2×2 symbol matrix `D = d(2πik)`,
/// blocks row-major.
///
/// Bisymmetric matrices use the exact `(1, 1)`, `(1, -1)` eigenbasis; others
/// the exponential of the augmented matrix `[[D, I], [0, 0]] t`.
pub fn block_symbol_functions(d: &[Symbol; 4], k: f64, t: f64) -> Result<([c64; 4], [c64; 4])> {
    if d[0] == d[3] && d[1] == d[2] {
        let plus = d[0].eval(k) + d[1].eval(k);
        let minus = d[0].eval(k) - d[1].eval(k);
        // e^{(d11 ± d12) t} and their integrals, recombined
        let (ep, em) = (guard(plus, t)?, guard(minus, t)?);
        let (ip, im) = (t * super::phi1(plus * t), t * super::phi1(minus * t));
        let e = [(ep + em) * 0.5, (ep - em) * 0.5, (ep - em) * 0.5, (ep + em) * 0.5];
        let i = [(ip + im) * 0.5, (ip - im) * 0.5, (ip - im) * 0.5, (ip + im) * 0.5];
        return Ok((e, i));
    }
    augmented_functions(d, k, t)
}

fn augmented_functions(d: &[Symbol; 4], k: f64, t: f64) -> Result<([c64; 4], [c64; 4])> {
    let dk: Vec<c64> = d.iter().map(|s| s.eval(k) * t).collect();
    let mut aug = Mat::<c64>::zeros(4, 4);
    aug[(0, 0)] = dk[0];
    aug[(0, 1)] = dk[1];
    aug[(1, 0)] = dk[2];
    aug[(1, 1)] = dk[3];
    aug[(0, 2)] = c64::new(t, 0.0);
    aug[(1, 3)] = c64::new(t, 0.0);
    let x = expm(aug.as_ref());
    let e = [x[(0, 0)], x[(0, 1)], x[(1, 0)], x[(1, 1)]];
    let i = [x[(0, 2)], x[(0, 3)], x[(1, 2)], x[(1, 3)]];
    if e.iter().chain(&i).any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Overflow {
            t,
            growth: dk.iter().map(|v| v.re).fold(f64::MIN, f64::max),
        });
    }
    Ok((e, i))
}

fn guard(z: c64, t: f64) -> Result<c64> {
    let zt = z * t;
    if zt.re > 690.0 {
        return Err(Error::Overflow { t, growth: zt.re });
    }
    Ok(zt.exp())
}

/// `out_{ab}(k, ·) = Σ_c m_{ac}(k) x_{cb}(k, ·)` on 2×2 Fourier-space blocks.
fn apply_row_matrices(x: &BlockKernel, m: &[[c64; 4]]) -> Result<BlockKernel> {
    let grid = *x.grid();
    let n = grid.len();
    let mut blocks = Vec::with_capacity(4);
    for a in 0..2 {
        for b in 0..2 {
            let v = Mat::from_fn(n, n, |i, j| {
                m[i][2 * a] * x.block(0, b).at(i, j) + m[i][2 * a + 1] * x.block(1, b).at(i, j)
            });
            blocks.push(Kernel2D::new(grid, Space::Fourier, v)?);
        }
    }
    BlockKernel::new(2, blocks)
}

/// Two-component quadratic problem `∂t G = D G - G ★ (B G)` with 2×2
/// operator-valued `D` and `B` (blocks row-major).
#[derive(Debug, Clone)]
pub struct BlockQuadraticProblem {
    d: [Symbol; 4],
    b: [Coupling; 4],
    g0: BlockKernel,
    fourier: Fourier,
    g0_hat: BlockKernel,
}

impl BlockQuadraticProblem {
    pub fn new(d: [Symbol; 4], b: [Coupling; 4], g0: BlockKernel) -> Result<Self> {
        if g0.dim() != 2 {
            return Err(Error::ShapeMismatch("block problems are 2x2".into()));
        }
        if g0.space() != Space::Physical {
            return Err(Error::SpaceMismatch {
                expected: Space::Physical,
                found: g0.space(),
            });
        }
        for c in &b {
            c.check(g0.grid())?;
        }
        let fourier = Fourier::new(*g0.grid());
        let g0_hat = g0.map(|k| k.ft2_with(&fourier))?;
        Ok(Self {
            d,
            b,
            g0,
            fourier,
            g0_hat,
        })
    }

    /// `D = [[d11, d12], [d12, d11]]`, `B = [[b11, b12], [b12, b11]]`.
    pub fn bisymmetric(
        d11: Symbol,
        d12: Symbol,
        b11: Coupling,
        b12: Coupling,
        g0: BlockKernel,
    ) -> Result<Self> {
        if !g0.is_bisymmetric() {
            return Err(Error::ShapeMismatch("initial data is not bisymmetric".into()));
        }
        for s in [&d11 - &d12, &d11 + &d12] {
            if !s.has_bounded_growth() {
                return Err(Error::InvalidSymbol(format!(
                    "channel symbol {:?} is neither diffusive nor dispersive",
                    s.coeffs()
                )));
            }
        }
        Self::new(
            [d11.clone(), d12.clone(), d12, d11],
            [b11.clone(), b12.clone(), b12, b11],
            g0,
        )
    }

    pub fn is_bisymmetric(&self) -> bool {
        self.d[0] == self.d[3]
            && self.d[1] == self.d[2]
            && self.b[0] == self.b[3]
            && self.b[1] == self.b[2]
            && self.g0.is_bisymmetric()
    }

    pub fn d(&self) -> &[Symbol; 4] {
        &self.d
    }

    pub fn b(&self) -> &[Coupling; 4] {
        &self.b
    }

    pub fn g0(&self) -> &BlockKernel {
        &self.g0
    }

    pub fn fourier(&self) -> &Fourier {
        &self.fourier
    }

    fn symbol_functions(&self, t: f64) -> Result<(Vec<[c64; 4]>, Vec<[c64; 4]>)> {
        let mut e = Vec::new();
        let mut i = Vec::new();
        for k in self.g0.grid().frequencies() {
            let (ek, ik) = block_symbol_functions(&self.d, k, t)?;
            e.push(ek);
            i.push(ik);
        }
        Ok((e, i))
    }

    /// `P̂(t) = e^{D̂ t} P̂₀`, Fourier space.
    pub fn base(&self, t: f64) -> Result<BlockKernel> {
        let (e, _) = self.symbol_functions(t)?;
        let mut out = apply_row_matrices(&self.g0_hat, &e)?;
        if self.is_bisymmetric() {
            out = BlockKernel::bisymmetric(out.block(0, 0).clone(), out.block(0, 1).clone())?;
        }
        Ok(out)
    }

    /// `Q′(t) = B ∫₀ᵗ P ds`, physical space.
    pub fn aux(&self, t: f64) -> Result<BlockKernel> {
        let (_, i) = self.symbol_functions(t)?;
        let j_hat = apply_row_matrices(&self.g0_hat, &i)?;
        let grid = *self.g0.grid();
        let mut blocks = Vec::with_capacity(4);
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = Kernel2D::zeros(grid, Space::Physical);
                for c in 0..2 {
                    let coupling = &self.b[2 * a + c];
                    if !coupling.is_zero() {
                        acc = acc.add(&coupling.apply_spectral(j_hat.block(c, b), &self.fourier)?)?;
                    }
                }
                blocks.push(acc);
            }
        }
        if self.is_bisymmetric() {
            return BlockKernel::bisymmetric(blocks[0].clone(), blocks[1].clone());
        }
        BlockKernel::new(2, blocks)
    }

    /// Solves the flat `2M × 2M` Fredholm system.
    pub fn solve(&self, t: f64) -> Result<RiccatiSolution<BlockKernel>> {
        let p = self.base(t)?.map(|k| k.ift2_with(&self.fourier))?;
        let q = self.aux(t)?;
        let grid = *self.g0.grid();
        let a = {
            let mut flat = q.to_flat();
            crate::linalg::scale_in_place(&mut flat, c64::new(q.weight(), 0.0));
            flat
        };
        let (g, residual, det2) = fredholm_right_solve(&p.to_flat(), &a)?;
        let mut g = BlockKernel::from_flat(grid, Space::Physical, 2, &g)?;
        if self.is_bisymmetric() {
            g = BlockKernel::bisymmetric(g.block(0, 0).clone(), g.block(0, 1).clone())?;
        }
        Ok(RiccatiSolution {
            t,
            hs: q.hs_norm(),
            g,
            p,
            q,
            det2,
            residual,
        })
    }

    /// The two scalar problems in the sum/difference variables `u ± v`.
    pub fn decoupled(&self) -> Result<(QuadraticProblem, QuadraticProblem)> {
        if !self.is_bisymmetric() {
            return Err(Error::ShapeMismatch("decoupling needs bisymmetric data".into()));
        }
        let (g_plus, g_minus) = self.g0.sum_difference()?;
        let d_plus = &self.d[0] + &self.d[1];
        let d_minus = &self.d[0] - &self.d[1];
        let b_plus = self.b[0].combine(&self.b[1], 1.0)?;
        let b_minus = self.b[0].combine(&self.b[1], -1.0)?;
        Ok((
            QuadraticProblem::new(d_plus, b_plus, g_plus)?,
            QuadraticProblem::new(d_minus, b_minus, g_minus)?,
        ))
    }
}
