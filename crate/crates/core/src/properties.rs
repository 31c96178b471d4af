//! Structural checks shared by the acceptance runner and the CLI: star-algebra
//! laws, determinant identities, unitarity, PDE residuals and short-time
//! consistency of the Riccati solutions.

use std::fmt;

use faer::{c64, Mat};

use crate::error::{Error, Result};
use crate::grid::{Grid1D, Space};
use crate::kernel::Kernel2D;
use crate::riccati::{i_hat, solve_fredholm_physical};
use crate::scenario::{Scenario, ScenarioConfig, ScenarioKind};
use crate::series::{det2_operator, det2_trace_series};
use crate::symbol::Symbol;

/// Step of the centred difference in the residual check.
pub const RESIDUAL_DELTA: f64 = 1e-4;
pub const RESIDUAL_TOLERANCE: f64 = 1e-3;
/// Largest of the three times used by the short-time check.
pub const SHORT_TIME_START: f64 = 4e-5;
pub const SHORT_TIME_RATIO: f64 = 4.0;
pub const SHORT_TIME_SLACK: f64 = 0.2;
pub const UNITARITY_TOLERANCE: f64 = 1e-8;
pub const DET2_SERIES_TOLERANCE: f64 = 1e-9;
pub const ALGEBRA_TOLERANCE: f64 = 1e-12;
pub const DECOUPLING_TOLERANCE: f64 = 1e-10;
pub const FREDHOLM_RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl PropertyCheck {
    /// Passes when `value ≤ tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }

    /// Passes when the outcome is as expected; `value` is 0 or 1.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: ok,
        }
    }
}

impl fmt::Display for PropertyCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {:.3e} (tolerance {:.1e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.tolerance
        )
    }
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

fn sample_kernels(grid: Grid1D) -> [Kernel2D; 3] {
    [
        Kernel2D::from_fn(grid, Space::Physical, |x, y| {
            c64::new((-x * x - 0.5 * y * y).exp() * (x - y).cos(), 0.1 * sech(x) * y.sin())
        }),
        Kernel2D::from_fn(grid, Space::Physical, |x, y| {
            c64::new(sech(x) * sech(x + y), (-(x - y) * (x - y)).exp())
        }),
        Kernel2D::from_fn(grid, Space::Physical, |x, y| {
            c64::new(sech(2.0 * y) * (-x * x).exp(), -0.3 * sech(x - 1.0) * sech(y))
        }),
    ]
}

fn relative(diff: &Kernel2D, scale: &Kernel2D) -> Result<f64> {
    let s = scale.hs_norm();
    Ok(if s == 0.0 { diff.hs_norm() } else { diff.hs_norm() / s })
}

/// Associativity, identity, adjoint reversal and the transform homomorphism
/// on fixed smooth kernels.
pub fn algebra_checks() -> Result<Vec<PropertyCheck>> {
    let grid = Grid1D::new(12.0, 64)?;
    let [a, b, c] = sample_kernels(grid);
    let ab_c = a.star(&b)?.star(&c)?;
    let a_bc = a.star(&b.star(&c)?)?;
    let delta = Kernel2D::delta(grid, Space::Physical);
    let identity = a.star(&delta)?.sub(&a)?.hs_norm().max(delta.star(&a)?.sub(&a)?.hs_norm());
    let adj = a.star(&b)?.adjoint().sub(&b.adjoint().star(&a.adjoint())?)?;
    let hom = a.star(&b)?.ft2()?.sub(&a.ft2()?.star(&b.ft2()?)?)?;
    let round = a.ft2()?.ift2()?.sub(&a)?;
    Ok(vec![
        PropertyCheck::at_most("star associativity", relative(&ab_c.sub(&a_bc)?, &ab_c)?, ALGEBRA_TOLERANCE),
        PropertyCheck::at_most("star identity", identity / a.hs_norm(), ALGEBRA_TOLERANCE),
        PropertyCheck::at_most("adjoint reverses products", relative(&adj, &a.star(&b)?)?, ALGEBRA_TOLERANCE),
        PropertyCheck::at_most(
            "transform homomorphism",
            hom.hs_norm() / a.star(&b)?.ft2()?.hs_norm(),
            ALGEBRA_TOLERANCE,
        ),
        PropertyCheck::at_most("transform round trip", relative(&round, &a)?, ALGEBRA_TOLERANCE),
    ])
}

/// Product form of `det₂` against the trace series, for a non-normal kernel
/// scaled to several Hilbert–Schmidt norms below one.
pub fn determinant_checks() -> Result<Vec<PropertyCheck>> {
    let grid = Grid1D::new(10.0, 64)?;
    let raw = Kernel2D::from_fn(grid, Space::Physical, |x, y| {
        c64::new((-x * x - (y - 0.5) * (y - 0.5)).exp(), 0.4 * x * (-x * x - y * y).exp())
    });
    let mut out = Vec::new();
    for target in [0.3, 0.6, 0.9] {
        let q = raw.scale(c64::new(target / raw.hs_norm(), 0.0));
        let op = q.operator();
        let product = det2_operator(&op)?;
        let series = det2_trace_series(&op, 400);
        out.push(PropertyCheck::at_most(
            format!("det2 product vs trace series (hs = {target})"),
            (product - series).norm(),
            DET2_SERIES_TOLERANCE,
        ));
    }
    Ok(out)
}

/// `Î(0; t) = t` exactly whenever `d(0) = 0`.
pub fn i_hat_check() -> PropertyCheck {
    let symbols = [
        Symbol::monomial(2, 1.0),
        Symbol::monomial(3, -1.0),
        Symbol::even(vec![0.0, 0.0, 0.0, 0.0, 1.0]).expect("even"),
    ];
    let mut worst = 0.0f64;
    for d in &symbols {
        for t in [0.0, 1e-3, 0.3, 1.0, 7.5] {
            worst = worst.max((i_hat(d, 0.0, t) - c64::new(t, 0.0)).norm());
        }
    }
    PropertyCheck::at_most("I-hat(0; t) = t", worst, 0.0)
}

/// `q̂ ★ q̂† = δ` at the horizon and at its midpoint.
pub fn unitarity_check(scenario: &Scenario) -> Option<PropertyCheck> {
    let problem = scenario.odd_problem()?;
    let t = scenario.config().t_end;
    let defect = problem.unitarity_defect(t).max(problem.unitarity_defect(0.5 * t));
    Some(PropertyCheck::at_most(
        format!("{}: q-hat unitary", scenario.config().kind),
        defect,
        UNITARITY_TOLERANCE,
    ))
}

/// Relative PDE residual of the Riccati solution at the horizon.
pub fn residual_check(scenario: &Scenario) -> Result<PropertyCheck> {
    let t = scenario.config().t_end.max(RESIDUAL_DELTA);
    Ok(PropertyCheck::at_most(
        format!("{}: PDE residual at t = {t}", scenario.config().kind),
        scenario.pde_residual(t, RESIDUAL_DELTA)?,
        RESIDUAL_TOLERANCE,
    ))
}

/// The two ratios `e(t)/e(t/2)` of the short-time defect.
pub fn short_time_ratios(scenario: &Scenario) -> Result<[f64; 2]> {
    let e: Vec<f64> = [1.0, 0.5, 0.25]
        .iter()
        .map(|s| scenario.short_time_defect(s * SHORT_TIME_START))
        .collect::<Result<_>>()?;
    Ok([e[0] / e[1], e[1] / e[2]])
}

pub fn short_time_check(scenario: &Scenario) -> Result<PropertyCheck> {
    let ratios = short_time_ratios(scenario)?;
    let worst = ratios
        .iter()
        .map(|r| (r / SHORT_TIME_RATIO - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(PropertyCheck::at_most(
        format!(
            "{}: short-time ratios {:.3}, {:.3} (relative deviation from 4)",
            scenario.config().kind,
            ratios[0],
            ratios[1]
        ),
        if worst.is_nan() { f64::INFINITY } else { worst },
        SHORT_TIME_SLACK,
    ))
}

/// Flat block solve against the two decoupled scalar problems.
pub fn decoupling_check(scenario: &Scenario) -> Result<Option<PropertyCheck>> {
    let Some(problem) = scenario.block_problem() else {
        return Ok(None);
    };
    let t = scenario.config().t_end;
    let flat = problem.solve(t)?.g;
    let (plus, minus) = problem.decoupled()?;
    let (gp, gm) = (plus.solve(t)?.g, minus.solve(t)?.g);
    let half = c64::new(0.5, 0.0);
    let u = gp.add(&gm)?.scale(half);
    let v = gp.sub(&gm)?.scale(half);
    let err = flat.block(0, 0).sub(&u)?.sup_norm().max(flat.block(0, 1).sub(&v)?.sup_norm());
    Ok(Some(PropertyCheck::at_most(
        format!("{}: flat block solve vs u +/- v decoupling", scenario.config().kind),
        err,
        DECOUPLING_TOLERANCE,
    )))
}

/// Backward error of the Fredholm solve at the horizon.
pub fn fredholm_residual_check(scenario: &Scenario) -> Result<Option<PropertyCheck>> {
    let t = scenario.config().t_end;
    let residual = if let Some(p) = scenario.block_problem() {
        p.solve(t)?.residual
    } else if let Some(p) = scenario.odd_problem() {
        p.solve(t)?.residual
    } else if let Some(p) = scenario.quadratic_problem() {
        p.solve(t)?.residual
    } else {
        return Ok(None);
    };
    Ok(Some(PropertyCheck::at_most(
        format!("{}: Fredholm solve backward error", scenario.config().kind),
        residual,
        FREDHOLM_RESIDUAL_TOLERANCE,
    )))
}

/// A rank-one `q′` with eigenvalue exactly `-1` must be rejected.
pub fn singularity_check() -> Result<PropertyCheck> {
    let grid = Grid1D::new(20.0, 64)?;
    let phi: Vec<f64> = grid.points().iter().map(|&x| sech(x)).collect();
    let norm2 = grid.spacing() * phi.iter().map(|v| v * v).sum::<f64>();
    let n = grid.len();
    let qprime = Kernel2D::new(
        grid,
        Space::Physical,
        Mat::from_fn(n, n, |i, j| c64::new(-phi[i] * phi[j] / norm2, 0.0)),
    )?;
    let p = Kernel2D::from_real_fn(grid, Space::Physical, |x, y| sech(x) * sech(y));
    Ok(PropertyCheck::holds(
        "rank-one q' with eigenvalue -1 is NearSingular",
        matches!(solve_fredholm_physical(&p, &qprime), Err(Error::NearSingular { .. })),
    ))
}

/// Checks that need a configured scenario.
pub fn scenario_checks(scenario: &Scenario) -> Result<Vec<PropertyCheck>> {
    let mut out = Vec::new();
    out.extend(unitarity_check(scenario));
    out.extend(fredholm_residual_check(scenario)?);
    out.extend(decoupling_check(scenario)?);
    out.push(residual_check(scenario)?);
    out.push(short_time_check(scenario)?);
    Ok(out)
}

/// Every structural check, with scenario checks at the default
/// configurations.
pub fn property_suite() -> Result<Vec<PropertyCheck>> {
    let mut out = algebra_checks()?;
    out.extend(determinant_checks()?);
    out.push(i_hat_check());
    out.push(singularity_check()?);
    for kind in ScenarioKind::ALL {
        let scenario = Scenario::new(ScenarioConfig::defaults(kind))?;
        out.extend(scenario_checks(&scenario)?);
    }
    Ok(out)
}
