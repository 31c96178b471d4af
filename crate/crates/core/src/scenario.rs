//! The six worked scenarios: configuration, initial data, and the Riccati,
//! direct and trace pipelines for each.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use faer::c64;

use crate::diagnostics::{compare, emit_csv, parse_key_values, sample_times, ComparisonReport, Field, TracePoint};
use crate::direct::{
    kdv_direct, nls_direct, oned_direct, rd_direct, LineForm, NonlinearStep, Scheme, StepperConfig,
};
use crate::error::{Error, Result};
use crate::fourier::Fourier;
use crate::grid::{Grid1D, Space};
use crate::kernel::{BlockKernel, Kernel2D};
use crate::linalg::{self, ONE, ZERO};
use crate::pde;
use crate::riccati::{
    conv_riccati_solution, conv_transfer, fkpp_denominator, fkpp_solution, BlockQuadraticProblem,
    Coupling, OddDegreeProblem, QuadraticProblem,
};
use crate::series::{det2_operator, StarSeries};
use crate::symbol::Symbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    Rd,
    Kdv,
    Nls,
    Nls4,
    Conv,
    Fkpp,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 6] = [
        ScenarioKind::Rd,
        ScenarioKind::Kdv,
        ScenarioKind::Nls,
        ScenarioKind::Nls4,
        ScenarioKind::Conv,
        ScenarioKind::Fkpp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Rd => "rd",
            ScenarioKind::Kdv => "kdv",
            ScenarioKind::Nls => "nls",
            ScenarioKind::Nls4 => "nls4",
            ScenarioKind::Conv => "conv",
            ScenarioKind::Fkpp => "fkpp",
        }
    }

    /// Default sup-error threshold of the acceptance run.
    pub fn threshold(self) -> f64 {
        match self {
            ScenarioKind::Rd | ScenarioKind::Kdv | ScenarioKind::Nls => 1e-4,
            ScenarioKind::Nls4 => 5e-5,
            ScenarioKind::Conv | ScenarioKind::Fkpp => 1e-6,
        }
    }

    pub fn is_odd_degree(self) -> bool {
        matches!(self, ScenarioKind::Nls | ScenarioKind::Nls4)
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scenario {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub length: f64,
    pub nodes: usize,
    pub t_end: f64,
    pub dt: f64,
    /// Width of the Gaussian coupling (reaction–diffusion only).
    pub sigma: f64,
    pub output_dir: PathBuf,
    pub trace_samples: usize,
    pub nonlinear_step: NonlinearStep,
}

impl ScenarioConfig {
    pub fn defaults(kind: ScenarioKind) -> Self {
        let (length, nodes, t_end, dt) = match kind {
            ScenarioKind::Rd => (20.0, 128, 0.5, 1e-3),
            ScenarioKind::Kdv => (40.0, 256, 1.0, 1e-4),
            ScenarioKind::Nls => (20.0, 256, 0.02, 1e-5),
            ScenarioKind::Nls4 => (20.0, 256, 0.2, 1e-4),
            ScenarioKind::Conv => (20.0, 256, 0.5, 1e-4),
            ScenarioKind::Fkpp => (20.0, 256, 0.3, 1e-4),
        };
        Self {
            kind,
            length,
            nodes,
            t_end,
            dt,
            sigma: 0.1,
            output_dir: PathBuf::from("out"),
            trace_samples: 50,
            nonlinear_step: NonlinearStep::Exp,
        }
    }

    /// Applies one `key=value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::Config(format!("bad value {value:?} for {key}")))
        }
        match key {
            "L" => self.length = parse(key, value)?,
            "M" => self.nodes = parse(key, value)?,
            "T" => self.t_end = parse(key, value)?,
            "dt" => self.dt = parse(key, value)?,
            "sigma" => self.sigma = parse(key, value)?,
            "output" => self.output_dir = PathBuf::from(value),
            "trace_samples" | "trace-samples" => self.trace_samples = parse(key, value)?,
            "nonlinear_step" | "nonlinear-step" => {
                self.nonlinear_step = match value {
                    "exp" => NonlinearStep::Exp,
                    "euler" => NonlinearStep::Euler,
                    _ => return Err(Error::Config(format!("unknown nonlinear step {value:?}"))),
                }
            }
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a `key=value` file (`#` comments allowed).
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        for (k, v) in parse_key_values(&text)? {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        Grid1D::new(self.length, self.nodes)?;
        StepperConfig::new(self.dt, self.t_end, Scheme::Rk4)?;
        if self.kind == ScenarioKind::Rd && !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::Config(format!("sigma must be positive, got {}", self.sigma)));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.length, self.nodes)
    }
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

enum Model {
    Block(BlockQuadraticProblem),
    Quadratic(QuadraticProblem),
    Odd(OddDegreeProblem),
    Conv { d: Symbol, b: Symbol, g0: Vec<c64> },
    Fkpp { d: Symbol, g0: Vec<c64> },
}

/// A configured scenario with its initial data and closed-form problem.
pub struct Scenario {
    config: ScenarioConfig,
    grid: Grid1D,
    fourier: Fourier,
    model: Model,
}

impl Scenario {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let grid = config.grid()?;
        let model = match config.kind {
            ScenarioKind::Rd => {
                let u0 = Kernel2D::from_real_fn(grid, Space::Physical, |x, y| sech(x + y) * sech(y));
                let v0 = Kernel2D::from_real_fn(grid, Space::Physical, |x, y| sech(x + y) * sech(x));
                let s = config.sigma;
                let b11 = grid
                    .points()
                    .iter()
                    .map(|x| (-x * x / (2.0 * s * s)).exp() / (s * (2.0 * std::f64::consts::PI).sqrt()))
                    .collect();
                Model::Block(BlockQuadraticProblem::bisymmetric(
                    Symbol::new(vec![1.0, 0.0, 1.0]),
                    Symbol::constant(-0.5),
                    Coupling::Multiplier(b11),
                    Coupling::zero(),
                    BlockKernel::bisymmetric(u0, v0)?,
                )?)
            }
            ScenarioKind::Kdv => {
                let g0 = Kernel2D::from_real_fn(grid, Space::Physical, |x, y| {
                    sech(x + y).powi(2) * sech(y).powi(2)
                });
                Model::Quadratic(QuadraticProblem::new(
                    Symbol::monomial(3, -1.0),
                    Coupling::Symbol(Symbol::monomial(1, 1.0)),
                    g0,
                )?)
            }
            ScenarioKind::Nls | ScenarioKind::Nls4 => {
                let g0 = Kernel2D::from_real_fn(grid, Space::Physical, |x, y| sech(x + y) * sech(y));
                let (h, f) = if config.kind == ScenarioKind::Nls {
                    (Symbol::even(vec![0.0, 0.0, 1.0])?, StarSeries::identity())
                } else {
                    (Symbol::even(vec![0.0, 0.0, 0.0, 0.0, 1.0])?, StarSeries::sin(12))
                };
                Model::Odd(OddDegreeProblem::new(h, f, g0)?)
            }
            ScenarioKind::Conv => Model::Conv {
                d: Symbol::monomial(2, 1.0),
                b: Symbol::constant(1.0),
                g0: grid.points().iter().map(|&x| c64::new(sech(x), 0.0)).collect(),
            },
            ScenarioKind::Fkpp => Model::Fkpp {
                d: Symbol::new(vec![1.0, 0.0, 1.0]),
                g0: grid.points().iter().map(|&x| c64::new(sech(x).powi(2), 0.0)).collect(),
            },
        };
        Ok(Self {
            fourier: Fourier::new(grid),
            config,
            grid,
            model,
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn initial(&self) -> Field {
        match &self.model {
            Model::Block(p) => Field::Block(p.g0().clone()),
            Model::Quadratic(p) => Field::Plane(p.g0().clone()),
            Model::Odd(p) => Field::Plane(p.g0().clone()),
            Model::Conv { g0, .. } | Model::Fkpp { g0, .. } => Field::Line {
                grid: self.grid,
                values: g0.clone(),
            },
        }
    }

    /// Name of the determinant recorded by [`Self::trace`].
    pub fn determinant_label(&self) -> &'static str {
        match self.model {
            Model::Block(_) | Model::Quadratic(_) => "det2(id+Q')",
            Model::Odd(_) => "det2(Q-hat)",
            Model::Conv { .. } => "det2(id+diag(q-hat - 1))",
            Model::Fkpp { .. } => "det2(q-bar)",
        }
    }

    pub fn odd_problem(&self) -> Option<&OddDegreeProblem> {
        match &self.model {
            Model::Odd(p) => Some(p),
            _ => None,
        }
    }

    pub fn quadratic_problem(&self) -> Option<&QuadraticProblem> {
        match &self.model {
            Model::Quadratic(p) => Some(p),
            _ => None,
        }
    }

    pub fn block_problem(&self) -> Option<&BlockQuadraticProblem> {
        match &self.model {
            Model::Block(p) => Some(p),
            _ => None,
        }
    }

    /// Riccati solution at time `t`.
    pub fn riccati(&self, t: f64) -> Result<Field> {
        Ok(match &self.model {
            Model::Block(p) => Field::Block(p.solve(t)?.g),
            Model::Quadratic(p) => Field::Plane(p.solve(t)?.g),
            Model::Odd(p) => Field::Plane(p.solve(t)?.g),
            Model::Conv { d, b, g0 } => Field::Line {
                grid: self.grid,
                values: conv_riccati_solution(d, b, &self.grid, g0, t)?,
            },
            Model::Fkpp { d, g0 } => Field::Line {
                grid: self.grid,
                values: fkpp_solution(d, &self.grid, g0, t)?,
            },
        })
    }

    /// Determinant and Hilbert–Schmidt norm at each time, each from the
    /// closed forms.
    pub fn trace(&self, times: &[f64]) -> Result<Vec<TracePoint>> {
        times.iter().map(|&t| self.trace_point(t)).collect()
    }

    pub fn trace_point(&self, t: f64) -> Result<TracePoint> {
        let (det2, hs) = match &self.model {
            Model::Block(p) => {
                let q = p.aux(t)?;
                let mut a = q.to_flat();
                linalg::scale_in_place(&mut a, c64::new(q.weight(), 0.0));
                (det2_operator(&a)?, q.hs_norm())
            }
            Model::Quadratic(p) => {
                let q = p.aux(t)?;
                (crate::series::det2(&q)?, q.hs_norm())
            }
            Model::Odd(p) => {
                let mut a = p.aux_operator(t);
                for i in 0..a.nrows() {
                    a[(i, i)] -= ONE;
                }
                let hs = Kernel2D::from_operator(self.grid, Space::Fourier, a.clone())?.hs_norm();
                (det2_operator(&a)?, hs)
            }
            Model::Conv { d, b, g0 } => {
                let q = conv_transfer(d, b, &self.grid, &self.fourier.forward_1d(g0), t);
                let mut log = ZERO;
                let mut hs = 0.0;
                for qk in q {
                    let l = qk - ONE;
                    log += if qk == ZERO { f64::NEG_INFINITY.into() } else { qk.ln() - l };
                    hs += l.norm_sqr();
                }
                (log.exp(), hs.sqrt())
            }
            Model::Fkpp { d, g0 } => {
                let mass = self.fourier.forward_1d(g0)[self.grid.zero_mode()];
                let q = fkpp_denominator(d, mass, t);
                (q * (ONE - q).exp(), (q - ONE).norm())
            }
        };
        Ok(TracePoint { t, det2, hs })
    }

    pub fn stepper(&self) -> Result<StepperConfig> {
        let scheme = match self.config.kind {
            ScenarioKind::Kdv | ScenarioKind::Nls | ScenarioKind::Nls4 => Scheme::SplitStep,
            _ => Scheme::Rk4,
        };
        let cfg = StepperConfig::new(self.config.dt, self.config.t_end, scheme)?;
        let (n, _) = cfg.steps();
        Ok(cfg.with_record_every((n / self.config.trace_samples.max(1)).max(1)))
    }

    /// Direct time-stepped solution at the horizon.
    pub fn direct(&self) -> Result<Field> {
        let cfg = self.stepper()?;
        Ok(match &self.model {
            Model::Block(p) => Field::Block(rd_direct(p.d(), p.b(), p.g0(), &cfg)?.state),
            Model::Quadratic(p) => Field::Plane(kdv_direct(p.g0(), &cfg)?.state),
            Model::Odd(p) => Field::Plane(
                nls_direct(p.g0(), p.h(), p.f(), &cfg, self.config.nonlinear_step)?.state,
            ),
            Model::Conv { d, b, g0 } => Field::Line {
                grid: self.grid,
                values: oned_direct(
                    &self.grid,
                    g0,
                    &LineForm::Convolutional { d: d.clone(), b: b.clone() },
                    &cfg,
                )?
                .state,
            },
            Model::Fkpp { d, g0 } => Field::Line {
                grid: self.grid,
                values: oned_direct(&self.grid, g0, &LineForm::Fkpp { d: d.clone() }, &cfg)?.state,
            },
        })
    }

    /// `∂t g` according to the target equation.
    pub fn rhs(&self, g: &Field) -> Result<Field> {
        let f = &self.fourier;
        Ok(match (&self.model, g) {
            (Model::Block(p), Field::Block(g)) => {
                let r = pde::block_rhs(p.d(), p.b(), g, f)?;
                Field::Block(if g.is_bisymmetric() {
                    BlockKernel::bisymmetric(r.block(0, 0).clone(), r.block(0, 1).clone())?
                } else {
                    r
                })
            }
            (Model::Quadratic(p), Field::Plane(g)) => Field::Plane(pde::quadratic_rhs(p.d(), p.b(), g, f)?),
            (Model::Odd(p), Field::Plane(g)) => Field::Plane(pde::odd_rhs(p.h(), p.f(), g, f)?),
            (Model::Conv { d, b, .. }, Field::Line { values, .. }) => Field::Line {
                grid: self.grid,
                values: pde::conv_rhs(d, b, values, f),
            },
            (Model::Fkpp { d, .. }, Field::Line { values, .. }) => Field::Line {
                grid: self.grid,
                values: pde::fkpp_rhs(d, values, f),
            },
            _ => return Err(Error::ShapeMismatch("field does not match the scenario".into())),
        })
    }

    /// `sup |(g(t+δ) - g(t-δ))/(2δ) - RHS(g(t))| / sup |g(t)|` for the
    /// Riccati solution.
    pub fn pde_residual(&self, t: f64, delta: f64) -> Result<f64> {
        let g = self.riccati(t)?;
        let plus = self.riccati(t + delta)?.components();
        let minus = self.riccati(t - delta)?.components();
        let rhs = self.rhs(&g)?.components();
        let mut worst = 0.0f64;
        let n = rhs[0].len();
        for i in 0..n {
            let r2: f64 = (0..rhs.len())
                .map(|c| ((plus[c][i] - minus[c][i]) / (2.0 * delta) - rhs[c][i]).norm_sqr())
                .sum();
            worst = worst.max(r2.sqrt());
        }
        Ok(worst / g.sup_norm())
    }

    /// `sup |g(t) - g₀ - t RHS(g₀)|` for the Riccati solution.
    pub fn short_time_defect(&self, t: f64) -> Result<f64> {
        let g0 = self.initial();
        let rhs = self.rhs(&g0)?.components();
        let g0 = g0.components();
        let g = self.riccati(t)?.components();
        let mut worst = 0.0f64;
        for i in 0..rhs[0].len() {
            let r2: f64 = (0..rhs.len())
                .map(|c| (g[c][i] - g0[c][i] - rhs[c][i] * t).norm_sqr())
                .sum();
            worst = worst.max(r2.sqrt());
        }
        Ok(worst)
    }

    /// Runs both pipelines, compares and traces.
    pub fn report(&self) -> Result<ComparisonReport> {
        let t_end = self.config.t_end;
        let start = Instant::now();
        let riccati = self.riccati(t_end)?;
        let trace = self.trace(&sample_times(t_end, self.config.trace_samples))?;
        let runtime_riccati_s = start.elapsed().as_secs_f64();
        let start = Instant::now();
        let direct = self.direct()?;
        let runtime_direct_s = start.elapsed().as_secs_f64();
        let (sup_error, mean_abs_error) = compare(&riccati, &direct)?;
        Ok(ComparisonReport {
            scenario: self.config.kind.name().to_string(),
            length: self.config.length,
            nodes: self.config.nodes,
            t_end,
            dt: self.config.dt,
            sup_error,
            mean_abs_error,
            determinant: self.determinant_label(),
            trace,
            runtime_riccati_s,
            runtime_direct_s,
            riccati,
            direct,
        })
    }
}

/// Builds the scenario, runs it and writes its files under the configured
/// output directory.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ComparisonReport> {
    let scenario = Scenario::new(config.clone())?;
    let report = scenario.report().map_err(|e| with_context(config.kind, e))?;
    emit_csv(&report, &config.output_dir)?;
    Ok(report)
}

fn with_context(kind: ScenarioKind, e: Error) -> Error {
    match e {
        Error::Eigen(m) => Error::Eigen(format!("{kind}: {m}")),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_configurations() {
        let rd = ScenarioConfig::defaults(ScenarioKind::Rd);
        assert_eq!((rd.length, rd.nodes, rd.t_end, rd.dt, rd.sigma), (20.0, 128, 0.5, 1e-3, 0.1));
        let kdv = ScenarioConfig::defaults(ScenarioKind::Kdv);
        assert_eq!((kdv.length, kdv.nodes, kdv.t_end, kdv.dt), (40.0, 256, 1.0, 1e-4));
        let nls = ScenarioConfig::defaults(ScenarioKind::Nls);
        assert_eq!((nls.length, nls.nodes, nls.t_end, nls.dt), (20.0, 256, 0.02, 1e-5));
        let nls4 = ScenarioConfig::defaults(ScenarioKind::Nls4);
        assert_eq!((nls4.length, nls4.nodes, nls4.t_end, nls4.dt), (20.0, 256, 0.2, 1e-4));
        let conv = ScenarioConfig::defaults(ScenarioKind::Conv);
        assert_eq!((conv.length, conv.nodes, conv.t_end, conv.dt), (20.0, 256, 0.5, 1e-4));
        let fkpp = ScenarioConfig::defaults(ScenarioKind::Fkpp);
        assert_eq!((fkpp.length, fkpp.nodes, fkpp.t_end, fkpp.dt), (20.0, 256, 0.3, 1e-4));
        assert_eq!(fkpp.trace_samples, 50);
        assert_eq!(fkpp.output_dir, PathBuf::from("out"));
    }

    #[test]
    fn overrides_and_errors() {
        let mut c = ScenarioConfig::defaults(ScenarioKind::Nls);
        c.set("M", "64").unwrap();
        c.set("nonlinear-step", "euler").unwrap();
        assert_eq!(c.nodes, 64);
        assert_eq!(c.nonlinear_step, NonlinearStep::Euler);
        assert!(c.set("M", "sixty").is_err());
        assert!(c.set("colour", "red").is_err());
        c.set("M", "100").unwrap();
        assert!(c.validate().is_err());
        assert!("heat".parse::<ScenarioKind>().is_err());
        assert_eq!("nls4".parse::<ScenarioKind>().unwrap(), ScenarioKind::Nls4);
    }
}
