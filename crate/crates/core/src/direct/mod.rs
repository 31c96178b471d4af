//! Time-stepping pseudo-spectral reference solvers.
//!
//! They integrate the target equations directly and share nothing with the
//! Riccati construction beyond the grid, the transforms and the equation
//! definitions in [`crate::pde`].

mod runge_kutta;
mod split_step;

pub use runge_kutta::{oned_direct, rd_direct, LineForm};
pub use split_step::{
    kdv_direct, nls_direct, nls_nonlinear_step, quadratic_split_step, NonlinearStep,
};

use crate::error::{Error, Result};

/// Sup-norm above which a run is declared blown up.
pub const BLOW_UP: f64 = 1e6;
const MAX_STEPS: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    SplitStep,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    /// Snapshot stride in steps; `0` disables snapshots.
    pub record_every: usize,
}

impl StepperConfig {
    pub fn new(dt: f64, t_end: f64, scheme: Scheme) -> Result<Self> {
        let cfg = Self {
            dt,
            t_end,
            scheme,
            record_every: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_record_every(mut self, stride: usize) -> Self {
        self.record_every = stride;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidStepper(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidStepper(format!(
                "horizon must be non-negative, got {}",
                self.t_end
            )));
        }
        if self.t_end / self.dt > MAX_STEPS {
            return Err(Error::InvalidStepper(format!(
                "{} steps exceed the limit of {MAX_STEPS:e}",
                self.t_end / self.dt
            )));
        }
        Ok(())
    }

    /// Number of steps and the (possibly slightly shortened) step that lands
    /// exactly on the horizon.
    pub fn steps(&self) -> (usize, f64) {
        if self.t_end == 0.0 {
            return (0, self.dt);
        }
        let n = (self.t_end / self.dt - 1e-9).ceil().max(1.0) as usize;
        (n, self.t_end / n as f64)
    }
}

/// A recorded point along a direct run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub sup: f64,
    pub l2: f64,
}

/// Final state plus snapshots.
#[derive(Debug, Clone)]
pub struct DirectRun<S> {
    pub state: S,
    pub steps: usize,
    pub snapshots: Vec<Snapshot>,
}

pub(crate) struct Monitor {
    record_every: usize,
    snapshots: Vec<Snapshot>,
}

impl Monitor {
    pub(crate) fn new(cfg: &StepperConfig) -> Self {
        Self {
            record_every: cfg.record_every,
            snapshots: Vec::new(),
        }
    }

    /// Checks for blow-up after `step` steps and records a snapshot when due.
    /// `sup` and `l2` are of the physical state.
    pub(crate) fn observe(&mut self, step: usize, t: f64, sup: f64, l2: f64) -> Result<()> {
        if !(sup <= BLOW_UP) {
            return Err(Error::BlowUp { t, sup });
        }
        if self.record_every > 0 && step.is_multiple_of(self.record_every) {
            self.snapshots.push(Snapshot { t, sup, l2 });
        }
        Ok(())
    }

    pub(crate) fn finish<S>(self, state: S, steps: usize) -> DirectRun<S> {
        DirectRun {
            state,
            steps,
            snapshots: self.snapshots,
        }
    }
}
