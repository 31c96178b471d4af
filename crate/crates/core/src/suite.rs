//! The aggregate acceptance run: every scenario at its defaults, the
//! unit-modulus determinant checks and the property suite.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::diagnostics::ComparisonReport;
use crate::error::{Error, Result};
use crate::properties::{property_suite, PropertyCheck};
use crate::scenario::{run_scenario, ScenarioConfig, ScenarioKind};

/// Overrides the sup-error thresholds: either one number for every scenario
/// or a comma-separated list of `name=value`.
pub const THRESHOLD_ENV: &str = "RICCATI_THRESHOLD_OVERRIDE";
/// Mean absolute error bound of the reaction–diffusion components.
pub const RD_MEAN_THRESHOLD: f64 = 1e-6;
/// Bound on `||det₂(Q̂)| - 1|` in the odd-degree scenarios.
pub const UNIT_MODULUS_TOLERANCE: f64 = 1e-6;

/// Per-scenario thresholds after applying an override string.
pub fn thresholds(overrides: Option<&str>) -> Result<HashMap<ScenarioKind, f64>> {
    let mut map: HashMap<_, _> = ScenarioKind::ALL.iter().map(|k| (*k, k.threshold())).collect();
    let Some(text) = overrides.map(str::trim).filter(|s| !s.is_empty()) else {
        return Ok(map);
    };
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("bad threshold {v:?} in {THRESHOLD_ENV}")))
    };
    if !text.contains('=') {
        let value = parse(text)?;
        map.values_mut().for_each(|t| *t = value);
        return Ok(map);
    }
    for entry in text.split(',').filter(|e| !e.trim().is_empty()) {
        let (name, value) = entry
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("bad entry {entry:?} in {THRESHOLD_ENV}")))?;
        map.insert(name.trim().parse()?, parse(value)?);
    }
    Ok(map)
}

#[derive(Debug, Clone)]
pub struct ScenarioRow {
    pub kind: ScenarioKind,
    pub sup_error: f64,
    pub threshold: f64,
    pub mean_abs_error: Vec<f64>,
    pub mean_threshold: Option<f64>,
    pub runtime_s: f64,
}

impl ScenarioRow {
    fn new(report: &ComparisonReport, kind: ScenarioKind, threshold: f64) -> Self {
        Self {
            kind,
            sup_error: report.sup_error,
            threshold,
            mean_abs_error: report.mean_abs_error.clone(),
            mean_threshold: (kind == ScenarioKind::Rd).then_some(RD_MEAN_THRESHOLD),
            runtime_s: report.runtime_riccati_s + report.runtime_direct_s,
        }
    }

    pub fn passed(&self) -> bool {
        self.sup_error <= self.threshold
            && self
                .mean_threshold
                .is_none_or(|m| self.mean_abs_error.iter().all(|e| *e <= m))
    }
}

/// `max_t ||det₂(Q̂(t))| - 1|` over the report's trace.
pub fn unit_modulus_check(report: &ComparisonReport) -> PropertyCheck {
    let worst = report
        .trace
        .iter()
        .map(|p| (p.det2.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    PropertyCheck::at_most(
        format!("{}: ||det2(Q-hat)| - 1| over {} samples", report.scenario, report.trace.len()),
        worst,
        UNIT_MODULUS_TOLERANCE,
    )
}

#[derive(Debug, Clone)]
pub struct RunAllOutcome {
    pub rows: Vec<ScenarioRow>,
    pub checks: Vec<PropertyCheck>,
}

impl RunAllOutcome {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(ScenarioRow::passed) && self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<8} {:>12} {:>12} {:>12} {:>10}  result",
            "scenario", "sup_error", "threshold", "mean_error", "runtime_s"
        );
        for r in &self.rows {
            let mean = r.mean_abs_error.iter().copied().fold(0.0, f64::max);
            let _ = writeln!(
                s,
                "{:<8} {:>12.4e} {:>12.1e} {:>12.4e} {:>10.1}  {}",
                r.kind.name(),
                r.sup_error,
                r.threshold,
                mean,
                r.runtime_s,
                if r.passed() { "PASS" } else { "FAIL" }
            );
        }
        for c in &self.checks {
            let _ = writeln!(s, "{c}");
        }
        let _ = writeln!(s, "overall: {}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}

/// Runs every scenario at its defaults, writing under `output`, then the
/// property suite. Numerical failures of a scenario abort the run.
pub fn run_all(output: &Path, overrides: Option<&str>) -> Result<RunAllOutcome> {
    let limits = thresholds(overrides)?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for kind in ScenarioKind::ALL {
        let mut cfg = ScenarioConfig::defaults(kind);
        cfg.output_dir = output.to_path_buf();
        let report = run_scenario(&cfg)?;
        if kind.is_odd_degree() {
            checks.push(unit_modulus_check(&report));
        }
        rows.push(ScenarioRow::new(&report, kind, limits[&kind]));
    }
    checks.extend(property_suite()?);
    Ok(RunAllOutcome { rows, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_overrides() {
        let base = thresholds(None).unwrap();
        assert_eq!(base[&ScenarioKind::Nls4], 5e-5);
        assert_eq!(base[&ScenarioKind::Conv], 1e-6);
        let all = thresholds(Some("0")).unwrap();
        assert!(all.values().all(|t| *t == 0.0));
        let some = thresholds(Some("kdv=1e-3, fkpp=2")).unwrap();
        assert_eq!(some[&ScenarioKind::Kdv], 1e-3);
        assert_eq!(some[&ScenarioKind::Fkpp], 2.0);
        assert_eq!(some[&ScenarioKind::Rd], 1e-4);
        assert!(thresholds(Some("heat=1")).is_err());
        assert!(thresholds(Some("kdv=x")).is_err());
    }
}
