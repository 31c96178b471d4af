//! Error metrics, determinant/Hilbert–Schmidt traces and report emission.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use faer::c64;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::kernel::{BlockKernel, Kernel2D};

/// A solution on the grid: a scalar kernel, a 2×2 block kernel or samples
/// on a line.
#[derive(Debug, Clone)]
pub enum Field {
    Plane(Kernel2D),
    Block(BlockKernel),
    Line { grid: Grid1D, values: Vec<c64> },
}

impl Field {
    pub fn grid(&self) -> &Grid1D {
        match self {
            Field::Plane(k) => k.grid(),
            Field::Block(b) => b.grid(),
            Field::Line { grid, .. } => grid,
        }
    }

    /// Component labels. A bisymmetric block is determined by its first row.
    pub fn labels(&self) -> Vec<&'static str> {
        match self {
            Field::Block(b) if b.is_bisymmetric() => vec!["u", "v"],
            Field::Block(_) => vec!["11", "12", "21", "22"],
            _ => vec!["g"],
        }
    }

    /// `(x, y)` of each sample, row-major in `x` then `y`; `y = 0` on a line.
    pub fn coordinates(&self) -> Vec<(f64, f64)> {
        let pts = self.grid().points();
        match self {
            Field::Line { .. } => pts.iter().map(|&x| (x, 0.0)).collect(),
            _ => pts
                .iter()
                .flat_map(|&x| pts.iter().map(move |&y| (x, y)))
                .collect(),
        }
    }

    /// Sample values of each component, in [`Self::coordinates`] order.
    pub fn components(&self) -> Vec<Vec<c64>> {
        let flatten = |k: &Kernel2D| {
            let n = k.grid().len();
            (0..n * n).map(|r| k.at(r / n, r % n)).collect::<Vec<_>>()
        };
        match self {
            Field::Plane(k) => vec![flatten(k)],
            Field::Block(b) if b.is_bisymmetric() => vec![flatten(b.block(0, 0)), flatten(b.block(0, 1))],
            Field::Block(b) => (0..4).map(|i| flatten(b.block(i / 2, i % 2))).collect(),
            Field::Line { values, .. } => vec![values.clone()],
        }
    }

    pub fn sup_norm(&self) -> f64 {
        pointwise_magnitude(&self.components())
            .into_iter()
            .fold(0.0, f64::max)
    }
}

fn pointwise_magnitude(components: &[Vec<c64>]) -> Vec<f64> {
    let n = components.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| components.iter().map(|c| c[i].norm_sqr()).sum::<f64>().sqrt())
        .collect()
}

/// Sup over the grid of the Euclidean magnitude of `a - b`, and the mean
/// absolute difference of each component.
pub fn compare(a: &Field, b: &Field) -> Result<(f64, Vec<f64>)> {
    let (ca, cb) = (a.components(), b.components());
    if a.grid() != b.grid() || ca.len() != cb.len() || ca.iter().zip(&cb).any(|(x, y)| x.len() != y.len()) {
        return Err(Error::ShapeMismatch("compared fields differ in shape".into()));
    }
    let diff: Vec<Vec<c64>> = ca
        .iter()
        .zip(&cb)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - v).collect())
        .collect();
    let sup = pointwise_magnitude(&diff).into_iter().fold(0.0, f64::max);
    let means = diff
        .iter()
        .map(|c| c.iter().map(|v| v.norm()).sum::<f64>() / c.len() as f64)
        .collect();
    Ok((sup, means))
}

/// One sample of the determinant and Hilbert–Schmidt traces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub t: f64,
    pub det2: c64,
    pub hs: f64,
}

/// `trace_samples` equispaced times covering `[0, T]`.
pub fn sample_times(t_end: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![t_end],
        n => (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub scenario: String,
    pub length: f64,
    pub nodes: usize,
    pub t_end: f64,
    pub dt: f64,
    pub sup_error: f64,
    /// Per component (`u`, `v` for the block scenario).
    pub mean_abs_error: Vec<f64>,
    /// Which determinant the trace records.
    pub determinant: &'static str,
    pub trace: Vec<TracePoint>,
    pub runtime_riccati_s: f64,
    pub runtime_direct_s: f64,
    pub riccati: Field,
    pub direct: Field,
}

impl ComparisonReport {
    pub fn det2_trace(&self) -> Vec<(f64, c64)> {
        self.trace.iter().map(|p| (p.t, p.det2)).collect()
    }

    pub fn hs_trace(&self) -> Vec<(f64, f64)> {
        self.trace.iter().map(|p| (p.t, p.hs)).collect()
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::io(path, std::io::Error::other(e))
}

fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub const SOLUTION_HEADER: [&str; 7] = ["x", "y", "re_gR", "im_gR", "re_gD", "im_gD", "abs_diff"];
pub const TRACE_HEADER: [&str; 5] = ["t", "det2_re", "det2_im", "det2_abs", "hs_norm"];

/// Solution file names: the first component is `solution_<name>.csv`, the
/// others `solution_<name>_<label>.csv`.
pub fn solution_file_names(report: &ComparisonReport) -> Vec<String> {
    report
        .riccati
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| {
            if i == 0 {
                format!("solution_{}.csv", report.scenario)
            } else {
                format!("solution_{}_{l}.csv", report.scenario)
            }
        })
        .collect()
}

pub fn write_solution_csvs(report: &ComparisonReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let coords = report.riccati.coordinates();
    let (r, d) = (report.riccati.components(), report.direct.components());
    let mut paths = Vec::new();
    for (c, name) in solution_file_names(report).into_iter().enumerate() {
        let path = dir.join(name);
        let rows = coords.iter().enumerate().map(|(i, &(x, y))| {
            let (gr, gd) = (r[c][i], d[c][i]);
            vec![num(x), num(y), num(gr.re), num(gr.im), num(gd.re), num(gd.im), num((gr - gd).norm())]
        });
        write_csv(&path, &SOLUTION_HEADER, rows)?;
        paths.push(path);
    }
    Ok(paths)
}

pub fn write_trace_csv(report: &ComparisonReport, dir: &Path) -> Result<PathBuf> {
    let path = dir.join(format!("trace_{}.csv", report.scenario));
    let rows = report.trace.iter().map(|p| {
        vec![num(p.t), num(p.det2.re), num(p.det2.im), num(p.det2.norm()), num(p.hs)]
    });
    write_csv(&path, &TRACE_HEADER, rows)?;
    Ok(path)
}

pub fn summary_text(report: &ComparisonReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scenario={}", report.scenario);
    let _ = writeln!(s, "L={}", report.length);
    let _ = writeln!(s, "M={}", report.nodes);
    let _ = writeln!(s, "T={}", report.t_end);
    let _ = writeln!(s, "dt={}", report.dt);
    let _ = writeln!(s, "sup_error={:e}", report.sup_error);
    for (i, m) in report.mean_abs_error.iter().enumerate() {
        if i == 0 {
            let _ = writeln!(s, "mean_abs_error={m:e}");
        } else {
            let _ = writeln!(s, "mean_abs_error_{}={m:e}", i + 1);
        }
    }
    let _ = writeln!(s, "determinant={}", report.determinant);
    let _ = writeln!(s, "runtime_riccati_s={:.3}", report.runtime_riccati_s);
    let _ = writeln!(s, "runtime_direct_s={:.3}", report.runtime_direct_s);
    s
}

/// Gnuplot script: direct solution, Riccati solution and their difference
/// on the top rows, the determinant and Hilbert–Schmidt traces at the bottom.
pub fn plot_script(report: &ComparisonReport) -> String {
    let name = &report.scenario;
    let files = solution_file_names(report);
    let line = matches!(report.riccati, Field::Line { .. });
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot -p plot_{name}.gp");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set terminal pngcairo size 1200,{}", 400 * (files.len() + 1));
    let _ = writeln!(s, "set output 'plot_{name}.png'");
    let _ = writeln!(s, "set multiplot layout {},3 title '{name}, T = {}'", files.len() + 1, report.t_end);
    if !line {
        let _ = writeln!(s, "set view map\nset pm3d at b\nunset surface");
    }
    for (file, label) in files.iter().zip(report.riccati.labels()) {
        for (col, title) in [(5, "direct"), (3, "Riccati"), (7, "|difference|")] {
            let _ = writeln!(s, "set title 'Re {label} {title}'");
            if line {
                let _ = writeln!(s, "plot '{file}' every ::1 using 1:{col} with lines notitle");
            } else {
                let _ = writeln!(s, "splot '{file}' every ::1 using 1:2:{col} with pm3d notitle");
            }
        }
    }
    if !line {
        let _ = writeln!(s, "unset view\nunset pm3d\nset surface");
    }
    let trace = format!("trace_{name}.csv");
    let _ = writeln!(s, "set title '|{}|'", report.determinant);
    let _ = writeln!(s, "plot '{trace}' every ::1 using 1:4 with lines notitle");
    let _ = writeln!(s, "set title 'Hilbert-Schmidt norm'");
    let _ = writeln!(s, "plot '{trace}' every ::1 using 1:5 with lines notitle");
    let _ = writeln!(s, "unset multiplot");
    s
}

/// Writes solution CSVs, the trace CSV, the summary and the plot script.
pub fn emit_csv(report: &ComparisonReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = write_solution_csvs(report, dir)?;
    paths.push(write_trace_csv(report, dir)?);
    let summary = dir.join(format!("summary_{}.txt", report.scenario));
    write_file(&summary, &summary_text(report))?;
    paths.push(summary);
    let plot = dir.join(format!("plot_{}.gp", report.scenario));
    write_file(&plot, &plot_script(report))?;
    paths.push(plot);
    Ok(paths)
}

/// Reads a CSV of numbers written by this module (header skipped).
pub fn read_numeric_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let row = rec
            .iter()
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| Error::Config(format!("{}: bad number {v:?}: {e}", path.display())))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value, got {raw:?}", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}
