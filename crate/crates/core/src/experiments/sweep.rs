//! Parameter sweeps: optimized fidelities of several curves along one axis,
//! written as CSV with a JSON manifest.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{convention_hash, TOOL_NAME};
use crate::error::{Error, Result};
use crate::optimizer::{optimize, optimize_direct, relative_fidelity, Constraint, OptimizationReport, Scenario};
use crate::states::Family;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    R12,
    R34,
    /// `r₁₂ = r₃₄` moved together.
    Symmetric,
}

impl SweepAxis {
    pub fn column(self) -> &'static str {
        match self {
            SweepAxis::R12 | SweepAxis::Symmetric => "r12",
            SweepAxis::R34 => "r34",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let g = Self { start, stop, step };
        g.points()?;
        Ok(g)
    }

    /// `start + i step` up to `stop`, each rounded to 12 decimals so that
    /// values such as `0.3` print exactly.
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::ParameterRange(format!("grid step {} must be positive and bounds finite", self.step)));
        }
        if self.stop < self.start {
            return Err(Error::ParameterRange(format!("empty grid: stop {} < start {}", self.stop, self.start)));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        if n > 100_000 {
            return Err(Error::ParameterRange(format!("grid has {} points", n + 1)));
        }
        Ok((0..=n)
            .map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect())
    }
}

/// One column family of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Curve {
    /// Optimized fidelity of a swapped scenario.
    Swapped { label: String, scenario: Scenario },
    /// Optimized fidelity of a single resource used directly (no swap).
    Direct { label: String, family: Family, phi: f64 },
}

impl Curve {
    pub fn swapped(scenario: Scenario) -> Self {
        let label = format!("{}sw{}", scenario.input_family, scenario.resource_family);
        Curve::Swapped { label, scenario }
    }

    pub fn direct(family: Family) -> Self {
        Curve::Direct {
            label: family.name().to_string(),
            family,
            phi: PI,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Curve::Swapped { label, .. } | Curve::Direct { label, .. } => label.clone(),
        }
    }

    fn run(&self, axis: SweepAxis, x: f64) -> Result<OptimizationReport> {
        match self {
            Curve::Swapped { scenario, .. } => {
                let mut s = scenario.clone();
                match axis {
                    SweepAxis::R12 => s.r12 = x,
                    SweepAxis::R34 => s.r34 = x,
                    SweepAxis::Symmetric => {
                        s.r12 = x;
                        s.r34 = x;
                    }
                }
                optimize(&s)
            }
            Curve::Direct { family, phi, .. } => optimize_direct(*family, x, *phi),
        }
    }

    /// Free parameters pinned by the family presets, for the manifest.
    fn note(&self) -> Option<String> {
        match self {
            Curve::Swapped { scenario, .. } => {
                let mut pinned = Vec::new();
                if !scenario.input_family.has_free_delta() {
                    pinned.push("delta12");
                }
                if !scenario.resource_family.has_free_delta() || scenario.constraint == Constraint::Symmetric {
                    pinned.push("delta34");
                }
                (!pinned.is_empty()).then(|| format!("{} fixed by the family preset or constraint; remaining parameters optimized", pinned.join(", ")))
            }
            Curve::Direct { family, .. } => {
                (!family.has_free_delta()).then(|| "delta fixed by the family preset".to_string())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub grid: Grid,
    pub curves: Vec<Curve>,
    /// `(optimized, reference)` curve labels.
    pub comparisons: Vec<(String, String)>,
    pub output: Option<PathBuf>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.grid.points()?;
        if self.curves.is_empty() {
            return Err(Error::Contract("sweep has no curves".into()));
        }
        let labels: Vec<String> = self.curves.iter().map(Curve::label).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Contract(format!("duplicate curve label {l}")));
            }
        }
        for (a, b) in &self.comparisons {
            if !labels.contains(a) || !labels.contains(b) {
                return Err(Error::Contract(format!("comparison {a} vs {b} names an unknown curve")));
            }
        }
        if self.axis == SweepAxis::Symmetric {
            for c in &self.curves {
                if let Curve::Swapped { scenario, .. } = c {
                    if scenario.constraint != Constraint::Symmetric {
                        return Err(Error::Contract(format!("{}: symmetric axis needs the symmetric constraint", c.label())));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDiagnostics {
    pub axis_value: f64,
    pub curve: String,
    pub evaluations: usize,
    pub converged: bool,
    pub max_imaginary_residue: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub label: String,
    pub curve: Curve,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Everything needed to regenerate one CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub file: String,
    pub axis: SweepAxis,
    pub grid: Grid,
    pub curves: Vec<CurveRecord>,
    pub comparisons: Vec<(String, String)>,
    pub points: Vec<PointDiagnostics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub convention_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<String>,
    /// Resolved configuration entries, when the run came from a file.
    pub config: std::collections::BTreeMap<String, String>,
    pub datasets: Vec<DatasetManifest>,
}

impl RunManifest {
    pub fn new(figure: Option<&str>) -> Self {
        Self {
            tool: TOOL_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            convention_hash: convention_hash(),
            figure: figure.map(str::to_string),
            config: Default::default(),
            datasets: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// Values of one sweep, in grid order.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub labels: Vec<String>,
    pub comparisons: Vec<(String, String)>,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub x: f64,
    pub results: Vec<std::result::Result<OptimizationReport, String>>,
}

impl SweepRow {
    pub fn fidelity(&self, curve: usize) -> f64 {
        self.results[curve].as_ref().map_or(f64::NAN, |r| r.best_fidelity)
    }
}

impl SweepTable {
    pub fn column(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Fidelities of one curve along the axis.
    pub fn fidelities(&self, label: &str) -> Option<Vec<f64>> {
        let i = self.column(label)?;
        Some(self.rows.iter().map(|r| r.fidelity(i)).collect())
    }

    /// Relative fidelity `(F_a − F_b)/F_b` along the axis, NaN where undefined.
    pub fn relative(&self, opt: &str, reference: &str) -> Option<Vec<f64>> {
        let (a, b) = (self.column(opt)?, self.column(reference)?);
        Some(
            self.rows
                .iter()
                .map(|r| relative_fidelity(r.fidelity(a), r.fidelity(b)).unwrap_or(f64::NAN))
                .collect(),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut head = vec![self.axis.column().to_string()];
        head.extend(self.labels.iter().map(|l| format!("F_{l}")));
        head.extend(self.comparisons.iter().map(|(a, b)| format!("dF_{a}_vs_{b}")));
        for l in &self.labels {
            head.extend(["delta12", "delta34", "g_tilde"].iter().map(|p| format!("{l}_{p}")));
        }
        head.push("reason".into());
        out.push_str(&head.join(","));
        out.push('\n');

        for row in &self.rows {
            let mut cells = vec![fmt_sig(row.x)];
            cells.extend((0..self.labels.len()).map(|i| fmt_sig(row.fidelity(i))));
            for (a, b) in &self.comparisons {
                let (ia, ib) = (self.column(a).unwrap(), self.column(b).unwrap());
                let rel = relative_fidelity(row.fidelity(ia), row.fidelity(ib)).unwrap_or(f64::NAN);
                cells.push(fmt_sig(rel));
            }
            let mut reasons = Vec::new();
            for (l, res) in self.labels.iter().zip(&row.results) {
                match res {
                    Ok(r) => {
                        cells.push(fmt_sig(r.argmax.delta12));
                        cells.push(fmt_sig(r.argmax.delta34));
                        cells.push(fmt_sig(r.argmax.g_tilde));
                    }
                    Err(e) => {
                        cells.extend(std::iter::repeat("NaN".to_string()).take(3));
                        reasons.push(format!("{l}: {e}"));
                    }
                }
            }
            cells.push(csv_quote(&reasons.join("; ")));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn diagnostics(&self) -> Vec<PointDiagnostics> {
        let mut v = Vec::new();
        for row in &self.rows {
            for (l, res) in self.labels.iter().zip(&row.results) {
                v.push(match res {
                    Ok(r) => PointDiagnostics {
                        axis_value: row.x,
                        curve: l.clone(),
                        evaluations: r.evaluations,
                        converged: r.converged,
                        max_imaginary_residue: r.max_imaginary_residue,
                        error: None,
                    },
                    Err(e) => PointDiagnostics {
                        axis_value: row.x,
                        curve: l.clone(),
                        evaluations: 0,
                        converged: false,
                        max_imaginary_residue: f64::NAN,
                        error: Some(e.clone()),
                    },
                });
            }
        }
        v
    }
}

/// 12 significant digits, `NaN` for non-finite values.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return "NaN".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..12).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // −0.000… prints as "-0"; keep the digits but drop trailing zeros
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Evaluates every curve at every grid point. Points run on the current
/// rayon pool; the result order is the grid order regardless of threads.
pub fn compute_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let xs = spec.grid.points()?;
    let rows = xs
        .par_iter()
        .map(|&x| SweepRow {
            x,
            results: spec
                .curves
                .iter()
                .map(|c| c.run(spec.axis, x).map_err(|e| e.to_string()))
                .collect(),
        })
        .collect();
    Ok(SweepTable {
        axis: spec.axis,
        labels: spec.curves.iter().map(Curve::label).collect(),
        comparisons: spec.comparisons.clone(),
        rows,
    })
}

pub fn dataset_manifest(spec: &SweepSpec, table: &SweepTable, file: &str) -> DatasetManifest {
    DatasetManifest {
        file: file.to_string(),
        axis: spec.axis,
        grid: spec.grid,
        curves: spec
            .curves
            .iter()
            .map(|c| CurveRecord {
                label: c.label(),
                curve: c.clone(),
                note: c.note(),
            })
            .collect(),
        comparisons: spec.comparisons.clone(),
        points: table.diagnostics(),
    }
}

/// Runs the sweep and writes `<output>` plus `<output stem>.manifest.json`.
/// Returns the paths written.
pub fn run_sweep(spec: &SweepSpec, default_dir: &Path, config: &std::collections::BTreeMap<String, String>) -> Result<(PathBuf, PathBuf, SweepTable)> {
    let csv_path = match &spec.output {
        Some(p) if p.is_absolute() => p.clone(),
        Some(p) => default_dir.join(p),
        None => default_dir.join("sweep.csv"),
    };
    let table = compute_sweep(spec)?;
    if let Some(dir) = csv_path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(&csv_path, table.to_csv())?;
    let file = csv_path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let mut manifest = RunManifest::new(None);
    manifest.config = config.clone();
    manifest.datasets.push(dataset_manifest(spec, &table, &file));
    let manifest_path = csv_path.with_extension("manifest.json");
    std::fs::write(&manifest_path, manifest.to_json())?;
    Ok((csv_path, manifest_path, table))
}
