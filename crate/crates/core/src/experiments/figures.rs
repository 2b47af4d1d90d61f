//! Datasets behind the published figures.
//!
//! | id   | apparatus | curves                                   | r₃₄                  |
//! |------|-----------|------------------------------------------|----------------------|
//! | fig2 | ideal     | SB, PS, TB swapped with TB; direct       | 1.5, 1.0, 0.5        |
//! | fig3 | ideal     | SB⊗SB, PS⊗PS, TB⊗TB                      | 1.5, 1.0, 0.7, 0.5   |
//! | fig4 | ideal     | symmetric SB, PS, TB; direct             | = r₁₂                |
//! | fig5 | lossy     | as fig2, no direct                       | 0.5, 0.7, 1.0, 1.5   |
//! | fig6 | lossy     | as fig3                                  | 0.5, 0.7, 1.0, 1.5   |
//! | fig7 | lossy     | as fig4, no direct                       | = r₁₂                |
//!
//! The lossy apparatus is `τ₁ = 0.1`, `τ₄ = 0.2`, `n_th = 0`, `R₂² = R₃² = 0.05`.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::sweep::{compute_sweep, dataset_manifest, Curve, Grid, RunManifest, SweepAxis, SweepSpec, SweepTable};
use crate::error::{Error, Result};
use crate::optimizer::Scenario;
use crate::states::Family;
use crate::swapping::ApparatusParams;

pub const R12_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [FigureId::Fig2, FigureId::Fig3, FigureId::Fig4, FigureId::Fig5, FigureId::Fig6, FigureId::Fig7];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
        }
    }

    pub fn apparatus(self) -> ApparatusParams {
        match self {
            FigureId::Fig2 | FigureId::Fig3 | FigureId::Fig4 => ApparatusParams::ideal(),
            _ => ApparatusParams::lossy_reference(),
        }
    }

    /// Fixed resource squeezings, empty for the symmetric figures.
    pub fn r34_values(self) -> &'static [f64] {
        match self {
            FigureId::Fig2 => &[1.5, 1.0, 0.5],
            FigureId::Fig3 => &[1.5, 1.0, 0.7, 0.5],
            FigureId::Fig5 | FigureId::Fig6 => &[0.5, 0.7, 1.0, 1.5],
            FigureId::Fig4 | FigureId::Fig7 => &[],
        }
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown figure {s} (expected fig2 to fig7)")))
    }
}

fn r12_grid() -> Grid {
    Grid {
        start: 0.0,
        stop: 2.0,
        step: R12_STEP,
    }
}

fn swapped_curves(inputs: &[(Family, Family)], r34: f64, app: ApparatusParams, symmetric: bool) -> Vec<Curve> {
    inputs
        .iter()
        .map(|&(a, b)| {
            let mut s = Scenario::new(a, b, 0.0, r34).with_apparatus(app);
            if symmetric {
                s = s.symmetric();
            }
            Curve::swapped(s)
        })
        .collect()
}

fn comparisons(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
    pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn fmt_r(r: f64) -> String {
    format!("{r:.1}")
}

/// Sweep specs of one figure with their file names, in output order.
pub fn figure_specs(id: FigureId) -> Vec<(String, SweepSpec)> {
    figure_specs_on(id, r12_grid())
}

/// As [`figure_specs`] on a custom `r₁₂` grid.
pub fn figure_specs_on(id: FigureId, grid: Grid) -> Vec<(String, SweepSpec)> {
    use Family::*;
    let app = id.apparatus();
    let name = id.name();
    let mut out = Vec::new();
    let direct = || SweepSpec {
        axis: SweepAxis::R12,
        grid,
        curves: vec![Curve::direct(SB), Curve::direct(PS), Curve::direct(TB)],
        comparisons: comparisons(&[("SB", "TB"), ("SB", "PS")]),
        output: None,
    };
    match id {
        FigureId::Fig2 | FigureId::Fig5 => {
            for &r34 in id.r34_values() {
                let spec = SweepSpec {
                    axis: SweepAxis::R12,
                    grid,
                    curves: swapped_curves(&[(SB, TB), (PS, TB), (TB, TB)], r34, app, false),
                    comparisons: comparisons(&[("SBswTB", "TBswTB"), ("SBswTB", "PSswTB")]),
                    output: None,
                };
                out.push((format!("{name}_r34_{}.csv", fmt_r(r34)), spec));
            }
            if id == FigureId::Fig2 {
                out.push((format!("{name}_direct.csv"), direct()));
            }
        }
        FigureId::Fig3 | FigureId::Fig6 => {
            for &r34 in id.r34_values() {
                let spec = SweepSpec {
                    axis: SweepAxis::R12,
                    grid,
                    curves: swapped_curves(&[(SB, SB), (PS, PS), (TB, TB)], r34, app, false),
                    comparisons: comparisons(&[("SBswSB", "TBswTB"), ("SBswSB", "PSswPS")]),
                    output: None,
                };
                out.push((format!("{name}_r34_{}.csv", fmt_r(r34)), spec));
            }
        }
        FigureId::Fig4 | FigureId::Fig7 => {
            let spec = SweepSpec {
                axis: SweepAxis::Symmetric,
                grid,
                curves: swapped_curves(&[(SB, SB), (PS, PS), (TB, TB)], 0.0, app, true),
                comparisons: comparisons(&[("SBswSB", "TBswTB"), ("SBswSB", "PSswPS")]),
                output: None,
            };
            out.push((format!("{name}_symmetric.csv"), spec));
            if id == FigureId::Fig4 {
                out.push((format!("{name}_direct.csv"), direct()));
            }
        }
    }
    out
}

/// Computes every dataset of a figure. Returns file names with tables and
/// the manifest; nothing is written.
pub fn compute_figure(id: FigureId, grid: Grid) -> Result<(Vec<(String, SweepTable)>, RunManifest)> {
    let mut manifest = RunManifest::new(Some(id.name()));
    let mut tables = Vec::new();
    for (file, spec) in figure_specs_on(id, grid) {
        let table = compute_sweep(&spec)?;
        manifest.datasets.push(dataset_manifest(&spec, &table, &file));
        tables.push((file, table));
    }
    Ok((tables, manifest))
}

/// Writes the CSV set and `<id>_manifest.json` into `dir`.
pub fn reproduce_figure(id: FigureId, dir: &Path) -> Result<Vec<PathBuf>> {
    let (tables, manifest) = compute_figure(id, r12_grid())?;
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (file, table) in &tables {
        let p = dir.join(file);
        std::fs::write(&p, table.to_csv())?;
        written.push(p);
    }
    let p = dir.join(format!("{}_manifest.json", id.name()));
    std::fs::write(&p, manifest.to_json())?;
    written.push(p);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.name().parse::<FigureId>().unwrap(), id);
        }
        assert!("fig8".parse::<FigureId>().is_err());
    }

    #[test]
    fn specs_are_valid() {
        for id in FigureId::ALL {
            let specs = figure_specs(id);
            assert!(!specs.is_empty());
            for (file, spec) in &specs {
                assert!(file.starts_with(id.name()));
                spec.validate().unwrap();
                assert_eq!(spec.grid.points().unwrap().len(), 41);
            }
        }
        assert_eq!(figure_specs(FigureId::Fig3).len(), 4);
        assert_eq!(figure_specs(FigureId::Fig2).len(), 4);
    }

    #[test]
    fn fig5_manifest_carries_the_lossy_apparatus() {
        let grid = Grid::new(0.5, 0.5, 0.1).unwrap();
        let (_, manifest) = compute_figure(FigureId::Fig5, grid).unwrap();
        let json: serde_json::Value = serde_json::from_str(&manifest.to_json()).unwrap();
        let app = &json["datasets"][0]["curves"][0]["curve"]["Swapped"]["scenario"]["apparatus"];
        assert_eq!(app["tau1"], 0.1);
        assert_eq!(app["tau4"], 0.2);
        assert_eq!(app["nth1"], 0.0);
        assert_eq!(app["nth4"], 0.0);
        let t2 = app["t2"].as_f64().unwrap();
        assert!((1.0 - t2 * t2 - 0.05).abs() < 1e-15);
    }

    #[test]
    fn fig2_curves_ordered_by_r34_at_origin() {
        let grid = Grid::new(0.0, 0.0, 0.1).unwrap();
        let (tables, _) = compute_figure(FigureId::Fig2, grid).unwrap();
        let rel: Vec<f64> = tables[..3]
            .iter()
            .map(|(_, t)| t.relative("SBswTB", "TBswTB").unwrap()[0])
            .collect();
        // r₃₄ = 1.5, 1.0, 0.5 from top to bottom
        assert!(rel[0] > rel[1] && rel[1] > rel[2], "{rel:?}");
    }
}
