//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N: PASS|FAIL ...` line (visible with `--nocapture`).

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cvswap::cf::GaussPolyCF;
use cvswap::experiments::figures::figure_specs_on;
use cvswap::experiments::{compute_sweep, FigureId, Grid};
use cvswap::optimizer::{gain_invariance_check, gain_split_spread, optimize, optimize_direct, Scenario};
use cvswap::states::{fock_cf_oracle, preset_params, sb_cf, Family, SqueezedBellParams};
use cvswap::swapping::{ideal_swapped_cf, oracle_swapped_point_with, swapped_cf, ApparatusParams, OracleSettings};
use cvswap::teleportation::{
    direct_resource_fidelity, fidelity_with_amplitude, oracle_fidelity, swapped_fidelity, CoherentAmplitude,
};

fn verdict(n: u32, ok: bool, detail: String) {
    println!("criterion {n:>2}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n}: {detail}");
}

fn random_params(rng: &mut ChaCha8Rng, r_max: f64) -> SqueezedBellParams {
    SqueezedBellParams::new(
        rng.gen_range(0.0..r_max),
        rng.gen_range(0.0..2.0 * PI),
        rng.gen_range(0.0..PI),
        rng.gen_range(0.0..2.0 * PI),
    )
    .unwrap()
}

fn random_z(rng: &mut ChaCha8Rng, half: f64) -> [f64; 4] {
    [
        rng.gen_range(-half..half),
        rng.gen_range(-half..half),
        rng.gen_range(-half..half),
        rng.gen_range(-half..half),
    ]
}

fn preset(kind: Family, r: f64) -> GaussPolyCF {
    sb_cf(&preset_params(kind, r, PI).unwrap()).unwrap()
}

fn sb(r: f64, delta: f64) -> GaussPolyCF {
    sb_cf(&SqueezedBellParams::new(r, PI, delta, 0.0).unwrap()).unwrap()
}

#[test]
fn criterion_01_state_validity() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut norm, mut herm, mut bound) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..500 {
        let cf = sb_cf(&random_params(&mut rng, 1.5)).unwrap();
        norm = norm.max((cf.eval(&[0.0; 4]).unwrap() - 1.0).norm());
        for _ in 0..50 {
            let z = random_z(&mut rng, 5.0);
            let neg = z.map(|v| -v);
            let a = cf.eval(&z).unwrap();
            herm = herm.max((cf.eval(&neg).unwrap() - a.conj()).norm());
            bound = bound.max(a.norm());
        }
    }
    let secs = t.elapsed().as_secs_f64();
    let ok = norm <= 1e-12 && herm <= 1e-12 && bound <= 1.0 + 1e-10 && secs < 30.0;
    verdict(
        1,
        ok,
        format!("|chi(0)-1| {norm:.1e}, hermiticity {herm:.1e}, max |chi| {bound:.12}, {secs:.1}s"),
    );
}

#[test]
fn criterion_02_fock_dual_implementation() {
    // the n_max = 40 cutoff is exact to 1e-8 only for r below about 0.9
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = random_params(&mut rng, 0.8);
        let z = random_z(&mut rng, 2.5);
        let closed = sb_cf(&p).unwrap().eval(&z).unwrap();
        worst = worst.max((closed - fock_cf_oracle(&p, &z, 40).unwrap()).norm());
    }
    verdict(2, worst <= 1e-8, format!("max |closed - Fock| {worst:.2e} over 100 samples, r <= 0.8"));
}

#[test]
fn criterion_03_reference_fidelity() {
    let mut worst = 0.0f64;
    let mut quad_worst = 0.0f64;
    for r in [0.0, 0.5, 1.0, 1.5] {
        let tb = preset(Family::TB, r);
        let closed = 1.0 / (1.0 + (-2.0 * r).exp());
        worst = worst.max((direct_resource_fidelity(&tb).unwrap() - closed).abs());
        // ideal swap through an EPR-like link, then brute-force integration
        let swapped = ideal_swapped_cf(&tb, &preset(Family::TB, 9.0)).unwrap();
        let q = fidelity_with_amplitude(&swapped, CoherentAmplitude::new(Complex64::new(0.3, -0.2)), 1e-9).unwrap();
        quad_worst = quad_worst.max((q.re - closed).abs());
    }
    verdict(
        3,
        worst <= 1e-9 && quad_worst <= 1e-6,
        format!("closed form {worst:.1e}, quadrature cross-check {quad_worst:.1e}"),
    );
}

#[test]
fn criterion_04_ideal_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let app = ApparatusParams::ideal();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let a = sb_cf(&random_params(&mut rng, 1.5)).unwrap();
        let b = sb_cf(&random_params(&mut rng, 1.5)).unwrap();
        let general = swapped_cf(&a, &b, &app).unwrap();
        let ideal = ideal_swapped_cf(&a, &b).unwrap();
        for _ in 0..100 {
            let z = random_z(&mut rng, 3.0);
            worst = worst.max((general.eval(&z).unwrap() - ideal.eval(&z).unwrap()).norm());
        }
    }
    verdict(4, worst <= 1e-12, format!("max deviation {worst:.1e} over 2000 points"));
}

#[test]
fn criterion_05_oracle_agreement() {
    let t = Instant::now();
    let ideal = ApparatusParams::ideal();
    let lossy = ApparatusParams::lossy_reference();
    let configs: Vec<(&str, GaussPolyCF, GaussPolyCF, ApparatusParams)> = vec![
        ("TB/TB ideal", preset(Family::TB, 0.7), preset(Family::TB, 1.0), ideal.with_gains(0.0, 0.8)),
        ("TB/TB lossy", preset(Family::TB, 0.7), preset(Family::TB, 1.0), lossy.with_gains(0.2, 0.6)),
        ("PS/TB ideal", preset(Family::PS, 0.6), preset(Family::TB, 0.8), ideal.with_gains(0.0, 0.9)),
        ("PS/TB lossy", preset(Family::PS, 0.6), preset(Family::TB, 0.8), lossy),
        ("PS/PS lossy", preset(Family::PS, 0.9), preset(Family::PS, 0.5), lossy.with_gains(0.4, 0.4)),
        ("SB/TB ideal", sb(0.5, 0.9), preset(Family::TB, 1.2), ideal.with_gains(0.5, 0.4)),
        ("SB/TB lossy", sb(0.5, 0.9), preset(Family::TB, 1.2), lossy.with_gains(0.0, 0.85)),
        ("SB/SB ideal", sb(0.8, 2.2), sb(0.6, 0.4), ideal),
        ("SB/SB lossy", sb(0.8, 2.2), sb(0.6, 0.4), lossy.with_gains(0.3, 0.7)),
        ("TB/SB lossy", preset(Family::TB, 1.1), sb(0.9, 1.3), lossy.with_gains(0.0, 0.95)),
    ];
    let settings = OracleSettings::new(1e-7);
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let (mut pw, mut fw) = (0.0f64, 0.0f64);
    let mut worst_cfg = "";
    for (name, a, b, app) in &configs {
        let closed = swapped_cf(a, b, app).unwrap();
        for _ in 0..5 {
            let z = random_z(&mut rng, 1.5);
            let o = oracle_swapped_point_with(a, b, app, &z, &settings).unwrap();
            let d = (o - closed.eval(&z).unwrap()).norm();
            if d > pw {
                pw = d;
                worst_cfg = name;
            }
        }
        let f = swapped_fidelity(a, b, app).unwrap();
        let fo = oracle_fidelity(a, b, app, &settings, 20).unwrap();
        fw = fw.max((f - fo).abs());
    }
    let secs = t.elapsed().as_secs_f64();
    verdict(
        5,
        pw <= 1e-4 && fw <= 1e-4 && secs < 600.0,
        format!("points {pw:.1e} (worst {worst_cfg}), fidelity {fw:.1e}, {secs:.0}s"),
    );
}

#[test]
fn criterion_06_epr_transparency() {
    let resource = preset(Family::TB, 6.0);
    let app = ApparatusParams::ideal().with_gains(0.0, 1.0);
    let mut worst = 0.0f64;
    for x in [preset(Family::TB, 0.8), preset(Family::PS, 0.8), sb(0.8, 0.3)] {
        let d = swapped_fidelity(&x, &resource, &app).unwrap() - direct_resource_fidelity(&x).unwrap();
        worst = worst.max(d.abs());
    }
    verdict(6, worst <= 1e-4, format!("max |F_swapped - F_direct| {worst:.2e}"));
}

#[test]
fn criterion_07_superset_dominance() {
    let mut margin = f64::INFINITY;
    let mut at = (0.0, 0.0);
    for r34 in [0.5, 1.0, 1.5] {
        for i in 0..=10 {
            let r12 = 0.2 * i as f64;
            let f = |a: Family| optimize(&Scenario::new(a, Family::TB, r12, r34)).unwrap().best_fidelity;
            let m = f(Family::SB) - f(Family::PS).max(f(Family::TB));
            if m < margin {
                margin = m;
                at = (r12, r34);
            }
        }
    }
    verdict(
        7,
        margin >= -1e-9,
        format!("min F_SB - max(F_PS, F_TB) = {margin:.2e} at (r12, r34) = {at:?}"),
    );
}

#[test]
fn criterion_08_classical_bound() {
    // vacuum inputs (TB and PS at r = 0) with resources whose angle is free
    let mut worst = 0.0f64;
    for input in [Family::TB, Family::PS] {
        for resource in [Family::TB, Family::SB] {
            for r34 in [0.5, 1.0, 1.5] {
                let f = optimize(&Scenario::new(input, resource, 0.0, r34)).unwrap().best_fidelity;
                worst = worst.max((f - 0.5).abs());
            }
        }
    }
    // regression set: nothing above unity
    let mut top = 0.0f64;
    for app in [ApparatusParams::ideal(), ApparatusParams::lossy_reference()] {
        for (a, b) in [(Family::SB, Family::SB), (Family::SB, Family::TB), (Family::PS, Family::PS), (Family::TB, Family::TB)] {
            for (r12, r34) in [(0.0, 3.0), (1.0, 1.0), (2.0, 2.0), (2.0, 8.0)] {
                let f = optimize(&Scenario::new(a, b, r12, r34).with_apparatus(app)).unwrap().best_fidelity;
                top = top.max(f);
            }
        }
    }
    for kind in [Family::SB, Family::PS, Family::TB] {
        top = top.max(optimize_direct(kind, 3.0, PI).unwrap().best_fidelity);
    }
    verdict(
        8,
        worst <= 1e-6 && top <= 1.0,
        format!("max |F - 0.5| at r12 = 0: {worst:.1e}; largest fidelity in regression set {top:.9}"),
    );
}

fn sweep_relative(id: FigureId, grid: Grid, r34: f64, opt: &str, reference: &str) -> Vec<(f64, f64)> {
    let file = format!("{}_r34_{r34:.1}.csv", id.name());
    let (_, spec) = figure_specs_on(id, grid)
        .into_iter()
        .find(|(f, _)| *f == file)
        .unwrap();
    let table = compute_sweep(&spec).unwrap();
    let rel = table.relative(opt, reference).unwrap();
    table.rows.iter().map(|r| r.x).zip(rel).collect()
}

#[test]
fn criterion_09_fig3_crossing() {
    let grid = Grid::new(0.2, 0.6, 0.05).unwrap();
    let low = sweep_relative(FigureId::Fig3, grid, 0.5, "SBswSB", "TBswTB");
    let high = sweep_relative(FigureId::Fig3, grid, 1.5, "SBswSB", "TBswTB");
    let diff: Vec<(f64, f64)> = low.iter().zip(&high).map(|(l, h)| (l.0, h.1 - l.1)).collect();
    let crossing = diff
        .windows(2)
        .find(|w| w[0].1 * w[1].1 <= 0.0)
        .map(|w| w[0].0 - w[0].1 * (w[1].0 - w[0].0) / (w[1].1 - w[0].1));
    let far = Grid::new(2.0, 2.0, 0.1).unwrap();
    let tail = sweep_relative(FigureId::Fig3, far, 0.5, "SBswSB", "TBswTB")[0]
        .1
        .min(sweep_relative(FigureId::Fig3, far, 1.5, "SBswSB", "TBswTB")[0].1);
    let ok = crossing.is_some_and(|c| (0.25..=0.55).contains(&c)) && tail >= 0.01;
    verdict(9, ok, format!("crossing at r12 = {crossing:?}, min relative fidelity at r12 = 2: {tail:.4}"));
}

#[test]
fn criterion_10_fig5_monotone_enhancement() {
    let grid = Grid::new(0.5, 2.0, 0.1).unwrap();
    let mut failures = Vec::new();
    for r34 in [0.5, 0.7, 1.0, 1.5] {
        let curve = sweep_relative(FigureId::Fig5, grid, r34, "SBswTB", "TBswTB");
        let positive = curve.iter().all(|c| c.1 > 0.0);
        let rising = curve.windows(2).all(|w| w[1].1 >= w[0].1);
        if !(positive && rising) {
            failures.push(format!(
                "r34 = {r34}: dF({}) = {:.4}, dF({}) = {:.4}",
                curve[0].0,
                curve[0].1,
                curve[curve.len() - 1].0,
                curve[curve.len() - 1].1
            ));
        }
    }
    verdict(
        10,
        failures.is_empty(),
        if failures.is_empty() {
            "positive and non-decreasing for all r34".into()
        } else {
            format!("not non-decreasing: {}", failures.join("; "))
        },
    );
}

#[test]
fn criterion_11_gain_reduction() {
    let mut worst = 0.0f64;
    let mut all = true;
    let cases = [
        (Family::TB, Family::TB, 0.8, 1.0, 0.0, 0.0, ApparatusParams::ideal(), 1.0),
        (Family::SB, Family::SB, 0.7, 0.9, 0.6, 1.9, ApparatusParams::ideal(), 0.8),
        (Family::SB, Family::SB, 0.7, 0.9, 0.6, 1.9, ApparatusParams::lossy_reference(), 0.9),
        (Family::PS, Family::TB, 1.2, 0.5, 0.0, 0.0, ApparatusParams::lossy_reference(), 0.7),
    ];
    for (a, b, r12, r34, d12, d34, app, g) in cases {
        let mut s = Scenario::new(a, b, r12, r34).with_apparatus(app);
        s.delta12 = d12;
        s.delta34 = d34;
        let splits = [(0.0, g), (0.5 * g, 0.5 * g), (g, 0.0)];
        worst = worst.max(gain_split_spread(&s, g, &splits).unwrap());
        all &= gain_invariance_check(&s, g, &splits).unwrap();
    }
    verdict(11, all && worst <= 1e-9, format!("max spread across splits {worst:.1e}"));
}

#[test]
fn criterion_12_fig5_determinism_and_runtime() {
    let exe = env!("CARGO_BIN_EXE_cvswap");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut secs = 0.0f64;
    for d in &dirs {
        let t = Instant::now();
        let status = Command::new(exe)
            .args(["--out", d.path().to_str().unwrap(), "figure", "fig5"])
            .status()
            .unwrap();
        secs = secs.max(t.elapsed().as_secs_f64());
        assert!(status.success());
    }
    let mut names: Vec<String> = std::fs::read_dir(dirs[0].path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    let csvs: Vec<&String> = names.iter().filter(|n| n.ends_with(".csv")).collect();
    let identical = !csvs.is_empty()
        && names.iter().all(|n| {
            std::fs::read(dirs[0].path().join(n)).unwrap() == std::fs::read(dirs[1].path().join(n)).unwrap()
        });
    verdict(
        12,
        identical && secs < 600.0,
        format!("{} CSV files byte-identical: {identical}, slowest run {secs:.0}s", csvs.len()),
    );
}
