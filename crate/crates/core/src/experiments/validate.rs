//! Self-check suite behind `cvswap validate`.
//!
//! `quick` covers the algebraic properties and the closed-form reductions;
//! `full` adds the point-by-point protocol oracle and the Fock-space state
//! construction at larger cutoffs.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cf::GaussPolyCF;
use crate::error::{Error, Result};
use crate::optimizer::{gain_split_spread, optimize, Scenario};
use crate::states::{fock_cf_oracle, preset_params, sb_cf, Family, SqueezedBellParams};
use crate::swapping::{ideal_swapped_cf, oracle_swapped_point_with, swapped_cf, ApparatusParams, OracleSettings};
use crate::teleportation::{direct_resource_fidelity, oracle_fidelity, swapped_fidelity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy)]
pub struct ValidationOptions {
    pub level: Level,
    /// Accuracy requested from the oracle integrals.
    pub tol: f64,
    /// Deliberately reverses the displacement phase in the oracle.
    pub mutate_displacement_phase: bool,
}

impl ValidationOptions {
    pub fn new(level: Level) -> Self {
        Self {
            level,
            tol: 1e-6,
            mutate_displacement_phase: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Largest deviation met, in the units of the check.
    pub max_residue: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub level: Level,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// `(what, max deviation, bound)` triples; a check passes iff every
/// deviation is within its bound.
type CheckOutcome = Result<Vec<(&'static str, f64, f64)>>;

fn run_check(name: &str, f: impl FnOnce() -> CheckOutcome) -> CheckResult {
    let t = Instant::now();
    let out = f();
    let seconds = t.elapsed().as_secs_f64();
    match out {
        Ok(parts) => CheckResult {
            name: name.into(),
            passed: parts.iter().all(|(_, v, b)| v <= b),
            detail: parts
                .iter()
                .map(|(w, v, b)| format!("{w} {v:.3e} (bound {b:.0e})"))
                .collect::<Vec<_>>()
                .join(", "),
            max_residue: parts.iter().map(|p| p.1).fold(0.0, f64::max),
            seconds,
        },
        Err(e) => CheckResult {
            name: name.into(),
            passed: false,
            detail: format!("error: {e}"),
            max_residue: f64::NAN,
            seconds,
        },
    }
}

fn random_params(rng: &mut ChaCha8Rng, r_max: f64) -> SqueezedBellParams {
    SqueezedBellParams::new(
        rng.gen_range(0.0..r_max),
        rng.gen_range(0.0..2.0 * PI),
        rng.gen_range(0.0..PI),
        rng.gen_range(0.0..2.0 * PI),
    )
    .expect("sampled parameters are in range")
}

fn random_z(rng: &mut ChaCha8Rng, n: usize, half: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-half..half)).collect()
}

fn tb(r: f64) -> Result<GaussPolyCF> {
    sb_cf(&preset_params(Family::TB, r, PI)?)
}

fn state_validity() -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let cf = sb_cf(&random_params(&mut rng, 1.5))?;
        worst = worst.max((cf.eval(&[0.0; 4])? - 1.0).norm());
        for _ in 0..20 {
            let z = random_z(&mut rng, 4, 4.0);
            let neg: Vec<f64> = z.iter().map(|v| -v).collect();
            let (a, b) = (cf.eval(&z)?, cf.eval(&neg)?);
            worst = worst.max((a - b.conj()).norm());
            if a.norm() > 1.0 + 1e-10 {
                worst = worst.max(a.norm() - 1.0);
            }
        }
    }
    Ok(vec![("deviation", worst, 1e-12)])
}

fn fock_dual(r_max: f64, n_max: usize, samples: usize) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let p = random_params(&mut rng, r_max);
        let z = random_z(&mut rng, 4, 2.0);
        let z4 = [z[0], z[1], z[2], z[3]];
        let closed = sb_cf(&p)?.eval(&z)?;
        worst = worst.max((closed - fock_cf_oracle(&p, &z4, n_max)?).norm());
    }
    Ok(vec![("deviation", worst, 1e-8)])
}

fn direct_twin_beam() -> CheckOutcome {
    let mut worst = 0.0f64;
    for r in [0.0, 0.5, 1.0, 1.5] {
        let f = direct_resource_fidelity(&tb(r)?)?;
        worst = worst.max((f - 1.0 / (1.0 + (-2.0 * r).exp())).abs());
    }
    Ok(vec![("deviation", worst, 1e-9)])
}

/// The general swapped state at the ideal apparatus against the closed
/// ideal form, and the protocol oracle against both.
fn ideal_reduction(opts: &ValidationOptions) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let app = ApparatusParams::ideal();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let a = sb_cf(&random_params(&mut rng, 1.2))?;
        let b = sb_cf(&random_params(&mut rng, 1.2))?;
        let general = swapped_cf(&a, &b, &app)?;
        let ideal = ideal_swapped_cf(&a, &b)?;
        for _ in 0..20 {
            let z = random_z(&mut rng, 4, 3.0);
            worst = worst.max((general.eval(&z)? - ideal.eval(&z)?).norm());
        }
    }
    let settings = OracleSettings {
        flip_displacement_phase: opts.mutate_displacement_phase,
        ..OracleSettings::new(opts.tol)
    };
    let a = sb_cf(&preset_params(Family::PS, 0.6, PI)?)?;
    let b = sb_cf(&SqueezedBellParams::new(0.8, PI, 0.5, 0.0)?)?;
    let ideal = ideal_swapped_cf(&a, &b)?;
    let mut oracle_worst = 0.0f64;
    for z in [[0.4, -0.3, 0.2, 0.5], [-0.6, 0.1, 0.7, -0.2]] {
        let o = oracle_swapped_point_with(&a, &b, &app, &z, &settings)?;
        oracle_worst = oracle_worst.max((o - ideal.eval(&z)?).norm());
    }
    Ok(vec![("closed form", worst, 1e-12), ("oracle", oracle_worst, 10.0 * opts.tol)])
}

fn gain_invariance() -> CheckOutcome {
    let mut worst = 0.0f64;
    for (app, g) in [(ApparatusParams::ideal(), 1.0), (ApparatusParams::lossy_reference(), 0.9)] {
        let mut s = Scenario::new(Family::SB, Family::SB, 0.8, 0.6).with_apparatus(app);
        s.delta12 = 0.7;
        s.delta34 = 0.4;
        worst = worst.max(gain_split_spread(&s, g, &[(0.0, g), (0.5 * g, 0.5 * g), (g, 0.0)])?);
    }
    Ok(vec![("spread", worst, 1e-9)])
}

fn epr_transparency() -> CheckOutcome {
    let resource = tb(6.0)?;
    let app = ApparatusParams::ideal();
    let mut worst = 0.0f64;
    for p in [
        preset_params(Family::TB, 0.8, PI)?,
        preset_params(Family::PS, 0.8, PI)?,
        SqueezedBellParams::new(0.8, PI, 0.3, 0.0)?,
    ] {
        let x = sb_cf(&p)?;
        worst = worst.max((swapped_fidelity(&x, &resource, &app)? - direct_resource_fidelity(&x)?).abs());
    }
    Ok(vec![("deviation", worst, 1e-4)])
}

fn classical_bound() -> CheckOutcome {
    let mut worst = 0.0f64;
    for r34 in [0.5, 1.5] {
        let rep = optimize(&Scenario::new(Family::TB, Family::TB, 0.0, r34))?;
        worst = worst.max((rep.best_fidelity - 0.5).abs());
    }
    Ok(vec![("deviation", worst, 1e-6)])
}

fn oracle_agreement(opts: &ValidationOptions) -> CheckOutcome {
    let settings = OracleSettings {
        flip_displacement_phase: opts.mutate_displacement_phase,
        ..OracleSettings::new(opts.tol)
    };
    let configs = [
        (preset_params(Family::TB, 0.7, PI)?, ApparatusParams::lossy_reference().with_gains(0.2, 0.7)),
        (preset_params(Family::PS, 0.6, PI)?, ApparatusParams::ideal().with_gains(0.0, 0.9)),
        (SqueezedBellParams::new(0.5, PI, 0.9, 0.0)?, ApparatusParams::lossy_reference()),
    ];
    let resource = sb_cf(&SqueezedBellParams::new(0.6, PI, 0.4, 0.0)?)?;
    let mut worst = 0.0f64;
    let mut fid_worst = 0.0f64;
    for (p, app) in configs {
        let input = sb_cf(&p)?;
        let closed = swapped_cf(&input, &resource, &app)?;
        for z in [[0.3, -0.2, 0.5, 0.1], [-0.8, 0.4, -0.1, 0.6]] {
            let o = oracle_swapped_point_with(&input, &resource, &app, &z, &settings)?;
            worst = worst.max((o - closed.eval(&z)?).norm());
        }
        let f = swapped_fidelity(&input, &resource, &app)?;
        let fo = oracle_fidelity(&input, &resource, &app, &settings, 12)?;
        fid_worst = fid_worst.max((f - fo).abs());
    }
    Ok(vec![("points", worst, 1e-4), ("fidelity", fid_worst, 1e-4)])
}

pub fn validate(opts: &ValidationOptions) -> ValidationReport {
    let mut checks = vec![
        run_check("state_validity", state_validity),
        run_check("fock_dual_implementation", || fock_dual(0.8, 40, 10)),
        run_check("direct_twin_beam_closed_form", direct_twin_beam),
        run_check("ideal_reduction", || ideal_reduction(opts)),
        run_check("gain_invariance", gain_invariance),
        run_check("epr_transparency", epr_transparency),
        run_check("classical_bound", classical_bound),
    ];
    if opts.level == Level::Full {
        checks.push(run_check("fock_dual_high_squeezing", || fock_dual(1.5, 140, 5)));
        checks.push(run_check("oracle_agreement", || oracle_agreement(opts)));
    }
    ValidationReport {
        level: opts.level,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

/// Rejects tolerances the oracle cannot honour.
pub fn check_tolerance(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1e-2) {
        return Err(Error::Config(format!("tolerance {tol} must lie in (0, 1e-2)")));
    }
    Ok(())
}
