//! Maximization of the teleportation fidelity of the swapped state over the
//! superposition angles `δ₁₂, δ₃₄` and the total gain `g̃ = g₁ + g₄`.
//!
//! For fixed squeezing and phases, both states are `cos²δ G + cos δ sin δ H
//! + sin²δ K` over the same three pieces and the fidelity is bilinear in the
//! two states, so at each gain it is `u(δ₁₂)ᵀ M(g̃) u(δ₃₄)` with a 3x3 matrix
//! `M`. The search evaluates `M` once per gain value and sweeps the angles
//! for free.
//!
//! The search is a coarse grid followed by a Nelder-Mead refinement started
//! from the best grid point. It is fully deterministic.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cf::GaussPolyCF;
use crate::error::{Error, Result};
use crate::numerics::{simplex_minimize, SimplexOptions};
use crate::states::{delta_weights, preset_params, sb_components, Family, SqueezedBellParams};
use crate::swapping::ApparatusParams;
use crate::teleportation::{fidelity_functional, swapped_fidelity, swapped_fidelity_functional, IMAGINARY_RESIDUE_TOL};

pub const DELTA_GRID: usize = 33;
pub const GAIN_GRID: usize = 41;
pub const GAIN_MAX: f64 = 2.0;
const TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Constraint {
    #[default]
    None,
    /// `r₃₄ = r₁₂` and `δ₃₄ = δ₁₂`.
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeParams {
    pub delta12: bool,
    pub delta34: bool,
    pub gain: bool,
}

impl FreeParams {
    pub const ALL: FreeParams = FreeParams {
        delta12: true,
        delta34: true,
        gain: true,
    };
    pub const GAIN_ONLY: FreeParams = FreeParams {
        delta12: false,
        delta34: false,
        gain: true,
    };
    pub const NONE: FreeParams = FreeParams {
        delta12: false,
        delta34: false,
        gain: false,
    };
}

/// How a total gain is shared between the two displacements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum GainSplit {
    /// `g₁ = 0`, `g₄ = g̃`.
    #[default]
    Mode4,
    /// `g₁ = g₄ = g̃/2`.
    Even,
    /// `g₁ = f g̃`, `g₄ = g̃ − g₁`.
    Fraction(f64),
}

impl GainSplit {
    pub fn split(&self, g_tilde: f64) -> (f64, f64) {
        let g1 = match *self {
            GainSplit::Mode4 => 0.0,
            GainSplit::Even => 0.5 * g_tilde,
            GainSplit::Fraction(f) => f * g_tilde,
        };
        (g1, g_tilde - g1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub input_family: Family,
    pub resource_family: Family,
    pub r12: f64,
    pub r34: f64,
    pub phi12: f64,
    pub phi34: f64,
    /// Only read for `SB` states; the other families derive `θ`.
    pub theta12: f64,
    pub theta34: f64,
    /// Angles used for `SB` states whose angle is not free.
    pub delta12: f64,
    pub delta34: f64,
    pub apparatus: ApparatusParams,
    pub constraint: Constraint,
    pub free: FreeParams,
    pub gain_split: GainSplit,
}

impl Scenario {
    /// Ideal apparatus, squeezing phases `π`, `θ = 0`, every admissible
    /// parameter free.
    pub fn new(input_family: Family, resource_family: Family, r12: f64, r34: f64) -> Self {
        Self {
            input_family,
            resource_family,
            r12,
            r34,
            phi12: PI,
            phi34: PI,
            theta12: 0.0,
            theta34: 0.0,
            delta12: 0.0,
            delta34: 0.0,
            apparatus: ApparatusParams::ideal(),
            constraint: Constraint::None,
            free: FreeParams::ALL,
            gain_split: GainSplit::Mode4,
        }
    }

    pub fn with_apparatus(mut self, app: ApparatusParams) -> Self {
        self.apparatus = app;
        self
    }

    pub fn with_free(mut self, free: FreeParams) -> Self {
        self.free = free;
        self
    }

    pub fn symmetric(mut self) -> Self {
        self.constraint = Constraint::Symmetric;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, r) in [("r12", self.r12), ("r34", self.r34)] {
            if !(r >= 0.0) || !r.is_finite() {
                return Err(Error::ParameterRange(format!("{name} = {r} must be finite and >= 0")));
            }
        }
        if self.constraint == Constraint::Symmetric && self.input_family != self.resource_family {
            return Err(Error::Contract(
                "the symmetric constraint needs the same family for input and resource".into(),
            ));
        }
        self.apparatus.validate()
    }

    /// Free parameters after removing those the families pin.
    pub fn effective_free(&self) -> FreeParams {
        let d12 = self.free.delta12 && self.input_family.has_free_delta();
        let d34 = match self.constraint {
            Constraint::Symmetric => false,
            Constraint::None => self.free.delta34 && self.resource_family.has_free_delta(),
        };
        FreeParams {
            delta12: d12,
            delta34: d34,
            gain: self.free.gain,
        }
    }

    fn effective_r34(&self) -> f64 {
        match self.constraint {
            Constraint::Symmetric => self.r12,
            Constraint::None => self.r34,
        }
    }

    fn state_params(family: Family, r: f64, phi: f64, delta: f64, theta: f64) -> Result<SqueezedBellParams> {
        match family {
            Family::SB => SqueezedBellParams::new(r, phi, delta, theta),
            other => preset_params(other, r, phi),
        }
    }

    /// Input state at the given angle (ignored for pinned families).
    pub fn input_params(&self, delta12: f64) -> Result<SqueezedBellParams> {
        Self::state_params(self.input_family, self.r12, self.phi12, delta12, self.theta12)
    }

    pub fn resource_params(&self, delta34: f64) -> Result<SqueezedBellParams> {
        Self::state_params(self.resource_family, self.effective_r34(), self.phi34, delta34, self.theta34)
    }

    fn gains(&self, g_tilde: Option<f64>) -> (f64, f64) {
        match g_tilde {
            Some(g) => self.gain_split.split(g),
            None => (self.apparatus.g1, self.apparatus.g4),
        }
    }
}

/// Resolved parameter values at the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArgMax {
    pub delta12: f64,
    pub delta34: f64,
    pub g_tilde: f64,
    pub g1: f64,
    pub g4: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub best_fidelity: f64,
    pub argmax: ArgMax,
    /// Parameters that were actually searched.
    pub free: FreeParams,
    pub evaluations: usize,
    pub grid_stage_best: f64,
    pub refined: bool,
    /// Whether the simplex collapsed within its budget.
    pub converged: bool,
    /// Largest imaginary part met while assembling the fidelity kernels.
    pub max_imaginary_residue: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<(Vec<f64>, f64)>>,
}

/// `M(g̃)`: fidelity functional between the three pieces of each state.
struct Kernel {
    m: [[Complex64; 3]; 3],
}

impl Kernel {
    fn value(&self, u12: &[f64; 3], u34: &[f64; 3]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                acc += self.m[i][j] * (u12[i] * u34[j]);
            }
        }
        acc
    }
}

struct Problem<'a> {
    scenario: &'a Scenario,
    free: FreeParams,
    comps12: [GaussPolyCF; 3],
    comps34: [GaussPolyCF; 3],
    pinned12: f64,
    pinned34: f64,
    evaluations: usize,
    residue: f64,
    cached: Option<(f64, Option<Kernel>)>,
}

impl<'a> Problem<'a> {
    fn new(scenario: &'a Scenario) -> Result<Self> {
        scenario.validate()?;
        let p12 = scenario.input_params(scenario.delta12)?;
        let p34 = scenario.resource_params(scenario.delta34)?;
        Ok(Self {
            scenario,
            free: scenario.effective_free(),
            comps12: sb_components(p12.r, p12.phi, p12.theta)?,
            comps34: sb_components(p34.r, p34.phi, p34.theta)?,
            pinned12: p12.delta,
            pinned34: p34.delta,
            evaluations: 0,
            residue: 0.0,
            cached: None,
        })
    }

    fn kernel(&self, g_tilde: Option<f64>) -> Result<Kernel> {
        let (g1, g4) = self.scenario.gains(g_tilde);
        let app = self.scenario.apparatus.with_gains(g1, g4);
        let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = swapped_fidelity_functional(&self.comps12[i], &self.comps34[j], &app)?;
            }
        }
        Ok(Kernel { m })
    }

    fn kernel_cached(&mut self, g: f64) -> Option<&Kernel> {
        let hit = matches!(&self.cached, Some((cg, _)) if *cg == g);
        if !hit {
            let gt = if self.free.gain { Some(g) } else { None };
            self.cached = Some((g, self.kernel(gt).ok()));
        }
        self.cached.as_ref().and_then(|(_, k)| k.as_ref())
    }

    /// Angles actually used: free ones from the search, the rest pinned.
    fn angles(&self, d12: f64, d34: f64) -> (f64, f64) {
        let a = if self.free.delta12 { d12 } else { self.pinned12 };
        let b = match self.scenario.constraint {
            Constraint::Symmetric => a,
            Constraint::None if self.free.delta34 => d34,
            Constraint::None => self.pinned34,
        };
        (a, b)
    }

    fn fidelity_with(&mut self, kernel_value: Complex64) -> f64 {
        self.evaluations += 1;
        self.residue = self.residue.max(kernel_value.im.abs());
        kernel_value.re
    }

    /// Fidelity at full parameters, `NEG_INFINITY` in excluded regions.
    fn eval(&mut self, d12: f64, d34: f64, g: f64) -> f64 {
        if self.free.gain && !(0.0..=GAIN_MAX).contains(&g) {
            return f64::NEG_INFINITY;
        }
        let (a, b) = self.angles(d12, d34);
        let (u12, u34) = (delta_weights(a), delta_weights(b));
        let v = match self.kernel_cached(g) {
            Some(k) => k.value(&u12, &u34),
            None => return f64::NEG_INFINITY,
        };
        self.fidelity_with(v)
    }
}

fn delta_grid() -> Vec<f64> {
    (0..DELTA_GRID).map(|j| PI * j as f64 / DELTA_GRID as f64).collect()
}

fn gain_grid() -> Vec<f64> {
    (0..GAIN_GRID)
        .map(|i| GAIN_MAX * i as f64 / (GAIN_GRID - 1) as f64)
        .collect()
}

/// Searched coordinates in `(δ₁₂, δ₃₄, g̃)` order, normalized to unit scale.
#[derive(Clone, Copy)]
enum Axis {
    Delta12,
    Delta34,
    Gain,
}

impl Axis {
    fn scale(self) -> f64 {
        match self {
            Axis::Delta12 | Axis::Delta34 => PI,
            Axis::Gain => GAIN_MAX,
        }
    }

    fn grid_step(self) -> f64 {
        match self {
            Axis::Delta12 | Axis::Delta34 => 1.0 / DELTA_GRID as f64,
            Axis::Gain => 1.0 / (GAIN_GRID - 1) as f64,
        }
    }
}

pub fn optimize(scenario: &Scenario) -> Result<OptimizationReport> {
    optimize_traced(scenario, false)
}

/// As [`optimize`], optionally recording every refinement evaluation.
pub fn optimize_traced(scenario: &Scenario, keep_trace: bool) -> Result<OptimizationReport> {
    let mut prob = Problem::new(scenario)?;
    let free = prob.free;
    let fixed_gain = scenario.apparatus.total_gain();

    let d12s = if free.delta12 { delta_grid() } else { vec![0.0] };
    let d34s = if free.delta34 { delta_grid() } else { vec![0.0] };
    let gs = if free.gain { gain_grid() } else { vec![fixed_gain] };

    // grid stage, lexicographic order so that ties keep the smaller vector
    let mut best: Option<([f64; 3], f64)> = None;
    for &d12 in &d12s {
        for &d34 in &d34s {
            for &g in &gs {
                let v = prob.eval(d12, d34, g);
                if !v.is_finite() {
                    continue;
                }
                if best.map_or(true, |(_, b)| v > b + TIE) {
                    best = Some(([d12, d34, g], v));
                }
            }
        }
    }
    let (grid_point, grid_value) = best.ok_or(Error::EmptyDomain)?;

    let mut axes = Vec::new();
    if free.delta12 {
        axes.push(Axis::Delta12);
    }
    if free.delta34 {
        axes.push(Axis::Delta34);
    }
    if free.gain {
        axes.push(Axis::Gain);
    }

    let mut point = grid_point;
    let mut value = grid_value;
    let mut refined = false;
    let mut converged = true;
    let mut trace = keep_trace.then(Vec::new);
    if !axes.is_empty() {
        let to_full = |x: &[f64]| -> [f64; 3] {
            let mut p = grid_point;
            for (a, xi) in axes.iter().zip(x) {
                let raw = xi * a.scale();
                match a {
                    // u(δ) has period π
                    Axis::Delta12 => p[0] = raw.rem_euclid(PI),
                    Axis::Delta34 => p[1] = raw.rem_euclid(PI),
                    Axis::Gain => p[2] = raw,
                }
            }
            p
        };
        let start: Vec<f64> = axes
            .iter()
            .map(|a| match a {
                Axis::Delta12 => grid_point[0] / PI,
                Axis::Delta34 => grid_point[1] / PI,
                Axis::Gain => grid_point[2] / GAIN_MAX,
            })
            .collect();
        let scale: Vec<f64> = axes.iter().map(|a| a.grid_step()).collect();
        let res = simplex_minimize(
            |x| {
                let p = to_full(x);
                let v = prob.eval(p[0], p[1], p[2]);
                if let Some(t) = trace.as_mut() {
                    t.push((p.to_vec(), v));
                }
                -v
            },
            &start,
            &scale,
            SimplexOptions::default(),
        )?;
        converged = res.converged;
        refined = true;
        if -res.value > value + TIE {
            value = -res.value;
            point = to_full(&res.point);
        }
    }

    if prob.residue > IMAGINARY_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue {
            value: Complex64::new(value, prob.residue),
            residue: prob.residue,
        });
    }
    let (d12, d34) = prob.angles(point[0], point[1]);
    let g_tilde = if free.gain { point[2] } else { fixed_gain };
    let (g1, g4) = scenario.gains(free.gain.then_some(g_tilde));
    Ok(OptimizationReport {
        best_fidelity: value,
        argmax: ArgMax {
            delta12: d12,
            delta34: d34,
            g_tilde,
            g1,
            g4,
        },
        free,
        evaluations: prob.evaluations,
        grid_stage_best: grid_value,
        refined,
        converged,
        max_imaginary_residue: prob.residue,
        trace,
    })
}

/// Fidelity of the scenario at explicit angles and gains, straight from the
/// swapped state (no kernel).
pub fn scenario_fidelity(scenario: &Scenario, delta12: f64, delta34: f64, g1: f64, g4: f64) -> Result<f64> {
    scenario.validate()?;
    let d34 = match scenario.constraint {
        Constraint::Symmetric => delta12,
        Constraint::None => delta34,
    };
    let a = crate::states::sb_cf(&scenario.input_params(delta12)?)?;
    let b = crate::states::sb_cf(&scenario.resource_params(d34)?)?;
    swapped_fidelity(&a, &b, &scenario.apparatus.with_gains(g1, g4))
}

/// Best direct (non-swapped) fidelity of a resource of the given family:
/// the angle is optimized for `SB`, pinned otherwise.
pub fn optimize_direct(family: Family, r: f64, phi: f64) -> Result<OptimizationReport> {
    let theta = match family {
        Family::SB => 0.0,
        other => preset_params(other, r, phi)?.theta,
    };
    let comps = sb_components(r, phi, theta)?;
    let mut f = [Complex64::new(0.0, 0.0); 3];
    for (fi, c) in f.iter_mut().zip(&comps) {
        *fi = fidelity_functional(c)?;
    }
    let residue = f.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let mut evaluations = 0usize;
    let mut eval = |d: f64| -> f64 {
        evaluations += 1;
        let u = delta_weights(d);
        (0..3).map(|i| f[i].re * u[i]).sum()
    };
    let free_delta = family.has_free_delta();
    let (delta, value, grid_value, converged) = if free_delta {
        let mut best = (0.0, f64::NEG_INFINITY);
        for d in delta_grid() {
            let v = eval(d);
            if v > best.1 + TIE {
                best = (d, v);
            }
        }
        let res = simplex_minimize(
            |x| -eval((x[0] * PI).rem_euclid(PI)),
            &[best.0 / PI],
            &[1.0 / DELTA_GRID as f64],
            SimplexOptions::default(),
        )?;
        if -res.value > best.1 + TIE {
            ((res.point[0] * PI).rem_euclid(PI), -res.value, best.1, res.converged)
        } else {
            (best.0, best.1, best.1, res.converged)
        }
    } else {
        let d = preset_params(family, r, phi)?.delta;
        let v = eval(d);
        (d, v, v, true)
    };
    if residue > IMAGINARY_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue {
            value: Complex64::new(value, residue),
            residue,
        });
    }
    Ok(OptimizationReport {
        best_fidelity: value,
        argmax: ArgMax {
            delta12: delta,
            delta34: delta,
            g_tilde: 1.0,
            g1: 0.0,
            g4: 1.0,
        },
        free: FreeParams {
            delta12: free_delta,
            delta34: false,
            gain: false,
        },
        evaluations,
        grid_stage_best: grid_value,
        refined: free_delta,
        converged,
        max_imaginary_residue: residue,
        trace: None,
    })
}

/// Whether every split of `g_tilde` gives the same fidelity (within 1e-9)
/// at the scenario's fixed angles.
pub fn gain_invariance_check(scenario: &Scenario, g_tilde: f64, splits: &[(f64, f64)]) -> Result<bool> {
    Ok(gain_split_spread(scenario, g_tilde, splits)? <= 1e-9)
}

/// Largest fidelity difference between the given splits.
pub fn gain_split_spread(scenario: &Scenario, g_tilde: f64, splits: &[(f64, f64)]) -> Result<f64> {
    if splits.is_empty() {
        return Err(Error::Contract("no gain splits given".into()));
    }
    for &(g1, g4) in splits {
        if (g1 + g4 - g_tilde).abs() > 1e-12 {
            return Err(Error::Contract(format!(
                "split ({g1}, {g4}) does not sum to {g_tilde}"
            )));
        }
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &(g1, g4) in splits {
        let f = scenario_fidelity(scenario, scenario.delta12, scenario.delta34, g1, g4)?;
        lo = lo.min(f);
        hi = hi.max(f);
    }
    Ok(hi - lo)
}

/// `(F_opt − F_ref) / F_ref`.
pub fn relative_fidelity(f_opt: f64, f_ref: f64) -> Result<f64> {
    if !(f_ref > 0.0) {
        return Err(Error::Contract(format!("reference fidelity {f_ref} must be positive")));
    }
    Ok((f_opt - f_ref) / f_ref)
}
