//! Step-by-step numerical evaluation of the swapping protocol: realistic Bell
//! measurement, propagation in the lossy channels, outcome-conditioned
//! displacements, and the average over measurement outcomes.
//!
//! With `v = (ξ, υ)` the integration variables of the measurement and
//! `k = (p̃, −x̃)` the outcomes, everything is built from
//!
//! ```text
//! I(v; z) = χ₁₂(x₁, p₁; T₂ξ/√2, T₃υ/√2) χ₃₄(T₂ξ/√2, −T₃υ/√2; x₄, p₄) e^{−R₂²ξ²/4 − R₃²υ²/4}
//! P(k) χ_Bm(z; k) = (2π)⁻² ∫ e^{i k·v} I(v; z) dv
//! ```
//!
//! The averaged output is `∫ dk e^{−i k·s(z)} P χ_Bm(z'; k)` times the
//! thermal factor, where `z'` is the damped argument and `s(z)` comes from
//! the displacement phase.
//!
//! The full swapped point uses tensor trapezoid rules on both the `v` and the
//! `k` grid. For Gaussian-damped analytic integrands these converge
//! geometrically once the spacing is below the aliasing bound; the spacings
//! are derived from the Gaussian core of `I` and the result is confirmed by
//! halving them.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::ApparatusParams;
use crate::cf::GaussPolyCF;
use crate::error::{Error, Result};
use crate::numerics::{adaptive_integrate, QuadratureSpec, SymmetricMatrix};

#[derive(Debug, Clone, Copy)]
pub struct OracleSettings {
    /// Target accuracy of the returned value.
    pub tol: f64,
    /// Half-width of every integration box, in standard deviations of the
    /// Gaussian core.
    pub box_sigmas: f64,
    /// How many times the grid spacing may be halved.
    pub max_refinements: usize,
    /// Reverses the sign of the displacement phase. Only for checking that
    /// the validation suite notices a wrong sign.
    pub flip_displacement_phase: bool,
}

impl OracleSettings {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            box_sigmas: 11.0,
            max_refinements: 4,
            flip_displacement_phase: false,
        }
    }
}

struct Setup<'a> {
    input: &'a GaussPolyCF,
    resource: &'a GaussPolyCF,
    t2: f64,
    t3: f64,
    r2sq: f64,
    r3sq: f64,
    /// precision matrix of the Gaussian core of `I` in `v`
    q: SymmetricMatrix,
    q_inv: SymmetricMatrix,
    /// centre of the outcome distribution in `k`
    k_centre: [f64; 2],
}

fn check_inputs(input: &GaussPolyCF, resource: &GaussPolyCF, app: &ApparatusParams, tol: f64) -> Result<()> {
    for cf in [input, resource] {
        if cf.num_vars() != 4 {
            return Err(Error::Dimension {
                expected: 4,
                found: cf.num_vars(),
            });
        }
    }
    app.validate()?;
    if !(tol > 0.0) {
        return Err(Error::Contract(format!("oracle tolerance {tol} must be positive")));
    }
    Ok(())
}

impl<'a> Setup<'a> {
    fn new(input: &'a GaussPolyCF, resource: &'a GaussPolyCF, app: &ApparatusParams) -> Result<Self> {
        let (t2, t3) = (app.t2, app.t3);
        let (l12, l34) = Self::maps(t2, t3);
        let mut q = input.quad().congruence(&l12).add(&resource.quad().congruence(&l34))?;
        q.set(0, 0, q.get(0, 0) + 0.5 * app.r2_squared());
        q.set(1, 1, q.get(1, 1) + 0.5 * app.r3_squared());
        let chol = q.factor_spd().map_err(|_| {
            Error::Contract("measurement integrand is not Gaussian-damped in (ξ, υ)".into())
        })?;
        let q_inv = chol.inverse();
        let kappa = Self::kappa_of(input, resource, &l12, &l34);
        Ok(Self {
            input,
            resource,
            t2,
            t3,
            r2sq: app.r2_squared(),
            r3sq: app.r3_squared(),
            q,
            q_inv,
            k_centre: [-kappa[0], -kappa[1]],
        })
    }

    fn maps(t2: f64, t3: f64) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let (a, b) = (t2 / SQRT_2, t3 / SQRT_2);
        let l12 = vec![vec![0.0, 0.0], vec![0.0, 0.0], vec![a, 0.0], vec![0.0, b]];
        let l34 = vec![vec![a, 0.0], vec![0.0, -b], vec![0.0, 0.0], vec![0.0, 0.0]];
        (l12, l34)
    }

    /// Coefficient of `i v` contributed by the linear phases of the inputs.
    fn kappa_of(input: &GaussPolyCF, resource: &GaussPolyCF, l12: &[Vec<f64>], l34: &[Vec<f64>]) -> [f64; 2] {
        let mut k = [0.0; 2];
        for j in 0..2 {
            for i in 0..4 {
                k[j] += l12[i][j] * input.phase()[i] + l34[i][j] * resource.phase()[i];
            }
        }
        k
    }

    fn sigma_v(&self, i: usize) -> f64 {
        self.q_inv.get(i, i).sqrt()
    }

    fn sigma_k(&self, i: usize) -> f64 {
        self.q.get(i, i).sqrt()
    }

    /// Centre of `|I(·; z)|` in `v`.
    fn v_centre(&self, z: &[f64; 4]) -> [f64; 2] {
        let (l12, l34) = Self::maps(self.t2, self.t3);
        let a12 = [z[0], z[1], 0.0, 0.0];
        let a34 = [0.0, 0.0, z[2], z[3]];
        let m12 = self.input.quad().mul_vec(&a12);
        let m34 = self.resource.quad().mul_vec(&a34);
        let mut b = [0.0; 2];
        for j in 0..2 {
            for i in 0..4 {
                b[j] += l12[i][j] * m12[i] + l34[i][j] * m34[i];
            }
        }
        let c = self.q_inv.mul_vec(&b);
        [-c[0], -c[1]]
    }

    fn integrand(&self, z: &[f64; 4], v: &[f64]) -> Complex64 {
        let (xi, up) = (v[0], v[1]);
        let a = self.t2 * xi / SQRT_2;
        let b = self.t3 * up / SQRT_2;
        let damp = (-0.25 * (self.r2sq * xi * xi + self.r3sq * up * up)).exp();
        self.input.eval_unchecked(&[z[0], z[1], a, b])
            * self.resource.eval_unchecked(&[a, -b, z[2], z[3]])
            * damp
    }

    /// `(2π)⁻² ∫ e^{i k·v} I(v; z) dv` by adaptive cubature.
    fn transform(&self, z: &[f64; 4], k: [f64; 2], settings: &OracleSettings) -> Result<Complex64> {
        let centre = self.v_centre(z);
        let s = settings.box_sigmas;
        let mut lower = vec![0.0; 2];
        let mut upper = vec![0.0; 2];
        let mut divisions = vec![0usize; 2];
        for i in 0..2 {
            let half = s * self.sigma_v(i);
            lower[i] = centre[i] - half;
            upper[i] = centre[i] + half;
            // keep every initial panel below about six radians of phase
            let phase = 2.0 * half * (k[i].abs() + self.sigma_k(i));
            divisions[i] = (phase / 6.0).ceil() as usize + 1;
        }
        let spec = QuadratureSpec::new(lower, upper)
            .with_tolerances(settings.tol, 1e-15)
            .with_initial_divisions(divisions)
            .with_max_subdivisions(400_000);
        let res = adaptive_integrate(
            |v| Complex64::from_polar(1.0, k[0] * v[0] + k[1] * v[1]) * self.integrand(z, v),
            &spec,
        )?;
        Ok(res.value / (4.0 * PI * PI))
    }
}

fn outcomes_to_k(outcome_x: f64, outcome_p: f64) -> [f64; 2] {
    [outcome_p, -outcome_x]
}

/// Probability density of the Bell-measurement outcomes `(x̃, p̃)`.
pub fn outcome_distribution(
    input12: &GaussPolyCF,
    resource34: &GaussPolyCF,
    app: &ApparatusParams,
    outcome_x: f64,
    outcome_p: f64,
    tol: f64,
) -> Result<f64> {
    check_inputs(input12, resource34, app, tol)?;
    let setup = Setup::new(input12, resource34, app)?;
    let v = setup.transform(&[0.0; 4], outcomes_to_k(outcome_x, outcome_p), &OracleSettings::new(tol))?;
    let scale = v.norm().max(1e-300);
    if v.im.abs() > 1e3 * tol * scale.max(1e-12) && v.im.abs() > 1e-12 {
        return Err(Error::ImaginaryResidue {
            value: v,
            residue: v.im.abs(),
        });
    }
    Ok(v.re.max(0.0))
}

/// Characteristic function of modes 1 and 4 right after the measurement,
/// conditioned on the outcomes `(x̃, p̃)`.
pub fn bell_conditional_cf(
    input12: &GaussPolyCF,
    resource34: &GaussPolyCF,
    app: &ApparatusParams,
    outcome_x: f64,
    outcome_p: f64,
    z: &[f64; 4],
    tol: f64,
) -> Result<Complex64> {
    check_inputs(input12, resource34, app, tol)?;
    let setup = Setup::new(input12, resource34, app)?;
    let settings = OracleSettings::new(tol);
    let k = outcomes_to_k(outcome_x, outcome_p);
    let joint = setup.transform(z, k, &settings)?;
    let p = setup.transform(&[0.0; 4], k, &settings)?;
    if p.norm() == 0.0 {
        return Err(Error::Contract("outcome has zero probability density".into()));
    }
    Ok(joint / p)
}

/// Swapped characteristic function at `z = (x₁, p₁, x₄, p₄)` computed from
/// the protocol steps.
pub fn oracle_swapped_point(
    input12: &GaussPolyCF,
    resource34: &GaussPolyCF,
    app: &ApparatusParams,
    z: &[f64; 4],
    tol: f64,
) -> Result<Complex64> {
    oracle_swapped_point_with(input12, resource34, app, z, &OracleSettings::new(tol))
}

struct Axis {
    nodes: Vec<f64>,
    step: f64,
}

impl Axis {
    fn new(centre: f64, half: f64, max_step: f64) -> Self {
        let n = (2.0 * half / max_step).ceil().max(2.0) as usize;
        let step = 2.0 * half / n as f64;
        let nodes = (0..=n).map(|j| centre - half + j as f64 * step).collect();
        Self { nodes, step }
    }
}

pub fn oracle_swapped_point_with(
    input12: &GaussPolyCF,
    resource34: &GaussPolyCF,
    app: &ApparatusParams,
    z: &[f64; 4],
    settings: &OracleSettings,
) -> Result<Complex64> {
    check_inputs(input12, resource34, app, settings.tol)?;
    let setup = Setup::new(input12, resource34, app)?;
    let e1 = (-0.5 * app.tau1).exp();
    let e4 = (-0.5 * app.tau4).exp();
    let damped = [e1 * z[0], e1 * z[1], e4 * z[2], e4 * z[3]];
    let a1 = (1.0 - (-app.tau1).exp()) * (0.5 + app.nth1);
    let a4 = (1.0 - (-app.tau4).exp()) * (0.5 + app.nth4);
    let thermal = (-0.5 * (a1 * (z[0] * z[0] + z[1] * z[1]) + a4 * (z[2] * z[2] + z[3] * z[3]))).exp();

    let sign = if settings.flip_displacement_phase { -1.0 } else { 1.0 };
    let s = [
        sign * SQRT_2 * (app.g1 * z[0] + app.g4 * z[2]),
        sign * SQRT_2 * (-app.g1 * z[1] + app.g4 * z[3]),
    ];

    let kappa_z = {
        let (l12, l34) = Setup::maps(setup.t2, setup.t3);
        Setup::kappa_of(input12, resource34, &l12, &l34)
    };
    let v_centre = setup.v_centre(&damped);
    let sig = settings.box_sigmas;

    let evaluate = |density: f64| -> Complex64 {
        let mut v_axes = Vec::with_capacity(2);
        let mut k_axes = Vec::with_capacity(2);
        for i in 0..2 {
            let (sv, sk) = (setup.sigma_v(i), setup.sigma_k(i));
            let drift = (kappa_z[i] + setup.k_centre[i]).abs();
            let hv = 2.0 * PI / (2.0 * sig * sk + drift) / density;
            let hk = 2.0 * PI / ((s[i] - v_centre[i]).abs() + sig * sv) / density;
            v_axes.push(Axis::new(v_centre[i], sig * sv, hv));
            k_axes.push(Axis::new(setup.k_centre[i], sig * sk, hk));
        }
        // K_i(v) = Σ_k h e^{i k (v − s_i)}: the discrete outcome average
        let kernels: Vec<Vec<Complex64>> = (0..2)
            .map(|i| {
                v_axes[i]
                    .nodes
                    .iter()
                    .map(|&v| {
                        k_axes[i]
                            .nodes
                            .iter()
                            .map(|&k| Complex64::from_polar(k_axes[i].step, k * (v - s[i])))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, &xi) in v_axes[0].nodes.iter().enumerate() {
            let mut row = Complex64::new(0.0, 0.0);
            for (b, &up) in v_axes[1].nodes.iter().enumerate() {
                row += setup.integrand(&damped, &[xi, up]) * kernels[1][b];
            }
            acc += row * kernels[0][a];
        }
        acc * (v_axes[0].step * v_axes[1].step / (4.0 * PI * PI)) * thermal
    };

    let mut density = 1.0;
    let mut prev = evaluate(density);
    for _ in 0..settings.max_refinements {
        density *= 2.0;
        let next = evaluate(density);
        let diff = (next - prev).norm();
        if diff <= settings.tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence {
        estimate: prev,
        error: f64::NAN,
        subdivisions: settings.max_refinements,
    })
}
