//! Coherent-state teleportation through a two-mode resource, and its
//! fidelity.
//!
//! The fidelity integrand contains `χ_in(z) χ_in(−z) = e^{−|z|²/2}`, so the
//! coherent amplitude drops out and the fidelity is a property of the
//! resource alone.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cf::GaussPolyCF;
use crate::error::{Error, Result};
use crate::numerics::{adaptive_integrate, gauss_hermite, QuadratureSpec, SymmetricMatrix};
use crate::numerics::linalg::mat_mul;
use crate::swapping::{
    damping_form, input_map, oracle_swapped_point_with, resource_map, ApparatusParams, OracleSettings,
};

/// Largest imaginary part tolerated in a fidelity before it is reported.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentAmplitude {
    pub beta: Complex64,
}

impl CoherentAmplitude {
    pub fn new(beta: Complex64) -> Self {
        Self { beta }
    }

    /// Quadrature means `(x_β, p_β) = √2 (Re β, Im β)`.
    pub fn quadratures(&self) -> (f64, f64) {
        (SQRT_2 * self.beta.re, SQRT_2 * self.beta.im)
    }
}

/// `e^{−(x²+p²)/4} e^{i(p x_β − x p_β)}`.
pub fn coherent_cf(beta: CoherentAmplitude) -> Result<GaussPolyCF> {
    let (xb, pb) = beta.quadratures();
    let vac = GaussPolyCF::vacuum(1)?;
    GaussPolyCF::new(vac.quad().clone(), vec![-pb, xb], vac.poly().clone())
}

/// `(x, p) ↦ (x, −p, x, p)`.
fn teleport_restriction() -> Vec<Vec<f64>> {
    vec![vec![1.0, 0.0], vec![0.0, -1.0], vec![1.0, 0.0], vec![0.0, 1.0]]
}

fn check_two_mode(cf: &GaussPolyCF) -> Result<()> {
    if cf.num_vars() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            found: cf.num_vars(),
        });
    }
    Ok(())
}

pub fn teleported_cf(swapped: &GaussPolyCF, beta: CoherentAmplitude) -> Result<GaussPolyCF> {
    check_two_mode(swapped)?;
    coherent_cf(beta)?.product(&swapped.pullback(&teleport_restriction())?)
}

/// `(x, p) ↦ (−x, p, −x, −p)`, the argument of the resource in the fidelity.
fn fidelity_restriction() -> Vec<Vec<f64>> {
    teleport_restriction()
        .into_iter()
        .map(|row| row.into_iter().map(|v| -v).collect())
        .collect()
}

fn finish(slice: GaussPolyCF) -> Result<Complex64> {
    let integrand = slice.mul_gaussian_factor(&SymmetricMatrix::identity(2))?;
    Ok(integrand.integrate_full()? / (2.0 * PI))
}

/// `(1/2π) ∫ e^{−|z|²/2} χ(−x, p, −x, −p) dz` without the reality check.
/// Linear in `resource`, so it may be applied to non-physical pieces.
pub fn fidelity_functional(resource: &GaussPolyCF) -> Result<Complex64> {
    check_two_mode(resource)?;
    finish(resource.pullback(&fidelity_restriction())?)
}

/// Fidelity functional of the swapped state, with every substitution
/// composed down to the two teleportation variables before any product is
/// formed. Equal to `fidelity_functional(&swapped_cf(..))`, much cheaper.
pub fn swapped_fidelity_functional(
    input12: &GaussPolyCF,
    resource34: &GaussPolyCF,
    app: &ApparatusParams,
) -> Result<Complex64> {
    check_two_mode(input12)?;
    check_two_mode(resource34)?;
    app.validate()?;
    let n = fidelity_restriction();
    let a = input12.pullback(&mat_mul(&input_map(app), &n))?;
    let b = resource34.pullback(&mat_mul(&resource_map(app), &n))?;
    let damping = damping_form(app).congruence(&n);
    finish(a.product(&b)?.mul_gaussian_factor(&damping)?)
}

pub fn swapped_fidelity(input12: &GaussPolyCF, resource34: &GaussPolyCF, app: &ApparatusParams) -> Result<f64> {
    check_real(swapped_fidelity_functional(input12, resource34, app)?)
}

fn check_real(value: Complex64) -> Result<f64> {
    if value.im.abs() > IMAGINARY_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue {
            value,
            residue: value.im.abs(),
        });
    }
    Ok(value.re)
}

/// Teleportation fidelity of a coherent state through `swapped`.
pub fn fidelity(swapped: &GaussPolyCF) -> Result<f64> {
    check_real(fidelity_functional(swapped)?)
}

/// Same formula with a two-mode resource used directly, without swapping.
pub fn direct_resource_fidelity(resource: &GaussPolyCF) -> Result<f64> {
    fidelity(resource)
}

/// Fidelity integral with the coherent factors kept explicitly, evaluated by
/// adaptive cubature. Used to confirm that `β` cancels.
pub fn fidelity_with_amplitude(swapped: &GaussPolyCF, beta: CoherentAmplitude, tol: f64) -> Result<Complex64> {
    let input = coherent_cf(beta)?;
    let out = teleported_cf(swapped, beta)?;
    let (xb, pb) = beta.quadratures();
    // the phase e^{i(p x_β − x p_β)} oscillates at |β|√2 per unit length
    let divisions = (2.0 * 12.0 * (xb.abs() + pb.abs() + 1.0) / 4.0).ceil() as usize;
    let spec = QuadratureSpec::symmetric_box(2, 12.0)
        .with_tolerances(tol, tol * 1e-2)
        .with_initial_divisions(vec![divisions; 2])
        .with_max_subdivisions(400_000);
    let res = adaptive_integrate(
        |z| input.eval_unchecked(z) * out.eval_unchecked(&[-z[0], -z[1]]),
        &spec,
    )?;
    Ok(res.value / (2.0 * PI))
}

/// Fidelity of the swapped state computed point by point from the protocol
/// oracle, integrated with an `order x order` Gauss-Hermite rule.
pub fn oracle_fidelity(
    input12: &GaussPolyCF,
    resource34: &GaussPolyCF,
    app: &ApparatusParams,
    settings: &OracleSettings,
    order: usize,
) -> Result<f64> {
    let (nodes, weights) = gauss_hermite(order)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, wx) in nodes.iter().zip(&weights) {
        for (p, wp) in nodes.iter().zip(&weights) {
            let z = [-x, *p, -x, -p];
            acc += oracle_swapped_point_with(input12, resource34, app, &z, settings)? * (wx * wp);
        }
    }
    let value = acc / (2.0 * PI);
    if value.im.abs() > 10.0 * settings.tol {
        return Err(Error::ImaginaryResidue {
            value,
            residue: value.im.abs(),
        });
    }
    Ok(value.re)
}
