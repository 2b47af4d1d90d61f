//! Squeezed Bell states `S(ζ)(cos δ|00⟩ + e^{iθ} sin δ|11⟩)` and their
//! characteristic functions.
//!
//! Conventions used throughout the crate: `D(α) = exp(αa† − α*a)`,
//! `χ(α) = Tr[ρ D(α)]`, `α = (x + ip)/√2`, so the vacuum has
//! `χ = exp(−(x² + p²)/4)`. The squeezing operator is
//! `S(ζ) = exp(−ζ a†b† + ζ* ab)` with `ζ = r e^{iφ}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cf::{GaussPolyCF, MultiIndexPolynomial};
use crate::error::{Error, Result};
use crate::numerics::SymmetricMatrix;

pub mod fock;

pub use fock::{fock_cf_oracle, fock_coherent_cf, fock_photon_subtracted_cf};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezedBellParams {
    pub r: f64,
    pub phi: f64,
    pub delta: f64,
    pub theta: f64,
}

impl SqueezedBellParams {
    pub fn new(r: f64, phi: f64, delta: f64, theta: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::ParameterRange(format!("squeezing r = {r} must be finite and >= 0")));
        }
        if !phi.is_finite() || !delta.is_finite() || !theta.is_finite() {
            return Err(Error::ParameterRange("non-finite state angle".into()));
        }
        Ok(Self { r, phi, delta, theta })
    }

    /// Twin beam (two-mode squeezed vacuum).
    pub fn twin_beam(r: f64, phi: f64) -> Result<Self> {
        Self::new(r, phi, 0.0, 0.0)
    }
}

/// Resource and input families. Everything but `SB` pins `(δ, θ)` as a
/// function of `(r, φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    TB,
    PS,
    PA,
    SN,
    SB,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::TB, Family::PS, Family::PA, Family::SN, Family::SB];

    pub fn name(self) -> &'static str {
        match self {
            Family::TB => "TB",
            Family::PS => "PS",
            Family::PA => "PA",
            Family::SN => "SN",
            Family::SB => "SB",
        }
    }

    pub fn has_free_delta(self) -> bool {
        self == Family::SB
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TB" => Ok(Family::TB),
            "PS" => Ok(Family::PS),
            "PA" => Ok(Family::PA),
            "SN" => Ok(Family::SN),
            "SB" => Ok(Family::SB),
            other => Err(Error::Config(format!("unknown state family '{other}'"))),
        }
    }
}

const PRESET_R_MAX: f64 = 300.0;

/// Parameters of the special members of the family.
///
/// Photon subtraction `ab S|00⟩` and addition `a†b† S|00⟩` both land on
/// `θ = φ + π` with the squeezing sign used here; at `φ = π` that is `θ = 0`.
pub fn preset_params(kind: Family, r: f64, phi: f64) -> Result<SqueezedBellParams> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::ParameterRange(format!("squeezing r = {r} must be finite and >= 0")));
    }
    let flipped = (phi + PI).rem_euclid(2.0 * PI);
    match kind {
        Family::TB => SqueezedBellParams::new(r, phi, 0.0, 0.0),
        Family::SN => SqueezedBellParams::new(r, phi, PI / 2.0, 0.0),
        Family::PS | Family::PA => {
            if r > PRESET_R_MAX {
                return Err(Error::ParameterRange(format!(
                    "r = {r} exceeds {PRESET_R_MAX}: cosh 2r overflows"
                )));
            }
            let norm = (2.0 * r).cosh().sqrt();
            let (c, s) = if kind == Family::PS {
                (r.cosh() / norm, r.sinh() / norm)
            } else {
                (r.sinh() / norm, r.cosh() / norm)
            };
            SqueezedBellParams::new(r, phi, s.atan2(c), flipped)
        }
        Family::SB => Err(Error::ParameterRange("SB has no preset: δ and θ are free".into())),
    }
}

/// Real 4x4 map `(x_h, p_h, x_k, p_k) ↦ (u_h, v_h, u_k, v_k)` with
/// `β = (u + iv)/√2` the displacement seen by the unsqueezed core state.
pub fn bogoliubov_map(r: f64, phi: f64) -> Vec<Vec<f64>> {
    let (c, s) = (r.cosh(), r.sinh());
    let (cp, sp) = (phi.cos(), phi.sin());
    vec![
        vec![c, 0.0, s * cp, s * sp],
        vec![0.0, c, s * sp, -s * cp],
        vec![s * cp, s * sp, c, 0.0],
        vec![s * sp, -s * cp, 0.0, c],
    ]
}

/// `⟨m|D(α)|n⟩` for `m, n ∈ {0, 1}`.
pub fn displaced_fock_element(m: u8, n: u8, alpha: Complex64) -> Result<Complex64> {
    let g = (-0.5 * alpha.norm_sqr()).exp();
    let v = match (m, n) {
        (0, 0) => Complex64::new(1.0, 0.0),
        (1, 0) => alpha,
        (0, 1) => -alpha.conj(),
        (1, 1) => Complex64::new(1.0 - alpha.norm_sqr(), 0.0),
        _ => return Err(Error::Contract(format!("Fock index ({m}, {n}) outside {{0, 1}}"))),
    };
    Ok(v * g)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The three polynomial pieces of the unsqueezed core CF in `(u₁,v₁,u₂,v₂)`:
/// `|00⟩⟨00|`, the real part of the coherence (phase `θ`), and `|11⟩⟨11|`.
fn core_polynomials(theta: f64) -> Result<[MultiIndexPolynomial; 3]> {
    let g = MultiIndexPolynomial::one(4)?;
    // 2 Re(e^{-iθ} β₁β₂) = cos θ (u₁u₂ − v₁v₂) + sin θ (u₁v₂ + v₁u₂)
    let (ct, st) = (theta.cos(), theta.sin());
    let h = MultiIndexPolynomial::from_terms(
        4,
        vec![
            (vec![1, 0, 1, 0], c(ct)),
            (vec![0, 1, 0, 1], c(-ct)),
            (vec![1, 0, 0, 1], c(st)),
            (vec![0, 1, 1, 0], c(st)),
        ],
    )?;
    let one_minus = |i: usize| -> Result<MultiIndexPolynomial> {
        let mut a = vec![0u8; 4];
        let mut b = vec![0u8; 4];
        a[2 * i] = 2;
        b[2 * i + 1] = 2;
        MultiIndexPolynomial::from_terms(4, vec![(vec![0; 4], c(1.0)), (a, c(-0.5)), (b, c(-0.5))])
    };
    let k = one_minus(0)?.mul(&one_minus(1)?)?;
    Ok([g, h, k])
}

/// The squeezed pieces `[G, H, K]`, sharing one Gaussian, with
/// `χ = cos²δ G + cos δ sin δ H + sin²δ K`.
pub fn sb_components(r: f64, phi: f64, theta: f64) -> Result<[GaussPolyCF; 3]> {
    let map = bogoliubov_map(r, phi);
    let [g, h, k] = core_polynomials(theta)?;
    let quad = SymmetricMatrix::identity(4).scaled(0.5);
    let build = |p: MultiIndexPolynomial| -> Result<GaussPolyCF> {
        GaussPolyCF::new(quad.clone(), vec![0.0; 4], p)?.pullback(&map)
    };
    Ok([build(g)?, build(h)?, build(k)?])
}

/// Weights `(cos²δ, cos δ sin δ, sin²δ)` of the three components.
pub fn delta_weights(delta: f64) -> [f64; 3] {
    let (s, c) = delta.sin_cos();
    [c * c, c * s, s * s]
}

pub fn sb_cf(params: &SqueezedBellParams) -> Result<GaussPolyCF> {
    let comps = sb_components(params.r, params.phi, params.theta)?;
    let w = delta_weights(params.delta);
    let mut poly = MultiIndexPolynomial::zero(4)?;
    for (cf, wi) in comps.iter().zip(w) {
        if wi != 0.0 {
            poly = poly.add(&cf.poly().scale(c(wi)))?;
        }
    }
    poly.prune();
    comps[0].with_poly(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linalg::cofactor_determinant;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bogoliubov_identity_and_determinant() {
        let m = bogoliubov_map(0.0, 1.3);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m[i][j], if i == j { 1.0 } else { 0.0 });
            }
        }
        for r in [0.3, 0.9, 1.5] {
            for phi in [0.0, PI / 2.0, PI] {
                let d = cofactor_determinant(&bogoliubov_map(r, phi));
                assert!((d - 1.0).abs() < 1e-12, "det {d} at r={r}, phi={phi}");
            }
        }
    }

    #[test]
    fn bogoliubov_matches_complex_form() {
        // β₁ = α₁ cosh r + e^{iφ} α₂* sinh r
        let (r, phi) = (0.7f64, 0.4f64);
        let z = [0.3, -1.1, 0.8, 0.25];
        let a1 = Complex64::new(z[0], z[1]) / 2f64.sqrt();
        let a2 = Complex64::new(z[2], z[3]) / 2f64.sqrt();
        let e = Complex64::from_polar(1.0, phi);
        let b1 = a1 * r.cosh() + e * a2.conj() * r.sinh();
        let b2 = a2 * r.cosh() + e * a1.conj() * r.sinh();
        let w = crate::cf::apply_map(&bogoliubov_map(r, phi), &z);
        let s = 2f64.sqrt();
        assert!((Complex64::new(w[0], w[1]) / s - b1).norm() < 1e-14);
        assert!((Complex64::new(w[2], w[3]) / s - b2).norm() < 1e-14);
    }

    #[test]
    fn displaced_elements() {
        let one = displaced_fock_element(0, 0, c(0.0)).unwrap();
        assert_eq!(one, c(1.0));
        assert!(displaced_fock_element(1, 1, c(1.0)).unwrap().norm() < 1e-15);
        assert_eq!(displaced_fock_element(0, 1, c(0.0)).unwrap(), c(0.0));
        assert!(displaced_fock_element(2, 0, c(0.0)).is_err());
    }

    #[test]
    fn displaced_elements_match_truncated_series() {
        let alpha = Complex64::new(0.6, -0.9);
        let dmat = fock::displacement_matrix(alpha, 60);
        for m in 0..2u8 {
            for n in 0..2u8 {
                let exact = displaced_fock_element(m, n, alpha).unwrap();
                assert!((dmat[(m as usize, n as usize)] - exact).norm() < 1e-12);
            }
        }
        let unit = fock::displacement_matrix(c(1.0), 60);
        assert!(unit[(1, 1)].norm() < 1e-12);
    }

    #[test]
    fn twin_beam_polynomial_is_one() {
        let cf = sb_cf(&preset_params(Family::TB, 1.2, PI).unwrap()).unwrap();
        assert_eq!(cf.poly().degree(), 0);
        assert!((cf.poly().coefficient(&[0, 0, 0, 0]) - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn degree_and_normalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = SqueezedBellParams::new(
                rng.gen_range(0.0..1.5),
                rng.gen_range(0.0..2.0 * PI),
                rng.gen_range(0.0..PI),
                rng.gen_range(0.0..2.0 * PI),
            )
            .unwrap();
            let cf = sb_cf(&p).unwrap();
            assert!(cf.poly().degree() <= 4);
            assert!((cf.eval(&[0.0; 4]).unwrap() - c(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn presets() {
        let tb = preset_params(Family::TB, 0.7, 1.0).unwrap();
        assert_eq!((tb.r, tb.phi, tb.delta, tb.theta), (0.7, 1.0, 0.0, 0.0));
        let sn = preset_params(Family::SN, 0.7, PI).unwrap();
        assert_eq!((sn.delta, sn.theta), (PI / 2.0, 0.0));
        let ps = preset_params(Family::PS, 1.0, PI).unwrap();
        // cosh 1 = 1.5430806348, √cosh 2 = 1.9396380309
        let expect = (1.543_080_634_815_243_7_f64 / 1.939_638_030_943_823_f64).acos();
        assert!((ps.delta - expect).abs() < 1e-12);
        assert!((ps.delta - 0.650_880_168_023_007_5).abs() < 1e-12);
        assert!(ps.theta.abs() < 1e-12);
        let pa = preset_params(Family::PA, 1.0, PI).unwrap();
        assert!((pa.delta.cos() - 1f64.sinh() / 2f64.cosh().sqrt()).abs() < 1e-12);
        assert!(matches!(preset_params(Family::PS, 301.0, PI), Err(Error::ParameterRange(_))));
        assert!(preset_params(Family::SB, 1.0, PI).is_err());
        assert!(SqueezedBellParams::new(-0.1, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn reduced_state_is_a_valid_cf() {
        let cf = sb_cf(&SqueezedBellParams::new(0.9, PI, 0.6, 0.0).unwrap()).unwrap();
        let reduced = cf
            .pullback(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0], vec![0.0, 0.0]])
            .unwrap();
        assert!((reduced.eval(&[0.0, 0.0]).unwrap() - c(1.0)).norm() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let z = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            assert!(reduced.eval(&z).unwrap().norm() <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn family_parsing() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("cat".parse::<Family>().is_err());
    }
}
