//! The swapped two-mode state of modes 1 and 4.
//!
//! [`swapped_cf`] is the closed form: both inputs are pulled back along the
//! linear substitutions fixed by the Bell measurement, the gains and the
//! channel damping, multiplied, and damped by one combined Gaussian factor.
//! The [`oracle`] submodule computes the same quantity by integrating the
//! measurement, propagation, displacement and outcome-averaging steps
//! numerically.

use serde::{Deserialize, Serialize};

use crate::cf::GaussPolyCF;
use crate::error::{Error, Result};
use crate::numerics::SymmetricMatrix;

pub mod oracle;

pub use oracle::{
    bell_conditional_cf, oracle_swapped_point, oracle_swapped_point_with, outcome_distribution,
    OracleSettings,
};

/// Gains, detector transmissivities, channel times and thermal occupations.
/// Reflectivities are derived, `R² = 1 − T²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApparatusParams {
    pub g1: f64,
    pub g4: f64,
    pub t2: f64,
    pub t3: f64,
    pub tau1: f64,
    pub tau4: f64,
    pub nth1: f64,
    pub nth4: f64,
}

impl ApparatusParams {
    /// Lossless detection and channels with unit gain on mode 4.
    pub const IDEAL: ApparatusParams = ApparatusParams {
        g1: 0.0,
        g4: 1.0,
        t2: 1.0,
        t3: 1.0,
        tau1: 0.0,
        tau4: 0.0,
        nth1: 0.0,
        nth4: 0.0,
    };

    pub fn ideal() -> Self {
        Self::IDEAL
    }

    /// `τ₁ = 0.1`, `τ₄ = 0.2`, no thermal photons, `R₂² = R₃² = 0.05`, unit gain.
    pub fn lossy_reference() -> Self {
        let t = 0.95f64.sqrt();
        Self {
            t2: t,
            t3: t,
            tau1: 0.1,
            tau4: 0.2,
            ..Self::IDEAL
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.g1, self.g4, self.t2, self.t3, self.tau1, self.tau4, self.nth1, self.nth4,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::ParameterRange("non-finite apparatus parameter".into()));
        }
        for (name, t) in [("T2", self.t2), ("T3", self.t3)] {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::ParameterRange(format!("{name} = {t} outside [0, 1]")));
            }
        }
        for (name, v) in [
            ("tau1", self.tau1),
            ("tau4", self.tau4),
            ("nth1", self.nth1),
            ("nth4", self.nth4),
        ] {
            if v < 0.0 {
                return Err(Error::ParameterRange(format!("{name} = {v} is negative")));
            }
        }
        Ok(())
    }

    pub fn r2_squared(&self) -> f64 {
        1.0 - self.t2 * self.t2
    }

    pub fn r3_squared(&self) -> f64 {
        1.0 - self.t3 * self.t3
    }

    pub fn r2(&self) -> f64 {
        self.r2_squared().max(0.0).sqrt()
    }

    pub fn r3(&self) -> f64 {
        self.r3_squared().max(0.0).sqrt()
    }

    /// Same apparatus with the gains replaced.
    pub fn with_gains(&self, g1: f64, g4: f64) -> Self {
        Self { g1, g4, ..*self }
    }

    pub fn total_gain(&self) -> f64 {
        self.g1 + self.g4
    }
}

impl Default for ApparatusParams {
    fn default() -> Self {
        Self::IDEAL
    }
}

/// Arguments of `χ₁₂` as a linear function of `(x₁, p₁, x₄, p₄)`.
pub fn input_map(app: &ApparatusParams) -> Vec<Vec<f64>> {
    let e1 = (-0.5 * app.tau1).exp();
    let (g1, g4, t2, t3) = (app.g1, app.g4, app.t2, app.t3);
    vec![
        vec![e1, 0.0, 0.0, 0.0],
        vec![0.0, e1, 0.0, 0.0],
        vec![t2 * g1, 0.0, t2 * g4, 0.0],
        vec![0.0, -t3 * g1, 0.0, t3 * g4],
    ]
}

/// Arguments of `χ₃₄` as a linear function of `(x₁, p₁, x₄, p₄)`.
pub fn resource_map(app: &ApparatusParams) -> Vec<Vec<f64>> {
    let e4 = (-0.5 * app.tau4).exp();
    let (g1, g4, t2, t3) = (app.g1, app.g4, app.t2, app.t3);
    vec![
        vec![t2 * g1, 0.0, t2 * g4, 0.0],
        vec![0.0, t3 * g1, 0.0, -t3 * g4],
        vec![0.0, 0.0, e4, 0.0],
        vec![0.0, 0.0, 0.0, e4],
    ]
}

/// Matrix `B` of the combined damping `exp(−½ wᵀB w)`: thermal loss on
/// modes 1 and 4 plus the detector reflectivities.
pub fn damping_form(app: &ApparatusParams) -> SymmetricMatrix {
    let a1 = (1.0 - (-app.tau1).exp()) * (0.5 + app.nth1);
    let a4 = (1.0 - (-app.tau4).exp()) * (0.5 + app.nth4);
    let (r2, r3) = (app.r2_squared(), app.r3_squared());
    let (g1, g4) = (app.g1, app.g4);
    let mut b = SymmetricMatrix::diagonal(&[a1, a1, a4, a4]);
    // R₂²(g₁x₁ + g₄x₄)² + R₃²(−g₁p₁ + g₄p₄)²
    let add = |b: &mut SymmetricMatrix, i: usize, j: usize, v: f64| {
        let cur = b.get(i, j);
        b.set(i, j, cur + v);
    };
    add(&mut b, 0, 0, r2 * g1 * g1);
    add(&mut b, 2, 2, r2 * g4 * g4);
    add(&mut b, 2, 0, r2 * g1 * g4);
    add(&mut b, 1, 1, r3 * g1 * g1);
    add(&mut b, 3, 3, r3 * g4 * g4);
    add(&mut b, 3, 1, -r3 * g1 * g4);
    b
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

/// Closed-form characteristic function of the swapped state over
/// `(x₁, p₁, x₄, p₄)`.
pub fn swapped_cf(
    input12: &GaussPolyCF,
    resource34: &GaussPolyCF,
    app: &ApparatusParams,
) -> Result<GaussPolyCF> {
    check_two_mode(input12)?;
    check_two_mode(resource34)?;
    app.validate()?;
    let a = input12.pullback(&input_map(app))?;
    let b = resource34.pullback(&resource_map(app))?;
    a.product(&b)?.mul_gaussian_factor(&damping_form(app))
}

/// `χ₁₂(x₁,p₁;x₄,p₄) χ₃₄(x₄,−p₄;x₄,p₄)`.
pub fn ideal_swapped_cf(input12: &GaussPolyCF, resource34: &GaussPolyCF) -> Result<GaussPolyCF> {
    check_two_mode(input12)?;
    check_two_mode(resource34)?;
    let restrict = vec![
        vec![0.0, 0.0, 1.0, 0.0],
        vec![0.0, 0.0, 0.0, -1.0],
        vec![0.0, 0.0, 1.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
    ];
    input12.product(&resource34.pullback(&restrict)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{preset_params, sb_cf, Family, SqueezedBellParams};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn tb(r: f64) -> GaussPolyCF {
        sb_cf(&preset_params(Family::TB, r, PI).unwrap()).unwrap()
    }

    #[test]
    fn apparatus_validation() {
        assert!(ApparatusParams::ideal().validate().is_ok());
        let lossy = ApparatusParams::lossy_reference();
        assert!((lossy.r2_squared() - 0.05).abs() < 1e-15);
        assert!((lossy.r2() * lossy.r2() + lossy.t2 * lossy.t2 - 1.0).abs() < 1e-15);
        let bad = ApparatusParams {
            t2: 1.2,
            ..ApparatusParams::IDEAL
        };
        assert!(bad.validate().is_err());
        let bad = ApparatusParams {
            nth4: -1.0,
            ..ApparatusParams::IDEAL
        };
        assert!(bad.validate().is_err());
        assert!(swapped_cf(&tb(0.5), &tb(0.5), &bad).is_err());
    }

    #[test]
    fn trace_preservation() {
        let s = swapped_cf(&tb(0.5), &tb(1.0), &ApparatusParams::lossy_reference()).unwrap();
        assert!((s.eval(&[0.0; 4]).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn damping_matches_written_exponent() {
        let app = ApparatusParams {
            g1: 0.3,
            g4: 0.8,
            t2: 0.9,
            t3: 0.8,
            tau1: 0.1,
            tau4: 0.25,
            nth1: 0.2,
            nth4: 0.0,
        };
        let b = damping_form(&app);
        let w = [0.4, -1.1, 0.7, 0.3];
        let (x1, p1, x4, p4) = (w[0], w[1], w[2], w[3]);
        let expect = (1.0 - (-0.1f64).exp()) * 0.7 * (x1 * x1 + p1 * p1)
            + (1.0 - (-0.25f64).exp()) * 0.5 * (x4 * x4 + p4 * p4)
            + (1.0 - 0.81) * (0.3 * x1 + 0.8 * x4).powi(2)
            + (1.0 - 0.64) * (-0.3 * p1 + 0.8 * p4).powi(2);
        assert!((b.quadratic_form(&w) - expect).abs() < 1e-14);
    }

    #[test]
    fn ideal_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let a = sb_cf(&SqueezedBellParams::new(rng.gen_range(0.0..1.5), PI, rng.gen_range(0.0..PI), 0.0).unwrap()).unwrap();
            let b = sb_cf(&SqueezedBellParams::new(rng.gen_range(0.0..1.5), PI, rng.gen_range(0.0..PI), 0.0).unwrap()).unwrap();
            let full = swapped_cf(&a, &b, &ApparatusParams::ideal()).unwrap();
            let ideal = ideal_swapped_cf(&a, &b).unwrap();
            for _ in 0..20 {
                let z: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect();
                assert!((full.eval(&z).unwrap() - ideal.eval(&z).unwrap()).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn vacuum_product_two_ways() {
        let vac = GaussPolyCF::vacuum(2).unwrap();
        let out = ideal_swapped_cf(&vac, &vac).unwrap();
        let z = [1.0, 1.0, 1.0, 1.0];
        let direct = vac.eval(&z).unwrap() * vac.eval(&[1.0, -1.0, 1.0, 1.0]).unwrap();
        assert!((out.eval(&z).unwrap() - direct).norm() < 1e-12);
    }

    #[test]
    fn epr_resource_is_transparent() {
        let resource = tb(8.0);
        let restricted = resource
            .pullback(&[
                vec![1.0, 0.0],
                vec![0.0, -1.0],
                vec![1.0, 0.0],
                vec![0.0, 1.0],
            ])
            .unwrap();
        let input = tb(0.7);
        let out = ideal_swapped_cf(&input, &resource).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let z: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let one = restricted.eval(&z[2..]).unwrap();
            assert!((one - Complex64::new(1.0, 0.0)).norm() <= 1e-5);
            assert!((out.eval(&z).unwrap() - input.eval(&z).unwrap()).norm() <= 1e-5);
        }
    }

    #[test]
    fn rejects_wrong_dimension() {
        let one_mode = GaussPolyCF::vacuum(1).unwrap();
        assert!(swapped_cf(&one_mode, &tb(1.0), &ApparatusParams::ideal()).is_err());
        assert!(ideal_swapped_cf(&tb(1.0), &one_mode).is_err());
    }
}
