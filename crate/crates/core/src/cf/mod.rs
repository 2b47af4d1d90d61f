//! Characteristic functions of the closed form
//! `P(z) · exp(-½ zᵀA z + i cᵀz)`.
//!
//! Variables are ordered `(x₁, p₁, x₂, p₂, ...)`. Every step of the swapping
//! and teleportation pipeline (linear substitutions, products, Gaussian
//! damping factors, full Gaussian integrals) maps this family into itself, so
//! the whole protocol is evaluated exactly.

pub mod poly;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::linalg::{mat_vec, SymmetricMatrix};

pub use poly::{Monomial, MultiIndexPolynomial, MAX_VARS};

#[derive(Debug, Clone, PartialEq)]
pub struct GaussPolyCF {
    quad: SymmetricMatrix,
    phase: Vec<f64>,
    poly: MultiIndexPolynomial,
}

impl GaussPolyCF {
    pub fn new(quad: SymmetricMatrix, phase: Vec<f64>, poly: MultiIndexPolynomial) -> Result<Self> {
        let n = poly.num_vars();
        if quad.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                found: quad.dim(),
            });
        }
        if phase.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: phase.len(),
            });
        }
        Ok(Self { quad, phase, poly })
    }

    /// The constant function 1 over `num_vars` variables.
    pub fn one(num_vars: usize) -> Result<Self> {
        Self::new(
            SymmetricMatrix::zeros(num_vars),
            vec![0.0; num_vars],
            MultiIndexPolynomial::one(num_vars)?,
        )
    }

    /// `exp(-½ zᵀA z)`.
    pub fn gaussian(quad: SymmetricMatrix) -> Result<Self> {
        let n = quad.dim();
        Self::new(quad, vec![0.0; n], MultiIndexPolynomial::one(n)?)
    }

    /// Vacuum of `modes` modes, `exp(-Σ(x²+p²)/4)`.
    pub fn vacuum(modes: usize) -> Result<Self> {
        Self::gaussian(SymmetricMatrix::identity(2 * modes).scaled(0.5))
    }

    pub fn num_vars(&self) -> usize {
        self.poly.num_vars()
    }

    pub fn quad(&self) -> &SymmetricMatrix {
        &self.quad
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    pub fn poly(&self) -> &MultiIndexPolynomial {
        &self.poly
    }

    pub fn with_poly(&self, poly: MultiIndexPolynomial) -> Result<Self> {
        Self::new(self.quad.clone(), self.phase.clone(), poly)
    }

    pub fn eval(&self, z: &[f64]) -> Result<Complex64> {
        if z.len() != self.num_vars() {
            return Err(Error::Dimension {
                expected: self.num_vars(),
                found: z.len(),
            });
        }
        Ok(self.eval_unchecked(z))
    }

    /// Evaluation without the length check, for hot loops.
    pub fn eval_unchecked(&self, z: &[f64]) -> Complex64 {
        let q = self.quad.quadratic_form(z);
        let lin: f64 = self.phase.iter().zip(z).map(|(c, x)| c * x).sum();
        self.poly.eval(z) * Complex64::from_polar((-0.5 * q).exp(), lin)
    }

    /// `w ↦ χ(M w)` for a `num_vars x m` matrix `M`.
    pub fn pullback(&self, map: &[Vec<f64>]) -> Result<Self> {
        let n = self.num_vars();
        if map.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: map.len(),
            });
        }
        let m = map[0].len();
        if map.iter().any(|r| r.len() != m) {
            return Err(Error::Contract("ragged pullback matrix".into()));
        }
        let quad = self.quad.congruence(map);
        let phase: Vec<f64> = (0..m)
            .map(|j| (0..n).map(|i| map[i][j] * self.phase[i]).sum())
            .collect();
        let zero = vec![Complex64::new(0.0, 0.0); n];
        let poly = self.poly.compose_affine(map, &zero)?;
        Self::new(quad, phase, poly)
    }

    /// Embeds a function of `num_vars` variables into `total` variables,
    /// reading its arguments starting at index `offset`.
    pub fn embed(&self, total: usize, offset: usize) -> Result<Self> {
        let n = self.num_vars();
        if offset + n > total {
            return Err(Error::Dimension {
                expected: total,
                found: offset + n,
            });
        }
        let map: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..total).map(|j| if j == offset + i { 1.0 } else { 0.0 }).collect())
            .collect();
        self.pullback(&map)
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        let quad = self.quad.add(&other.quad)?;
        let phase = self.phase.iter().zip(&other.phase).map(|(a, b)| a + b).collect();
        let poly = self.poly.mul(&other.poly)?;
        Self::new(quad, phase, poly)
    }

    /// Multiplies by `exp(-½ zᵀB z)`.
    pub fn mul_gaussian_factor(&self, b: &SymmetricMatrix) -> Result<Self> {
        let quad = self.quad.add(b)?;
        Self::new(quad, self.phase.clone(), self.poly.clone())
    }

    pub fn scale(&self, s: Complex64) -> Result<Self> {
        self.with_poly(self.poly.scale(s))
    }

    /// Sum of two functions that share the same Gaussian part.
    pub fn add_same_gaussian(&self, other: &Self) -> Result<Self> {
        if self.quad != other.quad || self.phase != other.phase {
            return Err(Error::Contract("summands must share their Gaussian part".into()));
        }
        self.with_poly(self.poly.add(&other.poly)?)
    }

    /// `∫ P(z) exp(-½ zᵀA z + i cᵀz) dz` over all of `ℝⁿ`, without any
    /// normalization prefactor.
    pub fn integrate_full(&self) -> Result<Complex64> {
        let n = self.num_vars();
        let chol = self.quad.factor_spd().map_err(|e| match e {
            Error::NotPositiveDefinite { pivot } => Error::DivergentIntegral { pivot },
            other => other,
        })?;
        let cov = chol.inverse();
        let shift = chol.solve(&self.phase);
        let c_cov_c: f64 = self.phase.iter().zip(&shift).map(|(a, b)| a * b).sum();
        let prefactor = (2.0 * PI).powf(n as f64 / 2.0) / chol.determinant().sqrt() * (-0.5 * c_cov_c).exp();
        // stationary point i A⁻¹ c
        let mean: Vec<Complex64> = shift.iter().map(|&s| Complex64::new(0.0, s)).collect();
        let shifted = if shift.iter().all(|&s| s == 0.0) {
            self.poly.clone()
        } else {
            let ident = crate::numerics::linalg::identity(n);
            self.poly.compose_affine(&ident, &mean)?
        };
        Ok(shifted.gaussian_expectation(&cov)? * prefactor)
    }

    /// `max |χ(-z) - conj χ(z)|` over the given points.
    pub fn hermiticity_defect(&self, points: &[Vec<f64>]) -> f64 {
        points
            .iter()
            .map(|z| {
                let neg: Vec<f64> = z.iter().map(|x| -x).collect();
                (self.eval_unchecked(&neg) - self.eval_unchecked(z).conj()).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Applies a dense map to a point, `M w`.
pub fn apply_map(map: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    mat_vec(map, w)
}
