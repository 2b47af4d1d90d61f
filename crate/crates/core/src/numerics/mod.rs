//! Shared numerical routines: adaptive cubature, Gauss-Hermite nodes, small
//! symmetric linear algebra and the simplex refiner.

pub mod hermite;
pub mod linalg;
pub mod quadrature;
pub mod simplex;

pub use hermite::gauss_hermite;
pub use linalg::{factor_spd, Cholesky, SymmetricMatrix};
pub use quadrature::{adaptive_integrate, adaptive_integrate_real, QuadratureResult, QuadratureSpec};
pub use simplex::{simplex_minimize, SimplexOptions, SimplexResult};
