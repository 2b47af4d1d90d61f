use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    Asymmetric { row: usize, col: usize },

    #[error("matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },

    /// The Gaussian integral of a characteristic function does not converge.
    /// In the protocol this flags an unphysical gain/parameter combination.
    #[error("divergent integral: quadratic form is not positive definite (pivot {pivot})")]
    DivergentIntegral { pivot: usize },

    #[error("polynomial degree {degree} exceeds the moment table cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("quadrature did not converge after {subdivisions} subdivisions: estimate {estimate}, error {error:e}")]
    NonConvergence {
        estimate: Complex64,
        error: f64,
        subdivisions: usize,
    },

    #[error("fidelity has imaginary residue {residue:e} (value {value})")]
    ImaginaryResidue { value: Complex64, residue: f64 },

    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("every point of the search domain is excluded")]
    EmptyDomain,

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
