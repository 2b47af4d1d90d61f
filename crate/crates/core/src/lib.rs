//! Continuous-variable entanglement swapping with squeezed Bell states,
//! evaluated exactly in the characteristic-function representation.

pub mod cf;
pub mod error;
pub mod experiments;
pub mod numerics;
pub mod states;
pub mod swapping;
pub mod optimizer;
pub mod teleportation;

pub use error::{Error, Result};
