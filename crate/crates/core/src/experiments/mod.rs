//! Scenario files, figure datasets, sweeps and the validation suite used by
//! the `cvswap` command-line tool.

pub mod config;
pub mod figures;
pub mod sweep;
pub mod validate;

use sha2::{Digest, Sha256};

pub use config::Config;
pub use figures::{compute_figure, figure_specs, reproduce_figure, FigureId};
pub use sweep::{compute_sweep, fmt_sig, run_sweep, Curve, Grid, RunManifest, SweepAxis, SweepSpec, SweepTable};
pub use validate::{validate, Level, ValidationOptions, ValidationReport};

pub const TOOL_NAME: &str = "cvswap";

/// Conventions every number in this crate depends on. Its hash goes into
/// each manifest so datasets made under different conventions never mix.
pub const CONVENTIONS: &str = "\
displacement: D(a) = exp(a b^dag - conj(a) b), a = (x + i p)/sqrt(2)
characteristic function: chi(a) = Tr[rho D(a)], vacuum exp(-(x^2+p^2)/4)
two-mode squeezing: S(zeta) = exp(-zeta a^dag b^dag + conj(zeta) a b), zeta = r e^{i phi}
squeezed Bell: S(zeta) (cos delta |00> + e^{i theta} sin delta |11>)
presets at phase phi: TB delta = 0; PS/PA theta = phi + pi; SN delta = pi/2
Bell measurement: modes 2,3 on a balanced splitter, homodyne x on 3 and p on 2, detector transmissivity T2, T3
channels: modes 1 and 4, damping exp(-tau/2), added noise (1 - e^-tau)(1/2 + nth)
displacements: lambda1 = -g1 (x~ - i p~), lambda4 = g4 (x~ + i p~)
fidelity: coherent input teleported through the swapped state, F = (1/2pi) int exp(-|z|^2/2) chi_out(-x, p; -x, -p)
";

/// Hex SHA-256 of [`CONVENTIONS`].
pub fn convention_hash() -> String {
    format!("{:x}", Sha256::digest(CONVENTIONS.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_hex() {
        let h = convention_hash();
        assert_eq!(h.len(), 64);
        assert!(h.chars().all(|c| c.is_ascii_hexdigit()));
        assert_eq!(h, convention_hash());
    }
}
