//! Brute-force truncated-Fock construction of the same characteristic
//! functions, used as an independent check on the closed forms.
//!
//! Truncation bound: the squeezed state puts weight `∝ tanh^{2n} r` on
//! `|n, n⟩` (times `n²` for the `|11⟩` branch), so the discarded tail at
//! cutoff `n_max` is of order `n_max² tanh^{2 n_max} r`. At `n_max = 40` that
//! is below `1e-8` for `r ≲ 0.9` and about `1e-3` at `r = 1.5`; use
//! `n_max ≈ 100` there.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::SqueezedBellParams;
use crate::error::{Error, Result};

const MIN_N_MAX: usize = 10;
// extra levels kept beyond the cutoff while exponentiating
const PAD: usize = 30;

fn check_n_max(n_max: usize) -> Result<()> {
    if n_max < MIN_N_MAX {
        return Err(Error::Contract(format!("n_max = {n_max} below {MIN_N_MAX}")));
    }
    Ok(())
}

fn quad_to_alpha(x: f64, p: f64) -> Complex64 {
    Complex64::new(x, p) / 2f64.sqrt()
}

/// `⟨m|D(α)|n⟩` for `m, n ≤ n_max`, from the exponential of truncated
/// ladder operators on a padded space so the kept block is unaffected by
/// the cutoff.
pub fn displacement_matrix(alpha: Complex64, n_max: usize) -> DMatrix<Complex64> {
    let dim = n_max + PAD;
    let mut gen = DMatrix::<Complex64>::zeros(dim, dim);
    for n in 0..dim - 1 {
        let s = ((n + 1) as f64).sqrt();
        // a†|n⟩ = √(n+1)|n+1⟩
        gen[(n + 1, n)] += alpha * s;
        gen[(n, n + 1)] -= alpha.conj() * s;
    }
    gen.exp().view((0, 0), (n_max + 1, n_max + 1)).into_owned()
}

/// Amplitudes on `|n, n⟩`, `n ≤ n_max`, of `S(ζ)` applied to the state with
/// amplitudes `init` on the same ladder.
fn squeeze_diagonal(r: f64, phi: f64, init: &[Complex64], n_max: usize) -> Vec<Complex64> {
    let dim = n_max + PAD;
    let zeta = Complex64::from_polar(r, phi);
    let mut gen = DMatrix::<Complex64>::zeros(dim, dim);
    for n in 0..dim - 1 {
        let k = (n + 1) as f64;
        // −ζ a†b†|n,n⟩ = −ζ (n+1)|n+1,n+1⟩ and ζ* ab|n+1,n+1⟩ = ζ* (n+1)|n,n⟩
        gen[(n + 1, n)] = -zeta * k;
        gen[(n, n + 1)] = zeta.conj() * k;
    }
    let mut v = DVector::<Complex64>::zeros(dim);
    for (i, a) in init.iter().enumerate() {
        v[i] = *a;
    }
    let out = gen.exp() * v;
    out.iter().take(n_max + 1).copied().collect()
}

fn two_mode_cf(amps: &[Complex64], z: &[f64; 4], n_max: usize) -> Complex64 {
    let d1 = displacement_matrix(quad_to_alpha(z[0], z[1]), n_max);
    let d2 = displacement_matrix(quad_to_alpha(z[2], z[3]), n_max);
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..amps.len() {
        for n in 0..amps.len() {
            acc += amps[m].conj() * amps[n] * d1[(m, n)] * d2[(m, n)];
        }
    }
    acc
}

/// `⟨ψ|D(α₁)D(α₂)|ψ⟩` for the squeezed Bell state, built in Fock space.
pub fn fock_cf_oracle(params: &SqueezedBellParams, z: &[f64; 4], n_max: usize) -> Result<Complex64> {
    check_n_max(n_max)?;
    let init = [
        Complex64::new(params.delta.cos(), 0.0),
        Complex64::from_polar(params.delta.sin(), params.theta),
    ];
    let amps = squeeze_diagonal(params.r, params.phi, &init, n_max);
    Ok(two_mode_cf(&amps, z, n_max))
}

/// Normalized `ab S(ζ)|00⟩`, built by applying the annihilators to the
/// Fock-space twin beam.
pub fn fock_photon_subtracted_cf(r: f64, phi: f64, z: &[f64; 4], n_max: usize) -> Result<Complex64> {
    check_n_max(n_max)?;
    let tb = squeeze_diagonal(r, phi, &[Complex64::new(1.0, 0.0)], n_max + 1);
    // ab|n,n⟩ = n|n−1,n−1⟩
    let mut amps: Vec<Complex64> = (1..=n_max + 1).map(|n| tb[n] * n as f64).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Contract("photon subtraction from the vacuum".into()));
    }
    amps.iter_mut().for_each(|a| *a /= norm);
    Ok(two_mode_cf(&amps, z, n_max))
}

/// `⟨β|D(α)|β⟩` for a coherent state built from its Fock amplitudes.
pub fn fock_coherent_cf(beta: Complex64, z: &[f64; 2], n_max: usize) -> Result<Complex64> {
    check_n_max(n_max)?;
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut a = Complex64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
    for n in 0..=n_max {
        if n > 0 {
            a *= beta / (n as f64).sqrt();
        }
        amps.push(a);
    }
    let d = displacement_matrix(quad_to_alpha(z[0], z[1]), n_max);
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..=n_max {
        for n in 0..=n_max {
            acc += amps[m].conj() * amps[n] * d[(m, n)];
        }
    }
    Ok(acc)
}
