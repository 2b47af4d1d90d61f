use std::f64::consts::PI;

use cvswap::states::{
    fock_cf_oracle, fock_photon_subtracted_cf, preset_params, sb_cf, Family, SqueezedBellParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_z(rng: &mut ChaCha8Rng, half: f64) -> [f64; 4] {
    [
        rng.gen_range(-half..half),
        rng.gen_range(-half..half),
        rng.gen_range(-half..half),
        rng.gen_range(-half..half),
    ]
}

#[test]
fn twin_beam_matches_fock_space() {
    let params = preset_params(Family::TB, 1.0, PI).unwrap();
    let cf = sb_cf(&params).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let z = random_z(&mut rng, 3.0);
        let exact = cf.eval(&z).unwrap();
        let fock = fock_cf_oracle(&params, &z, 60).unwrap();
        assert!((exact - fock).norm() < 1e-8, "{exact} vs {fock} at {z:?}");
    }
}

#[test]
fn squeezed_bell_matches_fock_space() {
    let params = SqueezedBellParams::new(0.8, PI, 0.5, 0.0).unwrap();
    let cf = sb_cf(&params).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..30 {
        let z = random_z(&mut rng, 3.0);
        let d = (cf.eval(&z).unwrap() - fock_cf_oracle(&params, &z, 40).unwrap()).norm();
        assert!(d <= 1e-8, "|Δ| = {d:e} at {z:?}");
    }
}

#[test]
fn strong_squeezing_needs_a_larger_cutoff() {
    let params = SqueezedBellParams::new(1.5, PI, 0.9, 0.4).unwrap();
    let cf = sb_cf(&params).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst40 = 0f64;
    for _ in 0..10 {
        let z = random_z(&mut rng, 3.0);
        let exact = cf.eval(&z).unwrap();
        let d100 = (exact - fock_cf_oracle(&params, &z, 140).unwrap()).norm();
        assert!(d100 <= 1e-8, "|Δ| = {d100:e} at {z:?}");
        worst40 = worst40.max((exact - fock_cf_oracle(&params, &z, 40).unwrap()).norm());
    }
    // at n_max = 40 the discarded tail is visible (about 2e-2 here)
    assert!(worst40 > 1e-4 && worst40 < 5e-2, "worst40 = {worst40:e}");
}

#[test]
fn photon_subtracted_preset_matches_annihilated_twin_beam() {
    for r in [0.3, 0.7, 1.0] {
        for phi in [PI, 0.0, 1.1] {
            let cf = sb_cf(&preset_params(Family::PS, r, phi).unwrap()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            for _ in 0..8 {
                let z = random_z(&mut rng, 2.5);
                let exact = cf.eval(&z).unwrap();
                let fock = fock_photon_subtracted_cf(r, phi, &z, 60).unwrap();
                assert!((exact - fock).norm() < 1e-8, "r={r} phi={phi}: {exact} vs {fock}");
            }
        }
    }
}
