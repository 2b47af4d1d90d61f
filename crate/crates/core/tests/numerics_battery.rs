use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cvswap::numerics::linalg::cofactor_determinant;
use cvswap::numerics::{adaptive_integrate, simplex_minimize, QuadratureSpec, SimplexOptions, SymmetricMatrix};

/// `∫ exp(-a (x-m)²/2 + i k x) dx` over ℝ.
fn gauss_fourier(a: f64, m: f64, k: f64) -> Complex64 {
    Complex64::from_polar((2.0 * PI / a).sqrt() * (-k * k / (2.0 * a)).exp(), k * m)
}

#[test]
fn error_estimates_are_conservative_on_gaussians() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut honest = 0;
    let trials = 200;
    for _ in 0..trials {
        let dim = rng.gen_range(1..=2usize);
        let params: Vec<(f64, f64, f64)> = (0..dim)
            .map(|_| (rng.gen_range(0.3..4.0), rng.gen_range(-1.5..1.5), rng.gen_range(0.0..5.0)))
            .collect();
        let exact = params.iter().fold(Complex64::new(1.0, 0.0), |acc, &(a, m, k)| acc * gauss_fourier(a, m, k));
        let spec = QuadratureSpec::symmetric_box(dim, 14.0)
            .with_tolerances(1e-7, 1e-10)
            .with_max_subdivisions(100_000);
        let f = |z: &[f64]| {
            params.iter().zip(z).fold(Complex64::new(1.0, 0.0), |acc, (&(a, m, k), &x)| {
                acc * Complex64::from_polar((-0.5 * a * (x - m) * (x - m)).exp(), k * x)
            })
        };
        let res = adaptive_integrate(f, &spec).unwrap();
        if (res.value - exact).norm() <= res.error {
            honest += 1;
        }
    }
    assert!(honest * 100 >= 95 * trials, "{honest}/{trials} conservative");
}

fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> SymmetricMatrix {
    let b: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let mut m = SymmetricMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let v: f64 = (0..n).map(|k| b[i][k] * b[j][k]).sum();
            m.set(i, j, v + if i == j { 0.1 } else { 0.0 });
        }
    }
    m
}

#[test]
fn cholesky_determinant_matches_cofactor_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let m = random_spd(&mut rng, 4);
        let chol = m.factor_spd().unwrap();
        let cof = cofactor_determinant(&m.to_dense());
        assert!((chol.determinant() - cof).abs() <= 1e-10 * cof.abs().max(1.0));
    }
}

#[test]
fn solve_and_inverse_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=8 {
        let m = random_spd(&mut rng, n);
        let chol = m.factor_spd().unwrap();
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = chol.solve(&b);
        let r = m.mul_vec(&x);
        for i in 0..n {
            assert!((r[i] - b[i]).abs() <= 1e-12 * (1.0 + b[i].abs()) * 1e2);
        }
        let inv = chol.inverse();
        let y = inv.mul_vec(&b);
        for i in 0..n {
            assert!((y[i] - x[i]).abs() <= 1e-10 * (1.0 + x[i].abs()));
        }
    }
}

proptest! {
    #[test]
    fn simplex_never_ends_above_its_start(
        c in prop::collection::vec(-3.0f64..3.0, 2),
        start in prop::collection::vec(-3.0f64..3.0, 2),
        budget in 3usize..200,
    ) {
        let f = |x: &[f64]| (x[0] - c[0]).powi(2) + 5.0 * (x[1] - c[1]).powi(2) + (3.0 * x[0]).sin();
        let f0 = f(&start);
        let res = simplex_minimize(f, &start, &[0.5, 0.5], SimplexOptions { budget, diameter_tol: 1e-6 }).unwrap();
        prop_assert!(res.value <= f0);
        prop_assert!(res.evaluations <= budget.max(3) + 4);
    }
}
