//! Nelder-Mead simplex minimization for problems of dimension 1 to 3.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplexResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// `false` when the budget ran out before the simplex collapsed.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Checked once per iteration, so the final count can exceed it by
    /// at most `dim + 2`.
    pub budget: usize,
    /// Stop once every vertex lies within this distance of the best one.
    pub diameter_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            budget: 500,
            diameter_tol: 1e-6,
        }
    }
}

/// Minimizes `f` starting from `start` with an initial simplex of per-axis
/// steps `scale`. Non-finite values are treated as `+inf`, so callers can
/// exclude regions by returning NaN or infinity.
pub fn simplex_minimize<F>(
    mut f: F,
    start: &[f64],
    scale: &[f64],
    options: SimplexOptions,
) -> Result<SimplexResult>
where
    F: FnMut(&[f64]) -> f64,
{
    let k = start.len();
    if !(1..=3).contains(&k) || scale.len() != k {
        return Err(Error::Contract(format!(
            "simplex dimension {k} (scale {}) unsupported",
            scale.len()
        )));
    }
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let f0 = eval(start, &mut evals);
    if !f0.is_finite() {
        return Err(Error::Contract("simplex start is not a finite point".into()));
    }
    let mut verts: Vec<(Vec<f64>, f64)> = vec![(start.to_vec(), f0)];
    for i in 0..k {
        let mut x = start.to_vec();
        x[i] += scale[i];
        let v = eval(&x, &mut evals);
        verts.push((x, v));
    }

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut converged = false;
    loop {
        // Stable sort keeps ties in insertion order, so runs are reproducible.
        verts.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = verts[0].0.clone();
        let diameter = verts[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&best)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < options.diameter_tol {
            converged = true;
            break;
        }
        if evals >= options.budget {
            break;
        }
        let centroid: Vec<f64> = (0..k)
            .map(|j| verts[..k].iter().map(|(x, _)| x[j]).sum::<f64>() / k as f64)
            .collect();
        let worst = verts[k].clone();
        let along = |t: f64| -> Vec<f64> {
            (0..k)
                .map(|j| centroid[j] + t * (worst.0[j] - centroid[j]))
                .collect()
        };
        let xr = along(-alpha);
        let fr = eval(&xr, &mut evals);
        if fr < verts[0].1 {
            let xe = along(-gamma);
            let fe = eval(&xe, &mut evals);
            verts[k] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < verts[k - 1].1 {
            verts[k] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = along(-rho);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = along(rho);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        };
        if fc < worst.1.min(fr) {
            verts[k] = (xc, fc);
            continue;
        }
        for i in 1..=k {
            let x: Vec<f64> = (0..k)
                .map(|j| best[j] + sigma * (verts[i].0[j] - best[j]))
                .collect();
            let v = eval(&x, &mut evals);
            verts[i] = (x, v);
        }
    }
    verts.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (point, value) = verts.swap_remove(0);
    Ok(SimplexResult {
        point,
        value,
        evaluations: evals,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_parabola() {
        let r = simplex_minimize(|x| (x[0] - 2.0).powi(2), &[0.0], &[0.5], SimplexOptions::default())
            .unwrap();
        assert!((r.point[0] - 2.0).abs() < 1e-6);
        assert!(r.converged);
    }

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2) + 0.5 * (x[0] - 1.0) * (x[1] + 0.5);
        let r = simplex_minimize(f, &[0.0, 0.0], &[0.3, 0.3], SimplexOptions::default()).unwrap();
        assert!((r.point[0] - 1.0).abs() < 1e-6);
        assert!((r.point[1] + 0.5).abs() < 1e-6);
    }

    #[test]
    fn rosenbrock_within_budget() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        // dense scan oracle: the minimum over a fine grid is essentially zero at (1, 1)
        let mut grid_best = f64::INFINITY;
        for i in 0..=400 {
            for j in 0..=400 {
                let p = [-2.0 + 4.0 * i as f64 / 400.0, -1.0 + 3.0 * j as f64 / 400.0];
                grid_best = grid_best.min(rosen(&p));
            }
        }
        assert!(grid_best < 1e-3);
        let r = simplex_minimize(
            rosen,
            &[-1.0, 1.0],
            &[0.5, 0.5],
            SimplexOptions {
                budget: 500,
                diameter_tol: 1e-8,
            },
        )
        .unwrap();
        assert!(r.value < 1e-3, "value {}", r.value);
        assert!(r.evaluations <= 500 + 3);
    }

    #[test]
    fn excluded_regions_and_budget() {
        let f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 0.1).powi(2) };
        let r = simplex_minimize(
            f,
            &[1.0],
            &[-2.0],
            SimplexOptions {
                budget: 5,
                diameter_tol: 1e-12,
            },
        )
        .unwrap();
        assert!(!r.converged);
        assert!(r.value <= 0.81);
    }

    #[test]
    fn rejects_large_dimension() {
        assert!(simplex_minimize(|_| 0.0, &[0.0; 4], &[1.0; 4], SimplexOptions::default()).is_err());
    }
}
