//! Small dense linear algebra for the quadratic forms that appear in the
//! characteristic functions. Everything here is at most 8x8.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pivot tolerance of the Cholesky factorization.
pub const PIVOT_TOL: f64 = 1e-12;

/// Real symmetric matrix stored as its packed lower triangle, row major:
/// `(0,0), (1,0), (1,1), (2,0), ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricMatrix {
    dim: usize,
    packed: Vec<f64>,
}

#[inline]
fn packed_index(i: usize, j: usize) -> usize {
    let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
    hi * (hi + 1) / 2 + lo
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            packed: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds a symmetric matrix from a dense row-major square matrix,
    /// rejecting inputs whose asymmetry exceeds `1e-12` componentwise.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: row.len(),
                });
            }
            for j in 0..=i {
                let (a, b) = (rows[i][j], rows[j][i]);
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::Contract("matrix entries must be finite".into()));
                }
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return Err(Error::Asymmetric { row: i, col: j });
                }
                m.set(i, j, 0.5 * (a + b));
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.packed[packed_index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.packed[packed_index(i, j)] = v;
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            packed: self
                .packed
                .iter()
                .zip(&other.packed)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            packed: self.packed.iter().map(|a| a * s).collect(),
        }
    }

    /// `zᵀ A z`
    pub fn quadratic_form(&self, z: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            acc += self.get(i, i) * z[i] * z[i];
            for j in 0..i {
                acc += 2.0 * self.get(i, j) * z[i] * z[j];
            }
        }
        acc
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Congruence `Mᵀ A M` for a dense `dim x m` matrix `M` (row major).
    pub fn congruence(&self, map: &[Vec<f64>]) -> Self {
        let m = map.first().map_or(0, Vec::len);
        let mut out = Self::zeros(m);
        // A M, dim x m
        let am: Vec<Vec<f64>> = (0..self.dim)
            .map(|i| {
                (0..m)
                    .map(|c| (0..self.dim).map(|k| self.get(i, k) * map[k][c]).sum())
                    .collect()
            })
            .collect();
        for a in 0..m {
            for b in 0..=a {
                let v: f64 = (0..self.dim).map(|k| map[k][a] * am[k][b]).sum();
                out.set(a, b, v);
            }
        }
        out
    }

    pub fn factor_spd(&self) -> Result<Cholesky> {
        factor_spd(self)
    }
}

/// Lower-triangular Cholesky factor `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    dim: usize,
    lower: Vec<Vec<f64>>,
}

/// Attempts a Cholesky factorization. A pivot below `PIVOT_TOL` times the
/// largest diagonal entry (or a non-positive one) means the matrix is not
/// positive definite; the offending index is reported.
pub fn factor_spd(m: &SymmetricMatrix) -> Result<Cholesky> {
    let n = m.dim();
    let scale = (0..n).map(|i| m.get(i, i).abs()).fold(0.0, f64::max).max(1.0);
    let mut l = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut d = m.get(j, j);
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if !(d > PIVOT_TOL * scale) {
            return Err(Error::NotPositiveDefinite { pivot: j });
        }
        let djj = d.sqrt();
        l[j][j] = djj;
        for i in (j + 1)..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / djj;
        }
    }
    Ok(Cholesky { dim: n, lower: l })
}

impl Cholesky {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn determinant(&self) -> f64 {
        (0..self.dim).map(|i| self.lower[i][i]).product::<f64>().powi(2)
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let l = &self.lower;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= l[i][k] * y[k];
            }
            y[i] /= l[i][i];
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                y[i] -= l[k][i] * y[k];
            }
            y[i] /= l[i][i];
        }
        y
    }

    pub fn inverse(&self) -> SymmetricMatrix {
        let n = self.dim;
        let mut inv = SymmetricMatrix::zeros(n);
        for c in 0..n {
            let mut e = vec![0.0; n];
            e[c] = 1.0;
            let col = self.solve(&e);
            for r in c..n {
                inv.set(r, c, col[r]);
            }
        }
        inv
    }
}

/// Dense `a * b` for row-major matrices.
pub fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|c| (0..inner).map(|k| row[k] * b[k][c]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Determinant by Laplace expansion along the first row. Exponential cost,
/// only meant for cross-checking small matrices.
pub fn cofactor_determinant(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    match n {
        0 => 1.0,
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        _ => (0..n)
            .map(|c| {
                let minor: Vec<Vec<f64>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != c)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                sign * a[0][c] * cofactor_determinant(&minor)
            })
            .sum(),
    }
}
