//! Sparse multivariate polynomials with complex coefficients.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::SymmetricMatrix;

/// Most variables a polynomial can carry: four modes, two quadratures each.
pub const MAX_VARS: usize = 8;

/// Highest total degree the Gaussian moment tables accept.
pub const MOMENT_DEGREE_CAP: usize = 16;

/// Coefficients below this fraction of the largest one are dropped after a
/// product.
pub const PRUNE_REL: f64 = 1e-14;

/// Exponent multi-index. Slots at or beyond `num_vars` are always zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub [u8; MAX_VARS]);

impl Monomial {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.0[i] + other.0[i];
        }
        Monomial(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiIndexPolynomial {
    num_vars: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

fn check_vars(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VARS {
        return Err(Error::Contract(format!(
            "polynomial variable count {n} outside 1..={MAX_VARS}"
        )));
    }
    Ok(())
}

impl MultiIndexPolynomial {
    pub fn zero(num_vars: usize) -> Result<Self> {
        check_vars(num_vars)?;
        Ok(Self {
            num_vars,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(num_vars: usize, c: Complex64) -> Result<Self> {
        let mut p = Self::zero(num_vars)?;
        p.add_term(Monomial::default(), c);
        Ok(p)
    }

    pub fn one(num_vars: usize) -> Result<Self> {
        Self::constant(num_vars, Complex64::new(1.0, 0.0))
    }

    /// The coordinate polynomial `z_index`.
    pub fn variable(num_vars: usize, index: usize) -> Result<Self> {
        let mut p = Self::zero(num_vars)?;
        if index >= num_vars {
            return Err(Error::Dimension {
                expected: num_vars,
                found: index + 1,
            });
        }
        let mut e = [0u8; MAX_VARS];
        e[index] = 1;
        p.add_term(Monomial(e), Complex64::new(1.0, 0.0));
        Ok(p)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u8>, Complex64)>,
    {
        let mut p = Self::zero(num_vars)?;
        for (exps, c) in terms {
            if exps.len() != num_vars {
                return Err(Error::Dimension {
                    expected: num_vars,
                    found: exps.len(),
                });
            }
            let mut e = [0u8; MAX_VARS];
            e[..num_vars].copy_from_slice(&exps);
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// Affine form `offset + Σ coeffs_j z_j`.
    pub fn linear(num_vars: usize, coeffs: &[f64], offset: Complex64) -> Result<Self> {
        if coeffs.len() != num_vars {
            return Err(Error::Dimension {
                expected: num_vars,
                found: coeffs.len(),
            });
        }
        let mut p = Self::constant(num_vars, offset)?;
        for (j, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                let mut e = [0u8; MAX_VARS];
                e[j] = 1;
                p.add_term(Monomial(e), Complex64::new(c, 0.0));
            }
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry(m).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&m);
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u8]) -> Complex64 {
        let mut e = [0u8; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        self.terms
            .get(&Monomial(e))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &[f64]) -> Complex64 {
        let n = self.num_vars;
        let max_pow = self
            .terms
            .keys()
            .flat_map(|m| m.0[..n].iter().copied())
            .max()
            .unwrap_or(0) as usize;
        // powers[i][k] = z_i^k
        let mut powers = [[0.0f64; MOMENT_DEGREE_CAP + 1]; MAX_VARS];
        let max_pow = max_pow.min(MOMENT_DEGREE_CAP);
        for i in 0..n {
            powers[i][0] = 1.0;
            for k in 1..=max_pow {
                powers[i][k] = powers[i][k - 1] * z[i];
            }
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = 1.0;
                for i in 0..n {
                    let e = m.0[i] as usize;
                    if e > 0 {
                        t *= if e <= max_pow { powers[i][e] } else { z[i].powi(e as i32) };
                    }
                }
                c * t
            })
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self {
            num_vars: self.num_vars,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            out.add_term(*m, c * s);
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Product with relative pruning of floating-point dust.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let mut out = Self {
            num_vars: self.num_vars,
            terms: BTreeMap::new(),
        };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out.prune();
        Ok(out)
    }

    /// Drops coefficients below `PRUNE_REL` times the largest modulus.
    pub fn prune(&mut self) {
        let max = self.terms.values().map(|c| c.norm()).fold(0.0, f64::max);
        let cut = PRUNE_REL * max;
        self.terms.retain(|_, c| c.norm() >= cut && c.norm() > 0.0);
    }

    fn same_vars(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::Dimension {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        Ok(())
    }

    /// Substitutes `z_i = offset_i + Σ_j map[i][j] w_j`, returning a
    /// polynomial in the `m = map[0].len()` variables `w`.
    pub fn compose_affine(&self, map: &[Vec<f64>], offset: &[Complex64]) -> Result<Self> {
        if map.len() != self.num_vars || offset.len() != self.num_vars {
            return Err(Error::Dimension {
                expected: self.num_vars,
                found: map.len(),
            });
        }
        let m = map.first().map_or(0, Vec::len);
        check_vars(m)?;
        let n = self.num_vars;
        let mut max_pow = [0usize; MAX_VARS];
        for mono in self.terms.keys() {
            for i in 0..n {
                max_pow[i] = max_pow[i].max(mono.0[i] as usize);
            }
        }
        let mut powers: Vec<Vec<Self>> = Vec::with_capacity(n);
        for i in 0..n {
            let lin = Self::linear(m, &map[i], offset[i])?;
            let mut row = vec![Self::one(m)?];
            for k in 1..=max_pow[i] {
                let next = row[k - 1].mul(&lin)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Self::zero(m)?;
        for (mono, c) in &self.terms {
            let mut t = Self::constant(m, *c)?;
            for i in 0..n {
                let e = mono.0[i] as usize;
                if e > 0 {
                    t = t.mul(&powers[i][e])?;
                }
            }
            for (mm, cc) in t.terms {
                out.add_term(mm, cc);
            }
        }
        out.prune();
        Ok(out)
    }

    /// `E[P(W)]` for `W ~ N(0, cov)`, by Isserlis pairing.
    pub fn gaussian_expectation(&self, cov: &SymmetricMatrix) -> Result<Complex64> {
        if cov.dim() != self.num_vars {
            return Err(Error::Dimension {
                expected: self.num_vars,
                found: cov.dim(),
            });
        }
        let degree = self.degree();
        if degree > MOMENT_DEGREE_CAP {
            return Err(Error::DegreeCap {
                degree,
                cap: MOMENT_DEGREE_CAP,
            });
        }
        let mut table = MomentTable::new(cov);
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| c * table.moment(*m))
            .sum())
    }
}

/// Memoized central Gaussian moments `E[Π w_i^{k_i}]`.
pub struct MomentTable<'a> {
    cov: &'a SymmetricMatrix,
    memo: HashMap<Monomial, f64>,
}

impl<'a> MomentTable<'a> {
    pub fn new(cov: &'a SymmetricMatrix) -> Self {
        Self {
            cov,
            memo: HashMap::new(),
        }
    }

    /// Uses `E[w_j f(w)] = Σ_i Σ_ji E[∂_i f(w)]` to peel one factor at a time.
    pub fn moment(&mut self, m: Monomial) -> f64 {
        let deg = m.degree();
        if deg == 0 {
            return 1.0;
        }
        if deg % 2 == 1 {
            return 0.0;
        }
        if let Some(&v) = self.memo.get(&m) {
            return v;
        }
        let n = self.cov.dim();
        let j = (0..n).find(|&i| m.0[i] > 0).expect("non-constant monomial");
        let mut rest = m;
        rest.0[j] -= 1;
        let mut acc = 0.0;
        for i in 0..n {
            let k = rest.0[i];
            if k == 0 {
                continue;
            }
            let s = self.cov.get(j, i);
            if s == 0.0 {
                continue;
            }
            let mut r = rest;
            r.0[i] -= 1;
            acc += s * k as f64 * self.moment(r);
        }
        self.memo.insert(m, acc);
        acc
    }
}
