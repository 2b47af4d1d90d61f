//! Globally adaptive cubature over boxes of dimension 1 to 4.
//!
//! Each cell is integrated with a tensorized Gauss/Kronrod pair (G7/K15 up to
//! dimension 2, G3/K7 above). The cell with the largest error estimate is
//! bisected along the axis whose Gauss-in-that-axis-only estimate deviates the
//! most from the full Kronrod value.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

struct Rule {
    nodes: &'static [f64],
    kronrod: &'static [f64],
    gauss: &'static [f64],
}

// Full symmetric node lists on [-1, 1]; gauss weights are zero on nodes that
// only belong to the Kronrod extension.
const K15_NODES: [f64; 15] = [
    -0.991_455_371_120_812_6,
    -0.949_107_912_342_758_5,
    -0.864_864_423_359_769_1,
    -0.741_531_185_599_394_4,
    -0.586_087_235_467_691_1,
    -0.405_845_151_377_397_2,
    -0.207_784_955_007_898_5,
    0.0,
    0.207_784_955_007_898_5,
    0.405_845_151_377_397_2,
    0.586_087_235_467_691_1,
    0.741_531_185_599_394_4,
    0.864_864_423_359_769_1,
    0.949_107_912_342_758_5,
    0.991_455_371_120_812_6,
];
const K15_WEIGHTS: [f64; 15] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
    0.204_432_940_075_298_9,
    0.190_350_578_064_785_4,
    0.169_004_726_639_267_9,
    0.140_653_259_715_525_92,
    0.104_790_010_322_250_18,
    0.063_092_092_629_978_553,
    0.022_935_322_010_529_225,
];
const G7_WEIGHTS: [f64; 15] = [
    0.0,
    0.129_484_966_168_869_7,
    0.0,
    0.279_705_391_489_276_7,
    0.0,
    0.381_830_050_505_118_9,
    0.0,
    0.417_959_183_673_469_4,
    0.0,
    0.381_830_050_505_118_9,
    0.0,
    0.279_705_391_489_276_7,
    0.0,
    0.129_484_966_168_869_7,
    0.0,
];

const K7_NODES: [f64; 7] = [
    -0.960_491_268_708_020_3,
    -0.774_596_669_241_483_4,
    -0.434_243_749_346_802_56,
    0.0,
    0.434_243_749_346_802_56,
    0.774_596_669_241_483_4,
    0.960_491_268_708_020_3,
];
const K7_WEIGHTS: [f64; 7] = [
    0.104_656_226_026_467_27,
    0.268_488_089_868_333_44,
    0.401_397_414_775_962_2,
    0.450_916_538_658_474_14,
    0.401_397_414_775_962_2,
    0.268_488_089_868_333_44,
    0.104_656_226_026_467_27,
];
const G3_WEIGHTS: [f64; 7] = [
    0.0,
    5.0 / 9.0,
    0.0,
    8.0 / 9.0,
    0.0,
    5.0 / 9.0,
    0.0,
];

static RULE_15: Rule = Rule {
    nodes: &K15_NODES,
    kronrod: &K15_WEIGHTS,
    gauss: &G7_WEIGHTS,
};
static RULE_7: Rule = Rule {
    nodes: &K7_NODES,
    kronrod: &K7_WEIGHTS,
    gauss: &G3_WEIGHTS,
};

/// Integration domain and stopping criteria.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Budget on the number of cells alive at once.
    pub max_subdivisions: usize,
    /// Number of equal panels per axis the box is cut into before adaptation
    /// starts. Callers with an oscillatory factor of known frequency use this
    /// to keep every panel below a few radians of phase.
    pub initial_divisions: Vec<usize>,
}

impl QuadratureSpec {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        let d = lower.len();
        Self {
            lower,
            upper,
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_subdivisions: 20_000,
            initial_divisions: vec![1; d],
        }
    }

    pub fn symmetric_box(dim: usize, half_width: f64) -> Self {
        Self::new(vec![-half_width; dim], vec![half_width; dim])
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    pub fn with_initial_divisions(mut self, divisions: Vec<usize>) -> Self {
        self.initial_divisions = divisions;
        self
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    fn validate(&self) -> Result<()> {
        let d = self.dimension();
        if !(1..=4).contains(&d) {
            return Err(Error::Contract(format!("quadrature dimension {d} not in 1..=4")));
        }
        if self.upper.len() != d || self.initial_divisions.len() != d {
            return Err(Error::Dimension {
                expected: d,
                found: self.upper.len().min(self.initial_divisions.len()),
            });
        }
        if self
            .lower
            .iter()
            .chain(&self.upper)
            .any(|b| !b.is_finite())
        {
            return Err(Error::Contract("quadrature bounds must be finite".into()));
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Contract("quadrature tolerances must be positive".into()));
        }
        if self.initial_divisions.iter().any(|&n| n == 0) || self.max_subdivisions == 0 {
            return Err(Error::Contract("subdivision counts must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub cells: usize,
}

struct Cell {
    lower: Vec<f64>,
    upper: Vec<f64>,
    value: Complex64,
    error: f64,
    split_axis: usize,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn integrate_cell<F>(f: &F, rule: &Rule, lower: &[f64], upper: &[f64], point: &mut [f64]) -> Cell
where
    F: Fn(&[f64]) -> Complex64,
{
    let d = lower.len();
    let n = rule.nodes.len();
    let half: Vec<f64> = (0..d).map(|i| 0.5 * (upper[i] - lower[i])).collect();
    let mid: Vec<f64> = (0..d).map(|i| 0.5 * (upper[i] + lower[i])).collect();
    let jac: f64 = half.iter().product();

    let mut kron = Complex64::new(0.0, 0.0);
    let mut gauss = Complex64::new(0.0, 0.0);
    // Gauss rule along one axis, Kronrod along the rest.
    let mut mixed = [Complex64::new(0.0, 0.0); 4];
    let mut idx = [0usize; 4];
    let total = n.pow(d as u32);
    for _ in 0..total {
        let mut wk = 1.0;
        let mut wg = 1.0;
        for a in 0..d {
            point[a] = mid[a] + half[a] * rule.nodes[idx[a]];
            wk *= rule.kronrod[idx[a]];
            wg *= rule.gauss[idx[a]];
        }
        let v = f(point);
        kron += v * wk;
        gauss += v * wg;
        for a in 0..d {
            let g = rule.gauss[idx[a]];
            if g != 0.0 {
                mixed[a] += v * (wk / rule.kronrod[idx[a]] * g);
            }
        }
        for a in 0..d {
            idx[a] += 1;
            if idx[a] < n {
                break;
            }
            idx[a] = 0;
        }
    }
    let value = kron * jac;
    let error = ((kron - gauss) * jac).norm();
    let split_axis = (0..d)
        .max_by(|&a, &b| {
            let ea = (kron - mixed[a]).norm() * (upper[a] - lower[a]).abs().max(f64::MIN_POSITIVE);
            let eb = (kron - mixed[b]).norm() * (upper[b] - lower[b]).abs().max(f64::MIN_POSITIVE);
            ea.total_cmp(&eb).then(b.cmp(&a))
        })
        .unwrap_or(0);
    Cell {
        lower: lower.to_vec(),
        upper: upper.to_vec(),
        value,
        error,
        split_axis,
    }
}

/// Integrates a complex-valued function over the box in `spec`.
///
/// Returns the estimate once the summed cell error falls below
/// `max(abs_tol, rel_tol * |estimate|)`; otherwise a
/// [`Error::NonConvergence`] carrying the best estimate.
pub fn adaptive_integrate<F>(f: F, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(&[f64]) -> Complex64,
{
    spec.validate()?;
    let d = spec.dimension();
    let rule = if d <= 2 { &RULE_15 } else { &RULE_7 };
    let per_cell = rule.nodes.len().pow(d as u32);
    let mut point = vec![0.0; d];

    let mut heap = BinaryHeap::new();
    let total_initial: usize = spec.initial_divisions.iter().product();
    let mut idx = vec![0usize; d];
    for _ in 0..total_initial {
        let lo: Vec<f64> = (0..d)
            .map(|a| {
                let w = (spec.upper[a] - spec.lower[a]) / spec.initial_divisions[a] as f64;
                spec.lower[a] + w * idx[a] as f64
            })
            .collect();
        let hi: Vec<f64> = (0..d)
            .map(|a| {
                let w = (spec.upper[a] - spec.lower[a]) / spec.initial_divisions[a] as f64;
                if idx[a] + 1 == spec.initial_divisions[a] {
                    spec.upper[a]
                } else {
                    spec.lower[a] + w * (idx[a] + 1) as f64
                }
            })
            .collect();
        heap.push(integrate_cell(&f, rule, &lo, &hi, &mut point));
        for a in 0..d {
            idx[a] += 1;
            if idx[a] < spec.initial_divisions[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    let mut evaluations = total_initial * per_cell;

    loop {
        // Re-summing keeps the totals free of cancellation drift.
        let (value, error) = heap.iter().fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), c| {
            (v + c.value, e + c.error)
        });
        let target = spec.abs_tol.max(spec.rel_tol * value.norm());
        if error <= target {
            return Ok(QuadratureResult {
                value,
                error,
                evaluations,
                cells: heap.len(),
            });
        }
        if heap.len() >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                estimate: value,
                error,
                subdivisions: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let a = worst.split_axis;
        let m = 0.5 * (worst.lower[a] + worst.upper[a]);
        let mut left_hi = worst.upper.clone();
        left_hi[a] = m;
        let mut right_lo = worst.lower.clone();
        right_lo[a] = m;
        heap.push(integrate_cell(&f, rule, &worst.lower, &left_hi, &mut point));
        heap.push(integrate_cell(&f, rule, &right_lo, &worst.upper, &mut point));
        evaluations += 2 * per_cell;
    }
}

/// Convenience wrapper for real integrands.
pub fn adaptive_integrate_real<F>(f: F, spec: &QuadratureSpec) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> f64,
{
    let r = adaptive_integrate(|x| Complex64::new(f(x), 0.0), spec)?;
    Ok((r.value.re, r.error))
}
