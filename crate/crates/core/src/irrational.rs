//! Irrational methods: the shortest third-order method, the symmetric
//! six-unit fourth-order family, and a damped Gauss-Newton solver for the
//! order conditions.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::method::{Method, MethodError, Sign, Target, Unit};
use crate::scalar::{Real, Scalar};
use crate::sigma::{sigma_vector, Label};

/// Published coefficients of the shortest third-order method (27 decimals).
pub const R3_PRINTED: [&str; 4] = [
    "0.451525513208585723409578820",
    "-0.630880954030002500791663663",
    "-1.136710925213995714728206549",
    "-1.219117392452583938929449032",
];

/// Published `(a_1, a_2, a_3)` of the four symmetric fourth-order variants.
pub const R4_PRINTED: [[&str; 3]; 4] = [
    ["0.675603595979828817023843904", "-0.675603595979828817023843904", "-0.851207191959657634047687809"],
    ["-1.075035037431900314780251056", "-1.024607977441460486144230714", "-0.550427059990439828636020342"],
    ["0.938925888779098070854126976", "-1.002122279211397565598116356", "-0.563196390432299494743989380"],
    ["1.087752928204421689142747144", "-1.131212302433601022822197398", "0.543459374229179333679450254"],
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("variant must be 1..=4, got {0}")]
    BadVariant(u32),
    #[error("no real root of the variant polynomial matches the published coefficients")]
    RootNotFound,
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("Jacobian is singular")]
    SingularJacobian,
    #[error("expected {expected} initial values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("target order must be 1..=5, got {0}")]
    BadOrder(u32),
    #[error(transparent)]
    Method(#[from] MethodError),
}

/// Shortest third-order method: four units, normalized to `sigma^1 = 1`.
pub fn r3_shortest<T: Real>() -> Method<T> {
    let c = T::from_i64;
    let s13 = c(13).sqrt();
    let a2 = -(c(5) - s13 + c(2) * (c(5) + c(2) * s13).sqrt()) / c(6);
    let a3 = c(1) / (c(1) + a2);
    let a4 = -a2 * (c(1) + a2) / (c(3) + c(2) * a2);
    let raw = [(Sign::Plus, c(1)), (Sign::Minus, a2), (Sign::Minus, a3), (Sign::Plus, a4)];
    let d = raw.iter().fold(c(0), |acc, &(s, a)| acc + s.apply(a));
    let units = raw.iter().map(|&(s, a)| Unit::new(s, a / d).expect("nonzero")).collect();
    Method::new(units, Target::Sum).expect("nonempty")
}

/// Symmetric ansatz: `alpha_{I-i+1} = -alpha_i`, `a_{I-i+1} = -a_i`, so the
/// method is a half followed by its transpose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricAnsatz {
    /// Signs of the first half.
    pub signs: Vec<Sign>,
}

impl SymmetricAnsatz {
    pub fn units(&self) -> usize {
        2 * self.signs.len()
    }

    pub fn expand<S: Scalar>(&self, half: &[S]) -> Result<Method<S>, SolveError> {
        if half.len() != self.signs.len() {
            return Err(SolveError::DimensionMismatch { expected: self.signs.len(), got: half.len() });
        }
        let units = self
            .signs
            .iter()
            .zip(half)
            .map(|(&s, a)| Unit::new(s, a.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let first = Method::new(units, Target::Sum)?;
        Ok(first.concat(&first.transpose()))
    }

    /// Signs `(alpha_2, alpha_3)` of a six-unit variant (`alpha_1 = +1`).
    pub fn variant(variant: u32) -> Result<Self, SolveError> {
        let (s2, s3) = match variant {
            1 => (Sign::Minus, Sign::Plus),
            2 => (Sign::Minus, Sign::Minus),
            3 => (Sign::Plus, Sign::Minus),
            4 => (Sign::Plus, Sign::Plus),
            v => return Err(SolveError::BadVariant(v)),
        };
        Ok(Self { signs: vec![Sign::Plus, s2, s3] })
    }
}

/// Integer polynomial for `x` in each variant, highest degree first.
pub fn variant_polynomial(variant: u32) -> Result<Vec<i64>, SolveError> {
    Ok(match variant {
        // x = -1 exactly.
        1 => vec![1, 1],
        2 => vec![1, 3, 3, 0, -3, -3],
        3 => vec![2, 0, 3, 3, 0, 3],
        4 => vec![1, 0, 3, 1, 3, 3, 0, 3, 0, 1],
        v => return Err(SolveError::BadVariant(v)),
    })
}

pub fn eval_poly<T: Scalar>(coeffs: &[i64], x: &T) -> T {
    coeffs.iter().fold(T::zero(), |acc, &c| acc * x.clone() + T::from_i64(c))
}

fn eval_dpoly<T: Scalar>(coeffs: &[i64], x: &T) -> T {
    let n = coeffs.len() - 1;
    coeffs[..n]
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (i, &c)| acc * x.clone() + T::from_i64(c * (n - i) as i64))
}

/// Real roots of an integer polynomial, polished by Newton in `T`.
pub fn real_roots<T: Real>(coeffs: &[i64]) -> Vec<T> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[0] as f64;
    let companion = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if i == 0 {
            -(coeffs[j + 1] as f64) / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut out: Vec<T> = Vec::new();
    for z in companion.complex_eigenvalues().iter() {
        if z.im.abs() > 1e-6 * z.re.abs().max(1.0) {
            continue;
        }
        let mut x = T::from_f64(z.re);
        for _ in 0..8 {
            let d = eval_dpoly(coeffs, &x);
            if d.is_zero() {
                break;
            }
            x = x - eval_poly(coeffs, &x) / d;
        }
        if !out.iter().any(|r| (*r - x).abs().to_f64() < 1e-9) {
            out.push(x);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    out
}

/// Half-method coefficients `(a_1, a_2, a_3)` for root `x` of a variant.
pub fn ansatz_coefficients<T: Real>(ansatz: &SymmetricAnsatz, x: T) -> [T; 3] {
    let one = T::from_i64(1);
    let (s2, s3) = (ansatz.signs[1], ansatz.signs[2]);
    let y = -s3.apply((s2.apply(x * x * x) + one).cbrt());
    let a1 = one / (T::from_i64(2) * (s2.apply(x) + s3.apply(y) + one));
    [a1, x * a1, y * a1]
}

/// The six-unit symmetric fourth-order method of the given variant. The
/// root of the variant polynomial is the real root reproducing the
/// published `a_1` to `1e-6`.
pub fn r4_symmetric<T: Real>(variant: u32) -> Result<Method<T>, SolveError> {
    let ansatz = SymmetricAnsatz::variant(variant)?;
    let poly = variant_polynomial(variant)?;
    let want: f64 = R4_PRINTED[variant as usize - 1][0].parse().expect("constant parses");
    let half = real_roots::<T>(&poly)
        .into_iter()
        .map(|x| ansatz_coefficients(&ansatz, x))
        .find(|h| (h[0].to_f64() - want).abs() < 1e-6)
        .ok_or(SolveError::RootNotFound)?;
    ansatz.expand(&half)
}

/// Tuning for [`newton_solve`].
#[derive(Clone, Debug)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    pub max_halvings: usize,
    pub tolerance: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { max_iterations: 200, max_halvings: 60, tolerance: 1e-13 }
    }
}

#[derive(Clone, Debug)]
pub struct NewtonSolution<T> {
    pub method: Method<T>,
    pub residual: f64,
    pub iterations: usize,
}

/// Labels whose coefficients must vanish for a sum method of `order`.
pub fn condition_labels(order: u32) -> Vec<Label> {
    Label::ALL.into_iter().filter(|l| (2..=order).contains(&l.order())).collect()
}

fn build<T: Real>(signs: &[Sign], a: &[T]) -> Option<Method<T>> {
    let units = signs.iter().zip(a).map(|(&s, &x)| Unit::new(s, x).ok()).collect::<Option<Vec<_>>>()?;
    Method::new(units, Target::Sum).ok()
}

fn residual_vector<T: Real>(signs: &[Sign], a: &[T], labels: &[Label]) -> Option<Vec<T>> {
    let m = build(signs, a)?;
    let v = sigma_vector(&m);
    let mut out = vec![*v.get(Label::S1) - T::from_i64(1)];
    out.extend(labels.iter().map(|&l| *v.get(l)));
    Some(out)
}

fn norm<T: Real>(f: &[T]) -> f64 {
    f.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
}

/// Damped Gauss-Newton on `sigma^1 = 1` and `sigma^X = 0` for every label of
/// order `2..=target_order`, with unit signs fixed. The residual is
/// evaluated in `T`; the Jacobian uses central differences in `f64`.
pub fn newton_solve<T: Real>(
    signs: &[Sign],
    initial: &[f64],
    target_order: u32,
    opts: &NewtonOptions,
) -> Result<NewtonSolution<T>, SolveError> {
    if !(1..=5).contains(&target_order) {
        return Err(SolveError::BadOrder(target_order));
    }
    if signs.len() != initial.len() || signs.is_empty() {
        return Err(SolveError::DimensionMismatch { expected: signs.len(), got: initial.len() });
    }
    let labels = condition_labels(target_order);
    let n = signs.len();
    let mut x: Vec<T> = initial.iter().map(|&v| T::from_f64(v)).collect();
    let fail = |iterations, residual| SolveError::NoConvergence { iterations, residual };
    let mut f = residual_vector(signs, &x, &labels).ok_or_else(|| fail(0, f64::INFINITY))?;
    let mut r = norm(&f);
    for iter in 0..opts.max_iterations {
        if r < opts.tolerance {
            return Ok(NewtonSolution { method: build(signs, &x).expect("valid"), residual: r, iterations: iter });
        }
        let m = f.len();
        let mut jac = DMatrix::<f64>::zeros(m, n);
        let xf: Vec<f64> = x.iter().map(|v| v.to_f64()).collect();
        for j in 0..n {
            let h = 1e-6 * xf[j].abs().max(1.0);
            let mut xp: Vec<f64> = xf.clone();
            let mut xm = xf.clone();
            xp[j] += h;
            xm[j] -= h;
            let fp = residual_vector::<f64>(signs, &xp, &labels);
            let fm = residual_vector::<f64>(signs, &xm, &labels);
            let (Some(fp), Some(fm)) = (fp, fm) else {
                return Err(SolveError::SingularJacobian);
            };
            for i in 0..m {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let svd = jac.svd(true, true);
        let smax = svd.singular_values.max();
        if smax.is_nan() || smax <= 0.0 {
            return Err(SolveError::SingularJacobian);
        }
        let rhs = DVector::from_iterator(m, f.iter().map(|v| v.to_f64()));
        let step = svd.solve(&rhs, smax * 1e-14).map_err(|_| SolveError::SingularJacobian)?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<T> = x.iter().zip(step.iter()).map(|(&xi, &d)| xi - T::from_f64(lambda * d)).collect();
            if let Some(ft) = residual_vector(signs, &trial, &labels) {
                let rt = norm(&ft);
                if rt < r {
                    x = trial;
                    f = ft;
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(fail(iter + 1, r));
        }
    }
    if r < opts.tolerance {
        return Ok(NewtonSolution { method: build(signs, &x).expect("valid"), residual: r, iterations: opts.max_iterations });
    }
    Err(fail(opts.max_iterations, r))
}
