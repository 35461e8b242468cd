//! Applying a method to an operator set and measuring the error.

use std::collections::HashMap;

use serde::Serialize;

use super::linalg::{all_finite, c, identity, CMatrix, HermitianEigen, C64};
use super::ops::{pauli_x, pauli_y, pauli_z, OperatorSet};
use super::HarnessError;
use crate::method::{Method, Sign};
use crate::scalar::Scalar;

/// Builds one-step propagators, caching `exp(-i c H_n)` per `(n, c)`.
pub struct Evolver<'a> {
    ops: &'a OperatorSet,
    eigen: Vec<HermitianEigen>,
    cache: HashMap<(usize, u64), CMatrix>,
}

impl<'a> Evolver<'a> {
    pub fn new(ops: &'a OperatorSet) -> Result<Self, HarnessError> {
        let eigen = ops.terms().iter().map(HermitianEigen::new).collect::<Result<_, _>>()?;
        Ok(Self { ops, eigen, cache: HashMap::new() })
    }

    pub fn ops(&self) -> &OperatorSet {
        self.ops
    }

    fn factor(&mut self, term: usize, coeff: f64) -> &CMatrix {
        let eig = &self.eigen[term];
        self.cache.entry((term, coeff.to_bits())).or_insert_with(|| eig.propagator(coeff))
    }

    /// The product over units, left to right. A unit `(+1, a)` contributes
    /// `e^{-i a H_1 dt} ... e^{-i a H_N dt}`, a unit `(-1, a)` its inverse.
    pub fn apply<S: Scalar>(&mut self, m: &Method<S>, dt: f64) -> Result<CMatrix, HarnessError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(HarnessError::BadStep(dt));
        }
        let n = self.ops.len();
        let mut u = identity(self.ops.dim());
        for unit in m.units() {
            let a = unit.a().to_f64() * dt;
            match unit.alpha() {
                Sign::Plus => {
                    for k in 0..n {
                        u = &u * self.factor(k, a);
                    }
                }
                Sign::Minus => {
                    for k in (0..n).rev() {
                        u = &u * self.factor(k, -a);
                    }
                }
            }
        }
        if !all_finite(&u) {
            return Err(HarnessError::NonFinite);
        }
        Ok(u)
    }
}

pub fn apply_method<S: Scalar>(m: &Method<S>, ops: &OperatorSet, dt: f64) -> Result<CMatrix, HarnessError> {
    Evolver::new(ops)?.apply(m, dt)
}

/// `exp(-i t (H_1 + ... + H_N))` by eigendecomposition.
pub fn exact_evolution(ops: &OperatorSet, t: f64) -> Result<CMatrix, HarnessError> {
    Ok(HermitianEigen::new(&ops.hamiltonian())?.propagator(t))
}

/// Same as [`exact_evolution`] through Pade scaling and squaring.
pub fn exact_evolution_series(ops: &OperatorSet, t: f64) -> CMatrix {
    (ops.hamiltonian() * c(0.0, -t)).exp()
}

/// `c_k(U) = (i/2) tr(sigma_k U)`.
pub fn pauli_components(u: &CMatrix) -> Result<[C64; 3], HarnessError> {
    if u.nrows() != 2 || u.ncols() != 2 {
        return Err(HarnessError::NotQubit(u.nrows()));
    }
    Ok([pauli_x(), pauli_y(), pauli_z()].map(|s| (s * u).trace() * c(0.0, 0.5)))
}

/// `sqrt(sum_k |c_k(U_a) - c_k(U_e)|^2)`.
pub fn pauli_error(ua: &CMatrix, ue: &CMatrix) -> Result<f64, HarnessError> {
    let (a, e) = (pauli_components(ua)?, pauli_components(ue)?);
    Ok(a.iter().zip(&e).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt())
}

pub fn frobenius_error(ua: &CMatrix, ue: &CMatrix) -> Result<f64, HarnessError> {
    if ua.shape() != ue.shape() {
        return Err(HarnessError::DimensionMismatch(ua.nrows(), ue.nrows()));
    }
    Ok((ua - ue).norm())
}

#[derive(Clone, Debug, Serialize)]
pub struct EvolutionResult {
    #[serde(skip)]
    pub u_approx: CMatrix,
    #[serde(skip)]
    pub u_exact: CMatrix,
    /// Only for one spin.
    pub error_pauli: Option<f64>,
    pub error_frobenius: f64,
    pub dt: f64,
    pub n_steps: usize,
    /// `n D dt`.
    pub t: f64,
}

/// Time advanced by one application of `m` at step `dt`.
pub fn step_time<S: Scalar>(m: &Method<S>, dt: f64) -> Result<f64, HarnessError> {
    let d = m.advance().to_f64();
    if d.is_nan() || d <= 0.0 {
        return Err(HarnessError::NoAdvance(d));
    }
    Ok(d * dt)
}

/// `n_steps` applications of `m` against exact evolution over `n D dt`.
pub fn evolve<S: Scalar>(m: &Method<S>, ops: &OperatorSet, dt: f64, n_steps: usize) -> Result<EvolutionResult, HarnessError> {
    let t = step_time(m, dt)? * n_steps as f64;
    let step = apply_method(m, ops, dt)?;
    let u_approx = step.pow(n_steps as u32);
    let u_exact = exact_evolution(ops, t)?;
    compare(u_approx, u_exact, dt, n_steps, t)
}

pub(crate) fn compare(u_approx: CMatrix, u_exact: CMatrix, dt: f64, n_steps: usize, t: f64) -> Result<EvolutionResult, HarnessError> {
    let error_pauli = if u_approx.nrows() == 2 { Some(pauli_error(&u_approx, &u_exact)?) } else { None };
    let error_frobenius = frobenius_error(&u_approx, &u_exact)?;
    Ok(EvolutionResult { u_approx, u_exact, error_pauli, error_frobenius, dt, n_steps, t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::linalg::unitarity_defect;
    use crate::harness::ops::build_pauli_set;
    use crate::notation::parse_method;

    #[test]
    fn single_term_single_unit_is_exact() {
        let ops = OperatorSet::new(vec![pauli_x() + pauli_z() * c(0.3, 0.0)]).unwrap();
        let m = parse_method::<f64>("(1)").unwrap();
        let u = apply_method(&m, &ops, 0.7).unwrap();
        assert!((u - exact_evolution(&ops, 0.7).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn inverse_unit_reverses_factors() {
        let ops = build_pauli_set();
        let m = parse_method::<f64>("(-2)^T").unwrap();
        let dt = 0.01;
        let f = |s: CMatrix| (s * c(0.0, 2.0 * dt)).exp();
        let want = f(pauli_z()) * f(pauli_y()) * f(pauli_x());
        assert!((apply_method(&m, &ops, dt).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn exact_closed_form() {
        let ops = build_pauli_set();
        let r3 = 3f64.sqrt();
        for t in [0.0, 0.4, 3.1] {
            let u = exact_evolution(&ops, t).unwrap();
            let want = c((r3 * t).cos(), -(r3 * t).sin() / r3);
            assert!((u[(0, 0)] - want).norm() < 1e-14);
            assert!((u - exact_evolution_series(&ops, t)).norm() < 1e-12);
        }
    }

    #[test]
    fn commuting_terms_are_exact() {
        let d1 = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(-0.5, 0.0)]));
        let d2 = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.2, 0.0), c(2.0, 0.0)]));
        let ops = OperatorSet::new(vec![d1, d2]).unwrap();
        let m = parse_method::<f64>("(3)(-4)^T(1)(3)(2)^T(1)").unwrap();
        let r = evolve(&m, &ops, 0.05, 3).unwrap();
        assert!(r.error_frobenius < 1e-13);
        assert!(unitarity_defect(&r.u_approx) < 1e-12);
    }

    #[test]
    fn transpose_identities() {
        let m = parse_method::<f64>("(1)^T(2)(2)(-3)^T(1)^T(2)(1)^T").unwrap();
        let back = m.scale(&-1.0).unwrap();
        // transpose(M) at dt is the inverse of M at -dt.
        let ops = build_pauli_set();
        let ut = apply_method(&m.transpose(), &ops, 0.1).unwrap();
        assert!((ut - apply_method(&back, &ops, 0.1).unwrap().adjoint()).norm() < 1e-12);
        // With real symmetric terms it is the matrix transpose of M at dt.
        let ops = crate::harness::ops::build_ising_nnn(4).unwrap();
        let ut = apply_method(&m.transpose(), &ops, 0.1).unwrap();
        assert!((ut - apply_method(&m, &ops, 0.1).unwrap().transpose()).norm() < 1e-12);
    }

    #[test]
    fn errors() {
        let ops = build_pauli_set();
        let m = parse_method::<f64>("(1)").unwrap();
        assert_eq!(apply_method(&m, &ops, 0.0).unwrap_err(), HarnessError::BadStep(0.0));
        let big = CMatrix::identity(4, 4);
        assert_eq!(pauli_error(&big, &big).unwrap_err(), HarnessError::NotQubit(4));
        assert!(frobenius_error(&big, &identity(2)).is_err());
        assert_eq!(pauli_error(&identity(2), &identity(2)).unwrap(), 0.0);
    }
}
