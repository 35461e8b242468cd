//! Operator sets: the Hermitian terms `H_1, ..., H_N` of a Hamiltonian.

use super::linalg::{c, hermitian_defect, CMatrix};
use super::HarnessError;

const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct OperatorSet {
    dim: usize,
    terms: Vec<CMatrix>,
    labels: Vec<String>,
}

impl OperatorSet {
    pub fn new(terms: Vec<CMatrix>) -> Result<Self, HarnessError> {
        let labels = (1..=terms.len()).map(|i| format!("H{i}")).collect();
        Self::with_labels(terms, labels)
    }

    pub fn with_labels(terms: Vec<CMatrix>, labels: Vec<String>) -> Result<Self, HarnessError> {
        let first = terms.first().ok_or(HarnessError::EmptySet)?;
        let dim = first.nrows();
        for (index, t) in terms.iter().enumerate() {
            if t.nrows() != dim || t.ncols() != dim || dim == 0 {
                return Err(HarnessError::Shape { index, dim });
            }
            let deviation = hermitian_defect(t);
            if deviation.is_nan() || deviation > HERMITIAN_TOL {
                return Err(HarnessError::NotHermitian { index, deviation });
            }
        }
        if labels.len() != terms.len() {
            return Err(HarnessError::DimensionMismatch(labels.len(), terms.len()));
        }
        Ok(Self { dim, terms, labels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[CMatrix] {
        &self.terms
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `H_1 + ... + H_N`.
    pub fn hamiltonian(&self) -> CMatrix {
        self.terms.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, t| acc + t)
    }
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

/// `{sigma_x, sigma_y, sigma_z}` on one spin.
pub fn build_pauli_set() -> OperatorSet {
    OperatorSet::with_labels(vec![pauli_x(), pauli_y(), pauli_z()], vec!["x".into(), "y".into(), "z".into()])
        .expect("Pauli matrices are Hermitian")
}

pub const MIN_SPINS: usize = 4;
pub const MAX_SPINS: usize = 10;

/// `sigma_i . sigma_j = 2 P_ij - 1` with `P_ij` the swap of spins `i`, `j`.
fn heisenberg_bond(n: usize, i: usize, j: usize) -> CMatrix {
    let dim = 1usize << n;
    let (bi, bj) = (n - 1 - i, n - 1 - j);
    let mut m = CMatrix::zeros(dim, dim);
    for s in 0..dim {
        let (x, y) = ((s >> bi) & 1, (s >> bj) & 1);
        let swapped = if x == y { s } else { s ^ (1 << bi) ^ (1 << bj) };
        m[(swapped, s)] += c(2.0, 0.0);
        m[(s, s)] -= c(1.0, 0.0);
    }
    m
}

/// Periodic chain with nearest and next-nearest Heisenberg couplings
/// `sum_i sigma_i . sigma_{i+1} + sigma_i . sigma_{i+2}`.
///
/// Bonds are grouped greedily into terms whose bonds share no spin, so each
/// term is a sum of commuting pieces. Nearest bonds fill the first groups,
/// next-nearest the rest. For a multiple of four spins this gives four terms.
/// With four spins the next-nearest bonds `(i, i+2)` and `(i+2, i)` coincide
/// and the last two terms are equal.
pub fn build_ising_nnn(num_spins: usize) -> Result<OperatorSet, HarnessError> {
    let n = num_spins;
    if !(MIN_SPINS..=MAX_SPINS).contains(&n) {
        return Err(HarnessError::SpinCount(n));
    }
    let mut terms = Vec::new();
    let mut labels = Vec::new();
    for (kind, offset) in [("nn", 1), ("nnn", 2)] {
        let mut groups: Vec<Vec<(usize, usize)>> = Vec::new();
        for i in 0..n {
            let bond = (i, (i + offset) % n);
            let free = |g: &Vec<(usize, usize)>| g.iter().all(|&(a, b)| a != bond.0 && a != bond.1 && b != bond.0 && b != bond.1);
            match groups.iter_mut().find(|g| free(g)) {
                Some(g) => g.push(bond),
                None => groups.push(vec![bond]),
            }
        }
        for (k, g) in groups.iter().enumerate() {
            let dim = 1usize << n;
            terms.push(g.iter().fold(CMatrix::zeros(dim, dim), |acc, &(i, j)| acc + heisenberg_bond(n, i, j)));
            labels.push(format!("{kind}{k}"));
        }
    }
    OperatorSet::with_labels(terms, labels)
}
