//! Dense-matrix benchmarks: apply a method to concrete Hermitian terms and
//! compare with exact evolution.

pub mod evolution;
pub mod experiment;
pub mod lie;
pub mod linalg;
pub mod ops;

use thiserror::Error;

pub use evolution::{apply_method, evolve, exact_evolution, exact_evolution_series, frobenius_error, pauli_error, EvolutionResult, Evolver};
pub use experiment::{envelope_slope, loglog_slope, scaling_experiment, to_csv, trajectory, Horizon, Row};
pub use linalg::{CMatrix, C64};
pub use ops::{build_ising_nnn, build_pauli_set, OperatorSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("operator set is empty")]
    EmptySet,
    #[error("term {index} is not a {dim}x{dim} matrix")]
    Shape { index: usize, dim: usize },
    #[error("term {index} is not Hermitian (deviation {deviation:e})")]
    NotHermitian { index: usize, deviation: f64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("Pauli error needs 2x2 matrices, got dimension {0}")]
    NotQubit(usize),
    #[error("time step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("eigensolver did not converge")]
    Eigen,
    #[error("spin count {0} outside 4..=10")]
    SpinCount(usize),
    #[error("method does not advance time (D = {0})")]
    NoAdvance(f64),
    #[error("no time steps given")]
    NoSteps,
}
