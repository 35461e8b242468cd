//! Complex dense matrix helpers.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use super::HarnessError;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `||U^dagger U - 1||_F`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    (u.adjoint() * u - identity(u.nrows())).norm()
}

pub fn hermitian_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `H = V diag(w) V^dagger` for Hermitian `H`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(h: &CMatrix) -> Result<Self, HarnessError> {
        let sym = (h + h.adjoint()) * c(0.5, 0.0);
        let e = SymmetricEigen::try_new(sym, f64::EPSILON, 0).ok_or(HarnessError::Eigen)?;
        Ok(Self { values: e.eigenvalues, vectors: e.eigenvectors })
    }

    pub fn map(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let mut left = self.vectors.clone();
        for (j, &w) in self.values.iter().enumerate() {
            {
            let mut col = left.column_mut(j);
            col *= f(w);
        }
        }
        left * self.vectors.adjoint()
    }

    /// `exp(-i t H)`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        self.map(|w| Complex::from_polar(1.0, -w * t))
    }
}

/// Principal logarithm of a unitary matrix (anti-Hermitian result).
///
/// The eigenvectors come from the Hermitian matrix `Re U + phi Im U`, which
/// commutes with `U` and separates its eigenvalues for generic `phi`.
pub fn unitary_log(u: &CMatrix) -> Result<CMatrix, HarnessError> {
    const PHI: f64 = 0.618_033_988_749_895;
    let adj = u.adjoint();
    let h = (u + &adj) * c(0.5, 0.0) + (u - &adj) * c(0.0, -0.5 * PHI);
    let eig = HermitianEigen::new(&h)?;
    let v = &eig.vectors;
    let d = v.adjoint() * u * v;
    let mut left = v.clone();
    for j in 0..d.nrows() {
        {
            let mut col = left.column_mut(j);
            col *= c(0.0, d[(j, j)].arg());
        }
    }
    Ok(left * v.adjoint())
}
