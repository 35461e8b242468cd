//! Two-operator commutator words as matrices, for checking `sigma^X`
//! against the logarithm of an explicit product.

use super::linalg::{commutator, identity, CMatrix};
use crate::method::{Method, Sign};
use crate::residual::{B2Table, Word};
use crate::scalar::Scalar;
use crate::sigma::{Label, SigmaVector};

/// `A_{k l ... n} = [A_k, [A_l, [..., A_n]]]`.
pub fn word_matrix(word: Word, a: &[CMatrix; 2]) -> CMatrix {
    let letters = word.letters();
    let (&last, rest) = letters.split_last().expect("words are nonempty");
    rest.iter().rev().fold(a[last].clone(), |acc, &k| commutator(&a[k], &acc))
}

/// `B_2^X` expanded in words.
pub fn basis_matrix(label: Label, a: &[CMatrix; 2]) -> CMatrix {
    let n = a[0].nrows();
    B2Table::row(label).iter().fold(CMatrix::zeros(n, n), |acc, &(w, num, den)| {
        acc + word_matrix(w, a) * super::linalg::c(num as f64 / den as f64, 0.0)
    })
}

/// `sum_X sigma^X B_2^X` over every label through fifth order.
pub fn sigma_generator<S: Scalar>(v: &SigmaVector<S>, a: &[CMatrix; 2]) -> CMatrix {
    let n = a[0].nrows();
    Label::ALL.into_iter().fold(CMatrix::zeros(n, n), |acc, l| {
        acc + basis_matrix(l, a) * super::linalg::c(v.get(l).to_f64(), 0.0)
    })
}

/// The product of `(e^{a A_1} ... e^{a A_N})^alpha` over units, for arbitrary
/// square `A_n`.
pub fn product_exp<S: Scalar>(m: &Method<S>, a: &[CMatrix]) -> CMatrix {
    let mut u = identity(a[0].nrows());
    for unit in m.units() {
        let x = super::linalg::c(unit.a().to_f64(), 0.0);
        match unit.alpha() {
            Sign::Plus => {
                for op in a {
                    u *= (op * x).exp();
                }
            }
            Sign::Minus => {
                for op in a.iter().rev() {
                    u *= (op * -x).exp();
                }
            }
        }
    }
    u
}
