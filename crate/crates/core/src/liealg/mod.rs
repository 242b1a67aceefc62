//! Root data, the free Lie algebra n on f_1..f_r with its Lyndon basis,
//! Verma modules, their contragredient duals and the sl2 Casimir.

mod free;
mod rootdata;
mod verma;

pub use free::{
    assoc_mul, bracket, commutator, expand_lyndon, is_lyndon, lyndon_words, standard_factorization,
    to_lyndon_coords, words_of_degree, AssocPoly, LieElement, Word,
};
pub use rootdata::{ColorMap, MultiDegree, RootData};
pub use verma::{
    act_e, act_f, casimir_sl2, e_matrix, e_matrix_contragredient, e_on_word, f_matrix,
    f_matrix_contragredient, h_matrix, TensorVector, VermaVector, WeightComponent,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("root data: {0}")]
    Shape(String),
    #[error("colorMap: {0}")]
    ColorMap(String),
    #[error("not a Lie element: {0}")]
    NotLie(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Basis of n_λ: the Lyndon words of multidegree λ.
pub fn lyndon_basis(rd: &RootData, k: &MultiDegree) -> Vec<Word> {
    debug_assert_eq!(rd.r(), k.r());
    lyndon_words(k)
}

/// Lyndon words of every nonzero multidegree d ≤ k, ordered by total
/// degree and then lexicographically. This fixes the wedge normal form.
pub fn lyndon_upto(k: &MultiDegree) -> Vec<Word> {
    let mut out: Vec<Word> = k.sub_degrees().iter().flat_map(lyndon_words).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}
