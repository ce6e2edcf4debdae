//! Explicit linear algebra: Gram matrices of the standard forms, the sl(2)
//! action on binary forms, invariant-form solving and matrix realizations of
//! parameters.

mod dense;
mod forms;
mod intertwine;
mod realize;
mod scalar;
mod sl2;

use thiserror::Error;

pub use dense::{normalize_leading, DenseMatrix, Matrix, RowReducer};
pub use forms::{
    antidiag_j, conjugates_to_partition, conjugator_for_partition, even_compositions, find_nondegenerate, is_in_sp,
    kron_form, partition_j, preserved_forms, preserves, symplectic_j, w_plus, BilinearForm, FormSubspace,
    PermConvention, PermutationMap, Symmetry,
};
pub use intertwine::{commutant_dimension, intertwiners};
pub use realize::{
    invariant_forms, invariant_skew_forms, realize, GeneratorSet, Provenance, RealizedFactor, RealizedSl2,
    RealizedStructure,
};
pub use scalar::{format_exact, gaussian, rational, Approx, Exact, Scalar, TOLERANCE};
pub use sl2::{casimir, casimir_eigenvalue, invariant_form_sl2, sl2_sym_power_action, sym_power, Sl2Triple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("symplectic Gram matrix needs an even size >= 2, got {0}")]
    OddSize(usize),
    #[error("partition part {0} is not a positive even integer")]
    OddPart(usize),
    #[error("empty partition")]
    EmptyPartition,
    #[error("expected a {expected}x{expected} matrix, found {}x{}", found.0, found.1)]
    ShapeMismatch { expected: usize, found: (usize, usize) },
    #[error("form is not skew-symmetric and nondegenerate")]
    NotSymplectic,
    #[error("images do not form a permutation")]
    NotAPermutation,
    #[error("no conjugating permutation found (internal error)")]
    ConjugatorNotFound,
    #[error("expected a {expected}-dimensional form space, found {found} (internal error)")]
    FormSpaceDimension { expected: usize, found: usize },
    #[error("label `{0}` has no finite-group model")]
    MissingModel(String),
    #[error("segment {0} carries a nonzero twist and cannot be realized")]
    TwistedSegment(String),
    #[error("labels `{0}` and `{1}` both use a one-element model and would realize identically")]
    IndistinguishableModels(String, String),
    #[error("labels `{0}` and `{1}` are dual but their models live on different groups")]
    ModelGroupMismatch(String, String),
    #[error(transparent)]
    Catalog(#[from] crate::groups::CatalogError),
}
