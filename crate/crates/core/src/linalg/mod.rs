//! Exact linear algebra over the rationals.
//!
//! Subspaces are stored by their reduced row-echelon basis, so two
//! [`Subspace`] values are equal exactly when their fields are equal. All
//! operations here are pure.

mod matrix;
mod quotient;
mod subspace;

pub use matrix::Matrix;
pub use quotient::{induced_map, quotient_dim, QuotientBasis};
pub use subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate {index} out of range for ambient dimension {bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("the smaller space is not contained in the larger one")]
    NotASubspace,
    #[error("the map does not descend to the quotients")]
    MapDoesNotDescend,
}

/// Reduced row-echelon form of `m`, zero rows kept at the bottom.
pub fn rref(m: &Matrix) -> Matrix {
    m.rref()
}

/// `{v : m·v = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    Subspace::kernel_of(m)
}

/// Column space of `m`.
pub fn image(m: &Matrix) -> Subspace {
    Subspace::spanned_by(&m.transpose())
}

pub fn intersect(u: &Subspace, v: &Subspace) -> Result<Subspace, LinalgError> {
    u.intersect(v)
}

pub fn sum(u: &Subspace, v: &Subspace) -> Result<Subspace, LinalgError> {
    u.sum(v)
}

pub fn project(s: &Subspace, coords: &[usize]) -> Result<Subspace, LinalgError> {
    s.project(coords)
}

pub fn preimage(m: &Matrix, s: &Subspace) -> Result<Subspace, LinalgError> {
    s.preimage(m)
}

/// True iff `v ⊆ u`.
pub fn contains(u: &Subspace, v: &Subspace) -> Result<bool, LinalgError> {
    u.contains(v)
}

pub fn map_subspace(m: &Matrix, s: &Subspace) -> Result<Subspace, LinalgError> {
    s.map(m)
}
