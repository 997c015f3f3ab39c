//! Exact computations with quiver representations over the rationals.
//!
//! A [`quiver::Representation`] assigns a finite-dimensional rational vector
//! space to every vertex of a diagram and a matrix to every edge. Regular
//! formulas over the diagram's language ([`formula`]) are interpreted as
//! definable subspaces ([`interp`]), which in turn give the objects and
//! morphisms of the abelian category generated by the representation
//! ([`category`]). [`endo`] computes the commutant algebra of a finite
//! subdiagram and its action on definable objects.

pub mod category;
pub mod endo;
pub mod formula;
pub mod interp;
pub mod linalg;
pub mod quiver;
pub mod rational;

pub use linalg::{LinalgError, Matrix, QuotientBasis, Subspace};
pub use quiver::{EdgeId, Quiver, QuiverError, Representation, Subdiagram, VertexId};
pub use rational::Rational;
