//! Numerical calculus for linear relations between finite-dimensional real or
//! complex Hilbert spaces, with a Hyers-Ulam stability engine.

pub mod cli;
pub mod corpus;
pub mod decomposition;
pub mod document;
pub mod error;
pub mod linalg;
pub mod probe;
pub mod relation;
pub mod report;
pub mod spectral;
pub mod stability;
pub mod subspace;

pub use document::RelationDocument;
pub use error::{Error, Result};
pub use linalg::{Field, Matrix, Vector, C64, DEFAULT_TOL};
pub use relation::{CosetElement, ImageMap, LinearRelation};
pub use subspace::{coset_distance, Subspace};
