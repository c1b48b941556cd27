//! Linear relations in finite-dimensional Krein spaces: adjoints, self-adjoint
//! extensions, boundary triples, Weyl families and similarity of triples.

pub mod boundary;
pub mod error;
pub mod extensions;
pub mod fixtures;
pub mod generate;
pub mod krein;
pub mod linalg;
pub mod relation;
pub mod similarity;
pub mod subspace;
pub mod tol;

pub use boundary::BoundaryTriple;
pub use error::{Error, Result};
pub use krein::KreinSpace;
pub use linalg::{CMat, CVec, C64};
pub use relation::Relation;
pub use subspace::Subspace;
pub use tol::Tol;
