//! Symmetry-adapted Gram spectrahedra for invariant polynomials: exact
//! polynomial arithmetic, symmetric-group representation data, block
//! diagonalization, a small dense SDP solver, sum-of-squares certificate
//! extraction, closed-form family analyzers, and the term-normalized
//! inequality poset built on top of it all.

pub mod certify;
pub mod families;
pub mod gramspec;
pub mod hposet;
pub mod linalg;
pub mod poly;
pub mod repsn;
pub mod sdp;
pub mod survey;
pub mod symadapt;
pub mod symfunc;

pub use poly::{parse_poly, FloatPoly, Rat, SparsePoly};
pub use symfunc::{dominance, partitions_of, Partition};
