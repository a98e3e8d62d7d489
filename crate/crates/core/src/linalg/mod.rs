//! Integer and rational linear algebra used by the homology computations.

pub mod rational;
pub mod snf;
pub mod sparse;

pub use snf::{smith_normal_form, smith_normal_form_dense, SmithForm};
pub use sparse::SparseMatrix;
