//! Cell complexes, integral homology and Toda flows attached to split real
//! Cartan subgroups of simple Lie algebras.
//!
//! The crate is organized bottom-up:
//!
//! * [`rootsys`] builds Cartan matrices and root systems.
//! * [`weyl`] enumerates Weyl groups with lengths and parabolic cosets.
//! * [`diagram`] implements colored diagrams and their boundary and Weyl actions.
//! * [`complex`] assembles the cellular chain complex of the compactification
//!   and computes its homology and rational characters.
//! * [`linalg`] holds the sparse Smith normal form and exact rational algebra.
//! * [`atlas`] classifies chart points and glues charts across chambers.
//! * [`toda`] integrates the signed Toda lattice and detects blow-ups.

pub mod atlas;
pub mod complex;
pub mod diagram;
pub mod error;
pub mod linalg;
pub mod rootsys;
pub mod toda;
pub mod weyl;

pub use error::{Error, Result};
