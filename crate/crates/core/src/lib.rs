//! Information geometry of states and channels, eigenrelevance spectra, and
//! renormalization flows obtained by moment matching.
//!
//! The crate is organised bottom-up: [`geometry`] holds the metric
//! superoperators on density matrices, [`channels`] the relevance machinery
//! built on them, and [`particle`], [`field`] and [`gaussian`] the classical
//! and phase-space models.

pub mod channels;
pub mod error;
pub mod field;
pub mod fock;
pub mod gaussian;
pub mod geometry;
pub mod keyvalue;
pub mod linalg;
pub mod particle;
pub mod quadrature;
pub mod random;
pub mod suite;

pub use error::{Error, Result};
