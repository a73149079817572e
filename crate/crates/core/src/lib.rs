//! Numerical laboratory for composition operators on Hardy spaces of the
//! disk and the bidisk.
//!
//! The crate builds explicit analytic self-maps of the unit disk (lens maps,
//! the cusp map, Blaschke products, outer weights and their compositions),
//! realizes the associated (weighted) composition operators as truncated
//! matrices on `H^2`, computes their singular values, and fits decay laws to
//! the resulting spectra. Two-variable symbols on the bidisk are handled
//! through structural models (tensor products, a Bergman-space factorization
//! for glued symbols, and a block-diagonal model for triangularly separated
//! symbols) that are cross-checked against a direct two-dimensional
//! truncation oracle.
//!
//! The `experiments` module exposes a registry of reproducible experiment
//! runs; the `opnum-lab` binary is a thin CLI over it.

pub mod bidisk;
pub mod capacity;
pub mod error;
pub mod experiments;
pub mod hardy1d;
pub mod rates;
pub mod symbols;

pub use error::{Error, Result};
