//! Exact computations for strict toric 1-motives `u: Z^r -> G_m^d` over a
//! discretely valued field: geometric monodromy, Raynaud's decomposition,
//! `n`-torsion extension classes, Kato pairs, the algebra of the finite
//! logarithmic model and truncated Dieudonne monodromy data.

pub mod cocycles;
pub mod dieudonne;
pub mod error;
pub mod extension_classes;
pub mod local_field;
pub mod log_model;
pub mod motive;
pub mod sample;

pub use error::{Error, Result};
