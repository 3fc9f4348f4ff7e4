//! Exact homotopy transfer of dg Lie structures over the rationals.

pub mod bv;
pub mod complex;
pub mod deformation;
pub mod dglie;
pub mod error;
pub mod fixtures;
pub mod freelie;
pub mod graded;
pub mod linalg;
pub mod scalar;
pub mod symco;
pub mod tensor;
pub mod transfer;

pub use error::{Error, Result};
pub use scalar::Rational;
