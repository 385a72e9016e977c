//! Polynomial invariants for the adjoint action of a unipotent radical on
//! the nilradical of a parabolic subalgebra in types B, C and D.

pub mod base;
pub mod error;
pub mod expanded;
pub mod invariants;
pub mod linalg;
pub mod parabolic;
pub mod poly;
pub mod properties;
pub mod report;
pub mod roots;
pub mod verify;

pub use error::{Error, Result};
