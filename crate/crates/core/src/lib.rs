//! Computation and verification toolkit for U_q(sl(2,R)) at odd roots of
//! unity: explicit irreducible representations, the compact generator J
//! with its raising and lowering operators, and exact or numeric checks of
//! the algebraic identities relating them.

pub mod error;
pub mod matrix;
pub mod ncpoly;
pub mod poly;
pub mod reps;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
