//! Unitary cyclotomic polynomials and unitary arithmetic in exact arithmetic.

pub mod error;
pub mod numth;
pub mod poly;
pub mod cyclo;
pub mod kron;
pub mod rama;
pub mod scan;
pub mod verify;

pub use error::{Error, Result};
pub use poly::IntPoly;
