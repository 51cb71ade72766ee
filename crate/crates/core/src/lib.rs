//! Finite projective and polar geometry over small Galois fields.

pub mod analysis;
pub mod error;
pub mod constructions;
pub mod covers;
pub mod fields;
pub mod hist;
pub mod io;
pub mod linalg;
pub mod polar;
pub mod projective;
pub mod suite;

pub use error::{Error, Result};
