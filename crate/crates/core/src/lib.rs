//! Discrete analytic functions on the integer lattice: exact tables, products,
//! realizations, operator truncations and the reproducing-kernel side.

// Index loops read closer to the recurrences they implement.
#![allow(clippy::needless_range_loop)]

pub mod basis;
pub mod error;
pub mod lattice;
pub mod numeric;
pub mod operator;
pub mod products;
pub mod realization;
pub mod schur;
pub mod verify;
pub mod zeta;

pub use error::{Error, Result};
