//! Exact-arithmetic kernel for amalgamated free probability.
//!
//! Noncrossing-partition combinatorics, operator-valued moment/cumulant
//! duality over finite-dimensional matrix algebras, R-transform calculus,
//! towers of conditional expectations and compression by projections.

pub mod acceptance;
pub mod config;
pub mod exactalg;
pub mod fixtures;
pub mod freemodel;
pub mod io;
pub mod error;
pub mod linalg;
pub mod multifunc;
pub mod nclattice;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod series;
pub mod towerops;

pub use error::{Error, Result};
pub use rational::Q;
