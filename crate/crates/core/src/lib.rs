//! Pricing of European lookback options in the Cox-Ross-Rubinstein model on
//! the Cheuk-Vorst one-state-variable lattice.
//!
//! The crate provides exact lattice prices, stable closed reductions to
//! binomial distribution functions for large `n`, Black-Scholes limits, the
//! `n^{-1/2}` and `n^{-1}` convergence coefficients, and a brute-force path
//! enumeration used as a reference.

pub mod asymptotics;
pub mod binomial_tail;
pub mod closed_form;
pub mod combinatorics;
pub mod error;
pub mod fixed_strike;
pub mod lattice;
pub mod model;
pub mod special;
pub mod summation;

pub use error::{Error, Result};
pub use model::{build_lattice, validate, LatticeParams, ModelParams};
