//! Exact q-series laboratory: truncated Puiseux series over the rationals,
//! infinite products, minimal-model and lattice characters, a bivariate layer
//! for the quintuple product identity, and an identity checker.

pub mod bivariate;
pub mod characters;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod products;
pub mod rational;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use rational::ExactRational;
pub use series::{Comparison, PuiseuxSeries};
