//! Exact analysis of Boolean and real-valued functions on the slice
//! `{x in {0,1}^n : |x| = k}` and on the hypercube.
//!
//! Coordinates are 0-based throughout the library API; the JSON file formats
//! and the command line use 1-based coordinates.

pub mod combinatorics;
pub mod error;
pub mod extremal;
pub mod influence;
pub mod io;
pub mod junta;
pub mod noise;
pub mod rational;
pub mod slice;
pub mod transfer;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rational;
