//! Constructive spectral toolkit for Riesz spaces with strong unit: located
//! suprema, cover certificates, lazily chosen spectrum points, ε-nets, and an
//! exact operator calculus for commuting rational symmetric matrices.

pub mod cli;
pub mod error;
pub mod falgebra;
pub mod gen;
pub mod instances;
pub mod io;
pub mod lattice;
pub mod numerics;
pub mod selftest;
pub mod riesz;
pub mod spectrum;

pub use error::{Error, Result};
