//! Exact computer algebra for dg Lie algebras, their Chevalley–Eilenberg
//! complexes, locally finite ∞-modules, weak Loday–Pirashvili modules and the
//! induced Leibniz∞[1] algebras.

#![allow(clippy::needless_range_loop)]

pub mod ce;
pub mod cli;
pub mod dgla;
pub mod error;
pub mod fixtures;
pub mod graded;
pub mod io;
pub mod leibniz;
pub mod lfmod;
pub mod lp;
pub mod model;
pub mod scalar;
pub mod trees;

pub use error::{Error, Result, Violation};
pub use scalar::Q;
