//! Graph ℤ_ℓ-towers: multigraphs, voltage covers, characteristic power
//! series and their Iwasawa invariants.

#![no_std]

extern crate alloc;

pub mod cyclotomic;
pub mod error;
pub mod graph;
pub mod group;
pub mod iwasawa;
pub mod lfunction;
pub mod matrix;
pub mod ring;
pub mod series;
pub mod voltage;

pub use error::{Error, Result};
