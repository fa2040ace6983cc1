//! JSON front end for `giwa-core`: input specs, reports, worked examples.

pub mod commands;
pub mod error;
pub mod examples;
pub mod factor;
pub mod spec;

pub use error::{Error, Result};
