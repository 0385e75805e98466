//! Library surface of the batch front end; the binary in `main.rs` is a
//! thin argument-parsing shell over these modules, and the acceptance test
//! target drives the same code paths.

pub mod checks;
pub mod commands;
pub mod config;
pub mod error;
pub mod gfmt;
