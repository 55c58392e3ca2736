//! Batch front end for `cohomsol-core`: run configurations, geometry files,
//! CSV reports and the `cohomsol` subcommands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builtin;
pub mod commands;
pub mod config;
pub mod error;
pub mod geometry_file;
pub mod output;

pub use error::{CliError, Result};
