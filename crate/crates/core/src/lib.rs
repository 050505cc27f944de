#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
mod format;
pub mod harness;
pub mod model;
pub mod numerics;
pub mod paths;
pub mod smpp;
pub mod tmpp;

pub use error::{Error, Result};
