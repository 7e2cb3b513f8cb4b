// NaN-rejecting range checks are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod cs;
pub mod error;
pub mod landscape;
pub mod mitigation;
pub mod ncm;
pub mod optimize;
pub mod parallel;
pub mod sim;

pub use error::{Error, Result};
