//! Finite-dimensional modular theory of standard subspaces.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bogoliubov;
pub mod cli;
pub mod dilation;
pub mod error;
pub mod helmholtz;
pub mod linalg;
pub mod qft1d;
pub mod quasiequiv;
pub mod realop;
pub mod report;
pub mod sampling;
pub mod stdspace;
pub mod suites;

pub use error::{Error, Result};
