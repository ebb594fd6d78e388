//! Numerical verification of critical-line zeros of 1 + eta h(1-s)/h(s) for
//! a catalog of meromorphic h.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod friedrichs;
pub mod functional;
pub mod hcatalog;
pub mod quadrature;
pub mod report;
pub mod specfun;
pub mod zerofinder;

pub use error::{Error, Result};
