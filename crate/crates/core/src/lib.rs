//! Debt dynamics under financial repression: stability conditions, investment
//! bounds, a two-layer bond-demand closure, transition thresholds and
//! set-valued inference for regime classification.

// Guards are written as `!(x > 0.0)` so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closure;
pub mod error;
pub mod extensions;
pub mod inference;
pub mod investment;
pub mod model;
pub mod scenario;
pub mod stats;
pub mod transition;

pub use error::{Error, Result};
