//! File formats, p-values and subcommand implementations around
//! `anchorradar-core`.

// Range checks are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod formats;
pub mod significance;
