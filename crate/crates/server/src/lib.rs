//! HTTP service and command line for `ai-footprint`.

pub mod api;
pub mod cli;
pub mod ops;
