//! The `moneygraph` command line and its HTTP session service.

pub mod commands;
pub mod service;
