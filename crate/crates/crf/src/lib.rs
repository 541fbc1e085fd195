//! File formats, project storage, the `crf` command line and the HTTP API
//! on top of [`crf_core`].

pub mod api;
pub mod cli;
pub mod files;
pub mod store;
pub mod tabular;

pub use crf_core;
