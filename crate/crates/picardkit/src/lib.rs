//! File formats, caching, parallel counting and report generation around
//! `picardkit-core`. The `picardkit` binary is a thin layer over
//! [`pipeline`].

pub mod cache;
pub mod checkpoint;
pub mod error;
pub mod exec;
pub mod formats;
pub mod pipeline;
pub mod report;
pub mod tasks;

pub use error::CliError;
pub use report::Report;
