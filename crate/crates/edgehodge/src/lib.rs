//! File formats, reports, verification suites and orchestration on top of
//! [`edgehodge_core`]. The `edgehodge` binary is a thin layer over this crate.

pub mod config;
pub mod error;
pub mod formats;
pub mod report;
pub mod run;
pub mod suites;

pub use config::RunConfig;
pub use error::Error;
pub use report::Report;
pub use run::run;
