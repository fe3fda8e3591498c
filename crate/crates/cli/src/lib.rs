//! Command-line driver for the blockwise CUR library: decomposition of
//! stored matrices, error studies on Hilbert and synthetic low-rank
//! families, a thread-scaling benchmark and bound verification.

pub mod commands;
pub mod config;
pub mod error;
pub mod record;

pub use commands::run;
pub use config::{Cli, Command, RunConfig, THREADS_ENV};
pub use error::{CliError, CliResult};
pub use record::{read_records, write_records, ExperimentRecord, CSV_HEADER};
