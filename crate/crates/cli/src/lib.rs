//! Configuration, dispatch and reporting for the `signlab` command-line tool.

pub mod config;
pub mod error;
pub mod report;
pub mod results;
pub mod run;

pub use config::{Command, ExperimentConfig, Format, OutputSpec};
pub use error::{CliError, EXIT_ACCEPTANCE, EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME};
pub use report::{emit_report, ClaimRow, Report, Verdict};
pub use results::ResultDoc;
pub use run::{run, write_atomic, write_outputs, RunManifest, RunOutcome};
