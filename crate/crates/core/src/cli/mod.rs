//! Batch front end: config parsing, orchestration and file output.

mod config;
mod run;

pub use config::{parse_config, parse_number, RunConfig, SolutionChoice, Source};
pub use run::{emit_csv, format_csv, run_case, sample_circle, RunSummary, SolutionRun, CSV_HEADER};
