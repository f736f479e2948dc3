//! Command-line front end: spec files, reports and the four subcommands.

pub mod commands;
pub mod config;
pub mod error;
pub mod numfmt;
pub mod report;
pub mod spec;

pub use commands::run;
pub use config::{Command, Format, RunConfig, Source};
pub use error::CliError;
pub use report::{ReportDocument, Run};
pub use spec::{parse_spec, parse_spec_str, ParsedSpec, SpecFile};

/// Renders a finished run in the requested format.
pub fn render(run: &Run, format: Format) -> String {
    let doc = run.document();
    match format {
        Format::Text => doc.to_text(),
        Format::Json => doc.to_json(),
    }
}
