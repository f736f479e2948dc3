use std::path::{Path, PathBuf};
use submersion_core::GeometryError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input. `field` names the first offending entry; `line` and
    /// `column` are set for syntax errors.
    #[error("{}", parse_message(.path, .line, .column, .field, .message))]
    Parse {
        path: Option<PathBuf>,
        line: Option<usize>,
        column: Option<usize>,
        field: Option<String>,
        message: String,
    },

    #[error("{0}")]
    Geometry(#[from] GeometryError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),
}

fn parse_message(
    path: &Option<PathBuf>,
    line: &Option<usize>,
    column: &Option<usize>,
    field: &Option<String>,
    message: &str,
) -> String {
    let mut out = String::new();
    if let Some(p) = path {
        out.push_str(&format!("{}: ", p.display()));
    }
    if let (Some(l), Some(c)) = (line, column) {
        out.push_str(&format!("line {l}, column {c}: "));
    }
    if let Some(f) = field {
        out.push_str(&format!("{f}: "));
    }
    out.push_str(message);
    out
}

impl CliError {
    pub fn field(name: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: None,
            line: None,
            column: None,
            field: Some(name.into()),
            message: message.into(),
        }
    }

    pub fn from_json(e: serde_json::Error) -> Self {
        CliError::Parse {
            path: None,
            line: Some(e.line()),
            column: Some(e.column()),
            field: None,
            message: strip_position(&e.to_string()),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn with_path(self, p: &Path) -> Self {
        match self {
            CliError::Parse {
                line,
                column,
                field,
                message,
                ..
            } => CliError::Parse {
                path: Some(p.to_path_buf()),
                line,
                column,
                field,
                message,
            },
            CliError::Geometry(e) if !e.is_numeric() => CliError::Parse {
                path: Some(p.to_path_buf()),
                line: None,
                column: None,
                field: None,
                message: e.to_string(),
            },
            other => other,
        }
    }

    /// 3 for numerical breakdowns, 2 for every input problem.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Geometry(e) if e.is_numeric() => 3,
            _ => 2,
        }
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}
