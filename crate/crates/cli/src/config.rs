use crate::error::CliError;
use std::path::PathBuf;

pub const DEFAULT_SEED: u64 = 0x05ee_d1ab;
pub const SEED_VAR: &str = "SUBMERSION_LAB_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Adapt,
    Oracle,
    Identities,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Adapt => "adapt",
            Command::Oracle => "oracle",
            Command::Identities => "identities",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Example(String),
    Spec(PathBuf),
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub source: Source,
    pub n: Option<usize>,
    pub c: Option<f64>,
    pub h: f64,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command, source: Source) -> Self {
        Self {
            command,
            source,
            n: None,
            c: None,
            h: submersion_core::numgeom::DEFAULT_H,
            tol: None,
            out: None,
            format: Format::Text,
            seed: DEFAULT_SEED,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(CliError::Usage(format!("--h must be positive, got {}", self.h)));
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
            }
        }
        if let Some(c) = self.c {
            if !c.is_finite() {
                return Err(CliError::Usage("--c must be finite".into()));
            }
        }
        if let Some(n) = self.n {
            if n < 2 {
                return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
            }
        }
        Ok(())
    }

    /// Tolerance for finite-difference quantities, `h` unless overridden.
    pub fn tol_grid(&self) -> f64 {
        self.tol.unwrap_or(self.h)
    }

    /// Tolerance for exact algebra on spec data, before scaling.
    pub fn tol_algebraic(&self) -> f64 {
        self.tol.unwrap_or(1e-9)
    }
}

/// Reads the seed from `SUBMERSION_LAB_SEED`, falling back to the default.
pub fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_VAR} must be an unsigned integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}
