//! Named residual families with tolerances and pass flags.

use std::fmt;

/// Overall classification of a checked submersion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Harmonic,
    BiharmonicNontrivialCandidate,
    NotBiharmonic,
    InconsistentInputs,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Harmonic => "harmonic",
            Verdict::BiharmonicNontrivialCandidate => "biharmonic_nontrivial_candidate",
            Verdict::NotBiharmonic => "not_biharmonic",
            Verdict::InconsistentInputs => "inconsistent_inputs",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Verdict::Harmonic,
            Verdict::BiharmonicNontrivialCandidate,
            Verdict::NotBiharmonic,
            Verdict::InconsistentInputs,
        ]
        .into_iter()
        .find(|v| v.as_str() == s)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One residual family, stored flat in row-major order of `shape`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualFamily {
    pub name: String,
    pub shape: Vec<usize>,
    pub values: Vec<f64>,
    pub tolerance: f64,
}

impl ResidualFamily {
    /// Largest `|value|`; NaN if any value is NaN.
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for v in &self.values {
            if v.is_nan() {
                return f64::NAN;
            }
            m = m.max(v.abs());
        }
        m
    }

    /// `max |value| <= tolerance`; NaN never passes.
    pub fn pass(&self) -> bool {
        self.max_abs() <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportMetadata {
    pub command: String,
    pub example: Option<String>,
    pub n: usize,
    pub c: Option<f64>,
    pub h: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResidualReport {
    pub metadata: ReportMetadata,
    pub families: Vec<ResidualFamily>,
    pub verdict: Option<Verdict>,
}

impl ResidualReport {
    pub fn new(metadata: ReportMetadata) -> Self {
        Self {
            metadata,
            families: Vec::new(),
            verdict: None,
        }
    }

    pub fn push(
        &mut self,
        name: impl Into<String>,
        shape: Vec<usize>,
        values: impl IntoIterator<Item = f64>,
        tolerance: f64,
    ) -> &mut Self {
        let values: Vec<f64> = values.into_iter().collect();
        debug_assert_eq!(shape.iter().product::<usize>(), values.len());
        self.families.push(ResidualFamily {
            name: name.into(),
            shape,
            values,
            tolerance,
        });
        self
    }

    pub fn push_scalar(&mut self, name: impl Into<String>, value: f64, tolerance: f64) -> &mut Self {
        self.push(name, vec![], [value], tolerance)
    }

    pub fn family(&self, name: &str) -> Option<&ResidualFamily> {
        self.families.iter().find(|f| f.name == name)
    }

    pub fn passed(&self) -> bool {
        self.families.iter().all(ResidualFamily::pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ResidualFamily> {
        self.families.iter().filter(|f| !f.pass())
    }
}
