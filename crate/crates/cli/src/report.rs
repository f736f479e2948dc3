//! Report documents: the wire form of a residual report.

use crate::numfmt::{nums, to_json, Num};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use submersion_core::{ResidualReport, Verdict};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<Num>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Block {
    pub shape: Vec<usize>,
    pub values: Vec<Num>,
}

impl Block {
    pub fn new(shape: Vec<usize>, values: impl IntoIterator<Item = f64>) -> Self {
        Self {
            shape,
            values: nums(values),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdaptedOutput {
    pub k: Vec<Vec<Num>>,
    pub kappa_out: Vec<Num>,
    pub sigma_out: Vec<Vec<Num>>,
    pub steps: usize,
    pub stages: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Inputs,
    pub residuals: BTreeMap<String, Block>,
    pub maxima: BTreeMap<String, Num>,
    pub tolerances: BTreeMap<String, Num>,
    pub pass: BTreeMap<String, bool>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    /// Informational values that are not checked against a tolerance.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub quantities: BTreeMap<String, Block>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adapted: Option<AdaptedOutput>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Everything a command produces.
#[derive(Debug, Clone)]
pub struct Run {
    pub report: ResidualReport,
    pub inputs: Inputs,
    pub quantities: BTreeMap<String, Block>,
    pub adapted: Option<AdaptedOutput>,
    pub notes: Vec<String>,
}

impl Run {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn document(&self) -> ReportDocument {
        let mut doc = ReportDocument {
            schema_version: REPORT_SCHEMA_VERSION,
            command: self.report.metadata.command.clone(),
            inputs: self.inputs.clone(),
            residuals: BTreeMap::new(),
            maxima: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            pass: BTreeMap::new(),
            passed: self.passed(),
            verdict: self.report.verdict.map(|v| v.as_str().to_string()),
            quantities: self.quantities.clone(),
            adapted: self.adapted.clone(),
            notes: self.notes.clone(),
        };
        for fam in &self.report.families {
            let name = fam.name.clone();
            doc.residuals
                .insert(name.clone(), Block::new(fam.shape.clone(), fam.values.iter().copied()));
            doc.maxima.insert(name.clone(), Num(fam.max_abs()));
            doc.tolerances.insert(name.clone(), Num(fam.tolerance));
            doc.pass.insert(name, fam.pass());
        }
        doc
    }
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let i = &self.inputs;
        let mut head = format!("submersion-lab {}", self.command);
        if let Some(e) = &i.example {
            head.push_str(&format!("  example={e}"));
        }
        if let Some(s) = &i.spec {
            head.push_str(&format!("  spec={s}"));
        }
        head.push_str(&format!("  n={}", i.n));
        if let Some(c) = i.c {
            head.push_str(&format!("  c={}", c.0));
        }
        if let Some(h) = i.h {
            head.push_str(&format!("  h={:e}", h.0));
        }
        if let Some(s) = i.seed {
            head.push_str(&format!("  seed={s}"));
        }
        out.push_str(&head);
        out.push('\n');
        let width = self.maxima.keys().map(String::len).max().unwrap_or(0);
        for (name, max) in &self.maxima {
            let ok = self.pass.get(name).copied().unwrap_or(false);
            let tol = self.tolerances.get(name).map_or(f64::NAN, |t| t.0);
            out.push_str(&format!(
                "  {} {name:<width$}  max {:>11.4e}  tol {:.1e}\n",
                if ok { "PASS" } else { "FAIL" },
                max.0,
                tol
            ));
        }
        if let Some(q) = self.quantities.get("tension") {
            out.push_str(&format!("  tension {}\n", fmt_block(q)));
        }
        if let Some(a) = &self.adapted {
            out.push_str(&format!("  steps {} of {} stages\n", a.steps, a.stages));
            out.push_str(&format!("  kappa' {}\n", fmt_row(&a.kappa_out)));
            out.push_str("  K\n");
            for row in &a.k {
                out.push_str(&format!("    {}\n", fmt_row(row)));
            }
            out.push_str("  sigma'\n");
            for row in &a.sigma_out {
                out.push_str(&format!("    {}\n", fmt_row(row)));
            }
        }
        for note in &self.notes {
            out.push_str(&format!("  note: {note}\n"));
        }
        if let Some(v) = self.verdict.as_deref().and_then(Verdict::parse) {
            out.push_str(&format!("verdict: {} ({})\n", v.as_str(), describe(v)));
        }
        out.push_str(if self.passed { "result: PASS\n" } else { "result: FAIL\n" });
        out
    }
}

fn describe(v: Verdict) -> &'static str {
    match v {
        Verdict::Harmonic => "harmonic, hence biharmonic",
        Verdict::BiharmonicNontrivialCandidate => "biharmonic but not harmonic",
        Verdict::NotBiharmonic => "not biharmonic, and not harmonic",
        Verdict::InconsistentInputs => "curvature identities fail for the given c",
    }
}

fn fmt_row(row: &[Num]) -> String {
    let cells: Vec<String> = row.iter().map(|v| format!("{:>10.6}", v.0)).collect();
    format!("[{}]", cells.join(" "))
}

fn fmt_block(b: &Block) -> String {
    match b.shape.as_slice() {
        [_, cols] if *cols > 0 => b
            .values
            .chunks(*cols)
            .map(fmt_row)
            .collect::<Vec<_>>()
            .join(" "),
        _ => fmt_row(&b.values),
    }
}
