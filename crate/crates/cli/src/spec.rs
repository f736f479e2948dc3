//! Spec files: integrability data, optional jet blocks and base Ricci.
//!
//! All indices in the file are 1-based. `f` lists `[i, j, k, value]` for
//! `f^k_ij` and `d_f` lists `[a, i, j, k, value]` for `e_a(f^k_ij)`; unlisted
//! entries are zero.

use crate::error::CliError;
use crate::numfmt::{nums, to_json, Num};
use ndarray::{Array1, Array2, Array3, Array4};
use serde::{Deserialize, Serialize};
use std::path::Path;
use submersion_core::{BaseRicci, IntegrabilityData, IntegrabilityJet};

pub const SCHEMA_VERSION: u32 = 1;

/// `[i, j, k, value]` for `f^k_ij`.
pub type FEntry = (usize, usize, usize, Num);
/// `[a, i, j, k, value]` for `e_a(f^k_ij)`.
pub type DfEntry = (usize, usize, usize, usize, Num);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub schema_version: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Num>,
    pub kappa: Vec<Num>,
    pub sigma: Vec<Vec<Num>>,
    #[serde(default)]
    pub f: Vec<FEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ricci: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_kappa: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_sigma: Option<Vec<Vec<Vec<Num>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_f: Option<Vec<DfEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dd_kappa_diag: Option<Vec<Vec<Num>>>,
}

/// Validated contents of a spec file.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSpec {
    pub data: IntegrabilityData<f64>,
    /// Present when any derivative block was given; missing blocks are zero.
    pub jet: Option<IntegrabilityJet<f64>>,
    pub ricci: Option<BaseRicci<f64>>,
    pub c: Option<f64>,
}

impl ParsedSpec {
    pub fn jet_or_constant(&self) -> IntegrabilityJet<f64> {
        self.jet.clone().unwrap_or_else(|| IntegrabilityJet::constant(self.data.clone()))
    }
}

pub fn parse_spec(path: &Path) -> Result<ParsedSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_spec_str(&text).map_err(|e| e.with_path(path))
}

pub fn parse_spec_str(text: &str) -> Result<ParsedSpec, CliError> {
    let raw: SpecFile = serde_json::from_str(text).map_err(CliError::from_json)?;
    raw.validate()
}

fn field(name: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::field(name, message)
}

fn vector(name: &str, v: &[Num], len: usize) -> Result<Array1<f64>, CliError> {
    if v.len() != len {
        return Err(field(name, format!("expected {len} entries, found {}", v.len())));
    }
    Ok(v.iter().map(|x| x.0).collect())
}

fn matrix(name: &str, rows: &[Vec<Num>], r: usize, c: usize) -> Result<Array2<f64>, CliError> {
    if rows.len() != r {
        return Err(field(name, format!("expected {r} rows, found {}", rows.len())));
    }
    let mut m = Array2::zeros((r, c));
    for (i, row) in rows.iter().enumerate() {
        let row = vector(&format!("{name}[{}]", i + 1), row, c)?;
        m.row_mut(i).assign(&row);
    }
    Ok(m)
}

fn index(name: &str, what: &str, v: usize, n: usize) -> Result<usize, CliError> {
    if v == 0 || v > n {
        return Err(field(name, format!("index {what} = {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

fn check_finite(name: &str, values: impl IntoIterator<Item = f64>) -> Result<(), CliError> {
    match values.into_iter().position(|v| !v.is_finite()) {
        Some(pos) => Err(field(name, format!("entry {} is not finite", pos + 1))),
        None => Ok(()),
    }
}

impl SpecFile {
    pub fn validate(&self) -> Result<ParsedSpec, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(field(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        let n = self.n;
        if n == 0 {
            return Err(field("n", "must be at least 1"));
        }
        if let Some(c) = self.c {
            check_finite("c", [c.0])?;
        }
        let kappa = vector("kappa", &self.kappa, n)?;
        check_finite("kappa", kappa.iter().copied())?;
        let sigma = matrix("sigma", &self.sigma, n, n)?;
        check_finite("sigma", sigma.iter().copied())?;

        let mut f = Array3::zeros((n, n, n));
        let mut seen = std::collections::HashSet::new();
        for (pos, &(i, j, k, v)) in self.f.iter().enumerate() {
            let name = format!("f[{}]", pos + 1);
            let idx = (index(&name, "i", i, n)?, index(&name, "j", j, n)?, index(&name, "k", k, n)?);
            check_finite(&name, [v.0])?;
            if !seen.insert(idx) {
                return Err(field(name, format!("duplicate entry for f^{k}_{i}{j}")));
            }
            f[[idx.2, idx.0, idx.1]] = v.0;
        }
        let data = IntegrabilityData::new(n, f, kappa, sigma)?;

        let ricci = match &self.ricci {
            Some(rows) => {
                let m = matrix("ricci", rows, n, n)?;
                check_finite("ricci", m.iter().copied())?;
                Some(BaseRicci::new(m)?)
            }
            None => None,
        };

        let has_jet = self.d_kappa.is_some()
            || self.d_sigma.is_some()
            || self.d_f.is_some()
            || self.dd_kappa_diag.is_some();
        let jet = if has_jet { Some(self.jet(&data)?) } else { None };

        Ok(ParsedSpec {
            data,
            jet,
            ricci,
            c: self.c.map(|c| c.0),
        })
    }

    fn jet(&self, data: &IntegrabilityData<f64>) -> Result<IntegrabilityJet<f64>, CliError> {
        let n = self.n;
        let d_kappa = match &self.d_kappa {
            Some(rows) => matrix("d_kappa", rows, n + 1, n)?,
            None => Array2::zeros((n + 1, n)),
        };
        check_finite("d_kappa", d_kappa.iter().copied())?;
        let dd = match &self.dd_kappa_diag {
            Some(rows) => matrix("dd_kappa_diag", rows, n + 1, n)?,
            None => Array2::zeros((n + 1, n)),
        };
        check_finite("dd_kappa_diag", dd.iter().copied())?;
        let mut d_sigma = Array3::zeros((n + 1, n, n));
        if let Some(blocks) = &self.d_sigma {
            if blocks.len() != n + 1 {
                return Err(field("d_sigma", format!("expected {} blocks, found {}", n + 1, blocks.len())));
            }
            for (a, block) in blocks.iter().enumerate() {
                let name = format!("d_sigma[{}]", a + 1);
                let m = matrix(&name, block, n, n)?;
                check_finite(&name, m.iter().copied())?;
                d_sigma.index_axis_mut(ndarray::Axis(0), a).assign(&m);
            }
        }
        let mut d_f = Array4::zeros((n + 1, n, n, n));
        let mut seen = std::collections::HashSet::new();
        for (pos, &(a, i, j, k, v)) in self.d_f.iter().flatten().enumerate() {
            let name = format!("d_f[{}]", pos + 1);
            let idx = (
                index(&name, "a", a, n + 1)?,
                index(&name, "i", i, n)?,
                index(&name, "j", j, n)?,
                index(&name, "k", k, n)?,
            );
            check_finite(&name, [v.0])?;
            if !seen.insert(idx) {
                return Err(field(name, format!("duplicate entry for e_{a}(f^{k}_{i}{j})")));
            }
            d_f[[idx.0, idx.3, idx.1, idx.2]] = v.0;
        }
        Ok(IntegrabilityJet::new(data.clone(), d_f, d_kappa, d_sigma, dd)?)
    }

    /// Spec listing every nonzero entry of `data`, the jet blocks if given.
    pub fn from_parts(
        data: &IntegrabilityData<f64>,
        jet: Option<&IntegrabilityJet<f64>>,
        ricci: Option<&BaseRicci<f64>>,
        c: Option<f64>,
    ) -> Self {
        let n = data.n();
        let rows = |m: &Array2<f64>| m.rows().into_iter().map(|r| nums(r.iter().copied())).collect::<Vec<_>>();
        let mut f = Vec::new();
        for ((k, i, j), &v) in data.f().indexed_iter() {
            if v != 0.0 || v.is_sign_negative() {
                f.push((i + 1, j + 1, k + 1, Num(v)));
            }
        }
        f.sort_by_key(|e| (e.0, e.1, e.2));
        let mut spec = SpecFile {
            schema_version: SCHEMA_VERSION,
            n,
            c: c.map(Num),
            kappa: nums(data.kappa().iter().copied()),
            sigma: rows(data.sigma()),
            f,
            ricci: ricci.map(|r| rows(r.values())),
            d_kappa: None,
            d_sigma: None,
            d_f: None,
            dd_kappa_diag: None,
        };
        if let Some(jet) = jet {
            spec.d_kappa = Some(rows(jet.d_kappa()));
            spec.dd_kappa_diag = Some(rows(jet.dd_kappa_diag()));
            spec.d_sigma = Some(
                jet.d_sigma()
                    .outer_iter()
                    .map(|m| rows(&m.to_owned()))
                    .collect(),
            );
            let mut d_f = Vec::new();
            for ((a, k, i, j), &v) in jet.d_f().indexed_iter() {
                if v != 0.0 || v.is_sign_negative() {
                    d_f.push((a + 1, i + 1, j + 1, k + 1, Num(v)));
                }
            }
            d_f.sort_by_key(|e| (e.0, e.1, e.2, e.3));
            spec.d_f = Some(d_f);
        }
        spec
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}
