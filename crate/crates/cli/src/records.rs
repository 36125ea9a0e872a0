//! Scan records and their JSON/CSV emission.

use serde::{Deserialize, Serialize};
use subnormal_core::moments::RootsSummary;
use subnormal_core::{CaseBranch, NumericMode, Verdict, Witness};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// A certified failure of complete monotonicity at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessSummary {
    /// `D_m(n) < 0`, sign decided in exact arithmetic.
    NegativeDifference { m: u64, n: u64, value: f64 },
    /// `w(t) < 0` for the representing density.
    NegativeDensity { t: f64, value: f64 },
}

impl From<&Witness> for WitnessSummary {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::NegativeDifference { m, n, .. } => {
                WitnessSummary::NegativeDifference { m: *m, n: *n, value: w.value_f64() }
            }
            Witness::NegativeDensity { t, value } => WitnessSummary::NegativeDensity { t: *t, value: *value },
        }
    }
}

/// One grid point of a region scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub s1: String,
    pub s2: String,
    pub gamma: String,
    pub disc: String,
    pub branch: CaseBranch,
    pub subnormal: bool,
    pub rule_fired: String,
    pub boundary_flag: bool,
    pub roots: RootsSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSummary>,
}

impl ScanRecord {
    pub fn from_verdict(v: &Verdict, witness: Option<WitnessSummary>) -> Self {
        let p = v.params();
        ScanRecord {
            s1: p.s1().to_string(),
            s2: p.s2().to_string(),
            gamma: p.gamma().to_string(),
            disc: p.disc().to_string(),
            branch: v.branch,
            subnormal: v.subnormal,
            rule_fired: v.rule_fired.as_str().to_string(),
            boundary_flag: v.boundary_flag,
            roots: v.roots.summary(),
            witness,
        }
    }

    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            s1: self.s1.clone(),
            s2: self.s2.clone(),
            gamma: self.gamma.clone(),
            disc: self.disc.clone(),
            branch: self.branch,
            subnormal: self.subnormal,
            rule_fired: self.rule_fired.clone(),
        }
    }
}

/// The CSV projection of a record; field order is the column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub s1: String,
    pub s2: String,
    pub gamma: String,
    pub disc: String,
    pub branch: CaseBranch,
    pub subnormal: bool,
    pub rule_fired: String,
}

pub const CSV_COLUMNS: [&str; 7] = ["s1", "s2", "gamma", "disc", "branch", "subnormal", "rule_fired"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanDocument {
    pub schema_version: u32,
    pub mode: NumericMode,
    pub m_cap: u64,
    pub n_cap: u64,
    pub witnesses: bool,
    pub records: Vec<ScanRecord>,
}

impl ScanDocument {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| CliError::Serialize(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ScanDocument =
            serde_json::from_str(text).map_err(|e| CliError::config("input", format!("bad scan JSON: {e}")))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(CliError::config(
                "schema_version",
                format!("expected {SCHEMA_VERSION}, found {}", doc.schema_version),
            ));
        }
        Ok(doc)
    }
}

pub fn to_csv(records: &[ScanRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r.csv_row()).map_err(|e| CliError::Serialize(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Serialize(e.to_string()))
}

pub fn from_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(|e| CliError::config("input", e.to_string()))?;
    if headers.iter().ne(CSV_COLUMNS) {
        return Err(CliError::config("input", format!("unexpected CSV header {headers:?}")));
    }
    r.deserialize().map(|row| row.map_err(|e| CliError::config("input", e.to_string()))).collect()
}
