//! Stored reference cases: roots, verdicts and difference witnesses for
//! six parameter points, checked against a fresh computation.

use std::path::{Path, PathBuf};

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use subnormal_core::cm::{finite_difference, DiffTable};
use subnormal_core::moments::RootJson;
use subnormal_core::{
    classify_theorem, is_completely_monotone_upto, roots_of, CaseBranch, ModuleParams, RootBranch, Scalar, Witness,
};

use crate::error::{CliError, Result};
use crate::records::SCHEMA_VERSION;
use crate::scan::classify;

pub const GOLDEN_M_CAP: u64 = 120;
pub const GOLDEN_N_CAP: u64 = 120;

/// The stored file, compiled in so `golden` runs without a path.
pub const BUNDLED: &str = include_str!("../golden/reference_cases.json");

pub const REFERENCE_CASES: [(&str, &str); 6] =
    [("15", "10"), ("1", "1"), ("3/2", "25"), ("6", "6"), ("8", "12"), ("2", "2")];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessPosition {
    pub m: u64,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCase {
    pub s1: String,
    pub s2: String,
    pub root_branch: RootBranch,
    pub alpha1: RootJson,
    pub alpha2: RootJson,
    pub branch: CaseBranch,
    pub subnormal: bool,
    pub rule_fired: String,
    pub boundary_flag: bool,
    /// First negative `D_m(n)` in lexicographic order within the caps.
    pub witness: Option<WitnessPosition>,
}

impl GoldenCase {
    pub fn label(&self) -> String {
        format!("({}, {})", self.s1, self.s2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenFile {
    pub schema_version: u32,
    pub m_cap: u64,
    pub n_cap: u64,
    pub cases: Vec<GoldenCase>,
}

impl GoldenFile {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let file: GoldenFile = serde_json::from_str(text)
            .map_err(|e| CliError::GoldenMalformed { path: path.to_path_buf(), reason: e.to_string() })?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::GoldenMalformed {
                path: path.to_path_buf(),
                reason: format!("schema_version {} (expected {SCHEMA_VERSION})", file.schema_version),
            });
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        match std::fs::read_to_string(path) {
            Ok(text) => Self::parse(&text, path),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                Err(CliError::GoldenMissing { path: path.to_path_buf() })
            }
            Err(source) => Err(CliError::Io { path: path.to_path_buf(), source }),
        }
    }

    pub fn bundled() -> Result<Self> {
        Self::parse(BUNDLED, &PathBuf::from("<bundled>"))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Serialize(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

fn params_of(s1: &str, s2: &str) -> Result<ModuleParams> {
    let mode = subnormal_core::NumericMode::Rational;
    Ok(ModuleParams::new(Scalar::parse(s1, mode)?, Scalar::parse(s2, mode)?)?)
}

/// Recomputes one case from scratch.
pub fn derive_case(s1: &str, s2: &str, m_cap: u64, n_cap: u64) -> Result<GoldenCase> {
    let params = params_of(s1, s2)?;
    let roots = roots_of(&params);
    let verdict = classify(&params);
    let theorem = classify_theorem(&roots);
    if !verdict.agrees_with(&theorem) {
        return Err(CliError::Mismatch(format!("{params}: the two classifiers disagree")));
    }
    let summary = roots.summary();
    let witness = match is_completely_monotone_upto(&params, m_cap, n_cap)? {
        Some(Witness::NegativeDifference { m, n, .. }) => Some(WitnessPosition { m, n }),
        Some(Witness::NegativeDensity { .. }) | None => None,
    };
    Ok(GoldenCase {
        s1: params.s1().to_string(),
        s2: params.s2().to_string(),
        root_branch: roots.branch,
        alpha1: summary.alpha1,
        alpha2: summary.alpha2,
        branch: verdict.branch,
        subnormal: verdict.subnormal,
        rule_fired: verdict.rule_fired.as_str().to_string(),
        boundary_flag: verdict.boundary_flag,
        witness,
    })
}

/// Cross-checks a witness position by the direct binomial sum, and that
/// no earlier order is negative at the same offset.
fn verify_witness(params: &ModuleParams, w: &WitnessPosition) -> Result<()> {
    if !finite_difference(params, w.m, w.n)?.is_negative() {
        return Err(CliError::Mismatch(format!("{params}: direct sum D_{}({}) is not negative", w.m, w.n)));
    }
    let table = DiffTable::build(params, w.m.max(1), w.n.max(1))?;
    if table.first_negative() != Some((w.m, w.n)) {
        return Err(CliError::Mismatch(format!("{params}: table disagrees with witness ({}, {})", w.m, w.n)));
    }
    Ok(())
}

/// Builds the golden file from scratch, verifying every witness twice.
pub fn bootstrap() -> Result<GoldenFile> {
    let mut cases = Vec::new();
    for (s1, s2) in REFERENCE_CASES {
        let case = derive_case(s1, s2, GOLDEN_M_CAP, GOLDEN_N_CAP)?;
        if let Some(w) = &case.witness {
            verify_witness(&params_of(s1, s2)?, w)?;
        }
        cases.push(case);
    }
    Ok(GoldenFile { schema_version: SCHEMA_VERSION, m_cap: GOLDEN_M_CAP, n_cap: GOLDEN_N_CAP, cases })
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

fn root_matches(a: &RootJson, b: &RootJson) -> bool {
    a.exact == b.exact && close(a.re, b.re) && close(a.im, b.im)
}

/// Differences between a stored and a recomputed case, by field name.
pub fn compare_case(stored: &GoldenCase, fresh: &GoldenCase) -> Vec<&'static str> {
    let mut bad = Vec::new();
    let checks = [
        ("root_branch", stored.root_branch == fresh.root_branch),
        ("alpha1", root_matches(&stored.alpha1, &fresh.alpha1)),
        ("alpha2", root_matches(&stored.alpha2, &fresh.alpha2)),
        ("branch", stored.branch == fresh.branch),
        ("subnormal", stored.subnormal == fresh.subnormal),
        ("rule_fired", stored.rule_fired == fresh.rule_fired),
        ("boundary_flag", stored.boundary_flag == fresh.boundary_flag),
        ("witness", stored.witness == fresh.witness),
    ];
    for (name, ok) in checks {
        if !ok {
            bad.push(name);
        }
    }
    bad
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseOutcome {
    pub label: String,
    pub failures: Vec<&'static str>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recomputes every stored case with the stored caps.
pub fn check(file: &GoldenFile) -> Result<Vec<CaseOutcome>> {
    file.cases
        .iter()
        .map(|stored| {
            let fresh = derive_case(&stored.s1, &stored.s2, file.m_cap, file.n_cap)?;
            Ok(CaseOutcome { label: stored.label(), failures: compare_case(stored, &fresh) })
        })
        .collect()
}

/// One line per case plus a total; errors with the failing cases named.
pub fn summarize(outcomes: &[CaseOutcome]) -> Result<String> {
    let mut out = String::new();
    for o in outcomes {
        if o.passed() {
            out.push_str(&format!("PASS {}\n", o.label));
        } else {
            out.push_str(&format!("FAIL {} ({})\n", o.label, o.failures.join(", ")));
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    out.push_str(&format!("{passed}/{} pass\n", outcomes.len()));
    if passed == outcomes.len() {
        Ok(out)
    } else {
        let failing: Vec<String> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.label.clone()).collect();
        Err(CliError::Mismatch(format!("{out}golden cases failed: {}", failing.join(", "))))
    }
}
