//! Subcommand bodies. Each returns the text destined for stdout so the
//! binary and the tests share one code path.

use std::path::Path;

use serde::Serialize;
use subnormal_core::density::POSITIVITY_DECADES;
use subnormal_core::moments::RootsSummary;
use subnormal_core::{
    classify_theorem, roots_of, tensor_moment_bruteforce, tensor_moment_closed, CaseBranch, ModuleParams, NumericMode,
    Scalar, WeightSpec,
};

use crate::config::{OutputFormat, RunConfig};
use crate::error::{CliError, Result};
use crate::golden::{self, GoldenFile};
use crate::records::{to_csv, ScanRecord, WitnessSummary};
use crate::scan::{classify, run_scan, scan_document, search_witness, write_atomic};
use crate::svg::{self, Window};

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Serialize(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Parses a parameter pair, naming the offending argument on failure.
pub fn parse_params(s1: &str, s2: &str, mode: NumericMode) -> Result<ModuleParams> {
    let parse =
        |field: &'static str, text: &str| Scalar::parse(text, mode).map_err(|e| CliError::config(field, e.to_string()));
    Ok(ModuleParams::new(parse("s1", s1)?, parse("s2", s2)?)?)
}

/// Full report for one point; both classifiers must agree.
pub fn cmd_classify(params: &ModuleParams) -> Result<String> {
    let verdict = classify(params);
    let theorem = classify_theorem(&verdict.roots);
    if !verdict.agrees_with(&theorem) {
        return Err(CliError::Mismatch(format!(
            "{params}: rule {} and rule {} disagree",
            verdict.rule_fired.as_str(),
            theorem.rule_fired.as_str()
        )));
    }
    json(&ScanRecord::from_verdict(&verdict, None))
}

pub fn cmd_roots(params: &ModuleParams) -> Result<String> {
    let summary: RootsSummary = roots_of(params).summary();
    json(&summary)
}

#[derive(Debug, Serialize)]
struct MomentRow {
    n: u64,
    exact: String,
    value: f64,
}

/// Moments `0..count`, from the closed form, checked against the
/// convolution of the two factor sequences.
pub fn cmd_moments(params: &ModuleParams, count: u64) -> Result<String> {
    let mut rows = Vec::new();
    for n in 0..count {
        let closed = tensor_moment_closed(params, n)?;
        let brute = tensor_moment_bruteforce(params, n)?;
        if closed.value != brute.value {
            return Err(CliError::Mismatch(format!("{params}: closed form and convolution differ at n={n}")));
        }
        rows.push(MomentRow { n, exact: closed.value.to_string(), value: closed.to_f64() });
    }
    json(&rows)
}

#[derive(Debug, Serialize)]
pub struct WitnessReport {
    pub s1: String,
    pub s2: String,
    pub subnormal: bool,
    pub branch: CaseBranch,
    pub m_cap: u64,
    pub n_cap: u64,
    pub difference: Option<WitnessSummary>,
    pub density: Option<WitnessSummary>,
    pub status: &'static str,
}

pub fn witness_report(params: &ModuleParams, m_cap: u64, n_cap: u64) -> Result<WitnessReport> {
    if m_cap < 1 || n_cap < 1 {
        return Err(CliError::config("m-cap", "caps must be at least 1"));
    }
    let verdict = classify(params);
    let found = search_witness(params, &verdict, m_cap, n_cap)?;
    let status = if found.best().is_some() { "found" } else { "none within caps" };
    Ok(WitnessReport {
        s1: params.s1().to_string(),
        s2: params.s2().to_string(),
        subnormal: verdict.subnormal,
        branch: verdict.branch,
        m_cap,
        n_cap,
        difference: found.difference,
        density: found.density,
        status,
    })
}

pub fn cmd_witness(params: &ModuleParams, m_cap: u64, n_cap: u64) -> Result<String> {
    json(&witness_report(params, m_cap, n_cap)?)
}

/// CSV samples `t,w(t)` of the representing density on a log grid.
/// With `verify`, moments `0..=verify` are checked by quadrature first.
pub fn cmd_density(params: &ModuleParams, per_decade: usize, verify: Option<u64>, tol: f64) -> Result<String> {
    let verdict = classify(params);
    if !verdict.subnormal && verdict.branch == CaseBranch::RealRootsCase {
        return Err(CliError::config(
            "parameters",
            format!("{params} is not subnormal and its roots are real, so no representing density exists"),
        ));
    }
    let spec = WeightSpec::for_tensor(params)?;
    if let Some(max_n) = verify {
        for n in 0..=max_n {
            let q = spec.moment_quadrature(n, tol)?;
            let exact = tensor_moment_closed(params, n)?.to_f64();
            if (q.value - exact).abs() > 1e-8f64.max(1e-8 * exact.abs()) {
                return Err(CliError::Mismatch(format!(
                    "{params}: quadrature moment {n} is {} but the closed form gives {exact}",
                    q.value
                )));
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Serialize(e.to_string());
    w.write_record(["t", "w(t)"]).map_err(io)?;
    for (t, v) in spec.samples(POSITIVITY_DECADES, per_decade) {
        w.write_record([format!("{t:e}"), format!("{v:e}")]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Serialize(e.to_string()))
}

fn window_of(config: &RunConfig) -> (Window, f64, f64) {
    let g = &config.grid;
    let window =
        Window { x0: g.s1.start.to_f64(), x1: g.s1.stop.to_f64(), y0: g.s2.start.to_f64(), y1: g.s2.stop.to_f64() };
    let (sx, sy) = (g.s1.step.to_f64(), g.s2.step.to_f64());
    let pad = Window {
        x0: window.x0 - sx / 2.0,
        x1: window.x1 + sx / 2.0,
        y0: window.y0 - sy / 2.0,
        y1: window.y1 + sy / 2.0,
    };
    (pad, sx, sy)
}

pub fn render_svg(config: &RunConfig, records: &[ScanRecord]) -> String {
    let (window, sx, sy) = window_of(config);
    svg::render(records, &window, sx, sy)
}

/// Runs a scan and emits it in `config.format`, to `out` or as the
/// returned string. `svg_out` additionally writes the region map.
pub fn cmd_scan(config: &RunConfig, out: Option<&Path>, svg_out: Option<&Path>) -> Result<String> {
    let records = run_scan(config)?;
    let text = match config.format {
        OutputFormat::Json => scan_document(config, records.clone()).to_json()? + "\n",
        OutputFormat::Csv => to_csv(&records)?,
        OutputFormat::Svg => render_svg(config, &records),
    };
    if let Some(path) = svg_out {
        write_atomic(path, render_svg(config, &records).as_bytes())?;
    }
    match out {
        Some(path) => {
            write_atomic(path, text.as_bytes())?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Checks the stored reference cases, or with `bootstrap` rederives them.
pub fn cmd_golden(file: Option<&Path>, bootstrap: bool, out: Option<&Path>) -> Result<String> {
    if bootstrap {
        let text = golden::bootstrap()?.to_json()?;
        return match out {
            Some(path) => {
                write_atomic(path, text.as_bytes())?;
                Ok(format!("wrote {}\n", path.display()))
            }
            None => Ok(text),
        };
    }
    let stored = match file {
        Some(path) => GoldenFile::load(path)?,
        None => GoldenFile::bundled()?,
    };
    golden::summarize(&golden::check(&stored)?)
}
