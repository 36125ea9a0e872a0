//! Grid evaluation, witness search and atomic file output.

use std::cmp::Ordering;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use subnormal_core::classify::classify_corollary_with;
use subnormal_core::scalar::DEFAULT_REL_TOL;
use subnormal_core::{is_completely_monotone_upto, CaseBranch, ModuleParams, Scalar, Verdict, WeightSpec};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::records::{ScanDocument, ScanRecord, WitnessSummary, SCHEMA_VERSION};

/// Witnesses found at one point: the exact difference scan and, for
/// non-subnormal points with complex roots in `-1 < Re < 0`, the density
/// sign test.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WitnessSearch {
    pub difference: Option<WitnessSummary>,
    pub density: Option<WitnessSummary>,
}

impl WitnessSearch {
    /// Difference witnesses take precedence since their sign is exact.
    pub fn best(&self) -> Option<WitnessSummary> {
        self.difference.clone().or_else(|| self.density.clone())
    }
}

pub fn classify(params: &ModuleParams) -> Verdict {
    classify_corollary_with(params, DEFAULT_REL_TOL)
}

pub fn search_witness(params: &ModuleParams, verdict: &Verdict, m_cap: u64, n_cap: u64) -> Result<WitnessSearch> {
    let difference = is_completely_monotone_upto(params, m_cap, n_cap)?.map(|w| WitnessSummary::from(&w));
    // a density exists only while the complex pair stays in Re < 0
    let in_strip = verdict.branch == CaseBranch::ComplexRootCase && verdict.roots.re().signum() == Ordering::Less;
    let density = if !verdict.subnormal && in_strip {
        WeightSpec::for_tensor(params)?
            .negativity_witness()
            .map(|(t, value)| WitnessSummary::NegativeDensity { t, value })
    } else {
        None
    };
    Ok(WitnessSearch { difference, density })
}

fn evaluate_point(s1: &Scalar, s2: &Scalar, config: &RunConfig) -> Result<ScanRecord> {
    let params = ModuleParams::new(s1.clone(), s2.clone())?;
    let verdict = classify(&params);
    let witness =
        if config.witnesses { search_witness(&params, &verdict, config.m_cap, config.n_cap)?.best() } else { None };
    Ok(ScanRecord::from_verdict(&verdict, witness))
}

/// Evaluates every grid point on a pool of `config.jobs` workers and
/// returns the records sorted by `(s1, s2)`.
pub fn run_scan(config: &RunConfig) -> Result<Vec<ScanRecord>> {
    config.validate()?;
    let xs = config.grid.s1.points();
    let ys = config.grid.s2.points();
    let mut points: Vec<(Scalar, Scalar)> =
        xs.iter().flat_map(|x| ys.iter().map(move |y| (x.clone(), y.clone()))).collect();
    points.sort_by(|a, b| a.0.cmp_value(&b.0).then_with(|| a.1.cmp_value(&b.1)));
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build().map_err(|e| CliError::config("jobs", e.to_string()))?;
    // indexed parallel collect keeps input order
    pool.install(|| points.par_iter().map(|(x, y)| evaluate_point(x, y, config)).collect())
}

pub fn scan_document(config: &RunConfig, records: Vec<ScanRecord>) -> ScanDocument {
    ScanDocument {
        schema_version: SCHEMA_VERSION,
        mode: config.mode,
        m_cap: config.m_cap,
        n_cap: config.n_cap,
        witnesses: config.witnesses,
        records,
    }
}

fn partial_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".partial");
    PathBuf::from(name)
}

/// Writes through `<path>.partial` and renames into place; the partial
/// file is removed on failure.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let tmp = partial_path(path);
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    let result = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(contents)?;
            f.sync_all()
        })
        .and_then(|_| fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(io(e));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Grid;
    use subnormal_core::NumericMode;

    #[test]
    fn small_scan_is_sorted_and_complete() {
        let mut config = RunConfig::new(NumericMode::Rational);
        config.grid = Grid::parse("0.5:2:0.5", NumericMode::Rational).unwrap();
        config.jobs = Some(2);
        let records = run_scan(&config).unwrap();
        assert_eq!(records.len(), 16);
        assert_eq!((records[0].s1.as_str(), records[0].s2.as_str()), ("1/2", "1/2"));
        assert_eq!((records[1].s1.as_str(), records[1].s2.as_str()), ("1/2", "1"));
        let one = records.iter().find(|r| r.s1 == "1" && r.s2 == "1").unwrap();
        assert!(one.subnormal);
    }

    #[test]
    fn witness_search_in_complex_strip() {
        let p = ModuleParams::ints(3, 3).unwrap();
        let v = classify(&p);
        let w = search_witness(&p, &v, 20, 20).unwrap();
        assert_eq!(w.difference, None);
        assert!(matches!(w.best(), Some(WitnessSummary::NegativeDensity { value, .. }) if value < 0.0));
    }

    #[test]
    fn atomic_write_leaves_no_partial() {
        let dir = std::env::temp_dir().join(format!("subnormal-scan-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.txt");
        write_atomic(&path, b"abc").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"abc");
        assert!(!partial_path(&path).exists());
        let bad = dir.join("missing").join("out.txt");
        assert!(matches!(write_atomic(&bad, b"x"), Err(CliError::Io { .. })));
        assert!(!partial_path(&bad).exists());
        fs::remove_dir_all(&dir).unwrap();
    }
}
