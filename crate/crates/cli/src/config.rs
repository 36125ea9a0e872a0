//! Run configuration: parameter grids, caps, output format and parallelism.

use std::str::FromStr;

use subnormal_core::cm::{DEFAULT_M_CAP, DEFAULT_N_CAP};
use subnormal_core::{NumericMode, Scalar};

use crate::error::{CliError, Result};

/// One axis of a grid: `start, start + step, ...` up to and including `stop`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub start: Scalar,
    pub stop: Scalar,
    pub step: Scalar,
}

impl Axis {
    pub fn parse(text: &str, mode: NumericMode) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(CliError::config("grid", format!("expected start:stop:step, got `{text}`")));
        };
        let axis = Axis {
            start: Scalar::parse(start, mode)?,
            stop: Scalar::parse(stop, mode)?,
            step: Scalar::parse(step, mode)?,
        };
        axis.validate()?;
        Ok(axis)
    }

    fn validate(&self) -> Result<()> {
        if !self.start.is_positive() {
            return Err(CliError::config("grid", "grid must lie inside the open quadrant s1, s2 > 0"));
        }
        if !self.step.is_positive() {
            return Err(CliError::config("grid", "step must be positive"));
        }
        if self.stop.cmp_value(&self.start) == std::cmp::Ordering::Less {
            return Err(CliError::config("grid", "stop is below start"));
        }
        Ok(())
    }

    /// Grid values, each computed as `start + k * step` (no accumulation).
    pub fn points(&self) -> Vec<Scalar> {
        let mut out = Vec::new();
        for k in 0i64.. {
            let v = &self.start + &(Scalar::int(k) * self.step.clone());
            if v.cmp_value(&self.stop) == std::cmp::Ordering::Greater {
                break;
            }
            out.push(v);
        }
        out
    }
}

/// A rectangular grid in the `(s1, s2)` plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub s1: Axis,
    pub s2: Axis,
}

impl Grid {
    /// `x0:x1:step[,y0:y1:step]`; a single axis is used for both.
    pub fn parse(text: &str, mode: NumericMode) -> Result<Self> {
        let (x, y) = text.split_once(',').unwrap_or((text, text));
        Ok(Grid { s1: Axis::parse(x, mode)?, s2: Axis::parse(y, mode)? })
    }

    pub fn default_window(mode: NumericMode) -> Self {
        Self::parse("0.1:30:0.1", mode).expect("default grid is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Svg,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "svg" => Ok(OutputFormat::Svg),
            _ => Err(CliError::config("format", format!("expected json|csv|svg, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: Grid,
    pub m_cap: u64,
    pub n_cap: u64,
    pub tol: f64,
    pub format: OutputFormat,
    pub mode: NumericMode,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
    /// Also search for a difference or density witness at each point.
    pub witnesses: bool,
}

impl RunConfig {
    pub fn new(mode: NumericMode) -> Self {
        RunConfig {
            grid: Grid::default_window(mode),
            m_cap: DEFAULT_M_CAP,
            n_cap: DEFAULT_N_CAP,
            tol: 1e-12,
            format: OutputFormat::Json,
            mode,
            jobs: None,
            witnesses: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_cap < 1 {
            return Err(CliError::config("m-cap", "must be at least 1"));
        }
        if self.n_cap < 1 {
            return Err(CliError::config("n-cap", "must be at least 1"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(CliError::config("tol", "must be positive"));
        }
        if self.jobs == Some(0) {
            return Err(CliError::config("jobs", "must be at least 1"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_has_300_points_per_axis() {
        let g = Grid::default_window(NumericMode::Rational);
        let pts = g.s1.points();
        assert_eq!(pts.len(), 300);
        assert_eq!(pts[0], Scalar::ratio(1, 10));
        assert_eq!(pts[299], Scalar::int(30));
    }

    #[test]
    fn two_axis_grid() {
        let g = Grid::parse("1:2:0.5,3:4:1", NumericMode::Rational).unwrap();
        assert_eq!(g.s1.points().len(), 3);
        assert_eq!(g.s2.points(), vec![Scalar::int(3), Scalar::int(4)]);
    }

    #[test]
    fn bad_grids() {
        for bad in ["0:1:0.1", "1:2", "1:2:0", "2:1:0.1", "1:2:x", "-1:2:1"] {
            assert!(Grid::parse(bad, NumericMode::Rational).is_err(), "{bad}");
        }
    }

    #[test]
    fn real_grid() {
        let g = Grid::parse("0.1:0.3:0.1", NumericMode::Real).unwrap();
        // 0.1 + 2*0.1 rounds above 0.3 as a double
        assert_eq!(g.s1.points().len(), 2);
    }
}
