//! Representing densities for reciprocals of cubics.
//!
//! For `a0 < 0` and `a1, a2` in the open left half plane there is an
//! explicit `w` on `(0, 1]` with
//!
//! ```text
//! 1 / ((n - a0)(n - a1)(n - a2)) = int_0^1 t^n w(t) dt.
//! ```
//!
//! Its shape depends on how the three roots coincide. The tensor moment
//! sequence is `(6/P) / ((n + 1)(n - alpha1)(n - alpha2))`, so its density
//! is the `a0 = -1` instance scaled by `alpha1 alpha2 = 6/P`. Whenever the
//! module is subnormal that density is nonnegative; in the complex strip
//! with `-1 < Re(alpha) < 0` it changes sign, and
//! [`WeightSpec::negativity_witness`] finds a point where it is negative.

pub mod quadrature;

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Error, Result};
use crate::moments::{roots_of, ModuleParams, RootBranch};

pub use quadrature::QuadResult;

/// Absolute slack below zero tolerated by the positivity scan.
pub const POSITIVITY_SLACK: f64 = 1e-14;
/// Number of decades below `t = 1` covered by the positivity scan.
pub const POSITIVITY_DECADES: u32 = 16;

const MAX_PANELS: usize = 20_000;
const MAX_CUTOFF: f64 = 1e6;

/// The four shapes of the density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightCase {
    /// Three distinct real roots.
    DistinctReal { a0: f64, a1: f64, a2: f64 },
    /// A real root of multiplicity two and a different simple real root.
    DoubleReal { double: f64, simple: f64 },
    /// One real root of multiplicity three.
    TripleRoot { root: f64 },
    /// A real root `a0` and the pair `a ± ib`; `theta` is the principal
    /// argument of `(a + ib) - a0`.
    ComplexPair { a0: f64, a: f64, b: f64, theta: f64 },
}

/// A density `scale * w(t)` on `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    pub case: WeightCase,
    pub scale: f64,
}

/// The two roots other than `a0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairRoots {
    Real(f64, f64),
    /// `re ± i im`
    Complex {
        re: f64,
        im: f64,
    },
}

/// Minimum of a density over the positivity grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityReport {
    pub min_value: f64,
    pub argmin: f64,
    pub points: usize,
    pub decades: u32,
}

/// Selects the density shape from the coincidences among `a0, a1, a2`
/// (compared exactly).
pub fn weight_build(a0: f64, roots: PairRoots, scale: f64) -> Result<WeightSpec> {
    if !a0.is_finite() || a0 >= 0.0 {
        return Err(domain("a0", format!("a0 must lie in (-inf, 0), got {a0}")));
    }
    if !scale.is_finite() || scale <= 0.0 {
        return Err(domain("scale", format!("scale must be positive, got {scale}")));
    }
    let case = match roots {
        PairRoots::Real(a1, a2) => {
            if !a1.is_finite() || a1 >= 0.0 {
                return Err(domain("a1", format!("a1 must have negative real part, got {a1}")));
            }
            if !a2.is_finite() || a2 >= 0.0 {
                return Err(domain("a2", format!("a2 must have negative real part, got {a2}")));
            }
            real_case(a0, a1, a2)
        }
        PairRoots::Complex { re, im } => {
            if !re.is_finite() || re >= 0.0 {
                return Err(domain("a1", format!("complex roots must have negative real part, got {re}")));
            }
            if im == 0.0 {
                real_case(a0, re, re)
            } else if !im.is_finite() {
                return Err(domain("a1", "imaginary part must be finite"));
            } else {
                let b = im.abs();
                WeightCase::ComplexPair { a0, a: re, b, theta: b.atan2(re - a0) }
            }
        }
    };
    Ok(WeightSpec { case, scale })
}

fn real_case(a0: f64, a1: f64, a2: f64) -> WeightCase {
    if a0 == a1 && a1 == a2 {
        WeightCase::TripleRoot { root: a0 }
    } else if a0 == a1 {
        WeightCase::DoubleReal { double: a0, simple: a2 }
    } else if a0 == a2 {
        WeightCase::DoubleReal { double: a0, simple: a1 }
    } else if a1 == a2 {
        WeightCase::DoubleReal { double: a1, simple: a0 }
    } else {
        WeightCase::DistinctReal { a0, a1, a2 }
    }
}

fn distinct_coefficients(roots: [f64; 3]) -> [f64; 3] {
    let [x, y, z] = roots;
    [1.0 / ((x - y) * (x - z)), 1.0 / ((y - x) * (y - z)), 1.0 / ((z - x) * (z - y))]
}

/// `int_U^inf u^k e^{-rate u} du` for `k <= 2`.
fn exp_tail(rate: f64, cutoff: f64, k: u32) -> f64 {
    let e = (-rate * cutoff).exp();
    match k {
        0 => e / rate,
        1 => e * (cutoff / rate + 1.0 / (rate * rate)),
        _ => e * (cutoff * cutoff / rate + 2.0 * cutoff / (rate * rate) + 2.0 / (rate * rate * rate)),
    }
}

impl WeightSpec {
    /// Density of the tensor moment sequence of `params`. Fails when the
    /// roots leave the half plane (the real-roots non-subnormal case).
    pub fn for_tensor(params: &ModuleParams) -> Result<WeightSpec> {
        let roots = roots_of(params);
        let scale = roots.vieta_product().to_f64();
        let (alpha1, alpha2) = roots.alphas();
        let pair = match roots.branch {
            RootBranch::ComplexPair => PairRoots::Complex { re: alpha1.0, im: alpha1.1 },
            RootBranch::TripleRoot => PairRoots::Real(-1.0, -1.0),
            RootBranch::DoubleReal => PairRoots::Real(alpha1.0, alpha1.0),
            RootBranch::DistinctReal if roots.touches_fixed_root() => {
                let other = if (alpha1.0 + 1.0).abs() <= (alpha2.0 + 1.0).abs() { alpha2.0 } else { alpha1.0 };
                PairRoots::Real(-1.0, other)
            }
            RootBranch::DistinctReal => PairRoots::Real(alpha1.0, alpha2.0),
        };
        let spec = weight_build(-1.0, pair, scale)?;
        if let WeightCase::ComplexPair { a, b, theta, .. } = spec.case {
            // the argument of alpha1 - a0 and of (a + 1) + ib are the same angle when a0 = -1
            debug_assert_eq!(theta, b.atan2(a + 1.0));
        }
        Ok(spec)
    }

    pub fn case_tag(&self) -> RootBranch {
        match self.case {
            WeightCase::DistinctReal { .. } => RootBranch::DistinctReal,
            WeightCase::DoubleReal { .. } => RootBranch::DoubleReal,
            WeightCase::TripleRoot { .. } => RootBranch::TripleRoot,
            WeightCase::ComplexPair { .. } => RootBranch::ComplexPair,
        }
    }

    /// `scale * w(t)` for `0 < t <= 1`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(domain("t", format!("density is defined on (0, 1], got {t}")));
        }
        Ok(self.scale * self.unscaled(t))
    }

    fn unscaled(&self, t: f64) -> f64 {
        let lt = t.ln();
        let pow = |a: f64| (-(a + 1.0) * lt).exp();
        match self.case {
            WeightCase::DistinctReal { a0, a1, a2 } => {
                let c = distinct_coefficients([a0, a1, a2]);
                c[0] * pow(a0) + c[1] * pow(a1) + c[2] * pow(a2)
            }
            WeightCase::DoubleReal { double, simple } => {
                let d = double - simple;
                (pow(simple) - pow(double)) / (d * d) - pow(double) * lt / d
            }
            WeightCase::TripleRoot { root } => 0.5 * pow(root) * lt * lt,
            WeightCase::ComplexPair { a0, a, b, theta } => {
                let r = ((a0 - a) * (a0 - a) + b * b).sqrt();
                (pow(a0) - (r / b) * pow(a) * (b * lt + theta).sin()) / (r * r)
            }
        }
    }

    /// `t^n w(t) dt` after `t = e^{-u}`; decays exponentially in `u`.
    fn integrand_u(&self, n: f64, u: f64) -> f64 {
        let e = |a: f64| ((a - n) * u).exp();
        let w = match self.case {
            WeightCase::DistinctReal { a0, a1, a2 } => {
                let c = distinct_coefficients([a0, a1, a2]);
                c[0] * e(a0) + c[1] * e(a1) + c[2] * e(a2)
            }
            WeightCase::DoubleReal { double, simple } => {
                let d = double - simple;
                (e(simple) - e(double)) / (d * d) + u * e(double) / d
            }
            WeightCase::TripleRoot { root } => 0.5 * u * u * e(root),
            WeightCase::ComplexPair { a0, a, b, theta } => {
                let r = ((a0 - a) * (a0 - a) + b * b).sqrt();
                (e(a0) - (r / b) * e(a) * (theta - b * u).sin()) / (r * r)
            }
        };
        self.scale * w
    }

    /// Bound on `int_U^inf |integrand|`.
    fn tail_bound(&self, n: f64, cutoff: f64) -> f64 {
        let bound = match self.case {
            WeightCase::DistinctReal { a0, a1, a2 } => {
                let c = distinct_coefficients([a0, a1, a2]);
                [a0, a1, a2].iter().zip(c).map(|(&a, c)| c.abs() * exp_tail(n - a, cutoff, 0)).sum()
            }
            WeightCase::DoubleReal { double, simple } => {
                let d = double - simple;
                (exp_tail(n - simple, cutoff, 0) + exp_tail(n - double, cutoff, 0)) / (d * d)
                    + exp_tail(n - double, cutoff, 1) / d.abs()
            }
            WeightCase::TripleRoot { root } => 0.5 * exp_tail(n - root, cutoff, 2),
            WeightCase::ComplexPair { a0, a, b, .. } => {
                let r = ((a0 - a) * (a0 - a) + b * b).sqrt();
                (exp_tail(n - a0, cutoff, 0) + (r / b) * exp_tail(n - a, cutoff, 0)) / (r * r)
            }
        };
        self.scale * bound
    }

    /// `scale / ((n - a0)(n - a1)(n - a2))` in closed form.
    pub fn closed_form_moment(&self, n: u64) -> f64 {
        let x = n as f64;
        let denom = match self.case {
            WeightCase::DistinctReal { a0, a1, a2 } => (x - a0) * (x - a1) * (x - a2),
            WeightCase::DoubleReal { double, simple } => (x - double) * (x - double) * (x - simple),
            WeightCase::TripleRoot { root } => (x - root).powi(3),
            WeightCase::ComplexPair { a0, a, b, .. } => (x - a0) * ((x - a) * (x - a) + b * b),
        };
        self.scale / denom
    }

    /// `int_0^1 t^n scale w(t) dt` by adaptive quadrature in `u = -log t`,
    /// truncated where the analytic tail bound falls below `tol / 10`.
    pub fn moment_quadrature(&self, n: u64, tol: f64) -> Result<QuadResult> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(domain("tol", format!("tolerance must be positive, got {tol}")));
        }
        let x = n as f64;
        let mut cutoff = 1.0;
        while self.tail_bound(x, cutoff) >= tol / 10.0 {
            cutoff *= 2.0;
            if cutoff > MAX_CUTOFF {
                return Err(Error::Quadrature { estimate: f64::NAN, bound: self.tail_bound(x, cutoff), tol });
            }
        }
        let tail = self.tail_bound(x, cutoff);
        let oscillations = match self.case {
            WeightCase::ComplexPair { b, .. } => (cutoff * b / PI).ceil() as usize,
            _ => 0,
        };
        let panels = (8 + oscillations).min(MAX_PANELS / 2);
        let inner_tol = 0.5 * (tol - tail);
        let mut result = quadrature::integrate(|u| self.integrand_u(x, u), 0.0, cutoff, inner_tol, panels, MAX_PANELS)
            .map_err(|e| match e {
                Error::Quadrature { estimate, bound, .. } => Error::Quadrature { estimate, bound: bound + tail, tol },
                other => other,
            })?;
        result.error += tail;
        Ok(result)
    }

    /// Evaluates the density on a log-uniform grid with `grid_density`
    /// points per decade over [`POSITIVITY_DECADES`] decades below 1 and
    /// reports the minimum. A value below `-POSITIVITY_SLACK` is an error.
    pub fn positivity_certificate(&self, grid_density: usize) -> Result<PositivityReport> {
        if grid_density == 0 {
            return Err(domain("grid_density", "need at least one point per decade"));
        }
        let steps = grid_density * POSITIVITY_DECADES as usize;
        let mut min_value = f64::INFINITY;
        let mut argmin = 1.0;
        for k in 0..=steps {
            let t = 10f64.powf(-(k as f64) / grid_density as f64);
            let v = self.scale * self.unscaled(t);
            if v < min_value {
                min_value = v;
                argmin = t;
            }
        }
        if min_value < -POSITIVITY_SLACK {
            return Err(Error::NegativeDensity { t: argmin, value: min_value });
        }
        Ok(PositivityReport { min_value, argmin, points: steps + 1, decades: POSITIVITY_DECADES })
    }

    /// A point `t` in `(0, 1)` where the density is strictly negative.
    ///
    /// Only complex pairs with `a0 < a < 0` change sign. The candidate
    /// points are `t_m = exp((2 m pi + pi/2 - theta) / b)`, where the sine
    /// factor equals one; the largest `t_m < 1` with
    /// `t_m^(a - a0) < 1 / (2 sin theta)` is returned. If rounding defeats
    /// that choice a log-grid sign scan is used instead.
    pub fn negativity_witness(&self) -> Option<(f64, f64)> {
        let WeightCase::ComplexPair { a0, a, b, theta } = self.case else { return None };
        if a.is_nan() || a <= a0 {
            return None;
        }
        let rate = a - a0;
        let sin_theta = theta.sin();
        // log t_m must stay below both 0 and -ln(2 sin theta) / rate
        let bound = (-(2.0 * sin_theta).ln() / rate).min(0.0);
        let log_t = |m: f64| (2.0 * m * PI + FRAC_PI_2 - theta) / b;
        let admissible = |m: f64| {
            let lt = log_t(m);
            lt < 0.0 && (rate * lt).exp() < 1.0 / (2.0 * sin_theta)
        };
        let mut m = ((b * bound - FRAC_PI_2 + theta) / (2.0 * PI)).ceil();
        for _ in 0..4 {
            if admissible(m) {
                break;
            }
            m -= 1.0;
        }
        if admissible(m) {
            let t = log_t(m).exp();
            if t > 0.0 {
                let v = self.scale * self.unscaled(t);
                if v < 0.0 {
                    return Some((t, v));
                }
            }
        }
        self.sign_scan()
    }

    fn sign_scan(&self) -> Option<(f64, f64)> {
        const PER_DECADE: usize = 200;
        (1..=300 * PER_DECADE).find_map(|k| {
            let t = 10f64.powf(-(k as f64) / PER_DECADE as f64);
            let v = self.scale * self.unscaled(t);
            (v < 0.0).then_some((t, v))
        })
    }

    /// `(t, scale * w(t))` on a log grid, `per_decade` points per decade
    /// over `decades` decades, ordered by increasing `t`.
    pub fn samples(&self, decades: u32, per_decade: usize) -> Vec<(f64, f64)> {
        let steps = decades as usize * per_decade.max(1);
        (0..=steps)
            .rev()
            .map(|k| {
                let t = 10f64.powf(-(k as f64) / per_decade.max(1) as f64);
                (t, self.scale * self.unscaled(t))
            })
            .collect()
    }
}

/// `scale * w(t)`.
pub fn weight_eval(spec: &WeightSpec, t: f64) -> Result<f64> {
    spec.eval(t)
}

pub fn density_moment_quadrature(spec: &WeightSpec, n: u64, tol: f64) -> Result<QuadResult> {
    spec.moment_quadrature(n, tol)
}

pub fn positivity_certificate(spec: &WeightSpec, grid_density: usize) -> Result<PositivityReport> {
    spec.positivity_certificate(grid_density)
}

pub fn negativity_witness(spec: &WeightSpec) -> Option<(f64, f64)> {
    spec.negativity_witness()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn case_selection() {
        let s = weight_build(-1.0, PairRoots::Real(-2.0, -3.0), 1.0).unwrap();
        assert_eq!(s.case_tag(), RootBranch::DistinctReal);
        let s = weight_build(-1.0, PairRoots::Real(-1.0, -2.0), 1.0).unwrap();
        assert_eq!(s.case, WeightCase::DoubleReal { double: -1.0, simple: -2.0 });
        let s = weight_build(-1.0, PairRoots::Real(-2.0, -2.0), 1.0).unwrap();
        assert_eq!(s.case, WeightCase::DoubleReal { double: -2.0, simple: -1.0 });
        let s = weight_build(-1.0, PairRoots::Real(-1.0, -1.0), 1.0).unwrap();
        assert_eq!(s.case_tag(), RootBranch::TripleRoot);
        let s = weight_build(-1.0, PairRoots::Complex { re: -2.0, im: 1.0 }, 1.0).unwrap();
        let WeightCase::ComplexPair { theta, .. } = s.case else { panic!() };
        assert!(close(theta, 3.0 * PI / 4.0, 1e-15));
    }

    #[test]
    fn hypotheses_enforced() {
        let e = weight_build(0.0, PairRoots::Real(-2.0, -3.0), 1.0).unwrap_err().to_string();
        assert!(e.contains("a0"), "{e}");
        let e = weight_build(-1.0, PairRoots::Real(0.1, -3.0), 1.0).unwrap_err().to_string();
        assert!(e.contains("a1"), "{e}");
        let e = weight_build(-1.0, PairRoots::Real(-2.0, 0.0), 1.0).unwrap_err().to_string();
        assert!(e.contains("a2"), "{e}");
        assert!(weight_build(-1.0, PairRoots::Complex { re: 0.5, im: 1.0 }, 1.0).is_err());
        assert!(weight_build(-1.0, PairRoots::Real(-2.0, -3.0), 0.0).is_err());
    }

    #[test]
    fn evaluation_formulas() {
        let s = weight_build(-1.0, PairRoots::Real(-2.0, -3.0), 1.0).unwrap();
        for t in [0.01, 0.3, 0.5, 0.9, 1.0] {
            assert!(close(s.eval(t).unwrap(), (1.0 - t) * (1.0 - t) / 2.0, 1e-14));
        }
        let s = weight_build(-1.0, PairRoots::Real(-1.0, -1.0), 1.0).unwrap();
        assert_eq!(s.eval(1.0).unwrap(), 0.0);
        assert!(close(s.eval((-1f64).exp()).unwrap(), 0.5, 1e-15));
        let s = weight_build(-1.0, PairRoots::Real(-1.0, -2.0), 1.0).unwrap();
        for t in [0.001f64, 0.2, 0.7, 1.0] {
            assert!(close(s.eval(t).unwrap(), t - 1.0 - t.ln(), 1e-14));
        }
        assert!(s.eval(0.0).is_err());
        assert!(s.eval(1.5).is_err());
        assert!(s.eval(f64::NAN).is_err());
    }

    #[test]
    fn complex_form_for_two_two() {
        let p = ModuleParams::ints(2, 2).unwrap();
        let s = WeightSpec::for_tensor(&p).unwrap();
        let b = 0.5f64.sqrt();
        let WeightCase::ComplexPair { theta, .. } = s.case else { panic!() };
        let alpha_sq = 1.0 + 0.5;
        for t in [1e-6f64, 0.01, 0.4, 1.0] {
            let expect = alpha_sq / (b * b) * (1.0 - (b * t.ln() + theta).sin());
            assert!(close(s.eval(t).unwrap(), expect, 1e-13));
        }
    }

    #[test]
    fn reference_quadratures() {
        let s = weight_build(-1.0, PairRoots::Real(-2.0, -3.0), 1.0).unwrap();
        assert!(close(s.moment_quadrature(0, 1e-12).unwrap().value, 1.0 / 6.0, 1e-11));
        let s = weight_build(-1.0, PairRoots::Real(-1.0, -1.0), 1.0).unwrap();
        assert!(close(s.moment_quadrature(1, 1e-12).unwrap().value, 1.0 / 8.0, 1e-11));
        let s = WeightSpec::for_tensor(&ModuleParams::ints(2, 2).unwrap()).unwrap();
        assert!(close(s.scale, 1.5, 1e-15));
        assert!(close(s.moment_quadrature(0, 1e-12).unwrap().value, 1.0, 1e-11));
        assert!(s.moment_quadrature(0, 0.0).is_err());
    }

    #[test]
    fn touching_root_gives_double_case() {
        let s = WeightSpec::for_tensor(&ModuleParams::ints(1, 3).unwrap()).unwrap();
        assert_eq!(s.case, WeightCase::DoubleReal { double: -1.0, simple: -2.0 });
        assert!(close(s.scale, 2.0, 1e-15));
        let r = s.positivity_certificate(50).unwrap();
        assert_eq!(r.argmin, 1.0);
        assert_eq!(r.min_value, 0.0);
    }

    #[test]
    fn non_subnormal_real_case_has_no_density() {
        assert!(WeightSpec::for_tensor(&ModuleParams::ints(15, 10).unwrap()).is_err());
    }

    #[test]
    fn witness_only_right_of_a0() {
        let left = weight_build(-1.0, PairRoots::Complex { re: -2.0, im: 1.0 }, 1.0).unwrap();
        assert_eq!(left.negativity_witness(), None);
        let on = WeightSpec::for_tensor(&ModuleParams::ints(2, 2).unwrap()).unwrap();
        assert_eq!(on.negativity_witness(), None);
        let right = WeightSpec::for_tensor(&ModuleParams::ints(3, 3).unwrap()).unwrap();
        let (t, v) = right.negativity_witness().unwrap();
        assert!(t > 0.0 && t < 1.0 && v < 0.0);
        assert!(weight_build(-1.0, PairRoots::Real(-2.0, -3.0), 1.0).unwrap().negativity_witness().is_none());
    }

    #[test]
    fn negative_density_is_reported() {
        let s = WeightSpec::for_tensor(&ModuleParams::ints(3, 3).unwrap()).unwrap();
        assert!(matches!(s.positivity_certificate(50), Err(Error::NegativeDensity { .. })));
        assert!(s.positivity_certificate(0).is_err());
    }

    #[test]
    fn samples_are_increasing() {
        let s = weight_build(-1.0, PairRoots::Real(-2.0, -3.0), 1.0).unwrap();
        let pts = s.samples(3, 10);
        assert_eq!(pts.len(), 31);
        assert!(pts.windows(2).all(|w| w[0].0 < w[1].0));
        assert_eq!(pts.last().unwrap().0, 1.0);
    }
}
