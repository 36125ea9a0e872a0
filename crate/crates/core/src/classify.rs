//! The subnormality decision, in root-location form and in sum/product form.
//!
//! With `S = s1 + s2` and `P = s1 s2`:
//!
//! * if `(3S - P)^2 >= 24 P` the cubic has only real roots, and the module
//!   is subnormal iff every root lies in the open left half plane, i.e.
//!   iff `3S > P`;
//! * otherwise the non-real roots `a ± ib` decide, and the module is
//!   subnormal iff `a <= -1`, i.e. iff `S >= P`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::moments::{roots_of_with, ModuleParams, RootBranch, RootSet, RootsSummary};
use crate::scalar::{compare, Scalar, DEFAULT_REL_TOL};

/// Which of the two cases of the decision applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseBranch {
    RealRootsCase,
    ComplexRootCase,
}

impl CaseBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseBranch::RealRootsCase => "RealRootsCase",
            CaseBranch::ComplexRootCase => "ComplexRootCase",
        }
    }
}

impl fmt::Display for CaseBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The inequality that decided a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// disc >= 0 and 3S > P
    RealThreeSumAboveProduct,
    /// disc >= 0 and 3S <= P
    RealThreeSumAtMostProduct,
    /// disc < 0 and S >= P
    ComplexSumAtLeastProduct,
    /// disc < 0 and S < P
    ComplexSumBelowProduct,
    /// all roots real and in Re < 0
    RootsInLeftHalfPlane,
    /// all roots real, one with Re >= 0
    RootOutsideLeftHalfPlane,
    /// complex root with Re <= -1
    ComplexRootLeftOfMinusOne,
    /// complex root with Re > -1
    ComplexRootRightOfMinusOne,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::RealThreeSumAboveProduct,
        Rule::RealThreeSumAtMostProduct,
        Rule::ComplexSumAtLeastProduct,
        Rule::ComplexSumBelowProduct,
        Rule::RootsInLeftHalfPlane,
        Rule::RootOutsideLeftHalfPlane,
        Rule::ComplexRootLeftOfMinusOne,
        Rule::ComplexRootRightOfMinusOne,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Rule::RealThreeSumAboveProduct => "disc>=0:3s>p",
            Rule::RealThreeSumAtMostProduct => "disc>=0:3s<=p",
            Rule::ComplexSumAtLeastProduct => "disc<0:s>=p",
            Rule::ComplexSumBelowProduct => "disc<0:s<p",
            Rule::RootsInLeftHalfPlane => "real-roots:all-re<0",
            Rule::RootOutsideLeftHalfPlane => "real-roots:some-re>=0",
            Rule::ComplexRootLeftOfMinusOne => "complex-root:re<=-1",
            Rule::ComplexRootRightOfMinusOne => "complex-root:re>-1",
        }
    }

    pub fn parse(text: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.as_str() == text)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a subnormality decision.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub subnormal: bool,
    pub branch: CaseBranch,
    pub rule_fired: Rule,
    pub roots: RootSet,
    /// The deciding inequality held with equality (or within tolerance).
    pub boundary_flag: bool,
    /// Relative tolerance applied in real mode.
    pub tolerance: Option<f64>,
}

impl Verdict {
    pub fn params(&self) -> &ModuleParams {
        &self.roots.params
    }

    /// Same decision, ignoring which rule was used to reach it.
    pub fn agrees_with(&self, other: &Verdict) -> bool {
        self.subnormal == other.subnormal && self.branch == other.branch && self.boundary_flag == other.boundary_flag
    }

    pub fn to_json(&self) -> VerdictJson {
        VerdictJson {
            s1: self.params().s1().to_string(),
            s2: self.params().s2().to_string(),
            branch: self.branch,
            subnormal: self.subnormal,
            rule_fired: self.rule_fired.as_str().to_string(),
            roots: self.roots.summary(),
            boundary_flag: self.boundary_flag,
        }
    }
}

/// Stable serialized form of a [`Verdict`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub s1: String,
    pub s2: String,
    pub branch: CaseBranch,
    pub subnormal: bool,
    pub rule_fired: String,
    pub roots: RootsSummary,
    pub boundary_flag: bool,
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

pub fn classify_corollary(params: &ModuleParams) -> Verdict {
    classify_corollary_with(params, DEFAULT_REL_TOL)
}

/// Sum/product form. The real-roots case uses a strict inequality, the
/// complex case a non-strict one.
pub fn classify_corollary_with(params: &ModuleParams, rel_tol: f64) -> Verdict {
    let sum = params.sum();
    let prod = params.prod();
    let split = compare(&params.gamma().square(), &(Scalar::int(24) * prod.clone()), rel_tol);
    let roots = roots_of_with(params, rel_tol);
    let tolerance = (!params.is_exact()).then_some(rel_tol);
    if split.ordering != Ordering::Less {
        let c = compare(&(Scalar::int(3) * sum), &prod, rel_tol);
        let subnormal = c.ordering == Ordering::Greater;
        let rule_fired = if subnormal { Rule::RealThreeSumAboveProduct } else { Rule::RealThreeSumAtMostProduct };
        Verdict {
            subnormal,
            branch: CaseBranch::RealRootsCase,
            rule_fired,
            roots,
            boundary_flag: split.boundary || c.boundary,
            tolerance,
        }
    } else {
        let c = compare(&sum, &prod, rel_tol);
        let subnormal = c.ordering != Ordering::Less;
        let rule_fired = if subnormal { Rule::ComplexSumAtLeastProduct } else { Rule::ComplexSumBelowProduct };
        Verdict {
            subnormal,
            branch: CaseBranch::ComplexRootCase,
            rule_fired,
            roots,
            boundary_flag: c.boundary,
            tolerance,
        }
    }
}

/// Root-location form: decided from the roots alone.
pub fn classify_theorem(roots: &RootSet) -> Verdict {
    let rel_tol = roots.tolerance.unwrap_or(DEFAULT_REL_TOL);
    if roots.branch.is_real() {
        let largest = roots.largest_real_root_sign();
        let subnormal = largest == Ordering::Less;
        let rule_fired = if subnormal { Rule::RootsInLeftHalfPlane } else { Rule::RootOutsideLeftHalfPlane };
        // a double root means the branch selection itself sat on its boundary
        let on_split = matches!(roots.branch, RootBranch::DoubleReal | RootBranch::TripleRoot);
        Verdict {
            subnormal,
            branch: CaseBranch::RealRootsCase,
            rule_fired,
            roots: roots.clone(),
            boundary_flag: on_split || roots.boundary_sensitive || largest == Ordering::Equal,
            tolerance: roots.tolerance,
        }
    } else {
        let c = compare(&roots.re(), &Scalar::int(-1), rel_tol);
        let subnormal = c.ordering != Ordering::Greater;
        let rule_fired = if subnormal { Rule::ComplexRootLeftOfMinusOne } else { Rule::ComplexRootRightOfMinusOne };
        Verdict {
            subnormal,
            branch: CaseBranch::ComplexRootCase,
            rule_fired,
            roots: roots.clone(),
            boundary_flag: c.boundary,
            tolerance: roots.tolerance,
        }
    }
}

/// The self-tensor product with `s1 = s2 = s`: subnormal for `s <= 2`,
/// never subnormal for `s >= 6`.
pub fn diagonal_special_case(s: &Scalar) -> crate::Result<Verdict> {
    let params = ModuleParams::new(s.clone(), s.clone())?;
    Ok(classify_corollary(&params))
}
