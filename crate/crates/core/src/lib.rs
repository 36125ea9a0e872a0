//! Subnormality of module tensor products of weighted Bergman modules.
//!
//! The tensor product of the Bergman modules with weight parameters `s1`
//! and `s2` has moments `6 / ((n + 1)(P n^2 + G n + 6))` where
//! `P = s1 s2` and `G = 3(s1 + s2) - s1 s2`. Subnormality is equivalent to
//! this being a Hausdorff moment sequence, which is decided here three
//! ways:
//!
//! * [`classify`]: root location of the cubic and the equivalent
//!   sum/product inequalities,
//! * [`cm`]: exact finite differences that exhibit a negative `D_m(n)`,
//! * [`density`]: the explicit representing density on `(0, 1]`, its
//!   positivity, and a point where it turns negative.
//!
//! Only `s1, s2 > 0` are accepted; the Hardy-space limit `s = 0` is not.

pub mod classify;
pub mod cm;
pub mod density;
pub mod error;
pub mod moments;
pub mod scalar;

pub use classify::{classify_corollary, classify_theorem, diagonal_special_case, CaseBranch, Rule, Verdict};
pub use cm::{
    finite_difference, is_completely_monotone_upto, smallest_failing_order, DiffTable, MomentSequence, PrecisionBudget,
    Witness,
};
pub use density::{WeightCase, WeightSpec};
pub use error::{Error, Result};
pub use moments::{
    bergman_moment, cubic_of, roots_of, tensor_moment_bruteforce, tensor_moment_closed, CubicData, ModuleParams,
    MomentValue, RootBranch, RootSet,
};
pub use scalar::{NumericMode, Scalar};
