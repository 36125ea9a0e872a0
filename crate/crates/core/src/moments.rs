//! Moment sequences of weighted Bergman modules and of their module tensor
//! products, the reciprocal-moment cubic and its roots.
//!
//! The Bergman module with weight parameter `s > 0` has monomial moments
//! `1/(s n + 1)`. The reciprocal moments of a tensor product are the
//! convolution of the factors' reciprocal moments, which for two Bergman
//! modules collapses to the cubic
//!
//! ```text
//! p(n) = (n + 1)(P n^2 + G n + 6) / 6,   P = s1 s2,  G = 3(s1 + s2) - s1 s2.
//! ```

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};
use crate::scalar::{compare, rational_to_f64, Scalar, Surd, DEFAULT_REL_TOL};

/// Largest admissible moment index. Beyond this the big-integer sizes grow
/// without useful bound, so operations refuse.
pub const MAX_INDEX: u64 = 1 << 32;

pub(crate) fn check_index(n: u64) -> Result<()> {
    if n > MAX_INDEX {
        return Err(domain("n", format!("index {n} exceeds the supported maximum 2^32")));
    }
    Ok(())
}

/// The weight parameters `(s1, s2)` of a tensor product of two Bergman modules.
///
/// Only `s1` and `s2` are stored; the sum, product, `gamma` and the
/// discriminant are recomputed on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleParams {
    s1: Scalar,
    s2: Scalar,
}

impl ModuleParams {
    /// Both parameters must be strictly positive. If either is a double,
    /// both are treated as doubles.
    pub fn new(s1: Scalar, s2: Scalar) -> Result<Self> {
        if !s1.is_positive() {
            return Err(domain("s1", format!("weight parameter must be positive, got {s1}")));
        }
        if !s2.is_positive() {
            return Err(domain("s2", format!("weight parameter must be positive, got {s2}")));
        }
        let (s1, s2) = if s1.is_exact() && s2.is_exact() { (s1, s2) } else { (s1.as_approx(), s2.as_approx()) };
        Ok(ModuleParams { s1, s2 })
    }

    /// Exact parameters `n1/d1` and `n2/d2`.
    pub fn ratios(n1: i64, d1: i64, n2: i64, d2: i64) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(domain("denominator", "zero denominator"));
        }
        Self::new(Scalar::ratio(n1, d1), Scalar::ratio(n2, d2))
    }

    pub fn ints(s1: i64, s2: i64) -> Result<Self> {
        Self::ratios(s1, 1, s2, 1)
    }

    pub fn real(s1: f64, s2: f64) -> Result<Self> {
        if !s1.is_finite() || !s2.is_finite() {
            return Err(domain("s", "parameters must be finite"));
        }
        Self::new(Scalar::Approx(s1), Scalar::Approx(s2))
    }

    pub fn s1(&self) -> &Scalar {
        &self.s1
    }

    pub fn s2(&self) -> &Scalar {
        &self.s2
    }

    pub fn is_exact(&self) -> bool {
        self.s1.is_exact()
    }

    /// The same module with the two factors exchanged.
    pub fn swapped(&self) -> Self {
        ModuleParams { s1: self.s2.clone(), s2: self.s1.clone() }
    }

    /// `s1 + s2`
    pub fn sum(&self) -> Scalar {
        &self.s1 + &self.s2
    }

    /// `s1 s2`
    pub fn prod(&self) -> Scalar {
        &self.s1 * &self.s2
    }

    /// `3(s1 + s2) - s1 s2`
    pub fn gamma(&self) -> Scalar {
        Scalar::int(3) * self.sum() - self.prod()
    }

    /// `gamma^2 - 24 s1 s2`
    pub fn disc(&self) -> Scalar {
        self.gamma().square() - Scalar::int(24) * self.prod()
    }

    /// Exact images of the parameters (the dyadic values in real mode).
    pub fn exact_pair(&self) -> (BigRational, BigRational) {
        (self.s1.to_exact(), self.s2.to_exact())
    }
}

impl fmt::Display for ModuleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.s1, self.s2)
    }
}

/// A moment value. Moments are always computed exactly; in real mode the
/// exact value belongs to the dyadic inputs, and `rel_error` bounds the
/// relative deviation caused by rounding the true inputs to doubles.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentValue {
    pub value: BigRational,
    pub rel_error: f64,
}

impl MomentValue {
    fn exact(value: BigRational) -> Self {
        MomentValue { value, rel_error: 0.0 }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }
}

fn input_rel_error(params: &ModuleParams) -> f64 {
    // each summand (s1 k + 1)(s2 (n-k) + 1) moves by at most two half-ulps
    if params.is_exact() {
        0.0
    } else {
        2.0 * f64::EPSILON
    }
}

/// `1/(s n + 1)`, the monomial moment of the Bergman module with parameter `s`.
pub fn bergman_moment(s: &Scalar, n: u64) -> Result<MomentValue> {
    if !s.is_positive() {
        return Err(domain("s", format!("weight parameter must be positive, got {s}")));
    }
    check_index(n)?;
    let s_exact = s.to_exact();
    let value = (s_exact * BigRational::from_integer(n.into()) + BigRational::one()).recip();
    let rel_error = if s.is_exact() { 0.0 } else { f64::EPSILON };
    Ok(MomentValue { value, rel_error })
}

/// Reciprocal of the convolution sum `sum_k (s1 k + 1)(s2 (n - k) + 1)`,
/// accumulated term by term. With `s_i = p_i / q_i` every term is the
/// integer `(p1 k + q1)(p2 (n - k) + q2)` over `q1 q2`.
pub fn tensor_moment_bruteforce(params: &ModuleParams, n: u64) -> Result<MomentValue> {
    check_index(n)?;
    let (s1, s2) = params.exact_pair();
    let (p1, q1) = (s1.numer(), s1.denom());
    let (p2, q2) = (s2.numer(), s2.denom());
    let total = small_convolution(p1, q1, p2, q2, n).unwrap_or_else(|| {
        (0..=n).fold(BigInt::zero(), |acc, k| acc + (p1 * BigInt::from(k) + q1) * (p2 * BigInt::from(n - k) + q2))
    });
    let value = BigRational::new(q1 * q2, total);
    Ok(MomentValue { value, rel_error: input_rel_error(params) })
}

fn small_convolution(p1: &BigInt, q1: &BigInt, p2: &BigInt, q2: &BigInt, n: u64) -> Option<BigInt> {
    let [p1, q1, p2, q2] = [p1, q1, p2, q2].map(|v| i128::try_from(v).ok().filter(|x| x.abs() < 1 << 40));
    let (p1, q1, p2, q2) = (p1?, q1?, p2?, q2?);
    let n = i128::from(n);
    let mut total: i128 = 0;
    for k in 0..=n {
        let term = (p1 * k + q1).checked_mul(p2 * (n - k) + q2)?;
        total = total.checked_add(term)?;
    }
    Some(BigInt::from(total))
}

/// `6 / ((n + 1)(P n^2 + G n + 6))`.
pub fn tensor_moment_closed(params: &ModuleParams, n: u64) -> Result<MomentValue> {
    check_index(n)?;
    // built from the exact (dyadic) parameters so both modes agree with the oracle;
    // over the common denominator q1 q2 the cubic has integer coefficients
    let (s1, s2) = params.exact_pair();
    let (p1, q1) = (s1.numer(), s1.denom());
    let (p2, q2) = (s2.numer(), s2.denom());
    let pp = p1 * p2;
    let qq = q1 * q2;
    let g = BigInt::from(3) * (p1 * q2 + p2 * q1) - &pp;
    let nb = BigInt::from(n);
    let quadratic = (&pp * &nb + g) * &nb + BigInt::from(6) * &qq;
    let value = BigRational::new(BigInt::from(6) * qq, (nb + 1u32) * quadratic);
    if params.is_exact() {
        Ok(MomentValue::exact(value))
    } else {
        Ok(MomentValue { value, rel_error: input_rel_error(params) })
    }
}

/// The cubic `p(n) = (n + 1)(P n^2 + G n + 6)/6` whose reciprocal is the
/// tensor moment sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicData {
    /// `P = s1 s2`
    pub prod_p: Scalar,
    /// `G = 3(s1 + s2) - s1 s2`
    pub gamma: Scalar,
}

impl CubicData {
    /// Coefficients `[c0, c1, c2, c3]` of `p(n) = c3 n^3 + c2 n^2 + c1 n + c0`.
    pub fn coefficients(&self) -> [Scalar; 4] {
        let six = Scalar::int(6);
        let (p, g) = (&self.prod_p, &self.gamma);
        // (n+1)(P n^2 + G n + 6) = P n^3 + (P + G) n^2 + (G + 6) n + 6
        [Scalar::int(1), &(g + &six) / &six, &(p + g) / &six, p / &six]
    }

    /// Leading coefficient `P / 6`.
    pub fn leading(&self) -> Scalar {
        &self.prod_p / &Scalar::int(6)
    }

    /// Product of the two non-trivial roots, `6 / P`.
    pub fn scale(&self) -> Scalar {
        &Scalar::int(6) / &self.prod_p
    }

    /// Quadratic factor `(P, G, 6)` of `6 p(n) / (n + 1)`.
    pub fn quadratic_factor(&self) -> [Scalar; 3] {
        [self.prod_p.clone(), self.gamma.clone(), Scalar::int(6)]
    }

    /// Exact value at a rational point (uses the dyadic image in real mode).
    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        let p = self.prod_p.to_exact();
        let g = self.gamma.to_exact();
        let six = BigRational::from_integer(6.into());
        (x + BigRational::one()) * (&p * x * x + g * x + &six) / six
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let (p, g) = (self.prod_p.to_f64(), self.gamma.to_f64());
        (x + 1.0) * (p * x * x + g * x + 6.0) / 6.0
    }
}

pub fn cubic_of(params: &ModuleParams) -> CubicData {
    CubicData { prod_p: params.prod(), gamma: params.gamma() }
}

/// How the two non-trivial roots of the cubic are arranged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum RootBranch {
    DistinctReal,
    DoubleReal,
    TripleRoot,
    ComplexPair,
}

impl RootBranch {
    pub fn is_real(self) -> bool {
        self != RootBranch::ComplexPair
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RootBranch::DistinctReal => "DistinctReal",
            RootBranch::DoubleReal => "DoubleReal",
            RootBranch::TripleRoot => "TripleRoot",
            RootBranch::ComplexPair => "ComplexPair",
        }
    }
}

impl fmt::Display for RootBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `sqrt(|h|)` where `h = disc / (4 P^2)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Radical {
    Exact(Surd),
    Approx(f64),
}

impl Radical {
    pub fn to_f64(&self) -> f64 {
        match self {
            Radical::Exact(s) => s.to_f64(),
            Radical::Approx(v) => *v,
        }
    }

    fn squared(&self) -> Scalar {
        match self {
            Radical::Exact(s) => Scalar::Exact(s.squared()),
            Radical::Approx(v) => Scalar::Approx(v * v),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Radical::Exact(s) => s.coeff.is_zero(),
            Radical::Approx(v) => *v == 0.0,
        }
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radical::Exact(s) => write!(f, "{s}"),
            Radical::Approx(v) => write!(f, "{v}"),
        }
    }
}

/// The roots `{-1, alpha1, alpha2}` of the cubic.
///
/// The two non-trivial roots are `center ± radical` in the real branches
/// and `center ± i radical` in the complex branch, with `center = -G/(2P)`.
/// In rational mode both pieces are exact, so Vieta's relations hold exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub params: ModuleParams,
    pub branch: RootBranch,
    pub center: Scalar,
    pub radical: Radical,
    /// Set when a real-mode tolerance collapsed a near-double root.
    pub boundary_sensitive: bool,
    /// Relative tolerance used for real-mode collapses, if any.
    pub tolerance: Option<f64>,
}

/// A complex number as a `(re, im)` pair of doubles.
pub type ComplexF64 = (f64, f64);

impl RootSet {
    pub const FIXED_ROOT: i64 = -1;

    /// `alpha1 = center + radical` (or `center + i radical`).
    pub fn alpha1(&self) -> ComplexF64 {
        self.alphas().0
    }

    pub fn alpha2(&self) -> ComplexF64 {
        self.alphas().1
    }

    /// Both non-trivial roots as doubles. Real roots are computed so that
    /// the smaller-magnitude one comes from the product `6/P`, avoiding
    /// cancellation.
    pub fn alphas(&self) -> (ComplexF64, ComplexF64) {
        // + 0.0 turns -0.0 into 0.0
        let c = self.center.to_f64() + 0.0;
        let r = self.radical.to_f64();
        if let Some((x, y)) = self.rational_alphas() {
            return ((rational_to_f64(&x), 0.0), (rational_to_f64(&y), 0.0));
        }
        match self.branch {
            RootBranch::ComplexPair => ((c, r), (c, -r)),
            RootBranch::DoubleReal | RootBranch::TripleRoot => ((c, 0.0), (c, 0.0)),
            RootBranch::DistinctReal => {
                let product = self.vieta_product().to_f64();
                let big = if c >= 0.0 { c + r } else { c - r };
                let small = product / big;
                if big >= small {
                    ((big, 0.0), (small, 0.0))
                } else {
                    ((small, 0.0), (big, 0.0))
                }
            }
        }
    }

    /// The two non-trivial roots as exact rationals, when they are rational.
    pub fn rational_alphas(&self) -> Option<(BigRational, BigRational)> {
        let Scalar::Exact(c) = &self.center else { return None };
        match (&self.radical, self.branch) {
            (_, RootBranch::ComplexPair) => None,
            (Radical::Exact(s), _) => s.rational().map(|r| (c + &r, c - &r)),
            _ => None,
        }
    }

    /// `alpha1 + alpha2`, which must equal `-G/P`.
    pub fn vieta_sum(&self) -> Scalar {
        Scalar::int(2) * self.center.clone()
    }

    /// `alpha1 alpha2`, which must equal `6/P`.
    pub fn vieta_product(&self) -> Scalar {
        let c2 = self.center.square();
        match self.branch {
            RootBranch::ComplexPair => c2 + self.radical.squared(),
            _ => c2 - self.radical.squared(),
        }
    }

    /// Real part of the complex pair.
    pub fn re(&self) -> Scalar {
        self.center.clone()
    }

    /// Imaginary part `b > 0` of the complex pair (zero in real branches).
    pub fn im(&self) -> f64 {
        match self.branch {
            RootBranch::ComplexPair => self.radical.to_f64(),
            _ => 0.0,
        }
    }

    /// Sign of the largest real root, decided exactly in rational mode.
    pub fn largest_real_root_sign(&self) -> Ordering {
        debug_assert!(self.branch.is_real());
        match (&self.center, &self.radical) {
            (Scalar::Exact(c), Radical::Exact(s)) => {
                // sign(c + s) with s >= 0
                if !c.is_negative() {
                    if c.is_zero() && s.coeff.is_zero() {
                        Ordering::Equal
                    } else {
                        Ordering::Greater
                    }
                } else {
                    s.cmp_rational(&-c)
                }
            }
            _ => {
                let v = self.center.to_f64() + self.radical.to_f64();
                v.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
            }
        }
    }

    /// Whether one of the non-trivial roots equals the fixed root `-1`
    /// (exactly, or within the tolerance in real mode).
    pub fn touches_fixed_root(&self) -> bool {
        if !self.branch.is_real() {
            return false;
        }
        if let Some((a1, a2)) = self.rational_alphas() {
            let m1 = -BigRational::one();
            return a1 == m1 || a2 == m1;
        }
        if self.is_exact() {
            return false;
        }
        let tol = self.tolerance.unwrap_or(DEFAULT_REL_TOL);
        let (a1, a2) = self.alphas();
        (a1.0 + 1.0).abs() <= tol || (a2.0 + 1.0).abs() <= tol
    }

    pub fn is_exact(&self) -> bool {
        self.center.is_exact() && matches!(self.radical, Radical::Exact(_))
    }

    /// Human-readable exact form of `alpha1` and `alpha2`.
    pub fn exact_strings(&self) -> (String, String) {
        if let Some((a1, a2)) = self.rational_alphas() {
            return (a1.to_string(), a2.to_string());
        }
        let c = &self.center;
        let r = &self.radical;
        let unit = if self.branch == RootBranch::ComplexPair { "i*" } else { "" };
        if self.radical.is_zero() {
            return (c.to_string(), c.to_string());
        }
        let zero_center = c.signum() == Ordering::Equal;
        if zero_center {
            (format!("{unit}{r}"), format!("-{unit}{r}"))
        } else {
            (format!("{c} + {unit}{r}"), format!("{c} - {unit}{r}"))
        }
    }
}

/// One root in serialized form: double-precision parts plus the exact
/// expression (decimal in real mode).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RootJson {
    pub re: f64,
    pub im: f64,
    pub exact: String,
}

/// Serialized form of a [`RootSet`].
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RootsSummary {
    pub fixed_root: i64,
    pub branch: RootBranch,
    pub alpha1: RootJson,
    pub alpha2: RootJson,
    pub boundary_sensitive: bool,
}

impl RootSet {
    pub fn summary(&self) -> RootsSummary {
        let (a1, a2) = self.alphas();
        let (e1, e2) = self.exact_strings();
        RootsSummary {
            fixed_root: Self::FIXED_ROOT,
            branch: self.branch,
            alpha1: RootJson { re: a1.0, im: a1.1, exact: e1 },
            alpha2: RootJson { re: a2.0, im: a2.1, exact: e2 },
            boundary_sensitive: self.boundary_sensitive,
        }
    }
}

/// Roots of the cubic with the default real-mode tolerance.
pub fn roots_of(params: &ModuleParams) -> RootSet {
    roots_of_with(params, DEFAULT_REL_TOL)
}

/// Roots of the cubic. `rel_tol` only matters in real mode, where a
/// discriminant within `rel_tol` of zero (relative to `G^2` and `24 P`)
/// collapses to a double root and marks the set boundary-sensitive.
pub fn roots_of_with(params: &ModuleParams, rel_tol: f64) -> RootSet {
    let p = params.prod();
    let g = params.gamma();
    let two_p = Scalar::int(2) * p.clone();
    let center = -(&g / &two_p);
    let split = compare(&g.square(), &(Scalar::int(24) * p.clone()), rel_tol);
    let tolerance = (!params.is_exact()).then_some(rel_tol);
    let boundary_sensitive = split.boundary && !params.is_exact();

    let branch_for_double = |center: &Scalar| {
        let c = compare(center, &Scalar::int(-1), rel_tol);
        if c.ordering == Ordering::Equal {
            RootBranch::TripleRoot
        } else {
            RootBranch::DoubleReal
        }
    };

    let (branch, radical, center) = match split.ordering {
        Ordering::Equal => {
            let branch = branch_for_double(&center);
            let zero = match params.is_exact() {
                true => Radical::Exact(Surd::sqrt_of(&BigRational::zero())),
                false => Radical::Approx(0.0),
            };
            // a collapsed triple root is pinned to -1 exactly
            let center =
                if branch == RootBranch::TripleRoot && !params.is_exact() { Scalar::Approx(-1.0) } else { center };
            (branch, zero, center)
        }
        ord => {
            let branch = if ord == Ordering::Greater { RootBranch::DistinctReal } else { RootBranch::ComplexPair };
            let disc = params.disc();
            let h = &disc / &two_p.square();
            let radical = match h {
                Scalar::Exact(h) => Radical::Exact(Surd::sqrt_of(&h.abs())),
                Scalar::Approx(h) => Radical::Approx(h.abs().sqrt()),
            };
            (branch, radical, center)
        }
    };
    RootSet { params: params.clone(), branch, center, radical, boundary_sensitive, tolerance }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn bergman_moment_values() {
        assert_eq!(bergman_moment(&Scalar::int(1), 0).unwrap().value, q(1, 1));
        assert_eq!(bergman_moment(&Scalar::int(1), 3).unwrap().value, q(1, 4));
        assert_eq!(bergman_moment(&Scalar::ratio(3, 2), 2).unwrap().value, q(1, 4));
        assert!(bergman_moment(&Scalar::int(0), 1).is_err());
        assert!(bergman_moment(&Scalar::int(-1), 1).is_err());
        assert!(bergman_moment(&Scalar::int(1), MAX_INDEX + 1).is_err());
    }

    #[test]
    fn bruteforce_sums() {
        let one = ModuleParams::ints(1, 1).unwrap();
        assert_eq!(tensor_moment_bruteforce(&one, 0).unwrap().value, q(1, 1));
        assert_eq!(tensor_moment_bruteforce(&one, 1).unwrap().value, q(1, 4));
        let p = ModuleParams::ints(15, 10).unwrap();
        assert_eq!(tensor_moment_bruteforce(&p, 1).unwrap().value, q(1, 27));
    }

    #[test]
    fn closed_form_values() {
        let one = ModuleParams::ints(1, 1).unwrap();
        assert_eq!(tensor_moment_closed(&one, 1).unwrap().value, q(1, 4));
        assert_eq!(tensor_moment_closed(&one, 2).unwrap().value, q(1, 10));
        let odd = ModuleParams::ratios(7, 3, 5, 11).unwrap();
        assert_eq!(tensor_moment_closed(&odd, 0).unwrap().value, q(1, 1));
    }

    #[test]
    fn nonpositive_params_rejected() {
        assert!(ModuleParams::ints(0, 1).is_err());
        assert!(ModuleParams::ints(1, -2).is_err());
        assert!(ModuleParams::real(f64::NAN, 1.0).is_err());
        let e = ModuleParams::ints(1, 0).unwrap_err().to_string();
        assert!(e.contains("s2"), "{e}");
    }

    #[test]
    fn cubic_examples() {
        let c = cubic_of(&ModuleParams::ints(1, 1).unwrap());
        assert_eq!(c.quadratic_factor(), [Scalar::int(1), Scalar::int(5), Scalar::int(6)]);
        let c = cubic_of(&ModuleParams::ints(6, 6).unwrap());
        assert_eq!(c.quadratic_factor(), [Scalar::int(36), Scalar::int(0), Scalar::int(6)]);
        let c = cubic_of(&ModuleParams::ints(15, 10).unwrap());
        assert_eq!(c.quadratic_factor(), [Scalar::int(150), Scalar::int(-75), Scalar::int(6)]);
        assert_eq!(c.eval_exact(&BigRational::zero()), BigRational::one());
        assert_eq!(c.leading(), Scalar::int(25));
        assert_eq!(c.coefficients()[0], Scalar::int(1));
    }

    #[test]
    fn roots_examples() {
        let r = roots_of(&ModuleParams::ints(1, 1).unwrap());
        assert_eq!(r.branch, RootBranch::DistinctReal);
        assert_eq!(r.rational_alphas(), Some((q(-2, 1), q(-3, 1))));

        let r = roots_of(&ModuleParams::ints(15, 10).unwrap());
        assert_eq!(r.branch, RootBranch::DistinctReal);
        assert_eq!(r.rational_alphas(), Some((q(2, 5), q(1, 10))));

        let r = roots_of(&ModuleParams::ints(6, 6).unwrap());
        assert_eq!(r.branch, RootBranch::ComplexPair);
        assert_eq!(r.center, Scalar::int(0));
        let Radical::Exact(b) = &r.radical else { panic!() };
        assert_eq!(b.squared(), q(1, 6));

        let r = roots_of(&ModuleParams::ints(2, 2).unwrap());
        assert_eq!(r.branch, RootBranch::ComplexPair);
        assert_eq!(r.center, Scalar::int(-1));
        let Radical::Exact(b) = &r.radical else { panic!() };
        assert_eq!(b.squared(), q(1, 2));
    }

    #[test]
    fn triple_root_in_real_mode() {
        let s3 = 3f64.sqrt();
        let r = roots_of(&ModuleParams::real(3.0 + s3, 3.0 - s3).unwrap());
        assert_eq!(r.branch, RootBranch::TripleRoot);
        assert!(r.boundary_sensitive);
        assert_eq!(r.alpha1(), (-1.0, 0.0));
        assert_eq!(r.alpha2(), (-1.0, 0.0));
    }

    #[test]
    fn double_root_exact() {
        // (1, 3/2): G = 6, 24 P = 36
        let r = roots_of(&ModuleParams::ratios(1, 1, 3, 2).unwrap());
        assert_eq!(r.branch, RootBranch::DoubleReal);
        assert!(!r.boundary_sensitive);
        assert_eq!(r.rational_alphas(), Some((q(-2, 1), q(-2, 1))));
        // (1, 3) has -1 as a simple root of the quadratic factor
        let r = roots_of(&ModuleParams::ints(1, 3).unwrap());
        assert_eq!(r.branch, RootBranch::DistinctReal);
        assert!(r.touches_fixed_root());
        assert_eq!(r.rational_alphas(), Some((q(-1, 1), q(-2, 1))));
    }

    #[test]
    fn rational_real_root_ordering() {
        let r = roots_of(&ModuleParams::ratios(3, 2, 25, 1).unwrap());
        let (a1, a2) = r.alphas();
        let s6 = 6f64.sqrt();
        assert!((a1.0 - 2.0 * (-7.0 + 2.0 * s6) / 25.0).abs() < 1e-15);
        assert!((a2.0 - 2.0 * (-7.0 - 2.0 * s6) / 25.0).abs() < 1e-15);
        assert_eq!(r.largest_real_root_sign(), Ordering::Less);
        let (e1, e2) = r.exact_strings();
        assert_eq!(e1, "-14/25 + 4/25*sqrt(6)");
        assert_eq!(e2, "-14/25 - 4/25*sqrt(6)");
    }
}
