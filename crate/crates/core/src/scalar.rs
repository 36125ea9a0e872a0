//! Numbers in the two numeric modes, plus exact square roots of rationals.
//!
//! In rational mode every quantity is a [`BigRational`] and every sign is
//! decided exactly. In real mode inputs are IEEE doubles; derived
//! quantities are doubles too, and equality is decided against a relative
//! tolerance. Anything that needs a certified sign (finite differences,
//! moments) converts a double to the dyadic rational it denotes and works
//! exactly from there.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default relative tolerance for boundary decisions in real mode.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

/// Which arithmetic the caller asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    Rational,
    Real,
}

impl FromStr for NumericMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(NumericMode::Rational),
            "real" => Ok(NumericMode::Real),
            _ => Err(Error::Parse { input: s.to_string(), expected: "numeric mode (rational|real)" }),
        }
    }
}

/// A scalar that is either an exact rational or an IEEE double.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Approx(f64),
}

impl Scalar {
    pub fn int(v: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Parses text in the requested mode. Rational mode accepts integers,
    /// fractions `p/q` and decimals with an optional exponent, all exactly.
    pub fn parse(text: &str, mode: NumericMode) -> Result<Self> {
        match mode {
            NumericMode::Rational => parse_rational(text).map(Scalar::Exact),
            NumericMode::Real => {
                let v: f64 = text
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse { input: text.to_string(), expected: "real number" })?;
                if !v.is_finite() {
                    return Err(Error::Parse { input: text.to_string(), expected: "finite real number" });
                }
                Ok(Scalar::Approx(v))
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Approx(v) => *v,
        }
    }

    /// The exact rational value. For a double this is the dyadic rational
    /// it represents, so no information is lost.
    pub fn to_exact(&self) -> BigRational {
        match self {
            Scalar::Exact(r) => r.clone(),
            Scalar::Approx(v) => BigRational::from_float(*v).expect("finite double"),
        }
    }

    pub fn as_approx(&self) -> Scalar {
        Scalar::Approx(self.to_f64())
    }

    pub fn signum(&self) -> Ordering {
        match self {
            Scalar::Exact(r) => r.cmp(&BigRational::zero()),
            Scalar::Approx(v) => v.partial_cmp(&0.0).unwrap_or(Ordering::Equal),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Approx(v) => Scalar::Approx(v.abs()),
        }
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// Total order on values, comparing doubles against rationals exactly.
    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => self.to_exact().cmp(&other.to_exact()),
        }
    }
}

fn lift(
    a: &Scalar,
    b: &Scalar,
    exact: impl Fn(&BigRational, &BigRational) -> BigRational,
    approx: impl Fn(f64, f64) -> f64,
) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(exact(x, y)),
        _ => Scalar::Approx(approx(a.to_f64(), b.to_f64())),
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                lift(self, rhs, |x, y| x $op y, |x, y| x $op y)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Approx(v) => Scalar::Approx(-v),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", r),
            Scalar::Approx(v) => write!(f, "{}", v),
        }
    }
}

/// Outcome of comparing two scalars. `boundary` is set when the two are
/// equal (exactly in rational mode, within tolerance in real mode).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparison {
    pub ordering: Ordering,
    pub boundary: bool,
}

/// Compares `x` with `y`. Exact inputs are compared exactly; otherwise a
/// relative tolerance `rel_tol` against the larger magnitude collapses
/// near-equal values to `Equal`.
pub fn compare(x: &Scalar, y: &Scalar, rel_tol: f64) -> Comparison {
    match (x, y) {
        (Scalar::Exact(a), Scalar::Exact(b)) => {
            let ordering = a.cmp(b);
            Comparison { ordering, boundary: ordering == Ordering::Equal }
        }
        _ => {
            let (a, b) = (x.to_f64(), y.to_f64());
            let scale = a.abs().max(b.abs());
            if (a - b).abs() <= rel_tol * scale {
                Comparison { ordering: Ordering::Equal, boundary: true }
            } else {
                Comparison { ordering: a.partial_cmp(&b).unwrap_or(Ordering::Equal), boundary: false }
            }
        }
    }
}

/// Converts a big rational to the nearest double, without overflowing
/// when numerator and denominator are individually huge.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    let (num, den) = (r.numer(), r.denom());
    let shift = num.bits() as i64 - den.bits() as i64;
    // scale into [2^-64, 2^64) by a power of two, then convert
    let scaled = if shift > 0 {
        BigRational::new(num.clone(), den.clone() << (shift as u64))
    } else {
        BigRational::new(num.clone() << ((-shift) as u64), den.clone())
    };
    let m = scaled.to_f64().unwrap_or(f64::NAN);
    m * 2f64.powi(shift.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let err = || Error::Parse { input: text.to_string(), expected: "rational number" };
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_decimal(n.trim()).ok_or_else(err)?;
        let d = parse_decimal(d.trim()).ok_or_else(err)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(n / d);
    }
    parse_decimal(t).ok_or_else(err)
}

/// Parses `[-+]digits[.digits][e[-+]digits]` exactly.
fn parse_decimal(t: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{}{}", int_part, frac_part);
    let mut value = BigRational::from_integer(joined.parse::<BigInt>().ok()?);
    let scale = exponent as i64 - frac_part.len() as i64;
    if scale.unsigned_abs() > 4096 {
        return None;
    }
    let ten = BigRational::from_integer(BigInt::from(10));
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= pow;
    } else {
        value /= pow;
    }
    if negative {
        value = -value;
    }
    Some(value)
}

/// An exact nonnegative square root `coeff * sqrt(radicand)` of a rational.
///
/// `radicand` is a positive integer with every square factor below the
/// trial-division bound removed; it is `1` exactly when the root is
/// rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    pub coeff: BigRational,
    pub radicand: BigInt,
}

const TRIAL_DIVISION_BOUND: u64 = 1 << 16;

impl Surd {
    /// Square root of a nonnegative rational.
    pub fn sqrt_of(value: &BigRational) -> Surd {
        assert!(!value.is_negative(), "square root of a negative rational");
        if value.is_zero() {
            return Surd { coeff: BigRational::zero(), radicand: BigInt::one() };
        }
        // sqrt(n/d) = sqrt(n d) / d
        let den = value.denom().clone();
        let (outside, inside) = split_square(&(value.numer() * &den));
        Surd { coeff: BigRational::new(outside, den), radicand: inside }
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_one() || self.coeff.is_zero()
    }

    pub fn rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeff.clone())
    }

    /// The square of the root, which is exact.
    pub fn squared(&self) -> BigRational {
        &self.coeff * &self.coeff * BigRational::from_integer(self.radicand.clone())
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.coeff) * rational_to_f64(&BigRational::from_integer(self.radicand.clone())).sqrt()
    }

    /// Compares `self` with a nonnegative rational exactly.
    pub fn cmp_rational(&self, other: &BigRational) -> Ordering {
        if other.is_negative() {
            return Ordering::Greater;
        }
        self.squared().cmp(&(other * other))
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.coeff)
        } else if self.coeff.is_one() {
            write!(f, "sqrt({})", self.radicand)
        } else {
            write!(f, "{}*sqrt({})", self.coeff, self.radicand)
        }
    }
}

/// Writes `n = outside^2 * inside`, pulling out the square factors found by
/// trial division and a final perfect-square check.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert_eq!(n.sign(), Sign::Plus);
    if let Some(small) = n.to_u128() {
        let (outside, inside) = split_square_u128(small);
        return (BigInt::from(outside), BigInt::from(inside));
    }
    let mut rest = n.clone();
    let mut outside = BigInt::one();
    let mut inside = BigInt::one();
    let mut p: u64 = 2;
    while p < TRIAL_DIVISION_BOUND {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut count = 0u32;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            count += 1;
        }
        if count > 0 {
            outside *= num_traits::pow(bp.clone(), (count / 2) as usize);
            if count % 2 == 1 {
                inside *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        outside *= root;
    } else {
        inside *= rest;
    }
    (outside, inside)
}

fn split_square_u128(mut rest: u128) -> (u128, u128) {
    let mut outside: u128 = 1;
    let mut inside: u128 = 1;
    let mut p: u128 = 2;
    while p < TRIAL_DIVISION_BOUND as u128 && p * p <= rest {
        let mut count = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            count += 1;
        }
        outside *= p.pow(count / 2);
        if count % 2 == 1 {
            inside *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = BigInt::from(rest).sqrt().to_u128().expect("root fits");
    if root * root == rest {
        outside *= root;
    } else {
        inside *= rest;
    }
    (outside, inside)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_rational("1.5").unwrap(), q(3, 2));
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("-2.5e-1").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("3/2").unwrap(), q(3, 2));
        assert_eq!(parse_rational(" 25 ").unwrap(), q(25, 1));
        assert_eq!(parse_rational("1e3").unwrap(), q(1000, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
    }

    #[test]
    fn bad_numbers_are_rejected() {
        for bad in ["", "abc", "1/0", "1..2", "--1", "e5", "1/"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert!(Scalar::parse("nan", NumericMode::Real).is_err());
        assert!(Scalar::parse("x", NumericMode::Real).is_err());
    }

    #[test]
    fn surd_extracts_squares() {
        // sqrt(864/5625) = 4 sqrt(6) / 25
        let s = Surd::sqrt_of(&q(864, 5625));
        assert_eq!(s.coeff, q(4, 25));
        assert_eq!(s.radicand, BigInt::from(6));
        assert_eq!(s.squared(), q(864, 5625));
        let r = Surd::sqrt_of(&q(9, 400));
        assert_eq!(r.rational(), Some(q(3, 20)));
        assert_eq!(Surd::sqrt_of(&q(0, 1)).rational(), Some(q(0, 1)));
    }

    #[test]
    fn surd_large_prime_square() {
        // 65537^2 exceeds the trial-division bound; the perfect-square check catches it
        let p = BigInt::from(65537u64);
        let n = BigRational::from_integer(&p * &p * BigInt::from(12));
        let s = Surd::sqrt_of(&n);
        assert_eq!(s.coeff, BigRational::from_integer(&p * BigInt::from(2)));
        assert_eq!(s.radicand, BigInt::from(3));
    }

    #[test]
    fn compare_modes() {
        let c = compare(&Scalar::int(2), &Scalar::ratio(4, 2), 0.0);
        assert!(c.boundary && c.ordering == Ordering::Equal);
        let c = compare(&Scalar::Approx(1.0), &Scalar::Approx(1.0 + 1e-14), 1e-12);
        assert!(c.boundary);
        let c = compare(&Scalar::Approx(1.0), &Scalar::Approx(1.0 + 1e-9), 1e-12);
        assert_eq!(c.ordering, Ordering::Less);
        assert!(!c.boundary);
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let r = BigRational::new(&big * BigInt::from(3), &big * BigInt::from(2));
        assert_eq!(rational_to_f64(&r), 1.5);
        let tiny = BigRational::new(BigInt::one(), big.clone());
        assert_eq!(rational_to_f64(&tiny), 0.0);
        let r = BigRational::new(BigInt::from(-7), BigInt::from(3));
        assert!((rational_to_f64(&r) + 7.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn dyadic_round_trip() {
        let s = Scalar::Approx(0.1);
        assert_eq!(rational_to_f64(&s.to_exact()), 0.1);
        assert_ne!(s.to_exact(), q(1, 10));
    }
}
