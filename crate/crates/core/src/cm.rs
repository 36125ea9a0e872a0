//! Exact finite differences of moment sequences.
//!
//! A positive sequence `phi` is completely monotone when every
//! `D_m(n) = sum_j (-1)^j C(m, j) phi(n + j)` is nonnegative. The scanner
//! here never uses binomials: it builds the table with
//! `D_{m+1}(n) = D_m(n) - D_m(n + 1)`.
//!
//! Tensor moments are `Q / I(n)` with integers `I(n)`, so after scaling
//! by `L = lcm(I(0), ..., I(N))` every table entry becomes an integer and
//! each cell costs one big-integer subtraction. Signs are exact.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::moments::{check_index, tensor_moment_closed, ModuleParams};
use crate::scalar::rational_to_f64;

/// Default table bounds for witness scans.
pub const DEFAULT_M_CAP: u64 = 120;
pub const DEFAULT_N_CAP: u64 = 120;

/// Upper bound on the size of any big integer the engine will build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionBudget {
    pub max_bits: u64,
}

impl Default for PrecisionBudget {
    fn default() -> Self {
        PrecisionBudget { max_bits: 1 << 24 }
    }
}

impl PrecisionBudget {
    fn check(&self, needed_bits: u64) -> Result<()> {
        if needed_bits > self.max_bits {
            Err(Error::Precision { needed_bits, budget_bits: self.max_bits })
        } else {
            Ok(())
        }
    }
}

/// Anything that can hand out exact terms of a sequence.
pub trait MomentSequence {
    fn term(&self, n: u64) -> Result<BigRational>;
}

impl MomentSequence for ModuleParams {
    fn term(&self, n: u64) -> Result<BigRational> {
        Ok(tensor_moment_closed(self, n)?.value)
    }
}

/// Adapts a closure into a [`MomentSequence`].
pub struct FnSequence<F>(pub F);

impl<F: Fn(u64) -> BigRational> MomentSequence for FnSequence<F> {
    fn term(&self, n: u64) -> Result<BigRational> {
        Ok((self.0)(n))
    }
}

/// `sum_{j=0}^{m} (-1)^j C(m, j) phi(n + j)`, evaluated directly.
pub fn finite_difference<S: MomentSequence + ?Sized>(phi: &S, m: u64, n: u64) -> Result<BigRational> {
    finite_difference_with(phi, m, n, PrecisionBudget::default())
}

pub fn finite_difference_with<S: MomentSequence + ?Sized>(
    phi: &S,
    m: u64,
    n: u64,
    budget: PrecisionBudget,
) -> Result<BigRational> {
    let last = n.checked_add(m).ok_or_else(|| domain("m", "m + n overflows"))?;
    check_index(last)?;
    let mut binom = BigInt::one();
    let mut total = BigRational::zero();
    for j in 0..=m {
        let term = phi.term(n + j)? * BigRational::from_integer(binom.clone());
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        budget.check(total.numer().bits() + total.denom().bits())?;
        binom = binom * BigInt::from(m - j) / BigInt::from(j + 1);
    }
    Ok(total)
}

/// A certificate that a sequence is not completely monotone, or that a
/// representing density takes a negative value.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `D_m(n) = value < 0`, with the sign decided exactly.
    NegativeDifference { m: u64, n: u64, value: BigRational },
    /// `w(t) = value < 0` for some `t` in `(0, 1)`.
    NegativeDensity { t: f64, value: f64 },
}

impl Witness {
    pub fn value_f64(&self) -> f64 {
        match self {
            Witness::NegativeDifference { value, .. } => rational_to_f64(value),
            Witness::NegativeDensity { value, .. } => *value,
        }
    }
}

/// Tensor moments scaled to integers over a common denominator:
/// `phi(n) = q * values[n] / lcm`.
struct ScaledMoments {
    q: BigInt,
    lcm: BigInt,
    values: Vec<BigInt>,
}

/// Integer form of the reciprocal moment: with `s_i = p_i / q_i`,
/// `I(n) = sum_k (p1 k + q1)(p2 (n - k) + q2) = q1 q2 / phi(n)`.
struct IntegerCubic {
    p: BigInt,
    g: BigInt,
    q: BigInt,
}

impl IntegerCubic {
    fn of(params: &ModuleParams) -> Self {
        let (s1, s2) = params.exact_pair();
        let (p1, q1) = (s1.numer().clone(), s1.denom().clone());
        let (p2, q2) = (s2.numer().clone(), s2.denom().clone());
        let p = &p1 * &p2;
        let g = BigInt::from(3) * (&p1 * &q2 + &p2 * &q1) - &p;
        IntegerCubic { p, g, q: q1 * q2 }
    }

    /// `(n + 1)(P n^2 + G n + 6 Q) / 6`, always an integer.
    fn eval(&self, n: u64) -> BigInt {
        let x = BigInt::from(n);
        let full = (&x + 1u32) * (&self.p * &x * &x + &self.g * &x + BigInt::from(6) * &self.q);
        let (quot, rem) = full.div_rem(&BigInt::from(6));
        debug_assert!(rem.is_zero());
        quot
    }
}

fn scaled_moments(params: &ModuleParams, len: u64, budget: PrecisionBudget) -> Result<ScaledMoments> {
    let cubic = IntegerCubic::of(params);
    let reciprocals: Vec<BigInt> = (0..len).map(|n| cubic.eval(n)).collect();
    let mut lcm = BigInt::one();
    for r in &reciprocals {
        lcm = lcm.lcm(r);
        budget.check(lcm.bits())?;
    }
    let values = reciprocals.iter().map(|r| &lcm / r).collect();
    Ok(ScaledMoments { q: cubic.q, lcm, values })
}

fn table_len(m_max: u64, n_max: u64) -> Result<u64> {
    let len = m_max
        .checked_add(n_max)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| domain("m_max", "table bounds overflow"))?;
    check_index(len)?;
    Ok(len)
}

/// The full table `D_m(n)` for `m <= m_max` and `n <= n_max + (m_max - m)`.
///
/// Entries are stored as integers sharing the positive factor `q / lcm`.
#[derive(Debug, Clone)]
pub struct DiffTable {
    pub params: ModuleParams,
    pub m_max: u64,
    pub n_max: u64,
    q: BigInt,
    lcm: BigInt,
    rows: Vec<Vec<BigInt>>,
}

impl DiffTable {
    pub fn build(params: &ModuleParams, m_max: u64, n_max: u64) -> Result<Self> {
        Self::build_with(params, m_max, n_max, PrecisionBudget::default())
    }

    pub fn build_with(params: &ModuleParams, m_max: u64, n_max: u64, budget: PrecisionBudget) -> Result<Self> {
        let len = table_len(m_max, n_max)?;
        let scaled = scaled_moments(params, len, budget)?;
        budget.check(scaled.lcm.bits() + m_max)?;
        let mut rows = Vec::with_capacity(m_max as usize + 1);
        let mut row = scaled.values;
        for _ in 0..m_max {
            let next: Vec<BigInt> = row.windows(2).map(|w| &w[0] - &w[1]).collect();
            rows.push(row);
            row = next;
        }
        rows.push(row);
        Ok(DiffTable { params: params.clone(), m_max, n_max, q: scaled.q, lcm: scaled.lcm, rows })
    }

    fn raw(&self, m: u64, n: u64) -> Option<&BigInt> {
        self.rows.get(m as usize)?.get(n as usize)
    }

    /// Exact `D_m(n)`, if it lies inside the table.
    pub fn get(&self, m: u64, n: u64) -> Option<BigRational> {
        self.raw(m, n).map(|v| BigRational::new(v * &self.q, self.lcm.clone()))
    }

    pub fn sign(&self, m: u64, n: u64) -> Option<Ordering> {
        self.raw(m, n).map(|v| v.cmp(&BigInt::zero()))
    }

    /// Number of stored offsets in row `m`.
    pub fn row_len(&self, m: u64) -> usize {
        self.rows.get(m as usize).map_or(0, Vec::len)
    }

    /// Checks `D_{m+1}(n) = D_m(n) - D_m(n + 1)` on every stored cell.
    pub fn pascal_consistent(&self) -> bool {
        self.rows.windows(2).all(|pair| {
            let (upper, lower) = (&pair[0], &pair[1]);
            lower.len() + 1 == upper.len() && lower.iter().enumerate().all(|(n, v)| *v == &upper[n] - &upper[n + 1])
        })
    }

    /// Lexicographically smallest `(m, n)` with `n <= n_max` and `D_m(n) < 0`.
    pub fn first_negative(&self) -> Option<(u64, u64)> {
        self.rows.iter().enumerate().find_map(|(m, row)| {
            row.iter().take(self.n_max as usize + 1).position(|v| v.is_negative()).map(|n| (m as u64, n as u64))
        })
    }
}

/// Scans `D_m(n)` row by row for `m <= m_max`, `n <= n_max`, returning the
/// lexicographically smallest negative entry. `None` means no witness
/// exists within the bounds, not that the sequence is completely monotone.
pub fn is_completely_monotone_upto(params: &ModuleParams, m_max: u64, n_max: u64) -> Result<Option<Witness>> {
    scan_differences(params, m_max, n_max, PrecisionBudget::default())
}

pub fn scan_differences(
    params: &ModuleParams,
    m_max: u64,
    n_max: u64,
    budget: PrecisionBudget,
) -> Result<Option<Witness>> {
    if m_max < 1 || n_max < 1 {
        return Err(domain("m_max", "scan bounds must be at least 1"));
    }
    let len = table_len(m_max, n_max)?;
    let scaled = scaled_moments(params, len, budget)?;
    budget.check(scaled.lcm.bits() + m_max)?;
    let mut row = scaled.values;
    for m in 0..=m_max {
        if let Some(n) = row.iter().take(n_max as usize + 1).position(|v| v.is_negative()) {
            let value = BigRational::new(&row[n] * &scaled.q, scaled.lcm.clone());
            return Ok(Some(Witness::NegativeDifference { m, n: n as u64, value }));
        }
        if m < m_max {
            next_row(&mut row);
        }
    }
    Ok(None)
}

fn next_row(row: &mut Vec<BigInt>) {
    for n in 0..row.len() - 1 {
        let (head, tail) = row.split_at_mut(n + 1);
        head[n] -= &tail[0];
    }
    row.pop();
}

/// Smallest order `m <= m_cap` with `D_m(n) < 0` for some `n <= n_cap`.
pub fn smallest_failing_order(params: &ModuleParams, m_cap: u64, n_cap: u64) -> Result<Option<u64>> {
    Ok(is_completely_monotone_upto(params, m_cap, n_cap)?.map(|w| match w {
        Witness::NegativeDifference { m, .. } => m,
        Witness::NegativeDensity { .. } => unreachable!("difference scan yields difference witnesses"),
    }))
}

/// Smallest `m <= m_cap` with `D_m(n) < 0` at the single offset `n`.
pub fn first_failing_order_at(params: &ModuleParams, n: u64, m_cap: u64) -> Result<Option<u64>> {
    let budget = PrecisionBudget::default();
    let len = table_len(m_cap, n)?;
    let scaled = scaled_moments(params, len, budget)?;
    let mut row = scaled.values;
    for m in 0..=m_cap {
        if row[n as usize].is_negative() {
            return Ok(Some(m));
        }
        if m < m_cap {
            next_row(&mut row);
        }
    }
    Ok(None)
}
