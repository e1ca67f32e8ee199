//! Stirling partition numbers and the `L(k, t)` family of thresholds.
//!
//! Every threshold of the form `n >= a + b * log2(c)` is decided by the exact
//! integer comparison `2^(n - a) >= c^b`. The real value of `L(k, t)` is only
//! exposed as an `f64` for display.

use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Exact nonnegative integer used for every count in the crate.
pub type BigCount = BigUint;

/// Memo of Stirling rows. Row `n` holds `S(n, j)` for `j <= min(n, width)`.
struct StirlingTable {
    width: usize,
    rows: Vec<Vec<BigUint>>,
}

fn table() -> &'static RwLock<StirlingTable> {
    static TABLE: OnceLock<RwLock<StirlingTable>> = OnceLock::new();
    TABLE.get_or_init(|| {
        RwLock::new(StirlingTable {
            width: 16,
            rows: vec![vec![BigUint::one()]],
        })
    })
}

impl StirlingTable {
    fn get(&self, n: usize, k: usize) -> Option<BigUint> {
        if k > self.width {
            return None;
        }
        self.rows.get(n).map(|row| row[k].clone())
    }

    fn grow(&mut self, n: usize, k: usize) {
        if k > self.width {
            // Widening recomputes every row; values never change, only extent.
            self.width = k.max(2 * self.width);
            self.rows.truncate(1);
        }
        while self.rows.len() <= n {
            let m = self.rows.len();
            let prev = &self.rows[m - 1];
            let w = m.min(self.width);
            let mut row = vec![BigUint::zero(); w + 1];
            for j in 1..=w {
                let mut v = if j - 1 < prev.len() {
                    prev[j - 1].clone()
                } else {
                    BigUint::zero()
                };
                if j < prev.len() {
                    v += &prev[j] * j;
                }
                row[j] = v;
            }
            self.rows.push(row);
        }
    }
}

/// `S(n, k)`, the number of `k`-partitions of `[n]`.
///
/// Total: zero for `n < 0`, `k < 0`, `k > n`, and `k == 0 < n`;
/// `S(0, 0) = 1` so the recurrence `S(n,k) = S(n-1,k-1) + k S(n-1,k)` closes.
pub fn stirling(n: i64, k: i64) -> BigCount {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    if n == 0 {
        return BigUint::one();
    }
    if k == 0 {
        return BigUint::zero();
    }
    if k == n || k == 1 {
        return BigUint::one();
    }
    let (n, k) = (n as usize, k as usize);
    if let Some(v) = table().read().expect("stirling memo poisoned").get(n, k) {
        return v;
    }
    let mut t = table().write().expect("stirling memo poisoned");
    t.grow(n, k);
    t.get(n, k).expect("row was just computed")
}

/// Signed convenience wrapper around [`stirling`].
pub fn stirling_i(n: i64, k: i64) -> BigInt {
    BigInt::from(stirling(n, k))
}

/// `S(n, k)` from the alternating-sum closed form, evaluated in exact integers.
pub fn stirling_closed_form(n: i64, k: i64) -> Result<BigCount> {
    if k < 1 || n < k {
        return Err(Error::InvalidParameters(format!(
            "closed form needs n >= k >= 1, got n={n}, k={k}"
        )));
    }
    let n_exp = u32::try_from(n).map_err(|_| Error::InvalidParameters("n too large".into()))?;
    let mut sum = BigInt::zero();
    for j in 0..=k {
        let term =
            BigInt::from(binomial(k, j)) * BigInt::from(BigUint::from((k - j) as u64).pow(n_exp));
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let fact = BigInt::from(factorial(k as u64));
    let (q, r) = sum.div_rem(&fact);
    if !r.is_zero() || q.is_negative() {
        return Err(Error::Internal(format!(
            "closed form for S({n},{k}) is not an exact nonnegative quotient"
        )));
    }
    Ok(q.to_biguint().expect("nonnegative"))
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigCount {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= (n - i) as u64;
        acc /= (i + 1) as u64;
    }
    acc
}

pub fn factorial(n: u64) -> BigCount {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Converts a signed intermediate back to a count, failing on underflow.
pub fn to_count(v: BigInt, context: &'static str) -> Result<BigCount> {
    match v.sign() {
        Sign::Minus => Err(Error::Underflow(context)),
        _ => Ok(v.to_biguint().expect("nonnegative")),
    }
}

/// Subtraction with an underflow error instead of a panic.
pub fn checked_sub(a: &BigCount, b: &BigCount, context: &'static str) -> Result<BigCount> {
    if a < b {
        Err(Error::Underflow(context))
    } else {
        Ok(a - b)
    }
}

/// Least `e >= 0` with `2^e >= v`.
pub fn ceil_log2(v: &BigUint) -> u64 {
    if v <= &BigUint::one() {
        0
    } else {
        (v - 1u32).bits()
    }
}

/// `2^e >= v`, with `2^e < 1` for negative `e`.
pub fn pow2_at_least(e: i64, v: &BigUint) -> bool {
    if e < 0 {
        return v.is_zero();
    }
    (e as u64) >= ceil_log2(v)
}

/// Parameters `(k, t)` for which `L(k, t)` is used as a hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdParams {
    k: u32,
    t: u32,
}

impl ThresholdParams {
    pub fn new(k: u32, t: u32) -> Result<Self> {
        if t < 1 || k < t + 2 {
            return Err(Error::InvalidParameters(format!(
                "need t >= 1 and k >= t+2, got k={k}, t={t}"
            )));
        }
        Ok(ThresholdParams { k, t })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// `(t+1)(k-t+1)`, the argument of the logarithm.
    pub fn base(&self) -> u64 {
        (self.t as u64 + 1) * (self.k as u64 - self.t as u64 + 1)
    }

    /// `k - t + 1`, the coefficient of the logarithm.
    pub fn exponent(&self) -> u32 {
        self.k - self.t + 1
    }

    /// `((t+1)(k-t+1))^(k-t+1)`.
    pub fn power(&self) -> BigUint {
        BigUint::from(self.base()).pow(self.exponent())
    }

    /// `n >= L(k, t)` via `2^(n-t-1) >= ((t+1)(k-t+1))^(k-t+1)`.
    pub fn l_holds(&self, n: i64) -> bool {
        pow2_at_least(n - self.t as i64 - 1, &self.power())
    }

    /// `n >= 2 L(k, t)` via `2^(n-2t-2) >= ((t+1)(k-t+1))^(2(k-t+1))`.
    pub fn two_l_holds(&self, n: i64) -> bool {
        pow2_at_least(n - 2 * self.t as i64 - 2, &self.power().pow(2))
    }

    pub fn min_n_l(&self) -> u64 {
        self.t as u64 + 1 + ceil_log2(&self.power())
    }

    pub fn min_n_two_l(&self) -> u64 {
        2 * self.t as u64 + 2 + ceil_log2(&self.power().pow(2))
    }

    /// `L(k, t)` as a float. Display only; never used to decide anything.
    pub fn l_display(&self) -> f64 {
        (self.t as f64 + 1.0) + self.exponent() as f64 * (self.base() as f64).log2()
    }

    /// `2^L(k, t)` as an exact integer: `2^(t+1) * ((t+1)(k-t+1))^(k-t+1)`.
    fn pow2_of_l(&self) -> BigUint {
        (BigUint::one() << (self.t as usize + 1)) * self.power()
    }
}

pub fn threshold_l_holds(n: i64, k: u32, t: u32) -> Result<bool> {
    Ok(ThresholdParams::new(k, t)?.l_holds(n))
}

pub fn min_n_for_l(k: u32, t: u32) -> Result<u64> {
    Ok(ThresholdParams::new(k, t)?.min_n_l())
}

pub fn threshold_2l_holds(n: i64, k: u32, t: u32) -> Result<bool> {
    Ok(ThresholdParams::new(k, t)?.two_l_holds(n))
}

pub fn min_n_for_2l(k: u32, t: u32) -> Result<u64> {
    Ok(ThresholdParams::new(k, t)?.min_n_two_l())
}

/// Human-readable statement of the exact test behind a threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub k: u32,
    pub t: u32,
    pub doubled: bool,
    pub min_n: u64,
    /// e.g. `2^(n-2) >= 6^3 = 216`
    pub inequality: String,
    /// Non-authoritative float value of the threshold.
    pub approx: f64,
}

pub fn threshold_report(k: u32, t: u32, doubled: bool) -> Result<ThresholdReport> {
    let p = ThresholdParams::new(k, t)?;
    let (min_n, inequality, approx) = if doubled {
        (
            p.min_n_two_l(),
            format!(
                "2^(n-{}) >= {}^{} = {}",
                2 * t + 2,
                p.base(),
                2 * p.exponent(),
                p.power().pow(2)
            ),
            2.0 * p.l_display(),
        )
    } else {
        (
            p.min_n_l(),
            format!(
                "2^(n-{}) >= {}^{} = {}",
                t + 1,
                p.base(),
                p.exponent(),
                p.power()
            ),
            p.l_display(),
        )
    };
    Ok(ThresholdReport {
        k,
        t,
        doubled,
        min_n,
        inequality,
        approx,
    })
}

/// `L0(k, t) = max { L(k, s) : t+1 <= s <= k-2 }` and the related thresholds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct L0Params {
    pub k: u32,
    pub t: u32,
    /// The `s` attaining the maximum (smallest on ties).
    pub maximizing_s: u32,
    /// `(s, least n with n >= L(k, s))` for each `s` in range.
    pub per_s: Vec<(u32, u64)>,
    /// Least `n` with `n >= L0(k, t)`.
    pub min_n: u64,
    /// Least `n` with `n >= 5 - k + 2k log2 k`.
    pub min_n_large_r: u64,
}

impl L0Params {
    /// `n >= L(k, s)` for every `s` in range.
    pub fn holds(&self, n: i64) -> bool {
        self.per_s
            .iter()
            .all(|&(s, _)| ThresholdParams { k: self.k, t: s }.l_holds(n))
    }
}

pub fn l0_bound_params(k: u32, t: u32) -> Result<L0Params> {
    if t < 1 || t + 1 > k.saturating_sub(2) || k < 3 {
        return Err(Error::InvalidParameters(format!(
            "L0 needs t+1 <= k-2, got k={k}, t={t}"
        )));
    }
    let mut best: Option<(u32, BigUint)> = None;
    let mut per_s = Vec::new();
    for s in t + 1..=k - 2 {
        let p = ThresholdParams { k, t: s };
        per_s.push((s, p.min_n_l()));
        let v = p.pow2_of_l();
        if best.as_ref().is_none_or(|(_, b)| &v > b) {
            best = Some((s, v));
        }
    }
    let min_n = per_s
        .iter()
        .map(|&(_, m)| m)
        .max()
        .expect("range is nonempty");
    Ok(L0Params {
        k,
        t,
        maximizing_s: best.expect("range is nonempty").0,
        per_s,
        min_n,
        min_n_large_r: min_n_large_r(k),
    })
}

/// `n >= 5 - k + 2k log2 k` via `2^(n+k-5) >= k^(2k)`.
pub fn large_r_threshold_holds(n: i64, k: u32) -> bool {
    pow2_at_least(n + k as i64 - 5, &BigUint::from(k).pow(2 * k))
}

pub fn min_n_large_r(k: u32) -> u64 {
    let e = ceil_log2(&BigUint::from(k).pow(2 * k)) as i64;
    (e + 5 - k as i64).max(1) as u64
}

/// Lossy conversion for display of very large counts.
pub fn approx_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}
