//! Finite-grid certification of the Stirling-number inequalities.
//!
//! Integer and rational inequalities are decided exactly after clearing
//! denominators. Inequalities with `e`, `ln` or `log2` are decided by certified
//! interval arithmetic with precision doubling; a point that stays ambiguous at
//! the precision cap is reported inconclusive.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::constructions::{
    bound_f, bound_g, size_h, size_phi, size_r, size_r1, size_r2, ConstructionKind,
    ConstructionSpec,
};
use crate::error::{Error, Result};
use crate::interval::{certify_sign, euler, ln2, Interval};
use crate::partition::{Family, Partition};
use crate::stirling::{binomial, factorial, stirling, stirling_i, ThresholdParams};

const START_PREC: u32 = 64;
const MAX_PREC: u32 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaId {
    LogConcavity,
    SpnLowerBounds,
    SpnGapI,
    SpnGapII,
    GrowthEq4,
    RLowerBound,
    StirlingEstimate,
    QMonotone,
    MonoDoublePrime,
    MonoI,
    MonoII,
    MonoIII,
    MonoPrime,
    WBoundI,
    WBoundII,
    R2Swap,
    R1VsR2I,
    R1VsR2II,
    R1Swap,
    PhiMono,
    Case21,
    Case22,
    Ublkt,
}

impl LemmaId {
    pub const ALL: [LemmaId; 23] = [
        LemmaId::LogConcavity,
        LemmaId::SpnLowerBounds,
        LemmaId::SpnGapI,
        LemmaId::SpnGapII,
        LemmaId::GrowthEq4,
        LemmaId::RLowerBound,
        LemmaId::StirlingEstimate,
        LemmaId::QMonotone,
        LemmaId::MonoDoublePrime,
        LemmaId::MonoI,
        LemmaId::MonoII,
        LemmaId::MonoIII,
        LemmaId::MonoPrime,
        LemmaId::WBoundI,
        LemmaId::WBoundII,
        LemmaId::R2Swap,
        LemmaId::R1VsR2I,
        LemmaId::R1VsR2II,
        LemmaId::R1Swap,
        LemmaId::PhiMono,
        LemmaId::Case21,
        LemmaId::Case22,
        LemmaId::Ublkt,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            LemmaId::LogConcavity => "log-concavity",
            LemmaId::SpnLowerBounds => "spn-lower-bounds",
            LemmaId::SpnGapI => "spn-gap-i",
            LemmaId::SpnGapII => "spn-gap-ii",
            LemmaId::GrowthEq4 => "growth-eq4",
            LemmaId::RLowerBound => "r-lower-bound",
            LemmaId::StirlingEstimate => "stirling-estimate",
            LemmaId::QMonotone => "Q-monotone",
            LemmaId::MonoDoublePrime => "mono-doubleprime",
            LemmaId::MonoI => "mono-i",
            LemmaId::MonoII => "mono-ii",
            LemmaId::MonoIII => "mono-iii",
            LemmaId::MonoPrime => "mono-prime",
            LemmaId::WBoundI => "W-bound-i",
            LemmaId::WBoundII => "W-bound-ii",
            LemmaId::R2Swap => "r2-swap",
            LemmaId::R1VsR2I => "r1-vs-r2-i",
            LemmaId::R1VsR2II => "r1-vs-r2-ii",
            LemmaId::R1Swap => "r1-swap",
            LemmaId::PhiMono => "phi-mono",
            LemmaId::Case21 => "case21",
            LemmaId::Case22 => "case22",
            LemmaId::Ublkt => "ublkt",
        }
    }

    /// Checkers that may use interval arithmetic; all others are exact.
    pub fn uses_intervals(&self) -> bool {
        matches!(
            self,
            LemmaId::StirlingEstimate | LemmaId::QMonotone | LemmaId::Ublkt
        )
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<LemmaId> {
        LemmaId::ALL
            .iter()
            .copied()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown lemma id '{s}'")))
    }
}

impl Serialize for LemmaId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive { precision: u32 },
    Skipped { reason: String },
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("pass"),
            Verdict::Fail => f.write_str("fail"),
            Verdict::Inconclusive { precision } => write!(f, "inconclusive(precision={precision})"),
            Verdict::Skipped { reason } => write!(f, "skipped(hypothesis: {reason})"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Named integer parameters, serialized as an ordered JSON object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params(pub Vec<(&'static str, i64)>);

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(" "))
    }
}

macro_rules! params {
    ($($name:ident),* $(,)?) => {
        Params(vec![$((stringify!($name), $name as i64)),*])
    };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditPoint {
    pub lemma: LemmaId,
    pub params: Params,
    /// Which inequality of a multi-part lemma this point checks.
    #[serde(skip_serializing_if = "str::is_empty")]
    pub part: &'static str,
    pub verdict: Verdict,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AuditGrid {
    pub t_max: i64,
    pub k_max: i64,
    /// Number of `n` values above each exact threshold.
    pub n_extra: i64,
}

impl Default for AuditGrid {
    fn default() -> Self {
        AuditGrid {
            t_max: 3,
            k_max: 8,
            n_extra: 10,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AuditTotals {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub lemma: LemmaId,
    pub grid: AuditGrid,
    pub points: Vec<AuditPoint>,
    pub totals: AuditTotals,
}

impl AuditReport {
    fn new(lemma: LemmaId, grid: AuditGrid, points: Vec<AuditPoint>) -> AuditReport {
        let mut totals = AuditTotals::default();
        for p in &points {
            match p.verdict {
                Verdict::Pass => totals.pass += 1,
                Verdict::Fail => totals.fail += 1,
                Verdict::Inconclusive { .. } => totals.inconclusive += 1,
                Verdict::Skipped { .. } => totals.skipped += 1,
            }
        }
        AuditReport {
            lemma,
            grid,
            points,
            totals,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditPoint> {
        self.points.iter().filter(|p| p.verdict.is_fail())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rel {
    Gt,
    Ge,
    Lt,
    Le,
    Eq,
}

impl Rel {
    fn holds(self, o: Ordering) -> bool {
        match self {
            Rel::Gt => o == Ordering::Greater,
            Rel::Ge => o != Ordering::Less,
            Rel::Lt => o == Ordering::Less,
            Rel::Le => o != Ordering::Greater,
            Rel::Eq => o == Ordering::Equal,
        }
    }
}

fn exact<A: Ord + fmt::Display>(
    lemma: LemmaId,
    params: Params,
    part: &'static str,
    lhs: A,
    rel: Rel,
    rhs: A,
) -> AuditPoint {
    let verdict = if rel.holds(lhs.cmp(&rhs)) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    AuditPoint {
        lemma,
        params,
        part,
        verdict,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

fn skipped(lemma: LemmaId, params: Params, part: &'static str, reason: &str) -> AuditPoint {
    AuditPoint {
        lemma,
        params,
        part,
        verdict: Verdict::Skipped {
            reason: reason.to_string(),
        },
        lhs: String::new(),
        rhs: String::new(),
    }
}

/// Decides the strict inequality `lhs rel rhs` by certifying the sign of
/// `lhs - rhs` at increasing precision.
fn certified<F>(
    lemma: LemmaId,
    params: Params,
    part: &'static str,
    sides: F,
    rel: Rel,
) -> AuditPoint
where
    F: Fn(u32) -> (Interval, Interval),
{
    certified_upto(lemma, params, part, sides, rel, MAX_PREC)
}

fn certified_upto<F>(
    lemma: LemmaId,
    params: Params,
    part: &'static str,
    sides: F,
    rel: Rel,
    max_prec: u32,
) -> AuditPoint
where
    F: Fn(u32) -> (Interval, Interval),
{
    let (sign, prec) = certify_sign(
        |p| {
            let (l, r) = sides(p);
            &l - &r
        },
        START_PREC,
        max_prec,
    );
    let (l, r) = sides(prec);
    let verdict = match sign {
        Some(o) if rel.holds(o) => Verdict::Pass,
        Some(_) => Verdict::Fail,
        None => Verdict::Inconclusive { precision: prec },
    };
    AuditPoint {
        lemma,
        params,
        part,
        verdict,
        lhs: fmt_interval(&l),
        rhs: fmt_interval(&r),
    }
}

fn decimal(x: &BigRational, up: bool) -> String {
    let scale = BigInt::from(10).pow(12);
    let y = x * BigRational::from_integer(scale.clone());
    let q = if up { y.ceil() } else { y.floor() }.to_integer();
    let (i, f) = q.abs().div_rem(&scale);
    format!(
        "{}{}.{:0>12}",
        if q.is_negative() { "-" } else { "" },
        i,
        f.to_string()
    )
}

/// Outward-rounded decimal rendering of an interval.
pub fn fmt_interval(iv: &Interval) -> String {
    if iv.lo() == iv.hi() && iv.lo().is_integer() {
        return iv.lo().to_integer().to_string();
    }
    format!("[{}, {}]", decimal(iv.lo(), false), decimal(iv.hi(), true))
}

fn s(n: i64, k: i64) -> BigInt {
    stirling_i(n, k)
}

fn c(n: i64, k: i64) -> BigInt {
    BigInt::from(binomial(n, k))
}

fn pw(b: i64, e: i64) -> BigInt {
    num_traits::pow(BigInt::from(b), e as usize)
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn tp(k: i64, t: i64) -> ThresholdParams {
    ThresholdParams::new(k as u32, t as u32).expect("grid keeps k >= t+2")
}

/// Least `n` with `n >= L(k, t)`, decided by `2^(n-t-1) >= ((t+1)(k-t+1))^(k-t+1)`.
fn min_l(k: i64, t: i64) -> i64 {
    tp(k, t).min_n_l() as i64
}

/// Least `n` with `n >= 2L(k, t)`, decided by `2^(n-2t-2) >= ((t+1)(k-t+1))^(2(k-t+1))`.
fn min_2l(k: i64, t: i64) -> i64 {
    tp(k, t).min_n_two_l() as i64
}

fn run<P: Sync>(points: Vec<P>, check: impl Fn(&P) -> Vec<AuditPoint> + Sync) -> Vec<AuditPoint> {
    points.par_iter().flat_map_iter(&check).collect()
}

pub fn audit(lemma: LemmaId, grid: AuditGrid) -> AuditReport {
    let points = match lemma {
        LemmaId::LogConcavity => log_concavity(),
        LemmaId::SpnLowerBounds => spn_lower_bounds(grid),
        LemmaId::SpnGapI => spn_gap(grid, false),
        LemmaId::SpnGapII => spn_gap(grid, true),
        LemmaId::GrowthEq4 => growth_eq4(),
        LemmaId::RLowerBound => r_lower_bound(grid),
        LemmaId::StirlingEstimate => stirling_estimate(grid),
        LemmaId::QMonotone => q_monotone(),
        LemmaId::MonoDoublePrime => mono_doubleprime(grid),
        LemmaId::MonoI => mono(grid, LemmaId::MonoI),
        LemmaId::MonoII => mono(grid, LemmaId::MonoII),
        LemmaId::MonoIII => mono(grid, LemmaId::MonoIII),
        LemmaId::MonoPrime => mono_prime(grid),
        LemmaId::WBoundI => w_bound_i(grid),
        LemmaId::WBoundII => w_bound_ii(grid),
        LemmaId::R2Swap => r2_swap(grid),
        LemmaId::R1VsR2I => r1_vs_r2(grid, true),
        LemmaId::R1VsR2II => r1_vs_r2(grid, false),
        LemmaId::R1Swap => r1_swap(grid),
        LemmaId::PhiMono => phi_mono(grid),
        LemmaId::Case21 => case21(grid),
        LemmaId::Case22 => case22(grid),
        LemmaId::Ublkt => ublkt(grid),
    };
    AuditReport::new(lemma, grid, points)
}

pub fn audit_all(grid: AuditGrid) -> Vec<AuditReport> {
    LemmaId::ALL.iter().map(|&l| audit(l, grid)).collect()
}

fn log_concavity() -> Vec<AuditPoint> {
    let pts: Vec<(i64, i64)> = (2..=25)
        .flat_map(|n| (2..=n).map(move |k| (n, k)))
        .collect();
    run(pts, |&(n, k)| {
        // S(n,k)^2 >= k/(k-1) S(n,k+1) S(n,k-1), times (k-1).
        let lhs = big(k - 1) * s(n, k) * s(n, k);
        let rhs = big(k) * s(n, k + 1) * s(n, k - 1);
        vec![exact(
            LemmaId::LogConcavity,
            params!(n, k),
            "",
            lhs,
            Rel::Ge,
            rhs,
        )]
    })
}

fn spn_lower_bounds(grid: AuditGrid) -> Vec<AuditPoint> {
    let pts: Vec<(i64, i64)> = (2..=grid.k_max)
        .flat_map(|r| (r..=40).map(move |m| (r, m)))
        .collect();
    run(pts, |&(r, m)| {
        // Both sides are nonnegative; raising to the power r-1 removes the
        // fractional exponent 2^((m-1)/(r-1)).
        let e = (r - 1) as usize;
        let base = s(m - 1, r - 1);
        let rhs = (BigInt::one() << (m - 1) as usize) * num_traits::pow(base.clone(), e);
        let lhs_i = num_traits::pow(big(r) * s(m - 1, r) + big(2) * &base, e);
        let lhs_ii = num_traits::pow(s(m, r) + &base, e);
        vec![
            exact(
                LemmaId::SpnLowerBounds,
                params!(r, m),
                "i",
                lhs_i,
                Rel::Ge,
                rhs.clone(),
            ),
            exact(
                LemmaId::SpnLowerBounds,
                params!(r, m),
                "ii",
                lhs_ii,
                Rel::Ge,
                rhs,
            ),
        ]
    })
}

fn spn_gap(grid: AuditGrid, squared: bool) -> Vec<AuditPoint> {
    let lemma = if squared {
        LemmaId::SpnGapII
    } else {
        LemmaId::SpnGapI
    };
    let mut pts = Vec::new();
    for t in 1..=grid.t_max {
        for k in t + 2..=grid.k_max {
            for j in k..=grid.k_max {
                // (i): n >= L(j,t) - 1  <=>  n + 1 >= L(j,t).
                // (ii): n >= 2L(j,t) - t - 2  <=>  n + t + 2 >= 2L(j,t).
                let n0 = if squared {
                    min_2l(j, t) - t - 2
                } else {
                    min_l(j, t) - 1
                };
                for n in n0..=n0 + grid.n_extra {
                    for sv in 0..=k - t - 2 {
                        pts.push((t, k, j, sv, n));
                    }
                }
            }
        }
    }
    run(pts, move |&(t, k, j, sv, n)| {
        let a = (t + 1) * (j - t + 1);
        let factor = if squared { a * a } else { a };
        let lhs = s(n - t - sv, k - t - sv);
        let rhs = big(factor) * s(n - t - sv - 1, k - t - sv - 1);
        let s = sv;
        vec![exact(lemma, params!(t, k, j, s, n), "", lhs, Rel::Gt, rhs)]
    })
}

fn growth_eq4() -> Vec<AuditPoint> {
    let pts: Vec<(i64, i64)> = (2..=30)
        .flat_map(|n| (2..=n).map(move |k| (n, k)))
        .collect();
    run(pts, |&(n, k)| {
        vec![exact(
            LemmaId::GrowthEq4,
            params!(n, k),
            "",
            s(n, k),
            Rel::Gt,
            big(k) * s(n - 1, k),
        )]
    })
}

fn r_lower_bound(grid: AuditGrid) -> Vec<AuditPoint> {
    let mut pts = Vec::new();
    for t in 1..=grid.t_max {
        for k in t + 2..=grid.k_max {
            for l in t + 2..=grid.k_max {
                let n0 = min_2l(k.max(l), t);
                for n in n0..=n0 + grid.n_extra {
                    pts.push((t, k, l, n));
                }
            }
        }
    }
    run(pts, |&(t, k, l, n)| {
        // With D = 2(t+1)^2: l-t-1/D = (D(l-t)-1)/D and
        // t+1-1/(2(t+1)) = (2(t+1)^3-(t+1))/D.
        let d = 2 * (t + 1) * (t + 1);
        let coef = (d * (l - t) - 1).max(2 * (t + 1).pow(3) - (t + 1));
        let r = BigInt::from(size_r(n, k, l, t).expect("r is nonnegative"));
        let lhs = big(d) * r;
        let rhs = big(coef) * s(n - t - 1, k - t - 1) * s(n - t, l - t);
        vec![exact(
            LemmaId::RLowerBound,
            params!(t, k, l, n),
            "",
            lhs,
            Rel::Gt,
            rhs,
        )]
    })
}

/// Least integer `m` with `m >= c r (1 + ln r)`, decided by certified intervals.
fn stirling_estimate_min_m(r: i64, c: i64) -> i64 {
    let value = |p: u32| {
        &Interval::from_int(c * r) * &(&Interval::from_int(1) + &Interval::from_int(r).ln(p))
    };
    let guess = crate::interval::approx(&value(START_PREC)).floor() as i64 - 2;
    let mut m = guess.max(r);
    loop {
        let (sign, _) = certify_sign(|p| &Interval::from_int(m) - &value(p), START_PREC, MAX_PREC);
        if sign == Some(Ordering::Greater) {
            return m;
        }
        m += 1;
    }
}

fn stirling_estimate(grid: AuditGrid) -> Vec<AuditPoint> {
    let mut pts = Vec::new();
    for r in 2..=grid.k_max {
        for c in 1..=3 {
            let m0 = stirling_estimate_min_m(r, c);
            for m in m0..=m0 + grid.n_extra {
                pts.push((r, c, m));
            }
        }
    }
    run(pts, |&(r, c, m)| {
        let lemma = LemmaId::StirlingEstimate;
        let surj = BigInt::from(factorial(r as u64)) * s(m, r);
        let rm = pw(r, m);
        let upper = exact(
            lemma,
            params!(r, c, m),
            "upper",
            surj.clone(),
            Rel::Lt,
            rm.clone(),
        );
        // (1 - r(er)^-c) r^m / r! < S(m,r)  <=>  e^c r^c (r^m - r! S(m,r)) < r^(m+1).
        let gap = BigUint::try_from(&rm - &surj).unwrap_or_default();
        let rhs = Interval::from_big(&BigUint::try_from(pw(r, m + 1)).expect("positive"));
        let lower = certified(
            lemma,
            params!(r, c, m),
            "lower",
            |p| {
                let lhs =
                    &euler(p).powi(c as u32).scale_int(r.pow(c as u32)) * &Interval::from_big(&gap);
                (lhs, rhs.clone())
            },
            Rel::Lt,
        );
        let quarter = exact(
            lemma,
            params!(r, c, m),
            "quarter",
            big(4) * s(m, r),
            Rel::Gt,
            pw(r, m - r + 2),
        );
        vec![upper, lower, quarter]
    })
}

fn ln_binomial(n: i64, k: i64, p: u32) -> Interval {
    Interval::from_big(&binomial(n, k)).ln(p)
}

/// `ln Q(s,t)` with `Q(s,t) = s^(L(s+t,t)-2s-t+1) / C(s+t,t)`, where
/// `L(s+t,t) - 2s - t + 1 = 2 - 2s + (s+1) log2 X` and `X = (t+1)(s+1)`.
fn ln_q(sv: i64, t: i64, p: u32) -> Interval {
    let x = (t + 1) * (sv + 1);
    let ln_s = Interval::from_int(sv).ln(p);
    let ln_x = Interval::from_int(x).ln(p);
    let log_term = (&ln_x * &ln_s).div(&ln2(p), p).scale_int(sv + 1);
    &(&ln_s.scale_int(2 - 2 * sv) + &log_term) - &ln_binomial(sv + t, t, p)
}

/// `Q(s,t)` as an exact rational when `s = 2^a`:
/// `2^(a(2-2s)) X^(a(s+1)) / C(s+t,t)`.
fn q_exact(sv: i64, t: i64) -> Option<BigRational> {
    if sv < 1 || sv & (sv - 1) != 0 {
        return None;
    }
    let a = sv.trailing_zeros() as i64;
    let x = (t + 1) * (sv + 1);
    let num = pw(x, a * (sv + 1));
    let e2 = a * (2 - 2 * sv);
    let mut q = BigRational::new(num, c(sv + t, t));
    if e2 >= 0 {
        q *= BigRational::from_integer(BigInt::one() << e2 as usize);
    } else {
        q /= BigRational::from_integer(BigInt::one() << (-e2) as usize);
    }
    Some(q)
}

fn q_monotone() -> Vec<AuditPoint> {
    let pts: Vec<(i64, i64)> = (1..=6)
        .flat_map(|t| (2..=12).map(move |s| (s, t)))
        .collect();
    run(pts, |&(sv, t)| {
        let lemma = LemmaId::QMonotone;
        let s = sv;
        let mut out = Vec::new();
        if sv < 12 {
            out.push(certified(
                lemma,
                params!(s, t),
                "increasing",
                |p| (ln_q(sv + 1, t, p), ln_q(sv, t, p)),
                Rel::Gt,
            ));
        }
        match q_exact(sv, t) {
            Some(q) => {
                let eighteen = BigRational::from_integer(big(18));
                let verdict = if q >= eighteen {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                };
                out.push(AuditPoint {
                    lemma,
                    params: params!(s, t),
                    part: "at-least-18",
                    verdict,
                    lhs: q.to_string(),
                    rhs: "18".into(),
                });
            }
            None => {
                let ln18 = |p: u32| Interval::from_int(18).ln(p);
                out.push(certified(
                    lemma,
                    params!(s, t),
                    "at-least-18",
                    |p| (ln_q(sv, t, p), ln18(p)),
                    Rel::Gt,
                ));
            }
        }
        out
    })
}

fn mono_doubleprime(grid: AuditGrid) -> Vec<AuditPoint> {
    let mut pts = Vec::new();
    for t in 1..=grid.t_max {
        for k in t + 2..=grid.k_max {
            for u in t..=k - 2 {
                for l in t..=grid.k_max {
                    let n0 = min_l(k.max(l), t);
                    for n in n0..=n0 + grid.n_extra {
                        pts.push((t, k, u, l, n));
                    }
                }
            }
        }
    }
    run(pts, |&(t, k, u, l, n)| {
        let lhs = c(u, t) * s(n - u, k - u);
        let rhs = c(k, t) * pw(l - t + 1, k - u) * big(k - u);
        vec![exact(
            LemmaId::MonoDoublePrime,
            params!(t, k, u, l, n),
            "",
            lhs,
            Rel::Gt,
            rhs,
        )]
    })
}

fn mono(grid: AuditGrid, lemma: LemmaId) -> Vec<AuditPoint> {
    let mut pts = Vec::new();
    for t in 1..=grid.t_max {
        for k in t + 2..=grid.k_max {
            for l in t..=grid.k_max {
                let n0 = min_l(k.max(l), t);
                for n in n0..=n0 + grid.n_extra {
                    pts.push((t, k, l, n));
                }
            }
        }
    }
    run(pts, move |&(t, k, l, n)| {
        let f = |m: i64| bound_f(m, k, l, t, n).expect("t <= m <= k");
        let g = |m: i64| bound_g(m, k, l, t, n).expect("t <= m <= k");
        let mut out = Vec::new();
        match lemma {
            LemmaId::MonoI => {
                // Strictly decreasing on consecutive m in [t, k-1].
                let pow_part = |m: i64| pw(l - t + 1, m - t) * s(n - m, k - m);
                for m in t..=k - 2 {
                    out.push(exact(
                        lemma,
                        params!(t, k, l, n, m),
                        "f",
                        f(m),
                        Rel::Gt,
                        f(m + 1),
                    ));
                    out.push(exact(
                        lemma,
                        params!(t, k, l, n, m),
                        "power",
                        pow_part(m),
                        Rel::Gt,
                        pow_part(m + 1),
                    ));
                }
            }
            LemmaId::MonoII => {
                for u in t..=k - 2 {
                    for m in u..=k {
                        let rel = if m == u { Rel::Eq } else { Rel::Lt };
                        out.push(exact(lemma, params!(t, k, l, n, u, m), "", g(m), rel, f(u)));
                    }
                }
            }
            _ => {
                let top = stirling(n - t, k - t);
                for m in t..=k {
                    let rel = if m == t { Rel::Le } else { Rel::Lt };
                    out.push(exact(
                        lemma,
                        params!(t, k, l, n, m),
                        "",
                        g(m),
                        rel,
                        top.clone(),
                    ));
                }
            }
        }
        out
    })
}

fn mono_prime(grid: AuditGrid) -> Vec<AuditPoint> {
    let mut pts = Vec::new();
    for t in 1..=grid.t_max {
        for k in t + 2..=grid.k_max {
            for l in t + 1..=grid.k_max {
                let n0 = min_l(k.max(l), t);
                for n in n0..=n0 + grid.n_extra {
                    pts.push((t, k, l, n));
                }
            }
        }
    }
    run(pts, |&(t, k, l, n)| {
        let lemma = LemmaId::MonoPrime;
        let mut out = Vec::new();
        for u in 0..t {
            for i in 0..=1 {
                if l - i - u < t - u {
                    out.push(skipped(
                        lemma,
                        params!(t, k, l, n, u, i),
                        "",
                        "binomial C(l-i-u, t-u) is degenerate",
                    ));
                    continue;
                }
                let lhs = c(l - i - u, t - u) * s(n - 2 * t - i + u, k - 2 * t + u);
                let rhs = big(l - i - t + 1) * s(n - t - i - 1, k - t - 1);
                out.push(exact(
                    lemma,
                    params!(t, k, l, n, u, i),
                    "",
                    lhs,
                    Rel::Le,
                    rhs,
                ));
            }
        }
        out
    })
}

/// Enumerates the k-partitions sharing at least `t` blocks with `g`.
pub fn family_w(g: &Partition, k: usize, t: usize, budget: u64) -> Result<Family> {
    ConstructionSpec::new(g.ground(), ConstructionKind::W { k, t, g: g.clone() })?.enumerate(budget)
}

/// Nonincreasing sequences of `parts` positive integers summing to `total`.
pub fn integer_partitions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, parts: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rest < parts {
            return;
        }
        // The remaining parts - 1 entries need at least one each.
        for v in (1..=max.min(rest - (parts - 1))).rev() {
            if v * parts < rest {
                break;
            }
            cur.push(v);
            rec(rest - v, parts - 1, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, total, &mut Vec::new(), &mut out);
    out
}

/// Exact |W(G)| for every shape of G at fixed `(n, k, t)`, using the
/// inclusion-exclusion form `Σ_Z c(|Z|) S(n - |∪Z|, k - |Z|)` with
/// `c(z) = (-1)^(z-t) C(z-1, t-1)`.
struct WCounter {
    t: usize,
    /// `table[z][σ] = S(n - σ, k - z)`.
    table: Vec<Vec<BigInt>>,
    coeff: Vec<BigInt>,
}

impl WCounter {
    fn new(n: i64, k: i64, t: i64, max_blocks: usize) -> WCounter {
        let table = (0..=max_blocks as i64)
            .map(|z| (0..=n).map(|sg| s(n - sg, k - z)).collect())
            .collect();
        let coeff = (0..=max_blocks as i64)
            .map(|z| {
                if z < t {
                    BigInt::zero()
                } else {
                    let v = c(z - 1, t - 1);
                    if (z - t) % 2 == 0 {
                        v
                    } else {
                        -v
                    }
                }
            })
            .collect();
        WCounter {
            t: t as usize,
            table,
            coeff,
        }
    }

    fn count(&self, sizes: &[usize]) -> BigInt {
        let sn = sizes.len();
        let total: usize = sizes.iter().sum();
        let mut buckets = vec![vec![0u64; total + 1]; sn + 1];
        for mask in 0u32..(1 << sn) {
            let z = mask.count_ones() as usize;
            if z < self.t {
                continue;
            }
            let sg: usize = (0..sn)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| sizes[i])
                .sum();
            buckets[z][sg] += 1;
        }
        let mut acc = BigInt::zero();
        for (z, row) in buckets.iter().enumerate() {
            for (sg, &cnt) in row.iter().enumerate() {
                if cnt != 0 {
                    acc += &self.coeff[z] * &self.table[z][sg] * cnt;
                }
            }
        }
        acc
    }
}

fn w_bound_i(grid: AuditGrid) -> Vec<AuditPoint> {
    let mut pts = Vec::new();
    for t in 1..=grid.t_max {
        for k in t + 2..=grid.k_max {
            let n0 = min_l(k, t);
            for n in n0..=n0 + grid.n_extra {
                pts.push((t, k, n));
            }
        }
    }
    run(pts, |&(t, k, n)| {
        let lemma = LemmaId::WBoundI;
        let counter = WCounter::new(n, k, t, (t + 2) as usize);
        let mut max_all = BigInt::zero();
        let mut max_few = BigInt::zero();
        for shape in integer_partitions(n as usize, (t + 2) as usize) {
            let w = counter.count(&shape);
            let singletons = shape.iter().filter(|&&b| b == 1).count() as i64;
            if singletons <= t && w > max_few {
                max_few = w.clone();
            }
            if w > max_all {
                max_all = w;
            }
        }
        let h = BigInt::from(size_h(t + 1, k, t, n));
        // |W| < (t + 0.6) S(n-t, k-t), times 5.
        vec![
            exact(lemma, params!(t, k, n), "all-shapes", max_all, Rel::Le, h),
            exact(
                lemma,
                params!(t, k, n),
                "at-most-t-singletons",
                big(5) * max_few,
                Rel::Lt,
                big(5 * t + 3) * s(n - t, k - t),
            ),
        ]
    })
}

/// Shapes of partial partitions with `blocks` blocks covering at most `n` elements.
fn partial_shapes(n: usize, blocks: usize) -> impl Iterator<Item = Vec<usize>> {
    (blocks..=n).flat_map(move |total| integer_partitions(total, blocks))
}

/// Largest shape count for which W-bound-ii maximizes |W| over all shapes;
/// beyond it only the union-bound certificate is evaluated.
pub const W_SHAPE_LIMIT: usize = 20_000;

fn count_partial_shapes(n: usize, blocks: usize) -> usize {
    // p(total, blocks) by the standard recurrence, summed over total <= n.
    let mut p = vec![vec![0usize; blocks + 1]; n + 1];
    p[0][0] = 1;
    for total in 1..=n {
        for b in 1..=blocks.min(total) {
            p[total][b] = p[total - 1][b - 1] + p[total - b][b];
        }
    }
    (blocks..=n).map(|tot| p[tot][blocks]).sum()
}

fn w_bound_ii(grid: AuditGrid) -> Vec<AuditPoint> {
    let mut pts = Vec::new();
    for t in 1..=grid.t_max {
        for k in t + 2..=grid.k_max {
            let n0 = min_l(k, t);
            for n in n0..=n0 + grid.n_extra {
                for sv in t + 2..=k {
                    pts.push((t, k, sv, n));
                }
            }
        }
    }
    run(pts, |&(t, k, sv, n)| {
        let lemma = LemmaId::WBoundII;
        let s = sv;
        let bound = big(6) * BigInt::from(size_h(sv, k, t, n));
        // Every F in W(G) contains some t-subset X of G, and at most
        // S(n - |∪X|, k - t) <= S(n-t, k-t) members contain a given X.
        let union = c(sv, t) * stirling_i(n - t, k - t);
        let mut out = vec![exact(
            lemma,
            params!(t, k, s, n),
            "union-bound",
            union,
            Rel::Le,
            bound.clone(),
        )];
        if count_partial_shapes(n as usize, sv as usize) <= W_SHAPE_LIMIT {
            let counter = WCounter::new(n, k, t, sv as usize);
            let max = partial_shapes(n as usize, sv as usize)
                .map(|sh| counter.count(&sh))
                .max()
                .expect("a shape exists");
            out.push(exact(
                lemma,
                params!(t, k, s, n),
                "all-shapes",
                max,
                Rel::Le,
                bound,
            ));
        }
        out
    })
}

fn r2_swap(grid: AuditGrid) -> Vec<AuditPoint> {
    let mut pts = Vec::new();
    for t in 1..=grid.t_max {
        for k in t + 3..=grid.k_max {
            for l in t + 2..k {
                for n in k + 1..=k + grid.n_extra {
                    pts.push((t, k, l, n));
                }
            }
        }
    }
    run(pts, |&(t, k, l, n)| {
        let lhs = size_r2(n, k, l, t).expect("nonnegative");
        let rhs = size_r2(n, l, k, t).expect("nonnegative");
        vec![exact(
            LemmaId::R2Swap,
            params!(t, k, l, n),
            "",
            lhs,
            Rel::Gt,
            rhs,
        )]
    })
}

fn r1_vs_r2(grid: AuditGrid, first: bool) -> Vec<AuditPoint> {
    let lemma = if first {
        LemmaId::R1VsR2I
    } else {
        LemmaId::R1VsR2II
    };
    let mut pts = Vec::new();
    for t in 1..=grid.t_max {
        for k in t + 2..=grid.k_max {
            let ls: Vec<i64> = if first {
                (2 * t + 2..=k).collect()
            } else {
                (t + 2..=k.min(2 * t + 1)).collect()
            };
            for l in ls {
                let n0 = min_2l(k, t);
                for n in n0..=n0 + grid.n_extra {
                    pts.push((t, k, l, n));
                }
            }
        }
    }
    run(pts, move |&(t, k, l, n)| {
        if !first && ((k, l) == (2 * t + 1, 2 * t + 1) || (k, l) == (4, 3)) {
            return vec![skipped(
                lemma,
                params!(t, k, l, n),
                "",
                "(k,l) is (2t+1,2t+1) or (4,3)",
            )];
        }
        let r1 = size_r1(n, k, l, t).expect("nonnegative");
        let r2 = size_r2(n, k, l, t).expect("nonnegative");
        let rel = if first { Rel::Gt } else { Rel::Lt };
        vec![exact(lemma, params!(t, k, l, n), "", r1, rel, r2)]
    })
}

fn r1_swap(grid: AuditGrid) -> Vec<AuditPoint> {
    let mut pts = Vec::new();
    for t in 1..=grid.t_max {
        for k in t + 3..=grid.k_max {
            for l in t + 2..k {
                let n0 = min_2l(k, t).max(t + 1 + (k - t) * (l - t));
                for n in n0..=n0 + grid.n_extra {
                    pts.push((t, k, l, n));
                }
            }
        }
    }
    run(pts, |&(t, k, l, n)| {
        let lhs = size_r1(n, k, l, t).expect("nonnegative");
        let rhs = size_r1(n, l, k, t).expect("nonnegative");
        vec![exact(
            LemmaId::R1Swap,
            params!(t, k, l, n),
            "",
            lhs,
            Rel::Gt,
            rhs,
        )]
    })
}

/// Nonincreasing tuples of length `r` with entries in `[lo, hi]`.
fn descending_tuples(r: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn rec(r: usize, lo: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for v in (lo..=max).rev() {
            cur.push(v);
            rec(r, lo, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, lo, hi, &mut Vec::new(), &mut out);
    out
}

fn tuple_params(t: i64, ks: &[i64], n: i64, extra: &[(&'static str, i64)]) -> Params {
    const NAMES: [&str; 6] = ["k1", "k2", "k3", "k4", "k5", "k6"];
    let mut v = vec![("t", t)];
    v.extend(ks.iter().enumerate().map(|(i, &k)| (NAMES[i], k)));
    v.push(("n", n));
    v.extend_from_slice(extra);
    Params(v)
}

fn phi_mono(grid: AuditGrid) -> Vec<AuditPoint> {
    let mut pts = Vec::new();
    for t in 1..=grid.t_max {
        for r in 3..=4 {
            for ks in descending_tuples(r, t + 2, grid.k_max) {
                let n0 = min_l(ks[0], t);
                for n in n0..=n0 + grid.n_extra {
                    pts.push((t, ks.clone(), n));
                }
            }
        }
    }
    run(pts, |(t, ks, n)| {
        let (t, n) = (*t, *n);
        let r = ks.len();
        let top = size_phi(t + 1, r, ks, t, n).expect("r >= 3");
        let mut out = Vec::new();
        for m in t + 1..=ks[0] {
            for a in 1..=r {
                let v = size_phi(m, a, ks, t, n).expect("r >= 3");
                let rel = if m == t + 1 && ks[a - 1] == ks[r - 1] {
                    Rel::Eq
                } else {
                    Rel::Lt
                };
                let p = tuple_params(t, ks, n, &[("m", m), ("a", a as i64)]);
                out.push(exact(LemmaId::PhiMono, p, "", v, rel, top.clone()));
            }
        }
        out
    })
}

fn case21(grid: AuditGrid) -> Vec<AuditPoint> {
    let mut pts = Vec::new();
    for t in 1..=grid.t_max {
        for k in t + 2..=grid.k_max {
            for l in t..=grid.k_max {
                let n0 = min_l(k.max(l), t);
                for n in n0..=n0 + grid.n_extra {
                    pts.push((t, k, l, n));
                }
            }
        }
    }
    run(pts, |&(t, k, l, n)| {
        let h = BigInt::from(size_h(t + 1, k, t, n));
        (t + 2..=k)
            .map(|m| {
                // h > (m-t)(m-t+1) g / C(m,t), times C(m,t).
                let lhs = c(m, t) * &h;
                let rhs = big((m - t) * (m - t + 1))
                    * BigInt::from(bound_g(m, k, l, t, n).expect("valid m"));
                exact(
                    LemmaId::Case21,
                    params!(t, k, l, n, m),
                    "",
                    lhs,
                    Rel::Gt,
                    rhs,
                )
            })
            .collect()
    })
}

/// Maximum of `g(m,k,l,t,n) / C(m,t)` over `m in [t+2,k]`, `l in [t,k1]`,
/// returned as `(g, C(m,t))`.
fn max_g_ratio(k: i64, k1: i64, t: i64, n: i64) -> (BigInt, BigInt) {
    let mut best: Option<(BigInt, BigInt)> = None;
    for m in t + 2..=k {
        for l in t..=k1 {
            let g = BigInt::from(bound_g(m, k, l, t, n).expect("valid m"));
            let cm = c(m, t);
            let better = match &best {
                None => true,
                Some((bg, bc)) => &g * bc > bg * &cm,
            };
            if better {
                best = Some((g, cm));
            }
        }
    }
    best.expect("k >= t+2")
}

fn case22(grid: AuditGrid) -> Vec<AuditPoint> {
    let mut pts = Vec::new();
    for t in 1..=grid.t_max {
        for ks in descending_tuples(4, t + 2, grid.k_max) {
            let n0 = min_l(ks[0], t);
            for n in n0..=n0 + grid.n_extra {
                pts.push((t, ks.clone(), n));
            }
        }
    }
    run(pts, |(t, ks, n)| {
        let (t, n) = (*t, *n);
        let r = ks.len();
        let phi = BigInt::from(size_phi(t + 1, r, ks, t, n).expect("r >= 3"));
        let ratios: Vec<(BigInt, BigInt)> =
            ks.iter().map(|&k| max_g_ratio(k, ks[0], t, n)).collect();
        let mut out = Vec::new();
        for a in 0..r {
            for b in a + 1..r {
                // The left side is maximized by maximizing each ratio
                // g/C(m,t) separately; compare after multiplying by both C's.
                let others = (0..r)
                    .filter(|&i| i != a && i != b)
                    .fold(BigInt::one(), |acc, i| acc * s(n - t - 2, ks[i] - t - 2));
                let lhs = others * &ratios[a].0 * &ratios[b].0;
                let rhs = &phi * &ratios[a].1 * &ratios[b].1;
                let p = tuple_params(t, ks, n, &[("a", a as i64 + 1), ("b", b as i64 + 1)]);
                out.push(exact(LemmaId::Case22, p, "", lhs, Rel::Lt, rhs));
            }
        }
        out
    })
}

fn ublkt(grid: AuditGrid) -> Vec<AuditPoint> {
    let pts: Vec<(i64, i64)> = (1..=grid.t_max)
        .flat_map(|t| (t + 2..=grid.k_max).map(move |k| (t, k)))
        .collect();
    run(pts, |&(t, k)| {
        let lemma = LemmaId::Ublkt;
        let x = (t + 1) * (k - t + 1);
        let mut point = certified(
            lemma,
            params!(t, k),
            "",
            |p| {
                let lhs =
                    &Interval::from_int(5 - k) + &Interval::from_int(k).log2(p).scale_int(2 * k);
                let rhs = &Interval::from_int(t + 1)
                    + &Interval::from_int(x).log2(p).scale_int(k - t + 1);
                (lhs, rhs)
            },
            Rel::Gt,
        );
        // Exponentiating base 2: 2^(4-k-t) k^(2k) > X^(k-t+1).
        let e = k + t - 4;
        let (mut lhs, mut rhs) = (pw(k, 2 * k), pw(x, k - t + 1));
        if e >= 0 {
            rhs <<= e as usize;
        } else {
            lhs <<= (-e) as usize;
        }
        let exact_holds = lhs > rhs;
        if point.verdict == Verdict::Pass && !exact_holds
            || point.verdict == Verdict::Fail && exact_holds
        {
            point.verdict = Verdict::Fail;
            point.rhs = format!("{} (exact cross-check disagrees)", point.rhs);
        }
        vec![point]
    })
}

/// One row of the r1 versus r2 comparison at `k = l = 2t+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegimeRow {
    pub n: i64,
    pub r1: String,
    pub r2: String,
    /// `"r1>r2"`, `"r1<r2"` or `"r1=r2"`.
    pub sign: &'static str,
    /// `n >= 2L(2t+1, t)`.
    pub in_range: bool,
    /// `n - t - 1 > 2 t^2 ln t`; `None` when not certified.
    pub cond_r1: Option<bool>,
    /// `2L(2t+1,t) <= n < t + 1 + t^2 ln t / 2`; `None` when not certified.
    pub cond_r2: Option<bool>,
    /// Agreement with the condition that applies; `None` when neither applies.
    pub consistent: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegimeReport {
    pub k: i64,
    pub t: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub rows: Vec<RegimeRow>,
    pub inconsistent: usize,
}

/// Compares r1 and r2 at `k = l = 2t+1` for each `n` in `ns` against the two
/// stated sufficient conditions. Consistency is only judged where
/// `n >= 2L(2t+1, t)`, the range in which the comparison is asserted.
pub fn compare_regimes(k: i64, t: i64, ns: std::ops::RangeInclusive<i64>) -> RegimeReport {
    if t < 2 || k != 2 * t + 1 {
        return RegimeReport {
            k,
            t,
            skipped: Some("needs t >= 2 and k = 2t+1".into()),
            rows: Vec::new(),
            inconsistent: 0,
        };
    }
    let ln_t = |p: u32| Interval::from_int(t).ln(p);
    let rows: Vec<RegimeRow> = ns
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| {
            let r1 = size_r1(n, k, k, t).unwrap_or_default();
            let r2 = size_r2(n, k, k, t).unwrap_or_default();
            let sign = match r1.cmp(&r2) {
                Ordering::Greater => "r1>r2",
                Ordering::Less => "r1<r2",
                Ordering::Equal => "r1=r2",
            };
            let in_range = tp(k, t).two_l_holds(n);
            let (c1, _) = certify_sign(
                |p| &Interval::from_int(n - t - 1) - &ln_t(p).scale_int(2 * t * t),
                START_PREC,
                MAX_PREC,
            );
            let cond_r1 = c1.map(|o| o == Ordering::Greater);
            // t + 1 + t^2 ln t / 2 - n > 0, doubled.
            let (c2, _) = certify_sign(
                |p| {
                    &(&Interval::from_int(2 * (t + 1)) + &ln_t(p).scale_int(t * t))
                        - &Interval::from_int(2 * n)
                },
                START_PREC,
                MAX_PREC,
            );
            let cond_r2 = c2.map(|o| in_range && o == Ordering::Greater);
            let consistent = if !in_range {
                None
            } else if cond_r1 == Some(true) {
                Some(r1 > r2)
            } else if cond_r2 == Some(true) {
                Some(r2 > r1)
            } else {
                None
            };
            RegimeRow {
                n,
                r1: r1.to_string(),
                r2: r2.to_string(),
                sign,
                in_range,
                cond_r1,
                cond_r2,
                consistent,
            }
        })
        .collect();
    let inconsistent = rows.iter().filter(|r| r.consistent == Some(false)).count();
    RegimeReport {
        k,
        t,
        skipped: None,
        rows,
        inconsistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_partition;
    use crate::partition::GroundSet;

    fn small() -> AuditGrid {
        AuditGrid {
            t_max: 2,
            k_max: 5,
            n_extra: 3,
        }
    }

    #[test]
    fn ids_round_trip() {
        for l in LemmaId::ALL {
            assert_eq!(l.as_str().parse::<LemmaId>().unwrap(), l);
        }
        assert!("nope".parse::<LemmaId>().is_err());
    }

    #[test]
    fn log_concavity_passes() {
        let r = audit(LemmaId::LogConcavity, AuditGrid::default());
        assert_eq!(r.totals.fail, 0);
        assert_eq!(r.totals.pass, r.points.len());
    }

    #[test]
    fn spn_gap_example() {
        let r = audit(LemmaId::SpnGapI, small());
        let n0 = min_l(4, 1) - 1;
        let hits: Vec<_> = r
            .points
            .iter()
            .filter(|p| p.params.0[..4] == [("t", 1), ("k", 4), ("j", 4), ("s", 0)])
            .collect();
        assert_eq!(hits.len(), 4);
        assert_eq!(hits[0].params.0[4], ("n", n0));
        assert!(hits.iter().all(|p| p.verdict == Verdict::Pass));
    }

    #[test]
    fn excluded_pairs_are_skipped() {
        let r = audit(LemmaId::R1VsR2II, small());
        let p = r
            .points
            .iter()
            .find(|p| p.params.0[..3] == [("t", 1), ("k", 4), ("l", 3)])
            .unwrap();
        assert!(matches!(p.verdict, Verdict::Skipped { .. }));
        assert_eq!(r.totals.fail, 0);
    }

    #[test]
    fn small_grid_has_no_failures_or_exact_inconclusives() {
        for l in LemmaId::ALL {
            let r = audit(l, small());
            assert_eq!(r.totals.fail, 0, "{l}: {:?}", r.failures().next());
            if !l.uses_intervals() {
                assert_eq!(r.totals.inconclusive, 0, "{l}");
            }
            assert!(!r.points.is_empty(), "{l}");
        }
    }

    #[test]
    fn q_at_two_one_is_exactly_eighteen() {
        assert_eq!(q_exact(2, 1).unwrap(), BigRational::from_integer(big(18)));
        let iv = ln_q(2, 1, 128);
        let ln18 = Interval::from_int(18).ln(128);
        assert!(iv.lo() <= ln18.hi() && ln18.lo() <= iv.hi());
    }

    #[test]
    fn corrupted_inequality_fails() {
        let p = exact(
            LemmaId::LogConcavity,
            params!(),
            "",
            big(1),
            Rel::Gt,
            big(2),
        );
        assert_eq!(p.verdict, Verdict::Fail);
        let q = certified(
            LemmaId::Ublkt,
            params!(),
            "",
            |p| (Interval::from_int(3).log2(p), Interval::from_int(2)),
            Rel::Gt,
        );
        assert_eq!(q.verdict, Verdict::Fail);
        let exact_tie = certified(
            LemmaId::Ublkt,
            params!(),
            "",
            |p| (Interval::from_int(4).log2(p), Interval::from_int(2)),
            Rel::Gt,
        );
        assert_eq!(exact_tie.verdict, Verdict::Fail);
        let tie = certified_upto(
            LemmaId::Ublkt,
            params!(),
            "",
            |p| {
                (
                    Interval::from_int(9).log2(p),
                    Interval::from_int(3).log2(p).scale_int(2),
                )
            },
            Rel::Gt,
            512,
        );
        assert!(matches!(tie.verdict, Verdict::Inconclusive { .. }));
    }

    #[test]
    fn stirling_estimate_threshold() {
        // 2(1 + ln 2) = 3.386..., so the least m is 4.
        assert_eq!(stirling_estimate_min_m(2, 1), 4);
        // 3(1 + ln 3) = 6.295...
        assert_eq!(stirling_estimate_min_m(3, 1), 7);
    }

    #[test]
    fn w_counts_match_enumeration() {
        let ground = GroundSet::new(7).unwrap();
        let g = parse_partition(ground, "{1,2|3,4|5,6,7}").unwrap();
        let fam = family_w(&g, 3, 1, 1 << 20).unwrap();
        let counter = WCounter::new(7, 3, 1, 3);
        assert_eq!(BigInt::from(fam.len()), counter.count(&[2, 2, 3]));
        // 10 |W| < 16 S(6,2).
        assert!(10 * fam.len() < 16 * 31);
        let partial = parse_partition(ground, "{1,2|4}").unwrap();
        let fam = family_w(&partial, 3, 1, 1 << 20).unwrap();
        assert_eq!(
            BigInt::from(fam.len()),
            WCounter::new(7, 3, 1, 2).count(&[2, 1])
        );
        let full = parse_partition(ground, "{1,2|3,4|5,6,7}").unwrap();
        assert_eq!(family_w(&full, 3, 3, 1 << 20).unwrap().len(), 1);
    }

    #[test]
    fn w_of_singletons_plus_rest_is_h() {
        for (n, k, t) in [(8, 3, 1), (9, 4, 2)] {
            let mut shape = vec![n - t - 1];
            shape.extend(std::iter::repeat_n(1, t + 1));
            let counter = WCounter::new(n as i64, k, t as i64, t + 2);
            assert_eq!(
                counter.count(&shape),
                BigInt::from(size_h(t as i64 + 1, k, t as i64, n as i64))
            );
        }
    }

    #[test]
    fn shape_counts() {
        assert_eq!(
            integer_partitions(6, 3),
            vec![vec![4, 1, 1], vec![3, 2, 1], vec![2, 2, 2]]
        );
        assert_eq!(count_partial_shapes(6, 3), partial_shapes(6, 3).count());
    }

    #[test]
    fn regimes() {
        let r = compare_regimes(3, 1, 10..=12);
        assert!(r.skipped.is_some());
        let r = compare_regimes(5, 2, 30..=30);
        assert_eq!(r.rows[0].sign, "r1>r2");
        assert_eq!(r.rows[0].cond_r1, Some(true));
        assert!(!r.rows[0].in_range);
        let n0 = min_2l(5, 2);
        let r = compare_regimes(5, 2, n0..=n0 + 5);
        assert_eq!(r.inconsistent, 0);
    }
}
