//! Desk-scale verification of the main theorems and propositions.
//!
//! Each check runs in up to three tiers. T1 evaluates the stated bound and
//! the regime comparisons exactly at the requested `n`. T2 builds the claimed
//! optimal families at an enumerable `n` and certifies them. T3 searches for
//! something better and says whether that search was exhaustive.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::constructions::{size_phi, size_r1, size_r2, ConstructionKind, ConstructionSpec, Side};
use crate::error::{Error, Result};
use crate::partition::{
    common_blocks, first_singletons, universe, Block, Family, GroundSet, Partition,
};
use crate::search::{
    all_optimal_pairs, is_cross_t_intersecting, seeded_search, tuple_seeded_search, DualContext,
    SearchResult, SeededConfig, TupleContext,
};
use crate::stirling::{large_r_threshold_holds, stirling, BigCount, ThresholdParams};

/// Pair searches run at the requested `n` when the adjacency has at most
/// this many cells.
pub const DESK_PAIR_CELLS: u64 = 100_000_000;
/// Otherwise they drop to the largest `n` whose universes have at most this
/// many members.
pub const DESK_PAIR_UNIVERSE: u64 = 1_000;
/// Tuple checks need every universe at most this large.
pub const DESK_TUPLE_UNIVERSE: u64 = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TheoremId {
    #[serde(rename = "1.3")]
    T13,
    #[serde(rename = "1.4")]
    T14,
    #[serde(rename = "1.5")]
    T15,
    #[serde(rename = "1.6")]
    T16,
    #[serde(rename = "P2.8")]
    P28,
    #[serde(rename = "P3.5")]
    P35,
    #[serde(rename = "P4.1")]
    P41,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::T13,
        TheoremId::T14,
        TheoremId::T15,
        TheoremId::T16,
        TheoremId::P28,
        TheoremId::P35,
        TheoremId::P41,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::T13 => "1.3",
            TheoremId::T14 => "1.4",
            TheoremId::T15 => "1.5",
            TheoremId::T16 => "1.6",
            TheoremId::P28 => "P2.8",
            TheoremId::P35 => "P3.5",
            TheoremId::P41 => "P4.1",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<TheoremId> {
        let s = s.trim();
        TheoremId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown theorem {s:?}")))
    }
}

/// `n`, the uniformities in nonincreasing order, and `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyParams {
    pub n: usize,
    pub ks: Vec<usize>,
    pub t: usize,
}

impl FromStr for VerifyParams {
    type Err = Error;

    /// Space-separated `key=value` pairs: `n`, `t`, and either `ks=k1,k2,..`
    /// or `k` and `l`.
    fn from_str(s: &str) -> Result<VerifyParams> {
        let (mut n, mut t, mut ks, mut k, mut l) = (None, None, None, None, None);
        let num = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad number {v:?}")))
        };
        for tok in s.split_whitespace() {
            let (key, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {tok:?}")))?;
            match key {
                "n" => n = Some(num(v)?),
                "t" => t = Some(num(v)?),
                "k" => k = Some(num(v)?),
                "l" => l = Some(num(v)?),
                "ks" => ks = Some(v.split(',').map(num).collect::<Result<Vec<_>>>()?),
                _ => return Err(Error::Parse(format!("unknown parameter {key:?}"))),
            }
        }
        let ks = match (ks, k, l) {
            (Some(ks), None, None) => ks,
            (None, Some(k), l) => std::iter::once(k).chain(l).collect(),
            (None, None, None) => Vec::new(),
            _ => return Err(Error::Parse("give either ks or k/l, not both".into())),
        };
        Ok(VerifyParams {
            n: n.ok_or_else(|| Error::Parse("missing n".into()))?,
            ks,
            t: t.unwrap_or(1),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TierStatus {
    Pass,
    Fail,
    /// Computed and reported; the statement makes no claim at these values.
    Recorded,
    NotRun,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TierReport {
    pub tier: &'static str,
    pub status: TierStatus,
    /// Whether the tier covered every candidate, as opposed to finding no
    /// counterexample among those tried.
    pub exhaustive: bool,
    /// Ground set size the tier ran at.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub details: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchResult>,
}

impl TierReport {
    fn new(tier: &'static str, n: Option<usize>) -> TierReport {
        TierReport {
            tier,
            status: TierStatus::Pass,
            exhaustive: false,
            n,
            details: BTreeMap::new(),
            search: None,
        }
    }

    fn not_run(tier: &'static str, reason: &str) -> TierReport {
        let mut r = TierReport::new(tier, None);
        r.status = TierStatus::NotRun;
        r.note("reason", reason);
        r
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.details.insert(key.to_string(), value.to_string());
    }

    /// Records a named check and fails the tier when it does not hold.
    fn check(&mut self, key: &str, ok: bool) {
        self.note(key, ok);
        if !ok {
            self.status = TierStatus::Fail;
        }
    }

    /// Downgrades a passing tier to recorded.
    fn record_only(&mut self) {
        if self.status == TierStatus::Pass {
            self.status = TierStatus::Recorded;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub params: VerifyParams,
    pub tiers: Vec<TierReport>,
}

impl TheoremReport {
    /// No tier failed.
    pub fn passed(&self) -> bool {
        self.tiers.iter().all(|t| t.status != TierStatus::Fail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub budget: u64,
    pub seed: u64,
    pub gen_max: usize,
    /// Random generator sets per side for pair searches.
    pub random_draws: usize,
    /// Random draws for tuple searches.
    pub tuple_draws: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget: 10_000_000,
            seed: 0,
            gen_max: 2,
            random_draws: 10_000,
            tuple_draws: 300,
        }
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidParameters(msg)
}

fn s(n: usize, k: usize) -> BigCount {
    stirling(n as i64, k as i64)
}

fn to_u64(v: &BigCount) -> u64 {
    u64::try_from(v).unwrap_or(u64::MAX)
}

/// The `n` a structural or search tier runs at, if any.
fn desk_n(n: usize, ks: &[usize], tuple: bool) -> Option<usize> {
    let k1 = *ks.iter().max()?;
    let widest = |m: usize| ks.iter().map(|&k| to_u64(&s(m, k))).max().unwrap_or(0);
    let fits_here = if tuple {
        widest(n) <= DESK_TUPLE_UNIVERSE
    } else {
        ks.iter()
            .fold(1u64, |acc, &k| acc.saturating_mul(to_u64(&s(n, k))))
            <= DESK_PAIR_CELLS
    };
    if n <= 64 && fits_here {
        return Some(n);
    }
    let cap = if tuple {
        DESK_TUPLE_UNIVERSE
    } else {
        DESK_PAIR_UNIVERSE
    };
    (k1 + 1..n.min(65)).rev().find(|&m| widest(m) <= cap)
}

fn ground(n: usize) -> Result<GroundSet> {
    GroundSet::new(n)
}

/// `{F ∈ S([n], k) : X ⊆ F}`.
fn containing(ground: GroundSet, k: usize, x: &Partition, budget: u64) -> Result<Family> {
    Ok(universe(ground, k, budget)?.filter(|p| x.is_subset_of(p)))
}

fn build(spec: Result<ConstructionSpec>, budget: u64) -> Result<Family> {
    spec?.enumerate(budget)
}

fn nontrivial(families: &[&Family], t: usize) -> Result<bool> {
    Ok(common_blocks(families)?.len() < t)
}

fn product(families: &[&Family]) -> BigCount {
    families
        .iter()
        .fold(BigCount::from(1u32), |acc, f| acc * BigCount::from(f.len()))
}

fn check_sorted(p: &VerifyParams, r_min: usize) -> Result<()> {
    if p.t == 0 {
        return Err(invalid("t >= 1 is required".into()));
    }
    if p.ks.len() < r_min {
        return Err(invalid(format!(
            "need at least {r_min} uniformities, got {}",
            p.ks.len()
        )));
    }
    if p.ks.windows(2).any(|w| w[0] < w[1]) {
        return Err(invalid("uniformities must be nonincreasing".into()));
    }
    if p.ks[0] > p.n {
        return Err(invalid(format!("k1 = {} exceeds n = {}", p.ks[0], p.n)));
    }
    Ok(())
}

/// Runs the tiers of `theorem` at `params`.
pub fn verify_theorem(
    theorem: TheoremId,
    params: &VerifyParams,
    opts: &VerifyOptions,
) -> Result<TheoremReport> {
    let tiers = match theorem {
        TheoremId::T13 => erdos_ko_rado(params, opts)?,
        TheoremId::T14 | TheoremId::T15 => nontrivial_pairs(theorem, params, opts)?,
        TheoremId::T16 => nontrivial_tuples(params, opts)?,
        TheoremId::P28 => uniform_t_plus_one_pair(params, opts)?,
        TheoremId::P35 => three_three(params, opts)?,
        TheoremId::P41 => uniform_t_plus_one_tuple(params, opts)?,
    };
    Ok(TheoremReport {
        theorem,
        params: params.clone(),
        tiers,
    })
}

fn erdos_ko_rado(p: &VerifyParams, opts: &VerifyOptions) -> Result<Vec<TierReport>> {
    check_sorted(p, 2)?;
    let (n, t, ks) = (p.n, p.t, &p.ks);
    if ks[0] < t + 2 || ks[ks.len() - 1] < t + 1 {
        return Err(invalid("need k1 >= t+2 and every k_i >= t+1".into()));
    }
    let tp = ThresholdParams::new(ks[0] as u32, t as u32)?;
    let bound = |m: usize| {
        ks.iter()
            .fold(BigCount::from(1u32), |acc, &k| acc * s(m - t, k - t))
    };

    let mut t1 = TierReport::new("T1", Some(n));
    let in_range = tp.l_holds(n as i64);
    t1.note("bound", bound(n));
    t1.note("n_at_least_L", in_range);
    t1.note("min_n_for_L", tp.min_n_l());
    let x = first_singletons(ground(n)?, t)?;
    let sizes: BigCount = ks
        .iter()
        .map(|&k| {
            ConstructionSpec::new(ground(n)?, ConstructionKind::W { k, t, g: x.clone() })
                .map(|c| c.exact_size())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .product();
    t1.check("trivial_product_equals_bound", sizes == bound(n));

    let tuple = ks.len() >= 3;
    let Some(m) = desk_n(n, ks, tuple) else {
        return Ok(vec![
            t1,
            TierReport::not_run("T2", "no enumerable n"),
            TierReport::not_run("T3", "no enumerable n"),
        ]);
    };
    let g = ground(m)?;
    let x = first_singletons(g, t)?;
    let fams = ks
        .iter()
        .map(|&k| containing(g, k, &x, opts.budget))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&Family> = fams.iter().collect();
    let mut t2 = TierReport::new("T2", Some(m));
    t2.check("cross_t_intersecting", is_cross_t_intersecting(&refs, t)?);
    let maximal = if tuple {
        TupleContext::new(g, ks, t, opts.budget)?.is_tuple_maximal(&fams)?
    } else {
        DualContext::new(g, ks[0], ks[1], t, opts.budget)?.is_maximal_pair(&fams[0], &fams[1])?
    };
    t2.check("maximal", maximal);
    t2.note("product", product(&refs));
    t2.check("product_equals_bound", product(&refs) == bound(m));

    let mut t3 = TierReport::new("T3", Some(m));
    let config = SeededConfig {
        gen_max: opts.gen_max,
        seed: opts.seed,
        random_draws: if tuple {
            opts.tuple_draws
        } else {
            opts.random_draws
        },
        ..SeededConfig::default()
    };
    let result = if tuple {
        tuple_seeded_search(&TupleContext::new(g, ks, t, opts.budget)?, &config)?
    } else {
        seeded_search(&DualContext::new(g, ks[0], ks[1], t, opts.budget)?, &config)?
    };
    t3.note("bound", bound(m));
    t3.note("best_product", &result.best_product);
    let claimed = tp.l_holds(m as i64);
    if claimed {
        t3.check("nothing_larger_found", result.best_product <= bound(m));
        t3.check("bound_attained", result.best_product == bound(m));
        let w: Vec<&Family> = result.witness_families.iter().collect();
        t3.check("witness_trivial", !w.is_empty() && !nontrivial(&w, t)?);
    } else {
        t3.note("nothing_larger_found", result.best_product <= bound(m));
        t3.record_only();
    }
    t3.exhaustive = result.exhaustive;
    t3.search = Some(result);
    Ok(vec![t1, t2, t3])
}

/// The four products for a pair, in the order r1(k,l), r1(l,k), r2(k,l), r2(l,k).
fn four_products(n: usize, k: usize, l: usize, t: usize) -> Result<[BigCount; 4]> {
    let (n, k, l, t) = (n as i64, k as i64, l as i64, t as i64);
    Ok([
        size_r1(n, k, l, t)?,
        size_r1(n, l, k, t)?,
        size_r2(n, k, l, t)?,
        size_r2(n, l, k, t)?,
    ])
}

/// The optimal pairs the theorem names, as (F, G) with F k-uniform.
fn named_pairs(
    g: GroundSet,
    k: usize,
    l: usize,
    t: usize,
    budget: u64,
) -> Result<Vec<(&'static str, Family, Family)>> {
    let mut out = vec![
        (
            "A(k,l,t),B(l,t)",
            build(ConstructionSpec::a_default(g, k, l, t), budget)?,
            build(ConstructionSpec::b_default(g, l, t), budget)?,
        ),
        (
            "C(k,t),D(l,t)",
            build(ConstructionSpec::c_default(g, k, t), budget)?,
            build(ConstructionSpec::d_default(g, l, t), budget)?,
        ),
    ];
    if k == l {
        out.push((
            "B(k,t),A(l,k,t)",
            build(ConstructionSpec::b_default(g, k, t), budget)?,
            build(ConstructionSpec::a_default(g, l, k, t), budget)?,
        ));
        out.push((
            "D(k,t),C(l,t)",
            build(ConstructionSpec::d_default(g, k, t), budget)?,
            build(ConstructionSpec::c_default(g, l, t), budget)?,
        ));
    }
    Ok(out)
}

fn certify_pairs(
    t2: &mut TierReport,
    ctx: &DualContext,
    pairs: &[(&'static str, Family, Family)],
    expected: &[BigCount],
) -> Result<()> {
    for ((name, f, g), want) in pairs.iter().zip(expected) {
        t2.check(&format!("{name}: maximal"), ctx.is_maximal_pair(f, g)?);
        t2.check(
            &format!("{name}: nontrivial"),
            nontrivial(&[f, g], ctx.t())?,
        );
        let got = product(&[f, g]);
        t2.note(&format!("{name}: product"), &got);
        t2.check(&format!("{name}: product_matches_formula"), &got == want);
    }
    Ok(())
}

fn nontrivial_pairs(
    theorem: TheoremId,
    p: &VerifyParams,
    opts: &VerifyOptions,
) -> Result<Vec<TierReport>> {
    check_sorted(p, 2)?;
    if p.ks.len() != 2 {
        return Err(invalid("exactly two uniformities are required".into()));
    }
    let (n, k, l, t) = (p.n, p.ks[0], p.ks[1], p.t);
    if l < t + 2 {
        return Err(invalid("need k >= l >= t+2".into()));
    }
    if theorem == TheoremId::T14 && (k, l) == (3, 3) {
        return Err(invalid("(k,l) = (3,3) is covered by P3.5".into()));
    }
    if theorem == TheoremId::T15
        && l <= 2 * t + 1
        && ((k, l) == (2 * t + 1, 2 * t + 1) || (k, l) == (4, 3))
    {
        return Err(invalid(
            "(k,l) is (2t+1,2t+1) or (4,3), where no single optimum is claimed".into(),
        ));
    }
    let tp = ThresholdParams::new(k as u32, t as u32)?;
    let in_range = tp.two_l_holds(n as i64);
    let [r1_kl, r1_lk, r2_kl, r2_lk] = four_products(n, k, l, t)?;
    let mut t1 = TierReport::new("T1", Some(n));
    t1.note("r1(k,l)", &r1_kl);
    t1.note("r1(l,k)", &r1_lk);
    t1.note("r2(k,l)", &r2_kl);
    t1.note("r2(l,k)", &r2_lk);
    t1.note("n_at_least_2L", in_range);
    t1.note("min_n_for_2L", tp.min_n_two_l());
    let all = [&r1_kl, &r1_lk, &r2_kl, &r2_lk];
    let best = all.iter().copied().max().expect("four values").clone();
    t1.note("max", &best);
    if k > l {
        t1.check("r2(k,l) > r2(l,k)", r2_kl > r2_lk);
    }
    let extra = t + 1 + (k - t) * (l - t);
    let mut claimed = in_range;
    match theorem {
        TheoremId::T14 => {
            if l >= 2 * t + 2 {
                t1.check("r1(k,l) > r2(k,l)", r1_kl > r2_kl);
            } else if (k, l) != (2 * t + 1, 2 * t + 1) && (k, l) != (4, 3) {
                t1.check("r1(k,l) < r2(k,l)", r1_kl < r2_kl);
            }
            if k > l && n >= extra {
                t1.check("r1(k,l) > r1(l,k)", r1_kl > r1_lk);
            }
            t1.check("max is r1(k,l) or r2(k,l)", best == r1_kl || best == r2_kl);
        }
        _ => {
            let bound = if l >= 2 * t + 2 {
                claimed &= n >= extra;
                t1.note("n_at_least_t+1+(k-t)(l-t)", n >= extra);
                r1_kl.clone()
            } else {
                r2_kl.clone()
            };
            t1.note("bound", &bound);
            t1.check("bound is the max of the four", bound == best);
        }
    }
    if !claimed {
        t1.record_only();
    }

    let mut t3 = TierReport::not_run("T3", "search in the n >= 2L regime is beyond enumeration");
    t3.note(
        "smallest_admissible_universe",
        s(tp.min_n_two_l() as usize, k),
    );

    let Some(m) = desk_n(n, &p.ks, false) else {
        return Ok(vec![t1, TierReport::not_run("T2", "no enumerable n"), t3]);
    };
    let g = ground(m)?;
    let mut pairs = named_pairs(g, k, l, t, opts.budget)?;
    if theorem == TheoremId::T15 {
        let keep = if l >= 2 * t + 2 {
            "A(k,l,t),B(l,t)"
        } else {
            "C(k,t),D(l,t)"
        };
        let swapped = if l >= 2 * t + 2 {
            "B(k,t),A(l,k,t)"
        } else {
            "D(k,t),C(l,t)"
        };
        pairs.retain(|(name, _, _)| *name == keep || *name == swapped);
    }
    let [a, b, c, d] = four_products(m, k, l, t)?;
    let expected: Vec<BigCount> = pairs
        .iter()
        .map(|(name, _, _)| match *name {
            "A(k,l,t),B(l,t)" => a.clone(),
            "B(k,t),A(l,k,t)" => b.clone(),
            "C(k,t),D(l,t)" => c.clone(),
            _ => d.clone(),
        })
        .collect();
    let mut t2 = TierReport::new("T2", Some(m));
    let ctx = DualContext::new(g, k, l, t, opts.budget)?;
    certify_pairs(&mut t2, &ctx, &pairs, &expected)?;
    Ok(vec![t1, t2, t3])
}

fn nontrivial_tuples(p: &VerifyParams, opts: &VerifyOptions) -> Result<Vec<TierReport>> {
    check_sorted(p, 3)?;
    let (n, t, ks) = (p.n, p.t, &p.ks);
    let r = ks.len();
    if ks[r - 1] < t + 2 {
        return Err(invalid("need every k_i >= t+2".into()));
    }
    let ks_i: Vec<i64> = ks.iter().map(|&k| k as i64).collect();
    let paper_bound = |m: usize| -> BigCount {
        let kr = ks[r - 1];
        let d =
            BigCount::from(t + 1) * s(m - t, kr - t) - BigCount::from(t) * s(m - t - 1, kr - t - 1);
        ks[..r - 1]
            .iter()
            .fold(d, |acc, &k| acc * s(m - t - 1, k - t - 1))
    };
    let mut t1 = TierReport::new("T1", Some(n));
    let in_range = large_r_threshold_holds(n as i64, ks[0] as u32);
    let phi = size_phi(t as i64 + 1, r, &ks_i, t as i64, n as i64)?;
    t1.note("bound", paper_bound(n));
    t1.note("phi(t+1,r)", &phi);
    t1.note("n_at_least_5-k1+2k1log2k1", in_range);
    t1.check("bound_equals_phi", phi == paper_bound(n));
    if !in_range {
        t1.record_only();
    }

    let Some(m) = desk_n(n, ks, true) else {
        return Ok(vec![
            t1,
            TierReport::not_run("T2", "no enumerable n"),
            TierReport::not_run("T3", "no enumerable n"),
        ]);
    };
    let g = ground(m)?;
    let ctx = TupleContext::new(g, ks, t, opts.budget)?;
    let mut t2 = TierReport::new("T2", Some(m));
    for a in (0..r).filter(|&a| ks[a] == ks[r - 1]) {
        let fams = ks
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let spec = if i == a {
                    ConstructionSpec::d_default(g, k, t)
                } else {
                    ConstructionSpec::c_default(g, k, t)
                };
                build(spec, opts.budget)
            })
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Family> = fams.iter().collect();
        let tag = format!("D at {}", a + 1);
        t2.check(
            &format!("{tag}: tuple_maximal"),
            ctx.is_tuple_maximal(&fams)?,
        );
        t2.check(
            &format!("{tag}: cross_t_intersecting"),
            is_cross_t_intersecting(&refs, t)?,
        );
        t2.check(&format!("{tag}: nontrivial"), nontrivial(&refs, t)?);
        let want = size_phi(t as i64 + 1, a + 1, &ks_i, t as i64, m as i64)?;
        t2.note(&format!("{tag}: product"), product(&refs));
        t2.check(
            &format!("{tag}: product_equals_phi"),
            product(&refs) == want,
        );
    }

    let mut t3 = TierReport::new("T3", Some(m));
    let config = SeededConfig {
        gen_max: opts.gen_max,
        seed: opts.seed,
        random_draws: opts.tuple_draws,
        nontrivial: true,
        ..SeededConfig::default()
    };
    let result = tuple_seeded_search(&ctx, &config)?;
    let bound = paper_bound(m);
    t3.note("bound", &bound);
    t3.note("best_product", &result.best_product);
    if large_r_threshold_holds(m as i64, ks[0] as u32) {
        t3.check("nothing_larger_found", result.best_product <= bound);
    } else {
        t3.note("nothing_larger_found", result.best_product <= bound);
        t3.record_only();
    }
    t3.search = Some(result);
    Ok(vec![t1, t2, t3])
}

/// Which structure of the (t+1)-uniform classification a maximal tuple has.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    /// The last families are one (t+1)-partition G; the first is everything
    /// meeting G in exactly t blocks.
    I,
    /// The first families contain a partial partition M; the last is
    /// `{A ∪ {rest} : A ⊆ M, |A| = t}`.
    Ii,
}

/// Classifies a tuple whose last family is (t+1)-uniform, or `None` when it
/// matches neither structure.
pub fn classify_t_plus_one(families: &[&Family], t: usize, budget: u64) -> Result<Option<Shape>> {
    let (last, init) = families.split_last().ok_or(Error::EmptyFamily)?;
    let first = init
        .first()
        .ok_or_else(|| invalid("need at least two families".into()))?;
    let g = first.ground();
    if last.k() != t + 1 || families.iter().any(|f| f.is_empty()) {
        return Ok(None);
    }
    if last.len() == 1 {
        let g0 = &last.members()[0];
        let rest_ok = init[1..]
            .iter()
            .all(|f| f.len() == 1 && &f.members()[0] == g0);
        let want = universe(g, first.k(), budget)?.filter(|p| p.shared_count(g0) == t);
        if rest_ok && **first == want {
            return Ok(Some(Shape::I));
        }
        return Ok(None);
    }
    let m = common_blocks(&[first])?;
    if m.len() < t + 1 || (m.is_full() && m.len() == t + 1) {
        return Ok(None);
    }
    for f in init {
        if m.len() > f.k() || **f != containing(g, f.k(), &m, budget)? {
            return Ok(None);
        }
    }
    let spec = ConstructionSpec::new(
        g,
        ConstructionKind::P28ii {
            k: first.k(),
            t,
            m,
            side: Side::G,
        },
    )?;
    Ok((**last == spec.enumerate(budget)?).then_some(Shape::Ii))
}

/// Tuples `({F : M ⊆ F} for each k in ks_head, {A ∪ {rest} : A ⊆ M, |A| = t})`
/// for a few small anchors M, skipping any with an empty family.
fn shape_ii_candidates(
    g: GroundSet,
    ks_head: &[usize],
    t: usize,
    budget: u64,
) -> Result<Vec<(Partition, Vec<Family>)>> {
    let n = g.n();
    let base = first_singletons(g, t)?;
    let mut anchors = vec![first_singletons(g, t + 1)?];
    if t + 2 < n {
        anchors.push(base.with_block(Block::from_elements([t + 1, t + 2])?)?);
    }
    if t + 1 < n {
        let m = first_singletons(g, t + 1)?;
        let rest = Block::from_mask(g.full_mask() & !m.support_mask()).expect("t + 1 < n");
        anchors.push(m.with_block(rest)?);
    }
    let kmin = *ks_head.iter().min().ok_or(Error::EmptyFamily)?;
    let mut out = Vec::new();
    for m in anchors {
        if m.len() > kmin || (m.is_full() && m.len() == t + 1) {
            continue;
        }
        let mut fams = ks_head
            .iter()
            .map(|&k| containing(g, k, &m, budget))
            .collect::<Result<Vec<_>>>()?;
        let spec = ConstructionSpec::new(
            g,
            ConstructionKind::P28ii {
                k: ks_head[0],
                t,
                m: m.clone(),
                side: Side::G,
            },
        )?;
        fams.push(spec.enumerate(budget)?);
        if fams.iter().all(|f| !f.is_empty()) {
            out.push((m, fams));
        }
    }
    Ok(out)
}

fn uniform_t_plus_one_pair(p: &VerifyParams, opts: &VerifyOptions) -> Result<Vec<TierReport>> {
    let (n, t) = (p.n, p.t);
    let k = match p.ks.as_slice() {
        [k] => *k,
        [k, l] if *l == t + 1 => *k,
        _ => return Err(invalid("give k (and optionally l = t+1)".into())),
    };
    if t == 0 || k < t + 2 || k > n {
        return Err(invalid("need n >= k >= t+2 and t >= 1".into()));
    }
    let tp = ThresholdParams::new(k as u32, t as u32)?;
    let mut t1 = TierReport::new("T1", Some(n));
    let bound = s(n - t, k - t);
    t1.note("bound", &bound);
    t1.note("n_at_least_L", tp.l_holds(n as i64));
    let spec = ConstructionSpec::p28i_default(ground(n)?, k, t, Side::F)?;
    t1.check(
        "shape_i_trivial_size_equals_bound",
        spec.exact_size() == bound,
    );

    let ks = [k, t + 1];
    let Some(m) = desk_n(n, &ks, false) else {
        return Ok(vec![
            t1,
            TierReport::not_run("T2", "no enumerable n"),
            TierReport::not_run("T3", "no enumerable n"),
        ]);
    };
    let g = ground(m)?;
    let ctx = DualContext::new(g, k, t + 1, t, opts.budget)?;
    let mut t2 = TierReport::new("T2", Some(m));
    let fi = build(
        ConstructionSpec::p28i_default(g, k, t, Side::F),
        opts.budget,
    )?;
    let gi = build(
        ConstructionSpec::p28i_default(g, k, t, Side::G),
        opts.budget,
    )?;
    t2.check("shape i: maximal", ctx.is_maximal_pair(&fi, &gi)?);
    t2.check(
        "shape i: product_equals_bound",
        product(&[&fi, &gi]) == s(m - t, k - t),
    );
    let mut found = None;
    for (mm, fams) in shape_ii_candidates(g, &[k], t, opts.budget)? {
        if ctx.is_maximal_pair(&fams[0], &fams[1])? {
            found = Some(mm);
            break;
        }
    }
    t2.check("shape ii: maximal", found.is_some());
    if let Some(mm) = found {
        t2.note("shape ii: M", mm);
    }

    let mut t3 = TierReport::new("T3", Some(m));
    match all_optimal_pairs(&ctx, false, opts.budget) {
        Ok((best, witnesses)) => {
            t3.exhaustive = true;
            t3.note("max_product", &best);
            t3.note("optimal_pairs", witnesses.len());
            let mut shapes = BTreeMap::new();
            let mut all_match = true;
            for (f, gg) in &witnesses {
                match classify_t_plus_one(&[f, gg], t, opts.budget)? {
                    Some(sh) => *shapes.entry(format!("{sh:?}")).or_insert(0usize) += 1,
                    None => all_match = false,
                }
            }
            t3.note("shapes", format!("{shapes:?}"));
            t3.check("witnesses_match_shape_i_or_ii", all_match);
            let target = s(m - t, k - t);
            if tp.l_holds(m as i64) {
                t3.check("max_equals_bound", best == target);
            } else if best == target {
                t3.note("max_equals_bound", true);
            } else {
                t3.note("max_equals_bound", false);
                t3.record_only();
            }
        }
        Err(Error::BudgetExceeded { .. }) => {
            t3 = TierReport::not_run("T3", "closed-set enumeration exceeded the budget");
        }
        Err(e) => return Err(e),
    }
    Ok(vec![t1, t2, t3])
}

fn three_three(p: &VerifyParams, opts: &VerifyOptions) -> Result<Vec<TierReport>> {
    if !(p.ks.is_empty() || p.ks == [3, 3]) || p.t != 1 {
        return Err(invalid("P3.5 is stated for k = l = 3 and t = 1".into()));
    }
    let n = p.n;
    if n < 5 {
        return Err(invalid("need n >= 5".into()));
    }
    let tp = ThresholdParams::new(3, 1)?;
    let mut t1 = TierReport::new("T1", Some(n));
    let r1 = size_r1(n as i64, 3, 3, 1)?;
    let r2 = size_r2(n as i64, 3, 3, 1)?;
    let s2 = s(n - 1, 2);
    t1.note("r1", &r1);
    t1.note("r2", &r2);
    t1.note("n_at_least_2L", tp.two_l_holds(n as i64));
    t1.check(
        "r1 = 2(S(n-1,2)+1)",
        r1 == BigCount::from(2u32) * (&s2 + 1u32),
    );
    t1.check("r2 = 2S(n-1,2)-1", r2 + 1u32 == BigCount::from(2u32) * &s2);
    t1.check(
        "r1 > r2",
        size_r1(n as i64, 3, 3, 1)? > size_r2(n as i64, 3, 3, 1)?,
    );
    if !tp.two_l_holds(n as i64) {
        t1.record_only();
    }

    let Some(m) = desk_n(n, &[3, 3], false) else {
        return Ok(vec![
            t1,
            TierReport::not_run("T2", "no enumerable n"),
            TierReport::not_run("T3", "no enumerable n"),
        ]);
    };
    let g = ground(m)?;
    let ctx = DualContext::new(g, 3, 3, 1, opts.budget)?;
    let mut t2 = TierReport::new("T2", Some(m));
    let pairs = named_pairs(g, 3, 3, 1, opts.budget)?;
    let [a, b, c, d] = four_products(m, 3, 3, 1)?;
    let expected: Vec<BigCount> = pairs
        .iter()
        .map(|(name, _, _)| match *name {
            "A(k,l,t),B(l,t)" => a.clone(),
            "B(k,t),A(l,k,t)" => b.clone(),
            "C(k,t),D(l,t)" => c.clone(),
            _ => d.clone(),
        })
        .collect();
    certify_pairs(&mut t2, &ctx, &pairs, &expected)?;

    let mut t3 = TierReport::new("T3", Some(m));
    let config = SeededConfig {
        gen_max: opts.gen_max,
        seed: opts.seed,
        random_draws: opts.random_draws,
        nontrivial: true,
        ..SeededConfig::default()
    };
    let result = seeded_search(&ctx, &config)?;
    t3.note("r1_at_desk_n", &a);
    t3.note("best_product", &result.best_product);
    t3.note("nothing_larger_found", result.best_product <= a);
    t3.record_only();
    t3.search = Some(result);
    Ok(vec![t1, t2, t3])
}

fn uniform_t_plus_one_tuple(p: &VerifyParams, opts: &VerifyOptions) -> Result<Vec<TierReport>> {
    check_sorted(p, 3)?;
    let (n, t, ks) = (p.n, p.t, &p.ks);
    let r = ks.len();
    if ks[r - 1] != t + 1 || ks[0] < t + 2 {
        return Err(invalid("need k1 >= t+2 and k_r = t+1".into()));
    }
    let t1 = TierReport::not_run("T1", "the statement is structural and names no bound");
    let Some(m) = desk_n(n, ks, true) else {
        return Ok(vec![
            t1,
            TierReport::not_run("T2", "no enumerable n"),
            TierReport::not_run("T3", "no enumerable n"),
        ]);
    };
    let g = ground(m)?;
    let ctx = TupleContext::new(g, ks, t, opts.budget)?;
    let mut t2 = TierReport::new("T2", Some(m));
    let fams: Vec<Family> = if ks[1] == t + 1 {
        let x = first_singletons(g, t)?;
        let rest = Block::from_mask(g.full_mask() & !x.support_mask())
            .ok_or_else(|| invalid("need n > t".into()))?;
        let g0 = x.with_block(rest)?;
        let mut v = vec![universe(g, ks[0], opts.budget)?.filter(|q| q.shared_count(&g0) == t)];
        v.extend(
            (1..r)
                .map(|_| Family::new(g, t + 1, [g0.clone()]))
                .collect::<Result<Vec<_>>>()?,
        );
        t2.note("structure", "i");
        v
    } else {
        t2.note("structure", "ii");
        let mut chosen = None;
        for (mm, v) in shape_ii_candidates(g, &ks[..r - 1], t, opts.budget)? {
            if ctx.is_tuple_maximal(&v)? {
                t2.note("M", mm);
                chosen = Some(v);
                break;
            }
        }
        match chosen {
            Some(v) => v,
            None => {
                t2.check("tuple_maximal", false);
                return Ok(vec![
                    t1,
                    t2,
                    TierReport::not_run("T3", "no maximal structure to compare against"),
                ]);
            }
        }
    };
    let refs: Vec<&Family> = fams.iter().collect();
    t2.check("tuple_maximal", ctx.is_tuple_maximal(&fams)?);
    t2.check("nontrivial", nontrivial(&refs, t)?);
    t2.check(
        "classified",
        classify_t_plus_one(&refs, t, opts.budget)?.is_some(),
    );

    let mut t3 = TierReport::new("T3", Some(m));
    let config = SeededConfig {
        gen_max: opts.gen_max,
        seed: opts.seed,
        random_draws: opts.tuple_draws,
        nontrivial: true,
        ..SeededConfig::default()
    };
    let result = tuple_seeded_search(&ctx, &config)?;
    t3.note("best_product", &result.best_product);
    let w: Vec<&Family> = result.witness_families.iter().collect();
    if w.is_empty() {
        t3.note("witness", "none found");
        t3.record_only();
    } else {
        let shape = classify_t_plus_one(&w, t, opts.budget)?;
        t3.note("witness_shape", format!("{shape:?}"));
        t3.check("witness_matches_shape_i_or_ii", shape.is_some());
    }
    t3.search = Some(result);
    Ok(vec![t1, t2, t3])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyOptions {
        VerifyOptions {
            random_draws: 200,
            tuple_draws: 30,
            ..VerifyOptions::default()
        }
    }

    #[test]
    fn params_parse() {
        let p: VerifyParams = "n=17 ks=3,3,3 t=1".parse().unwrap();
        assert_eq!(
            p,
            VerifyParams {
                n: 17,
                ks: vec![3, 3, 3],
                t: 1
            }
        );
        let q: VerifyParams = "n=8 k=4 l=3".parse().unwrap();
        assert_eq!(q.ks, vec![4, 3]);
        assert!("k=3".parse::<VerifyParams>().is_err());
        assert!("n=5 ks=3 k=3".parse::<VerifyParams>().is_err());
    }

    #[test]
    fn desk_n_choices() {
        assert_eq!(desk_n(10, &[3, 3], false), Some(10));
        assert_eq!(desk_n(20, &[3, 3], false), Some(8));
        assert_eq!(desk_n(17, &[3, 3, 3], true), Some(7));
        assert_eq!(desk_n(7, &[4, 3, 3], true), Some(7));
    }

    #[test]
    fn three_three_tiers() {
        let p: VerifyParams = "n=20 ks=3,3 t=1".parse().unwrap();
        let r = verify_theorem(TheoremId::P35, &p, &quick()).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.tiers[0].status, TierStatus::Pass);
        assert_eq!(r.tiers[0].details["r1"], "524288");
        assert_eq!(r.tiers[0].details["r2"], "524285");
        assert_eq!(r.tiers[1].n, Some(8));
        assert!(!r.tiers[2].exhaustive);
    }

    #[test]
    fn proposition_pair_at_six() {
        let p: VerifyParams = "n=6 k=3 l=2 t=1".parse().unwrap();
        let r = verify_theorem(TheoremId::P28, &p, &quick()).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert!(r.tiers[2].exhaustive);
        assert_eq!(r.tiers[2].details["max_product"], "15");
    }

    #[test]
    fn nontrivial_pair_structures() {
        let p: VerifyParams = "n=30 k=4 l=3 t=1".parse().unwrap();
        let r = verify_theorem(TheoremId::T14, &p, &quick()).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.tiers[2].status, TierStatus::NotRun);
    }

    #[test]
    fn tuple_tiers() {
        let p: VerifyParams = "n=17 ks=3,3,3 t=1".parse().unwrap();
        let r = verify_theorem(TheoremId::T16, &p, &quick()).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.tiers[1].n, Some(7));
        let q: VerifyParams = "n=6 ks=3,3,2 t=1".parse().unwrap();
        let r = verify_theorem(TheoremId::P41, &q, &quick()).unwrap();
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn refusals() {
        let o = quick();
        let bad = |id, s: &str| verify_theorem(id, &s.parse().unwrap(), &o).is_err();
        assert!(bad(TheoremId::T14, "n=20 k=3 l=3 t=1"));
        assert!(bad(TheoremId::T15, "n=20 k=4 l=3 t=1"));
        assert!(bad(TheoremId::T16, "n=20 ks=3,3 t=1"));
        assert!(bad(TheoremId::P41, "n=20 ks=3,3,3 t=1"));
        assert!(bad(TheoremId::T13, "n=20 ks=2,2 t=1"));
    }
}
