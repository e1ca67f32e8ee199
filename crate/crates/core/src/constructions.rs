//! Extremal families and the counting functions attached to them.
//!
//! Every family can be used as a membership predicate at any `n`, enumerated
//! when the universe fits the budget, or counted exactly from its anchors.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partition::{
    enumerate_partitions, first_singletons, Block, Family, GroundSet, Partition,
};
use crate::stirling::{binomial, stirling, stirling_i, to_count, BigCount};

/// Which family of a pair a two-sided construction refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    F,
    G,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionKind {
    /// `{F : X ⊆ F, F ∩ (M \ X) ≠ ∅}` over k-partitions.
    A {
        k: usize,
        x: Partition,
        m: Partition,
    },
    /// `{F : X ⊆ F} ∪ {(M \ {B}) ∪ {B ∪ rest} : B ∈ X}` over |M|-partitions.
    B { x: Partition, m: Partition },
    /// `{F : T ⊆ F}`.
    C { k: usize, tt: Partition },
    /// `{F : |T ∩ F| ≥ |T| - 1}`.
    D { l: usize, tt: Partition },
    /// Largest non-trivial t-intersecting family for large k.
    Hm1 { k: usize, t: usize },
    /// `{F : |F ∩ [[t+2]]| ≥ t+1}`.
    Hm2 { k: usize, t: usize },
    /// `F = {F : |F ∩ G| = t}` and `G = {G}` for a full (t+1)-partition G.
    P28i { k: usize, g: Partition, side: Side },
    /// `F = {F : M ⊆ F}` and `G = {A ∪ {rest of A} : A ⊆ M, |A| = t}`.
    P28ii {
        k: usize,
        t: usize,
        m: Partition,
        side: Side,
    },
    /// `{F : |F ∩ G| ≥ t}` for any (possibly partial) partition G.
    W { k: usize, t: usize, g: Partition },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionSpec {
    ground: GroundSet,
    kind: ConstructionKind,
    /// Members outside the main predicate (B, HM1, P28ii G-side).
    extras: Vec<Partition>,
}

fn invalid(msg: String) -> Error {
    Error::InvalidParameters(msg)
}

fn complement_block(ground: GroundSet, p: &Partition) -> Option<Block> {
    Block::from_mask(ground.full_mask() & !p.support_mask())
}

/// All subsets of `blocks` of size `size`, in index order.
fn subsets_of_size(blocks: &[Block], size: usize) -> Vec<Vec<Block>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        blocks: &[Block],
        size: usize,
        from: usize,
        cur: &mut Vec<Block>,
        out: &mut Vec<Vec<Block>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in from..blocks.len() {
            cur.push(blocks[i]);
            rec(blocks, size, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(blocks, size, 0, &mut cur, &mut out);
    out
}

impl ConstructionSpec {
    pub fn new(ground: GroundSet, kind: ConstructionKind) -> Result<ConstructionSpec> {
        let n = ground.n();
        let check_ground = |p: &Partition| -> Result<()> {
            if p.n() != n {
                return Err(Error::GroundMismatch {
                    left: n,
                    right: p.n(),
                });
            }
            Ok(())
        };
        let mut extras = Vec::new();
        match &kind {
            ConstructionKind::A { x, m, .. } | ConstructionKind::B { x, m } => {
                check_ground(x)?;
                check_ground(m)?;
                if x.is_empty() {
                    return Err(invalid("X must have at least one block".into()));
                }
                if !x.is_subset_of(m) {
                    return Err(invalid(format!("X = {x} is not contained in M = {m}")));
                }
                if x.len() == m.len() {
                    return Err(invalid("M must have a block outside X".into()));
                }
                if let ConstructionKind::A { k, .. } = &kind {
                    if *k == 0 || *k > n {
                        return Err(invalid(format!("need 1 <= k <= n, got k={k}")));
                    }
                } else {
                    let rest = complement_block(ground, m).ok_or_else(|| {
                        invalid(format!("the blocks of M = {m} must not cover [{n}]"))
                    })?;
                    for b in x.blocks() {
                        let mut blocks: Vec<Block> =
                            m.blocks().iter().copied().filter(|c| c != b).collect();
                        blocks.push(Block::from_mask(b.mask() | rest.mask()).expect("nonempty"));
                        extras.push(Partition::full(ground, blocks)?);
                    }
                }
            }
            ConstructionKind::C { k, tt } | ConstructionKind::D { l: k, tt } => {
                check_ground(tt)?;
                if tt.len() < 2 {
                    return Err(invalid("T must have t+1 >= 2 blocks".into()));
                }
                if *k == 0 || *k > n {
                    return Err(invalid(format!("need 1 <= k <= n, got {k}")));
                }
            }
            ConstructionKind::Hm1 { k, t } => {
                if *t == 0 || *k <= *t || *k >= n {
                    return Err(invalid(format!(
                        "HM1 needs 1 <= t < k < n, got k={k}, t={t}, n={n}"
                    )));
                }
                let kk = first_singletons(ground, *k)?;
                let tail = complement_block(ground, &kk).expect("k < n");
                for i in 1..=*t {
                    let mut blocks: Vec<Block> = kk
                        .blocks()
                        .iter()
                        .copied()
                        .filter(|b| b.min_element() != i)
                        .collect();
                    blocks.push(
                        Block::from_mask(Block::singleton(i).mask() | tail.mask())
                            .expect("nonempty"),
                    );
                    extras.push(Partition::full(ground, blocks)?);
                }
            }
            ConstructionKind::Hm2 { k, t } => {
                if *t == 0 || t + 2 > n || *k > n {
                    return Err(invalid(format!(
                        "HM2 needs t >= 1, t+2 <= n, k <= n; got k={k}, t={t}, n={n}"
                    )));
                }
            }
            ConstructionKind::P28i { k, g, .. } => {
                check_ground(g)?;
                if !g.is_full() || g.len() < 2 {
                    return Err(invalid(format!(
                        "G = {g} must be a full partition with t+1 >= 2 blocks"
                    )));
                }
                if *k < g.len() + 1 || *k > n {
                    return Err(invalid(format!("need t+2 <= k <= n, got k={k}")));
                }
            }
            ConstructionKind::P28ii { k, t, m, .. } => {
                check_ground(m)?;
                if *t == 0 || m.len() < t + 1 || m.len() > *k || *k > n {
                    return Err(invalid(format!(
                        "need t >= 1 and t+1 <= |M| <= k <= n, got |M|={}, k={k}",
                        m.len()
                    )));
                }
                if m.is_full() && m.len() == t + 1 {
                    return Err(invalid("M must not be a full (t+1)-partition".into()));
                }
                for a in subsets_of_size(m.blocks(), *t) {
                    let pa = Partition::partial(ground, a)?;
                    let rest = complement_block(ground, &pa).expect("M has more than t blocks");
                    extras.push(pa.with_block(rest)?);
                }
                extras.sort();
            }
            ConstructionKind::W { k, t, g } => {
                check_ground(g)?;
                if *t == 0 || *k == 0 || *k > n {
                    return Err(invalid(format!(
                        "need t >= 1 and 1 <= k <= n, got k={k}, t={t}"
                    )));
                }
            }
        }
        Ok(ConstructionSpec {
            ground,
            kind,
            extras,
        })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn kind(&self) -> &ConstructionKind {
        &self.kind
    }

    /// Block count of the members.
    pub fn uniformity(&self) -> usize {
        match &self.kind {
            ConstructionKind::A { k, .. }
            | ConstructionKind::C { k, .. }
            | ConstructionKind::Hm1 { k, .. }
            | ConstructionKind::Hm2 { k, .. }
            | ConstructionKind::W { k, .. } => *k,
            ConstructionKind::D { l, .. } => *l,
            ConstructionKind::B { m, .. } => m.len(),
            ConstructionKind::P28i { k, g, side } => match side {
                Side::F => *k,
                Side::G => g.len(),
            },
            ConstructionKind::P28ii { k, t, side, .. } => match side {
                Side::F => *k,
                Side::G => t + 1,
            },
        }
    }

    /// Membership test for a full partition of the right block count.
    pub fn contains(&self, p: &Partition) -> bool {
        if p.n() != self.ground.n() || p.len() != self.uniformity() || !p.is_full() {
            return false;
        }
        match &self.kind {
            ConstructionKind::A { x, m, .. } => x.is_subset_of(p) && p.shared_count(m) > x.len(),
            ConstructionKind::B { x, .. } => x.is_subset_of(p) || self.extras.contains(p),
            ConstructionKind::C { tt, .. } => tt.is_subset_of(p),
            ConstructionKind::D { tt, .. } => p.shared_count(tt) + 1 >= tt.len(),
            ConstructionKind::Hm1 { k, t } => {
                let kk = first_singletons(self.ground, *k).expect("validated");
                let tt = first_singletons(self.ground, *t).expect("validated");
                (tt.is_subset_of(p) && p.shared_count(&kk) > *t) || self.extras.contains(p)
            }
            ConstructionKind::Hm2 { t, .. } => {
                p.shared_count(&first_singletons(self.ground, t + 2).expect("validated")) > *t
            }
            ConstructionKind::P28i { g, side, .. } => match side {
                Side::F => p.shared_count(g) + 1 == g.len(),
                Side::G => p == g,
            },
            ConstructionKind::P28ii { m, side, .. } => match side {
                Side::F => m.is_subset_of(p),
                Side::G => self.extras.binary_search(p).is_ok(),
            },
            ConstructionKind::W { t, g, .. } => p.shared_count(g) >= *t,
        }
    }

    /// Enumerates the family by filtering the universe.
    pub fn enumerate(&self, budget: u64) -> Result<Family> {
        let k = self.uniformity();
        let members = enumerate_partitions(self.ground, k, budget)?.filter(|p| self.contains(p));
        Family::new(self.ground, k, members)
    }

    /// Exact size computed from the anchors by inclusion-exclusion.
    pub fn exact_size(&self) -> BigCount {
        let n = self.ground.n() as i64;
        match &self.kind {
            ConstructionKind::A { k, x, m } => {
                let outside = m.without(x);
                let sizes: Vec<usize> = outside.blocks().iter().map(|b| b.len()).collect();
                let base = n - x.support_len() as i64;
                let t = x.len() as i64;
                let mut total = BigInt::zero();
                for mask in 1u32..(1 << sizes.len()) {
                    let j = mask.count_ones() as i64;
                    let used: usize = (0..sizes.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| sizes[i])
                        .sum();
                    let term = stirling_i(base - used as i64, *k as i64 - t - j);
                    if j % 2 == 1 {
                        total += term;
                    } else {
                        total -= term;
                    }
                }
                to_count(total, "size of A").expect("a count is nonnegative")
            }
            ConstructionKind::B { x, m } => {
                stirling(n - x.support_len() as i64, (m.len() - x.len()) as i64)
                    + BigCount::from(x.len())
            }
            ConstructionKind::C { k, tt } => {
                stirling(n - tt.support_len() as i64, (*k - tt.len()) as i64)
            }
            ConstructionKind::D { l, tt } => {
                at_least_count(&block_sizes(tt), n, *l as i64, tt.len() - 1)
            }
            ConstructionKind::Hm1 { k, t } => {
                hm_bound(n, *k as i64, *t as i64, HmBranch::I).expect("valid")
            }
            ConstructionKind::Hm2 { k, t } => at_least_count(&vec![1; t + 2], n, *k as i64, t + 1),
            ConstructionKind::P28i { k, g, side } => match side {
                Side::F => {
                    let s = block_sizes(g);
                    let t = g.len() - 1;
                    at_least_count(&s, n, *k as i64, t) - at_least_count(&s, n, *k as i64, t + 1)
                }
                Side::G => BigCount::from(1u32),
            },
            ConstructionKind::P28ii { k, t, m, side } => match side {
                Side::F => stirling(n - m.support_len() as i64, (*k - m.len()) as i64),
                Side::G => binomial(m.len() as i64, *t as i64),
            },
            ConstructionKind::W { k, t, g } => at_least_count(&block_sizes(g), n, *k as i64, *t),
        }
    }

    /// The default anchors `A(k, l, t) = A(k, [[t]], [[l]])`.
    pub fn a_default(ground: GroundSet, k: usize, l: usize, t: usize) -> Result<ConstructionSpec> {
        let kind = ConstructionKind::A {
            k,
            x: first_singletons(ground, t)?,
            m: first_singletons(ground, l)?,
        };
        ConstructionSpec::new(ground, kind)
    }

    /// `B(l, t) = B(l, [[t]], [[l]])`.
    pub fn b_default(ground: GroundSet, l: usize, t: usize) -> Result<ConstructionSpec> {
        let kind = ConstructionKind::B {
            x: first_singletons(ground, t)?,
            m: first_singletons(ground, l)?,
        };
        ConstructionSpec::new(ground, kind)
    }

    /// `C(k, t) = C(k, [[t+1]])`.
    pub fn c_default(ground: GroundSet, k: usize, t: usize) -> Result<ConstructionSpec> {
        ConstructionSpec::new(
            ground,
            ConstructionKind::C {
                k,
                tt: first_singletons(ground, t + 1)?,
            },
        )
    }

    /// `D(l, t) = D(l, [[t+1]])`.
    pub fn d_default(ground: GroundSet, l: usize, t: usize) -> Result<ConstructionSpec> {
        ConstructionSpec::new(
            ground,
            ConstructionKind::D {
                l,
                tt: first_singletons(ground, t + 1)?,
            },
        )
    }

    pub fn hm1(ground: GroundSet, k: usize, t: usize) -> Result<ConstructionSpec> {
        ConstructionSpec::new(ground, ConstructionKind::Hm1 { k, t })
    }

    pub fn hm2(ground: GroundSet, k: usize, t: usize) -> Result<ConstructionSpec> {
        ConstructionSpec::new(ground, ConstructionKind::Hm2 { k, t })
    }

    /// `G = [[t]] ∪ {rest}` for the first kind of (t+1)-uniform pair.
    pub fn p28i_default(
        ground: GroundSet,
        k: usize,
        t: usize,
        side: Side,
    ) -> Result<ConstructionSpec> {
        let x = first_singletons(ground, t)?;
        let rest = complement_block(ground, &x).ok_or_else(|| invalid("need t < n".into()))?;
        ConstructionSpec::new(
            ground,
            ConstructionKind::P28i {
                k,
                g: x.with_block(rest)?,
                side,
            },
        )
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.ground.n();
        match &self.kind {
            ConstructionKind::A { k, x, m } => write!(f, "A(k={k}, X={x}, M={m}; n={n})"),
            ConstructionKind::B { x, m } => write!(f, "B(l={}, X={x}, M={m}; n={n})", m.len()),
            ConstructionKind::C { k, tt } => write!(f, "C(k={k}, T={tt}; n={n})"),
            ConstructionKind::D { l, tt } => write!(f, "D(l={l}, T={tt}; n={n})"),
            ConstructionKind::Hm1 { k, t } => write!(f, "HM1(k={k}, t={t}; n={n})"),
            ConstructionKind::Hm2 { k, t } => write!(f, "HM2(k={k}, t={t}; n={n})"),
            ConstructionKind::P28i { k, g, side } => {
                write!(f, "P28i[{side:?}](k={k}, G={g}; n={n})")
            }
            ConstructionKind::P28ii { k, t, m, side } => {
                write!(f, "P28ii[{side:?}](k={k}, t={t}, M={m}; n={n})")
            }
            ConstructionKind::W { k, t, g } => write!(f, "W(k={k}, t={t}, G={g}; n={n})"),
        }
    }
}

/// Enumerated family or a membership predicate for `n` beyond enumeration.
#[derive(Clone, Debug)]
pub enum Built {
    Enumerated(Family),
    Predicate(ConstructionSpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildMode {
    Enumerate,
    Predicate,
}

pub fn build_family(spec: &ConstructionSpec, mode: BuildMode, budget: u64) -> Result<Built> {
    match mode {
        BuildMode::Enumerate => Ok(Built::Enumerated(spec.enumerate(budget)?)),
        BuildMode::Predicate => Ok(Built::Predicate(spec.clone())),
    }
}

fn block_sizes(p: &Partition) -> Vec<usize> {
    p.blocks().iter().map(|b| b.len()).collect()
}

/// Number of k-partitions of `[n]` sharing at least `t` blocks with a fixed
/// partial partition whose blocks have the given sizes.
///
/// Summing the exact-intersection counts over all `Y ⊆ G` with `|Y| ≥ t` and
/// swapping sums gives `Σ_{Z ⊆ G} c(|Z|) S(n - |∪Z|, k - |Z|)` with
/// `c(z) = Σ_{y=t}^{z} (-1)^(z-y) C(z, y)`.
pub fn at_least_count(sizes: &[usize], n: i64, k: i64, t: usize) -> BigCount {
    let s = sizes.len();
    let coeff: Vec<BigInt> = (0..=s)
        .map(|z| {
            (t..=z).fold(BigInt::zero(), |acc, y| {
                let c = BigInt::from(binomial(z as i64, y as i64));
                if (z - y) % 2 == 0 {
                    acc + c
                } else {
                    acc - c
                }
            })
        })
        .collect();
    // Group subsets by (|Z|, |∪Z|) with a knapsack over the blocks.
    let total: usize = sizes.iter().sum();
    let mut ways = vec![vec![BigInt::zero(); total + 1]; s + 1];
    ways[0][0] = BigInt::from(1);
    for &b in sizes {
        for z in (0..s).rev() {
            for sigma in (0..=total - b).rev() {
                if !ways[z][sigma].is_zero() {
                    let w = ways[z][sigma].clone();
                    ways[z + 1][sigma + b] += w;
                }
            }
        }
    }
    let mut acc = BigInt::zero();
    for z in t..=s {
        if coeff[z].is_zero() {
            continue;
        }
        for (sigma, w) in ways[z].iter().enumerate() {
            if !w.is_zero() {
                acc += &coeff[z] * w * stirling_i(n - sigma as i64, k - z as i64);
            }
        }
    }
    to_count(acc, "at-least-t count").expect("a count is nonnegative")
}

/// A bound value together with the formula and parameters that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundValue {
    pub formula: &'static str,
    pub params: Vec<(&'static str, i64)>,
    #[serde(serialize_with = "ser_decimal")]
    pub value: BigCount,
}

pub fn ser_decimal<S: Serializer>(v: &BigCount, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn pow_u(base: i64, e: i64) -> BigInt {
    num_traits::pow(BigInt::from(base), e.max(0) as usize)
}

fn bin_i(n: i64, k: i64) -> BigInt {
    BigInt::from(binomial(n, k))
}

/// Alternating sum `Σ_{j=1}^{l-t} (-1)^(j-1) C(l-t, j) S(n-t-j, k-t-j)`.
fn a_factor(n: i64, k: i64, l: i64, t: i64) -> BigInt {
    (1..=l - t).fold(BigInt::zero(), |acc, j| {
        let term = bin_i(l - t, j) * stirling_i(n - t - j, k - t - j);
        if j % 2 == 1 {
            acc + term
        } else {
            acc - term
        }
    })
}

pub fn size_r1(n: i64, k: i64, l: i64, t: i64) -> Result<BigCount> {
    let v = a_factor(n, k, l, t) * (stirling_i(n - t, l - t) + t);
    to_count(v, "r1")
}

pub fn size_r2(n: i64, k: i64, l: i64, t: i64) -> Result<BigCount> {
    let v = stirling_i(n - t - 1, k - t - 1)
        * ((t + 1) * stirling_i(n - t, l - t) - t * stirling_i(n - t - 1, l - t - 1));
    to_count(v, "r2")
}

pub fn size_r(n: i64, k: i64, l: i64, t: i64) -> Result<BigCount> {
    Ok(size_r1(n, k, l, t)?.max(size_r2(n, k, l, t)?))
}

/// `h(m, k, t, n)`: k-partitions sharing at least t blocks with `[[m]]`,
/// summed over the exact number u of shared singletons.
pub fn size_h(m: i64, k: i64, t: i64, n: i64) -> BigCount {
    let mut acc = BigInt::zero();
    for u in t.max(0)..=m {
        let mut inner = BigInt::zero();
        for w in 0..=m - u {
            let term = bin_i(m - u, w) * stirling_i(n - u - w, k - u - w);
            if w % 2 == 0 {
                inner += term;
            } else {
                inner -= term;
            }
        }
        acc += bin_i(m, u) * inner;
    }
    to_count(acc, "h").expect("a count is nonnegative")
}

/// `φ(m, a; k_1..k_r, n) = h(m, k_a, t, n) Π_{i≠a} S(n-m, k_i-m)`, `a` 1-based.
pub fn size_phi(m: i64, a: usize, ks: &[i64], t: i64, n: i64) -> Result<BigCount> {
    if ks.len() < 3 || a == 0 || a > ks.len() {
        return Err(invalid(format!(
            "need r >= 3 and 1 <= a <= r, got r={}, a={a}",
            ks.len()
        )));
    }
    let mut v = size_h(m, ks[a - 1], t, n);
    for (i, &k) in ks.iter().enumerate() {
        if i + 1 != a {
            v *= stirling(n - m, k - m);
        }
    }
    Ok(v)
}

/// `f(m, k, l, t, n)`.
pub fn bound_f(m: i64, k: i64, l: i64, t: i64, n: i64) -> Result<BigCount> {
    if m < t || m > k {
        return Err(invalid(format!(
            "f needs t <= m <= k, got m={m}, t={t}, k={k}"
        )));
    }
    let v = if m < k {
        pow_u(l - t + 1, m - t) * bin_i(m, t) * stirling_i(n - m, k - m)
    } else {
        pow_u(l - t + 1, k - t) * bin_i(k, t)
    };
    to_count(v, "f")
}

/// `g(m, k, l, t, n) = max(f(m, ...), f(k, ...))`.
pub fn bound_g(m: i64, k: i64, l: i64, t: i64, n: i64) -> Result<BigCount> {
    Ok(bound_f(m, k, l, t, n)?.max(bound_f(k, k, l, t, n)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HmBranch {
    I,
    Ii,
}

/// Size bounds of the two largest non-trivial t-intersecting families.
pub fn hm_bound(n: i64, k: i64, t: i64, branch: HmBranch) -> Result<BigCount> {
    match branch {
        HmBranch::I => to_count(a_factor(n, k, k, t) + t, "hm bound (i)"),
        HmBranch::Ii => {
            let v = (t + 2) * stirling_i(n - t - 1, k - t - 1)
                - (t + 1) * stirling_i(n - t - 2, k - t - 2);
            to_count(v, "hm bound (ii)")
        }
    }
}

/// Size of `|A(k, l, t)|`, the first factor of `r1`.
pub fn size_a(n: i64, k: i64, l: i64, t: i64) -> Result<BigCount> {
    to_count(a_factor(n, k, l, t), "|A|")
}

/// `|B(l, t)| = S(n-t, l-t) + t`.
pub fn size_b(n: i64, l: i64, t: i64) -> BigCount {
    stirling(n - t, l - t) + BigCount::from(t as u64)
}

/// `|C(k, t)| = S(n-t-1, k-t-1)`.
pub fn size_c(n: i64, k: i64, t: i64) -> BigCount {
    stirling(n - t - 1, k - t - 1)
}

/// `|D(l, t)| = (t+1) S(n-t, l-t) - t S(n-t-1, l-t-1)`.
pub fn size_d(n: i64, l: i64, t: i64) -> BigCount {
    let v = (t + 1) * stirling_i(n - t, l - t) - t * stirling_i(n - t - 1, l - t - 1);
    if v.is_negative() {
        BigCount::zero()
    } else {
        to_count(v, "|D|").expect("nonnegative")
    }
}

/// The rows printed by `sizes`: r1, r2, r for both orientations, h and φ.
pub fn sizes_table(n: i64, k: i64, l: i64, t: i64) -> Result<Vec<BoundValue>> {
    let p = |names: &[&'static str], vals: &[i64]| {
        names
            .iter()
            .copied()
            .zip(vals.iter().copied())
            .collect::<Vec<_>>()
    };
    let mut rows = Vec::new();
    for (kk, ll) in [(k, l), (l, k)] {
        let params = p(&["n", "k", "l", "t"], &[n, kk, ll, t]);
        rows.push(BoundValue {
            formula: "r1",
            params: params.clone(),
            value: size_r1(n, kk, ll, t)?,
        });
        rows.push(BoundValue {
            formula: "r2",
            params: params.clone(),
            value: size_r2(n, kk, ll, t)?,
        });
        rows.push(BoundValue {
            formula: "r",
            params,
            value: size_r(n, kk, ll, t)?,
        });
        if k == l {
            break;
        }
    }
    for kk in if k == l { vec![k] } else { vec![k, l] } {
        rows.push(BoundValue {
            formula: "h",
            params: p(&["m", "k", "t", "n"], &[t + 1, kk, t, n]),
            value: size_h(t + 1, kk, t, n),
        });
    }
    let ks = [k, l, l];
    rows.push(BoundValue {
        formula: "phi",
        params: p(
            &["m", "a", "k1", "k2", "k3", "t", "n"],
            &[t + 1, 3, k, l, l, t, n],
        ),
        value: size_phi(t + 1, 3, &ks, t, n)?,
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_partition;
    use crate::partition::{common_blocks, singletons_of};

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    const BUDGET: u64 = 1 << 22;

    #[test]
    fn spec_examples() {
        let ground = g(6);
        let a = ConstructionSpec::a_default(ground, 3, 3, 1)
            .unwrap()
            .enumerate(BUDGET)
            .unwrap();
        assert_eq!(a.len(), 2);
        let b = ConstructionSpec::b_default(ground, 3, 1)
            .unwrap()
            .enumerate(BUDGET)
            .unwrap();
        assert_eq!(b.len(), 16);
        let d = ConstructionSpec::d_default(ground, 3, 1)
            .unwrap()
            .enumerate(BUDGET)
            .unwrap();
        assert_eq!(d.len(), 29);
        assert_eq!(size_r1(6, 3, 3, 1).unwrap(), BigCount::from(32u32));
        assert_eq!(size_r2(6, 3, 3, 1).unwrap(), BigCount::from(29u32));
        assert_eq!(size_r1(20, 3, 3, 1).unwrap(), BigCount::from(524288u32));
        assert_eq!(size_r2(20, 3, 3, 1).unwrap(), BigCount::from(524285u32));
        assert_eq!(size_h(2, 3, 1, 6), BigCount::from(29u32));
        assert_eq!(bound_f(3, 4, 3, 1, 13).unwrap(), BigCount::from(27u32));
    }

    #[test]
    fn r_for_three_three_one() {
        for n in 4..40 {
            let s = stirling(n - 1, 2);
            assert_eq!(size_r1(n, 3, 3, 1).unwrap(), (s.clone() + 1u32) * 2u32);
            assert_eq!(size_r2(n, 3, 3, 1).unwrap(), s * 2u32 - 1u32);
        }
    }

    #[test]
    fn h_special_cases() {
        for n in 3..20 {
            for k in 1..=n.min(8) {
                for t in 1..k.min(4) {
                    assert_eq!(size_h(t, k, t, n), stirling(n - t, k - t));
                    let closed = size_d(n, k, t);
                    assert_eq!(size_h(t + 1, k, t, n), closed);
                    assert_eq!(
                        size_h(t + 2, k, t + 1, n),
                        hm_bound(n, k, t, HmBranch::Ii).unwrap()
                    );
                    let ones = vec![1usize; (t + 1) as usize];
                    assert_eq!(at_least_count(&ones, n, k, t as usize), closed);
                }
            }
        }
    }

    #[test]
    fn h_general_m_matches_enumeration() {
        let ground = g(8);
        for (m, k, t) in [(3, 4, 2), (4, 4, 2), (3, 3, 1), (5, 4, 2), (4, 5, 3)] {
            let w = ConstructionSpec::new(
                ground,
                ConstructionKind::W {
                    k,
                    t,
                    g: first_singletons(ground, m).unwrap(),
                },
            )
            .unwrap();
            let fam = w.enumerate(BUDGET).unwrap();
            assert_eq!(
                BigCount::from(fam.len()),
                size_h(m as i64, k as i64, t as i64, 8),
                "m={m} k={k} t={t}"
            );
        }
    }

    #[test]
    fn phi_two_paths() {
        let ks = [4, 3, 3];
        let direct = size_h(2, 3, 1, 13) * stirling(11, 2) * stirling(11, 1);
        assert_eq!(size_phi(2, 3, &ks, 1, 13).unwrap(), direct);
        let v = size_phi(2, 3, &ks, 1, 7).unwrap();
        assert_eq!(v, BigCount::from(915u32));
        assert!(size_phi(2, 1, &[3, 3], 1, 7).is_err());
    }

    #[test]
    fn g_is_max_of_f() {
        assert!(bound_f(0, 4, 3, 1, 10).is_err());
        let a = bound_f(2, 4, 3, 1, 10).unwrap();
        let b = bound_f(4, 4, 3, 1, 10).unwrap();
        assert_eq!(bound_g(2, 4, 3, 1, 10).unwrap(), a.clone().max(b));
        assert_eq!(bound_f(1, 4, 3, 1, 10).unwrap(), stirling(9, 3));
        assert_eq!(bound_f(4, 4, 3, 1, 10).unwrap(), BigCount::from(27u32 * 4));
    }

    #[test]
    fn exact_sizes_match_enumeration_for_general_anchors() {
        let ground = g(7);
        let x = parse_partition(ground, "{1|2,3}").unwrap();
        let m = parse_partition(ground, "{1|2,3|4|5,6}").unwrap();
        let specs = vec![
            ConstructionSpec::new(
                ground,
                ConstructionKind::A {
                    k: 4,
                    x: x.clone(),
                    m: m.clone(),
                },
            )
            .unwrap(),
            ConstructionSpec::new(
                ground,
                ConstructionKind::B {
                    x: x.clone(),
                    m: m.clone(),
                },
            )
            .unwrap(),
            ConstructionSpec::new(
                ground,
                ConstructionKind::C {
                    k: 4,
                    tt: m.clone(),
                },
            )
            .unwrap(),
            ConstructionSpec::new(
                ground,
                ConstructionKind::D {
                    l: 4,
                    tt: parse_partition(ground, "{1|2,3|4}").unwrap(),
                },
            )
            .unwrap(),
            ConstructionSpec::hm1(ground, 4, 1).unwrap(),
            ConstructionSpec::hm2(ground, 4, 1).unwrap(),
            ConstructionSpec::p28i_default(ground, 3, 1, Side::F).unwrap(),
            ConstructionSpec::new(
                ground,
                ConstructionKind::P28i {
                    k: 4,
                    g: parse_partition(ground, "{1,2|3,4,5|6,7}").unwrap(),
                    side: Side::F,
                },
            )
            .unwrap(),
            ConstructionSpec::new(
                ground,
                ConstructionKind::P28ii {
                    k: 4,
                    t: 1,
                    m: x.clone(),
                    side: Side::F,
                },
            )
            .unwrap(),
            ConstructionSpec::new(
                ground,
                ConstructionKind::P28ii {
                    k: 4,
                    t: 1,
                    m: m.clone(),
                    side: Side::G,
                },
            )
            .unwrap(),
            ConstructionSpec::new(
                ground,
                ConstructionKind::W {
                    k: 3,
                    t: 1,
                    g: parse_partition(ground, "{1,2|3,4|5,6,7}").unwrap(),
                },
            )
            .unwrap(),
        ];
        for s in specs {
            let fam = s.enumerate(BUDGET).unwrap();
            assert_eq!(BigCount::from(fam.len()), s.exact_size(), "{s}");
        }
    }

    #[test]
    fn anchor_validation() {
        let ground = g(6);
        let x = parse_partition(ground, "{1}").unwrap();
        let full = parse_partition(ground, "{1|2|3,4,5,6}").unwrap();
        assert!(ConstructionSpec::new(
            ground,
            ConstructionKind::B {
                x: x.clone(),
                m: full.clone()
            }
        )
        .is_err());
        let not_sub = parse_partition(ground, "{2}").unwrap();
        let m = parse_partition(ground, "{1|3}").unwrap();
        assert!(ConstructionSpec::new(
            ground,
            ConstructionKind::A {
                k: 3,
                x: not_sub,
                m
            }
        )
        .is_err());
        assert!(ConstructionSpec::new(
            ground,
            ConstructionKind::C {
                k: 3,
                tt: x.clone()
            }
        )
        .is_err());
        let two = parse_partition(ground, "{1|2,3,4,5,6}").unwrap();
        assert!(ConstructionSpec::new(
            ground,
            ConstructionKind::P28ii {
                k: 3,
                t: 1,
                m: two,
                side: Side::F
            }
        )
        .is_err());
        assert!(ConstructionSpec::hm1(ground, 6, 1).is_err());
    }

    #[test]
    fn default_pairs_are_cross_intersecting_and_nontrivial() {
        let ground = g(7);
        for (k, l, t) in [(3, 3, 1), (4, 3, 1), (4, 4, 2)] {
            let a = ConstructionSpec::a_default(ground, k, l, t)
                .unwrap()
                .enumerate(BUDGET)
                .unwrap();
            let b = ConstructionSpec::b_default(ground, l, t)
                .unwrap()
                .enumerate(BUDGET)
                .unwrap();
            let c = ConstructionSpec::c_default(ground, k, t)
                .unwrap()
                .enumerate(BUDGET)
                .unwrap();
            let d = ConstructionSpec::d_default(ground, l, t)
                .unwrap()
                .enumerate(BUDGET)
                .unwrap();
            for (x, y) in [(&a, &b), (&c, &d)] {
                assert!(x.iter().all(|p| y.iter().all(|q| p.shared_count(q) >= t)));
                assert!(common_blocks(&[x, y]).unwrap().len() < t);
            }
            let xs = singletons_of(ground, 1..=t).unwrap();
            assert!(common_blocks(&[&b]).unwrap().len() < t || !xs.is_empty());
        }
    }

    #[test]
    fn predicate_mode_works_beyond_enumeration() {
        let ground = g(20);
        let spec = ConstructionSpec::a_default(ground, 3, 3, 1).unwrap();
        let Built::Predicate(p) = build_family(&spec, BuildMode::Predicate, 10).unwrap() else {
            panic!()
        };
        let mut blocks = vec![Block::singleton(1), Block::singleton(2)];
        blocks.push(Block::from_elements(3..=20).unwrap());
        assert!(p.contains(&Partition::full(ground, blocks).unwrap()));
        assert!(build_family(&spec, BuildMode::Enumerate, 10).is_err());
        assert_eq!(spec.exact_size(), size_a(20, 3, 3, 1).unwrap());
    }

    #[test]
    fn sizes_table_rows() {
        let rows = sizes_table(20, 3, 3, 1).unwrap();
        assert_eq!(rows[0].formula, "r1");
        assert_eq!(rows[0].value, BigCount::from(524288u32));
        assert_eq!(rows[1].value, BigCount::from(524285u32));
    }
}
