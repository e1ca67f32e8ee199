//! Ground sets, blocks, partitions and families of partitions.
//!
//! A [`Block`] is a nonempty subset of `[n]` stored as a 64-bit mask, so every
//! enumerated object lives over a ground set of at most 64 elements. Elements
//! are 1-based in every public API; bit `i - 1` of the mask stands for element
//! `i`.
//!
//! Two partitions "intersect" in the blocks they have in common, not in their
//! common refinement.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stirling::stirling;

/// Largest ground set that can be enumerated (one machine word per block).
pub const MAX_GROUND: usize = 64;

/// The ground set `[n] = {1, ..., n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::InvalidGround(n));
        }
        Ok(GroundSet { n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Mask with the low `n` bits set.
    #[inline]
    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }
}

/// A nonempty subset of the ground set.
///
/// Blocks order by their least element first, which is the order blocks are
/// listed in inside a [`Partition`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block(u64);

impl Block {
    #[inline]
    pub fn from_mask(mask: u64) -> Option<Block> {
        (mask != 0).then_some(Block(mask))
    }

    /// Builds a block from 1-based elements.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Result<Block> {
        let mut mask = 0u64;
        for e in elements {
            if e == 0 || e > MAX_GROUND {
                return Err(Error::InvalidPartition(format!("element {e} out of range")));
            }
            mask |= 1u64 << (e - 1);
        }
        Block::from_mask(mask).ok_or_else(|| Error::InvalidPartition("empty block".into()))
    }

    #[inline]
    pub fn singleton(element: usize) -> Block {
        debug_assert!((1..=MAX_GROUND).contains(&element));
        Block(1u64 << (element - 1))
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    /// Always false; blocks are nonempty by construction.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn min_element(&self) -> usize {
        self.0.trailing_zeros() as usize + 1
    }

    #[inline]
    pub fn contains(&self, element: usize) -> bool {
        (1..=MAX_GROUND).contains(&element) && self.0 >> (element - 1) & 1 == 1
    }

    #[inline]
    pub fn is_disjoint(&self, other: &Block) -> bool {
        self.0 & other.0 == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i + 1)
            }
        })
    }
}

impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .trailing_zeros()
            .cmp(&other.0.trailing_zeros())
            .then(self.0.cmp(&other.0))
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A set of pairwise disjoint blocks over a ground set.
///
/// A partition is *full* when its blocks cover `[n]`; otherwise it is a
/// *partial* partition (t-covers are partial in general). Blocks are kept
/// sorted by least element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: u8,
    blocks: Vec<Block>,
}

impl Partition {
    pub fn empty(ground: GroundSet) -> Partition {
        Partition {
            n: ground.n as u8,
            blocks: Vec::new(),
        }
    }

    /// A partial partition: pairwise disjoint blocks inside `[n]`.
    pub fn partial<I: IntoIterator<Item = Block>>(
        ground: GroundSet,
        blocks: I,
    ) -> Result<Partition> {
        let full = ground.full_mask();
        let mut seen = 0u64;
        let mut v: Vec<Block> = Vec::new();
        for b in blocks {
            if b.mask() & !full != 0 {
                return Err(Error::InvalidPartition(format!(
                    "block {b:?} is not inside [{}]",
                    ground.n
                )));
            }
            if b.mask() & seen != 0 {
                return Err(Error::InvalidPartition(format!(
                    "block {b:?} overlaps another block"
                )));
            }
            seen |= b.mask();
            v.push(b);
        }
        v.sort_unstable();
        Ok(Partition {
            n: ground.n as u8,
            blocks: v,
        })
    }

    /// A full partition of `[n]`.
    pub fn full<I: IntoIterator<Item = Block>>(ground: GroundSet, blocks: I) -> Result<Partition> {
        let p = Partition::partial(ground, blocks)?;
        if p.support_mask() != ground.full_mask() {
            return Err(Error::InvalidPartition(format!(
                "{p} does not cover [{}]",
                ground.n
            )));
        }
        Ok(p)
    }

    /// Decodes a restricted growth string (0-based labels, one per element).
    pub fn from_rgs(ground: GroundSet, labels: &[u8]) -> Result<Partition> {
        if labels.len() != ground.n {
            return Err(Error::InvalidPartition("rgs length differs from n".into()));
        }
        let mut masks: Vec<u64> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            let l = l as usize;
            if l > masks.len() {
                return Err(Error::InvalidPartition(
                    "not a restricted growth string".into(),
                ));
            }
            if l == masks.len() {
                masks.push(0);
            }
            masks[l] |= 1u64 << i;
        }
        Ok(Partition {
            n: ground.n as u8,
            blocks: masks.into_iter().map(Block).collect(),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn ground(&self) -> GroundSet {
        GroundSet { n: self.n as usize }
    }

    /// Number of blocks.
    #[inline]
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    #[inline]
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Union of all blocks as a mask.
    pub fn support_mask(&self) -> u64 {
        self.blocks.iter().fold(0, |m, b| m | b.mask())
    }

    /// Number of elements covered.
    pub fn support_len(&self) -> usize {
        self.support_mask().count_ones() as usize
    }

    pub fn is_full(&self) -> bool {
        self.support_mask() == self.ground().full_mask()
    }

    #[inline]
    pub fn contains_block(&self, b: &Block) -> bool {
        self.blocks.binary_search(b).is_ok()
    }

    /// Number of blocks common to `self` and `other`.
    ///
    /// Both block lists are sorted by least element and blocks inside one
    /// partition have distinct least elements, so a merge suffices.
    #[inline]
    pub fn shared_count(&self, other: &Partition) -> usize {
        let (a, b) = (&self.blocks, &other.blocks);
        let (mut i, mut j, mut c) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            let (x, y) = (a[i].mask(), b[j].mask());
            let (tx, ty) = (x.trailing_zeros(), y.trailing_zeros());
            match tx.cmp(&ty) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    c += (x == y) as usize;
                    i += 1;
                    j += 1;
                }
            }
        }
        c
    }

    /// The blocks present in both partitions, as a partial partition.
    pub fn shared_blocks(&self, other: &Partition) -> Result<Partition> {
        if self.n != other.n {
            return Err(Error::GroundMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        let blocks = self
            .blocks
            .iter()
            .copied()
            .filter(|b| other.contains_block(b))
            .collect();
        Ok(Partition { n: self.n, blocks })
    }

    /// True if every block of `self` is a block of `other`.
    pub fn is_subset_of(&self, other: &Partition) -> bool {
        self.n == other.n && self.shared_count(other) == self.len()
    }

    /// Adds a block, which must be disjoint from the existing ones.
    pub fn with_block(&self, b: Block) -> Result<Partition> {
        Partition::partial(
            self.ground(),
            self.blocks.iter().copied().chain(std::iter::once(b)),
        )
    }

    /// Union of two partial partitions; fails unless the result is a partition.
    pub fn union(&self, other: &Partition) -> Result<Partition> {
        if self.n != other.n {
            return Err(Error::GroundMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        let mut blocks = self.blocks.clone();
        for b in &other.blocks {
            if !self.contains_block(b) {
                blocks.push(*b);
            }
        }
        Partition::partial(self.ground(), blocks)
    }

    /// Removes the listed blocks (blocks not present are ignored).
    pub fn without(&self, remove: &Partition) -> Partition {
        Partition {
            n: self.n,
            blocks: self
                .blocks
                .iter()
                .copied()
                .filter(|b| !remove.contains_block(b))
                .collect(),
        }
    }

    /// Per-element block labels; uncovered elements get `u8::MAX`.
    pub fn labels(&self) -> [u8; MAX_GROUND] {
        let mut out = [u8::MAX; MAX_GROUND];
        for (i, b) in self.blocks.iter().enumerate() {
            for e in b.elements() {
                out[e - 1] = i as u8;
            }
        }
        out
    }

    /// Restricted growth string of the partition (full partitions only make
    /// this a true RGS; partial ones carry `u8::MAX` for uncovered elements).
    pub fn rgs(&self) -> Vec<u8> {
        self.labels()[..self.n()].to_vec()
    }

    /// Applies a relabeling `perm` of the ground set (`perm[e-1]` is the new
    /// name of element `e`, 1-based).
    pub fn relabel(&self, perm: &[usize]) -> Partition {
        let blocks = self.blocks.iter().map(|b| {
            let mut m = 0u64;
            for e in b.elements() {
                m |= 1u64 << (perm[e - 1] - 1);
            }
            Block(m)
        });
        let mut v: Vec<Block> = blocks.collect();
        v.sort_unstable();
        Partition {
            n: self.n,
            blocks: v,
        }
    }
}

impl Ord for Partition {
    /// Ground size first, then lexicographic on restricted growth strings.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            let (a, b) = (self.labels(), other.labels());
            a[..self.n()].cmp(&b[..other.n()])
        })
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `{1,4|2|3,5}`: blocks sorted by least element, separated by `|`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            for (j, e) in b.elements().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, "}}")
    }
}

/// `[B]`: the partial partition of `B` into singletons.
pub fn singletons_of<I: IntoIterator<Item = usize>>(
    ground: GroundSet,
    elements: I,
) -> Result<Partition> {
    let mut blocks = Vec::new();
    for e in elements {
        if e == 0 || e > ground.n() {
            return Err(Error::InvalidPartition(format!(
                "element {e} outside [{}]",
                ground.n()
            )));
        }
        blocks.push(Block::singleton(e));
    }
    Partition::partial(ground, blocks)
}

/// `[[m]]`: singletons `{1}, ..., {m}`.
pub fn first_singletons(ground: GroundSet, m: usize) -> Result<Partition> {
    singletons_of(ground, 1..=m)
}

/// A finite set of full `k`-partitions over one ground set.
///
/// Members are kept sorted in restricted-growth order, with a hash index for
/// membership tests.
#[derive(Clone)]
pub struct Family {
    ground: GroundSet,
    k: usize,
    members: Vec<Partition>,
    index: HashMap<Partition, usize>,
}

impl Family {
    /// Builds a family; duplicates are merged.
    pub fn new<I: IntoIterator<Item = Partition>>(
        ground: GroundSet,
        k: usize,
        members: I,
    ) -> Result<Family> {
        let mut v: Vec<Partition> = Vec::new();
        for p in members {
            if p.n() != ground.n() {
                return Err(Error::GroundMismatch {
                    left: ground.n(),
                    right: p.n(),
                });
            }
            if p.len() != k || !p.is_full() {
                return Err(Error::InvalidPartition(format!(
                    "{p} is not a full {k}-partition of [{}]",
                    ground.n()
                )));
            }
            v.push(p);
        }
        Ok(Family::from_sorted_unchecked(ground, k, v))
    }

    /// Members must already be full `k`-partitions over `ground`.
    pub(crate) fn from_sorted_unchecked(
        ground: GroundSet,
        k: usize,
        mut members: Vec<Partition>,
    ) -> Family {
        members.sort_unstable();
        members.dedup();
        let index = members
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Family {
            ground,
            k,
            members,
            index,
        }
    }

    pub fn empty(ground: GroundSet, k: usize) -> Family {
        Family {
            ground,
            k,
            members: Vec::new(),
            index: HashMap::new(),
        }
    }

    #[inline]
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Partition> {
        self.members.iter()
    }

    #[inline]
    pub fn contains(&self, p: &Partition) -> bool {
        self.index.contains_key(p)
    }

    pub fn position(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn is_subset_of(&self, other: &Family) -> bool {
        self.ground == other.ground
            && self.k == other.k
            && self.members.iter().all(|p| other.contains(p))
    }

    /// Members satisfying `keep`.
    pub fn filter<F: Fn(&Partition) -> bool>(&self, keep: F) -> Family {
        let v = self.members.iter().filter(|p| keep(p)).cloned().collect();
        Family::from_sorted_unchecked(self.ground, self.k, v)
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        if self.ground != other.ground || self.k != other.k {
            return Err(Error::InvalidParameters(
                "union of families with different ground or k".into(),
            ));
        }
        let v = self
            .members
            .iter()
            .chain(other.members.iter())
            .cloned()
            .collect();
        Ok(Family::from_sorted_unchecked(self.ground, self.k, v))
    }

    /// Applies a relabeling of the ground set to every member.
    pub fn relabel(&self, perm: &[usize]) -> Family {
        let v = self.members.iter().map(|p| p.relabel(perm)).collect();
        Family::from_sorted_unchecked(self.ground, self.k, v)
    }
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.k == other.k && self.members == other.members
    }
}

impl Eq for Family {}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Family")
            .field("n", &self.ground.n())
            .field("k", &self.k)
            .field("members", &self.members)
            .finish()
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a Partition;
    type IntoIter = std::slice::Iter<'a, Partition>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Blocks belonging to every member of every family.
///
/// A tuple of families is trivial (for threshold `t`) exactly when this has at
/// least `t` blocks.
pub fn common_blocks(families: &[&Family]) -> Result<Partition> {
    let first = families.first().ok_or(Error::EmptyFamily)?;
    let ground = first.ground();
    let mut acc: Option<Partition> = None;
    for f in families {
        if f.ground() != ground {
            return Err(Error::GroundMismatch {
                left: ground.n(),
                right: f.ground().n(),
            });
        }
        if f.is_empty() {
            return Err(Error::EmptyFamily);
        }
        for p in f.iter() {
            acc = Some(match acc {
                None => p.clone(),
                Some(a) => a.shared_blocks(p)?,
            });
        }
    }
    Ok(acc.unwrap_or_else(|| Partition::empty(ground)))
}

/// Streams all full `k`-partitions of `[n]` in lexicographic order of their
/// restricted growth strings.
#[derive(Clone, Debug)]
pub struct PartitionStream {
    ground: GroundSet,
    k: usize,
    rgs: Vec<u8>,
    done: bool,
}

impl PartitionStream {
    fn new(ground: GroundSet, k: usize) -> Self {
        let n = ground.n();
        let mut rgs = vec![0u8; n];
        // Lex-least RGS with k labels: zeros, then 1, 2, ..., k-1 at the tail.
        for (j, slot) in rgs[n - k + 1..].iter_mut().enumerate() {
            *slot = (j + 1) as u8;
        }
        PartitionStream {
            ground,
            k,
            rgs,
            done: false,
        }
    }

    fn advance(&mut self) {
        let n = self.rgs.len();
        let top = (self.k - 1) as u8;
        let mut prefix_max = vec![0u8; n];
        for i in 1..n {
            prefix_max[i] = prefix_max[i - 1].max(self.rgs[i - 1]);
        }
        for i in (1..n).rev() {
            let v = self.rgs[i] + 1;
            if v > prefix_max[i] + 1 || v > top {
                continue;
            }
            let m = prefix_max[i].max(v);
            let rest = n - 1 - i;
            if (m as usize) + rest < self.k - 1 {
                continue;
            }
            self.rgs[i] = v;
            let need = (top - m) as usize;
            for j in i + 1..n {
                let from_end = n - j;
                self.rgs[j] = if from_end <= need {
                    top + 1 - from_end as u8
                } else {
                    0
                };
            }
            return;
        }
        self.done = true;
    }
}

impl Iterator for PartitionStream {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let p = Partition::from_rgs(self.ground, &self.rgs).expect("stream keeps a valid rgs");
        self.advance();
        Some(p)
    }
}

/// All full `k`-partitions of `[n]`, refusing when `S(n, k)` exceeds `budget`.
pub fn enumerate_partitions(ground: GroundSet, k: usize, budget: u64) -> Result<PartitionStream> {
    if k == 0 || k > ground.n() {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= k <= n, got k={k}, n={}",
            ground.n()
        )));
    }
    check_budget(ground.n(), k, budget)?;
    Ok(PartitionStream::new(ground, k))
}

/// Refuses when `S(n, k) > budget`, reporting the exact count.
pub fn check_budget(n: usize, k: usize, budget: u64) -> Result<()> {
    let count = stirling(n as i64, k as i64);
    if count > budget.into() {
        return Err(Error::BudgetExceeded { count, budget });
    }
    Ok(())
}

/// The whole universe `S([n], k)` as a family.
pub fn universe(ground: GroundSet, k: usize, budget: u64) -> Result<Family> {
    let members: Vec<Partition> = enumerate_partitions(ground, k, budget)?.collect();
    Ok(Family::from_sorted_unchecked(ground, k, members))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn p(n: usize, s: &str) -> Partition {
        crate::format::parse_partition(g(n), s).unwrap()
    }

    #[test]
    fn enumeration_small_counts() {
        let all: Vec<_> = enumerate_partitions(g(3), 3, 100).unwrap().collect();
        assert_eq!(all, vec![p(3, "{1|2|3}")]);
        assert_eq!(enumerate_partitions(g(4), 2, 100).unwrap().count(), 7);
        assert_eq!(enumerate_partitions(g(5), 3, 100).unwrap().count(), 25);
    }

    #[test]
    fn enumeration_is_strictly_increasing_in_rgs_order() {
        let all: Vec<_> = enumerate_partitions(g(6), 3, 1000).unwrap().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all.first().unwrap().rgs(), vec![0, 0, 0, 0, 1, 2]);
        assert_eq!(all.last().unwrap().rgs(), vec![0, 1, 2, 2, 2, 2]);
    }

    #[test]
    fn enumeration_refuses_over_budget_with_exact_count() {
        match enumerate_partitions(g(10), 3, 100) {
            Err(Error::BudgetExceeded { count, budget }) => {
                assert_eq!(count, 9330u32.into());
                assert_eq!(budget, 100);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shared_blocks_examples() {
        let a = p(4, "{1|2|3,4}");
        assert_eq!(a.shared_blocks(&a).unwrap(), a);
        let b = p(4, "{1|3|2,4}");
        assert_eq!(a.shared_blocks(&b).unwrap().to_string(), "{1}");
        let c = p(4, "{1,2|3,4}");
        let d = p(4, "{1,3|2,4}");
        assert!(c.shared_blocks(&d).unwrap().is_empty());
        assert!(a.shared_blocks(&p(5, "{1|2|3,4,5}")).is_err());
    }

    #[test]
    fn partial_partition_validation() {
        let ground = g(5);
        let b1 = Block::from_elements([1, 2]).unwrap();
        let b2 = Block::from_elements([2, 3]).unwrap();
        assert!(Partition::partial(ground, [b1, b2]).is_err());
        assert!(Partition::partial(ground, [Block::from_elements([6]).unwrap()]).is_err());
        assert!(Partition::full(ground, [b1]).is_err());
    }

    #[test]
    fn singletons_examples() {
        let ground = g(5);
        assert_eq!(singletons_of(ground, [1, 2]).unwrap().to_string(), "{1|2}");
        assert!(singletons_of(ground, []).unwrap().is_empty());
        assert_eq!(first_singletons(ground, 3).unwrap().len(), 3);
    }

    #[test]
    fn common_blocks_rejects_empty() {
        let ground = g(4);
        let e = Family::empty(ground, 2);
        assert_eq!(common_blocks(&[&e]), Err(Error::EmptyFamily));
        assert_eq!(common_blocks(&[]), Err(Error::EmptyFamily));
        let one = Family::new(ground, 2, [p(4, "{1,2|3,4}")]).unwrap();
        assert_eq!(common_blocks(&[&one]).unwrap(), p(4, "{1,2|3,4}"));
    }

    #[test]
    fn family_rejects_wrong_members() {
        let ground = g(4);
        assert!(Family::new(ground, 3, [p(4, "{1,2|3,4}")]).is_err());
        let fam = Family::new(ground, 2, [p(4, "{1,2|3,4}"), p(4, "{1,2|3,4}")]).unwrap();
        assert_eq!(fam.len(), 1);
    }

    #[test]
    fn partitions_sharing_all_but_one_block_are_equal() {
        for n in 2..=7 {
            for k in 1..=n {
                let all: Vec<_> = enumerate_partitions(g(n), k, 10_000).unwrap().collect();
                for a in &all {
                    for b in &all {
                        if a != b {
                            assert!(a.shared_count(b) + 2 <= k);
                        }
                    }
                }
            }
        }
    }
}
