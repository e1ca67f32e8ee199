//! Duality, maximal pairs and extremal search.
//!
//! The dual of a family is every partition of the other uniformity that meets
//! all members in at least `t` blocks. A pair is maximal exactly when each
//! side is the dual of the other, so maximal pairs are the closed sets of
//! `dual ∘ dual` on the G side and can be listed with Ganter's next-closure.
//!
//! For three or more families the same role is played by [`tuple_dual`],
//! which never materializes the intersection families `G_i`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::constructions::{ser_decimal, Side};
use crate::error::{Error, Result};
use crate::format::parse_full_partition;
use crate::partition::{universe, Family, GroundSet, Partition};
use crate::stirling::BigCount;

/// Largest adjacency matrix (in cells) a [`DualContext`] will build.
pub const ADJACENCY_LIMIT: u64 = 1 << 31;

/// All pairs of a side are used as generators when there are at most this many.
pub const PAIR_LIMIT: usize = 100_000;

/// Largest choice product for which `G_i` may be written out explicitly.
pub const MATERIALIZE_LIMIT: u64 = 100_000;

const CHUNK: usize = 4096;
const MAX_ROUNDS: usize = 10_000;

/// Fixed-width bitset over universe indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> BitSet {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> BitSet {
        let mut s = BitSet {
            words: vec![u64::MAX; len.div_ceil(64)],
            len,
        };
        s.trim();
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> BitSet {
        let mut s = BitSet::new(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    fn trim(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(w) = self.words.last_mut() {
                *w &= (1u64 << r) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn and_assign(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn is_subset_of(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// Elements strictly below `i`.
    pub fn below(&self, i: usize) -> BitSet {
        let mut s = BitSet::new(self.len);
        let (w, b) = (i / 64, i % 64);
        s.words[..w].copy_from_slice(&self.words[..w]);
        if b != 0 {
            s.words[w] = self.words[w] & ((1u64 << b) - 1);
        }
        s
    }

    /// Whether both sets have the same elements below `i`.
    pub fn agrees_below(&self, other: &BitSet, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        if self.words[..w] != other.words[..w] {
            return false;
        }
        b == 0 || (self.words[w] ^ other.words[w]) & ((1u64 << b) - 1) == 0
    }

    /// Lectic order: the set holding the least element of the symmetric
    /// difference is the larger one.
    pub fn lectic_cmp(&self, other: &BitSet) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let x = a ^ b;
            if x != 0 {
                let low = x & x.wrapping_neg();
                return if a & low != 0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        Ordering::Equal
    }
}

fn family_mask(universe: &Family, fam: &Family) -> Result<BitSet> {
    if fam.ground() != universe.ground() || fam.k() != universe.k() {
        return Err(Error::InvalidParameters(format!(
            "family over (n={}, k={}) does not live in the universe (n={}, k={})",
            fam.ground().n(),
            fam.k(),
            universe.ground().n(),
            universe.k()
        )));
    }
    let idx = fam.iter().map(|p| {
        universe
            .position(p)
            .expect("a full k-partition is in the universe")
    });
    Ok(BitSet::from_indices(universe.len(), idx))
}

fn mask_family(universe: &Family, mask: &BitSet) -> Family {
    let members = mask.iter().map(|i| universe.members()[i].clone()).collect();
    Family::from_sorted_unchecked(universe.ground(), universe.k(), members)
}

/// `rows[i]` holds the members of `to` sharing at least `t` blocks with
/// member `i` of `from`.
fn adjacency(from: &Family, to: &Family, t: usize) -> Vec<BitSet> {
    let mut by_block: std::collections::HashMap<u64, Vec<u32>> = std::collections::HashMap::new();
    for (j, p) in to.iter().enumerate() {
        for b in p.blocks() {
            by_block.entry(b.mask()).or_default().push(j as u32);
        }
    }
    from.members()
        .par_iter()
        .map_init(
            || (vec![0u8; to.len()], Vec::new()),
            |(counts, touched), p| {
                let mut row = BitSet::new(to.len());
                for b in p.blocks() {
                    for &j in by_block.get(&b.mask()).map(Vec::as_slice).unwrap_or(&[]) {
                        let c = &mut counts[j as usize];
                        if *c == 0 {
                            touched.push(j);
                        }
                        *c += 1;
                        if *c as usize == t {
                            row.insert(j as usize);
                        }
                    }
                }
                for j in touched.drain(..) {
                    counts[j as usize] = 0;
                }
                row
            },
        )
        .collect()
}

/// Both universes of a pair search with their t-intersection graph.
pub struct DualContext {
    ground: GroundSet,
    k: usize,
    l: usize,
    t: usize,
    uf: Family,
    ug: Family,
    rows_f: Vec<BitSet>,
    rows_g: Vec<BitSet>,
}

impl DualContext {
    /// F lives in `S([n], k)` and G in `S([n], l)`.
    pub fn new(
        ground: GroundSet,
        k: usize,
        l: usize,
        t: usize,
        budget: u64,
    ) -> Result<DualContext> {
        if t == 0 {
            return Err(Error::InvalidParameters("t >= 1 is required".into()));
        }
        let uf = universe(ground, k, budget)?;
        let ug = universe(ground, l, budget)?;
        let cells = uf.len() as u64 * ug.len() as u64;
        if cells > ADJACENCY_LIMIT {
            return Err(Error::SearchTooLarge(format!(
                "adjacency of {} x {} partitions exceeds {ADJACENCY_LIMIT} cells",
                uf.len(),
                ug.len()
            )));
        }
        let rows_f = adjacency(&uf, &ug, t);
        let rows_g = adjacency(&ug, &uf, t);
        Ok(DualContext {
            ground,
            k,
            l,
            t,
            uf,
            ug,
            rows_f,
            rows_g,
        })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn universe_f(&self) -> &Family {
        &self.uf
    }

    pub fn universe_g(&self) -> &Family {
        &self.ug
    }

    fn meet(rows: &[BitSet], members: &BitSet, width: usize, work: &mut u64) -> BitSet {
        let mut acc = BitSet::full(width);
        for i in members.iter() {
            *work += 1;
            acc.and_assign(&rows[i]);
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    /// F side of the dual of a G-side index set.
    pub fn dual_of_g_mask(&self, g: &BitSet, work: &mut u64) -> BitSet {
        Self::meet(&self.rows_g, g, self.uf.len(), work)
    }

    /// G side of the dual of an F-side index set.
    pub fn dual_of_f_mask(&self, f: &BitSet, work: &mut u64) -> BitSet {
        Self::meet(&self.rows_f, f, self.ug.len(), work)
    }

    /// Maximal pair `(dual(g), dual(dual(g)))` of a G-side index set.
    pub fn close_g_mask(&self, g: &BitSet, work: &mut u64) -> (BitSet, BitSet) {
        let f = self.dual_of_g_mask(g, work);
        let g = self.dual_of_f_mask(&f, work);
        (f, g)
    }

    pub fn mask_f(&self, fam: &Family) -> Result<BitSet> {
        family_mask(&self.uf, fam)
    }

    pub fn mask_g(&self, fam: &Family) -> Result<BitSet> {
        family_mask(&self.ug, fam)
    }

    pub fn family_f(&self, mask: &BitSet) -> Family {
        mask_family(&self.uf, mask)
    }

    pub fn family_g(&self, mask: &BitSet) -> Family {
        mask_family(&self.ug, mask)
    }

    /// The l-partitions t-intersecting every member of the k-uniform `f`.
    pub fn dual_to_g(&self, f: &Family) -> Result<Family> {
        Ok(self.family_g(&self.dual_of_f_mask(&self.mask_f(f)?, &mut 0)))
    }

    /// The k-partitions t-intersecting every member of the l-uniform `g`.
    pub fn dual_to_f(&self, g: &Family) -> Result<Family> {
        Ok(self.family_f(&self.dual_of_g_mask(&self.mask_g(g)?, &mut 0)))
    }

    /// `dual(dual(g))` on the G side.
    pub fn closure(&self, g: &Family) -> Result<Family> {
        let (_, closed) = self.close_g_mask(&self.mask_g(g)?, &mut 0);
        Ok(self.family_g(&closed))
    }

    pub fn is_maximal_pair(&self, f: &Family, g: &Family) -> Result<bool> {
        Ok(&self.dual_to_g(f)? == g && &self.dual_to_f(g)? == f)
    }

    /// Number of blocks common to every member of both sides.
    fn common_count(&self, f: &BitSet, g: &BitSet) -> usize {
        let members = f
            .iter()
            .map(|i| &self.uf.members()[i])
            .chain(g.iter().map(|i| &self.ug.members()[i]));
        common_count(members)
    }
}

fn common_count<'a, I: Iterator<Item = &'a Partition>>(mut members: I) -> usize {
    let Some(first) = members.next() else {
        return 0;
    };
    let mut blocks = first.blocks().to_vec();
    for p in members {
        blocks.retain(|b| p.contains_block(b));
        if blocks.is_empty() {
            break;
        }
    }
    blocks.len()
}

/// `{G ∈ S([n], target_l) : |G ∩ F| >= t for all F ∈ fam}`; the dual of the
/// empty family is the whole universe.
pub fn dual(fam: &Family, target_l: usize, t: usize, budget: u64) -> Result<Family> {
    if t == 0 {
        return Err(Error::InvalidParameters("t >= 1 is required".into()));
    }
    let all = universe(fam.ground(), target_l, budget)?;
    let keep: Vec<bool> = all
        .members()
        .par_iter()
        .map(|g| fam.iter().all(|f| g.shared_count(f) >= t))
        .collect();
    let members = all
        .iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(g, _)| g.clone())
        .collect();
    Ok(Family::from_sorted_unchecked(
        fam.ground(),
        target_l,
        members,
    ))
}

/// Progress of a closed-set enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationCertificate {
    /// Closed G-side families emitted.
    pub closed_visited: u64,
    /// Whether the lectic stream ran to the full universe.
    pub complete: bool,
    /// Row intersections spent, the unit the budget is charged in.
    pub work: u64,
}

/// Lectic stream of maximal pairs `(dual(G), G)` over closed G.
pub struct MaximalPairs<'a> {
    ctx: &'a DualContext,
    current: Option<BitSet>,
    started: bool,
    budget: u64,
    cert: EnumerationCertificate,
    aborted: bool,
}

impl<'a> MaximalPairs<'a> {
    pub fn certificate(&self) -> &EnumerationCertificate {
        &self.cert
    }

    /// Whether the budget stopped the stream before completion.
    pub fn aborted(&self) -> bool {
        self.aborted
    }

    fn close(&mut self, g: &BitSet) -> Option<(BitSet, BitSet)> {
        if self.cert.work >= self.budget {
            self.aborted = true;
            return None;
        }
        self.cert.work += 1;
        Some(self.ctx.close_g_mask(g, &mut self.cert.work))
    }

    /// Next maximal pair as index sets (F side, G side).
    pub fn next_masks(&mut self) -> Option<(BitSet, BitSet)> {
        if self.aborted || self.cert.complete {
            return None;
        }
        if !self.started {
            self.started = true;
            let (f, g) = self.close(&BitSet::new(self.ctx.ug.len()))?;
            self.current = Some(g.clone());
            self.cert.closed_visited += 1;
            return Some((f, g));
        }
        let a = self.current.clone().expect("started");
        for i in (0..self.ctx.ug.len()).rev() {
            if a.contains(i) {
                continue;
            }
            let mut seed = a.below(i);
            seed.insert(i);
            let (f, g) = self.close(&seed)?;
            if g.agrees_below(&a, i) {
                self.current = Some(g.clone());
                self.cert.closed_visited += 1;
                return Some((f, g));
            }
        }
        self.cert.complete = true;
        None
    }
}

impl Iterator for MaximalPairs<'_> {
    type Item = (Family, Family);

    fn next(&mut self) -> Option<(Family, Family)> {
        let (f, g) = self.next_masks()?;
        Some((self.ctx.family_f(&f), self.ctx.family_g(&g)))
    }
}

/// Every maximal pair once, in lectic order of the G side. `budget` caps the
/// row intersections spent; check [`MaximalPairs::aborted`] afterwards.
pub fn enumerate_maximal_pairs(ctx: &DualContext, budget: u64) -> MaximalPairs<'_> {
    MaximalPairs {
        ctx,
        current: None,
        started: false,
        budget,
        cert: EnumerationCertificate::default(),
        aborted: false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Seeded,
}

/// The generators a seeded search went through.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSchedule {
    pub seed: u64,
    pub gen_max: usize,
    pub singletons: u64,
    pub pairs: u64,
    pub random_draws: u64,
    /// Generators evaluated, including any done before a resume.
    pub evaluated: u64,
    /// Tuple searches whose fixed-point iteration revisited a state.
    pub cycles: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certificate {
    Exhaustive(EnumerationCertificate),
    Seeded(SeedSchedule),
}

/// Best product found, with its witness tuple and how it was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    #[serde(serialize_with = "ser_decimal")]
    pub best_product: BigCount,
    #[serde(serialize_with = "ser_families")]
    pub witness_families: Vec<Family>,
    pub mode: SearchMode,
    pub nontrivial_constraint: bool,
    /// True only when a closed-set enumeration ran to completion.
    pub exhaustive: bool,
    pub certificate: Certificate,
}

fn family_lines(fam: &Family) -> Vec<String> {
    fam.iter().map(|p| p.to_string()).collect()
}

fn ser_families<S: Serializer>(fams: &[Family], s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Text {
        n: usize,
        k: usize,
        size: usize,
        members: Vec<String>,
    }
    s.collect_seq(fams.iter().map(|f| Text {
        n: f.ground().n(),
        k: f.k(),
        size: f.len(),
        members: family_lines(f),
    }))
}

/// Candidate optimum: exact product and the index sets of its families.
#[derive(Clone, Debug)]
struct Candidate {
    product: BigCount,
    sets: Vec<BitSet>,
    /// Index into `sets` compared first on ties.
    lead: usize,
}

impl Candidate {
    /// Larger product wins; ties go to the lectic-least lead set, then the
    /// remaining sets in order.
    fn beats(&self, other: &Candidate) -> bool {
        match self.product.cmp(&other.product) {
            Ordering::Greater => return true,
            Ordering::Less => return false,
            Ordering::Equal => {}
        }
        let order =
            std::iter::once(self.lead).chain((0..self.sets.len()).filter(|&i| i != self.lead));
        for i in order {
            match self.sets[i].lectic_cmp(&other.sets[i]) {
                Ordering::Less => return true,
                Ordering::Greater => return false,
                Ordering::Equal => {}
            }
        }
        false
    }
}

fn pick(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.beats(&a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

impl DualContext {
    fn candidate(&self, f: BitSet, g: BitSet, nontrivial: bool) -> Option<Candidate> {
        let (nf, ng) = (f.count(), g.count());
        if nf == 0 || ng == 0 || (nontrivial && self.common_count(&f, &g) >= self.t) {
            return None;
        }
        Some(Candidate {
            product: BigCount::from(nf) * BigCount::from(ng),
            sets: vec![f, g],
            lead: 1,
        })
    }
}

fn pair_result(ctx: &DualContext, best: Option<Candidate>) -> (BigCount, Vec<Family>) {
    match best {
        Some(c) => (
            c.product,
            vec![ctx.family_f(&c.sets[0]), ctx.family_g(&c.sets[1])],
        ),
        None => (BigCount::default(), Vec::new()),
    }
}

/// Best product over all maximal pairs by closed-set enumeration. If the
/// budget runs out the result is partial and says so.
pub fn exhaustive_search(ctx: &DualContext, nontrivial: bool, budget: u64) -> SearchResult {
    let mut stream = enumerate_maximal_pairs(ctx, budget);
    let mut best = None;
    while let Some((f, g)) = stream.next_masks() {
        best = pick(best, ctx.candidate(f, g, nontrivial));
    }
    let cert = stream.certificate().clone();
    let (best_product, witness_families) = pair_result(ctx, best);
    SearchResult {
        best_product,
        witness_families,
        mode: SearchMode::Exhaustive,
        nontrivial_constraint: nontrivial,
        exhaustive: cert.complete,
        certificate: Certificate::Exhaustive(cert),
    }
}

/// All maximal pairs attaining the largest product, in lectic order.
pub fn all_optimal_pairs(
    ctx: &DualContext,
    nontrivial: bool,
    budget: u64,
) -> Result<(BigCount, Vec<(Family, Family)>)> {
    let mut stream = enumerate_maximal_pairs(ctx, budget);
    let mut best = BigCount::default();
    let mut found = Vec::new();
    while let Some((f, g)) = stream.next_masks() {
        let Some(c) = ctx.candidate(f, g, nontrivial) else {
            continue;
        };
        match c.product.cmp(&best) {
            Ordering::Greater => {
                best = c.product.clone();
                found = vec![(c.sets[0].clone(), c.sets[1].clone())];
            }
            Ordering::Equal => found.push((c.sets[0].clone(), c.sets[1].clone())),
            Ordering::Less => {}
        }
    }
    if stream.aborted() {
        return Err(Error::BudgetExceeded {
            count: BigCount::from(stream.certificate().work),
            budget,
        });
    }
    Ok((
        best,
        found
            .into_iter()
            .map(|(f, g)| (ctx.family_f(&f), ctx.family_g(&g)))
            .collect(),
    ))
}

/// Settings shared by the seeded pair and tuple searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeededConfig {
    pub gen_max: usize,
    pub nontrivial: bool,
    pub seed: u64,
    /// Random generator sets drawn per side (pairs) or in total (tuples).
    pub random_draws: usize,
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many generators in this run; the checkpoint allows
    /// resuming.
    pub stop_after: Option<u64>,
}

impl Default for SeededConfig {
    fn default() -> Self {
        SeededConfig {
            gen_max: 2,
            nontrivial: false,
            seed: 0,
            random_draws: 10_000,
            checkpoint: None,
            stop_after: None,
        }
    }
}

/// On-disk progress of a seeded search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: usize,
    pub ks: Vec<usize>,
    pub t: usize,
    pub seed: u64,
    pub gen_max: usize,
    pub nontrivial: bool,
    pub random_draws: usize,
    pub position: u64,
    pub best_product: String,
    pub witness: Vec<Vec<String>>,
    pub cycles: u64,
}

impl Checkpoint {
    fn matches(&self, other: &Checkpoint) -> bool {
        (
            self.n,
            &self.ks,
            self.t,
            self.seed,
            self.gen_max,
            self.nontrivial,
            self.random_draws,
        ) == (
            other.n,
            &other.ks,
            other.t,
            other.seed,
            other.gen_max,
            other.nontrivial,
            other.random_draws,
        )
    }

    fn write(&self, path: &PathBuf) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(
            &tmp,
            serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?,
        )?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Reads the checkpoint if present and checks it belongs to this search.
/// Returns the position and the best candidate restored against `universes`.
fn resume(
    path: Option<&PathBuf>,
    fresh: &Checkpoint,
    universes: &[&Family],
    lead: usize,
) -> Result<(u64, Option<Candidate>, u64)> {
    let Some(path) = path.filter(|p| p.exists()) else {
        return Ok((0, None, 0));
    };
    let text = fs::read_to_string(path)?;
    let saved: Checkpoint =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("checkpoint: {e}")))?;
    if !saved.matches(fresh) {
        return Err(Error::InvalidParameters(format!(
            "checkpoint {} belongs to a different search",
            path.display()
        )));
    }
    if saved.witness.is_empty() {
        return Ok((saved.position, None, saved.cycles));
    }
    if saved.witness.len() != universes.len() {
        return Err(Error::Parse(
            "checkpoint witness has the wrong number of families".into(),
        ));
    }
    let mut sets = Vec::new();
    for (lines, u) in saved.witness.iter().zip(universes) {
        let members = lines
            .iter()
            .map(|s| parse_full_partition(u.ground(), u.k(), s))
            .collect::<Result<Vec<_>>>()?;
        sets.push(family_mask(u, &Family::new(u.ground(), u.k(), members)?)?);
    }
    let product = saved
        .best_product
        .parse()
        .map_err(|_| Error::Parse("checkpoint best_product".into()))?;
    Ok((
        saved.position,
        Some(Candidate {
            product,
            sets,
            lead,
        }),
        saved.cycles,
    ))
}

fn snapshot(
    fresh: &Checkpoint,
    position: u64,
    best: &Option<Candidate>,
    universes: &[&Family],
    cycles: u64,
) -> Checkpoint {
    let mut c = fresh.clone();
    c.position = position;
    c.cycles = cycles;
    if let Some(b) = best {
        c.best_product = b.product.to_string();
        c.witness = b
            .sets
            .iter()
            .zip(universes)
            .map(|(s, u)| family_lines(&mask_family(u, s)))
            .collect();
    }
    c
}

/// Runs `eval` over `start..total` in chunks, reducing deterministically and
/// saving after each chunk. Returns the best candidate and the end position.
fn drive<E>(
    start: u64,
    total: u64,
    mut best: Option<Candidate>,
    stop_after: Option<u64>,
    eval: E,
    mut save: impl FnMut(u64, &Option<Candidate>) -> Result<()>,
) -> Result<(Option<Candidate>, u64)>
where
    E: Fn(usize) -> Option<Candidate> + Sync,
{
    let end = stop_after.map_or(total, |s| total.min(start.saturating_add(s)));
    let mut pos = start;
    while pos < end {
        let hi = end.min(pos + CHUNK as u64);
        let chunk_best = (pos as usize..hi as usize)
            .into_par_iter()
            .map(&eval)
            .reduce(|| None, pick);
        best = pick(best, chunk_best);
        pos = hi;
        save(pos, &best)?;
    }
    Ok((best, pos))
}

struct Generator {
    side: Side,
    members: Vec<u32>,
}

fn pair_generators(uf: usize, ug: usize, config: &SeededConfig) -> (Vec<Generator>, u64, u64) {
    let mut gens = Vec::new();
    let (mut singles, mut pairs) = (0, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for (side, m) in [(Side::G, ug), (Side::F, uf)] {
        for i in 0..m {
            gens.push(Generator {
                side,
                members: vec![i as u32],
            });
            singles += 1;
        }
        let all_pairs = m * m.saturating_sub(1) / 2 <= PAIR_LIMIT;
        if config.gen_max >= 2 && all_pairs {
            for i in 0..m {
                for j in i + 1..m {
                    gens.push(Generator {
                        side,
                        members: vec![i as u32, j as u32],
                    });
                    pairs += 1;
                }
            }
        }
        if m >= 2 && config.gen_max >= 2 {
            for _ in 0..config.random_draws {
                let size = rng.gen_range(2..=config.gen_max.min(m));
                let mut members: Vec<u32> = sample(&mut rng, m, size)
                    .into_iter()
                    .map(|i| i as u32)
                    .collect();
                members.sort_unstable();
                gens.push(Generator { side, members });
            }
        }
    }
    (gens, singles, pairs)
}

/// Maximal pairs generated from small seed sets on either side, keeping the
/// best product. Covers all singletons, all pairs when a side is small, and
/// `random_draws` random sets of 2..=gen_max per side. Never exhaustive.
pub fn seeded_search(ctx: &DualContext, config: &SeededConfig) -> Result<SearchResult> {
    if config.gen_max == 0 {
        return Err(Error::InvalidParameters(
            "gen_max must be at least 1".into(),
        ));
    }
    let (gens, singletons, pairs) = pair_generators(ctx.uf.len(), ctx.ug.len(), config);
    let random = gens.len() as u64 - singletons - pairs;
    let fresh = Checkpoint {
        n: ctx.ground.n(),
        ks: vec![ctx.k, ctx.l],
        t: ctx.t,
        seed: config.seed,
        gen_max: config.gen_max,
        nontrivial: config.nontrivial,
        random_draws: config.random_draws,
        position: 0,
        best_product: "0".into(),
        witness: Vec::new(),
        cycles: 0,
    };
    let universes = [&ctx.uf, &ctx.ug];
    let (start, best, _) = resume(config.checkpoint.as_ref(), &fresh, &universes, 1)?;
    let eval = |i: usize| {
        let gen = &gens[i];
        let mut work = 0;
        let (f, g) = match gen.side {
            Side::G => ctx.close_g_mask(
                &BitSet::from_indices(ctx.ug.len(), gen.members.iter().map(|&j| j as usize)),
                &mut work,
            ),
            Side::F => {
                let g = ctx.dual_of_f_mask(
                    &BitSet::from_indices(ctx.uf.len(), gen.members.iter().map(|&j| j as usize)),
                    &mut work,
                );
                (ctx.dual_of_g_mask(&g, &mut work), g)
            }
        };
        ctx.candidate(f, g, config.nontrivial)
    };
    let save = |pos: u64, best: &Option<Candidate>| match &config.checkpoint {
        Some(path) => snapshot(&fresh, pos, best, &universes, 0).write(path),
        None => Ok(()),
    };
    let (best, pos) = drive(
        start,
        gens.len() as u64,
        best,
        config.stop_after,
        eval,
        save,
    )?;
    let (best_product, witness_families) = pair_result(ctx, best);
    Ok(SearchResult {
        best_product,
        witness_families,
        mode: SearchMode::Seeded,
        nontrivial_constraint: config.nontrivial,
        exhaustive: false,
        certificate: Certificate::Seeded(SeedSchedule {
            seed: config.seed,
            gen_max: config.gen_max,
            singletons,
            pairs,
            random_draws: random,
            evaluated: pos,
            cycles: 0,
        }),
    })
}

/// Bitmask over the blocks of `f` that also occur in `p`.
fn shared_mask(f: &Partition, p: &Partition) -> u64 {
    f.blocks()
        .iter()
        .enumerate()
        .filter(|(_, b)| p.contains_block(b))
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// Minimum over choices of `|F ∩ P_1 ∩ ... ∩ P_j|`, stopping early with a
/// value below `floor` once one is reachable.
fn reach_min(f: &Partition, others: &[&Family], floor: usize) -> usize {
    let full = if f.len() == 64 {
        u64::MAX
    } else {
        (1u64 << f.len()) - 1
    };
    let mut reach: HashSet<u64> = HashSet::from([full]);
    for fam in others {
        let masks: HashSet<u64> = fam.iter().map(|p| shared_mask(f, p)).collect();
        let mut next = HashSet::new();
        for s in &reach {
            for m in &masks {
                let v = s & m;
                if (v.count_ones() as usize) < floor {
                    return v.count_ones() as usize;
                }
                next.insert(v);
            }
        }
        reach = next;
    }
    reach
        .iter()
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap_or(f.len())
}

fn check_same_ground(f: &Partition, others: &[&Family]) -> Result<()> {
    for fam in others {
        if fam.ground() != f.ground() {
            return Err(Error::GroundMismatch {
                left: f.n(),
                right: fam.ground().n(),
            });
        }
        if fam.is_empty() {
            return Err(Error::EmptyFamily);
        }
    }
    Ok(())
}

/// `min |F ∩ F_1 ∩ ... ∩ F_j|` over all choices `F_i ∈ others[i]`, by dynamic
/// programming over the reachable subsets of the blocks of `f`.
pub fn min_shared_over_choices(f: &Partition, others: &[&Family]) -> Result<usize> {
    check_same_ground(f, others)?;
    Ok(reach_min(f, others, 0))
}

/// `s_i = min{|G| : G ∈ G_i}` for every index, without building `G_i`.
pub fn s_values(families: &[&Family]) -> Result<Vec<usize>> {
    if families.len() < 2 {
        return Err(Error::InvalidParameters(
            "need at least two families".into(),
        ));
    }
    (0..families.len())
        .map(|i| {
            let others: Vec<&Family> = families
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, f)| *f)
                .collect();
            let (head, rest) = others.split_first().expect("at least one other family");
            if head.is_empty() {
                return Err(Error::EmptyFamily);
            }
            let mut best = usize::MAX;
            for p in head.iter() {
                best = best.min(min_shared_over_choices(p, rest)?);
            }
            Ok(best)
        })
        .collect()
}

/// Whether every choice of one member per family shares at least `t` blocks.
pub fn is_cross_t_intersecting(families: &[&Family], t: usize) -> Result<bool> {
    let (head, rest) = families.split_first().ok_or(Error::EmptyFamily)?;
    if rest.is_empty() {
        return Err(Error::InvalidParameters(
            "need at least two families".into(),
        ));
    }
    if families.iter().any(|f| f.is_empty()) {
        return Ok(true);
    }
    for p in head.iter() {
        check_same_ground(p, rest)?;
    }
    Ok(head
        .members()
        .par_iter()
        .all(|p| reach_min(p, rest, t) >= t))
}

fn others_of<'a>(i: usize, families: &[&'a Family]) -> Vec<&'a Family> {
    families
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, f)| *f)
        .collect()
}

fn dual_within(all: &Family, others: &[&Family], t: usize) -> Family {
    if others.iter().any(|f| f.is_empty()) {
        return all.clone();
    }
    let keep: Vec<bool> = all
        .members()
        .par_iter()
        .map(|p| reach_min(p, others, t) >= t)
        .collect();
    let members = all
        .iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p.clone())
        .collect();
    Family::from_sorted_unchecked(all.ground(), all.k(), members)
}

/// The largest family of `k`-partitions that can replace `families[i]`
/// while keeping the tuple r-cross t-intersecting.
pub fn tuple_dual(
    i: usize,
    k: usize,
    families: &[&Family],
    t: usize,
    budget: u64,
) -> Result<Family> {
    let first = families.first().ok_or(Error::EmptyFamily)?;
    if i >= families.len() {
        return Err(Error::InvalidParameters(format!("index {i} out of range")));
    }
    let all = universe(first.ground(), k, budget)?;
    Ok(dual_within(&all, &others_of(i, families), t))
}

/// Universes for an r-tuple search.
pub struct TupleContext {
    ground: GroundSet,
    ks: Vec<usize>,
    t: usize,
    universes: Vec<Family>,
}

/// Result of iterating tuple duals to a fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleOutcome {
    pub families: Vec<Family>,
    pub rounds: usize,
    /// Length of the cycle if the iteration returned to an earlier state
    /// without settling.
    pub cycle: Option<usize>,
}

impl TupleContext {
    pub fn new(ground: GroundSet, ks: &[usize], t: usize, budget: u64) -> Result<TupleContext> {
        if t == 0 {
            return Err(Error::InvalidParameters("t >= 1 is required".into()));
        }
        if ks.len() < 2 {
            return Err(Error::InvalidParameters(
                "need at least two uniformities".into(),
            ));
        }
        let universes = ks
            .iter()
            .map(|&k| universe(ground, k, budget))
            .collect::<Result<Vec<_>>>()?;
        Ok(TupleContext {
            ground,
            ks: ks.to_vec(),
            t,
            universes,
        })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn ks(&self) -> &[usize] {
        &self.ks
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn universe(&self, i: usize) -> &Family {
        &self.universes[i]
    }

    fn check(&self, families: &[Family]) -> Result<()> {
        if families.len() != self.ks.len() {
            return Err(Error::InvalidParameters(format!(
                "expected {} families, got {}",
                self.ks.len(),
                families.len()
            )));
        }
        for (f, u) in families.iter().zip(&self.universes) {
            family_mask(u, f)?;
        }
        Ok(())
    }

    pub fn tuple_dual(&self, i: usize, families: &[Family]) -> Result<Family> {
        self.check(families)?;
        let refs: Vec<&Family> = families.iter().collect();
        Ok(dual_within(
            &self.universes[i],
            &others_of(i, &refs),
            self.t,
        ))
    }

    /// Every family equals its tuple dual.
    pub fn is_tuple_maximal(&self, families: &[Family]) -> Result<bool> {
        for (i, f) in families.iter().enumerate() {
            if &self.tuple_dual(i, families)? != f {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Replaces each family by its tuple dual in turn, starting at `first`,
    /// until a whole round changes nothing. A repeated state that is not a
    /// fixed point is reported as a cycle.
    pub fn maximize(&self, start: Vec<Family>, first: usize) -> Result<TupleOutcome> {
        self.check(&start)?;
        let r = self.ks.len();
        let mut families = start;
        let mut seen: Vec<Vec<Family>> = Vec::new();
        for round in 1..=MAX_ROUNDS {
            let mut changed = false;
            for step in 0..r {
                let i = (first + step) % r;
                let refs: Vec<&Family> = families.iter().collect();
                let next = dual_within(&self.universes[i], &others_of(i, &refs), self.t);
                if next != families[i] {
                    families[i] = next;
                    changed = true;
                }
            }
            if !changed {
                return Ok(TupleOutcome {
                    families,
                    rounds: round,
                    cycle: None,
                });
            }
            if let Some(pos) = seen.iter().position(|s| s == &families) {
                return Ok(TupleOutcome {
                    families,
                    rounds: round,
                    cycle: Some(seen.len() - pos),
                });
            }
            seen.push(families.clone());
        }
        Err(Error::Internal(format!(
            "tuple iteration did not settle in {MAX_ROUNDS} rounds"
        )))
    }

    fn candidate(&self, families: &[Family], nontrivial: bool) -> Option<Candidate> {
        if families.iter().any(|f| f.is_empty()) {
            return None;
        }
        if nontrivial && common_count(families.iter().flat_map(|f| f.iter())) >= self.t {
            return None;
        }
        let product = families
            .iter()
            .fold(BigCount::from(1u32), |acc, f| acc * BigCount::from(f.len()));
        let sets = families
            .iter()
            .zip(&self.universes)
            .map(|(f, u)| family_mask(u, f).expect("checked"))
            .collect();
        Some(Candidate {
            product,
            sets,
            lead: 0,
        })
    }
}

/// `G_i = {∩_{j≠i} F_j}` written out as partial partitions, refused when
/// the number of choices exceeds `limit`.
pub fn materialize_g(i: usize, families: &[&Family], limit: u64) -> Result<Vec<Partition>> {
    let others = others_of(i, families);
    let (head, rest) = others.split_first().ok_or(Error::EmptyFamily)?;
    let choices = others
        .iter()
        .fold(1u64, |acc, f| acc.saturating_mul(f.len() as u64));
    if choices > limit {
        return Err(Error::SearchTooLarge(format!(
            "G_{} has {choices} choices, limit {limit}",
            i + 1
        )));
    }
    let mut acc: HashSet<Partition> = head.iter().cloned().collect();
    for fam in rest {
        let mut next = HashSet::new();
        for a in &acc {
            for p in fam.iter() {
                next.insert(a.shared_blocks(p)?);
            }
        }
        acc = next;
    }
    let mut out: Vec<Partition> = acc.into_iter().collect();
    out.sort();
    Ok(out)
}

struct TupleDraw {
    free: usize,
    members: Vec<Vec<u32>>,
}

/// Fixed-point search for r-tuples: each draw fixes small random seed sets
/// for all indices but one, then iterates tuple duals starting at the free
/// index. Never exhaustive.
pub fn tuple_seeded_search(ctx: &TupleContext, config: &SeededConfig) -> Result<SearchResult> {
    if config.gen_max == 0 {
        return Err(Error::InvalidParameters(
            "gen_max must be at least 1".into(),
        ));
    }
    let r = ctx.ks.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let draws: Vec<TupleDraw> = (0..config.random_draws)
        .map(|d| {
            let free = d % r;
            let members = (0..r)
                .map(|j| {
                    if j == free {
                        return Vec::new();
                    }
                    let m = ctx.universes[j].len();
                    let size = rng.gen_range(1..=config.gen_max.min(m));
                    let mut v: Vec<u32> = sample(&mut rng, m, size)
                        .into_iter()
                        .map(|i| i as u32)
                        .collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            TupleDraw { free, members }
        })
        .collect();
    let fresh = Checkpoint {
        n: ctx.ground.n(),
        ks: ctx.ks.clone(),
        t: ctx.t,
        seed: config.seed,
        gen_max: config.gen_max,
        nontrivial: config.nontrivial,
        random_draws: config.random_draws,
        position: 0,
        best_product: "0".into(),
        witness: Vec::new(),
        cycles: 0,
    };
    let universes: Vec<&Family> = ctx.universes.iter().collect();
    let (start, best, saved_cycles) = resume(config.checkpoint.as_ref(), &fresh, &universes, 0)?;
    let cycles = AtomicU64::new(saved_cycles);
    let failure = std::sync::Mutex::new(None);
    let eval = |d: usize| {
        let draw = &draws[d];
        let start: Vec<Family> = draw
            .members
            .iter()
            .zip(&ctx.universes)
            .map(|(idx, u)| {
                mask_family(
                    u,
                    &BitSet::from_indices(u.len(), idx.iter().map(|&i| i as usize)),
                )
            })
            .collect();
        match ctx.maximize(start, draw.free) {
            Ok(out) => {
                if out.cycle.is_some() {
                    cycles.fetch_add(1, AtomicOrdering::Relaxed);
                    return None;
                }
                ctx.candidate(&out.families, config.nontrivial)
            }
            Err(e) => {
                failure.lock().expect("not poisoned").get_or_insert(e);
                None
            }
        }
    };
    let save = |pos: u64, best: &Option<Candidate>| match &config.checkpoint {
        Some(path) => snapshot(
            &fresh,
            pos,
            best,
            &universes,
            cycles.load(AtomicOrdering::Relaxed),
        )
        .write(path),
        None => Ok(()),
    };
    let (best, pos) = drive(
        start,
        draws.len() as u64,
        best,
        config.stop_after,
        eval,
        save,
    )?;
    if let Some(e) = failure.into_inner().expect("not poisoned") {
        return Err(e);
    }
    let (best_product, witness_families) = match best {
        Some(c) => (
            c.product,
            c.sets
                .iter()
                .zip(&ctx.universes)
                .map(|(s, u)| mask_family(u, s))
                .collect(),
        ),
        None => (BigCount::default(), Vec::new()),
    };
    Ok(SearchResult {
        best_product,
        witness_families,
        mode: SearchMode::Seeded,
        nontrivial_constraint: config.nontrivial,
        exhaustive: false,
        certificate: Certificate::Seeded(SeedSchedule {
            seed: config.seed,
            gen_max: config.gen_max,
            singletons: 0,
            pairs: 0,
            random_draws: draws.len() as u64,
            evaluated: pos,
            cycles: cycles.into_inner(),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::ConstructionSpec;
    use crate::format::parse_partition;
    use crate::partition::first_singletons;

    const BUDGET: u64 = 1_000_000;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn built(spec: ConstructionSpec) -> Family {
        spec.enumerate(BUDGET).unwrap()
    }

    #[test]
    fn bitset_lectic_order() {
        let a = BitSet::from_indices(70, [1, 65]);
        let b = BitSet::from_indices(70, [0]);
        assert_eq!(a.lectic_cmp(&b), Ordering::Less);
        assert_eq!(b.lectic_cmp(&a), Ordering::Greater);
        assert!(a.agrees_below(&BitSet::from_indices(70, [1]), 65));
        assert!(!a.agrees_below(&BitSet::from_indices(70, [1]), 66));
        assert_eq!(a.below(65).iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(BitSet::full(70).count(), 70);
    }

    #[test]
    fn dual_of_empty_is_universe() {
        let ground = g(5);
        let d = dual(&Family::empty(ground, 3), 3, 1, BUDGET).unwrap();
        assert_eq!(d.len(), 25);
    }

    #[test]
    fn trivial_family_is_self_dual() {
        let ground = g(6);
        let x = first_singletons(ground, 1).unwrap();
        let triv = universe(ground, 3, BUDGET)
            .unwrap()
            .filter(|p| x.is_subset_of(p));
        assert_eq!(dual(&triv, 3, 1, BUDGET).unwrap(), triv);
    }

    #[test]
    fn a_and_b_are_mutual_duals() {
        let ground = g(8);
        let a = built(ConstructionSpec::a_default(ground, 3, 3, 1).unwrap());
        let b = built(ConstructionSpec::b_default(ground, 3, 1).unwrap());
        assert_eq!(dual(&a, 3, 1, BUDGET).unwrap(), b);
        assert_eq!(dual(&b, 3, 1, BUDGET).unwrap(), a);
        let ctx = DualContext::new(ground, 3, 3, 1, BUDGET).unwrap();
        assert_eq!(ctx.dual_to_g(&a).unwrap(), b);
        assert_eq!(ctx.closure(&b).unwrap(), b);
        assert!(ctx.is_maximal_pair(&a, &b).unwrap());
    }

    #[test]
    fn closure_of_one_partition_with_l_equal_t_plus_one() {
        let ground = g(6);
        let ctx = DualContext::new(ground, 3, 2, 1, BUDGET).unwrap();
        let p = parse_partition(ground, "{1|2,3,4,5,6}").unwrap();
        let one = Family::new(ground, 2, [p.clone()]).unwrap();
        assert_eq!(ctx.closure(&one).unwrap(), one);
        let f = ctx.dual_to_f(&one).unwrap();
        assert_eq!(f.len(), 15);
        assert!(f.iter().all(|q| q.shared_count(&p) == 1));
    }

    #[test]
    fn closure_properties_on_random_sets() {
        let ground = g(5);
        let ctx = DualContext::new(ground, 3, 2, 1, BUDGET).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let size = rng.gen_range(0..5);
            let idx = sample(&mut rng, ctx.ug.len(), size).into_vec();
            let s = BitSet::from_indices(ctx.ug.len(), idx);
            let (_, c) = ctx.close_g_mask(&s, &mut 0);
            assert!(s.is_subset_of(&c));
            assert_eq!(ctx.close_g_mask(&c, &mut 0).1, c);
        }
    }

    #[test]
    fn next_closure_lists_each_closed_set_once_in_order() {
        let ground = g(5);
        let ctx = DualContext::new(ground, 3, 3, 1, BUDGET).unwrap();
        let mut stream = enumerate_maximal_pairs(&ctx, u64::MAX);
        let mut all = Vec::new();
        while let Some((f, gm)) = stream.next_masks() {
            let (fam_f, fam_g) = (ctx.family_f(&f), ctx.family_g(&gm));
            assert!(ctx.is_maximal_pair(&fam_f, &fam_g).unwrap());
            all.push(gm);
        }
        assert!(stream.certificate().complete);
        assert!(all
            .windows(2)
            .all(|w| w[0].lectic_cmp(&w[1]) == Ordering::Less));
        assert_eq!(all.len() as u64, stream.certificate().closed_visited);
    }

    #[test]
    fn two_partitions_of_four() {
        let ctx = DualContext::new(g(4), 2, 2, 1, BUDGET).unwrap();
        let pairs: Vec<_> = enumerate_maximal_pairs(&ctx, u64::MAX).collect();
        let singles = pairs
            .iter()
            .filter(|(f, gg)| f.len() == 1 && f == gg)
            .count();
        assert_eq!(singles, 7);
        assert_eq!(pairs.len(), 9);
        let r = exhaustive_search(&ctx, true, u64::MAX);
        assert!(r.exhaustive);
        assert_eq!(r.best_product, BigCount::default());
        assert!(r.witness_families.is_empty());
    }

    #[test]
    fn budget_gives_partial_certificate() {
        let ctx = DualContext::new(g(7), 3, 3, 1, BUDGET).unwrap();
        let r = exhaustive_search(&ctx, false, 1000);
        assert!(!r.exhaustive);
        match r.certificate {
            Certificate::Exhaustive(c) => assert!(!c.complete && c.work >= 1000),
            _ => panic!("wrong certificate"),
        }
    }

    #[test]
    fn seeded_search_is_deterministic_and_resumable() {
        let ctx = DualContext::new(g(6), 3, 3, 1, BUDGET).unwrap();
        let config = SeededConfig {
            random_draws: 300,
            ..SeededConfig::default()
        };
        let a = seeded_search(&ctx, &config).unwrap();
        let b = seeded_search(&ctx, &config).unwrap();
        assert_eq!(a, b);
        let trivial = crate::stirling::stirling(5, 2);
        assert!(a.best_product >= &trivial * &trivial);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let partial = SeededConfig {
            checkpoint: Some(path.clone()),
            stop_after: Some(5000),
            ..config.clone()
        };
        seeded_search(&ctx, &partial).unwrap();
        let resumed = seeded_search(
            &ctx,
            &SeededConfig {
                stop_after: None,
                ..partial
            },
        )
        .unwrap();
        assert_eq!(resumed, a);
    }

    #[test]
    fn min_shared_matches_brute_force() {
        let ground = g(5);
        let all = universe(ground, 3, BUDGET).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let pick = |rng: &mut ChaCha8Rng| {
                let size = rng.gen_range(1..=6);
                Family::new(
                    ground,
                    3,
                    sample(rng, all.len(), size)
                        .into_iter()
                        .map(|i| all.members()[i].clone()),
                )
                .unwrap()
            };
            let (a, b) = (pick(&mut rng), pick(&mut rng));
            let f = &all.members()[rng.gen_range(0..all.len())];
            let brute = a
                .iter()
                .flat_map(|p| b.iter().map(move |q| (p, q)))
                .map(|(p, q)| {
                    f.blocks()
                        .iter()
                        .filter(|x| p.contains_block(x) && q.contains_block(x))
                        .count()
                });
            assert_eq!(
                min_shared_over_choices(f, &[&a, &b]).unwrap(),
                brute.min().unwrap()
            );
        }
    }

    #[test]
    fn min_shared_trivial_cases() {
        let ground = g(5);
        let p = parse_partition(ground, "{1|2|3,4,5}").unwrap();
        let q = parse_partition(ground, "{1|2,3|4,5}").unwrap();
        let fq = Family::new(ground, 3, [q.clone()]).unwrap();
        assert_eq!(min_shared_over_choices(&p, &[&fq]).unwrap(), 1);
        let fp = Family::new(ground, 3, [p.clone()]).unwrap();
        assert_eq!(min_shared_over_choices(&p, &[&fp, &fp]).unwrap(), 3);
        assert_eq!(s_values(&[&fp, &fp, &fp]).unwrap(), vec![3, 3, 3]);
        assert_eq!(
            min_shared_over_choices(&p, &[&Family::empty(ground, 3)]),
            Err(Error::EmptyFamily)
        );
    }

    #[test]
    fn ccd_tuple_is_maximal() {
        let ground = g(7);
        let c4 = built(ConstructionSpec::c_default(ground, 4, 1).unwrap());
        let c3 = built(ConstructionSpec::c_default(ground, 3, 1).unwrap());
        let d3 = built(ConstructionSpec::d_default(ground, 3, 1).unwrap());
        let ctx = TupleContext::new(ground, &[4, 3, 3], 1, BUDGET).unwrap();
        let fams = vec![c4.clone(), c3.clone(), d3.clone()];
        assert!(ctx.is_tuple_maximal(&fams).unwrap());
        assert!(is_cross_t_intersecting(&[&c4, &c3, &d3], 1).unwrap());
        let out = ctx.maximize(fams.clone(), 0).unwrap();
        assert_eq!(out.families, fams);
        assert_eq!(out.rounds, 1);
        let g3 = materialize_g(2, &[&c4, &c3, &d3], MATERIALIZE_LIMIT).unwrap();
        let s = s_values(&[&c4, &c3, &d3]).unwrap();
        assert_eq!(s[2], g3.iter().map(Partition::len).min().unwrap());
    }

    #[test]
    fn tuple_search_is_deterministic() {
        let ctx = TupleContext::new(g(5), &[3, 3, 3], 1, BUDGET).unwrap();
        let config = SeededConfig {
            random_draws: 60,
            nontrivial: true,
            ..SeededConfig::default()
        };
        let a = tuple_seeded_search(&ctx, &config).unwrap();
        assert_eq!(a, tuple_seeded_search(&ctx, &config).unwrap());
        let fams: Vec<&Family> = a.witness_families.iter().collect();
        if !fams.is_empty() {
            assert!(is_cross_t_intersecting(&fams, 1).unwrap());
            assert!(ctx.is_tuple_maximal(&a.witness_families).unwrap());
        }
    }
}
