//! t-covers and the covering number.
//!
//! A t-cover of a collection of partitions is a partial partition sharing at
//! least `t` blocks with every member. Candidate blocks are drawn from the
//! blocks of the members: a block that lies in no member never contributes to
//! a shared count, so dropping it from a cover keeps it a cover with fewer
//! blocks. Restricting candidates this way therefore loses no minimum cover.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{Block, Family, Partition};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverResult {
    pub tau: usize,
    /// All minimum covers when requested, in canonical order; otherwise one.
    #[serde(serialize_with = "ser_partitions")]
    pub witnesses: Vec<Partition>,
    /// Search nodes visited.
    pub explored: u64,
}

fn ser_partitions<S: serde::Serializer>(
    v: &[Partition],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

pub fn is_t_cover(cover: &Partition, fam: &Family, t: usize) -> Result<bool> {
    if fam.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if cover.n() != fam.ground().n() {
        return Err(Error::GroundMismatch {
            left: cover.n(),
            right: fam.ground().n(),
        });
    }
    Ok(covers_all(cover, fam.members(), t))
}

pub fn covers_all(cover: &Partition, members: &[Partition], t: usize) -> bool {
    members.iter().all(|m| cover.shared_count(m) >= t)
}

/// Distinct blocks occurring in the members, in block order.
fn candidate_blocks(members: &[Partition]) -> Vec<Block> {
    let set: BTreeSet<Block> = members
        .iter()
        .flat_map(|p| p.blocks().iter().copied())
        .collect();
    set.into_iter().collect()
}

struct Search<'a> {
    members: &'a [Partition],
    t: usize,
    explored: u64,
    found: BTreeSet<Partition>,
    stop_at_first: bool,
}

impl Search<'_> {
    /// Extends `cover` by at most `remaining` blocks into t-covers.
    fn dfs(&mut self, cover: &Partition, remaining: usize) {
        self.explored += 1;
        let mut worst: Option<(&Partition, usize)> = None;
        for m in self.members {
            let shared = cover.shared_count(m);
            if shared < self.t {
                let deficit = self.t - shared;
                if deficit > remaining {
                    return;
                }
                if worst.is_none_or(|(_, d)| deficit > d) {
                    worst = Some((m, deficit));
                }
            }
        }
        let Some((member, _)) = worst else {
            self.found.insert(cover.clone());
            return;
        };
        let used = cover.support_mask();
        for b in member.blocks() {
            if b.mask() & used != 0 {
                continue;
            }
            let next = cover.with_block(*b).expect("disjoint block");
            self.dfs(&next, remaining - 1);
            if self.stop_at_first && !self.found.is_empty() {
                return;
            }
        }
    }
}

/// Exact covering number of an arbitrary nonempty list of partial partitions.
pub fn tau_of_members(
    members: &[Partition],
    t: usize,
    collect_witnesses: bool,
) -> Result<CoverResult> {
    let first = members.first().ok_or(Error::EmptyFamily)?;
    if t == 0 {
        return Err(Error::InvalidParameters("t must be at least 1".into()));
    }
    let ground = first.ground();
    let max_size = candidate_blocks(members).len().min(ground.n());
    let mut explored = 0;
    for size in t..=max_size {
        let mut s = Search {
            members,
            t,
            explored: 0,
            found: BTreeSet::new(),
            stop_at_first: !collect_witnesses,
        };
        s.dfs(&Partition::empty(ground), size);
        explored += s.explored;
        if !s.found.is_empty() {
            // Every cover found has at most `size` blocks and none with fewer
            // exists, so all have exactly `size`.
            return Ok(CoverResult {
                tau: size,
                witnesses: s.found.into_iter().collect(),
                explored,
            });
        }
    }
    Err(Error::NoCover)
}

pub fn tau_t(fam: &Family, t: usize, collect_witnesses: bool) -> Result<CoverResult> {
    tau_of_members(fam.members(), t, collect_witnesses)
}

/// All t-covers with exactly `size` blocks drawn from member blocks.
pub fn min_covers_of_members(
    members: &[Partition],
    t: usize,
    size: usize,
) -> Result<Vec<Partition>> {
    let first = members.first().ok_or(Error::EmptyFamily)?;
    if size < t {
        return Ok(Vec::new());
    }
    let mut s = Search {
        members,
        t,
        explored: 0,
        found: BTreeSet::new(),
        stop_at_first: false,
    };
    s.dfs(&Partition::empty(first.ground()), size);
    let candidates = candidate_blocks(members);
    let mut out = BTreeSet::new();
    for cover in s.found {
        pad(&cover, size, &candidates, 0, &mut out);
    }
    Ok(out.into_iter().collect())
}

/// Adds blocks (in increasing candidate order) until the cover has `size` blocks.
fn pad(
    cover: &Partition,
    size: usize,
    candidates: &[Block],
    from: usize,
    out: &mut BTreeSet<Partition>,
) {
    if cover.len() == size {
        out.insert(cover.clone());
        return;
    }
    let used = cover.support_mask();
    for (i, b) in candidates.iter().enumerate().skip(from) {
        if b.mask() & used == 0 {
            pad(
                &cover.with_block(*b).expect("disjoint"),
                size,
                candidates,
                i + 1,
                out,
            );
        }
    }
}

pub fn min_covers(fam: &Family, t: usize, size: usize) -> Result<Vec<Partition>> {
    min_covers_of_members(fam.members(), t, size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_partition;
    use crate::partition::{enumerate_partitions, first_singletons, GroundSet};

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn family(n: usize, k: usize, keep: impl Fn(&Partition) -> bool) -> Family {
        let ground = g(n);
        Family::new(
            ground,
            k,
            enumerate_partitions(ground, k, 1 << 20)
                .unwrap()
                .filter(|p| keep(p)),
        )
        .unwrap()
    }

    /// Exhaustive oracle: every partial partition built from member blocks.
    fn brute_tau(members: &[Partition], t: usize) -> usize {
        let cands = candidate_blocks(members);
        let mut best = usize::MAX;
        let ground = members[0].ground();
        for mask in 0u32..(1 << cands.len()) {
            let chosen: Vec<Block> = (0..cands.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| cands[i])
                .collect();
            if let Ok(p) = Partition::partial(ground, chosen) {
                if covers_all(&p, members, t) {
                    best = best.min(p.len());
                }
            }
        }
        best
    }

    #[test]
    fn trivial_family_has_tau_t() {
        let x = first_singletons(g(6), 1).unwrap();
        let fam = family(6, 3, |p| x.is_subset_of(p));
        let r = tau_t(&fam, 1, true).unwrap();
        assert_eq!(r.tau, 1);
        assert_eq!(r.witnesses, vec![x]);
    }

    #[test]
    fn d_family_needs_two_blocks() {
        let tt = first_singletons(g(6), 2).unwrap();
        let fam = family(6, 3, |p| p.shared_count(&tt) >= 1);
        assert_eq!(fam.len(), 29);
        let r = tau_t(&fam, 1, true).unwrap();
        assert_eq!(r.tau, 2);
        assert!(r.witnesses.contains(&tt));
        for w in &r.witnesses {
            assert!(is_t_cover(w, &fam, 1).unwrap());
        }
        assert!(!is_t_cover(&parse_partition(g(6), "{1}").unwrap(), &fam, 1).unwrap());
    }

    #[test]
    fn singleton_family() {
        let p = parse_partition(g(5), "{1,2|3|4,5}").unwrap();
        let fam = Family::new(g(5), 3, vec![p]).unwrap();
        let r = tau_t(&fam, 2, true).unwrap();
        assert_eq!(r.tau, 2);
        assert_eq!(r.witnesses.len(), 3);
    }

    #[test]
    fn min_covers_sizes() {
        let x = first_singletons(g(6), 1).unwrap();
        let fam = family(6, 3, |p| x.is_subset_of(p));
        assert_eq!(min_covers(&fam, 1, 1).unwrap(), vec![x.clone()]);
        assert!(min_covers(&fam, 2, 1).unwrap().is_empty());
        let c = family(6, 3, |p| first_singletons(g(6), 2).unwrap().is_subset_of(p));
        let two = min_covers(&c, 1, 2).unwrap();
        assert!(two.contains(&first_singletons(g(6), 2).unwrap()));
        for w in &two {
            assert_eq!(w.len(), 2);
            assert!(is_t_cover(w, &c, 1).unwrap());
        }
    }

    #[test]
    fn matches_brute_force_on_small_families() {
        let ground = g(5);
        let all: Vec<Partition> = enumerate_partitions(ground, 3, 100).unwrap().collect();
        // Sliding windows give a spread of families, intersecting or not.
        for start in 0..all.len() {
            for len in 1..=4 {
                let members: Vec<Partition> =
                    all.iter().cycle().skip(start).take(len).cloned().collect();
                for t in 1..=2 {
                    let expect = brute_tau(&members, t);
                    match tau_of_members(&members, t, false) {
                        Ok(r) => assert_eq!(r.tau, expect),
                        Err(Error::NoCover) => assert_eq!(expect, usize::MAX),
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn empty_family_is_an_error() {
        let fam = Family::empty(g(4), 2);
        assert_eq!(tau_t(&fam, 1, false), Err(Error::EmptyFamily));
        assert!(is_t_cover(&Partition::empty(g(4)), &fam, 1).is_err());
    }
}
