//! Isomorphism of families (and tuples of families) under permutations of `[n]`.
//!
//! The canonical form is the lexicographically least sorted list of member
//! restricted growth strings over all relabelings that respect an element
//! invariant. The invariant of an element is, per family, the sorted multiset
//! of sizes of the blocks containing it. Relabelings send the elements of the
//! i-th invariant class (classes ordered by invariant) onto the i-th range of
//! new labels, so two isomorphic inputs search the same set of targets.

use crate::error::{Error, Result};
use crate::partition::{Family, Partition};

/// Upper limit on relabelings tried before giving up.
pub const MAX_RELABELINGS: u64 = 2_000_000;

/// Canonical encoding: one sorted list of restricted growth strings per family.
pub type CanonicalForm = Vec<Vec<Vec<u8>>>;

fn element_invariants(families: &[&Family]) -> Vec<Vec<Vec<usize>>> {
    let n = families[0].ground().n();
    (1..=n)
        .map(|e| {
            families
                .iter()
                .map(|f| {
                    let mut sizes: Vec<usize> = f
                        .iter()
                        .map(|p| {
                            p.blocks()
                                .iter()
                                .find(|b| b.contains(e))
                                .map_or(0, |b| b.len())
                        })
                        .collect();
                    sizes.sort_unstable();
                    sizes
                })
                .collect()
        })
        .collect()
}

fn encode(families: &[&Family], perm: &[usize]) -> CanonicalForm {
    families
        .iter()
        .map(|f| {
            let mut v: Vec<Vec<u8>> = f
                .iter()
                .map(|p: &Partition| p.relabel(perm).rgs())
                .collect();
            v.sort_unstable();
            v
        })
        .collect()
}

/// Canonical form of a tuple of families over one ground set.
pub fn canonical_form_tuple(families: &[&Family]) -> Result<CanonicalForm> {
    let first = families.first().ok_or(Error::EmptyFamily)?;
    let n = first.ground().n();
    for f in families {
        if f.ground() != first.ground() {
            return Err(Error::GroundMismatch {
                left: n,
                right: f.ground().n(),
            });
        }
    }
    let inv = element_invariants(families);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
    // Classes of equal invariant, as runs of `order`.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &e in &order {
        match classes.last_mut() {
            Some(c) if inv[c[0]] == inv[e] => c.push(e),
            _ => classes.push(vec![e]),
        }
    }
    let count = classes.iter().try_fold(1u64, |acc, c| {
        (1..=c.len() as u64)
            .try_fold(acc, |a, x| a.checked_mul(x))
            .filter(|&v| v <= MAX_RELABELINGS)
    });
    if count.is_none() {
        return Err(Error::SearchTooLarge(format!(
            "more than {MAX_RELABELINGS} relabelings needed"
        )));
    }
    let mut perm = vec![0usize; n];
    let mut best: Option<CanonicalForm> = None;
    let mut class_perms: Vec<Vec<usize>> = classes.clone();
    search(
        families,
        &classes,
        &mut class_perms,
        0,
        &mut perm,
        &mut best,
    );
    Ok(best.expect("at least one relabeling"))
}

/// Enumerates per-class orderings; `class_perms[c]` lists the elements of class
/// `c` in the order they receive the class's consecutive new labels.
fn search(
    families: &[&Family],
    classes: &[Vec<usize>],
    class_perms: &mut [Vec<usize>],
    c: usize,
    perm: &mut [usize],
    best: &mut Option<CanonicalForm>,
) {
    if c == classes.len() {
        let mut label = 1;
        for cp in class_perms.iter() {
            for &e in cp {
                perm[e] = label;
                label += 1;
            }
        }
        let enc = encode(families, perm);
        if best.as_ref().is_none_or(|b| enc < *b) {
            *best = Some(enc);
        }
        return;
    }
    heap_permutations(class_perms, c, classes[c].len(), &mut |cps| {
        search(families, classes, cps, c + 1, perm, best)
    });
}

/// Heap's algorithm over `cps[c]`, calling `visit` once per ordering.
fn heap_permutations(
    cps: &mut [Vec<usize>],
    c: usize,
    k: usize,
    visit: &mut dyn FnMut(&mut [Vec<usize>]),
) {
    if k <= 1 {
        visit(cps);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(cps, c, k - 1, visit);
        if k.is_multiple_of(2) {
            cps[c].swap(i, k - 1);
        } else {
            cps[c].swap(0, k - 1);
        }
    }
    heap_permutations(cps, c, k - 1, visit);
}

pub fn canonical_form(fam: &Family) -> Result<CanonicalForm> {
    canonical_form_tuple(&[fam])
}

pub fn are_isomorphic(f1: &Family, f2: &Family) -> Result<bool> {
    are_isomorphic_tuples(&[f1], &[f2])
}

/// True if a single permutation of `[n]` maps each family of `a` onto the
/// corresponding family of `b`.
pub fn are_isomorphic_tuples(a: &[&Family], b: &[&Family]) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    for (x, y) in a.iter().zip(b) {
        if x.ground() != y.ground() {
            return Err(Error::GroundMismatch {
                left: x.ground().n(),
                right: y.ground().n(),
            });
        }
        if x.k() != y.k() || x.len() != y.len() {
            return Ok(false);
        }
    }
    Ok(canonical_form_tuple(a)? == canonical_form_tuple(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{enumerate_partitions, singletons_of, GroundSet};

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn containing(n: usize, k: usize, x: &Partition) -> Family {
        let ground = g(n);
        Family::new(
            ground,
            k,
            enumerate_partitions(ground, k, 1 << 20)
                .unwrap()
                .filter(|p| x.is_subset_of(p)),
        )
        .unwrap()
    }

    #[test]
    fn relabeled_families_are_isomorphic() {
        let a = containing(6, 3, &singletons_of(g(6), [1, 2]).unwrap());
        let b = containing(6, 3, &singletons_of(g(6), [2, 3]).unwrap());
        assert!(are_isomorphic(&a, &b).unwrap());
        assert!(are_isomorphic(&a, &a).unwrap());
        let perm = [4, 6, 1, 5, 2, 3];
        assert!(are_isomorphic(&a, &a.relabel(&perm)).unwrap());
        assert_eq!(
            canonical_form(&a).unwrap(),
            canonical_form(&a.relabel(&perm)).unwrap()
        );
    }

    #[test]
    fn different_families_are_not() {
        let ground = g(6);
        let tt = singletons_of(ground, [1, 2]).unwrap();
        let c = containing(6, 3, &tt);
        let d = Family::new(
            ground,
            3,
            enumerate_partitions(ground, 3, 1000)
                .unwrap()
                .filter(|p| p.shared_count(&tt) >= 1),
        )
        .unwrap();
        assert!(!are_isomorphic(&c, &d).unwrap());
        // Same size, different structure: {1} together with {2} vs {1} with {2,3}.
        let x = containing(6, 3, &singletons_of(ground, [1, 2]).unwrap());
        let y = containing(
            6,
            3,
            &crate::format::parse_partition(ground, "{1|2,3,4}").unwrap(),
        );
        assert_eq!(x.len(), y.len());
        assert!(!are_isomorphic(&x, &y).unwrap());
    }

    #[test]
    fn tuples_use_one_permutation() {
        let ground = g(5);
        let a = containing(5, 3, &singletons_of(ground, [1]).unwrap());
        let b = containing(5, 3, &singletons_of(ground, [2]).unwrap());
        assert!(are_isomorphic_tuples(&[&a, &a], &[&b, &b]).unwrap());
        assert!(!are_isomorphic_tuples(&[&a, &a], &[&a, &b]).unwrap());
    }

    #[test]
    fn mismatched_grounds_error() {
        let a = containing(5, 3, &singletons_of(g(5), [1]).unwrap());
        let b = containing(6, 3, &singletons_of(g(6), [1]).unwrap());
        assert!(are_isomorphic(&a, &b).is_err());
    }
}
