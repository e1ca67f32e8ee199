use std::collections::HashSet;

use partx_core::covers::{tau_of_members, tau_t};
use partx_core::partition::common_blocks;
use partx_core::search::{
    dual, enumerate_maximal_pairs, materialize_g, min_shared_over_choices, s_values, seeded_search,
    tuple_seeded_search, DualContext, SeededConfig, TupleContext,
};
use partx_core::{stirling, universe, BigCount, Family, GroundSet, Partition};
use proptest::prelude::*;
use proptest::sample::subsequence;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET: u64 = 10_000_000;

fn g(n: usize) -> GroundSet {
    GroundSet::new(n).unwrap()
}

fn subfamily(u: &Family, picks: &[usize]) -> Family {
    Family::new(
        u.ground(),
        u.k(),
        picks.iter().map(|&i| u.members()[i].clone()),
    )
    .unwrap()
}

/// `(n, k, l, t)` grids small enough to enumerate.
fn grid() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (4usize..=7)
        .prop_flat_map(|n| (Just(n), 2..=n.min(4), 2..=n.min(4), 1usize..=2))
        .prop_filter("t below both ranks", |&(_, k, l, t)| t < k && t < l)
}

fn family_in(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    let size = universe(g(n), k, BUDGET).unwrap().len();
    subsequence((0..size).collect::<Vec<_>>(), 1..=size.min(12))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn stirling_recurrence(n in 1i64..60, k in 1i64..60) {
        prop_assume!(k <= n);
        let lhs = stirling(n, k);
        let rhs = BigCount::from(k as u64) * stirling(n - 1, k) + stirling(n - 1, k - 1);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rgs_round_trip(n in 1usize..=8, k in 1usize..=8, idx in any::<prop::sample::Index>()) {
        prop_assume!(k <= n);
        let u = universe(g(n), k, BUDGET).unwrap();
        let p = &u.members()[idx.index(u.len())];
        prop_assert_eq!(&Partition::from_rgs(g(n), &p.rgs()).unwrap(), p);
        prop_assert_eq!(p.len(), k);
    }

    #[test]
    fn shared_count_symmetric(n in 2usize..=8, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let u = universe(g(n), 2.min(n), BUDGET).unwrap();
        let v = universe(g(n), n.min(3), BUDGET).unwrap();
        let a = &u.members()[i.index(u.len())];
        let b = &v.members()[j.index(v.len())];
        prop_assert_eq!(a.shared_count(b), b.shared_count(a));
        prop_assert!(a.shared_count(b) <= a.len().min(b.len()));
        prop_assert_eq!(a.shared_blocks(b).unwrap().len(), a.shared_count(b));
    }

    #[test]
    fn duality_is_antitone_and_closes(
        ((n, k, l, t), picks) in grid().prop_flat_map(|p| (Just(p), family_in(p.0, p.1)))
    ) {
        let u = universe(g(n), k, BUDGET).unwrap();
        let f2 = subfamily(&u, &picks);
        let f1 = subfamily(&u, &picks[..picks.len().div_ceil(2)]);
        let d1 = dual(&f1, l, t, BUDGET).unwrap();
        let d2 = dual(&f2, l, t, BUDGET).unwrap();
        prop_assert!(d2.is_subset_of(&d1));
        let dd = dual(&d2, k, t, BUDGET).unwrap();
        prop_assert!(f2.is_subset_of(&dd));
        prop_assert_eq!(dual(&dd, l, t, BUDGET).unwrap(), d2);
    }

    #[test]
    fn min_shared_matches_brute_force(
        n in 3usize..=5,
        k in 2usize..=4,
        seeds in prop::collection::vec((1usize..=5, any::<prop::sample::Index>(), 1usize..=6), 1..=3),
        pick in any::<prop::sample::Index>(),
    ) {
        prop_assume!(k <= n);
        let f = universe(g(n), k, BUDGET).unwrap();
        let p = &f.members()[pick.index(f.len())];
        let others: Vec<Family> = seeds
            .iter()
            .map(|&(kj, start, size)| {
                let kj = kj.min(n);
                let u = universe(g(n), kj, BUDGET).unwrap();
                let s = start.index(u.len());
                let picks: Vec<usize> = (0..size.min(u.len())).map(|d| (s + d) % u.len()).collect();
                subfamily(&u, &picks)
            })
            .collect();
        let refs: Vec<&Family> = others.iter().collect();
        let brute = brute_min_shared(p, &others);
        prop_assert_eq!(min_shared_over_choices(p, &refs).unwrap(), brute);
    }
}

fn brute_min_shared(p: &Partition, others: &[Family]) -> usize {
    let mut best = usize::MAX;
    let mut choice = vec![0usize; others.len()];
    'outer: loop {
        let common = p
            .blocks()
            .iter()
            .filter(|b| {
                choice
                    .iter()
                    .zip(others)
                    .all(|(&c, fam)| fam.members()[c].contains_block(b))
            })
            .count();
        best = best.min(common);
        for (i, c) in choice.iter_mut().enumerate() {
            *c += 1;
            if *c < others[i].len() {
                continue 'outer;
            }
            *c = 0;
        }
        return best;
    }
}

fn trivial(f: &Family, g: &Family, t: usize) -> bool {
    common_blocks(&[f, g]).unwrap().len() >= t
}

#[test]
fn maximal_pairs_are_mutual_duals_and_trivial_iff_tau_is_t() {
    let t = 1;
    for n in 5..=6 {
        for k in 2..=3 {
            for l in 2..=3 {
                let ctx = DualContext::new(g(n), k, l, t, BUDGET).unwrap();
                let mut pairs = enumerate_maximal_pairs(&ctx, BUDGET);
                let mut seen = 0;
                while let Some((fm, gm)) = pairs.next_masks() {
                    let (f, gf) = (ctx.family_f(&fm), ctx.family_g(&gm));
                    if f.is_empty() || gf.is_empty() {
                        continue;
                    }
                    assert_eq!(dual(&gf, k, t, BUDGET).unwrap(), f);
                    assert_eq!(dual(&f, l, t, BUDGET).unwrap(), gf);
                    let tau_f = tau_t(&f, t, false).unwrap().tau;
                    let tau_g = tau_t(&gf, t, false).unwrap().tau;
                    assert_eq!(
                        trivial(&f, &gf, t),
                        tau_f == t && tau_g == t,
                        "n={n} k={k} l={l} F={f:?} G={gf:?}"
                    );
                    seen += 1;
                }
                assert!(pairs.certificate().complete, "n={n} k={k} l={l}");
                assert!(seen > 0);
            }
        }
    }
}

/// Grows a random non-trivial r-cross t-intersecting tuple one member at a
/// time, then completes it to a maximal tuple.
fn random_nontrivial_tuple(ctx: &TupleContext, rng: &mut ChaCha8Rng) -> Option<Vec<Family>> {
    let (ks, t) = (ctx.ks(), ctx.t());
    let mut fams: Vec<Family> = ks.iter().map(|&k| Family::empty(ctx.ground(), k)).collect();
    for step in 0..30 {
        let i = if step < ks.len() {
            step
        } else {
            rng.gen_range(0..ks.len())
        };
        let room: Vec<Partition> = ctx
            .tuple_dual(i, &fams)
            .unwrap()
            .iter()
            .filter(|p| !fams[i].contains(p))
            .cloned()
            .collect();
        if room.is_empty() {
            continue;
        }
        let p = room[rng.gen_range(0..room.len())].clone();
        fams[i] = fams[i]
            .union(&Family::new(ctx.ground(), ks[i], [p]).unwrap())
            .unwrap();
        if fams.iter().any(Family::is_empty) {
            continue;
        }
        let refs: Vec<&Family> = fams.iter().collect();
        if common_blocks(&refs).unwrap().len() < t {
            let out = ctx.maximize(fams, 0).unwrap();
            assert_eq!(out.cycle, None);
            return Some(out.families);
        }
    }
    None
}

#[test]
fn toy_tuples_and_their_cover_families() {
    let t = 1;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut tuples, mut tight, mut all_tight) = (0, 0, 0);
    for (n, ks) in [
        (5, [3, 3, 3]),
        (6, [3, 3, 3]),
        (6, [4, 3, 3]),
        (6, [4, 4, 3]),
        (6, [4, 4, 4]),
    ] {
        let ctx = TupleContext::new(g(n), &ks, t, BUDGET).unwrap();
        let mut seen = HashSet::new();
        for _ in 0..150 {
            let Some(fams) = random_nontrivial_tuple(&ctx, &mut rng) else {
                continue;
            };
            if !seen.insert(
                fams.iter()
                    .map(|f| f.members().to_vec())
                    .collect::<Vec<_>>(),
            ) {
                continue;
            }
            let refs: Vec<&Family> = fams.iter().collect();
            assert!(ctx.is_tuple_maximal(&fams).unwrap());
            assert!(common_blocks(&refs).unwrap().len() < t);
            let s = s_values(&refs).unwrap();
            let covers: Vec<usize> = (0..ks.len())
                .map(|i| {
                    tau_of_members(&materialize_g(i, &refs, 100_000).unwrap(), t, false)
                        .unwrap()
                        .tau
                })
                .collect();
            for i in 0..ks.len() {
                if s[i] == t {
                    assert!(covers[i] > t, "n={n} ks={ks:?} s={s:?} index {i}");
                    tight += 1;
                }
            }
            if s.iter().all(|&x| x == t) {
                for (i, f) in fams.iter().enumerate() {
                    assert_eq!(
                        tau_t(f, t, false).unwrap().tau,
                        t,
                        "n={n} ks={ks:?} index {i}"
                    );
                    assert!(covers[i] >= t + 2, "n={n} ks={ks:?} index {i}");
                }
                all_tight += 1;
            }
            tuples += 1;
        }
    }
    println!("{tuples} maximal tuples, {tight} indices with s_i = t, {all_tight} tuples with every s_i = t");
    assert!(tight > 0);
}

#[test]
fn seeded_search_is_deterministic() {
    let ctx = DualContext::new(g(7), 3, 3, 1, BUDGET).unwrap();
    let config = SeededConfig {
        seed: 11,
        random_draws: 200,
        ..SeededConfig::default()
    };
    let a = seeded_search(&ctx, &config).unwrap();
    let b = seeded_search(&ctx, &config).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert!(!a.exhaustive);

    let tctx = TupleContext::new(g(6), &[3, 3, 3], 1, BUDGET).unwrap();
    let config = SeededConfig {
        seed: 5,
        random_draws: 30,
        nontrivial: true,
        ..SeededConfig::default()
    };
    let a = tuple_seeded_search(&tctx, &config).unwrap();
    let b = tuple_seeded_search(&tctx, &config).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn cover_numbers_of_standard_families() {
    for (n, k, t) in [(6, 3, 1), (7, 4, 2), (7, 3, 1)] {
        let c = partx_core::constructions::ConstructionSpec::c_default(g(n), k, t)
            .unwrap()
            .enumerate(BUDGET)
            .unwrap();
        let d = partx_core::constructions::ConstructionSpec::d_default(g(n), k, t)
            .unwrap()
            .enumerate(BUDGET)
            .unwrap();
        assert_eq!(tau_t(&c, t, false).unwrap().tau, t);
        assert_eq!(tau_t(&d, t, false).unwrap().tau, t + 1);
        let sub = Family::new(g(n), k, d.members()[..1].iter().cloned()).unwrap();
        assert!(tau_t(&sub, t, false).unwrap().tau <= tau_t(&d, t, false).unwrap().tau);
    }
}
