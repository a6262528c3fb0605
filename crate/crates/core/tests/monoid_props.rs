use std::collections::BTreeSet;

use chronosynth_core::automaton::EdgeContext;
use chronosynth_core::sample;
use chronosynth_core::state_monoid::{
    build_class_table, build_up, naive_equiv, product, ramsey_factorize, signature_of, TableScope,
};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx_for(seed: u64, n: usize) -> EdgeContext {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample::edge_context(&mut rng, n, 2, 55)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn signature_matches_definition(
        seed in any::<u64>(),
        u in prop::collection::vec(0usize..3, 1..7),
        v in prop::collection::vec(0usize..3, 1..7),
    ) {
        let ctx = ctx_for(seed, 3);
        let same = signature_of(&u, &ctx).unwrap() == signature_of(&v, &ctx).unwrap();
        prop_assert_eq!(same, naive_equiv(&u, &v, &ctx));
    }

    #[test]
    fn product_is_concatenation(
        seed in any::<u64>(),
        u in prop::collection::vec(0usize..3, 1..7),
        v in prop::collection::vec(0usize..3, 1..7),
    ) {
        let ctx = ctx_for(seed, 3);
        let uv: Vec<usize> = u.iter().chain(&v).copied().collect();
        let p = product(&signature_of(&u, &ctx).unwrap(), &signature_of(&v, &ctx).unwrap(), &ctx).unwrap();
        prop_assert_eq!(p, signature_of(&uv, &ctx).unwrap());
    }

    #[test]
    fn ramsey_blocks_are_idempotent(seed in any::<u64>(), u in prop::collection::vec(0usize..3, 0..5), v in prop::collection::vec(0usize..3, 1..5)) {
        let ctx = ctx_for(seed, 3);
        let w = chronosynth_core::LassoWord::new(u, v).unwrap();
        let f = ramsey_factorize(&w, &ctx).unwrap();
        let e = signature_of(&f.block, &ctx).unwrap();
        prop_assert_eq!(product(&e, &e, &ctx).unwrap(), e.clone());
        let h = signature_of(&f.head, &ctx).unwrap();
        prop_assert_eq!(product(&h, &e, &ctx).unwrap(), h);
        let unrolled: Vec<usize> = f.head.iter().chain(&f.block).chain(&f.block).copied().collect();
        prop_assert_eq!(&unrolled[..], &w.unfold(unrolled.len())[..]);
    }
}

/// Positions beyond the lag: every state seen is already in the lag, and
/// prefixes ending in the same state are equivalent.
#[test]
fn later_positions_are_interchangeable() {
    for seed in 0..6 {
        let ctx = ctx_for(seed, 3);
        let table = build_class_table(&ctx, TableScope::All, 200_000).unwrap();
        let up = build_up(&table);
        for m in up.members.iter().step_by(7) {
            let n = m.lag.len();
            let s_u: BTreeSet<usize> = m.lag.iter().copied().collect();
            let limit = n + 3 * m.period.len();
            let word: Vec<usize> = (1..=limit).map(|i| m.at(i)).collect();
            for l in n..=limit {
                let seen: BTreeSet<usize> = word[..l].iter().copied().collect();
                assert_eq!(seen, s_u);
            }
            for l in n + 1..=limit {
                for l2 in l + 1..=limit {
                    if word[l - 1] == word[l2 - 1] {
                        assert_eq!(signature_of(&word[..l], &ctx).unwrap(), signature_of(&word[..l2], &ctx).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn class_count_grows_with_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let small = sample::edge_context(&mut rng, 2, 2, 50);
        // Extend by one state, keeping the old relations among old states.
        let mut adj = Vec::new();
        for a in 0..2 {
            for q in 0..3 {
                let old = if q < 2 { small.successors(a, q) } else { 0 };
                adj.push(old | (u64::from(rand_chacha::rand_core::RngCore::next_u32(&mut rng) % 2) << 2));
            }
        }
        let big = EdgeContext::new(3, 2, adj);
        let c2 = build_class_table(&small, TableScope::All, 200_000).unwrap().len();
        let c3 = build_class_table(&big, TableScope::All, 200_000).unwrap().len();
        assert!(c3 >= c2);
    }
}
