use std::collections::BTreeSet;

use chronosynth_core::automaton::Convention;
use chronosynth_core::sample;
use chronosynth_core::LassoWord;
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn all_words(letters: usize, max_len: usize, min_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut level = vec![Vec::new()];
    for len in 0..=max_len {
        if len >= min_len {
            out.extend(level.iter().cloned());
        }
        level = level
            .iter()
            .flat_map(|w| {
                (0..letters).map(move |a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn conversion_preserves_language(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let conv = if seed % 2 == 0 { Convention::MinEven } else { Convention::MaxEven };
        let a = sample::automaton(&mut rng, 3, 2, 2, 4, conv);
        let back = [a.convert_convention(Convention::MinEven), a.convert_convention(Convention::MaxEven)];
        let us = all_words(4, 3, 0);
        let vs = all_words(4, 3, 1);
        for u in &us {
            for v in &vs {
                let w = LassoWord::new(u.clone(), v.clone()).unwrap().map(|&x| (x / 2, x % 2));
                let expected = a.accepts(&w).unwrap();
                for b in &back {
                    prop_assert_eq!(b.accepts(&w).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn inf_matches_long_simulation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::automaton(&mut rng, 4, 2, 2, 3, Convention::MaxEven);
        for _ in 0..20 {
            let w = sample::pair_lasso(&mut rng, 3, 4, 2, 2);
            let run = a.run_over(&w).unwrap();
            prop_assert_eq!(&run, &a.run_over(&w).unwrap());
            let steps = 10 * (w.prefix().len() + w.period().len()) * a.num_states();
            let mut q = a.initial;
            let mut seen = Vec::with_capacity(steps);
            for i in 0..steps {
                let (x, y) = *w.at(i);
                seen.push(q);
                q = a.step(q, x, y);
            }
            let window = w.period().len() * a.num_states();
            let tail: BTreeSet<usize> = seen[steps - window..].iter().copied().collect();
            prop_assert_eq!(run.normalize().inf_set(), tail);
        }
    }
}
