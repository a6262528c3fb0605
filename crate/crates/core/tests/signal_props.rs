use chronosynth_core::sample;
use chronosynth_core::signal::{
    decode_fv, encode_d, fixture_g, is_stuttering_free, reparameterize, reparameterize_samples, stutter_normalize,
    stuttering_equivalent, FvSignal, SampleSequence,
};
use chronosynth_core::time::{ratio, Time};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DEN: i64 = 4;

fn grid(limit: i64) -> impl Iterator<Item = Time> {
    (0..=limit * 2 * DEN).map(|k| ratio(k, 2 * DEN))
}

fn first_difference(a: &FvSignal<u8>, b: &FvSignal<u8>) -> Option<Time> {
    grid(30).find(|t| a.value_at(t).unwrap() != b.value_at(t).unwrap())
}

/// Infimum of the set where the two signals differ.
fn agree_until(a: &FvSignal<u8>, b: &FvSignal<u8>) -> Option<Time> {
    let t = first_difference(a, b)?;
    let on_grid = (&t * Time::from_integer(DEN.into())).is_integer();
    Some(if on_grid { t } else { t - ratio(1, 2 * DEN) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn encode_decode_roundtrip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sample::signal(&mut rng, 4, DEN);
        let tau = SampleSequence::uniform(ratio(1, DEN)).unwrap();
        let w = encode_d(&s, &tau).unwrap();
        prop_assert!(decode_fv(&w, &tau).semantically_equal(&s));
    }

    #[test]
    fn refining_samples_only_stutters(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sample::signal(&mut rng, 4, DEN);
        let coarse = encode_d(&s, &SampleSequence::uniform(ratio(1, DEN)).unwrap()).unwrap();
        let fine = encode_d(&s, &SampleSequence::uniform(ratio(1, 3 * DEN)).unwrap()).unwrap();
        prop_assert!(stuttering_equivalent(&coarse, &fine));
    }

    #[test]
    fn normal_form_is_canonical(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sample::signal(&mut rng, 4, DEN);
        let w = encode_d(&s, &SampleSequence::uniform(ratio(1, DEN)).unwrap()).unwrap();
        let n = stutter_normalize(&w);
        prop_assert!(is_stuttering_free(&n));
        prop_assert_eq!(stutter_normalize(&n), n.clone());
        if is_stuttering_free(&w) {
            prop_assert!(w.same_word(&n));
        }
    }

    #[test]
    fn reparameterizing_keeps_the_word(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sample::signal(&mut rng, 4, DEN);
        let tau = SampleSequence::uniform(ratio(1, DEN)).unwrap();
        let rho = sample::time_map(&mut rng, 3);
        let w = encode_d(&s, &tau).unwrap();
        let moved = encode_d(&reparameterize(&s, &rho), &reparameterize_samples(&tau, &rho)).unwrap();
        prop_assert!(w.same_word(&moved));
    }

    #[test]
    fn g_is_strongly_causal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y1 = sample::signal(&mut rng, 2, DEN);
        let y2 = sample::signal(&mut rng, 2, DEN);
        let (g1, g2) = (fixture_g(&y1), fixture_g(&y2));
        match agree_until(&y1, &y2) {
            None => prop_assert_eq!(first_difference(&g1, &g2), None),
            Some(t) => {
                for s in grid(30).take_while(|s| *s <= t) {
                    prop_assert_eq!(g1.value_at(&s).unwrap(), g2.value_at(&s).unwrap());
                }
            }
        }
    }

    #[test]
    fn g_has_no_fixed_point(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = sample::signal(&mut rng, 4, DEN);
        prop_assert!(first_difference(&y, &fixture_g(&y)).is_some());
    }
}
