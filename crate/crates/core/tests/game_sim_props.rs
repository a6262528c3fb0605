use chronosynth_core::arena::{arena_for_spec, EdgeSize, NodeKind};
use chronosynth_core::automaton::Convention;
use chronosynth_core::game_sim::{
    interrupt_along, run_play, zeno_bound, ChoicePlayer, IMove, InputPlayer, PlayState, RandomInput,
};
use chronosynth_core::{sample, Arena, Semantics};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_arena(rng: &mut ChaCha8Rng, sem: Semantics) -> Arena {
    let states = 1 + sample::below(rng, 3);
    arena_for_spec(&sample::automaton(rng, states, 2, 2, 3, Convention::MaxEven), sem, 100_000).unwrap()
}

fn first_choice(ar: &Arena) -> ChoicePlayer {
    ChoicePlayer { choice: (0..ar.num_nodes()).map(|v| ar.out[v].first().copied()).collect() }
}

/// Interrupts as early as possible along small edges only.
struct SmallOnly;

impl InputPlayer for SmallOnly {
    fn choose(&mut self, play: &PlayState) -> IMove {
        let ar = play.arena();
        let v = play.node();
        if matches!(ar.nodes[v], NodeKind::Up { .. }) {
            match ar.out[v].iter().find(|&&e| ar.edges[e].size == EdgeSize::Small) {
                Some(&e) => interrupt_along(play, e, false),
                None => IMove::Accept,
            }
        } else {
            IMove::Choose { edge: ar.out[v][0] }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn small_tails_are_zeno(seed in any::<u64>(), fv in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sem = if fv { Semantics::Fv } else { Semantics::Rc };
        let arena = random_arena(&mut rng, sem);
        let play = run_play(&arena, &mut first_choice(&arena), &mut SmallOnly, 120).unwrap();
        let end = play.time();
        let mut j = 0;
        for s in play.trace() {
            if s.scale.is_some() {
                prop_assert!(end - &s.time <= zeno_bound(arena.up.d_q, j));
                j += 1;
            }
        }
    }

    #[test]
    fn timestamps_increase(seed in any::<u64>(), fv in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sem = if fv { Semantics::Fv } else { Semantics::Rc };
        let arena = random_arena(&mut rng, sem);
        let mut input = RandomInput::new(ChaCha8Rng::seed_from_u64(seed ^ 1), 10);
        let play = run_play(&arena, &mut first_choice(&arena), &mut input, 100).unwrap();
        let tr = play.trace();
        for w in tr.windows(2) {
            if w[1].offset.is_some() {
                prop_assert!(w[1].time > w[0].time);
            } else {
                prop_assert_eq!(&w[1].time, &w[0].time);
            }
        }
        for s in tr.iter().filter(|s| s.position.is_some()) {
            let e = &arena.edges[s.edge];
            let w = arena.up_word(e.from).unwrap();
            prop_assert!(s.position.unwrap() <= w.lag.len() + 2 * w.period.len());
            prop_assert_eq!(arena.nodes[e.to].state(), Some(w.at(s.position.unwrap())));
        }
    }
}
