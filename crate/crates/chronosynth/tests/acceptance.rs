//! Acceptance suite: one line per criterion, with pinned time limits.
//!
//! Runs without the libtest harness so that the report is always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use chronosynth_core::arena::{arena_for_spec, EdgeSize, NodeKind, Owner};
use chronosynth_core::automaton::{Convention, EdgeContext};
use chronosynth_core::continuous_synth::{enumerate_choices, find_loss_witness, witness_to_player, StrategyGraph};
use chronosynth_core::discrete_game::{brute_force_solve, run_counter, run_machine, solve, zielonka, DiscreteVerdict};
use chronosynth_core::game_sim::{
    adjudicate, interrupt_along, play_halving_interrupts, run_play, zeno_bound, ChoicePlayer, GuidedInput, IMove,
    InputPlayer, PlayState, RandomInput,
};
use chronosynth_core::omega_word::omega_equivalent;
use chronosynth_core::signal::{
    decode_fv, encode_d, fixture_g, is_stuttering_free, reparameterize, reparameterize_samples, stutter_normalize,
    FvSignal, SampleSequence,
};
use chronosynth_core::state_monoid::{build_class_table, build_up, naive_equiv, signature_of, TableScope};
use chronosynth_core::time::{pow2_inv, ratio, Time};
use chronosynth_core::{fixtures, sample, Arena, LassoWord, ParityAutomaton, Semantics};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Criterion {
    id: u8,
    title: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_strings(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut level = vec![Vec::new()];
    for _ in 0..max_len {
        level = level
            .iter()
            .flat_map(|s: &Vec<usize>| {
                (0..n).map(move |q| {
                    let mut t = s.clone();
                    t.push(q);
                    t
                })
            })
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

fn contexts(seed: u64, n: usize, count: usize) -> Vec<EdgeContext> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample::edge_context(&mut rng, n, 2, 55)).collect()
}

fn c1_monoid_oracle() -> Outcome {
    let strings = all_strings(3, 6);
    let mut pairs = 0u64;
    for (k, ctx) in contexts(101, 3, 5).iter().enumerate() {
        let sigs: Vec<_> = strings.iter().map(|s| signature_of(s, ctx).unwrap()).collect();
        for i in 0..strings.len() {
            for j in i..strings.len() {
                let fast = sigs[i] == sigs[j];
                let slow = naive_equiv(&strings[i], &strings[j], ctx);
                ensure(fast == slow, || format!("context {k}: {:?} vs {:?}", strings[i], strings[j]))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} unordered pairs over 5 contexts agree"))
}

fn lassos(n: usize) -> Vec<LassoWord<usize>> {
    let mut prefixes = vec![Vec::new()];
    prefixes.extend(all_strings(n, 3));
    let periods = all_strings(n, 3);
    let mut out = Vec::new();
    for u in &prefixes {
        for v in &periods {
            out.push(LassoWord::new(u.clone(), v.clone()).unwrap());
        }
    }
    out
}

fn c2_up_correctness() -> Outcome {
    let mut members = 0;
    let mut checked = 0;
    let mut ctxs = contexts(202, 3, 5);
    ctxs.extend(contexts(203, 2, 2));
    ctxs.extend(contexts(204, 1, 1));
    for (k, ctx) in ctxs.iter().enumerate() {
        let table = build_class_table(ctx, TableScope::All, 1 << 16).map_err(|e| e.to_string())?;
        let up = build_up(&table);
        for m in &up.members {
            let u = signature_of(&m.lag, ctx).unwrap();
            let v = signature_of(&m.period, ctx).unwrap();
            let vv: Vec<usize> = m.period.iter().chain(&m.period).copied().collect();
            let uv: Vec<usize> = m.lag.iter().chain(&m.period).copied().collect();
            ensure(signature_of(&vv, ctx).unwrap() == v, || format!("context {k}: vv != v for {m:?}"))?;
            ensure(signature_of(&uv, ctx).unwrap() == u, || format!("context {k}: uv != u for {m:?}"))?;
            ensure(m.lag.len() <= up.d_q && m.period.len() <= up.d_q, || {
                format!("context {k}: {m:?} exceeds d_Q={}", up.d_q)
            })?;
        }
        members += up.members.len();
        let words: Vec<LassoWord<usize>> = up.members.iter().map(|m| m.lasso()).collect();
        for w in lassos(ctx.num_states()) {
            ensure(words.iter().any(|m| omega_equivalent(&w, m, ctx)), || format!("context {k}: {w:?} uncovered"))?;
            checked += 1;
        }
    }
    Ok(format!("{} contexts, {members} members, {checked} lassos covered", ctxs.len()))
}

fn c3_discrete() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for k in 0..100 {
        let n = 1 + sample::below(&mut rng, 8);
        let g = sample::game(&mut rng, n, 4, 3);
        let z = zielonka(&g).map_err(|e| e.to_string())?.winner;
        let b = brute_force_solve(&g, 8, 1 << 20).map_err(|e| e.to_string())?;
        ensure(z == b, || format!("game {k}: zielonka {z:?} vs brute force {b:?}"))?;
    }
    let (mut mealy, mut counter) = (0, 0);
    for k in 0..40 {
        let a = sample::automaton(&mut rng, 1 + k % 3, 2, 2, 3, Convention::MaxEven);
        match solve(&a) {
            DiscreteVerdict::OutputWins(m) => {
                mealy += 1;
                for _ in 0..200 {
                    let x = sample::lasso(&mut rng, 4, 4, 2);
                    let y = run_machine(&m, &x);
                    ensure(a.accepts(&x.zip(&y)).unwrap(), || format!("spec {k}: Mealy loses on {x:?}"))?;
                }
            }
            DiscreteVerdict::InputWins(c) => {
                counter += 1;
                for _ in 0..200 {
                    let y = sample::lasso(&mut rng, 4, 4, 2);
                    let x = run_counter(&c, &y);
                    ensure(!a.accepts(&x.zip(&y)).unwrap(), || format!("spec {k}: counter loses on {y:?}"))?;
                }
            }
        }
    }
    Ok(format!("100 games agree; {mealy} Mealy and {counter} counter witnesses win 200 lassos each"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

fn cli_json(args: &[&str]) -> Result<serde_json::Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_chronosynth")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn c4_gap() -> Outcome {
    let path = |n: &str| fixture(n).to_string_lossy().into_owned();
    let definable = |n: &str| -> Result<bool, String> {
        Ok(cli_json(&["definable", &path(n)])?["definable"].as_bool().expect("bool"))
    };
    let synth = |n: &str, sem: &str| -> Result<bool, String> {
        Ok(cli_json(&["synth", &path(n), "--semantics", sem])?["realizable"].as_bool().expect("bool"))
    };
    let got = [
        ("definable psi_jump", definable("psi_jump")?, false),
        ("synth fv psi_jump", synth("psi_jump", "fv")?, true),
        ("definable psi_copy", definable("psi_copy")?, true),
        ("synth fv psi_copy", synth("psi_copy", "fv")?, true),
        ("synth rc psi_copy", synth("psi_copy", "rc")?, true),
        ("synth rc psi_indet_rc", synth("psi_indet_rc", "rc")?, false),
        ("synth fv psi_indet_fv", synth("psi_indet_fv", "fv")?, false),
    ];
    for (what, actual, expected) in got {
        ensure(actual == expected, || format!("{what}: got {actual}, expected {expected}"))?;
    }
    Ok(String::from("jump: definable NO, fv REALIZABLE; copy: YES throughout; indet: UNREALIZABLE"))
}

fn c5_example() -> Outcome {
    for h in 1..=64 {
        let e = play_halving_interrupts(h, true);
        let d = e.duration();
        ensure(*d == Time::from_integer(2.into()) - pow2_inv(h - 1), || format!("H={h}: duration {d}"))?;
        ensure(*d < Time::from_integer(2.into()), || format!("H={h}: duration {d} not below 2"))?;
        ensure(e.spec_holds(), || format!("H={h}: output never jumps on continuous input"))?;
    }
    let d10 = play_halving_interrupts(10, false).duration().clone();
    ensure(d10 == ratio(1023, 512), || format!("H=10: {d10}"))?;
    Ok(format!("durations 2-2^-(H-1) < 2 for H=1..64; H=10 gives {d10}"))
}

/// Interrupts as early as possible, along small edges only.
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

fn first_choice(ar: &Arena) -> ChoicePlayer {
    ChoicePlayer { choice: (0..ar.num_nodes()).map(|v| ar.out[v].first().copied()).collect() }
}

fn c6_zeno() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut comparisons = 0;
    for k in 0..50 {
        let sem = if k % 2 == 0 { Semantics::Rc } else { Semantics::Fv };
        let spec = sample::automaton(&mut rng, 1 + k % 3, 2, 2, 3, Convention::MaxEven);
        let arena = arena_for_spec(&spec, sem, 100_000).map_err(|e| e.to_string())?;
        let play = run_play(&arena, &mut first_choice(&arena), &mut SmallOnly, 120).map_err(|e| e.to_string())?;
        let end = play.time();
        let mut j = 0;
        for s in play.trace() {
            if s.scale.is_some() {
                let bound = zeno_bound(arena.up.d_q, j);
                ensure(end - &s.time <= bound, || format!("tail {k}, move {j}: {} > {bound}", end - &s.time))?;
                comparisons += 1;
                j += 1;
            }
        }
    }
    Ok(format!("50 tails, {comparisons} suffix durations within 2*d_Q*2^-j"))
}

const PLAYS: usize = 1000;
const CHOICE_LIMIT: usize = 24;
const STEP_CAP: usize = 60;

fn c7_strategy_check() -> Outcome {
    let mut specs: Vec<ParityAutomaton> =
        vec![fixtures::psi_copy(), fixtures::psi_true(), fixtures::psi_false(), fixtures::toggle()];
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    for k in 0..4 {
        specs.push(sample::automaton(&mut rng, 1 + k % 2, 2, 2, 3, Convention::MaxEven));
    }
    let (mut choices, mut winning, mut undecided) = (0, 0, 0);
    for (k, spec) in specs.iter().enumerate() {
        assert!(spec.num_states() <= 2);
        for sem in [Semantics::Rc, Semantics::Fv] {
            let arena = arena_for_spec(spec, sem, 100_000).map_err(|e| e.to_string())?;
            for c in enumerate_choices(&arena, CHOICE_LIMIT) {
                choices += 1;
                let g = StrategyGraph::new(&arena, c.clone());
                let witness = find_loss_witness(&g);
                let mut i_wins = false;
                for p in 0..PLAYS {
                    let mut o = witness_to_player(&c);
                    let play = match (&witness, p) {
                        (Some(w), 0) => {
                            let mut i = GuidedInput { path: w.path().to_vec(), cycle: w.cycle().to_vec() };
                            run_play(&arena, &mut o, &mut i, STEP_CAP)
                        }
                        _ => {
                            let mut i = RandomInput::new(ChaCha8Rng::seed_from_u64(p as u64), [0, 10, 50][p % 3]);
                            run_play(&arena, &mut o, &mut i, STEP_CAP)
                        }
                    }
                    .map_err(|e| format!("spec {k} {}: illegal move {e}", sem.name()))?;
                    match adjudicate(&play) {
                        Ok(out) => i_wins |= out.winner == Owner::Input,
                        Err(_) if witness.is_some() && p == 0 => {
                            return Err(format!("spec {k} {}: guided play undecided", sem.name()))
                        }
                        Err(_) => undecided += 1,
                    }
                }
                let verdict = witness.is_none();
                winning += verdict as usize;
                ensure(verdict != i_wins, || {
                    format!("spec {k} {}: check says winning={verdict}, simulation found I win={i_wins}", sem.name())
                })?;
            }
        }
    }
    Ok(format!("{choices} choices ({winning} winning) on {} specs x 2 semantics, {PLAYS} plays each, {undecided} undecided plays", specs.len()))
}

const DEN: i64 = 4;

fn grid(limit: i64) -> impl Iterator<Item = Time> {
    (0..=limit * 2 * DEN).map(|k| ratio(k, 2 * DEN))
}

fn first_difference(a: &FvSignal<u8>, b: &FvSignal<u8>) -> Option<Time> {
    grid(30).find(|t| a.value_at(t).unwrap() != b.value_at(t).unwrap())
}

fn c8_codec() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let tau = SampleSequence::uniform(ratio(1, DEN)).unwrap();
    let fine = SampleSequence::uniform(ratio(1, 3 * DEN)).unwrap();
    for k in 0..50 {
        let s = sample::signal(&mut rng, 4, DEN);
        let w = encode_d(&s, &tau).map_err(|e| e.to_string())?;
        ensure(decode_fv(&w, &tau).semantically_equal(&s), || format!("signal {k}: FV roundtrip"))?;
        let again = encode_d(&decode_fv(&w, &tau), &tau).map_err(|e| e.to_string())?;
        ensure(again.same_word(&w), || format!("signal {k}: D roundtrip"))?;
        let n = stutter_normalize(&w);
        ensure(is_stuttering_free(&n) && stutter_normalize(&n) == n, || {
            format!("signal {k}: normalization not idempotent")
        })?;
        let w_fine = encode_d(&s, &fine).map_err(|e| e.to_string())?;
        ensure(stutter_normalize(&w_fine).same_word(&n), || {
            format!("signal {k}: normal forms differ across samplings")
        })?;
        let rho = sample::time_map(&mut rng, 3);
        let moved =
            encode_d(&reparameterize(&s, &rho), &reparameterize_samples(&tau, &rho)).map_err(|e| e.to_string())?;
        ensure(moved.same_word(&w), || format!("signal {k}: reparameterization changed the word"))?;
    }
    Ok(String::from("50 signals: roundtrips, unique normal forms, 50 reparameterizations"))
}

fn c9_operator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for k in 0..200 {
        let y1 = sample::signal(&mut rng, 2, DEN);
        let y2 = sample::signal(&mut rng, 2, DEN);
        let (g1, g2) = (fixture_g(&y1), fixture_g(&y2));
        match first_difference(&y1, &y2) {
            None => {
                ensure(first_difference(&g1, &g2).is_none(), || format!("pair {k}: equal inputs, different outputs"))?
            }
            Some(t) => {
                // infimum of the disagreement set
                let on_grid = (&t * Time::from_integer(DEN.into())).is_integer();
                let inf = if on_grid { t } else { t - ratio(1, 2 * DEN) };
                for s in grid(30).take_while(|s| *s <= inf) {
                    ensure(g1.value_at(&s).unwrap() == g2.value_at(&s).unwrap(), || {
                        format!("pair {k}: outputs differ at {s}")
                    })?;
                }
            }
        }
    }
    for k in 0..200 {
        let y = sample::signal(&mut rng, 4, DEN);
        ensure(first_difference(&y, &fixture_g(&y)).is_some(), || format!("signal {k}: G(Y) = Y"))?;
    }
    Ok(String::from("strongly causal on 200 pairs; G(Y) != Y on 200 signals"))
}

const CRITERIA: [Criterion; 9] = [
    Criterion { id: 1, title: "monoid oracle equivalence", limit: secs(120), run: c1_monoid_oracle },
    Criterion { id: 2, title: "UP(Q) correctness", limit: secs(120), run: c2_up_correctness },
    Criterion { id: 3, title: "discrete solver", limit: secs(60), run: c3_discrete },
    Criterion { id: 4, title: "definable vs fv synthesis gap", limit: secs(300), run: c4_gap },
    Criterion { id: 5, title: "last-instant interrupts stay below 2", limit: secs(60), run: c5_example },
    Criterion { id: 6, title: "Zeno bound on small tails", limit: secs(60), run: c6_zeno },
    Criterion { id: 7, title: "strategy check vs simulation", limit: secs(600), run: c7_strategy_check },
    Criterion { id: 8, title: "codec laws", limit: secs(60), run: c8_codec },
    Criterion { id: 9, title: "operator G", limit: secs(60), run: c9_operator },
];

fn main() -> ExitCode {
    let only: Option<u8> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for c in CRITERIA.iter().filter(|c| only.is_none_or(|k| k == c.id)) {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err(String::from("panicked")));
        let took = start.elapsed();
        let result = match result {
            Ok(msg) if took > c.limit => Err(format!("{msg}; over the time limit")),
            r => r,
        };
        let (tag, msg) = match &result {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        failed += result.is_err() as usize;
        println!("criterion {} {tag} {}: {msg} [{:.1}s of {}s]", c.id, c.title, took.as_secs_f64(), c.limit.as_secs());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
