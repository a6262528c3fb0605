//! Seeded fixture suites for the signal operators and the jump example.

use chronosynth_core::continuous_synth::decide_continuous;
use chronosynth_core::definable_synth::{solve_definable, to_d_alphabet, DefinableVerdict};
use chronosynth_core::discrete_game::{run_machine, MealyMachine};
use chronosynth_core::game_sim::play_halving_interrupts;
use chronosynth_core::sample::{self, below};
use chronosynth_core::signal::{decode_fv, delta_signal, encode_d, fixture_g, FvSignal, SampleSequence};
use chronosynth_core::time::{int, pow2_inv, ratio, Time};
use chronosynth_core::{fixtures, Semantics};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;

pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl SuiteResult {
    fn new(name: &'static str, outcome: Result<String, String>) -> Self {
        match outcome {
            Ok(detail) => SuiteResult { name, passed: true, detail },
            Err(detail) => SuiteResult { name, passed: false, detail },
        }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.passed { "ok" } else { "FAIL" }, self.name, self.detail)
    }
}

const DEN: i64 = 4;

fn grid_until(end: &Time) -> impl Iterator<Item = Time> {
    let end = end.clone();
    (0..).map(|k| ratio(k, 2 * DEN)).take_while(move |t| *t < end)
}

/// Mealy machine over the binary D-alphabet (letter `2·point + interval`).
pub fn random_d_mealy(rng: &mut impl RngCore, states: usize) -> MealyMachine {
    let d: Vec<String> = ["0:0", "0:1", "1:0", "1:1"].iter().map(|s| s.to_string()).collect();
    MealyMachine {
        states: (0..states).map(|i| format!("m{i}")).collect(),
        sigma_in: d.clone(),
        sigma_out: d,
        initial: 0,
        transition: (0..states * 4).map(|_| (below(rng, states), below(rng, 4))).collect(),
    }
}

pub fn apply_d_mealy(m: &MealyMachine, x: &FvSignal<u8>, tau: &SampleSequence) -> FvSignal<u8> {
    let w = encode_d(x, tau).expect("jumps on the sample grid");
    let y = run_machine(m, &w.map(|&(a, b)| a as usize * 2 + b as usize));
    decode_fv(&y.map(|&k| ((k / 2) as u8, (k % 2) as u8)), tau)
}

/// If `F(δ_1)` first jumps at `t < 1`, then `F(δ_t)` agrees with `F(δ_1)` on `[0,t)`.
pub fn delta_family(rng: &mut impl RngCore, machines: usize) -> Result<String, String> {
    let tau = SampleSequence::uniform(ratio(1, DEN)).expect("positive step");
    let mut early = 0;
    for i in 0..machines {
        let states = 1 + below(rng, 3);
        let m = random_d_mealy(rng, states);
        let y1 = apply_d_mealy(&m, &delta_signal(&int(1)), &tau);
        let Some(t) = y1.first_jump_after_zero().filter(|t| *t < int(1)) else { continue };
        early += 1;
        let yt = apply_d_mealy(&m, &delta_signal(&t), &tau);
        if let Some(s) = grid_until(&t).find(|s| y1.value_at(s) != yt.value_at(s)) {
            return Err(format!("machine {i}: F(δ_{t}) and F(δ_1) differ at {s} < {t}"));
        }
    }
    Ok(format!("{machines} machines, {early} with an early jump"))
}

fn first_difference(a: &FvSignal<u8>, b: &FvSignal<u8>, horizon: i64) -> Option<Time> {
    grid_until(&int(horizon)).find(|t| a.value_at(t).expect("t ≥ 0") != b.value_at(t).expect("t ≥ 0"))
}

/// Infimum of the set where the signals differ, on the `1/DEN` grid.
fn agree_until(a: &FvSignal<u8>, b: &FvSignal<u8>) -> Option<Time> {
    let t = first_difference(a, b, 40)?;
    let on_grid = (&t * int(DEN)).is_integer();
    Some(if on_grid { t } else { t - ratio(1, 2 * DEN) })
}

/// Agreement on `[0,t)` carries over to `G` on `[0,t]`.
pub fn g_causality(rng: &mut impl RngCore, pairs: usize) -> Result<String, String> {
    for i in 0..pairs {
        let y1 = sample::signal(rng, 2, DEN);
        let y2 = sample::signal(rng, 2, DEN);
        let (g1, g2) = (fixture_g(&y1), fixture_g(&y2));
        let bad = match agree_until(&y1, &y2) {
            None => first_difference(&g1, &g2, 40),
            Some(t) => grid_until(&(&t + ratio(1, 4 * DEN))).find(|s| g1.value_at(s) != g2.value_at(s)),
        };
        if let Some(s) = bad {
            return Err(format!("pair {i}: G outputs differ at {s}"));
        }
    }
    Ok(format!("{pairs} signal pairs"))
}

pub fn g_no_fixed_point(rng: &mut impl RngCore, signals: usize) -> Result<String, String> {
    for i in 0..signals {
        let y = sample::signal(rng, 4, DEN);
        if first_difference(&y, &fixture_g(&y), 40).is_none() {
            return Err(format!("signal {i} is a fixed point"));
        }
    }
    Ok(format!("{signals} signals"))
}

pub fn halving_interrupts(horizon: usize) -> Result<String, String> {
    for h in 1..=horizon {
        let ex = play_halving_interrupts(h, false);
        let want = int(2) - pow2_inv(h - 1);
        if *ex.duration() != want || ex.spec_holds() {
            return Err(format!(
                "{h} rounds: duration {} (want {want}), spec holds: {}",
                ex.duration(),
                ex.spec_holds()
            ));
        }
        if !play_halving_interrupts(h, true).spec_holds() {
            return Err(format!("{h} rounds then accept: output never jumps"));
        }
    }
    Ok(format!("durations 2 - 2^-(H-1) < 2 for H = 1..{horizon}"))
}

/// Not definable in discrete time, yet realizable over FV signals.
pub fn jump_gap(cfg: &Config) -> Result<String, String> {
    let jump = fixtures::psi_jump();
    let definable =
        matches!(solve_definable(&to_d_alphabet(&jump)).map_err(|e| e.to_string())?, DefinableVerdict::Definable(_));
    let fv = decide_continuous(&jump, Semantics::Fv, cfg.caps()).map_err(|e| e.to_string())?;
    if definable || !fv.realizable {
        return Err(format!("definable={definable} fv_realizable={}", fv.realizable));
    }
    Ok("definable=false fv_realizable=true".into())
}

pub fn run_all(cfg: &Config) -> Vec<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    vec![
        SuiteResult::new("delta-family", delta_family(&mut rng, 200)),
        SuiteResult::new("g-strong-causality", g_causality(&mut rng, 200)),
        SuiteResult::new("g-no-fixed-point", g_no_fixed_point(&mut rng, 200)),
        SuiteResult::new("halving-interrupts", halving_interrupts(cfg.horizon)),
        SuiteResult::new("jump-gap", jump_gap(cfg)),
    ]
}
