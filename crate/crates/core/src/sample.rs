//! Seeded random instances for property checks and fixture sweeps.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::automaton::{Convention, EdgeContext, ParityAutomaton};
use crate::discrete_game::{ParityGame, Player};
use crate::omega_word::LassoWord;
use crate::signal::{FvSignal, Piece, SampleSequence, Tail, TimeMap};
use crate::time::{self, Time};

/// Uniform-ish draw from `0..n`.
pub fn below(rng: &mut impl RngCore, n: usize) -> usize {
    assert!(n > 0);
    (rng.next_u64() % n as u64) as usize
}

pub fn coin(rng: &mut impl RngCore) -> bool {
    rng.next_u32() & 1 == 1
}

fn names(prefix: &str, n: usize) -> Vec<alloc::string::String> {
    (0..n).map(|i| alloc::format!("{prefix}{i}")).collect()
}

/// Total deterministic automaton with states `q0…`, letters `0…`.
pub fn automaton(
    rng: &mut impl RngCore,
    states: usize,
    nin: usize,
    nout: usize,
    max_priority: u32,
    convention: Convention,
) -> ParityAutomaton {
    let delta = (0..states * nin * nout).map(|_| below(rng, states)).collect();
    let priority = (0..states).map(|_| below(rng, max_priority as usize + 1) as u32).collect();
    let letters = |n| (0..n).map(|i: usize| alloc::format!("{i}")).collect();
    ParityAutomaton::from_parts(names("q", states), letters(nin), letters(nout), delta, 0, priority, convention)
        .expect("well-formed")
}

pub fn lasso(rng: &mut impl RngCore, max_prefix: usize, max_period: usize, letters: usize) -> LassoWord<usize> {
    let u = (0..below(rng, max_prefix + 1)).map(|_| below(rng, letters)).collect();
    let v = (0..1 + below(rng, max_period)).map(|_| below(rng, letters)).collect();
    LassoWord::new(u, v).expect("nonempty period")
}

pub fn pair_lasso(
    rng: &mut impl RngCore,
    max_prefix: usize,
    max_period: usize,
    nin: usize,
    nout: usize,
) -> LassoWord<(usize, usize)> {
    lasso(rng, max_prefix, max_period, nin * nout).map(|&x| (x / nout, x % nout))
}

/// Each edge present with probability `percent`/100.
pub fn edge_context(rng: &mut impl RngCore, n: usize, letters: usize, percent: u32) -> EdgeContext {
    let adj = (0..n * letters)
        .map(|_| (0..n).filter(|_| rng.next_u32() % 100 < percent).fold(0u64, |m, q| m | 1 << q))
        .collect();
    EdgeContext::new(n, letters, adj)
}

/// Every node has between 1 and `max_out` distinct successors.
pub fn game(rng: &mut impl RngCore, n: usize, max_priority: u32, max_out: usize) -> ParityGame {
    let owner = (0..n).map(|_| if coin(rng) { Player::Even } else { Player::Odd }).collect();
    let priority = (0..n).map(|_| below(rng, max_priority as usize + 1) as u32).collect();
    let succ = (0..n)
        .map(|_| {
            let k = 1 + below(rng, max_out.min(n));
            let mut s: Vec<usize> = (0..k).map(|_| below(rng, n)).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    ParityGame { owner, priority, succ }
}

/// Positive rational with denominator dividing `den`, in `(0, max]`.
fn step(rng: &mut impl RngCore, max_units: usize, den: i64) -> Time {
    time::ratio(1 + below(rng, max_units) as i64, den)
}

/// Binary FV signal: up to `pieces` prefix pieces, then a constant or
/// periodic tail, breakpoints on a grid of `1/den`.
pub fn signal(rng: &mut impl RngCore, pieces: usize, den: i64) -> FvSignal<u8> {
    let bit = |rng: &mut _| coin(rng) as u8;
    let k = below(rng, pieces + 1);
    let mut breakpoints = vec![time::zero()];
    for _ in 0..k {
        let t = breakpoints.last().expect("0") + step(rng, 4, den);
        breakpoints.push(t);
    }
    let points: Vec<u8> = (0..=k).map(|_| bit(rng)).collect();
    let intervals: Vec<u8> = (0..k).map(|_| bit(rng)).collect();
    let tail = if coin(rng) {
        Tail::Constant { point: points[k], value: bit(rng) }
    } else {
        let m = 1 + below(rng, 3);
        let mut offsets = vec![time::zero()];
        for _ in 1..m {
            let t = offsets.last().expect("0") + step(rng, 3, den);
            offsets.push(t);
        }
        let delta = offsets.last().expect("0") + step(rng, 3, den);
        let block = offsets
            .into_iter()
            .enumerate()
            .map(|(i, start)| Piece { start, point: if i == 0 { points[k] } else { bit(rng) }, interval: bit(rng) })
            .collect();
        Tail::Periodic { delta, block }
    };
    FvSignal::new(breakpoints, points, intervals, tail).expect("well-formed")
}

/// Sample sequence with a few explicit points, then a uniform or
/// multi-offset period.
pub fn sample_sequence(rng: &mut impl RngCore, den: i64) -> SampleSequence {
    let mut prefix = vec![time::zero()];
    for _ in 0..below(rng, 3) {
        let t = prefix.last().expect("0") + step(rng, 3, den);
        prefix.push(t);
    }
    let anchor = prefix.last().expect("0") + step(rng, 3, den);
    let m = 1 + below(rng, 2);
    let mut offsets = vec![time::zero()];
    for _ in 1..m {
        let t = offsets.last().expect("0") + step(rng, 2, den);
        offsets.push(t);
    }
    let period = offsets.last().expect("0") + step(rng, 2, den);
    SampleSequence::new(prefix, anchor, period, offsets).expect("well-formed")
}

/// Increasing piecewise-linear bijection with up to `knots` extra knots.
pub fn time_map(rng: &mut impl RngCore, knots: usize) -> TimeMap {
    let mut ks = vec![(time::zero(), time::zero())];
    for _ in 0..below(rng, knots + 1) {
        let (x, y) = ks.last().expect("origin").clone();
        ks.push((x + step(rng, 4, 2), y + step(rng, 4, 3)));
    }
    TimeMap::new(ks, step(rng, 4, 2)).expect("increasing")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let g = game(&mut rng, 6, 4, 3);
            g.validate().unwrap();
            let _ = automaton(&mut rng, 3, 2, 2, 3, Convention::MinEven);
            let _ = signal(&mut rng, 4, 4);
            let _ = sample_sequence(&mut rng, 4);
            let _ = time_map(&mut rng, 3);
        }
    }
}
