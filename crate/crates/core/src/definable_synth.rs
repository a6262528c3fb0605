//! Finite-state synthesis over FV signals through their point/interval
//! encodings.
//!
//! A D-alphabet letter is written `x:y` (point value `x`, then interval value
//! `y`); a D-alphabet is exactly `Σ×Σ` for some base alphabet `Σ`. The spec is
//! conjoined with a continuity monitor and the resulting discrete game is
//! solved.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::automaton::{AutomatonError, Convention, ParityAutomaton, SafetyMonitor};
use crate::discrete_game::{self, DiscreteVerdict, MealyMachine, MooreCounterMachine};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DefinableError {
    #[error("alphabet is not of the form Σ×Σ with letters `x:y`: {0}")]
    MalformedProductAlphabet(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

pub fn d_letter(x: &str, y: &str) -> String {
    format!("{x}:{y}")
}

/// The canonical D-alphabet of `base`, ordered `(x, y)` lexicographically by index.
pub fn d_alphabet(base: &[String]) -> Vec<String> {
    base.iter().flat_map(|x| base.iter().map(move |y| d_letter(x, y))).collect()
}

/// Base alphabet and, per `D` letter, its pair of base indices.
pub type SplitAlphabet = (Vec<String>, Vec<(usize, usize)>);

/// Base alphabet in order of first appearance.
pub fn split_d_alphabet(letters: &[String]) -> Result<SplitAlphabet, DefinableError> {
    let bad = || DefinableError::MalformedProductAlphabet(letters.join(","));
    let mut base: Vec<String> = Vec::new();
    let mut pairs = Vec::new();
    let index = |s: &str, base: &mut Vec<String>| -> usize {
        match base.iter().position(|b| b == s) {
            Some(i) => i,
            None => {
                base.push(String::from(s));
                base.len() - 1
            }
        }
    };
    for l in letters {
        let (x, y) = l.split_once(':').ok_or_else(bad)?;
        if x.is_empty() || y.is_empty() || y.contains(':') {
            return Err(bad());
        }
        let i = index(x, &mut base);
        let j = index(y, &mut base);
        pairs.push((i, j));
    }
    let mut sorted = pairs.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != letters.len() || sorted.len() != base.len() * base.len() {
        return Err(bad());
    }
    Ok((base, pairs))
}

/// Whether both alphabets are D-alphabets.
pub fn is_d_automaton(a: &ParityAutomaton) -> bool {
    split_d_alphabet(&a.sigma_in).is_ok() && split_d_alphabet(&a.sigma_out).is_ok()
}

/// Reads an automaton over interleaved point/interval letters as one over
/// D-letters: a state is the pair of states after the point and after the
/// interval, with the larger priority (max-even).
pub fn to_d_alphabet(a: &ParityAutomaton) -> ParityAutomaton {
    let a = a.convert_convention(Convention::MaxEven);
    let (nin, nout) = (a.num_in(), a.num_out());
    let sigma_in = d_alphabet(&a.sigma_in);
    let sigma_out = d_alphabet(&a.sigma_out);
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut pairs = Vec::new();
    let mut queue = VecDeque::new();
    let start = (a.initial, a.initial);
    ids.insert(start, 0);
    pairs.push(start);
    queue.push_back(start);
    let mut delta = Vec::new();
    while let Some((_, end)) = queue.pop_front() {
        for x in 0..nin {
            for x2 in 0..nin {
                for y in 0..nout {
                    for y2 in 0..nout {
                        let mid = a.step(end, x, y);
                        let key = (mid, a.step(mid, x2, y2));
                        let id = *ids.entry(key).or_insert_with(|| {
                            pairs.push(key);
                            queue.push_back(key);
                            pairs.len() - 1
                        });
                        delta.push((x * nin + x2, y * nout + y2, id));
                    }
                }
            }
        }
    }
    // `delta` was produced state by state in BFS order; lay it out by letter index.
    let din = nin * nin;
    let dout = nout * nout;
    let mut table = alloc::vec![0usize; pairs.len() * din * dout];
    for (k, chunk) in delta.chunks(din * dout).enumerate() {
        for &(i, o, id) in chunk {
            table[(k * din + i) * dout + o] = id;
        }
    }
    let states = pairs.iter().map(|&(m, e)| format!("{}/{}", a.states[m], a.states[e])).collect();
    let priority = pairs.iter().map(|&(m, e)| a.priority[m].max(a.priority[e])).collect();
    ParityAutomaton::from_parts(states, sigma_in, sigma_out, table, 0, priority, Convention::MaxEven)
        .expect("well-formed by construction")
}

/// Continuity monitor over D-letters `((a,a'),(b,b'))`. It remembers the
/// previous interval values `(a', b')`; at the next letter `((c,c'),(d,d'))`
/// it requires `b' = d` when `a' = c`, and also `d = d'` when `a' = c = c'`.
/// The first letter is unconstrained.
pub fn build_psi_star_monitor(sigma_in: &[String], sigma_out: &[String]) -> SafetyMonitor {
    monitor_over(&d_alphabet(sigma_in), &d_alphabet(sigma_out)).expect("canonical D-alphabets")
}

fn monitor_over(din: &[String], dout: &[String]) -> Result<SafetyMonitor, DefinableError> {
    let (bin, pin) = split_d_alphabet(din)?;
    let (bout, pout) = split_d_alphabet(dout)?;
    let (ni, no) = (bin.len(), bout.len());
    // 0: start; 1 + a'*no + b': remembered interval values; last: sink.
    let mem = |a2: usize, b2: usize| 1 + a2 * no + b2;
    let sink = 1 + ni * no;
    let mut delta = Vec::with_capacity(sink * din.len() * dout.len());
    for s in 0..sink {
        for &(c, c2) in &pin {
            for &(d, d2) in &pout {
                let ok = if s == 0 {
                    true
                } else {
                    let (a2, b2) = ((s - 1) / no, (s - 1) % no);
                    let left = a2 != c || b2 == d;
                    let full = !(a2 == c && c == c2) || (b2 == d && d == d2);
                    left && full
                };
                delta.push(if ok { mem(c2, d2) } else { sink });
            }
        }
    }
    let mut names = alloc::vec![String::from("start")];
    for a2 in &bin {
        for b2 in &bout {
            names.push(format!("prev({a2},{b2})"));
        }
    }
    names.push(String::from("violated"));
    Ok(SafetyMonitor {
        sigma_in: din.to_vec(),
        sigma_out: dout.to_vec(),
        num_states: sink + 1,
        initial: 0,
        sink,
        delta,
        names,
    })
}

/// `spec ∧ Ψ*` over the spec's own D-alphabets.
pub fn spec_with_monitor(spec: &ParityAutomaton) -> Result<ParityAutomaton, DefinableError> {
    let m = monitor_over(&spec.sigma_in, &spec.sigma_out)?;
    Ok(spec.product_with_monitor(&m)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DefinableVerdict {
    /// A finite-state operator, meant for stuttering-free inputs.
    Definable(MealyMachine),
    /// The input player wins the product game; the counter machine and the
    /// product states it wins from certify the verdict.
    NotDefinable { counter: MooreCounterMachine, losing_region: Vec<String> },
}

pub fn solve_definable(spec: &ParityAutomaton) -> Result<DefinableVerdict, DefinableError> {
    let product = spec_with_monitor(spec)?;
    let sol = discrete_game::solve_full(&product).expect("synthesis games are total");
    let region: Vec<String> = sol.input_region().into_iter().map(|q| product.states[q].clone()).collect();
    Ok(match sol.verdict {
        DiscreteVerdict::OutputWins(m) => DefinableVerdict::Definable(m),
        DiscreteVerdict::InputWins(c) => DefinableVerdict::NotDefinable { counter: c, losing_region: region },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DefinableScVerdict {
    /// A strongly causal counter-operator: emits the input before reading output.
    CounterOperator(MooreCounterMachine),
    NoCounterOperator,
}

/// The input side of the same product game.
pub fn solve_definable_sc(spec: &ParityAutomaton) -> Result<DefinableScVerdict, DefinableError> {
    Ok(match solve_definable(spec)? {
        DefinableVerdict::Definable(_) => DefinableScVerdict::NoCounterOperator,
        DefinableVerdict::NotDefinable { counter, .. } => DefinableScVerdict::CounterOperator(counter),
    })
}
