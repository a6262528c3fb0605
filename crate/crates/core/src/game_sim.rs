//! Timed plays on an arena: moves, exact timestamps, adjudication of capped
//! plays, and the scripted `2^{-i}` play against a jump-forcing input.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand_core::RngCore;

use crate::arena::{Arena, EdgeSize, InterruptKind, NodeKind, Owner, Semantics};
use crate::signal::{FvSignal, Tail};
use crate::time::{self, Time};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OMove {
    pub edge: usize,
    /// Required exactly when the edge enters an `Up` node.
    pub scale: Option<Time>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IMove {
    /// Untimed choice at the fresh node or a `(q,†)` node.
    Choose {
        edge: usize,
    },
    Accept,
    Interrupt {
        time: Time,
        letter: usize,
        kind: Option<InterruptKind>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("the play is over")]
    Finished,
    #[error("it is not this player's turn")]
    NotYourTurn,
    #[error("edge {0} does not leave the current node")]
    NotAnEdge(usize),
    #[error("a timed move needs a positive scale, untimed moves none")]
    BadScale,
    #[error("interrupt time must exceed the current time {0}")]
    TimeNotIncreasing(Time),
    #[error("interrupt letter must differ from the current input letter")]
    WrongLetter,
    #[error("interrupt kind does not match the semantics or the position parity")]
    WrongKind,
    #[error("no arena edge realizes this interrupt")]
    NoSuchEdge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub edge: usize,
    /// Time at which the step happens.
    pub time: Time,
    /// Scale of a timed output move.
    pub scale: Option<Time>,
    /// Position of the committed word hit by an interrupt, reduced into the
    /// first one or two periods (same state, same label).
    pub position: Option<usize>,
    /// Interrupt offset from the block start, in units of the block scale.
    pub offset: Option<Time>,
}

#[derive(Debug, Clone)]
struct Block {
    start: Time,
    scale: Time,
}

#[derive(Debug, Clone)]
pub struct PlayState<'a> {
    arena: &'a Arena,
    node: usize,
    time: Time,
    timed: usize,
    block: Option<Block>,
    trace: Vec<TraceStep>,
    accepted: bool,
}

impl<'a> PlayState<'a> {
    pub fn new(arena: &'a Arena) -> Self {
        PlayState {
            arena,
            node: Arena::FRESH,
            time: time::zero(),
            timed: 0,
            block: None,
            trace: Vec::new(),
            accepted: false,
        }
    }

    pub fn arena(&self) -> &'a Arena {
        self.arena
    }

    pub fn node(&self) -> usize {
        self.node
    }

    /// Time of the last interrupt (0 before the first).
    pub fn time(&self) -> &Time {
        &self.time
    }

    /// Number of timed output moves so far; the next one is move `i`.
    pub fn timed_moves(&self) -> usize {
        self.timed
    }

    /// Start and scale of the word currently committed by `O`.
    pub fn block(&self) -> Option<(&Time, &Time)> {
        self.block.as_ref().map(|b| (&b.start, &b.scale))
    }

    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    pub fn is_over(&self) -> bool {
        self.accepted
    }

    pub fn to_move(&self) -> Owner {
        self.arena.owner(self.node)
    }

    pub fn apply_o(&mut self, m: OMove) -> Result<(), MoveError> {
        self.ready(Owner::Output)?;
        let e = self.own_edge(m.edge)?;
        let timed = self.arena.is_timed(e);
        match (&m.scale, timed) {
            (Some(s), true) if s.is_positive() => {}
            (None, false) => {}
            _ => return Err(MoveError::BadScale),
        }
        if let Some(s) = &m.scale {
            self.block = Some(Block { start: self.time.clone(), scale: s.clone() });
            self.timed += 1;
        }
        self.push(e, self.time.clone(), m.scale, None);
        Ok(())
    }

    pub fn apply_i(&mut self, m: IMove) -> Result<(), MoveError> {
        self.ready(Owner::Input)?;
        match m {
            IMove::Accept => {
                if !matches!(self.arena.nodes[self.node], NodeKind::Up { .. }) {
                    return Err(MoveError::NotYourTurn);
                }
                self.accepted = true;
                Ok(())
            }
            IMove::Choose { edge } => {
                if matches!(self.arena.nodes[self.node], NodeKind::Up { .. }) {
                    return Err(MoveError::NotAnEdge(edge));
                }
                let e = self.own_edge(edge)?;
                self.push(e, self.time.clone(), None, None);
                Ok(())
            }
            IMove::Interrupt { time, letter, kind } => {
                let (e, n, offset) = self.resolve_interrupt(&time, letter, kind)?;
                self.time = time.clone();
                self.block = None;
                self.push(e, time, None, Some((n, offset)));
                Ok(())
            }
        }
    }

    /// Position of the committed word hit by an interrupt at `t`, reduced
    /// modulo the period (twice the period when odd, in FV), and the offset
    /// `(t - start) / scale`.
    pub fn interrupt_position(&self, t: &Time, kind: Option<InterruptKind>) -> Result<(usize, Time), MoveError> {
        let b = self.block.as_ref().ok_or(MoveError::NotYourTurn)?;
        if *t <= b.start {
            return Err(MoveError::TimeNotIncreasing(b.start.clone()));
        }
        let s = (t - &b.start) / &b.scale;
        let one = BigInt::one();
        let two = BigInt::from(2);
        let n = match (self.arena.semantics, kind) {
            (Semantics::Rc, None) => s.ceil().to_integer(),
            (Semantics::Fv, Some(InterruptKind::Left)) => (s.ceil().to_integer() - &one) * &two + &one,
            (Semantics::Fv, Some(InterruptKind::Right)) if s.is_integer() => s.to_integer() * &two,
            _ => return Err(MoveError::WrongKind),
        };
        let w = self.arena.up_word(self.node).ok_or(MoveError::NotYourTurn)?;
        let step = residue_step(self.arena.semantics, w.period.len());
        let lag = BigInt::from(w.lag.len());
        let n = if n > lag { (&n - &lag - &one).mod_floor(&BigInt::from(step)) + &lag + &one } else { n };
        Ok((usize::try_from(n).expect("reduced position"), s))
    }

    /// Time at which position `n` is hit: the last legal instant for RC and
    /// left interrupts, the sample point for right interrupts.
    pub fn time_of_position(&self, n: usize) -> Option<Time> {
        let b = self.block.as_ref()?;
        Some(&b.start + &b.scale * time::from_usize(position_steps(self.arena.semantics, n)))
    }

    fn resolve_interrupt(
        &self,
        t: &Time,
        b: usize,
        kind: Option<InterruptKind>,
    ) -> Result<(usize, usize, Time), MoveError> {
        let NodeKind::Up { a, .. } = self.arena.nodes[self.node] else {
            return Err(MoveError::NotYourTurn);
        };
        if b == a {
            return Err(MoveError::WrongLetter);
        }
        let (n, offset) = self.interrupt_position(t, kind)?;
        let w = self.arena.up_word(self.node).expect("up node");
        let pr = &self.arena.automaton.priority;
        let q2 = w.at(n);
        let (label, size) = if n <= w.lag.len() {
            ((1..=n).map(|k| pr[w.at(k)]).max().unwrap_or(0), EdgeSize::Small)
        } else {
            (crate::arena::word_priority(&self.arena.automaton, w), EdgeSize::Big)
        };
        let e = self.arena.out[self.node]
            .iter()
            .copied()
            .find(|&e| {
                let ed = &self.arena.edges[e];
                ed.letter == Some(b)
                    && ed.interrupt == kind
                    && ed.label == Some(label)
                    && ed.size == size
                    && self.arena.nodes[ed.to].state() == Some(q2)
            })
            .ok_or(MoveError::NoSuchEdge)?;
        Ok((e, n, offset))
    }

    fn ready(&self, who: Owner) -> Result<(), MoveError> {
        if self.accepted {
            return Err(MoveError::Finished);
        }
        if self.to_move() != who {
            return Err(MoveError::NotYourTurn);
        }
        Ok(())
    }

    fn own_edge(&self, e: usize) -> Result<usize, MoveError> {
        if self.arena.edges.get(e).is_some_and(|ed| ed.from == self.node) {
            Ok(e)
        } else {
            Err(MoveError::NotAnEdge(e))
        }
    }

    fn push(&mut self, edge: usize, time: Time, scale: Option<Time>, hit: Option<(usize, Time)>) {
        self.node = self.arena.edges[edge].to;
        let (position, offset) = hit.map_or((None, None), |(n, o)| (Some(n), Some(o)));
        self.trace.push(TraceStep { edge, time, scale, position, offset });
    }

    /// One transcript line per step.
    pub fn transcript(&self) -> Vec<String> {
        let ar = self.arena;
        let mut lines = Vec::new();
        for st in &self.trace {
            let e = &ar.edges[st.edge];
            let line = match (&st.scale, st.position, ar.owner(e.from)) {
                (Some(s), _, _) => {
                    let w = ar.up_word(e.to).expect("timed move");
                    let names =
                        |v: &[usize]| v.iter().map(|&q| ar.automaton.states[q].as_str()).collect::<Vec<_>>().join(" ");
                    format!("O block u={}({})^w scale={s}", names(&w.lag), names(&w.period))
                }
                (None, Some(n), _) => {
                    let kind = match e.interrupt {
                        Some(InterruptKind::Left) => " kind=left",
                        Some(InterruptKind::Right) => " kind=right",
                        None => "",
                    };
                    let b = &ar.automaton.sigma_in[e.letter.expect("interrupt letter")];
                    format!("I interrupt t={} letter={b}{kind} pos={n} edge={}", st.time, ar.edge_label(st.edge))
                }
                (None, None, Owner::Output) => format!("O move {} -> {}", ar.node_label(e.from), ar.node_label(e.to)),
                (None, None, Owner::Input) => format!("I choose {}", ar.node_label(e.to)),
            };
            lines.push(line);
        }
        if self.accepted {
            lines.push(format!("I accept at {}", ar.node_label(self.node)));
        }
        lines
    }
}

pub trait OutputPlayer {
    fn choose(&mut self, play: &PlayState) -> OMove;
}

pub trait InputPlayer {
    fn choose(&mut self, play: &PlayState) -> IMove;
}

/// Positional output strategy: the chosen edge at each output node, with
/// scale `2^{-i}` on the `i`-th timed move (global counter).
#[derive(Debug, Clone)]
pub struct ChoicePlayer {
    pub choice: Vec<Option<usize>>,
}

impl OutputPlayer for ChoicePlayer {
    fn choose(&mut self, play: &PlayState) -> OMove {
        let edge = self.choice[play.node()].expect("choice defined on reachable output nodes");
        let scale = play.arena().is_timed(edge).then(|| time::pow2_inv(play.timed_moves()));
        OMove { edge, scale }
    }
}

/// Interrupt along `edge` (leaving the current `Up` node): the least position
/// for small edges, and for big edges the least position of the same residue
/// at least one time unit after the block start.
pub fn interrupt_along(play: &PlayState, edge: usize, late: bool) -> IMove {
    let ar = play.arena();
    let e = &ar.edges[edge];
    let n = e.position.expect("interrupt edge");
    let (start, scale) = play.block().expect("committed block");
    let mut steps = time::from_usize(position_steps(ar.semantics, n));
    if e.size == EdgeSize::Big && late {
        let w = ar.up_word(e.from).expect("up node");
        let inc = time::from_usize(position_steps(ar.semantics, residue_step(ar.semantics, w.period.len())));
        let need = Time::one() / scale - &steps;
        if need.is_positive() {
            steps += (need / &inc).ceil() * inc;
        }
    }
    IMove::Interrupt { time: start + scale * steps, letter: e.letter.expect("letter"), kind: e.interrupt }
}

/// Positions `n` and `n + step` beyond the lag carry the same state, label and
/// interrupt kind.
pub fn residue_step(semantics: Semantics, period: usize) -> usize {
    match semantics {
        Semantics::Fv if period % 2 == 1 => 2 * period,
        _ => period,
    }
}

/// Number of scale units from the block start to position `n`.
fn position_steps(semantics: Semantics, n: usize) -> usize {
    match semantics {
        Semantics::Rc => n,
        Semantics::Fv => n.div_ceil(2),
    }
}

/// Input that follows a fixed edge sequence: a prefix, then a cycle forever,
/// or acceptance when there is no cycle. Big edges are taken late.
#[derive(Debug, Clone)]
pub struct GuidedInput {
    pub path: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl GuidedInput {
    fn planned(&self, k: usize) -> Option<usize> {
        if k < self.path.len() {
            Some(self.path[k])
        } else if self.cycle.is_empty() {
            None
        } else {
            Some(self.cycle[(k - self.path.len()) % self.cycle.len()])
        }
    }
}

impl InputPlayer for GuidedInput {
    fn choose(&mut self, play: &PlayState) -> IMove {
        let Some(e) = self.planned(play.trace().len()) else { return IMove::Accept };
        if play.arena().edges[e].from != play.node() {
            return IMove::Accept;
        }
        match play.arena().nodes[play.node()] {
            NodeKind::Up { .. } => interrupt_along(play, e, true),
            _ => IMove::Choose { edge: e },
        }
    }
}

/// A random positional input strategy, drawn lazily per node and then kept:
/// accept, or interrupt along a fixed edge, either early or late.
pub struct RandomInput<R> {
    rng: R,
    accept_percent: u32,
    memo: BTreeMap<usize, Option<(usize, bool)>>,
}

impl<R: RngCore> RandomInput<R> {
    pub fn new(rng: R, accept_percent: u32) -> Self {
        RandomInput { rng, accept_percent, memo: BTreeMap::new() }
    }

    fn below(&mut self, n: usize) -> usize {
        (self.rng.next_u64() % n as u64) as usize
    }
}

impl<R: RngCore> InputPlayer for RandomInput<R> {
    fn choose(&mut self, play: &PlayState) -> IMove {
        let v = play.node();
        let out = &play.arena().out[v];
        let up = matches!(play.arena().nodes[v], NodeKind::Up { .. });
        if !self.memo.contains_key(&v) {
            let pick = if out.is_empty() || (up && (self.rng.next_u32() % 100) < self.accept_percent) {
                None
            } else {
                let k = self.below(out.len());
                let late = self.rng.next_u32().is_multiple_of(2);
                Some((out[k], late))
            };
            self.memo.insert(v, pick);
        }
        match self.memo[&v] {
            None => IMove::Accept,
            Some((e, late)) if up => interrupt_along(play, e, late),
            Some((e, _)) => IMove::Choose { edge: e },
        }
    }
}

/// Plays until acceptance or `step_cap` steps.
pub fn run_play<'a>(
    arena: &'a Arena,
    o: &mut dyn OutputPlayer,
    i: &mut dyn InputPlayer,
    step_cap: usize,
) -> Result<PlayState<'a>, MoveError> {
    let mut play = PlayState::new(arena);
    while !play.is_over() && play.trace().len() < step_cap {
        match play.to_move() {
            Owner::Output => {
                let m = o.choose(&play);
                play.apply_o(m)?;
            }
            Owner::Input => {
                let m = i.choose(&play);
                play.apply_i(m)?;
            }
        }
    }
    Ok(play)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    AcceptedFinal,
    RejectedFinal,
    ZenoOWin,
    ParityEven,
    ParityOdd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlayOutcome {
    pub winner: Owner,
    pub reason: Reason,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("undecided: {0}")]
pub struct Undecided(pub &'static str);

/// Smallest `c` such that the trace ends with at least two repetitions of a
/// block of `c` edges; returns `(c, start of the periodic tail)`.
pub fn eventual_cycle(edges: &[usize]) -> Option<(usize, usize)> {
    let n = edges.len();
    for c in 1..=n / 2 {
        let mut k = n - c;
        while k > 0 && edges[k - 1] == edges[k - 1 + c] {
            k -= 1;
        }
        if n - k >= 2 * c {
            return Some((c, k));
        }
    }
    None
}

/// Adjudicates a finished or capped play. A capped play must end in an
/// eventual cycle; time diverges when each of the last two repetitions lasts
/// at least one unit, and converges when the play is well-scaled and every
/// tail interrupt lands within the lag plus two periods of its block start.
pub fn adjudicate(play: &PlayState) -> Result<PlayOutcome, Undecided> {
    let ar = play.arena();
    if play.is_over() {
        return Ok(if ar.is_final[play.node()] {
            PlayOutcome { winner: Owner::Output, reason: Reason::AcceptedFinal }
        } else {
            PlayOutcome { winner: Owner::Input, reason: Reason::RejectedFinal }
        });
    }
    let tr = play.trace();
    let ids: Vec<usize> = tr.iter().map(|s| s.edge).collect();
    let (c, _) = eventual_cycle(&ids).ok_or(Undecided("no eventual cycle within the cap"))?;
    let n = tr.len();
    let rep = |r: usize| &tr[n - r * c - 1].time - &tr[n - (r + 1) * c - 1].time;
    let diverges = n > 2 * c && rep(0) >= Time::one() && (n <= 3 * c || rep(1) >= Time::one());
    if diverges {
        let p = ids[n - c..].iter().map(|&e| ar.edges[e].priority).max().unwrap_or(0);
        return Ok(if p % 2 == 0 {
            PlayOutcome { winner: Owner::Output, reason: Reason::ParityEven }
        } else {
            PlayOutcome { winner: Owner::Input, reason: Reason::ParityOdd }
        });
    }
    let mut timed = 0;
    let mut well_scaled = true;
    for s in tr {
        if let Some(sc) = &s.scale {
            well_scaled &= *sc == time::pow2_inv(timed);
            timed += 1;
        }
    }
    let bounded = tr[n - 2 * c..].iter().all(|s| {
        let Some(off) = &s.offset else { return true };
        let w = ar.up_word(ar.edges[s.edge].from).expect("interrupt from up node");
        *off <= time::from_usize(w.lag.len() + 2 * w.period.len())
    });
    if well_scaled && bounded {
        Ok(PlayOutcome { winner: Owner::Output, reason: Reason::ZenoOWin })
    } else {
        Err(Undecided("durations neither diverge nor provably converge"))
    }
}

/// Bound `2·d·2^{-j}` on the remaining duration of an all-small tail from
/// timed move `j`, with `d` the longest lag.
pub fn zeno_bound(d: usize, j: usize) -> Time {
    time::from_usize(2 * d) * time::pow2_inv(j)
}

/// Scripted play of the `2^{-i}` strategy for "Y jumps where X is
/// continuous" over right-continuous signals with input letters {0,1}.
#[derive(Debug, Clone)]
pub struct HalvingPlay {
    /// `t_0 = 0 < t_1 < …`: round starts.
    pub times: Vec<Time>,
    /// Input value held from each `t_i`.
    pub inputs: Vec<u8>,
    pub transcript: Vec<String>,
    /// Whether the input stopped interrupting (accepted) at the last round.
    pub accepted: bool,
    pub input: FvSignal<u8>,
    pub output: FvSignal<u8>,
}

impl HalvingPlay {
    pub fn duration(&self) -> &Time {
        self.times.last().expect("t_0")
    }

    /// Some `t > 0` where the output jumps and the input is continuous.
    pub fn spec_holds(&self) -> bool {
        let horizon = self.duration() + Time::one() + Time::one();
        self.output
            .jumps_until(&horizon)
            .into_iter()
            .any(|t| t > Time::zero() && !self.input.jumps_at(&t).expect("nonnegative"))
    }
}

/// `I` interrupts at the last legal instant `t_i + 2^{-i}` of each of the
/// first `rounds` rounds and then accepts when `accept_at_end`.
pub fn play_halving_interrupts(rounds: usize, accept_at_end: bool) -> HalvingPlay {
    let mut times = vec![time::zero()];
    let mut inputs = vec![0u8];
    let mut transcript = Vec::new();
    for i in 0..rounds {
        let x = inputs[i];
        let t = times[i].clone();
        let s = time::pow2_inv(i);
        transcript.push(format!("O block y={x} on [{t},{}) then y={} scale={s}", &t + &s, 1 - x));
        let t2 = &t + &s;
        transcript.push(format!("I interrupt t={t2} letter={}", 1 - x));
        times.push(t2);
        inputs.push(1 - x);
    }
    let k = rounds;
    let x = inputs[k];
    let s = time::pow2_inv(k);
    transcript.push(format!("O block y={x} on [{},{}) then y={} scale={s}", times[k], &times[k] + &s, 1 - x));
    if accept_at_end {
        transcript.push(String::from("I accept"));
    } else {
        transcript.push(format!("I stop at horizon t={}", times[k]));
    }
    // Input: inputs[i] on [t_i, t_{i+1}), inputs[k] after t_k.
    let input =
        FvSignal::new(times.clone(), inputs.clone(), inputs[..k].to_vec(), Tail::Constant { point: x, value: x })
            .expect("increasing times");
    // Output copies the input; after an accept it jumps at t_k + 2^{-k}.
    let output = if accept_at_end {
        let mut out_times = times.clone();
        out_times.push(&times[k] + &s);
        let mut points = inputs.clone();
        points.push(1 - x);
        FvSignal::new(out_times, points, inputs.clone(), Tail::Constant { point: 1 - x, value: 1 - x })
    } else {
        FvSignal::new(times.clone(), inputs.clone(), inputs[..k].to_vec(), Tail::Constant { point: x, value: x })
    }
    .expect("increasing times");
    HalvingPlay { times, inputs, transcript, accepted: accept_at_end, input, output }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::arena_for_spec;
    use crate::automaton::{AutomatonBuilder, Convention};
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one_state(p: u32) -> Arena {
        let a = AutomatonBuilder::new(&["0", "1"], &["0", "1"], Convention::MaxEven)
            .state("q", p)
            .default_to("q", "q")
            .build()
            .unwrap();
        arena_for_spec(&a, Semantics::Rc, 1000).unwrap()
    }

    fn first_choice(ar: &Arena) -> ChoicePlayer {
        ChoicePlayer { choice: (0..ar.num_nodes()).map(|v| ar.out[v].first().copied()).collect() }
    }

    #[test]
    fn example_duration_below_two() {
        for h in [1usize, 2, 5, 20] {
            let ex = play_halving_interrupts(h, false);
            let expected = Time::from_integer(2.into()) - time::pow2_inv(h - 1);
            assert_eq!(*ex.duration(), expected);
            assert!(*ex.duration() < Time::from_integer(2.into()));
            assert!(ex.times.windows(2).all(|w| w[0] < w[1]));
            assert!(!ex.spec_holds());
        }
        assert!(play_halving_interrupts(3, true).spec_holds());
    }

    #[test]
    fn accept_at_final() {
        let ar = one_state(0);
        let mut o = first_choice(&ar);
        let mut play = PlayState::new(&ar);
        play.apply_i(IMove::Choose { edge: ar.out[0][0] }).unwrap();
        let m = o.choose(&play);
        play.apply_o(m).unwrap();
        play.apply_i(IMove::Accept).unwrap();
        let out = adjudicate(&play).unwrap();
        assert_eq!(out.reason, Reason::AcceptedFinal);
        assert_eq!(play.apply_i(IMove::Accept), Err(MoveError::Finished));
    }

    #[test]
    fn illegal_moves() {
        let ar = one_state(0);
        let mut play = PlayState::new(&ar);
        assert_eq!(play.apply_o(OMove { edge: 0, scale: None }), Err(MoveError::NotYourTurn));
        play.apply_i(IMove::Choose { edge: ar.out[0][0] }).unwrap();
        let e = ar.out[play.node()][0];
        assert_eq!(play.apply_o(OMove { edge: e, scale: None }), Err(MoveError::BadScale));
        play.apply_o(OMove { edge: e, scale: Some(Time::one()) }).unwrap();
        let a = match ar.nodes[play.node()] {
            NodeKind::Up { a, .. } => a,
            _ => unreachable!(),
        };
        let bad_time = IMove::Interrupt { time: time::zero(), letter: 1 - a, kind: None };
        assert!(matches!(play.apply_i(bad_time), Err(MoveError::TimeNotIncreasing(_))));
        let bad_letter = IMove::Interrupt { time: Time::one(), letter: a, kind: None };
        assert_eq!(play.apply_i(bad_letter), Err(MoveError::WrongLetter));
    }

    #[test]
    fn interrupt_labels() {
        let ar = one_state(1);
        let mut o = first_choice(&ar);
        let mut play = PlayState::new(&ar);
        play.apply_i(IMove::Choose { edge: ar.out[0][0] }).unwrap();
        let m = o.choose(&play);
        play.apply_o(m).unwrap();
        let w = ar.up_word(play.node()).unwrap().clone();
        let a = match ar.nodes[play.node()] {
            NodeKind::Up { a, .. } => a,
            _ => unreachable!(),
        };
        let t = time::ratio(1, 2);
        play.apply_i(IMove::Interrupt { time: t, letter: 1 - a, kind: None }).unwrap();
        let st = play.trace().last().unwrap();
        assert_eq!(st.position, Some(1));
        let e = &ar.edges[st.edge];
        assert_eq!(e.size, if !w.lag.is_empty() { EdgeSize::Small } else { EdgeSize::Big });
        assert_eq!(e.label, Some(1));
    }

    #[test]
    fn cycle_detection() {
        assert_eq!(eventual_cycle(&[5, 1, 2, 1, 2]), Some((2, 1)));
        assert_eq!(eventual_cycle(&[1, 2, 3]), None);
        assert_eq!(eventual_cycle(&[7, 7]), Some((1, 0)));
    }

    #[test]
    fn random_plays_adjudicate() {
        let ar = one_state(0);
        for seed in 0..20 {
            let mut o = first_choice(&ar);
            let mut i = RandomInput::new(ChaCha8Rng::seed_from_u64(seed), 20);
            let play = run_play(&ar, &mut o, &mut i, 200).unwrap();
            let out = adjudicate(&play).unwrap();
            assert_eq!(out.winner, Owner::Output);
            assert!(play.trace().windows(2).all(|w| w[0].time <= w[1].time));
        }
    }
}
