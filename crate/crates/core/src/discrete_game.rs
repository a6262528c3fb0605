//! The discrete-time synthesis game and its finite-state winners.
//!
//! Positions are `I(q)`, where the input player picks a letter `a`, and
//! `O(q,a)`, where the output player answers with `b` in the same step and
//! the automaton moves to `δ(q,(a,b))`. Both carry `pr(q)`; the output player
//! wins when the maximal priority seen infinitely often is even.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::automaton::{Convention, ParityAutomaton};
use crate::graph;
use crate::omega_word::LassoWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    /// Wins on even maximal priority; the output player.
    Even,
    /// The input player.
    Odd,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    pub fn of_priority(p: u32) -> Player {
        if p.is_multiple_of(2) {
            Player::Even
        } else {
            Player::Odd
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityGame {
    pub owner: Vec<Player>,
    pub priority: Vec<u32>,
    pub succ: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("node {0} has no successor")]
    DeadEnd(usize),
    #[error("successor {1} of node {0} does not exist")]
    BadEdge(usize, usize),
    #[error("game too large for brute force: {what} {size} exceeds cap {cap}")]
    TooLarge { what: &'static str, size: u128, cap: u128 },
}

impl ParityGame {
    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn validate(&self) -> Result<(), GameError> {
        for (v, s) in self.succ.iter().enumerate() {
            if s.is_empty() {
                return Err(GameError::DeadEnd(v));
            }
            if let Some(&w) = s.iter().find(|&&w| w >= self.len()) {
                return Err(GameError::BadEdge(v, w));
            }
        }
        Ok(())
    }
}

/// Winner per node, and for every node the index (into `succ[v]`) of the move
/// its owner makes when it is winning there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub strategy: Vec<Option<usize>>,
}

/// Attractor of `target` for `player` within `alive`. Records, for each
/// attracted node of `player`, the lowest-index edge into the growing set.
fn attractor(
    g: &ParityGame,
    pred: &[Vec<usize>],
    alive: &[bool],
    target: &[bool],
    player: Player,
    strategy: &mut [Option<usize>],
) -> Vec<bool> {
    let mut inside = target.to_vec();
    let mut remaining: Vec<usize> =
        (0..g.len()).map(|v| if alive[v] { g.succ[v].iter().filter(|&&w| alive[w]).count() } else { 0 }).collect();
    let mut queue: VecDeque<usize> = (0..g.len()).filter(|&v| inside[v]).collect();
    while let Some(w) = queue.pop_front() {
        for &v in &pred[w] {
            if !alive[v] || inside[v] {
                continue;
            }
            if g.owner[v] == player {
                inside[v] = true;
                let k = g.succ[v].iter().position(|&x| alive[x] && inside[x]).expect("edge into set");
                strategy[v] = Some(k);
                queue.push_back(v);
            } else {
                remaining[v] -= 1;
                if remaining[v] == 0 {
                    inside[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    inside
}

fn zielonka_rec(
    g: &ParityGame,
    pred: &[Vec<usize>],
    alive: &[bool],
    strategy: &mut [Option<usize>],
) -> Vec<Option<Player>> {
    let n = g.len();
    let mut win: Vec<Option<Player>> = vec![None; n];
    let Some(p) = (0..n).filter(|&v| alive[v]).map(|v| g.priority[v]).max() else {
        return win;
    };
    let alpha = Player::of_priority(p);
    let top: Vec<bool> = (0..n).map(|v| alive[v] && g.priority[v] == p).collect();
    let mut local = strategy.to_vec();
    let a = attractor(g, pred, alive, &top, alpha, &mut local);
    let rest: Vec<bool> = (0..n).map(|v| alive[v] && !a[v]).collect();
    let mut sub_strategy = strategy.to_vec();
    let sub = zielonka_rec(g, pred, &rest, &mut sub_strategy);
    let opp = alpha.opponent();
    if !(0..n).any(|v| sub[v] == Some(opp)) {
        for v in (0..n).filter(|&v| alive[v]) {
            win[v] = Some(alpha);
            if rest[v] {
                strategy[v] = sub_strategy[v];
            } else if top[v] && g.owner[v] == alpha {
                strategy[v] = g.succ[v].iter().position(|&w| alive[w]);
            } else if g.owner[v] == alpha {
                strategy[v] = local[v];
            }
        }
        return win;
    }
    let lost: Vec<bool> = (0..n).map(|v| sub[v] == Some(opp)).collect();
    let mut battr = strategy.to_vec();
    let b = attractor(g, pred, alive, &lost, opp, &mut battr);
    let rest2: Vec<bool> = (0..n).map(|v| alive[v] && !b[v]).collect();
    let mut sub2_strategy = strategy.to_vec();
    let sub2 = zielonka_rec(g, pred, &rest2, &mut sub2_strategy);
    for v in (0..n).filter(|&v| alive[v]) {
        if b[v] {
            win[v] = Some(opp);
            if g.owner[v] == opp {
                strategy[v] = if lost[v] { sub_strategy[v] } else { battr[v] };
            }
        } else {
            win[v] = sub2[v];
            strategy[v] = sub2_strategy[v];
        }
    }
    win
}

fn predecessors(g: &ParityGame) -> Vec<Vec<usize>> {
    let mut pred = vec![Vec::new(); g.len()];
    for (v, s) in g.succ.iter().enumerate() {
        for &w in s {
            pred[w].push(v);
        }
    }
    pred
}

/// Recursive attractor decomposition with positional strategies.
pub fn zielonka(g: &ParityGame) -> Result<Solution, GameError> {
    g.validate()?;
    let pred = predecessors(g);
    let alive = vec![true; g.len()];
    let mut strategy = vec![None; g.len()];
    let win = zielonka_rec(g, &pred, &alive, &mut strategy);
    let winner: Vec<Player> = win.into_iter().map(|w| w.expect("every node decided")).collect();
    for v in 0..g.len() {
        if g.owner[v] != winner[v] {
            strategy[v] = None;
        }
    }
    Ok(Solution { winner, strategy })
}

/// Nodes from which, in the one-player graph `succ`, some reachable cycle has
/// odd maximal priority.
fn odd_cycle_reach(priority: &[u32], succ: &[Vec<usize>]) -> Vec<bool> {
    let n = priority.len();
    let mut bad = vec![false; n];
    let mut odd: Vec<u32> = priority.iter().copied().filter(|p| p % 2 == 1).collect();
    odd.sort_unstable();
    odd.dedup();
    for p in odd {
        let restricted: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                if priority[v] > p {
                    Vec::new()
                } else {
                    succ[v].iter().copied().filter(|&w| priority[w] <= p).collect()
                }
            })
            .collect();
        let comp = graph::scc(&restricted);
        for v in 0..n {
            if priority[v] != p {
                continue;
            }
            let cyclic = restricted[v].iter().any(|&w| comp[w] == comp[v]);
            if cyclic {
                bad[v] = true;
            }
        }
    }
    // backward closure
    let mut pred = vec![Vec::new(); n];
    for (v, s) in succ.iter().enumerate() {
        for &w in s {
            pred[w].push(v);
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| bad[v]).collect();
    while let Some(w) = queue.pop_front() {
        for &v in &pred[w] {
            if !bad[v] {
                bad[v] = true;
                queue.push_back(v);
            }
        }
    }
    bad
}

/// Test oracle: tries every positional strategy of the even player and
/// checks the remaining one-player graph for reachable odd cycles.
pub fn brute_force_solve(g: &ParityGame, node_cap: usize, strategy_cap: u128) -> Result<Vec<Player>, GameError> {
    g.validate()?;
    if g.len() > node_cap {
        return Err(GameError::TooLarge { what: "nodes", size: g.len() as u128, cap: node_cap as u128 });
    }
    let even: Vec<usize> = (0..g.len()).filter(|&v| g.owner[v] == Player::Even).collect();
    let mut total: u128 = 1;
    for &v in &even {
        total = total.saturating_mul(g.succ[v].len() as u128);
    }
    if total > strategy_cap {
        return Err(GameError::TooLarge { what: "strategies", size: total, cap: strategy_cap });
    }
    let mut wins = vec![false; g.len()];
    let mut choice = vec![0usize; even.len()];
    loop {
        let succ: Vec<Vec<usize>> = (0..g.len())
            .map(|v| match even.iter().position(|&e| e == v) {
                Some(k) => vec![g.succ[v][choice[k]]],
                None => g.succ[v].clone(),
            })
            .collect();
        let bad = odd_cycle_reach(&g.priority, &succ);
        for v in 0..g.len() {
            wins[v] |= !bad[v];
        }
        let mut k = 0;
        loop {
            if k == even.len() {
                return Ok(wins.iter().map(|&w| if w { Player::Even } else { Player::Odd }).collect());
            }
            choice[k] += 1;
            if choice[k] < g.succ[even[k]].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Output-player witness: reads `a`, emits `b`, moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyMachine {
    pub states: Vec<String>,
    pub sigma_in: Vec<String>,
    pub sigma_out: Vec<String>,
    pub initial: usize,
    /// `(next state, output)` at `[q*|Σ_in| + a]`.
    pub transition: Vec<(usize, usize)>,
}

impl MealyMachine {
    pub fn step(&self, q: usize, a: usize) -> (usize, usize) {
        self.transition[q * self.sigma_in.len() + a]
    }
}

/// Input-player witness: emits `a` before reading the output `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreCounterMachine {
    pub states: Vec<String>,
    pub sigma_in: Vec<String>,
    pub sigma_out: Vec<String>,
    pub initial: usize,
    pub output: Vec<usize>,
    /// Next state at `[q*|Σ_out| + b]`.
    pub transition: Vec<usize>,
}

impl MooreCounterMachine {
    pub fn step(&self, q: usize, b: usize) -> usize {
        self.transition[q * self.sigma_out.len() + b]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiscreteVerdict {
    OutputWins(MealyMachine),
    InputWins(MooreCounterMachine),
}

/// The synthesis game of `a` (taken in max-even form). Node `q` is `I(q)`;
/// node `n + q*|Σ_in| + a` is `O(q,a)`. Edge order follows letter order.
pub fn synthesis_game(a: &ParityAutomaton) -> ParityGame {
    let a = a.convert_convention(Convention::MaxEven);
    let (n, nin, nout) = (a.num_states(), a.num_in(), a.num_out());
    let mut owner = vec![Player::Odd; n];
    let mut priority = a.priority.clone();
    let mut succ: Vec<Vec<usize>> = (0..n).map(|q| (0..nin).map(|x| n + q * nin + x).collect()).collect();
    for q in 0..n {
        for x in 0..nin {
            owner.push(Player::Even);
            priority.push(a.priority[q]);
            succ.push((0..nout).map(|b| a.step(q, x, b)).collect());
        }
    }
    ParityGame { owner, priority, succ }
}

/// Solution of the synthesis game plus the machine for the winning side.
#[derive(Debug, Clone)]
pub struct DiscreteSolution {
    pub game: ParityGame,
    pub solution: Solution,
    pub verdict: DiscreteVerdict,
    pub num_states: usize,
}

impl DiscreteSolution {
    /// Automaton states from which the input player wins.
    pub fn input_region(&self) -> Vec<usize> {
        (0..self.num_states).filter(|&q| self.solution.winner[q] == Player::Odd).collect()
    }
}

pub fn solve_full(a: &ParityAutomaton) -> Result<DiscreteSolution, GameError> {
    let game = synthesis_game(a);
    let solution = zielonka(&game)?;
    let (n, nin, nout) = (a.num_states(), a.num_in(), a.num_out());
    let verdict = if solution.winner[a.initial] == Player::Even {
        let mut transition = Vec::with_capacity(n * nin);
        for q in 0..n {
            for x in 0..nin {
                let b = solution.strategy[n + q * nin + x].unwrap_or(0);
                transition.push((a.step(q, x, b), b));
            }
        }
        DiscreteVerdict::OutputWins(MealyMachine {
            states: a.states.clone(),
            sigma_in: a.sigma_in.clone(),
            sigma_out: a.sigma_out.clone(),
            initial: a.initial,
            transition,
        })
    } else {
        let output: Vec<usize> = (0..n).map(|q| solution.strategy[q].unwrap_or(0)).collect();
        let mut transition = Vec::with_capacity(n * nout);
        for (q, &y) in output.iter().enumerate() {
            for b in 0..nout {
                transition.push(a.step(q, y, b));
            }
        }
        DiscreteVerdict::InputWins(MooreCounterMachine {
            states: a.states.clone(),
            sigma_in: a.sigma_in.clone(),
            sigma_out: a.sigma_out.clone(),
            initial: a.initial,
            output,
            transition,
        })
    };
    Ok(DiscreteSolution { game, solution, verdict, num_states: n })
}

pub fn solve(a: &ParityAutomaton) -> DiscreteVerdict {
    solve_full(a).expect("synthesis games are total").verdict
}

/// Drives a machine with state set of size `n` along a lasso; `emit` maps
/// (state, letter) to (next state, emitted letter).
fn drive<F: Fn(usize, usize) -> (usize, usize)>(initial: usize, word: &LassoWord<usize>, emit: F) -> LassoWord<usize> {
    let mut out = Vec::new();
    let mut q = initial;
    for &x in word.prefix() {
        let (q2, y) = emit(q, x);
        out.push(y);
        q = q2;
    }
    let lag = out.len();
    let m = word.period().len();
    let mut boundary = vec![q];
    loop {
        for &x in word.period() {
            let (q2, y) = emit(q, x);
            out.push(y);
            q = q2;
        }
        if let Some(k) = boundary.iter().position(|&s| s == q) {
            let start = lag + k * m;
            return LassoWord::new(out[..start].to_vec(), out[start..].to_vec()).expect("nonempty");
        }
        boundary.push(q);
    }
}

/// Outputs of a Mealy machine on an input lasso.
pub fn run_machine(m: &MealyMachine, input: &LassoWord<usize>) -> LassoWord<usize> {
    drive(m.initial, input, |q, a| m.step(q, a))
}

/// Inputs emitted by a counter machine against an output lasso.
pub fn run_counter(m: &MooreCounterMachine, output: &LassoWord<usize>) -> LassoWord<usize> {
    drive(m.initial, output, |q, b| (m.step(q, b), m.output[q]))
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn mealy_to_dot(m: &MealyMachine) -> String {
    let mut s = String::from("digraph mealy {\n  rankdir=LR;\n");
    for (q, name) in m.states.iter().enumerate() {
        let shape = if q == m.initial { "doublecircle" } else { "circle" };
        let _ = writeln!(s, "  s{q} [label=\"{}\", shape={shape}];", dot_escape(name));
    }
    for q in 0..m.states.len() {
        for a in 0..m.sigma_in.len() {
            let (t, b) = m.step(q, a);
            let _ = writeln!(
                s,
                "  s{q} -> s{t} [label=\"{}/{}\"];",
                dot_escape(&m.sigma_in[a]),
                dot_escape(&m.sigma_out[b])
            );
        }
    }
    s.push_str("}\n");
    s
}

pub fn moore_to_dot(m: &MooreCounterMachine) -> String {
    let mut s = String::from("digraph moore {\n  rankdir=LR;\n");
    for (q, name) in m.states.iter().enumerate() {
        let shape = if q == m.initial { "doublecircle" } else { "circle" };
        let label = format!("{} / {}", name, m.sigma_in[m.output[q]]);
        let _ = writeln!(s, "  s{q} [label=\"{}\", shape={shape}];", dot_escape(&label));
    }
    for q in 0..m.states.len() {
        for b in 0..m.sigma_out.len() {
            let _ = writeln!(s, "  s{q} -> s{} [label=\"{}\"];", m.step(q, b), dot_escape(&m.sigma_out[b]));
        }
    }
    s.push_str("}\n");
    s
}
