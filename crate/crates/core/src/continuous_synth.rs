//! Almost-positional strategies on a timed arena, the winning-strategy check,
//! and the search for a winning one.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::arena::{arena_for_spec, Arena, ArenaError, EdgeSize, NodeKind, Owner, Semantics};
use crate::automaton::ParityAutomaton;
use crate::game_sim::ChoicePlayer;
use crate::graph;
use crate::state_monoid::DEFAULT_SIGNATURE_CAP;

/// Chosen outgoing edge per node; `Some` only on output nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PositionalChoice {
    pub choice: Vec<Option<usize>>,
}

impl PositionalChoice {
    pub fn empty(arena: &Arena) -> Self {
        PositionalChoice { choice: vec![None; arena.num_nodes()] }
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.choice[v]
    }
}

/// `G_σ`: reachable part of the arena where each decided output node keeps
/// its chosen edge and input nodes keep all edges. Undecided output nodes
/// keep none.
#[derive(Debug, Clone)]
pub struct StrategyGraph<'a> {
    pub arena: &'a Arena,
    pub choice: PositionalChoice,
    pub reachable: Vec<bool>,
    /// Kept edges leaving reachable nodes.
    pub kept: Vec<bool>,
}

impl<'a> StrategyGraph<'a> {
    pub fn new(arena: &'a Arena, choice: PositionalChoice) -> Self {
        let succ: Vec<Vec<usize>> = (0..arena.num_nodes()).map(|v| kept_out(arena, &choice, v)).collect();
        let targets: Vec<Vec<usize>> = succ.iter().map(|es| es.iter().map(|&e| arena.edges[e].to).collect()).collect();
        let reachable = graph::reachable(&targets, Arena::FRESH);
        let mut kept = vec![false; arena.num_edges()];
        for v in (0..arena.num_nodes()).filter(|&v| reachable[v]) {
            for &e in &succ[v] {
                kept[e] = true;
            }
        }
        StrategyGraph { arena, choice, reachable, kept }
    }

    /// Reachable output nodes without a choice, in node order.
    pub fn undecided(&self) -> Vec<usize> {
        (0..self.arena.num_nodes())
            .filter(|&v| self.reachable[v] && self.arena.owner(v) == Owner::Output && self.choice.choice[v].is_none())
            .collect()
    }
}

fn kept_out(arena: &Arena, choice: &PositionalChoice, v: usize) -> Vec<usize> {
    match arena.owner(v) {
        Owner::Input => arena.out[v].clone(),
        Owner::Output => choice.choice[v].into_iter().collect(),
    }
}

/// How the input player beats a choice: edge walks from the fresh node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LossWitness {
    /// Reach an `Up` node outside `F` and accept there.
    NonFinal { path: Vec<usize> },
    /// Reach `cycle` and loop it; it has a big edge and odd maximal priority.
    OddBigCycle { priority: u32, path: Vec<usize>, cycle: Vec<usize> },
}

impl LossWitness {
    pub fn path(&self) -> &[usize] {
        match self {
            LossWitness::NonFinal { path } | LossWitness::OddBigCycle { path, .. } => path,
        }
    }

    pub fn cycle(&self) -> &[usize] {
        match self {
            LossWitness::NonFinal { .. } => &[],
            LossWitness::OddBigCycle { cycle, .. } => cycle,
        }
    }
}

fn edge_pairs(arena: &Arena) -> Vec<(usize, usize)> {
    arena.edges.iter().map(|e| (e.from, e.to)).collect()
}

/// Violation of (A) or (B) in `g`, if any. (B) is checked per odd `p` on the
/// kept edges of priority `≤ p`: an SCC holding a `p`-edge and a big edge
/// carries a closed walk through both.
pub fn find_loss_witness(g: &StrategyGraph) -> Option<LossWitness> {
    let ar = g.arena;
    let pairs = edge_pairs(ar);
    for v in 0..ar.num_nodes() {
        if g.reachable[v] && matches!(ar.nodes[v], NodeKind::Up { .. }) && !ar.is_final[v] {
            let path = graph::bfs_edge_path(ar.num_nodes(), &pairs, &g.kept, Arena::FRESH, v).expect("reachable");
            return Some(LossWitness::NonFinal { path });
        }
    }
    let mut odd: Vec<u32> =
        (0..ar.num_edges()).filter(|&e| g.kept[e]).map(|e| ar.edges[e].priority).filter(|p| p % 2 == 1).collect();
    odd.sort_unstable();
    odd.dedup();
    for p in odd {
        let allowed: Vec<bool> = (0..ar.num_edges()).map(|e| g.kept[e] && ar.edges[e].priority <= p).collect();
        let mut succ = vec![Vec::new(); ar.num_nodes()];
        for (e, &(s, t)) in pairs.iter().enumerate() {
            if allowed[e] {
                succ[s].push(t);
            }
        }
        let comp = graph::scc(&succ);
        let inside = |e: usize| allowed[e] && comp[pairs[e].0] == comp[pairs[e].1];
        let Some(ep) = (0..ar.num_edges()).find(|&e| {
            inside(e) && ar.edges[e].priority == p && {
                let c = comp[pairs[e].0];
                (0..ar.num_edges()).any(|b| inside(b) && ar.edges[b].size == EdgeSize::Big && comp[pairs[b].0] == c)
            }
        }) else {
            continue;
        };
        let c = comp[pairs[ep].0];
        let eb = (0..ar.num_edges())
            .find(|&b| inside(b) && ar.edges[b].size == EdgeSize::Big && comp[pairs[b].0] == c)
            .expect("found above");
        let within: Vec<bool> = (0..ar.num_edges()).map(|e| inside(e) && comp[pairs[e].0] == c).collect();
        let mut cycle = vec![ep];
        if eb != ep {
            cycle.extend(
                graph::bfs_edge_path(ar.num_nodes(), &pairs, &within, pairs[ep].1, pairs[eb].0)
                    .expect("strongly connected"),
            );
            cycle.push(eb);
        }
        cycle.extend(
            graph::bfs_edge_path(ar.num_nodes(), &pairs, &within, pairs[eb].1, pairs[ep].0)
                .expect("strongly connected"),
        );
        let path = graph::bfs_edge_path(ar.num_nodes(), &pairs, &g.kept, Arena::FRESH, pairs[ep].0).expect("reachable");
        return Some(LossWitness::OddBigCycle { priority: p, path, cycle });
    }
    None
}

/// `O` wins against every input behavior.
pub fn is_strategy_winning(g: &StrategyGraph) -> bool {
    find_loss_witness(g).is_none()
}

/// Outgoing edges of an output node, keeping one representative per target
/// profile: `Up` targets with the same finality and the same outgoing
/// `(target, priority, size)` set are interchangeable.
pub fn options(arena: &Arena, v: usize) -> Vec<usize> {
    let mut seen = BTreeSet::new();
    let mut opts = Vec::new();
    for &e in &arena.out[v] {
        let t = arena.edges[e].to;
        let profile = match arena.nodes[t] {
            NodeKind::Up { .. } => {
                let mut outs: Vec<(usize, u32, EdgeSize)> = arena.out[t]
                    .iter()
                    .map(|&f| (arena.edges[f].to, arena.edges[f].priority, arena.edges[f].size))
                    .collect();
                outs.sort_unstable();
                outs.dedup();
                (arena.is_final[t], usize::MAX, outs)
            }
            _ => (false, t, Vec::new()),
        };
        if seen.insert(profile) {
            opts.push(e);
        }
    }
    opts
}

/// All choices over the output nodes they make reachable, options
/// deduplicated by profile, in depth-first order; at most `limit`.
pub fn enumerate_choices(arena: &Arena, limit: usize) -> Vec<PositionalChoice> {
    let mut out = Vec::new();
    let mut stack = vec![PositionalChoice::empty(arena)];
    while let Some(c) = stack.pop() {
        if out.len() >= limit {
            break;
        }
        let g = StrategyGraph::new(arena, c);
        match g.undecided().first() {
            None => out.push(g.choice),
            Some(&v) => {
                for &e in options(arena, v).iter().rev() {
                    let mut next = g.choice.clone();
                    next.choice[v] = Some(e);
                    stack.push(next);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContinuousError {
    #[error(transparent)]
    Arena(#[from] ArenaError),
    #[error("strategy search cap {cap} exceeded")]
    StrategyCap { cap: u64 },
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub witness: Option<PositionalChoice>,
    /// Partial and complete choices visited.
    pub strategies_examined: u64,
}

/// Depth-first search from a partial choice. Output nodes are decided in
/// node order as they become reachable; a partial choice whose graph already
/// violates (A) or (B) is dropped, since more choices only add edges.
pub fn search_from(arena: &Arena, start: PositionalChoice, cap: u64) -> Result<SearchResult, ContinuousError> {
    let mut examined = 0u64;
    let mut stack = vec![start];
    while let Some(c) = stack.pop() {
        examined += 1;
        if examined > cap {
            return Err(ContinuousError::StrategyCap { cap });
        }
        let g = StrategyGraph::new(arena, c);
        if find_loss_witness(&g).is_some() {
            continue;
        }
        match g.undecided().first() {
            None => return Ok(SearchResult { witness: Some(g.choice), strategies_examined: examined }),
            Some(&v) => {
                for &e in options(arena, v).iter().rev() {
                    let t = arena.edges[e].to;
                    if matches!(arena.nodes[t], NodeKind::Up { .. }) && !arena.is_final[t] {
                        continue;
                    }
                    let mut next = g.choice.clone();
                    next.choice[v] = Some(e);
                    stack.push(next);
                }
            }
        }
    }
    Ok(SearchResult { witness: None, strategies_examined: examined })
}

/// Partial choices fixing the first reachable output node, one per option;
/// searching each with [`search_from`] and taking the first witness in this
/// order reproduces the sequential result.
pub fn root_branches(arena: &Arena) -> Vec<PositionalChoice> {
    let g = StrategyGraph::new(arena, PositionalChoice::empty(arena));
    match g.undecided().first() {
        None => vec![g.choice],
        Some(&v) => options(arena, v)
            .into_iter()
            .map(|e| {
                let mut c = g.choice.clone();
                c.choice[v] = Some(e);
                c
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub signatures: usize,
    pub strategies: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { signatures: DEFAULT_SIGNATURE_CAP, strategies: 1_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct ContinuousVerdict {
    pub realizable: bool,
    pub witness: Option<PositionalChoice>,
    pub strategies_examined: u64,
    pub arena: Arena,
}

pub fn decide_continuous(
    spec: &ParityAutomaton,
    semantics: Semantics,
    caps: Caps,
) -> Result<ContinuousVerdict, ContinuousError> {
    let arena = arena_for_spec(spec, semantics, caps.signatures)?;
    decide_on_arena(arena, caps.strategies)
}

pub fn decide_on_arena(arena: Arena, cap: u64) -> Result<ContinuousVerdict, ContinuousError> {
    let r = search_from(&arena, PositionalChoice::empty(&arena), cap)?;
    Ok(ContinuousVerdict {
        realizable: r.witness.is_some(),
        witness: r.witness,
        strategies_examined: r.strategies_examined,
        arena,
    })
}

/// Executable output strategy: the chosen edges with scale `2^{-i}` on the
/// `i`-th timed move.
pub fn witness_to_player(choice: &PositionalChoice) -> ChoicePlayer {
    ChoicePlayer { choice: choice.choice.clone() }
}
