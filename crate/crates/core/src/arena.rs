//! Finite timed arenas for the right-continuous (RC) and finite-variability
//! (FV) games.
//!
//! Only the part reachable from the fresh node is built. `Up` nodes refer to
//! members of an [`UpSet`] by index.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::automaton::{AutomatonError, Convention, ParityAutomaton};
use crate::state_monoid::{build_class_table, build_up, MonoidError, TableScope, UpSet, UpWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Semantics {
    Rc,
    Fv,
}

impl Semantics {
    pub fn name(self) -> &'static str {
        match self {
            Semantics::Rc => "rc",
            Semantics::Fv => "fv",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rc" => Some(Semantics::Rc),
            "fv" => Some(Semantics::Fv),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Fresh,
    /// `(q, a)`.
    Pair {
        q: usize,
        a: usize,
    },
    /// `(q, †)`, FV only.
    Dagger {
        q: usize,
    },
    /// `(q, †, a)`, FV only.
    DaggerLetter {
        q: usize,
        a: usize,
    },
    /// `(q, a, u)` with `u` an index into the UP set.
    Up {
        q: usize,
        a: usize,
        u: usize,
    },
}

impl NodeKind {
    pub fn state(self) -> Option<usize> {
        match self {
            NodeKind::Fresh => None,
            NodeKind::Pair { q, .. }
            | NodeKind::Dagger { q }
            | NodeKind::DaggerLetter { q, .. }
            | NodeKind::Up { q, .. } => Some(q),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Owner {
    Input,
    Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeSize {
    Plain,
    Small,
    Big,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InterruptKind {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArenaEdge {
    pub from: usize,
    pub to: usize,
    /// Interrupt label: max priority over `u(1..n)`, or over all of `u` when big.
    pub label: Option<u32>,
    pub size: EdgeSize,
    pub interrupt: Option<InterruptKind>,
    /// Priority used by cycle analysis: the label, folded with the source
    /// node's priority in FV arenas.
    pub priority: u32,
    /// Input letter chosen by `I` (fresh and `†` edges, interrupts) or output
    /// letter chosen by `O` (`(q,a) → (q',†)`).
    pub letter: Option<usize>,
    /// Least position `n` of `u` realizing an interrupt edge.
    pub position: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArenaError {
    #[error("automaton must use the max_even convention")]
    ConventionMismatch,
    #[error("UP set was built over a different edge context")]
    UpContextMismatch,
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

#[derive(Debug, Clone)]
pub struct Arena {
    pub semantics: Semantics,
    pub automaton: ParityAutomaton,
    pub up: UpSet,
    pub nodes: Vec<NodeKind>,
    /// Inherited from the automaton state in FV arenas, 0 otherwise.
    pub node_priority: Vec<u32>,
    pub edges: Vec<ArenaEdge>,
    /// Outgoing edge indices per node, in construction order.
    pub out: Vec<Vec<usize>>,
    pub is_final: Vec<bool>,
}

impl Arena {
    pub const FRESH: usize = 0;

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn owner(&self, v: usize) -> Owner {
        match self.nodes[v] {
            NodeKind::Pair { .. } | NodeKind::DaggerLetter { .. } => Owner::Output,
            _ => Owner::Input,
        }
    }

    /// Output nodes, in node order.
    pub fn output_nodes(&self) -> Vec<usize> {
        (0..self.num_nodes()).filter(|&v| self.owner(v) == Owner::Output).collect()
    }

    pub fn up_word(&self, v: usize) -> Option<&UpWord> {
        match self.nodes[v] {
            NodeKind::Up { u, .. } => Some(&self.up.members[u]),
            _ => None,
        }
    }

    /// Whether the edge is a timed move of `O` (it commits to a UP word).
    pub fn is_timed(&self, e: usize) -> bool {
        matches!(self.nodes[self.edges[e].to], NodeKind::Up { .. })
    }

    pub fn node_index(&self, kind: NodeKind) -> Option<usize> {
        self.nodes.iter().position(|&k| k == kind)
    }

    pub fn node_label(&self, v: usize) -> String {
        let a = &self.automaton;
        match self.nodes[v] {
            NodeKind::Fresh => String::from("new"),
            NodeKind::Pair { q, a: x } => format!("({},{})", a.states[q], a.sigma_in[x]),
            NodeKind::Dagger { q } => format!("({},†)", a.states[q]),
            NodeKind::DaggerLetter { q, a: x } => format!("({},†,{})", a.states[q], a.sigma_in[x]),
            NodeKind::Up { q, a: x, u } => {
                let w = &self.up.members[u];
                let names = |s: &[usize]| s.iter().map(|&p| a.states[p].as_str()).collect::<Vec<_>>().join(" ");
                format!("({},{},{}({})^w)", a.states[q], a.sigma_in[x], names(&w.lag), names(&w.period))
            }
        }
    }

    pub fn edge_label(&self, e: usize) -> String {
        let edge = &self.edges[e];
        match (edge.label, edge.size) {
            (Some(p), EdgeSize::Small) => format!("{p},small"),
            (Some(p), EdgeSize::Big) => format!("{p},big"),
            _ => match (self.nodes[edge.from], edge.letter) {
                (NodeKind::Pair { .. }, Some(b)) if self.semantics == Semantics::Fv => {
                    format!("out {}", self.automaton.sigma_out[b])
                }
                _ => String::new(),
            },
        }
    }
}

/// An arena with no nodes; exports as a header-only graph.
pub fn empty_arena(semantics: Semantics, automaton: ParityAutomaton, up: UpSet) -> Arena {
    Arena {
        semantics,
        automaton,
        up,
        nodes: Vec::new(),
        node_priority: Vec::new(),
        edges: Vec::new(),
        out: Vec::new(),
        is_final: Vec::new(),
    }
}

/// Max priority over the period, i.e. over the states seen infinitely often.
pub fn period_priority(a: &ParityAutomaton, u: &UpWord) -> u32 {
    u.period.iter().map(|&q| a.priority[q]).max().unwrap_or(0)
}

pub fn word_priority(a: &ParityAutomaton, u: &UpWord) -> u32 {
    u.lag.iter().chain(&u.period).map(|&q| a.priority[q]).max().unwrap_or(0)
}

/// `q → u(1) → u(2) → …` is an `E_a`-path, wrap-around of the period included.
pub fn is_move(up: &UpSet, q: usize, x: usize, u: &UpWord) -> bool {
    let ctx = &up.ctx;
    let mut path = Vec::with_capacity(u.lag.len() + u.period.len() + 2);
    path.push(q);
    path.extend_from_slice(&u.lag);
    path.extend_from_slice(&u.period);
    path.push(u.period[0]);
    ctx.is_path(x, &path)
}

fn check(a: &ParityAutomaton, up: &UpSet) -> Result<(), ArenaError> {
    if a.convention != Convention::MaxEven {
        return Err(ArenaError::ConventionMismatch);
    }
    if a.edge_context()? != up.ctx {
        return Err(ArenaError::UpContextMismatch);
    }
    Ok(())
}

struct Builder<'a> {
    a: &'a ParityAutomaton,
    up: &'a UpSet,
    semantics: Semantics,
    ids: BTreeMap<NodeKind, usize>,
    nodes: Vec<NodeKind>,
    queue: VecDeque<usize>,
    edges: Vec<ArenaEdge>,
    out: Vec<Vec<usize>>,
}

type EdgeKey = (usize, Option<u32>, EdgeSize, Option<InterruptKind>, Option<usize>);

impl Builder<'_> {
    fn node(&mut self, k: NodeKind) -> usize {
        if let Some(&v) = self.ids.get(&k) {
            return v;
        }
        let v = self.nodes.len();
        self.ids.insert(k, v);
        self.nodes.push(k);
        self.out.push(Vec::new());
        self.queue.push_back(v);
        v
    }

    fn node_priority(&self, v: usize) -> u32 {
        match (self.semantics, self.nodes[v].state()) {
            (Semantics::Fv, Some(q)) => self.a.priority[q],
            _ => 0,
        }
    }

    fn edge(&mut self, seen: &mut BTreeSet<EdgeKey>, from: usize, to: NodeKind, e: EdgeParts) {
        let to = self.node(to);
        if !seen.insert((to, e.label, e.size, e.interrupt, e.letter)) {
            return;
        }
        let priority = e.label.unwrap_or(0).max(self.node_priority(from));
        self.out[from].push(self.edges.len());
        self.edges.push(ArenaEdge {
            from,
            to,
            label: e.label,
            size: e.size,
            interrupt: e.interrupt,
            priority,
            letter: e.letter,
            position: e.position,
        });
    }

    fn expand(&mut self, v: usize) {
        let (a, up) = (self.a, self.up);
        let nin = a.num_in();
        let mut seen = BTreeSet::new();
        match self.nodes[v] {
            NodeKind::Fresh => {
                for x in 0..nin {
                    let e = EdgeParts { letter: Some(x), ..EdgeParts::plain() };
                    self.edge(&mut seen, v, NodeKind::Pair { q: a.initial, a: x }, e);
                }
            }
            NodeKind::Pair { q, a: x } => match self.semantics {
                Semantics::Rc => self.up_edges(&mut seen, v, q, x),
                Semantics::Fv => {
                    let mut targets = BTreeSet::new();
                    for y in 0..a.num_out() {
                        let q2 = a.step(q, x, y);
                        if targets.insert(q2) {
                            let e = EdgeParts { letter: Some(y), ..EdgeParts::plain() };
                            self.edge(&mut seen, v, NodeKind::Dagger { q: q2 }, e);
                        }
                    }
                }
            },
            NodeKind::Dagger { q } => {
                for x in 0..nin {
                    let e = EdgeParts { letter: Some(x), ..EdgeParts::plain() };
                    self.edge(&mut seen, v, NodeKind::DaggerLetter { q, a: x }, e);
                }
            }
            NodeKind::DaggerLetter { q, a: x } => self.up_edges(&mut seen, v, q, x),
            NodeKind::Up { a: x, u, .. } => {
                let w = &up.members[u];
                let (lag, per) = (w.lag.len(), w.period.len());
                let scan = match self.semantics {
                    Semantics::Fv if per % 2 == 1 => lag + 2 * per,
                    _ => lag + per,
                };
                let big = word_priority(a, w);
                let mut running = 0;
                for n in 1..=scan {
                    let q2 = w.at(n);
                    running = running.max(a.priority[q2]);
                    let (label, size) = if n <= lag { (running, EdgeSize::Small) } else { (big, EdgeSize::Big) };
                    for b in (0..nin).filter(|&b| b != x) {
                        let (target, interrupt) = match self.semantics {
                            Semantics::Rc => (NodeKind::Pair { q: q2, a: b }, None),
                            Semantics::Fv if n % 2 == 1 => (NodeKind::Pair { q: q2, a: b }, Some(InterruptKind::Left)),
                            Semantics::Fv => (NodeKind::DaggerLetter { q: q2, a: b }, Some(InterruptKind::Right)),
                        };
                        let e = EdgeParts { label: Some(label), size, interrupt, letter: Some(b), position: Some(n) };
                        self.edge(&mut seen, v, target, e);
                    }
                }
            }
        }
    }

    fn up_edges(&mut self, seen: &mut BTreeSet<EdgeKey>, v: usize, q: usize, x: usize) {
        for (k, w) in self.up.members.iter().enumerate() {
            if is_move(self.up, q, x, w) {
                self.edge(seen, v, NodeKind::Up { q, a: x, u: k }, EdgeParts::plain());
            }
        }
    }
}

struct EdgeParts {
    label: Option<u32>,
    size: EdgeSize,
    interrupt: Option<InterruptKind>,
    letter: Option<usize>,
    position: Option<usize>,
}

impl EdgeParts {
    fn plain() -> Self {
        EdgeParts { label: None, size: EdgeSize::Plain, interrupt: None, letter: None, position: None }
    }
}

fn build(a: &ParityAutomaton, up: &UpSet, semantics: Semantics) -> Result<Arena, ArenaError> {
    check(a, up)?;
    let mut b = Builder {
        a,
        up,
        semantics,
        ids: BTreeMap::new(),
        nodes: Vec::new(),
        queue: VecDeque::new(),
        edges: Vec::new(),
        out: Vec::new(),
    };
    b.node(NodeKind::Fresh);
    while let Some(v) = b.queue.pop_front() {
        b.expand(v);
    }
    let node_priority = (0..b.nodes.len()).map(|v| b.node_priority(v)).collect();
    let is_final = b
        .nodes
        .iter()
        .map(|k| match *k {
            NodeKind::Up { u, .. } => period_priority(a, &up.members[u]).is_multiple_of(2),
            _ => false,
        })
        .collect();
    Ok(Arena {
        semantics,
        automaton: a.clone(),
        up: up.clone(),
        nodes: b.nodes,
        node_priority,
        edges: b.edges,
        out: b.out,
        is_final,
    })
}

pub fn build_rc_arena(a: &ParityAutomaton, up: &UpSet) -> Result<Arena, ArenaError> {
    build(a, up, Semantics::Rc)
}

pub fn build_fv_arena(a: &ParityAutomaton, up: &UpSet) -> Result<Arena, ArenaError> {
    build(a, up, Semantics::Fv)
}

/// Converts to max-even, builds the path-restricted class table and UP set,
/// then the arena.
pub fn arena_for_spec(spec: &ParityAutomaton, semantics: Semantics, cap: usize) -> Result<Arena, ArenaError> {
    let a = spec.convert_convention(Convention::MaxEven);
    let table = build_class_table(&a.edge_context()?, TableScope::Paths, cap)?;
    let up = build_up(&table);
    build(&a, &up, semantics)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Output nodes are boxes, final nodes double circles, big edges bold red.
pub fn export_dot(arena: &Arena) -> String {
    let mut s = String::from("digraph arena {\n");
    for v in 0..arena.num_nodes() {
        let shape = match (arena.owner(v), arena.is_final[v]) {
            (Owner::Output, _) => "box",
            (_, true) => "doublecircle",
            _ => "ellipse",
        };
        let _ = writeln!(s, "  n{v} [label=\"{}\", shape={shape}];", dot_escape(&arena.node_label(v)));
    }
    for (i, e) in arena.edges.iter().enumerate() {
        let style = if e.size == EdgeSize::Big { ", style=bold, color=red" } else { "" };
        let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"{style}];", e.from, e.to, dot_escape(&arena.edge_label(i)));
    }
    s.push_str("}\n");
    s
}
