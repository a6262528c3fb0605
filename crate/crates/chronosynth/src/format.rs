//! JSON file formats: automata, signals, machines and arena dumps.

use std::collections::BTreeMap;

use chronosynth_core::arena::{EdgeSize, InterruptKind, Owner};
use chronosynth_core::automaton::{AutomatonBuilder, AutomatonError, Convention};
use chronosynth_core::discrete_game::{MealyMachine, MooreCounterMachine};
use chronosynth_core::signal::{FvSignal, Piece, SignalError, Tail};
use chronosynth_core::time::{parse_time, ParseTimeError, Time};
use chronosynth_core::{Arena, ParityAutomaton};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown convention `{0}` (expected min_even or max_even)")]
    Convention(String),
    #[error("priority missing for state `{0}`")]
    MissingPriority(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Time(#[from] ParseTimeError),
    #[error(transparent)]
    Signal(#[from] SignalError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionFile {
    pub from: String,
    #[serde(rename = "in")]
    pub input: String,
    pub out: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonFile {
    pub states: Vec<String>,
    pub sigma_in: Vec<String>,
    pub sigma_out: Vec<String>,
    pub initial: String,
    pub priority: BTreeMap<String, u32>,
    pub convention: String,
    pub transitions: Vec<TransitionFile>,
}

impl AutomatonFile {
    pub fn from_automaton(a: &ParityAutomaton) -> Self {
        let mut transitions = Vec::new();
        for (q, from) in a.states.iter().enumerate() {
            for (x, input) in a.sigma_in.iter().enumerate() {
                for (y, out) in a.sigma_out.iter().enumerate() {
                    let to = a.states[a.step(q, x, y)].clone();
                    transitions.push(TransitionFile { from: from.clone(), input: input.clone(), out: out.clone(), to });
                }
            }
        }
        AutomatonFile {
            states: a.states.clone(),
            sigma_in: a.sigma_in.clone(),
            sigma_out: a.sigma_out.clone(),
            initial: a.states[a.initial].clone(),
            priority: a.states.iter().cloned().zip(a.priority.iter().copied()).collect(),
            convention: a.convention.name().to_string(),
            transitions,
        }
    }

    /// Missing transitions complete to the rejecting sink `__sink__`.
    pub fn to_automaton(&self) -> Result<ParityAutomaton, FormatError> {
        let conv =
            Convention::parse(&self.convention).ok_or_else(|| FormatError::Convention(self.convention.clone()))?;
        let mut b = AutomatonBuilder::new(&self.sigma_in, &self.sigma_out, conv);
        for s in &self.states {
            let p = *self.priority.get(s).ok_or_else(|| FormatError::MissingPriority(s.clone()))?;
            b = b.state(s, p);
        }
        b = b.initial(&self.initial);
        for t in &self.transitions {
            b = b.transition(&t.from, &t.input, &t.out, &t.to);
        }
        Ok(b.build()?)
    }
}

pub fn parse_automaton(text: &str) -> Result<ParityAutomaton, FormatError> {
    serde_json::from_str::<AutomatonFile>(text)?.to_automaton()
}

pub fn automaton_json(a: &ParityAutomaton) -> String {
    pretty(&AutomatonFile::from_automaton(a))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceFile {
    pub start: String,
    pub point: String,
    pub interval: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LassoTailFile {
    pub delta: String,
    pub block: Vec<PieceFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailFile {
    Constant(String),
    Lasso(LassoTailFile),
}

/// `point_values` has one entry per breakpoint, `interval_values` one per
/// gap between consecutive breakpoints; the last breakpoint anchors the tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalFile {
    pub breakpoints: Vec<String>,
    pub point_values: Vec<String>,
    pub interval_values: Vec<String>,
    pub tail: TailFile,
}

impl SignalFile {
    pub fn from_signal(s: &FvSignal<String>) -> Self {
        let mut breakpoints: Vec<String> = s.prefix().iter().map(|p| p.start.to_string()).collect();
        breakpoints.push(s.anchor().to_string());
        let mut point_values: Vec<String> = s.prefix().iter().map(|p| p.point.clone()).collect();
        let interval_values = s.prefix().iter().map(|p| p.interval.clone()).collect();
        let tail = match s.tail() {
            Tail::Constant { point, value } => {
                point_values.push(point.clone());
                TailFile::Constant(value.clone())
            }
            Tail::Periodic { delta, block } => {
                point_values.push(block[0].point.clone());
                TailFile::Lasso(LassoTailFile {
                    delta: delta.to_string(),
                    block: block
                        .iter()
                        .map(|p| PieceFile {
                            start: p.start.to_string(),
                            point: p.point.clone(),
                            interval: p.interval.clone(),
                        })
                        .collect(),
                })
            }
        };
        SignalFile { breakpoints, point_values, interval_values, tail }
    }

    pub fn to_signal(&self) -> Result<FvSignal<String>, FormatError> {
        let times = |v: &[String]| v.iter().map(|t| parse_time(t)).collect::<Result<Vec<Time>, _>>();
        let breakpoints = times(&self.breakpoints)?;
        let tail = match &self.tail {
            TailFile::Constant(v) => {
                Tail::Constant { point: self.point_values.last().cloned().unwrap_or_default(), value: v.clone() }
            }
            TailFile::Lasso(l) => Tail::Periodic {
                delta: parse_time(&l.delta)?,
                block: l
                    .block
                    .iter()
                    .map(|p| {
                        Ok(Piece { start: parse_time(&p.start)?, point: p.point.clone(), interval: p.interval.clone() })
                    })
                    .collect::<Result<_, FormatError>>()?,
            },
        };
        Ok(FvSignal::new(breakpoints, self.point_values.clone(), self.interval_values.clone(), tail)?)
    }
}

pub fn parse_signal(text: &str) -> Result<FvSignal<String>, FormatError> {
    serde_json::from_str::<SignalFile>(text)?.to_signal()
}

pub fn signal_json(s: &FvSignal<String>) -> String {
    pretty(&SignalFile::from_signal(s))
}

/// Mealy machines list `{from, in, out, to}` transitions; Moore counter
/// machines list `{from, out, to}` transitions plus the input letter emitted
/// in each state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineFile {
    pub kind: String,
    pub states: Vec<String>,
    pub sigma_in: Vec<String>,
    pub sigma_out: Vec<String>,
    pub initial: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emits: Option<BTreeMap<String, String>>,
    pub transitions: Vec<MachineTransition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineTransition {
    pub from: String,
    #[serde(rename = "in", default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub out: String,
    pub to: String,
}

impl MachineFile {
    pub fn mealy(m: &MealyMachine) -> Self {
        let mut transitions = Vec::new();
        for q in 0..m.states.len() {
            for a in 0..m.sigma_in.len() {
                let (t, b) = m.step(q, a);
                transitions.push(MachineTransition {
                    from: m.states[q].clone(),
                    input: Some(m.sigma_in[a].clone()),
                    out: m.sigma_out[b].clone(),
                    to: m.states[t].clone(),
                });
            }
        }
        MachineFile {
            kind: "mealy".into(),
            states: m.states.clone(),
            sigma_in: m.sigma_in.clone(),
            sigma_out: m.sigma_out.clone(),
            initial: m.states[m.initial].clone(),
            emits: None,
            transitions,
        }
    }

    pub fn moore(m: &MooreCounterMachine) -> Self {
        let mut transitions = Vec::new();
        for q in 0..m.states.len() {
            for b in 0..m.sigma_out.len() {
                transitions.push(MachineTransition {
                    from: m.states[q].clone(),
                    input: None,
                    out: m.sigma_out[b].clone(),
                    to: m.states[m.step(q, b)].clone(),
                });
            }
        }
        let emits = m.states.iter().cloned().zip(m.output.iter().map(|&a| m.sigma_in[a].clone())).collect();
        MachineFile {
            kind: "moore".into(),
            states: m.states.clone(),
            sigma_in: m.sigma_in.clone(),
            sigma_out: m.sigma_out.clone(),
            initial: m.states[m.initial].clone(),
            emits: Some(emits),
            transitions,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ArenaNodeFile {
    pub id: usize,
    pub label: String,
    pub owner: &'static str,
    #[serde(rename = "final")]
    pub is_final: bool,
    pub priority: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArenaEdgeFile {
    pub id: usize,
    pub from: usize,
    pub to: usize,
    pub label: String,
    pub size: &'static str,
    pub priority: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub letter: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interrupt: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArenaFile {
    pub semantics: &'static str,
    pub nodes: Vec<ArenaNodeFile>,
    pub edges: Vec<ArenaEdgeFile>,
}

pub fn owner_name(o: Owner) -> &'static str {
    match o {
        Owner::Input => "I",
        Owner::Output => "O",
    }
}

impl ArenaFile {
    pub fn new(ar: &Arena) -> Self {
        let nodes = (0..ar.num_nodes())
            .map(|v| ArenaNodeFile {
                id: v,
                label: ar.node_label(v),
                owner: owner_name(ar.owner(v)),
                is_final: ar.is_final[v],
                priority: ar.node_priority[v],
            })
            .collect();
        let edges = ar
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                // Input letters label I's edges and interrupts; output letters label O's moves.
                let letter = e.letter.map(|l| match ar.owner(e.from) {
                    Owner::Output => ar.automaton.sigma_out[l].clone(),
                    Owner::Input => ar.automaton.sigma_in[l].clone(),
                });
                ArenaEdgeFile {
                    id: i,
                    from: e.from,
                    to: e.to,
                    label: ar.edge_label(i),
                    size: match e.size {
                        EdgeSize::Plain => "plain",
                        EdgeSize::Small => "small",
                        EdgeSize::Big => "big",
                    },
                    priority: e.priority,
                    letter,
                    interrupt: e.interrupt.map(|k| match k {
                        InterruptKind::Left => "left",
                        InterruptKind::Right => "right",
                    }),
                    position: e.position,
                }
            })
            .collect();
        ArenaFile { semantics: ar.semantics.name(), nodes, edges }
    }
}

pub fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
