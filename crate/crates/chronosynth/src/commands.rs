//! Subcommand logic. Each command returns the bytes for standard output.

use chronosynth_core::arena::{arena_for_spec, export_dot, ArenaError, NodeKind};
use chronosynth_core::continuous_synth::{
    find_loss_witness, root_branches, search_from, ContinuousError, PositionalChoice, SearchResult, StrategyGraph,
};
use chronosynth_core::definable_synth::{
    is_d_automaton, solve_definable, solve_definable_sc, to_d_alphabet, DefinableError, DefinableScVerdict,
    DefinableVerdict,
};
use chronosynth_core::discrete_game::{mealy_to_dot, moore_to_dot, solve, DiscreteVerdict};
use chronosynth_core::state_monoid::{build_class_table, build_up, MonoidError, TableScope};
use chronosynth_core::{Arena, ParityAutomaton, Semantics};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::Config;
use crate::format::{pretty, ArenaFile, FormatError, MachineFile};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("resource cap: {0}")]
    Cap(String),
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("check failed: {0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Undecided(_) => 4,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<MonoidError> for CliError {
    fn from(e: MonoidError) -> Self {
        match e {
            MonoidError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ArenaError> for CliError {
    fn from(e: ArenaError) -> Self {
        match e {
            ArenaError::Monoid(m) => m.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ContinuousError> for CliError {
    fn from(e: ContinuousError) -> Self {
        match e {
            ContinuousError::Arena(a) => a.into(),
            cap @ ContinuousError::StrategyCap { .. } => CliError::Cap(cap.to_string()),
        }
    }
}

impl From<DefinableError> for CliError {
    fn from(e: DefinableError) -> Self {
        CliError::Input(e.to_string())
    }
}

pub fn solve_discrete(spec: &ParityAutomaton, dot: bool) -> String {
    match solve(spec) {
        DiscreteVerdict::OutputWins(m) if dot => mealy_to_dot(&m),
        DiscreteVerdict::InputWins(c) if dot => moore_to_dot(&c),
        DiscreteVerdict::OutputWins(m) => pretty(&json!({"winner": "output", "machine": MachineFile::mealy(&m)})),
        DiscreteVerdict::InputWins(c) => pretty(&json!({"winner": "input", "machine": MachineFile::moore(&c)})),
    }
}

/// Specs over a plain alphabet are first read over point/interval pairs.
pub fn as_d_spec(spec: &ParityAutomaton) -> ParityAutomaton {
    if is_d_automaton(spec) {
        spec.clone()
    } else {
        log::info!("reading the spec over interleaved point/interval letters");
        to_d_alphabet(spec)
    }
}

pub fn definable(spec: &ParityAutomaton, sc: bool) -> Result<String, CliError> {
    let d = as_d_spec(spec);
    let v = if sc {
        match solve_definable_sc(&d)? {
            DefinableScVerdict::CounterOperator(c) => {
                json!({"sc_counter_operator": true, "witness": MachineFile::moore(&c)})
            }
            DefinableScVerdict::NoCounterOperator => json!({"sc_counter_operator": false}),
        }
    } else {
        match solve_definable(&d)? {
            DefinableVerdict::Definable(m) => json!({"definable": true, "witness": MachineFile::mealy(&m)}),
            DefinableVerdict::NotDefinable { losing_region, .. } => {
                log::info!("input wins the product game from {} states", losing_region.len());
                json!({"definable": false})
            }
        }
    };
    Ok(pretty(&v))
}

pub fn monoid(spec: &ParityAutomaton, table: bool, paths: bool, cfg: &Config) -> Result<String, CliError> {
    let ctx = spec.edge_context().map_err(|e| CliError::Input(e.to_string()))?;
    let scope = if paths { TableScope::Paths } else { TableScope::All };
    let t = build_class_table(&ctx, scope, cfg.signatures)?;
    let up = build_up(&t);
    let mut v = json!({
        "classes": t.len(),
        "idempotents": t.idempotents.len(),
        "d_q": t.d_q,
        "up": up.members.len(),
    });
    if table {
        let name = |w: &[usize]| w.iter().map(|&q| spec.states[q].as_str()).collect::<Vec<_>>().join(" ");
        let rows: Vec<Value> = t
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| json!({"class": i, "witness": name(&c.witness), "idempotent": t.is_idempotent(i)}))
            .collect();
        let members: Vec<String> =
            up.members.iter().map(|m| format!("{}({})^w", name(&m.lag), name(&m.period))).collect();
        v["table"] = Value::Array(rows);
        v["up_members"] = json!(members);
    }
    Ok(pretty(&v))
}

pub fn build_arena(spec: &ParityAutomaton, sem: Semantics, cfg: &Config) -> Result<Arena, CliError> {
    Ok(arena_for_spec(spec, sem, cfg.signatures)?)
}

pub fn arena(spec: &ParityAutomaton, sem: Semantics, dot: bool, cfg: &Config) -> Result<String, CliError> {
    let ar = build_arena(spec, sem, cfg)?;
    Ok(if dot { export_dot(&ar) } else { pretty(&ArenaFile::new(&ar)) })
}

/// Branches from the root searched on `jobs` threads; the first witness in
/// branch order is kept, so the answer matches the sequential search.
pub fn parallel_search(arena: &Arena, cap: u64, jobs: usize) -> Result<SearchResult, ContinuousError> {
    let root = StrategyGraph::new(arena, PositionalChoice::empty(arena));
    if find_loss_witness(&root).is_some() {
        return Ok(SearchResult { witness: None, strategies_examined: 1 });
    }
    if root.undecided().is_empty() {
        return Ok(SearchResult { witness: Some(root.choice), strategies_examined: 1 });
    }
    let v = root.undecided()[0];
    let branches: Vec<PositionalChoice> = root_branches(arena)
        .into_iter()
        .filter(|c| {
            let t = arena.edges[c.get(v).expect("root branch")].to;
            !(matches!(arena.nodes[t], NodeKind::Up { .. }) && !arena.is_final[t])
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    let results: Vec<_> = pool.install(|| branches.into_par_iter().map(|b| search_from(arena, b, cap)).collect());
    let mut examined = 1;
    for r in results {
        let r = r?;
        examined += r.strategies_examined;
        if r.witness.is_some() {
            return Ok(SearchResult { witness: r.witness, strategies_examined: examined });
        }
    }
    Ok(SearchResult { witness: None, strategies_examined: examined })
}

pub fn search(arena: &Arena, cfg: &Config, jobs: usize) -> Result<SearchResult, CliError> {
    let r = if jobs > 1 {
        parallel_search(arena, cfg.strategies, jobs)?
    } else {
        search_from(arena, PositionalChoice::empty(arena), cfg.strategies)?
    };
    Ok(r)
}

pub fn witness_json(arena: &Arena, choice: &PositionalChoice) -> Value {
    let moves: Vec<Value> = (0..arena.num_nodes())
        .filter_map(|v| {
            let e = choice.get(v)?;
            Some(json!({"node": arena.node_label(v), "edge": e, "to": arena.node_label(arena.edges[e].to)}))
        })
        .collect();
    Value::Array(moves)
}

pub fn synth(
    spec: &ParityAutomaton,
    sem: Semantics,
    stats: bool,
    jobs: usize,
    cfg: &Config,
) -> Result<String, CliError> {
    let ar = build_arena(spec, sem, cfg)?;
    let r = search(&ar, cfg, jobs)?;
    let mut v = json!({
        "semantics": sem.name(),
        "realizable": r.witness.is_some(),
        "witness": r.witness.as_ref().map(|c| witness_json(&ar, c)),
    });
    if stats {
        v["stats"] = json!({
            "arena_nodes": ar.num_nodes(),
            "arena_edges": ar.num_edges(),
            "up_members": ar.up.members.len(),
            "d_q": ar.up.d_q,
            "strategies_examined": r.strategies_examined,
        });
    }
    Ok(pretty(&v))
}
