//! Deterministic parity automata over `Σ_in × Σ_out`.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::omega_word::LassoWord;

pub const SINK_NAME: &str = "__sink__";
pub const REJECT_NAME: &str = "__reject__";

/// Which extremal priority among the states seen infinitely often must be even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Convention {
    MinEven,
    MaxEven,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::MinEven => "min_even",
            Convention::MaxEven => "max_even",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "min_even" => Some(Convention::MinEven),
            "max_even" => Some(Convention::MaxEven),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("automaton has no states")]
    NoStates,
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("letter `{0}` is outside the alphabet")]
    UnknownLetter(String),
    #[error("conflicting transitions from `{from}` on ({input},{output})")]
    Nondeterministic { from: String, input: String, output: String },
    #[error("letter index ({0},{1}) is outside the alphabet")]
    LetterOutOfRange(usize, usize),
    #[error("monitor alphabet does not match the automaton alphabet")]
    AlphabetMismatch,
    #[error("{0} states exceed the 64-state limit of bitset contexts")]
    TooManyStates(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityAutomaton {
    pub states: Vec<String>,
    pub sigma_in: Vec<String>,
    pub sigma_out: Vec<String>,
    delta: Vec<usize>,
    pub initial: usize,
    pub priority: Vec<u32>,
    pub convention: Convention,
}

/// Incremental construction from named states and letters.
#[derive(Debug, Clone)]
pub struct AutomatonBuilder {
    sigma_in: Vec<String>,
    sigma_out: Vec<String>,
    convention: Convention,
    states: Vec<(String, u32)>,
    initial: Option<String>,
    transitions: Vec<(String, String, String, String, bool)>,
}

impl AutomatonBuilder {
    pub fn new<S: AsRef<str>>(sigma_in: &[S], sigma_out: &[S], convention: Convention) -> Self {
        AutomatonBuilder {
            sigma_in: sigma_in.iter().map(|s| s.as_ref().to_string()).collect(),
            sigma_out: sigma_out.iter().map(|s| s.as_ref().to_string()).collect(),
            convention,
            states: Vec::new(),
            initial: None,
            transitions: Vec::new(),
        }
    }

    pub fn state(mut self, name: &str, priority: u32) -> Self {
        self.states.push((name.to_string(), priority));
        self
    }

    pub fn initial(mut self, name: &str) -> Self {
        self.initial = Some(name.to_string());
        self
    }

    pub fn transition(mut self, from: &str, input: &str, output: &str, to: &str) -> Self {
        self.transitions.push((from.to_string(), input.to_string(), output.to_string(), to.to_string(), false));
        self
    }

    /// Every `(input, output)` pair from `from` goes to `to` unless set explicitly.
    pub fn default_to(mut self, from: &str, to: &str) -> Self {
        for i in self.sigma_in.clone() {
            for o in self.sigma_out.clone() {
                self.transitions.push((from.to_string(), i.clone(), o, to.to_string(), true));
            }
        }
        self
    }

    /// Explicit transitions take precedence over [`Self::default_to`] fills;
    /// two explicit transitions that disagree are an error.
    pub fn build(self) -> Result<ParityAutomaton, AutomatonError> {
        if self.states.is_empty() {
            return Err(AutomatonError::NoStates);
        }
        if self.sigma_in.is_empty() || self.sigma_out.is_empty() {
            return Err(AutomatonError::EmptyAlphabet);
        }
        let index_of = |names: &[String]| -> Result<BTreeMap<String, usize>, AutomatonError> {
            let mut m = BTreeMap::new();
            for (i, n) in names.iter().enumerate() {
                if m.insert(n.clone(), i).is_some() {
                    return Err(AutomatonError::Duplicate(n.clone()));
                }
            }
            Ok(m)
        };
        let ins = index_of(&self.sigma_in)?;
        let outs = index_of(&self.sigma_out)?;
        let mut names: Vec<String> = self.states.iter().map(|(n, _)| n.clone()).collect();
        let mut priority: Vec<u32> = self.states.iter().map(|(_, p)| *p).collect();
        let mut sidx = index_of(&names)?;
        let (nin, nout) = (self.sigma_in.len(), self.sigma_out.len());
        let none = usize::MAX;
        let mut delta = vec![none; names.len() * nin * nout];
        let mut explicit = vec![false; delta.len()];
        for (from, i, o, to, is_default) in &self.transitions {
            let f = *sidx.get(from).ok_or_else(|| AutomatonError::UnknownState(from.clone()))?;
            let t = *sidx.get(to).ok_or_else(|| AutomatonError::UnknownState(to.clone()))?;
            let a = *ins.get(i).ok_or_else(|| AutomatonError::UnknownLetter(i.clone()))?;
            let b = *outs.get(o).ok_or_else(|| AutomatonError::UnknownLetter(o.clone()))?;
            let slot = (f * nin + a) * nout + b;
            if *is_default {
                if !explicit[slot] {
                    delta[slot] = t;
                }
            } else {
                if explicit[slot] && delta[slot] != t {
                    return Err(AutomatonError::Nondeterministic {
                        from: from.clone(),
                        input: i.clone(),
                        output: o.clone(),
                    });
                }
                delta[slot] = t;
                explicit[slot] = true;
            }
        }
        let initial = match &self.initial {
            Some(n) => *sidx.get(n).ok_or_else(|| AutomatonError::UnknownState(n.clone()))?,
            None => 0,
        };
        if delta.contains(&none) {
            let sink = match sidx.get(SINK_NAME) {
                Some(&s) => s,
                None => {
                    let s = names.len();
                    names.push(SINK_NAME.to_string());
                    priority.push(1);
                    sidx.insert(SINK_NAME.to_string(), s);
                    delta.extend(core::iter::repeat_n(s, nin * nout));
                    s
                }
            };
            for d in delta.iter_mut() {
                if *d == none {
                    *d = sink;
                }
            }
        }
        Ok(ParityAutomaton {
            states: names,
            sigma_in: self.sigma_in,
            sigma_out: self.sigma_out,
            delta,
            initial,
            priority,
            convention: self.convention,
        })
    }
}

impl ParityAutomaton {
    /// Builds directly from index data. `delta[(q*|Σ_in|+a)*|Σ_out|+b]`.
    pub fn from_parts(
        states: Vec<String>,
        sigma_in: Vec<String>,
        sigma_out: Vec<String>,
        delta: Vec<usize>,
        initial: usize,
        priority: Vec<u32>,
        convention: Convention,
    ) -> Result<Self, AutomatonError> {
        if states.is_empty() {
            return Err(AutomatonError::NoStates);
        }
        if sigma_in.is_empty() || sigma_out.is_empty() {
            return Err(AutomatonError::EmptyAlphabet);
        }
        let n = states.len();
        if delta.len() != n * sigma_in.len() * sigma_out.len() || priority.len() != n || initial >= n {
            return Err(AutomatonError::UnknownState(format!("index data of size {n}")));
        }
        if let Some(&bad) = delta.iter().find(|&&t| t >= n) {
            return Err(AutomatonError::UnknownState(format!("#{bad}")));
        }
        Ok(ParityAutomaton { states, sigma_in, sigma_out, delta, initial, priority, convention })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_in(&self) -> usize {
        self.sigma_in.len()
    }

    pub fn num_out(&self) -> usize {
        self.sigma_out.len()
    }

    pub fn step(&self, q: usize, a: usize, b: usize) -> usize {
        self.delta[(q * self.num_in() + a) * self.num_out() + b]
    }

    pub fn delta(&self) -> &[usize] {
        &self.delta
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn in_index(&self, name: &str) -> Option<usize> {
        self.sigma_in.iter().position(|s| s == name)
    }

    pub fn out_index(&self, name: &str) -> Option<usize> {
        self.sigma_out.iter().position(|s| s == name)
    }

    pub fn max_priority(&self) -> u32 {
        self.priority.iter().copied().max().unwrap_or(0)
    }

    /// Resolves a named word to letter indices.
    pub fn index_word(&self, word: &LassoWord<(String, String)>) -> Result<LassoWord<(usize, usize)>, AutomatonError> {
        let look = |(i, o): &(String, String)| -> Result<(usize, usize), AutomatonError> {
            let a = self.in_index(i).ok_or_else(|| AutomatonError::UnknownLetter(i.clone()))?;
            let b = self.out_index(o).ok_or_else(|| AutomatonError::UnknownLetter(o.clone()))?;
            Ok((a, b))
        };
        let prefix = word.prefix().iter().map(look).collect::<Result<Vec<_>, _>>()?;
        let period = word.period().iter().map(look).collect::<Result<Vec<_>, _>>()?;
        Ok(LassoWord::new(prefix, period).expect("period nonempty"))
    }

    /// The run `r_0 r_1 …` with `r_{i+1} = δ(r_i, σ_i)`, as a lasso over states.
    ///
    /// The run period is a multiple of the word period, at most `|Q|` times longer.
    pub fn run_over(&self, word: &LassoWord<(usize, usize)>) -> Result<LassoWord<usize>, AutomatonError> {
        for &(a, b) in word.prefix().iter().chain(word.period()) {
            if a >= self.num_in() || b >= self.num_out() {
                return Err(AutomatonError::LetterOutOfRange(a, b));
            }
        }
        let mut states = vec![self.initial];
        let mut q = self.initial;
        for &(a, b) in word.prefix() {
            q = self.step(q, a, b);
            states.push(q);
        }
        let lag = word.prefix().len();
        let m = word.period().len();
        let mut boundary: Vec<usize> = vec![q];
        loop {
            for &(a, b) in word.period() {
                q = self.step(q, a, b);
                states.push(q);
            }
            if let Some(k) = boundary.iter().position(|&s| s == q) {
                let start = lag + k * m;
                let prefix = states[..start].to_vec();
                let period = states[start..states.len() - 1].to_vec();
                return Ok(LassoWord::new(prefix, period).expect("period nonempty"));
            }
            boundary.push(q);
        }
    }

    pub fn accepts_run(&self, run: &LassoWord<usize>) -> bool {
        let pr = run.period().iter().map(|&q| self.priority[q]);
        let extreme = match self.convention {
            Convention::MinEven => pr.min(),
            Convention::MaxEven => pr.max(),
        };
        extreme.is_some_and(|p| p % 2 == 0)
    }

    pub fn accepts(&self, word: &LassoWord<(usize, usize)>) -> Result<bool, AutomatonError> {
        Ok(self.accepts_run(&self.run_over(word)?))
    }

    /// Same language under `target`, via `p ↦ M − p` with `M` the least even
    /// number at or above the maximal priority.
    pub fn convert_convention(&self, target: Convention) -> ParityAutomaton {
        if target == self.convention {
            return self.clone();
        }
        let max = self.max_priority();
        let m = max + max % 2;
        ParityAutomaton { priority: self.priority.iter().map(|&p| m - p).collect(), convention: target, ..self.clone() }
    }

    /// Per-letter path relations `E_a(q,q') ⟺ ∃b. δ(q,(a,b)) = q'`.
    pub fn edge_context(&self) -> Result<EdgeContext, AutomatonError> {
        let n = self.num_states();
        if n > 64 {
            return Err(AutomatonError::TooManyStates(n));
        }
        let mut adj = vec![0u64; self.num_in() * n];
        for q in 0..n {
            for a in 0..self.num_in() {
                for b in 0..self.num_out() {
                    adj[a * n + q] |= 1 << self.step(q, a, b);
                }
            }
        }
        Ok(EdgeContext { n, letters: self.num_in(), adj })
    }

    /// Conjunction with a safety monitor over the same alphabet. Pairs whose
    /// monitor component hits the sink collapse into one absorbing state that
    /// carries an odd priority seen alone, so it rejects under either convention.
    pub fn product_with_monitor(&self, m: &SafetyMonitor) -> Result<ParityAutomaton, AutomatonError> {
        if m.sigma_in != self.sigma_in || m.sigma_out != self.sigma_out {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let (nin, nout) = (self.num_in(), self.num_out());
        let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut queue = VecDeque::new();
        let start = (self.initial, m.initial);
        let reject_state = usize::MAX;
        let mut delta: Vec<usize> = Vec::new();
        if m.initial != m.sink {
            ids.insert(start, 0);
            pairs.push(start);
            queue.push_back(start);
        }
        while let Some((q, s)) = queue.pop_front() {
            for a in 0..nin {
                for b in 0..nout {
                    let s2 = m.step(s, a, b);
                    let target = if s2 == m.sink {
                        reject_state
                    } else {
                        let key = (self.step(q, a, b), s2);
                        *ids.entry(key).or_insert_with(|| {
                            pairs.push(key);
                            queue.push_back(key);
                            pairs.len() - 1
                        })
                    };
                    delta.push(target);
                }
            }
        }
        let reject = pairs.len();
        let mut states: Vec<String> =
            pairs.iter().map(|&(q, s)| format!("{}|{}", self.states[q], m.state_name(s))).collect();
        let mut priority: Vec<u32> = pairs.iter().map(|&(q, _)| self.priority[q]).collect();
        let needs_reject = pairs.is_empty() || delta.contains(&reject_state);
        if needs_reject {
            states.push(REJECT_NAME.to_string());
            priority.push(1);
            delta.extend(core::iter::repeat_n(reject, nin * nout));
            for d in delta.iter_mut() {
                if *d == reject_state {
                    *d = reject;
                }
            }
        }
        Ok(ParityAutomaton {
            states,
            sigma_in: self.sigma_in.clone(),
            sigma_out: self.sigma_out.clone(),
            delta,
            initial: 0,
            priority,
            convention: self.convention,
        })
    }
}

/// A deterministic safety automaton with a rejecting absorbing sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyMonitor {
    pub sigma_in: Vec<String>,
    pub sigma_out: Vec<String>,
    pub num_states: usize,
    pub initial: usize,
    pub sink: usize,
    /// `delta[(s*|Σ_in|+a)*|Σ_out|+b]`.
    pub delta: Vec<usize>,
    pub names: Vec<String>,
}

impl SafetyMonitor {
    pub fn step(&self, s: usize, a: usize, b: usize) -> usize {
        if s == self.sink {
            return self.sink;
        }
        self.delta[(s * self.sigma_in.len() + a) * self.sigma_out.len() + b]
    }

    pub fn state_name(&self, s: usize) -> String {
        self.names.get(s).cloned().unwrap_or_else(|| format!("m{s}"))
    }

    pub fn accept_all(sigma_in: &[String], sigma_out: &[String]) -> Self {
        SafetyMonitor {
            sigma_in: sigma_in.to_vec(),
            sigma_out: sigma_out.to_vec(),
            num_states: 2,
            initial: 0,
            sink: 1,
            delta: vec![0; 2 * sigma_in.len() * sigma_out.len()],
            names: vec!["ok".to_string(), "bad".to_string()],
        }
    }

    /// Rejects as soon as `letter` is read.
    pub fn forbid(sigma_in: &[String], sigma_out: &[String], letter: (usize, usize)) -> Self {
        let mut m = Self::accept_all(sigma_in, sigma_out);
        let nout = sigma_out.len();
        m.delta[letter.0 * nout + letter.1] = 1;
        m
    }
}

/// Per-input-letter successor relations over at most 64 states, as bitsets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeContext {
    n: usize,
    letters: usize,
    adj: Vec<u64>,
}

impl EdgeContext {
    /// `adj[a*n + q]` holds the successors of `q` under letter `a`.
    pub fn new(n: usize, letters: usize, adj: Vec<u64>) -> Self {
        assert!(n <= 64 && letters <= 64 && adj.len() == n * letters);
        EdgeContext { n, letters, adj }
    }

    /// Every relation complete.
    pub fn complete(n: usize, letters: usize) -> Self {
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Self::new(n, letters, vec![all; n * letters])
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn successors(&self, a: usize, q: usize) -> u64 {
        self.adj[a * self.n + q]
    }

    pub fn edge(&self, a: usize, q: usize, q2: usize) -> bool {
        self.successors(a, q) >> q2 & 1 == 1
    }

    pub fn is_path(&self, a: usize, u: &[usize]) -> bool {
        u.windows(2).all(|e| self.edge(a, e[0], e[1]))
    }

    /// Letters `a` for which `u` is an `E_a`-path, as a bitset.
    pub fn path_flags(&self, u: &[usize]) -> u64 {
        (0..self.letters).filter(|&a| self.is_path(a, u)).fold(0, |f, a| f | 1 << a)
    }
}
