//! Ultimately periodic ω-words `u·v^ω`.
//!
//! The text syntax is `u(v)^w`: letters are single characters, or
//! whitespace/comma separated tokens when a segment contains separators.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::automaton::EdgeContext;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LassoError {
    #[error("lasso period must be nonempty")]
    EmptyPeriod,
    #[error("malformed lasso text `{0}` (expected `u(v)^w`)")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LassoWord<T> {
    prefix: Vec<T>,
    period: Vec<T>,
}

impl<T: Clone + Eq> LassoWord<T> {
    pub fn new(prefix: Vec<T>, period: Vec<T>) -> Result<Self, LassoError> {
        if period.is_empty() {
            return Err(LassoError::EmptyPeriod);
        }
        Ok(LassoWord { prefix, period })
    }

    /// `v^ω`.
    pub fn periodic(period: Vec<T>) -> Result<Self, LassoError> {
        Self::new(Vec::new(), period)
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn period(&self) -> &[T] {
        &self.period
    }

    pub fn at(&self, i: usize) -> &T {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn unfold(&self, n: usize) -> Vec<T> {
        (0..n).map(|i| self.at(i).clone()).collect()
    }

    /// Minimal period first, then the shortest prefix by rotating the period.
    pub fn normalize(&self) -> Self {
        let v = &self.period;
        let len = v.len();
        let p = (1..=len).find(|&p| len.is_multiple_of(p) && (p..len).all(|i| v[i] == v[i - p])).unwrap_or(len);
        let mut period: Vec<T> = v[..p].to_vec();
        let mut prefix = self.prefix.clone();
        while let Some(last) = prefix.last() {
            if *last != period[p - 1] {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        LassoWord { prefix, period }
    }

    pub fn is_normal(&self) -> bool {
        *self == self.normalize()
    }

    pub fn map<U: Clone + Eq>(&self, f: impl Fn(&T) -> U) -> LassoWord<U> {
        LassoWord { prefix: self.prefix.iter().map(&f).collect(), period: self.period.iter().map(&f).collect() }
    }

    /// Letterwise pairing; the result has prefix `max(|u1|,|u2|)` and
    /// period `lcm(|v1|,|v2|)`.
    pub fn zip<U: Clone + Eq>(&self, other: &LassoWord<U>) -> LassoWord<(T, U)> {
        let lag = self.prefix.len().max(other.prefix.len());
        let per = lcm(self.period.len(), other.period.len());
        let pair = |i: usize| (self.at(i).clone(), other.at(i).clone());
        LassoWord { prefix: (0..lag).map(pair).collect(), period: (lag..lag + per).map(pair).collect() }
    }

    /// Same ω-word, compared through normal forms.
    pub fn same_word(&self, other: &Self) -> bool {
        self.normalize() == other.normalize()
    }
}

impl<T: Clone + Ord> LassoWord<T> {
    pub fn inf_set(&self) -> BTreeSet<T> {
        self.period.iter().cloned().collect()
    }
}

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Finite profile of an ω-word over states.
#[derive(Debug, Clone, PartialEq, Eq)]
struct OmegaProfile {
    inf: u64,
    pairs: BTreeSet<(usize, u64)>,
    flags: u64,
}

/// Pairs `(w[m], states in w[0,m))` are read off `u·v·v`: from the second
/// copy of `v` onward the before-set is `occ(u·v)` and the letters repeat,
/// so later positions add nothing new.
fn omega_profile(w: &LassoWord<usize>, ctx: &EdgeContext) -> OmegaProfile {
    let mut seen = 0u64;
    let mut pairs = BTreeSet::new();
    let span: Vec<usize> = w.prefix.iter().chain(w.period.iter()).chain(w.period.iter()).copied().collect();
    for &q in &span {
        pairs.insert((q, seen));
        seen |= 1 << q;
    }
    let inf = w.period.iter().fold(0u64, |acc, &q| acc | (1 << q));
    let mut flags = 0u64;
    for a in 0..ctx.letters() {
        if span.windows(2).all(|e| ctx.edge(a, e[0], e[1])) {
            flags |= 1 << a;
        }
    }
    OmegaProfile { inf, pairs, flags }
}

/// The ω-string equivalence relative to the per-letter path relations in `ctx`.
pub fn omega_equivalent(w1: &LassoWord<usize>, w2: &LassoWord<usize>, ctx: &EdgeContext) -> bool {
    omega_profile(w1, ctx) == omega_profile(w2, ctx)
}

fn split_letters(segment: &str) -> Vec<String> {
    if segment.contains(|c: char| c.is_whitespace() || c == ',') {
        segment.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).map(String::from).collect()
    } else {
        segment.chars().map(String::from).collect()
    }
}

pub fn parse_lasso(text: &str) -> Result<LassoWord<String>, LassoError> {
    let err = || LassoError::Syntax(String::from(text));
    let text = text.trim();
    let body = text.strip_suffix("^w").or_else(|| text.strip_suffix("^ω")).ok_or_else(err)?.trim_end();
    let body = body.strip_suffix(')').ok_or_else(err)?;
    let open = body.rfind('(').ok_or_else(err)?;
    let (u, v) = (&body[..open], &body[open + 1..]);
    if u.contains(['(', ')']) || v.contains(['(', ')']) {
        return Err(err());
    }
    LassoWord::new(split_letters(u), split_letters(v)).map_err(|_| err())
}

impl<T: fmt::Display> fmt::Display for LassoWord<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = |xs: &[T]| xs.iter().any(|x| alloc::format!("{x}").chars().count() != 1);
        let sep = if wide(&self.prefix) || wide(&self.period) { " " } else { "" };
        let join = |xs: &[T], f: &mut fmt::Formatter<'_>| -> fmt::Result {
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{x}")?;
            }
            Ok(())
        };
        join(&self.prefix, f)?;
        if !self.prefix.is_empty() && !sep.is_empty() {
            f.write_str(sep)?;
        }
        f.write_str("(")?;
        join(&self.period, f)?;
        f.write_str(")^w")
    }
}

pub fn format_lasso<T: fmt::Display>(w: &LassoWord<T>) -> String {
    alloc::format!("{w}")
}

/// Maps letter names to indices, failing on unknown names.
pub fn index_letters(w: &LassoWord<String>, alphabet: &[String]) -> Result<LassoWord<usize>, String> {
    let table: BTreeMap<&str, usize> = alphabet.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let look = |s: &String| table.get(s.as_str()).copied().ok_or_else(|| s.clone());
    let prefix = w.prefix.iter().map(look).collect::<Result<Vec<_>, _>>()?;
    let period = w.period.iter().map(look).collect::<Result<Vec<_>, _>>()?;
    Ok(LassoWord { prefix, period })
}
