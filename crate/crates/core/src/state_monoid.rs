//! The `≡_state` congruence on finite state-strings, as a monoid of signatures.
//!
//! Two nonempty strings are equivalent when they share first and last state,
//! the same set of pairs `(u[m], states of u[0,m))`, and the same path
//! status under every input letter. The signature below records exactly that
//! data, plus the occurrence set needed to multiply.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::automaton::EdgeContext;
use crate::omega_word::LassoWord;

pub const DEFAULT_SIGNATURE_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonoidError {
    #[error("empty state-string has no signature")]
    EmptyString,
    #[error("signatures over different state universes ({0} vs {1})")]
    UniverseMismatch(usize, usize),
    #[error("signature cap {cap} exceeded ({classes} classes found so far)")]
    CapExceeded { cap: usize, classes: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateSignature {
    pub universe: usize,
    pub first: usize,
    pub last: usize,
    /// Sorted, deduplicated `(state, before-set)`; includes `(first, ∅)`.
    pub pairs: Vec<(usize, u64)>,
    pub occ: u64,
    /// Bit `a` set iff the string is an `E_a`-path.
    pub flags: u64,
}

impl StateSignature {
    pub fn has_flag(&self, a: usize) -> bool {
        self.flags >> a & 1 == 1
    }
}

fn all_flags(letters: usize) -> u64 {
    if letters >= 64 {
        u64::MAX
    } else {
        (1u64 << letters) - 1
    }
}

pub fn signature_of(u: &[usize], ctx: &EdgeContext) -> Result<StateSignature, MonoidError> {
    let (&first, &last) = match (u.first(), u.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(MonoidError::EmptyString),
    };
    let mut seen = 0u64;
    let mut pairs = Vec::with_capacity(u.len());
    for &q in u {
        pairs.push((q, seen));
        seen |= 1 << q;
    }
    pairs.sort_unstable();
    pairs.dedup();
    Ok(StateSignature {
        universe: ctx.num_states(),
        first,
        last,
        pairs,
        occ: seen,
        flags: ctx.path_flags(u) & all_flags(ctx.letters()),
    })
}

/// `sig(u)·sig(v) = sig(uv)`.
pub fn product(s1: &StateSignature, s2: &StateSignature, ctx: &EdgeContext) -> Result<StateSignature, MonoidError> {
    if s1.universe != s2.universe {
        return Err(MonoidError::UniverseMismatch(s1.universe, s2.universe));
    }
    let mut pairs = s1.pairs.clone();
    pairs.extend(s2.pairs.iter().map(|&(q, set)| (q, set | s1.occ)));
    pairs.sort_unstable();
    pairs.dedup();
    let join = (0..ctx.letters()).filter(|&a| ctx.edge(a, s1.last, s2.first)).fold(0u64, |f, a| f | 1 << a);
    Ok(StateSignature {
        universe: s1.universe,
        first: s1.first,
        last: s2.last,
        pairs,
        occ: s1.occ | s2.occ,
        flags: s1.flags & s2.flags & join,
    })
}

/// The four defining conditions checked literally, without signatures.
pub fn naive_equiv(u: &[usize], v: &[usize], ctx: &EdgeContext) -> bool {
    if u.is_empty() || v.is_empty() {
        return u.is_empty() && v.is_empty();
    }
    if u[0] != v[0] || u[u.len() - 1] != v[v.len() - 1] {
        return false;
    }
    let before = |w: &[usize], m: usize| -> BTreeSet<usize> { w[..m].iter().copied().collect() };
    let covers = |x: &[usize], y: &[usize]| {
        (0..x.len()).all(|m| (0..y.len()).any(|n| x[m] == y[n] && before(x, m) == before(y, n)))
    };
    if !covers(u, v) || !covers(v, u) {
        return false;
    }
    (0..ctx.letters()).all(|a| {
        let run = |w: &[usize]| (1..w.len()).all(|i| ctx.edge(a, w[i - 1], w[i]));
        run(u) == run(v)
    })
}

/// Which strings the class table closes over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableScope {
    /// Every nonempty string.
    All,
    /// Strings that are an `E_a`-path for at least one letter `a`.
    Paths,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassEntry {
    pub signature: StateSignature,
    /// Shortest member, lexicographically least among the shortest.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ClassTable {
    pub ctx: EdgeContext,
    pub scope: TableScope,
    pub classes: Vec<ClassEntry>,
    pub index: BTreeMap<StateSignature, usize>,
    pub idempotents: Vec<usize>,
    pub d_q: usize,
}

impl ClassTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, u: &[usize]) -> Option<usize> {
        let s = signature_of(u, &self.ctx).ok()?;
        self.index.get(&s).copied()
    }

    pub fn is_idempotent(&self, class: usize) -> bool {
        self.idempotents.binary_search(&class).is_ok()
    }

    pub fn product(&self, i: usize, j: usize) -> StateSignature {
        product(&self.classes[i].signature, &self.classes[j].signature, &self.ctx).expect("same universe")
    }
}

/// Breadth-first closure of the single-state generators. Representatives of
/// each level are extended in lexicographic order by one state, so the first
/// string found for a class is its shortest, lexicographically least member.
pub fn build_class_table(ctx: &EdgeContext, scope: TableScope, cap: usize) -> Result<ClassTable, MonoidError> {
    let n = ctx.num_states();
    let mut classes: Vec<ClassEntry> = Vec::new();
    let mut index: BTreeMap<StateSignature, usize> = BTreeMap::new();
    let gens: Vec<StateSignature> = (0..n).map(|q| signature_of(&[q], ctx)).collect::<Result<_, _>>()?;
    let mut frontier: Vec<usize> = Vec::new();
    for (q, s) in gens.iter().enumerate() {
        if index.insert(s.clone(), classes.len()).is_none() {
            frontier.push(classes.len());
            classes.push(ClassEntry { signature: s.clone(), witness: vec![q] });
        }
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &c in &frontier {
            for (q, g) in gens.iter().enumerate() {
                let s = product(&classes[c].signature, g, ctx)?;
                if scope == TableScope::Paths && s.flags == 0 {
                    continue;
                }
                if index.contains_key(&s) {
                    continue;
                }
                if classes.len() >= cap {
                    return Err(MonoidError::CapExceeded { cap, classes: classes.len() });
                }
                let mut witness = classes[c].witness.clone();
                witness.push(q);
                index.insert(s.clone(), classes.len());
                next.push(classes.len());
                classes.push(ClassEntry { signature: s, witness });
            }
        }
        frontier = next;
    }
    let idempotents: Vec<usize> = (0..classes.len())
        .filter(|&i| {
            let s = &classes[i].signature;
            product(s, s, ctx).map(|p| p == *s).unwrap_or(false)
        })
        .collect();
    let d_q = classes.iter().map(|c| c.witness.len()).max().unwrap_or(0);
    Ok(ClassTable { ctx: ctx.clone(), scope, classes, index, idempotents, d_q })
}

/// A member `u_i·u_j^ω` of `UP(Q)`, kept unnormalized so that the lag and
/// period are the representatives themselves.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UpWord {
    pub lag: Vec<usize>,
    pub period: Vec<usize>,
    pub lag_class: usize,
    pub period_class: usize,
}

impl UpWord {
    pub fn lasso(&self) -> LassoWord<usize> {
        LassoWord::new(self.lag.clone(), self.period.clone()).expect("representatives are nonempty")
    }

    /// 1-based position `n ≥ 1`.
    pub fn at(&self, n: usize) -> usize {
        *self.lasso().at(n - 1)
    }

    pub fn first(&self) -> usize {
        self.lag[0]
    }
}

#[derive(Debug, Clone)]
pub struct UpSet {
    pub members: Vec<UpWord>,
    pub d_q: usize,
    pub ctx: EdgeContext,
}

/// `{ u_i·u_j^ω : u_j idempotent, sig(u_i)·sig(u_j) = sig(u_i) }`.
pub fn build_up(table: &ClassTable) -> UpSet {
    let mut members = Vec::new();
    for i in 0..table.len() {
        for &j in &table.idempotents {
            if table.product(i, j) == table.classes[i].signature {
                members.push(UpWord {
                    lag: table.classes[i].witness.clone(),
                    period: table.classes[j].witness.clone(),
                    lag_class: i,
                    period_class: j,
                });
            }
        }
    }
    UpSet { members, d_q: table.d_q, ctx: table.ctx.clone() }
}

/// `w = head · block · block · …` with `sig(block)` idempotent and
/// `sig(head)·sig(block) = sig(head)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamseyFactorization {
    pub head: Vec<usize>,
    pub block: Vec<usize>,
    /// Number of copies of the period in `block`.
    pub power: usize,
}

impl RamseyFactorization {
    /// Start of the `i`-th block (0-based), as a position in the ω-word.
    pub fn boundary(&self, i: usize) -> usize {
        self.head.len() + i * self.block.len()
    }
}

/// Pumps the period until its power has an idempotent signature; the monoid
/// is finite, so some power does.
pub fn ramsey_factorize(w: &LassoWord<usize>, ctx: &EdgeContext) -> Result<RamseyFactorization, MonoidError> {
    let v = signature_of(w.period(), ctx)?;
    let mut power = 1;
    let mut acc = v.clone();
    loop {
        if product(&acc, &acc, ctx)? == acc {
            break;
        }
        acc = product(&acc, &v, ctx)?;
        power += 1;
    }
    let block: Vec<usize> = w.period().iter().copied().cycle().take(power * w.period().len()).collect();
    let head = if w.prefix().is_empty() {
        block.clone()
    } else {
        let u = signature_of(w.prefix(), ctx)?;
        if product(&u, &acc, ctx)? == u {
            w.prefix().to_vec()
        } else {
            let mut h = w.prefix().to_vec();
            h.extend_from_slice(&block);
            h
        }
    };
    Ok(RamseyFactorization { head, block, power })
}
