//! Finitely presented finite-variability signals over exact rational time,
//! sample sequences, and the point/interval (`D`) codec.
//!
//! A signal is a finite list of pieces `(start, point, interval)` up to an
//! anchor, followed by either a constant tail or a block repeated every `Δ`.
//! Each piece holds `point` at `start` and `interval` on the open interval up
//! to the next piece.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::omega_word::{lcm, LassoWord};
use crate::time::{self, Time};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignalError {
    #[error("breakpoints must start at 0 and increase strictly")]
    BadBreakpoints,
    #[error("expected {expected} {what}, found {found}")]
    Arity { what: &'static str, expected: usize, found: usize },
    #[error("periodic tail needs a positive duration")]
    NonPositivePeriod,
    #[error("block offsets must start at 0, increase strictly and stay below the period")]
    BadOffsets,
    #[error("first block point must equal the point value at the anchor")]
    AnchorMismatch,
    #[error("negative time {0}")]
    NegativeTime(Time),
    #[error("discontinuity at {0} is not a sample point")]
    NotASampleSequence(Time),
    #[error("time map must start at (0,0), increase strictly and end with a positive slope")]
    NonBijective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece<L> {
    pub start: Time,
    pub point: L,
    pub interval: L,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail<L> {
    /// `point` at the anchor, `value` forever after.
    Constant { point: L, value: L },
    /// Pieces with offsets `0 = σ_0 < … < Δ` relative to `anchor + jΔ`.
    Periodic { delta: Time, block: Vec<Piece<L>> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FvSignal<L> {
    prefix: Vec<Piece<L>>,
    anchor: Time,
    tail: Tail<L>,
}

fn strictly_increasing(ts: &[Time]) -> bool {
    ts.windows(2).all(|w| w[0] < w[1])
}

impl<L: Clone + Eq> FvSignal<L> {
    /// From the file-format presentation: `breakpoints[k]` is the anchor and
    /// `interval_values` covers the `k` gaps before it.
    pub fn new(
        breakpoints: Vec<Time>,
        point_values: Vec<L>,
        interval_values: Vec<L>,
        tail: Tail<L>,
    ) -> Result<Self, SignalError> {
        if breakpoints.first().is_none_or(|t| !t.is_zero()) || !strictly_increasing(&breakpoints) {
            return Err(SignalError::BadBreakpoints);
        }
        let k = breakpoints.len() - 1;
        if point_values.len() != k + 1 {
            return Err(SignalError::Arity { what: "point values", expected: k + 1, found: point_values.len() });
        }
        if interval_values.len() != k {
            return Err(SignalError::Arity { what: "interval values", expected: k, found: interval_values.len() });
        }
        let anchor = breakpoints[k].clone();
        let tail = match tail {
            Tail::Constant { value, .. } => Tail::Constant { point: point_values[k].clone(), value },
            Tail::Periodic { delta, block } => {
                if !delta.is_positive() {
                    return Err(SignalError::NonPositivePeriod);
                }
                let offsets: Vec<Time> = block.iter().map(|p| p.start.clone()).collect();
                if offsets.first().is_none_or(|o| !o.is_zero())
                    || !strictly_increasing(&offsets)
                    || offsets.last().is_some_and(|o| *o >= delta)
                {
                    return Err(SignalError::BadOffsets);
                }
                if block[0].point != point_values[k] {
                    return Err(SignalError::AnchorMismatch);
                }
                Tail::Periodic { delta, block }
            }
        };
        let prefix = (0..k)
            .map(|i| Piece {
                start: breakpoints[i].clone(),
                point: point_values[i].clone(),
                interval: interval_values[i].clone(),
            })
            .collect();
        Ok(FvSignal { prefix, anchor, tail })
    }

    pub fn constant(v: L) -> Self {
        FvSignal { prefix: Vec::new(), anchor: Time::zero(), tail: Tail::Constant { point: v.clone(), value: v } }
    }

    pub fn prefix(&self) -> &[Piece<L>] {
        &self.prefix
    }

    pub fn anchor(&self) -> &Time {
        &self.anchor
    }

    pub fn tail(&self) -> &Tail<L> {
        &self.tail
    }

    /// Breakpoints as in the file format.
    pub fn breakpoints(&self) -> Vec<Time> {
        let mut b: Vec<Time> = self.prefix.iter().map(|p| p.start.clone()).collect();
        b.push(self.anchor.clone());
        b
    }

    /// Duration after which the tail repeats; constant tails report `None`.
    pub fn tail_period(&self) -> Option<&Time> {
        match &self.tail {
            Tail::Constant { .. } => None,
            Tail::Periodic { delta, .. } => Some(delta),
        }
    }

    /// Global piece `k`: prefix pieces first, then tail pieces in time order.
    fn piece(&self, k: usize) -> Piece<L> {
        if k < self.prefix.len() {
            return self.prefix[k].clone();
        }
        let k = k - self.prefix.len();
        match &self.tail {
            Tail::Constant { point, value } => {
                debug_assert_eq!(k, 0);
                Piece { start: self.anchor.clone(), point: point.clone(), interval: value.clone() }
            }
            Tail::Periodic { delta, block } => {
                let (j, i) = (k / block.len(), k % block.len());
                let b = &block[i];
                Piece {
                    start: &self.anchor + delta * time::from_usize(j) + &b.start,
                    point: b.point.clone(),
                    interval: b.interval.clone(),
                }
            }
        }
    }

    /// Index of the piece with the greatest start `≤ t`.
    fn piece_index(&self, t: &Time) -> usize {
        if *t < self.anchor {
            return self.prefix.partition_point(|p| p.start <= *t) - 1;
        }
        match &self.tail {
            Tail::Constant { .. } => self.prefix.len(),
            Tail::Periodic { delta, block } => {
                let rel = t - &self.anchor;
                let j = time::floor_to_usize(&(&rel / delta)).expect("non-negative");
                let r = rel - delta * time::from_usize(j);
                let i = block.partition_point(|p| p.start <= r) - 1;
                self.prefix.len() + j * block.len() + i
            }
        }
    }

    fn check(t: &Time) -> Result<(), SignalError> {
        if t.is_negative() {
            Err(SignalError::NegativeTime(t.clone()))
        } else {
            Ok(())
        }
    }

    pub fn value_at(&self, t: &Time) -> Result<L, SignalError> {
        Self::check(t)?;
        let p = self.piece(self.piece_index(t));
        Ok(if p.start == *t { p.point } else { p.interval })
    }

    /// Value on `(t, t+ε)`.
    pub fn right_limit(&self, t: &Time) -> Result<L, SignalError> {
        Self::check(t)?;
        Ok(self.piece(self.piece_index(t)).interval)
    }

    /// Value on `(t−ε, t)`; at 0 the value itself.
    pub fn left_limit(&self, t: &Time) -> Result<L, SignalError> {
        Self::check(t)?;
        if t.is_zero() {
            return self.value_at(t);
        }
        let k = self.piece_index(t);
        let p = self.piece(k);
        Ok(if p.start == *t { self.piece(k - 1).interval } else { p.interval })
    }

    pub fn is_left_continuous_at(&self, t: &Time) -> Result<bool, SignalError> {
        Ok(self.left_limit(t)? == self.value_at(t)?)
    }

    pub fn is_right_continuous_at(&self, t: &Time) -> Result<bool, SignalError> {
        Ok(self.right_limit(t)? == self.value_at(t)?)
    }

    /// No neighbourhood of `t` carries a constant value. Every signal jumps at 0.
    pub fn jumps_at(&self, t: &Time) -> Result<bool, SignalError> {
        if t.is_zero() {
            return Ok(true);
        }
        Ok(!(self.is_left_continuous_at(t)? && self.is_right_continuous_at(t)?))
    }

    /// Piece starts in `[0, horizon]`, in increasing order.
    pub fn piece_starts_until(&self, horizon: &Time) -> Vec<Time> {
        let mut out = Vec::new();
        let mut k = 0;
        loop {
            if matches!(self.tail, Tail::Constant { .. }) && k > self.prefix.len() {
                break;
            }
            let s = self.piece(k).start;
            if s > *horizon {
                break;
            }
            out.push(s);
            k += 1;
        }
        out
    }

    /// Discontinuity points in `[0, horizon]`, including 0.
    pub fn jumps_until(&self, horizon: &Time) -> Vec<Time> {
        self.piece_starts_until(horizon).into_iter().filter(|t| self.jumps_at(t).expect("non-negative")).collect()
    }

    /// Time after which comparing one `lcm` of tail periods decides equality.
    fn horizon_with(&self, other: &FvSignal<L>) -> Time {
        let base = if self.anchor > other.anchor { self.anchor.clone() } else { other.anchor.clone() };
        let span = match (self.tail_period(), other.tail_period()) {
            (Some(a), Some(b)) => time::rational_lcm(a, b),
            (Some(a), None) | (None, Some(a)) => a.clone(),
            (None, None) => time::int(1),
        };
        base + span
    }

    /// Pointwise equality as functions of time.
    pub fn semantically_equal(&self, other: &FvSignal<L>) -> bool {
        let h = self.horizon_with(other);
        let mut pts = self.piece_starts_until(&h);
        pts.extend(other.piece_starts_until(&h));
        pts.push(h.clone());
        pts.sort();
        pts.dedup();
        for w in pts.windows(2) {
            let mid = (&w[0] + &w[1]) / time::int(2);
            if self.value_at(&mid).ok() != other.value_at(&mid).ok() {
                return false;
            }
        }
        pts.iter().all(|t| self.value_at(t).ok() == other.value_at(t).ok())
    }

    /// First jump strictly after 0, if any.
    pub fn first_jump_after_zero(&self) -> Option<Time> {
        let horizon = match self.tail_period() {
            Some(d) => &self.anchor + d,
            None => self.anchor.clone(),
        };
        self.piece_starts_until(&horizon)
            .into_iter()
            .filter(|t| !t.is_zero())
            .find(|t| self.jumps_at(t).expect("non-negative"))
    }
}

/// `τ_0 = 0 < τ_1 < …`: explicit times before `anchor`, then
/// `anchor + jP + o_i` for offsets `0 = o_0 < … < P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSequence {
    prefix: Vec<Time>,
    anchor: Time,
    period: Time,
    offsets: Vec<Time>,
}

impl SampleSequence {
    pub fn new(prefix: Vec<Time>, anchor: Time, period: Time, offsets: Vec<Time>) -> Result<Self, SignalError> {
        if !period.is_positive() {
            return Err(SignalError::NonPositivePeriod);
        }
        if offsets.first().is_none_or(|o| !o.is_zero())
            || !strictly_increasing(&offsets)
            || offsets.last().is_some_and(|o| *o >= period)
        {
            return Err(SignalError::BadOffsets);
        }
        let mut all = prefix.clone();
        all.push(anchor.clone());
        if !all[0].is_zero() || !strictly_increasing(&all) {
            return Err(SignalError::BadBreakpoints);
        }
        Ok(SampleSequence { prefix, anchor, period, offsets })
    }

    /// `0, step, 2·step, …`.
    pub fn uniform(step: Time) -> Result<Self, SignalError> {
        Self::new(Vec::new(), Time::zero(), step, vec![Time::zero()])
    }

    /// Explicit times followed by a uniform grid from the last of them.
    pub fn explicit_then_uniform(mut times: Vec<Time>, step: Time) -> Result<Self, SignalError> {
        let anchor = times.pop().unwrap_or_else(Time::zero);
        Self::new(times, anchor, step, vec![Time::zero()])
    }

    pub fn period(&self) -> &Time {
        &self.period
    }

    pub fn anchor(&self) -> &Time {
        &self.anchor
    }

    pub fn sample(&self, k: usize) -> Time {
        if k < self.prefix.len() {
            return self.prefix[k].clone();
        }
        let k = k - self.prefix.len();
        let m = self.offsets.len();
        &self.anchor + &self.period * time::from_usize(k / m) + &self.offsets[k % m]
    }

    pub fn contains(&self, t: &Time) -> bool {
        if *t < self.anchor {
            return self.prefix.binary_search(t).is_ok();
        }
        let rel = t - &self.anchor;
        let j = time::floor_to_usize(&(&rel / &self.period)).expect("non-negative");
        let r = rel - &self.period * time::from_usize(j);
        self.offsets.binary_search(&r).is_ok()
    }

    /// Unrolls the periodic part so that the anchor is at least `t`.
    fn unrolled_past(&self, t: &Time) -> SampleSequence {
        let mut s = self.clone();
        while s.anchor < *t {
            for o in &s.offsets {
                s.prefix.push(&s.anchor + o);
            }
            s.anchor = &s.anchor + &s.period;
        }
        s
    }
}

/// Letter `i` is `(point value at τ_i, value on (τ_i, τ_{i+1}))`.
pub type DWord<L> = LassoWord<(L, L)>;

/// Encodes along `τ̃`. Tails of different periods are aligned on the
/// rational lcm of the two periods.
pub fn encode_d<L: Clone + Eq>(s: &FvSignal<L>, tau: &SampleSequence) -> Result<DWord<L>, SignalError> {
    let constant = s.tail_period().is_none();
    let mut i0 = tau.prefix.len();
    while tau.sample(i0) < s.anchor || (constant && tau.sample(i0) == s.anchor) {
        i0 += 1;
    }
    let span = match s.tail_period() {
        Some(d) => time::rational_lcm(d, &tau.period),
        None => tau.period.clone(),
    };
    let horizon = tau.sample(i0) + &span;
    for t in s.jumps_until(&horizon) {
        if !tau.contains(&t) {
            return Err(SignalError::NotASampleSequence(t));
        }
    }
    let per_span = time::exact_quotient(&span, &tau.period).expect("lcm is a multiple") * tau.offsets.len();
    let letter = |i: usize| -> (L, L) {
        let t = tau.sample(i);
        (s.value_at(&t).expect("samples are non-negative"), s.right_limit(&t).expect("non-negative"))
    };
    let prefix = (0..i0).map(letter).collect();
    let period = (i0..i0 + per_span).map(letter).collect();
    Ok(LassoWord::new(prefix, period).expect("period nonempty"))
}

/// Point value `a_i` at `τ_i`, interval value `b_i` on `(τ_i, τ_{i+1})`.
pub fn decode_fv<L: Clone + Eq>(w: &DWord<L>, tau: &SampleSequence) -> FvSignal<L> {
    let i_tau = tau.prefix.len();
    let start = w.prefix().len().max(i_tau);
    let cycle = lcm(w.period().len(), tau.offsets.len());
    let anchor = tau.sample(start);
    let prefix = (0..start)
        .map(|i| {
            let (p, v) = w.at(i).clone();
            Piece { start: tau.sample(i), point: p, interval: v }
        })
        .collect();
    let block = (0..cycle)
        .map(|k| {
            let (p, v) = w.at(start + k).clone();
            Piece { start: tau.sample(start + k) - &anchor, point: p, interval: v }
        })
        .collect();
    let delta = tau.sample(start + cycle) - &anchor;
    FvSignal { prefix, anchor, tail: Tail::Periodic { delta, block } }
}

/// Once a letter `(a,b)` is followed by `(b,b)`, only `(b,b)` may follow.
/// Checked over `u·v·v`, which covers every later letter of each position
/// in `u·v`.
pub fn is_stuttering_free<L: Clone + Eq>(w: &DWord<L>) -> bool {
    let n = w.prefix().len() + 2 * w.period().len();
    let xs = w.unfold(n);
    let head = w.prefix().len() + w.period().len();
    for i in 0..head.min(n - 1) {
        let b = &xs[i].1;
        if xs[i + 1].0 == *b && xs[i + 1].1 == *b && !xs[i + 1..].iter().all(|(p, q)| p == b && q == b) {
            return false;
        }
    }
    true
}

/// The stuttering-free word representing the same signals: letters
/// `(c,c)` repeating the previous interval value are dropped; a period made
/// only of such letters becomes `(b,b)^ω`.
pub fn stutter_normalize<L: Clone + Eq>(w: &DWord<L>) -> DWord<L> {
    fn redundant<L: Eq>(last: &Option<(L, L)>, x: &(L, L)) -> bool {
        matches!(last, Some((_, b)) if x.0 == *b && x.1 == *b)
    }
    let mut kept: Vec<(L, L)> = Vec::new();
    let mut last: Option<(L, L)> = None;
    for x in w.prefix() {
        if !redundant(&last, x) {
            kept.push(x.clone());
            last = Some(x.clone());
        }
    }
    let mut seen: Vec<(Option<(L, L)>, usize)> = Vec::new();
    loop {
        if let Some(&(_, at)) = seen.iter().find(|(l, _)| *l == last) {
            let period = kept[at..].to_vec();
            if period.is_empty() {
                let (_, b) = last.clone().expect("position 0 is kept");
                return LassoWord::new(kept, vec![(b.clone(), b)]).expect("nonempty").normalize();
            }
            return LassoWord::new(kept[..at].to_vec(), period).expect("nonempty").normalize();
        }
        seen.push((last.clone(), kept.len()));
        for x in w.period() {
            if !redundant(&last, x) {
                kept.push(x.clone());
                last = Some(x.clone());
            }
        }
    }
}

/// Same signal under both encodings, decided on normal forms.
pub fn stuttering_equivalent<L: Clone + Eq>(a: &DWord<L>, b: &DWord<L>) -> bool {
    stutter_normalize(a) == stutter_normalize(b)
}

/// Increasing piecewise-linear map with knots `(x_i, y_i)` from `(0,0)` and
/// slope `final_slope` after the last knot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeMap {
    knots: Vec<(Time, Time)>,
    final_slope: Time,
}

impl TimeMap {
    pub fn new(knots: Vec<(Time, Time)>, final_slope: Time) -> Result<Self, SignalError> {
        let ok = knots.first().is_some_and(|(x, y)| x.is_zero() && y.is_zero())
            && knots.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1)
            && final_slope.is_positive();
        if !ok {
            return Err(SignalError::NonBijective);
        }
        Ok(TimeMap { knots, final_slope })
    }

    pub fn identity() -> Self {
        TimeMap { knots: vec![(Time::zero(), Time::zero())], final_slope: time::int(1) }
    }

    pub fn scale(factor: Time) -> Result<Self, SignalError> {
        Self::new(vec![(Time::zero(), Time::zero())], factor)
    }

    pub fn last_knot(&self) -> &Time {
        &self.knots[self.knots.len() - 1].0
    }

    pub fn apply(&self, x: &Time) -> Time {
        let i = self.knots.partition_point(|(k, _)| k <= x) - 1;
        let (x0, y0) = &self.knots[i];
        let slope = match self.knots.get(i + 1) {
            Some((x1, y1)) => (y1 - y0) / (x1 - x0),
            None => self.final_slope.clone(),
        };
        y0 + (x - x0) * slope
    }
}

fn unroll_signal<L: Clone + Eq>(s: &FvSignal<L>, past: &Time) -> FvSignal<L> {
    let mut s = s.clone();
    if let Tail::Periodic { delta, block } = s.tail.clone() {
        while s.anchor < *past {
            for b in &block {
                s.prefix.push(Piece {
                    start: &s.anchor + &b.start,
                    point: b.point.clone(),
                    interval: b.interval.clone(),
                });
            }
            s.anchor = &s.anchor + &delta;
        }
    }
    s
}

/// `s ∘ ρ^{-1}`.
pub fn reparameterize<L: Clone + Eq>(s: &FvSignal<L>, rho: &TimeMap) -> FvSignal<L> {
    let s = unroll_signal(s, rho.last_knot());
    let prefix = s
        .prefix
        .iter()
        .map(|p| Piece { start: rho.apply(&p.start), point: p.point.clone(), interval: p.interval.clone() })
        .collect();
    let tail = match &s.tail {
        Tail::Constant { .. } => s.tail.clone(),
        Tail::Periodic { delta, block } => Tail::Periodic {
            delta: delta * &rho.final_slope,
            block: block
                .iter()
                .map(|b| Piece {
                    start: &b.start * &rho.final_slope,
                    point: b.point.clone(),
                    interval: b.interval.clone(),
                })
                .collect(),
        },
    };
    FvSignal { prefix, anchor: rho.apply(&s.anchor), tail }
}

/// `ρ(τ̃)`.
pub fn reparameterize_samples(tau: &SampleSequence, rho: &TimeMap) -> SampleSequence {
    let t = tau.unrolled_past(rho.last_knot());
    SampleSequence {
        prefix: t.prefix.iter().map(|x| rho.apply(x)).collect(),
        anchor: rho.apply(&t.anchor),
        period: &t.period * &rho.final_slope,
        offsets: t.offsets.iter().map(|o| o * &rho.final_slope).collect(),
    }
}

/// `δ_x`: 1 at `x`, 0 elsewhere.
pub fn delta_signal(x: &Time) -> FvSignal<u8> {
    if x.is_zero() {
        return FvSignal { prefix: Vec::new(), anchor: Time::zero(), tail: Tail::Constant { point: 1, value: 0 } };
    }
    FvSignal {
        prefix: vec![Piece { start: Time::zero(), point: 0, interval: 0 }],
        anchor: x.clone(),
        tail: Tail::Constant { point: 1, value: 0 },
    }
}

/// The strongly causal operator `G`: 0 at time 0; for `t > 0`, `1 − a` while
/// `y` is constantly `a` on `(0,t)`, and 1 afterwards. With `t_0` the first
/// jump of `y` after 0, that is `1 − a` on `(0, t_0]` and 1 on `(t_0, ∞)`.
pub fn fixture_g(y: &FvSignal<u8>) -> FvSignal<u8> {
    let a = y.right_limit(&Time::zero()).expect("0 is valid");
    let flip = 1 - a.min(1);
    match y.first_jump_after_zero() {
        None => FvSignal { prefix: Vec::new(), anchor: Time::zero(), tail: Tail::Constant { point: 0, value: flip } },
        Some(t0) => FvSignal {
            prefix: vec![Piece { start: Time::zero(), point: 0, interval: flip }],
            anchor: t0,
            tail: Tail::Constant { point: flip, value: 1 },
        },
    }
}
