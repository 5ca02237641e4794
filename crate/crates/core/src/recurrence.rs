//! Concrete evaluation of nested recurrences `A(n) = Σ A(n − A(n − s))`.
//!
//! Terms are indexed from 1. Under finite initial conditions any lookup
//! outside `1..n` kills the sequence; under zero-extended initial conditions
//! indices `≤ 0` read as zero and only a forward reference (an argument
//! `≥ n`) stops it, in which case the sequence *ends*.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of a nested recurrence: `A(n) = Σᵢ A(n − A(n − shiftᵢ))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RecurrenceSpec {
    name: String,
    shifts: Vec<usize>,
}

impl RecurrenceSpec {
    pub fn new(name: impl Into<String>, shifts: Vec<i64>) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::EmptyShifts);
        }
        let shifts = shifts
            .into_iter()
            .map(|s| if s >= 1 { Ok(s as usize) } else { Err(Error::NonPositiveShift(s)) })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { name: name.into(), shifts })
    }

    /// The three-term recurrence `B(n) = B(n−B(n−1)) + B(n−B(n−2)) + B(n−B(n−3))`.
    pub fn three_term() -> Self {
        Self { name: "B".into(), shifts: vec![1, 2, 3] }
    }

    /// Hofstadter's `Q(n) = Q(n−Q(n−1)) + Q(n−Q(n−2))`.
    pub fn hofstadter_q() -> Self {
        Self { name: "Q".into(), shifts: vec![1, 2] }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn shifts(&self) -> &[usize] {
        &self.shifts
    }

    pub fn max_shift(&self) -> usize {
        self.shifts.iter().copied().max().unwrap_or(1)
    }
}

/// Values for indices `1..=len`, optionally extended by zeros at indices `≤ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialConditions {
    #[serde(with = "crate::decimal::vec")]
    values: Vec<BigInt>,
    zero_extended: bool,
}

impl InitialConditions {
    pub fn new<I, V>(values: I, zero_extended: bool) -> Self
    where
        I: IntoIterator<Item = V>,
        V: Into<BigInt>,
    {
        Self { values: values.into_iter().map(Into::into).collect(), zero_extended }
    }

    /// `⟨1, 2, …, n⟩`
    pub fn linear(n: u64) -> Self {
        Self::new(1..=n, false)
    }

    /// `⟨0̄; 1, 2, …, n⟩`
    pub fn linear_bar(n: u64) -> Self {
        Self::new(1..=n, true)
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn zero_extended(&self) -> bool {
        self.zero_extended
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Alive,
    Dead { undefined_index: u64 },
    Ended { undefined_index: u64 },
}

impl Status {
    pub fn is_alive(&self) -> bool {
        matches!(self, Status::Alive)
    }

    pub fn undefined_index(&self) -> Option<u64> {
        match *self {
            Status::Alive => None,
            Status::Dead { undefined_index } | Status::Ended { undefined_index } => {
                Some(undefined_index)
            }
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Alive => f.write_str("alive"),
            Status::Dead { undefined_index } => write!(f, "died at {undefined_index}"),
            Status::Ended { undefined_index } => write!(f, "ended at {undefined_index}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Term(BigInt),
    Died { at_index: u64, offending_shift: usize },
    Ended { at_index: u64, offending_shift: usize },
}

/// Marks a slot whose value lives in the overflow map.
const PROMOTED: i64 = i64::MIN;

/// Dense term storage with a 64-bit fast path. Values that do not fit (or
/// equal the sentinel) are kept losslessly in a side table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct TermStore {
    small: Vec<i64>,
    big: HashMap<usize, BigInt>,
}

impl TermStore {
    fn with_capacity(n: usize) -> Self {
        Self { small: Vec::with_capacity(n), big: HashMap::new() }
    }

    fn len(&self) -> usize {
        self.small.len()
    }

    fn push_small(&mut self, v: i64) {
        if v == PROMOTED {
            self.push_big(BigInt::from(v));
        } else {
            self.small.push(v);
        }
    }

    fn push_big(&mut self, v: BigInt) {
        match v.to_i64() {
            Some(s) if s != PROMOTED => self.small.push(s),
            _ => {
                self.big.insert(self.small.len(), v);
                self.small.push(PROMOTED);
            }
        }
    }

    /// Raw slot at zero-based position; `PROMOTED` means look in `big`.
    #[inline]
    fn raw(&self, pos: usize) -> i64 {
        self.small[pos]
    }

    fn get(&self, pos: usize) -> BigInt {
        match self.small[pos] {
            PROMOTED => self.big[&pos].clone(),
            v => BigInt::from(v),
        }
    }

    fn get_ref(&self, pos: usize) -> Option<&BigInt> {
        self.big.get(&pos)
    }
}

/// A materialized sequence: recurrence, initial conditions and every term
/// computed so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    spec: RecurrenceSpec,
    ics: InitialConditions,
    store: TermStore,
    status: Status,
}

/// Lookup argument classification for one summand.
enum Arg {
    Inside(usize),
    Zero,
    Fail,
}

impl Run {
    pub fn new(spec: RecurrenceSpec, ics: InitialConditions) -> Result<Self> {
        if ics.len() < spec.max_shift() {
            return Err(Error::ShortInitialConditions { got: ics.len(), need: spec.max_shift() });
        }
        let mut store = TermStore::with_capacity(ics.len());
        for v in ics.values() {
            store.push_big(v.clone());
        }
        Ok(Self { spec, ics, store, status: Status::Alive })
    }

    pub fn spec(&self) -> &RecurrenceSpec {
        &self.spec
    }

    pub fn initial_conditions(&self) -> &InitialConditions {
        &self.ics
    }

    pub fn zero_extended(&self) -> bool {
        self.ics.zero_extended
    }

    pub fn status(&self) -> Status {
        self.status
    }

    /// Number of defined terms (initial conditions included).
    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.len() == 0
    }

    pub fn reserve(&mut self, additional: usize) {
        self.store.small.reserve(additional);
    }

    /// Term at `index`, with zero extension applied for `index ≤ 0`.
    pub fn term_at(&self, index: i64) -> Result<BigInt> {
        if index >= 1 && (index as u64) <= self.len() as u64 {
            return Ok(self.store.get(index as usize - 1));
        }
        if index <= 0 && self.ics.zero_extended {
            return Ok(BigInt::zero());
        }
        Err(Error::Lookup { index: index.to_string(), length: self.len().to_string() })
    }

    /// Fast-path read: `Some` when the term at `index` is a 64-bit value.
    pub fn small_term(&self, index: usize) -> Option<i64> {
        if index == 0 || index > self.len() {
            return None;
        }
        match self.store.raw(index - 1) {
            PROMOTED => None,
            v => Some(v),
        }
    }

    /// All terms as 64-bit values, or `None` if any term was promoted.
    pub fn small_terms(&self) -> Option<&[i64]> {
        self.store.big.is_empty().then_some(&self.store.small[..])
    }

    /// Iterates `(index, value)` over every defined term.
    pub fn iter(&self) -> impl Iterator<Item = (u64, BigInt)> + '_ {
        (0..self.len()).map(move |p| (p as u64 + 1, self.store.get(p)))
    }

    /// Borrowing access for callers that want to avoid cloning promoted values.
    pub fn with_term<R>(&self, index: usize, f: impl FnOnce(TermRef<'_>) -> R) -> R {
        let pos = index - 1;
        match self.store.raw(pos) {
            PROMOTED => f(TermRef::Big(self.store.get_ref(pos).expect("promoted slot"))),
            v => f(TermRef::Small(v)),
        }
    }

    #[inline]
    fn classify(&self, n: usize, v: i64) -> Arg {
        // a = n - v; v may be anything representable in i64 except the sentinel.
        let a = n as i128 - v as i128;
        if a >= 1 && a < n as i128 {
            Arg::Inside(a as usize)
        } else if a <= 0 && self.ics.zero_extended {
            Arg::Zero
        } else {
            Arg::Fail
        }
    }

    fn classify_big(&self, n: usize, v: &BigInt) -> Arg {
        let a = BigInt::from(n) - v;
        match a.to_i64() {
            Some(a) if a >= 1 && (a as usize) < n => Arg::Inside(a as usize),
            _ if a <= BigInt::zero() && self.ics.zero_extended => Arg::Zero,
            _ => Arg::Fail,
        }
    }

    fn fail(&mut self, n: usize, shift: usize) -> StepOutcome {
        let at_index = n as u64;
        if self.ics.zero_extended {
            self.status = Status::Ended { undefined_index: at_index };
            StepOutcome::Ended { at_index, offending_shift: shift }
        } else {
            self.status = Status::Dead { undefined_index: at_index };
            StepOutcome::Died { at_index, offending_shift: shift }
        }
    }

    /// Computes the next term. Returns `false` when the run stopped.
    #[inline]
    fn advance(&mut self) -> bool {
        let n = self.len() + 1;
        let mut sum: i64 = 0;
        let mut overflow = false;
        for &s in &self.spec.shifts {
            let v = self.store.raw(n - s - 1);
            let arg = if v == PROMOTED {
                let big = self.store.get_ref(n - s - 1).expect("promoted slot");
                self.classify_big(n, big)
            } else {
                self.classify(n, v)
            };
            match arg {
                Arg::Inside(a) => {
                    let t = self.store.raw(a - 1);
                    if t == PROMOTED {
                        overflow = true;
                    } else if !overflow {
                        match sum.checked_add(t) {
                            Some(x) => sum = x,
                            None => overflow = true,
                        }
                    }
                }
                Arg::Zero => {}
                Arg::Fail => {
                    self.fail(n, s);
                    return false;
                }
            }
        }
        if overflow {
            let total = self.slow_sum(n);
            self.store.push_big(total);
        } else {
            self.store.push_small(sum);
        }
        true
    }

    /// Exact sum used once the fast path would overflow. Arguments were
    /// already validated by `advance`.
    fn slow_sum(&self, n: usize) -> BigInt {
        let mut total = BigInt::zero();
        for &s in &self.spec.shifts {
            let v = self.store.get(n - s - 1);
            if let Arg::Inside(a) = self.classify_big(n, &v) {
                total += self.store.get(a - 1);
            }
        }
        total
    }

    /// Computes one more term.
    ///
    /// Panics if the run has already died or ended.
    pub fn step(&mut self) -> StepOutcome {
        assert!(self.status.is_alive(), "step called on a terminated run");
        if self.advance() {
            StepOutcome::Term(self.store.get(self.len() - 1))
        } else {
            match self.status {
                Status::Dead { undefined_index } => StepOutcome::Died {
                    at_index: undefined_index,
                    offending_shift: self.failing_shift(),
                },
                Status::Ended { undefined_index } => StepOutcome::Ended {
                    at_index: undefined_index,
                    offending_shift: self.failing_shift(),
                },
                Status::Alive => unreachable!(),
            }
        }
    }

    /// First shift (in shift order) whose argument is undefined at the
    /// terminal index. `0` while the run is alive.
    pub fn failing_shift(&self) -> usize {
        let Some(n) = self.status.undefined_index() else { return 0 };
        let n = n as usize;
        self.spec
            .shifts
            .iter()
            .copied()
            .find(|&s| {
                let v = self.store.get(n - s - 1);
                matches!(self.classify_big(n, &v), Arg::Fail)
            })
            .unwrap_or(0)
    }

    /// Lookup arguments `n − A(n − s)` at index `n`, one per shift.
    pub fn arguments_at(&self, n: u64) -> Vec<BigInt> {
        let n = n as usize;
        self.spec
            .shifts
            .iter()
            .map(|&s| BigInt::from(n) - self.store.get(n - s - 1))
            .collect()
    }

    /// Steps until the run holds `max_terms` terms or stops.
    pub fn extend_to(&mut self, max_terms: usize) -> Status {
        if max_terms > self.len() {
            self.reserve(max_terms - self.len());
        }
        while self.status.is_alive() && self.len() < max_terms {
            self.advance();
        }
        self.status
    }

    /// Steps until `max_terms`, termination, or `stop` returns true after a
    /// newly computed term. `stop` sees the run and the new term's index.
    pub fn extend_until(
        &mut self,
        max_terms: usize,
        mut stop: impl FnMut(&Run, usize) -> bool,
    ) -> Status {
        while self.status.is_alive() && self.len() < max_terms {
            if self.advance() && stop(self, self.len()) {
                break;
            }
        }
        self.status
    }
}

#[derive(Debug, Clone, Copy)]
pub enum TermRef<'a> {
    Small(i64),
    Big(&'a BigInt),
}

impl TermRef<'_> {
    pub fn to_bigint(self) -> BigInt {
        match self {
            TermRef::Small(v) => BigInt::from(v),
            TermRef::Big(b) => b.clone(),
        }
    }
}

/// Runs the recurrence from `ics` until it stops or holds `max_terms` terms.
pub fn generate(spec: RecurrenceSpec, ics: InitialConditions, max_terms: usize) -> Result<Run> {
    let mut run = Run::new(spec, ics)?;
    run.extend_to(max_terms);
    Ok(run)
}

/// `B_N`: the three-term recurrence from `⟨1, …, n⟩`.
pub fn linear_run(n: u64, zero_extended: bool, max_terms: usize) -> Result<Run> {
    let ics = if zero_extended { InitialConditions::linear_bar(n) } else { InitialConditions::linear(n) };
    generate(RecurrenceSpec::three_term(), ics, max_terms)
}
