//! Runs that skip over lemma-governed stretches.
//!
//! A [`ChunkedRun`] is a concrete prefix followed by alternating closed-form
//! chunks and concrete tails. Indices are arbitrary precision, so a run can
//! be continued past positions no machine could enumerate.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::patterns::{match_suffix_among, LazyValue, LemmaInstance, TemplateId, TermSource};
use crate::recurrence::{RecurrenceSpec, Run, Status};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    /// Indices `start..=end` answered by `instance`.
    Chunk { instance: Box<LemmaInstance>, start: BigInt, end: Option<BigInt> },
    /// Concrete terms at `start, start+1, …`.
    Tail { start: BigInt, values: Vec<LazyValue> },
}

impl Segment {
    fn start(&self) -> &BigInt {
        match self {
            Segment::Chunk { start, .. } | Segment::Tail { start, .. } => start,
        }
    }

    /// Last covered index, `None` if unbounded.
    fn end(&self) -> Option<BigInt> {
        match self {
            Segment::Chunk { end, .. } => end.clone(),
            Segment::Tail { start, values } => Some(start + values.len() - 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChunkedStatus {
    Alive,
    /// The last chunk never ends.
    Immortal,
    Dead { undefined_index: BigInt },
    Ended { undefined_index: BigInt },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChunkedOutcome {
    Term(LazyValue),
    Died { at_index: BigInt, offending_shift: usize },
    Ended { at_index: BigInt, offending_shift: usize },
}

/// Why [`ChunkedRun::resume`] returned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResumeStop {
    Terminated(ChunkedOutcome),
    Matched(Box<LemmaInstance>),
    Budget,
}

#[derive(Debug, Clone)]
pub struct ChunkedRun {
    base: Run,
    segments: Vec<Segment>,
    status: ChunkedStatus,
}

impl ChunkedRun {
    /// Wraps a concrete run with no chunks yet.
    pub fn from_run(base: Run) -> Self {
        let status = match base.status() {
            Status::Alive => ChunkedStatus::Alive,
            Status::Dead { undefined_index } => ChunkedStatus::Dead { undefined_index: undefined_index.into() },
            Status::Ended { undefined_index } => ChunkedStatus::Ended { undefined_index: undefined_index.into() },
        };
        Self { base, segments: Vec::new(), status }
    }

    pub fn base(&self) -> &Run {
        &self.base
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn chunks(&self) -> impl Iterator<Item = (&LemmaInstance, &BigInt, Option<&BigInt>)> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Chunk { instance, start, end } => Some((&**instance, start, end.as_ref())),
            Segment::Tail { .. } => None,
        })
    }

    pub fn status(&self) -> &ChunkedStatus {
        &self.status
    }

    fn spec(&self) -> &RecurrenceSpec {
        self.base.spec()
    }

    /// Number of defined terms; `None` for an immortal run.
    pub fn len(&self) -> Option<BigInt> {
        match self.segments.last() {
            None => Some(BigInt::from(self.base.len())),
            Some(s) => s.end(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len().is_some_and(|l| l.is_zero())
    }

    /// Records `instance` as covering everything after the current last
    /// index up to its extent (or `horizon`, whichever is smaller).
    pub fn fast_forward(&mut self, instance: LemmaInstance, horizon: Option<BigInt>) -> Result<()> {
        if self.status != ChunkedStatus::Alive {
            return Err(Error::Invalid(format!("cannot fast-forward a run in state {:?}", self.status)));
        }
        let len = self.len().expect("alive runs have finite length");
        let start = &len + 1;
        if instance.start() > &start {
            return Err(Error::Invalid(format!(
                "instance starting at {} leaves a gap after index {len}",
                instance.start()
            )));
        }
        let end = match (instance.extent(), horizon) {
            (Some(e), Some(h)) => Some(e.min(&h).clone()),
            (Some(e), None) => Some(e.clone()),
            (None, Some(h)) => Some(h),
            (None, None) => None,
        };
        match &end {
            None => self.status = ChunkedStatus::Immortal,
            Some(e) if *e < start => return Ok(()),
            Some(_) => {}
        }
        self.segments.push(Segment::Chunk { instance: Box::new(instance), start, end });
        Ok(())
    }

    /// Term at an arbitrary-precision index.
    pub fn term_at(&self, index: &BigInt) -> Result<BigInt> {
        self.lazy_term(index)?.exact()
    }

    /// Term at `index`, leaving chunk values with enormous doubling
    /// exponents unexpanded.
    pub fn lazy_term(&self, index: &BigInt) -> Result<LazyValue> {
        if !index.is_positive() {
            if self.base.zero_extended() {
                return Ok(LazyValue::Exact(BigInt::zero()));
            }
            return Err(self.lookup_error(index));
        }
        let base_len = BigInt::from(self.base.len());
        if *index <= base_len {
            return self.base.term(index).map(LazyValue::Exact);
        }
        // segments are ordered; find the last one starting at or before index
        let pos = self.segments.partition_point(|s| s.start() <= index);
        let Some(seg) = pos.checked_sub(1).map(|p| &self.segments[p]) else {
            return Err(self.lookup_error(index));
        };
        if seg.end().is_some_and(|e| *index > e) {
            return Err(self.lookup_error(index));
        }
        match seg {
            Segment::Chunk { instance, .. } => instance.lazy_term(index),
            Segment::Tail { start, values } => {
                let off: usize = (index - start).try_into().map_err(|_| Error::UncoveredGap(index.to_string()))?;
                Ok(values[off].clone())
            }
        }
    }

    fn lookup_error(&self, index: &BigInt) -> Error {
        Error::Lookup {
            index: index.to_string(),
            length: self.len().map_or("∞".into(), |l| l.to_string()),
        }
    }

    fn push_term(&mut self, n: &BigInt, v: LazyValue) {
        if let Some(Segment::Tail { values, .. }) = self.segments.last_mut() {
            values.push(v);
            return;
        }
        self.segments.push(Segment::Tail { start: n.clone(), values: vec![v] });
    }

    /// Computes the term after the current last index, resolving lookbacks
    /// against tails, chunks, the base run, or zero extension.
    pub fn step(&mut self) -> Result<ChunkedOutcome> {
        if self.status != ChunkedStatus::Alive {
            return Err(Error::Invalid(format!("cannot step a run in state {:?}", self.status)));
        }
        let n: BigInt = self.len().expect("alive") + 1;
        let zero_ext = self.base.zero_extended();
        let mut total = LazyValue::Exact(BigInt::zero());
        for &s in self.spec().shifts().to_vec().iter() {
            let back: BigInt = &n - s;
            let v = self.lazy_term(&back).map_err(|_| Error::UncoveredGap(back.to_string()))?;
            // argument a = n − v: a ≤ 0 ⇔ v ≥ n, a ≥ n ⇔ v ≤ 0
            let zero = BigInt::zero();
            let (ge_n, le_0) = match (v.cmp_exact(&n), v.cmp_exact(&zero)) {
                (Some(vn), Some(v0)) => (vn != Ordering::Less, v0 != Ordering::Greater),
                _ => return Err(Error::Invalid(format!("cannot place the lookback argument at {n}"))),
            };
            let failed = if le_0 {
                true
            } else if ge_n {
                !zero_ext
            } else {
                let LazyValue::Exact(v) = v else { unreachable!("0 < v < n is small") };
                let a: BigInt = &n - &v;
                total = total.add(&self.lazy_term(&a)?)?;
                false
            };
            if failed {
                return Ok(if zero_ext {
                    self.status = ChunkedStatus::Ended { undefined_index: n.clone() };
                    ChunkedOutcome::Ended { at_index: n, offending_shift: s }
                } else {
                    self.status = ChunkedStatus::Dead { undefined_index: n.clone() };
                    ChunkedOutcome::Died { at_index: n, offending_shift: s }
                });
            }
        }
        self.push_term(&n, total.clone());
        Ok(ChunkedOutcome::Term(total))
    }

    /// Steps up to `max_steps` times, stopping early on termination or when
    /// one of `templates` matches the trailing terms.
    pub fn resume(&mut self, max_steps: u64, templates: &[TemplateId]) -> Result<ResumeStop> {
        for _ in 0..max_steps {
            let out = self.step()?;
            if !matches!(out, ChunkedOutcome::Term(_)) {
                return Ok(ResumeStop::Terminated(out));
            }
            if self.suffix_candidate() {
                if let Some(inst) = match_suffix_among(self, templates) {
                    return Ok(ResumeStop::Matched(Box::new(inst)));
                }
            }
        }
        Ok(ResumeStop::Budget)
    }

    /// Pre-filter on the trailing tail values (mirrors the concrete one).
    fn suffix_candidate(&self) -> bool {
        let Some(Segment::Tail { values, .. }) = self.segments.last() else { return false };
        let n = values.len();
        let at = |back: usize| -> Option<i64> {
            if back < n {
                match &values[n - 1 - back] {
                    LazyValue::Exact(v) => i64::try_from(v).ok(),
                    LazyValue::Doubling { .. } => None,
                }
            } else {
                None
            }
        };
        let last = at(0);
        (last == Some(2))
            || (last == Some(5))
            || (last == Some(7) && at(3) == Some(25))
            || (at(1) == Some(16) && at(3) == Some(7) && at(6) == Some(10))
    }
}

impl TermSource for ChunkedRun {
    fn length(&self) -> BigInt {
        self.len().unwrap_or_else(|| BigInt::one() << 64u32)
    }

    fn term(&self, index: &BigInt) -> Result<BigInt> {
        self.term_at(index)
    }
}

/// Convenience: wrap `run`, record `instance`, and return the result.
pub fn fast_forward(run: Run, instance: LemmaInstance, horizon: Option<BigInt>) -> Result<ChunkedRun> {
    let mut c = ChunkedRun::from_run(run);
    c.fast_forward(instance, horizon)?;
    Ok(c)
}
