//! Expansion of `B_N` with `N` kept symbolic.
//!
//! Every term after the initial conditions `⟨1, …, N⟩` is a linear form
//! `a·N + b`, valid once `N` clears a lower bound. Each step classifies the
//! three lookup arguments as a constant index into the initial segment, an
//! index `N − c` into its tail, an earlier computed term, a nonpositive
//! index, or a forward reference.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::recurrence::{linear_run, Status};

/// `a·N + b`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearForm {
    pub a: i64,
    pub b: i64,
}

impl LinearForm {
    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub const fn constant(b: i64) -> Self {
        Self { a: 0, b }
    }

    /// `N + b`
    pub const fn offset(b: i64) -> Self {
        Self { a: 1, b }
    }

    pub fn eval(self, n: i64) -> i128 {
        self.a as i128 * n as i128 + self.b as i128
    }
}

impl std::ops::Add for LinearForm {
    type Output = LinearForm;
    fn add(self, o: Self) -> Self {
        LinearForm::new(self.a + o.a, self.b + o.b)
    }
}

impl std::ops::Sub for LinearForm {
    type Output = LinearForm;
    fn sub(self, o: Self) -> Self {
        LinearForm::new(self.a - o.a, self.b - o.b)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |v: i64| if v < 0 { '−' } else { '+' };
        match (self.a, self.b) {
            (0, b) if b < 0 => write!(f, "−{}", -b),
            (0, b) => write!(f, "{b}"),
            (a, b) => {
                match a {
                    1 => f.write_str("N")?,
                    -1 => f.write_str("−N")?,
                    a if a < 0 => write!(f, "−{}N", -a)?,
                    a => write!(f, "{a}N")?,
                }
                if b != 0 {
                    write!(f, "{}{}", sign(b), b.abs())?;
                }
                Ok(())
            }
        }
    }
}

/// "Valid for all `N ≥ lower_bound`". Combines by maximum; `N ≥ 1` is the
/// neutral element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Constraint {
    pub lower_bound: i64,
}

impl Constraint {
    pub const NONE: Constraint = Constraint { lower_bound: 1 };

    pub const fn at_least(n: i64) -> Self {
        Self { lower_bound: n }
    }

    pub fn and(self, other: Constraint) -> Constraint {
        self.max(other)
    }

    pub fn holds(self, n: i64) -> bool {
        n >= self.lower_bound
    }
}

impl Default for Constraint {
    fn default() -> Self {
        Constraint::NONE
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N≥{}", self.lower_bound)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Plain,
    Bar,
}

impl Variant {
    pub fn zero_extended(self) -> bool {
        matches!(self, Variant::Bar)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Plain => "plain",
            Variant::Bar => "bar",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "plain" => Ok(Variant::Plain),
            "bar" => Ok(Variant::Bar),
            other => Err(crate::Error::Invalid(format!("unknown variant `{other}` (plain|bar)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    /// Index into `1..=N`; the value is the index itself.
    InitialSegment { value: LinearForm },
    /// The already computed term `B(N + offset)`.
    Computed { offset: i64 },
    Nonpositive,
    Forward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub category: Category,
    pub constraint: Constraint,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// Classifies the lookup index `e` met while computing `B(N + j)`.
///
/// The variant does not change the category, only what the caller does
/// with a nonpositive or forward index.
pub fn classify_index(e: LinearForm, j: i64, _variant: Variant) -> Classification {
    let c = |category, lb| Classification { category, constraint: Constraint::at_least(lb) };
    let LinearForm { a, b } = e;
    match a {
        a if a <= -1 => c(Category::Nonpositive, ceil_div(b, -a)),
        0 if b <= 0 => c(Category::Nonpositive, 1),
        0 => c(Category::InitialSegment { value: LinearForm::constant(b) }, b),
        1 if b <= 0 => c(Category::InitialSegment { value: LinearForm::offset(b) }, 1 - b),
        1 if b < j => c(Category::Computed { offset: b }, 1),
        1 => c(Category::Forward, 1),
        // aN + b ≥ N + j once (a−1)N ≥ j − b
        a => c(Category::Forward, ceil_div(j - b, a - 1)),
    }
}

/// One computed term `B(N + offset) = value`, valid for `N ≥ local_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicTerm {
    pub index_offset: i64,
    pub value: LinearForm,
    pub local_bound: Constraint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Terminal {
    /// A lookup is undefined at `N + offset` for every `N ≥ bound`.
    Death { at_offset: i64, bound: Constraint },
    /// Forward reference under zero extension.
    End { at_offset: i64, bound: Constraint },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicRun {
    pub variant: Variant,
    pub shifts: Vec<i64>,
    pub terms: Vec<SymbolicTerm>,
    pub cumulative_bound: Constraint,
    pub terminal: Option<Terminal>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepResult {
    Term(SymbolicTerm),
    Terminal(Terminal),
}

impl SymbolicRun {
    pub fn new(variant: Variant) -> Self {
        Self::with_shifts(variant, vec![1, 2, 3])
    }

    pub fn with_shifts(variant: Variant, shifts: Vec<i64>) -> Self {
        Self { variant, shifts, terms: Vec::new(), cumulative_bound: Constraint::NONE, terminal: None }
    }

    pub fn next_offset(&self) -> i64 {
        self.terms.len() as i64 + 1
    }

    pub fn term(&self, offset: i64) -> Option<&SymbolicTerm> {
        usize::try_from(offset - 1).ok().and_then(|i| self.terms.get(i))
    }

    /// Bound under which terms `1..=offset` are all valid.
    pub fn prefix_bound(&self, offset: i64) -> Constraint {
        self.terms
            .iter()
            .take(offset.max(0) as usize)
            .fold(Constraint::NONE, |acc, t| acc.and(t.local_bound))
    }

    /// Symbolic value of `B(N + j)` for a lookback, with its constraint.
    fn lookback(&self, j: i64) -> (LinearForm, Constraint) {
        if j >= 1 {
            let t = self.term(j).expect("lookback to a computed term");
            (t.value, Constraint::NONE)
        } else {
            // B(N + j) = N + j, an index into the initial segment tail
            (LinearForm::offset(j), Constraint::at_least(1 - j))
        }
    }

    /// Computes `B(N + j)` for the next offset `j`.
    pub fn step(&mut self) -> StepResult {
        assert!(self.terminal.is_none(), "symbolic run already terminated");
        let j = self.next_offset();
        let mut bound = Constraint::NONE;
        let mut value = LinearForm::constant(0);
        let mut stop: Option<fn(i64, Constraint) -> Terminal> = None;
        for &s in &self.shifts {
            let (v, lb) = self.lookback(j - s);
            bound = bound.and(lb);
            let e = LinearForm::offset(j) - v;
            let cls = classify_index(e, j, self.variant);
            bound = bound.and(cls.constraint);
            match cls.category {
                Category::InitialSegment { value: f } => value = value + f,
                Category::Computed { offset } => value = value + self.term(offset).expect("computed").value,
                Category::Nonpositive => {
                    if self.variant == Variant::Plain && stop.is_none() {
                        stop = Some(|at_offset, bound| Terminal::Death { at_offset, bound });
                    }
                }
                Category::Forward => {
                    if stop.is_none() {
                        stop = Some(match self.variant {
                            Variant::Plain => |at_offset, bound| Terminal::Death { at_offset, bound },
                            Variant::Bar => |at_offset, bound| Terminal::End { at_offset, bound },
                        });
                    }
                }
            }
        }
        if let Some(make) = stop {
            let t = make(j, bound);
            self.terminal = Some(t);
            return StepResult::Terminal(t);
        }
        let term = SymbolicTerm { index_offset: j, value, local_bound: bound };
        self.cumulative_bound = self.cumulative_bound.and(bound);
        self.terms.push(term);
        StepResult::Term(term)
    }
}

/// Runs [`SymbolicRun::step`] until `count` terms exist or the run stops.
pub fn symbolic_expand(variant: Variant, count: usize) -> SymbolicRun {
    let mut run = SymbolicRun::new(variant);
    while run.terms.len() < count && run.terminal.is_none() {
        run.step();
    }
    run
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicMismatch {
    pub n: i64,
    pub offset: i64,
    pub expected: String,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossReport {
    pub checked: u64,
    /// Samples whose terminal (death/end index) was checked.
    pub terminal_checked: u64,
    pub mismatches: Vec<SymbolicMismatch>,
}

impl CrossReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Evaluates the symbolic terms at each sample `N` and compares them with
/// concrete generation. Term `j` is checked only when `N` meets the bounds
/// of steps `1..=j`; a terminal is checked when `N` also meets its bound.
pub fn cross_validate(sym: &SymbolicRun, samples: &[i64]) -> CrossReport {
    let mut report = CrossReport { checked: 0, terminal_checked: 0, mismatches: Vec::new() };
    for &n in samples {
        if n < 3 {
            continue;
        }
        let horizon = n as usize + sym.terms.len() + 1;
        let run = linear_run(n as u64, sym.variant.zero_extended(), horizon).expect("N ≥ 3");
        let mut prefix = Constraint::NONE;
        for t in &sym.terms {
            prefix = prefix.and(t.local_bound);
            if !prefix.holds(n) {
                break;
            }
            let observed = run.term_at(n + t.index_offset).map(|v| v.to_string()).unwrap_or_else(|_| "undefined".into());
            let expected = t.value.eval(n).to_string();
            if observed != expected {
                report.mismatches.push(SymbolicMismatch { n, offset: t.index_offset, expected, observed });
            }
            report.checked += 1;
        }
        if let Some(term) = sym.terminal {
            let (offset, bound, ended) = match term {
                Terminal::Death { at_offset, bound } => (at_offset, bound, false),
                Terminal::End { at_offset, bound } => (at_offset, bound, true),
            };
            if prefix.holds(n) && bound.holds(n) {
                report.terminal_checked += 1;
                let at = (n + offset) as u64;
                let expected = if ended { Status::Ended { undefined_index: at } } else { Status::Dead { undefined_index: at } };
                if run.status() != expected {
                    report.mismatches.push(SymbolicMismatch {
                        n,
                        offset,
                        expected: expected.to_string(),
                        observed: run.status().to_string(),
                    });
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        let cls = classify_index(LinearForm::offset(-4), 2, Variant::Plain);
        assert_eq!(cls.category, Category::InitialSegment { value: LinearForm::offset(-4) });
        assert_eq!(cls.constraint, Constraint::at_least(5));

        let cls = classify_index(LinearForm::new(-1, 14), 25, Variant::Plain);
        assert_eq!(cls, Classification { category: Category::Nonpositive, constraint: Constraint::at_least(14) });

        let cls = classify_index(LinearForm::constant(2), 9, Variant::Bar);
        assert_eq!(cls.category, Category::InitialSegment { value: LinearForm::constant(2) });
        assert_eq!(cls.constraint, Constraint::at_least(2));

        let cls = classify_index(LinearForm::new(-3, 12), 63, Variant::Bar);
        assert_eq!(cls, Classification { category: Category::Nonpositive, constraint: Constraint::at_least(4) });
    }

    #[test]
    fn classification_edges() {
        assert_eq!(classify_index(LinearForm::constant(0), 5, Variant::Bar).category, Category::Nonpositive);
        assert_eq!(classify_index(LinearForm::offset(3), 5, Variant::Bar).category, Category::Computed { offset: 3 });
        assert_eq!(classify_index(LinearForm::offset(5), 5, Variant::Bar).category, Category::Forward);
        let fwd = classify_index(LinearForm::new(2, 3), 10, Variant::Plain);
        assert_eq!(fwd, Classification { category: Category::Forward, constraint: Constraint::at_least(7) });
        // −2N + 5 ≤ 0 from N ≥ 3
        assert_eq!(classify_index(LinearForm::new(-2, 5), 9, Variant::Bar).constraint, Constraint::at_least(3));
        assert_eq!(classify_index(LinearForm::new(-1, -3), 9, Variant::Bar).constraint, Constraint::at_least(-3));
    }

    #[test]
    fn first_steps() {
        let mut run = SymbolicRun::new(Variant::Plain);
        let StepResult::Term(t) = run.step() else { panic!() };
        assert_eq!((t.value, t.local_bound), (LinearForm::constant(6), Constraint::at_least(3)));
        let plain = symbolic_expand(Variant::Plain, 30);
        assert_eq!(plain.terms.len(), 24);
        assert_eq!(plain.terms[23].value, LinearForm::new(2, 11));
        assert_eq!(plain.terms[23].local_bound, Constraint::at_least(8));
        assert_eq!(plain.terminal, Some(Terminal::Death { at_offset: 25, bound: Constraint::at_least(14) }));
    }

    #[test]
    fn bar_continues_past_offset_25() {
        let bar = symbolic_expand(Variant::Bar, 69);
        assert_eq!(bar.terms[24].value, LinearForm::new(2, 5));
        assert_eq!(bar.terms[24].local_bound, Constraint::at_least(14));
        assert_eq!(bar.terms[68].value, LinearForm::new(1, -2));
        assert_eq!(bar.terms[68].local_bound, Constraint::at_least(67));
        assert_eq!(bar.cumulative_bound, Constraint::at_least(67));
    }

    #[test]
    fn rendering() {
        assert_eq!(LinearForm::new(2, 11).to_string(), "2N+11");
        assert_eq!(LinearForm::new(1, -2).to_string(), "N−2");
        assert_eq!(LinearForm::new(-3, 12).to_string(), "−3N+12");
        assert_eq!(LinearForm::constant(6).to_string(), "6");
        assert_eq!(LinearForm::offset(0).to_string(), "N");
        assert_eq!(Constraint::at_least(67).to_string(), "N≥67");
    }

    #[test]
    fn cross_validation_is_gated_by_bounds() {
        let plain = symbolic_expand(Variant::Plain, 24);
        let rep = cross_validate(&plain, &[5]);
        assert!(rep.ok(), "{rep:?}");
        // steps 1..=8 hold from N ≥ 5; step 9 needs N ≥ 5 too, step 13 needs 6
        assert_eq!(rep.checked, 12);
        assert_eq!(rep.terminal_checked, 0);
    }
}
