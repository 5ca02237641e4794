//! Nested Hofstadter-like recurrences, centred on
//! `B(n) = B(n−B(n−1)) + B(n−B(n−2)) + B(n−B(n−3))`.
//!
//! - [`recurrence`]: exact generation with die/end semantics.
//! - [`symbolic`]: terms of `B_N` as linear forms in `N`.
//! - [`patterns`]: the interleaved-pattern templates, suffix matching.
//! - [`chunked`]: runs that skip over pattern chunks at huge indices.
//! - [`analysis`]: theorem checks and the behaviour classifier.
//! - [`interface`]: b-files, reports, plot data, OEIS checks.

pub mod analysis;
pub mod chunked;
mod decimal;
pub mod error;
pub mod interface;
pub mod patterns;
pub mod recurrence;
pub mod symbolic;
pub mod trials;

pub use analysis::{BehaviorClass, Outcome, TheoremReport};
pub use chunked::{ChunkedRun, ChunkedStatus};
pub use error::{Error, Result};
pub use interface::{BFile, OutputFormat, RunConfig};
pub use patterns::{LazyValue, LemmaInstance, LemmaParams, PatternEntry, TemplateId};
pub use recurrence::{generate, linear_run, InitialConditions, RecurrenceSpec, Run, Status, StepOutcome};
pub use symbolic::{Constraint, LinearForm, SymbolicRun, SymbolicTerm, Variant};

pub use num_bigint::BigInt;
