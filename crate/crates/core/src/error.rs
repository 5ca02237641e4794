use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("recurrence needs at least one shift")]
    EmptyShifts,
    #[error("shift {0} is not positive")]
    NonPositiveShift(i64),
    #[error("initial conditions have {got} values but the recurrence looks back {need}")]
    ShortInitialConditions { got: usize, need: usize },
    #[error("index {index} is outside the defined range 1..={length}")]
    Lookup { index: String, length: String },
    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),
    #[error("index {index} is outside the pattern range {start}..={end}")]
    OutsidePattern { index: String, start: String, end: String },
    #[error("lookback at {0} falls in an uncovered gap")]
    UncoveredGap(String),
    #[error("invalid b-file line {line}: {reason}")]
    BFile { line: usize, reason: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
