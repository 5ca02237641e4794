//! File formats and report rendering: OEIS b-files, run configuration,
//! CSV/JSON output, plot data and the OEIS cross-check.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::recurrence::{generate, linear_run, InitialConditions, RecurrenceSpec, Run, Status};
use crate::symbolic::{SymbolicRun, Terminal, Variant};
use crate::{Error, Result};

/// Version stamped on every JSON report.
pub const REPORT_SCHEMA: u32 = 1;

/// Environment variable naming the b-file fixture directory.
pub const FIXTURE_ENV: &str = "TRIHOF_FIXTURES";

/// OEIS b-file: optional `#` comments, then `index value` lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BFile {
    pub anum: Option<String>,
    pub comments: Vec<String>,
    pub entries: Vec<(i64, BigInt)>,
}

impl BFile {
    pub fn from_run(run: &Run, anum: Option<&str>) -> Self {
        let comments = anum.map(|a| vec![format!("{a}: {}", describe_run(run))]).unwrap_or_default();
        Self { anum: anum.map(str::to_string), comments, entries: run.iter().map(|(i, v)| (i as i64, v)).collect() }
    }

    pub fn first_index(&self) -> Option<i64> {
        self.entries.first().map(|e| e.0)
    }

    pub fn last_index(&self) -> Option<i64> {
        self.entries.last().map(|e| e.0)
    }

    /// Parses b-file text. Blank lines are ignored; indices must increase
    /// by exactly one.
    pub fn read(reader: impl BufRead) -> Result<Self> {
        let mut out = BFile::default();
        for (no, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::BFile { line: no + 1, reason: e.to_string() })?;
            let bad = |reason: String| Error::BFile { line: no + 1, reason };
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            // comments keep their trailing text verbatim
            if let Some(c) = line.trim_start().trim_end_matches('\r').strip_prefix('#') {
                let c = c.strip_prefix(' ').unwrap_or(c);
                if out.anum.is_none() && out.entries.is_empty() {
                    out.anum = anum_in(c);
                }
                out.comments.push(c.to_string());
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            let (Some(i), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad(format!("expected `index value`, got `{trimmed}`")));
            };
            let i: i64 = i.parse().map_err(|_| bad(format!("bad index `{i}`")))?;
            let v: BigInt = v.parse().map_err(|_| bad(format!("bad value `{v}`")))?;
            if let Some(prev) = out.last_index() {
                if i != prev + 1 {
                    return Err(bad(format!("index {i} does not follow {prev}")));
                }
            }
            out.entries.push((i, v));
        }
        Ok(out)
    }

    pub fn read_path(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::BFile { line: 0, reason: format!("{}: {e}", path.display()) })?;
        Self::read(io::BufReader::new(f))
    }

    pub fn write(&self, mut w: impl Write) -> io::Result<()> {
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        for (i, v) in &self.entries {
            writeln!(w, "{i} {v}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ASCII output")
    }
}

impl FromStr for BFile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BFile::read(s.as_bytes())
    }
}

fn anum_in(comment: &str) -> Option<String> {
    comment
        .split(|c: char| !c.is_ascii_alphanumeric())
        .find(|w| w.len() == 7 && w.starts_with('A') && w[1..].bytes().all(|b| b.is_ascii_digit()))
        .map(str::to_string)
}

fn describe_run(run: &Run) -> String {
    let ics = run.initial_conditions();
    let first = ics.values().first().map(ToString::to_string).unwrap_or_default();
    let last = ics.values().last().map(ToString::to_string).unwrap_or_default();
    let bar = if run.zero_extended() { "0̄;" } else { "" };
    format!("{} with ⟨{bar}{first}..{last}⟩", run.spec().name())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    BFile,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bfile" | "b-file" => Ok(OutputFormat::BFile),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Invalid(format!("unknown format `{other}` (bfile|csv|json)"))),
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    /// `b` (shifts 1,2,3), `q` (shifts 1,2), or a comma separated shift list.
    pub recurrence: String,
    pub n: u64,
    pub variant: Variant,
    pub max_terms: usize,
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn spec(&self) -> Result<RecurrenceSpec> {
        match self.recurrence.as_str() {
            "b" | "B" => Ok(RecurrenceSpec::three_term()),
            "q" | "Q" => Ok(RecurrenceSpec::hofstadter_q()),
            list => {
                let shifts = list
                    .split(',')
                    .map(|s| s.trim().parse::<i64>().map_err(|_| Error::Invalid(format!("bad shift `{s}`"))))
                    .collect::<Result<Vec<_>>>()?;
                RecurrenceSpec::new(format!("shifts {list}"), shifts)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let spec = self.spec()?;
        if (self.n as usize) < spec.max_shift() {
            return Err(Error::ShortInitialConditions { got: self.n as usize, need: spec.max_shift() });
        }
        Ok(())
    }

    pub fn initial_conditions(&self) -> InitialConditions {
        match self.variant {
            Variant::Plain => InitialConditions::linear(self.n),
            Variant::Bar => InitialConditions::linear_bar(self.n),
        }
    }

    pub fn run(&self) -> Result<Run> {
        self.validate()?;
        generate(self.spec()?, self.initial_conditions(), self.max_terms.max(self.n as usize))
    }
}

/// Trailer text for a run: `alive`, `died at i` or `ended at i`.
pub fn status_line(status: Status) -> String {
    status.to_string()
}

#[derive(Serialize)]
struct RunDocument<'a> {
    schema: u32,
    config: &'a RunConfig,
    length: usize,
    status: Status,
    terms: Vec<String>,
}

/// Renders `run` in the configured format, ending with a status trailer
/// (a `#` comment for b-file and CSV output).
pub fn render_run(run: &Run, config: &RunConfig) -> Result<String> {
    match config.format {
        OutputFormat::BFile => {
            let mut text = BFile { anum: None, comments: Vec::new(), entries: run.iter().map(|(i, v)| (i as i64, v)).collect() }
                .to_text();
            writeln!(text, "# {}", status_line(run.status())).expect("string");
            Ok(text)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "value"]).map_err(csv_err)?;
            for (i, v) in run.iter() {
                w.write_record([i.to_string(), v.to_string()]).map_err(csv_err)?;
            }
            let mut text = String::from_utf8(w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?).expect("utf8");
            writeln!(text, "# {}", status_line(run.status())).expect("string");
            Ok(text)
        }
        OutputFormat::Json => {
            let doc = RunDocument {
                schema: REPORT_SCHEMA,
                config,
                length: run.len(),
                status: run.status(),
                terms: run.iter().map(|(_, v)| v.to_string()).collect(),
            };
            to_json(&doc)
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Invalid(format!("csv: {e}"))
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Invalid(format!("json: {e}")))
}

/// Versioned JSON envelope for reports.
#[derive(Debug, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub schema: u32,
    pub kind: &'a str,
    pub ok: bool,
    pub results: T,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(kind: &'a str, ok: bool, results: T) -> Self {
        Self { schema: REPORT_SCHEMA, kind, ok, results }
    }
}

/// Serializes a list of flat records as CSV with a header row.
pub fn records_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?).expect("utf8"))
}

/// One row of a symbolic expansion table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicRow {
    pub offset: String,
    pub form: String,
    pub bound: String,
}

pub fn symbolic_rows(sym: &SymbolicRun) -> Vec<SymbolicRow> {
    sym.terms
        .iter()
        .map(|t| SymbolicRow {
            offset: format!("N+{}", t.index_offset),
            form: t.value.to_string(),
            bound: t.local_bound.to_string(),
        })
        .collect()
}

pub fn terminal_note(sym: &SymbolicRun) -> Option<String> {
    sym.terminal.map(|t| match t {
        Terminal::Death { at_offset, bound } => format!("dies at N+{at_offset} for {bound}"),
        Terminal::End { at_offset, bound } => format!("ends at N+{at_offset} for {bound}"),
    })
}

/// `offset | form | bound` rows, then the cumulative bound and any terminal.
pub fn symbolic_table(sym: &SymbolicRun) -> String {
    let mut out = String::new();
    for r in symbolic_rows(sym) {
        writeln!(out, "{} | {} | {}", r.offset, r.form, r.bound).expect("string");
    }
    writeln!(out, "# all rows valid for {}", sym.cumulative_bound).expect("string");
    if let Some(note) = terminal_note(sym) {
        writeln!(out, "# {note}").expect("string");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlotSummary {
    pub rows: usize,
    pub status: Status,
}

/// Writes `index,value` rows (plus `bits` when `with_bits`) for the first
/// `terms` terms of `B_N` / `B̄_N`. A run that stops early gets a trailing
/// `# died at i` / `# ended at i` comment.
pub fn plot_data(n: u64, variant: Variant, terms: usize, with_bits: bool, out: impl Write) -> Result<PlotSummary> {
    let run = linear_run(n, variant.zero_extended(), terms.max(n as usize))?;
    let mut w = io::BufWriter::new(out);
    let io_err = |e: io::Error| Error::Invalid(format!("write: {e}"));
    let rows = run.len().min(terms);
    let header = if with_bits { "index,value,bits" } else { "index,value" };
    writeln!(w, "{header}").map_err(io_err)?;
    match run.small_terms() {
        Some(small) => {
            for (i, v) in small.iter().take(rows).enumerate() {
                if with_bits {
                    writeln!(w, "{},{v},{}", i + 1, 64 - v.unsigned_abs().leading_zeros()).map_err(io_err)?;
                } else {
                    writeln!(w, "{},{v}", i + 1).map_err(io_err)?;
                }
            }
        }
        None => {
            for (i, v) in run.iter().take(rows) {
                if with_bits {
                    writeln!(w, "{i},{v},{}", v.bits()).map_err(io_err)?;
                } else {
                    writeln!(w, "{i},{v}").map_err(io_err)?;
                }
            }
        }
    }
    let status = run.status();
    if !status.is_alive() {
        writeln!(w, "# {status}").map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    Ok(PlotSummary { rows, status })
}

/// A-number to `(N, variant)` for every OEIS entry tied to this family.
pub const OEIS_MAP: [(&str, u64, Variant); 15] = [
    ("A373227", 7, Variant::Plain),
    ("A373228", 8, Variant::Plain),
    ("A373229", 9, Variant::Plain),
    ("A373230", 10, Variant::Plain),
    ("A373231", 11, Variant::Plain),
    ("A373232", 12, Variant::Plain),
    ("A373233", 13, Variant::Plain),
    ("A373234", 196, Variant::Bar),
    ("A373235", 2087, Variant::Bar),
    ("A373236", 3201, Variant::Bar),
    ("A373237", 4315, Variant::Bar),
    ("A373238", 200, Variant::Bar),
    ("A274058", 32478, Variant::Bar),
    ("A373239", 118, Variant::Bar),
    ("A283887", 20830, Variant::Bar),
];

pub fn oeis_lookup(anum: &str) -> Option<(u64, Variant)> {
    OEIS_MAP.iter().find(|e| e.0.eq_ignore_ascii_case(anum)).map(|e| (e.1, e.2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum OeisStatus {
    Match,
    Mismatch { index: i64, expected: String, observed: String },
    /// The b-file runs past the regenerated sequence's last term.
    TooShort { length: usize, wanted: i64 },
    NothingToCompare,
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OeisReport {
    pub anum: String,
    pub n: u64,
    pub variant: Variant,
    pub compared: usize,
    pub status: OeisStatus,
}

impl OeisReport {
    /// Soft outcomes (skipped, empty) are not failures.
    pub fn failed(&self) -> bool {
        matches!(self.status, OeisStatus::Mismatch { .. } | OeisStatus::TooShort { .. })
    }
}

/// Regenerates the sequence behind `anum` and compares it with `bfile`.
pub fn oeis_check(anum: &str, bfile: &BFile) -> Result<OeisReport> {
    let (n, variant) = oeis_lookup(anum).ok_or_else(|| Error::Invalid(format!("no known sequence for {anum}")))?;
    let mut report = OeisReport { anum: anum.to_string(), n, variant, compared: 0, status: OeisStatus::NothingToCompare };
    let Some(last) = bfile.last_index() else { return Ok(report) };
    let run = linear_run(n, variant.zero_extended(), last.max(n as i64) as usize)?;
    for (i, want) in &bfile.entries {
        match run.term_at(*i) {
            Ok(got) if got == *want => report.compared += 1,
            Ok(got) => {
                report.status = OeisStatus::Mismatch { index: *i, expected: want.to_string(), observed: got.to_string() };
                return Ok(report);
            }
            Err(_) => {
                report.status = OeisStatus::TooShort { length: run.len(), wanted: *i };
                return Ok(report);
            }
        }
    }
    report.status = OeisStatus::Match;
    Ok(report)
}

/// Fixture directory: `$TRIHOF_FIXTURES` or `fallback`.
pub fn fixture_dir(fallback: impl Into<PathBuf>) -> PathBuf {
    std::env::var_os(FIXTURE_ENV).map(PathBuf::from).unwrap_or_else(|| fallback.into())
}

/// `<dir>/b373227.txt`, the file name OEIS uses.
pub fn fixture_path(dir: &Path, anum: &str) -> PathBuf {
    dir.join(format!("b{}.txt", anum.trim_start_matches(['A', 'a'])))
}

/// Checks `anum` against its fixture in `dir`; a missing file is a skip.
pub fn oeis_check_fixture(dir: &Path, anum: &str) -> Result<OeisReport> {
    let path = fixture_path(dir, anum);
    if !path.exists() {
        let (n, variant) = oeis_lookup(anum).ok_or_else(|| Error::Invalid(format!("no known sequence for {anum}")))?;
        return Ok(OeisReport {
            anum: anum.to_string(),
            n,
            variant,
            compared: 0,
            status: OeisStatus::Skipped { reason: format!("{} not found", path.display()) },
        });
    }
    oeis_check(anum, &BFile::read_path(&path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bfile_round_trip() {
        let run = linear_run(12, false, 100).unwrap();
        let text = BFile::from_run(&run, Some("A373232")).to_text();
        let again: BFile = text.parse().unwrap();
        assert_eq!(again.anum.as_deref(), Some("A373232"));
        assert_eq!(again.entries.len(), 45);
        assert_eq!(again.to_text(), text);
    }

    #[test]
    fn bfile_rejects_gaps() {
        let err = "1 1\n3 2\n".parse::<BFile>().unwrap_err();
        assert!(matches!(err, Error::BFile { line: 2, .. }), "{err}");
        assert!("1 x\n".parse::<BFile>().is_err());
    }

    #[test]
    fn oeis_against_regenerated_prefix() {
        let run = linear_run(118, true, 1000).unwrap();
        let b = BFile::from_run(&run, Some("A373239"));
        let rep = oeis_check("A373239", &b).unwrap();
        assert_eq!((rep.compared, rep.status.clone()), (245, OeisStatus::Match));
        let empty = oeis_check("A373239", &BFile::default()).unwrap();
        assert_eq!(empty.status, OeisStatus::NothingToCompare);
        let mut bad = b.clone();
        bad.entries[130].1 += 1;
        assert!(oeis_check("A373239", &bad).unwrap().failed());
    }

    #[test]
    fn run_rendering_trailers() {
        let cfg = RunConfig { recurrence: "b".into(), n: 14, variant: Variant::Plain, max_terms: 1000, format: OutputFormat::BFile, seed: None };
        let text = render_run(&cfg.run().unwrap(), &cfg).unwrap();
        assert_eq!(text.lines().count(), 39);
        assert_eq!(text.lines().last(), Some("# died at 39"));
        let cfg = RunConfig { n: 5, max_terms: 10, format: OutputFormat::Csv, ..cfg };
        let text = render_run(&cfg.run().unwrap(), &cfg).unwrap();
        assert_eq!(text.lines().next(), Some("index,value"));
        assert_eq!(text.lines().last(), Some("# alive"));
    }

    #[test]
    fn plot_trailer_on_death() {
        let mut buf = Vec::new();
        let s = plot_data(3, Variant::Plain, 100, false, &mut buf).unwrap();
        assert_eq!(s.rows, 4);
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "index,value\n1,1\n2,2\n3,3\n4,6\n# died at 5\n");
    }
}
