use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use trihof::analysis::{self, BehaviorClass};
use trihof::interface::{self, OeisReport, Report, FIXTURE_ENV};
use trihof::symbolic::{cross_validate, symbolic_expand};
use trihof::trials::lemma_suite;
use trihof::{OutputFormat, RunConfig, TemplateId, Variant};

const OK: u8 = 0;
const MISMATCH: u8 = 1;
const USAGE: u8 = 2;
const RESOURCE: u8 = 3;

/// Dense storage costs 8 bytes a term; refuse runs that would exceed this.
const DEFAULT_MEMORY_MB: u64 = 4096;

#[derive(Parser)]
#[command(name = "trihof", version, about = "Generate, expand and verify nested Hofstadter-like recurrences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate B_N (or B̄_N) and print its terms.
    Generate(GenerateArgs),
    /// Expand B_N with N symbolic and print (offset, form, bound) rows.
    Symbolic(SymbolicArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Classify the long-term behaviour of one or more sequences.
    Classify(ClassifyArgs),
    /// Compare regenerated sequences against OEIS b-files.
    Oeis(OeisArgs),
    /// Write index,value CSV suitable for plotting.
    PlotData(PlotArgs),
}

fn count(s: &str) -> Result<u64, String> {
    s.replace('_', "").parse().map_err(|e| format!("`{s}`: {e}"))
}

fn count_usize(s: &str) -> Result<usize, String> {
    count(s).map(|v| v as usize)
}

fn range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("`{s}` is not a range like 3..200"))?;
    let (inclusive, b) = match b.strip_prefix('=') {
        Some(b) => (true, b),
        None => (false, b),
    };
    let (a, b) = (count(a)?, count(b)?);
    let hi = if inclusive { b } else { b.saturating_sub(1) };
    if hi < a {
        return Err(format!("`{s}` is empty"));
    }
    Ok((a, hi))
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Plain,
    Bar,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Plain => Variant::Plain,
            VariantArg::Bar => Variant::Bar,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Bfile,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum TableFormat {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_parser = count)]
    n: u64,
    #[arg(long, value_enum, default_value = "plain")]
    variant: VariantArg,
    #[arg(long, value_parser = count_usize, default_value = "1_000_000")]
    max_terms: usize,
    /// `b`, `q`, or a comma separated shift list.
    #[arg(long, default_value = "b")]
    recurrence: String,
    #[arg(long, value_enum, default_value = "bfile")]
    format: FormatArg,
    #[arg(long, value_parser = count, default_value_t = DEFAULT_MEMORY_MB)]
    memory_limit_mb: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SymbolicArgs {
    #[arg(long, value_enum, default_value = "plain")]
    variant: VariantArg,
    #[arg(long, value_parser = count_usize, default_value = "24")]
    terms: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: TableFormat,
    /// Also compare against concrete generation at these N.
    #[arg(long, value_delimiter = ',', value_parser = count)]
    check: Vec<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    suite: Suite,
}

#[derive(Subcommand)]
enum Suite {
    /// Death lengths of B_N.
    Theorem1 {
        #[arg(long, value_parser = range, default_value = "3..=500")]
        range: (u64, u64),
        #[arg(long, value_parser = count_usize, default_value = "1_000_000")]
        budget: usize,
    },
    /// Period-7 pattern and end lengths of B̄_N.
    Theorem2 {
        /// Defaults to the smallest N of each residue class.
        #[arg(long, value_delimiter = ',', value_parser = count)]
        n: Vec<u64>,
    },
    /// Random instances of one lemma template against direct generation.
    Lemma {
        template: String,
        #[arg(long, value_parser = count_usize, default_value = "200")]
        trials: usize,
        #[arg(long, value_parser = count, default_value = "0")]
        seed: u64,
    },
    /// Behaviour of B̄_N for the sporadic N.
    Sporadic {
        /// Defaults to 3..=300 plus every exceptional N.
        #[arg(long, value_delimiter = ',', value_parser = count)]
        n: Vec<u64>,
        #[arg(long, value_parser = count_usize, default_value = "10_000_000")]
        budget: usize,
    },
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, value_delimiter = ',', value_parser = count, required = true)]
    n: Vec<u64>,
    #[arg(long, value_enum, default_value = "bar")]
    variant: VariantArg,
    #[arg(long, value_parser = count_usize, default_value = "10_000_000")]
    budget: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: TableFormat,
}

#[derive(Args)]
struct OeisArgs {
    /// A-numbers to check; all known ones when omitted.
    anum: Vec<String>,
    #[arg(long, env = FIXTURE_ENV, default_value = "fixtures/oeis")]
    fixtures: PathBuf,
    /// Download missing b-files with curl into the fixture directory.
    #[arg(long)]
    fetch: bool,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long, value_parser = count)]
    n: u64,
    #[arg(long, value_enum, default_value = "plain")]
    variant: VariantArg,
    #[arg(long, value_parser = count_usize, default_value = "100_000")]
    terms: usize,
    /// Add a bit-length column for log-scale plots.
    #[arg(long)]
    bits: bool,
    #[arg(long, value_parser = count, default_value_t = DEFAULT_MEMORY_MB)]
    memory_limit_mb: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            USAGE
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("resource limit: {msg}");
            RESOURCE
        }
    };
    ExitCode::from(code)
}

enum Failure {
    Usage(String),
    Resource(String),
}

impl From<trihof::Error> for Failure {
    fn from(e: trihof::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Resource(format!("i/o: {e}"))
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn check_memory(terms: usize, limit_mb: u64) -> Result<(), Failure> {
    let need = terms as u64 * 8 / (1 << 20);
    if need > limit_mb {
        return Err(Failure::Resource(format!(
            "{terms} terms need about {need} MB, over the {limit_mb} MB limit (raise --memory-limit-mb)"
        )));
    }
    Ok(())
}

/// Writes to stdout, treating a closed pipe as success.
fn out(text: &str) -> Result<(), Failure> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit<T: Serialize>(kind: &str, ok: bool, results: T) -> Result<u8, Failure> {
    out(&(interface::to_json(&Report::new(kind, ok, results))? + "\n"))?;
    Ok(if ok { OK } else { MISMATCH })
}

fn run(cmd: Command) -> Result<u8, Failure> {
    match cmd {
        Command::Generate(a) => {
            check_memory(a.max_terms, a.memory_limit_mb)?;
            let config = RunConfig {
                recurrence: a.recurrence,
                n: a.n,
                variant: a.variant.into(),
                max_terms: a.max_terms,
                format: match a.format {
                    FormatArg::Bfile => OutputFormat::BFile,
                    FormatArg::Csv => OutputFormat::Csv,
                    FormatArg::Json => OutputFormat::Json,
                },
                seed: None,
            };
            let run = config.run()?;
            sink(&a.out)?.write_all(interface::render_run(&run, &config)?.as_bytes())?;
            Ok(OK)
        }
        Command::Symbolic(a) => {
            if a.terms == 0 {
                return Err(Failure::Usage("--terms must be at least 1".into()));
            }
            let sym = symbolic_expand(a.variant.into(), a.terms);
            match a.format {
                TableFormat::Text => out(&interface::symbolic_table(&sym))?,
                TableFormat::Csv => out(&interface::records_csv(&interface::symbolic_rows(&sym))?)?,
                TableFormat::Json => out(&(interface::to_json(&sym)? + "\n"))?,
            }
            if a.check.is_empty() {
                return Ok(OK);
            }
            let samples: Vec<i64> = a.check.iter().map(|&n| n as i64).collect();
            let report = cross_validate(&sym, &samples);
            eprintln!(
                "checked {} terms and {} terminals: {} mismatches",
                report.checked,
                report.terminal_checked,
                report.mismatches.len()
            );
            for m in &report.mismatches {
                eprintln!("  N={} offset {}: symbolic {} concrete {}", m.n, m.offset, m.expected, m.observed);
            }
            Ok(if report.ok() { OK } else { MISMATCH })
        }
        Command::Verify(v) => verify(v.suite),
        Command::Classify(a) => {
            check_memory(a.budget, DEFAULT_MEMORY_MB)?;
            let classes = analysis::classify_many(&a.n, a.variant.into(), a.budget)?;
            match a.format {
                TableFormat::Text => {
                    let text: String = classes.iter().map(|(n, c)| format!("{n}: {c}\n")).collect();
                    out(&text)?;
                }
                TableFormat::Json => out(&(interface::to_json(&Report::new("classify", true, &classes))? + "\n"))?,
                TableFormat::Csv => {
                    #[derive(Serialize)]
                    struct Row<'a> {
                        n: u64,
                        class: &'a str,
                        detail: String,
                    }
                    let rows: Vec<Row> =
                        classes.iter().map(|(n, c)| Row { n: *n, class: c.name(), detail: c.to_string() }).collect();
                    out(&interface::records_csv(&rows)?)?;
                }
            }
            Ok(OK)
        }
        Command::Oeis(a) => oeis(a),
        Command::PlotData(a) => {
            check_memory(a.terms, a.memory_limit_mb)?;
            let summary = interface::plot_data(a.n, a.variant.into(), a.terms, a.bits, sink(&a.out)?)?;
            if a.out.is_some() {
                eprintln!("{} rows, {}", summary.rows, summary.status);
            }
            Ok(OK)
        }
    }
}

fn verify(suite: Suite) -> Result<u8, Failure> {
    match suite {
        Suite::Theorem1 { range: (lo, hi), budget } => {
            if lo < 3 {
                return Err(Failure::Usage("theorem1 needs N ≥ 3".into()));
            }
            check_memory(budget, DEFAULT_MEMORY_MB)?;
            let ns: Vec<u64> = (lo..=hi).collect();
            let reports = analysis::theorem1_suite(&ns, budget)?;
            let ok = reports.iter().all(|r| r.matched);
            emit("theorem1", ok, reports)
        }
        Suite::Theorem2 { n } => {
            let ns = if n.is_empty() { analysis::THEOREM2_END.iter().map(|e| e.0).collect() } else { n };
            let reports = analysis::theorem2_suite(&ns)?;
            let ok = reports.iter().all(|r| r.matched);
            emit("theorem2", ok, reports)
        }
        Suite::Lemma { template, trials, seed } => {
            let template: TemplateId = template.parse()?;
            let report = lemma_suite(template, trials, seed)?;
            let ok = report.ok();
            emit("lemma", ok, report)
        }
        Suite::Sporadic { n, budget } => {
            check_memory(budget, DEFAULT_MEMORY_MB)?;
            let ns = if n.is_empty() {
                let mut ns: Vec<u64> = (3..=300).collect();
                ns.extend(analysis::SPORADIC_DOUBLING);
                ns.extend(analysis::SPORADIC_FIVE_CYC);
                ns.push(analysis::SPORADIC_CHUNKED);
                ns.sort_unstable();
                ns.dedup();
                ns
            } else {
                n
            };
            let reports = analysis::sporadic_suite(&ns, budget)?;
            for r in &reports {
                if let BehaviorClass::ChunkedMortal { .. } = r.observed {
                    eprintln!("B̄_{}: {}", r.n, r.observed);
                }
            }
            let ok = reports.iter().all(|r| r.matched);
            emit("sporadic", ok, reports)
        }
    }
}

fn oeis(a: OeisArgs) -> Result<u8, Failure> {
    let anums: Vec<String> = if a.anum.is_empty() {
        interface::OEIS_MAP.iter().map(|e| e.0.to_string()).collect()
    } else {
        a.anum
    };
    let mut reports: Vec<OeisReport> = Vec::new();
    for anum in &anums {
        if a.fetch {
            fetch(&a.fixtures, anum);
        }
        reports.push(interface::oeis_check_fixture(&a.fixtures, anum)?);
    }
    let ok = !reports.iter().any(OeisReport::failed);
    emit("oeis", ok, reports)
}

/// Best effort; a failed download just leaves the fixture missing.
fn fetch(dir: &std::path::Path, anum: &str) {
    let path = interface::fixture_path(dir, anum);
    if path.exists() {
        return;
    }
    let digits = anum.trim_start_matches(['A', 'a']);
    let url = format!("https://oeis.org/A{digits}/b{digits}.txt");
    let _ = std::fs::create_dir_all(dir);
    let status = std::process::Command::new("curl").args(["-fsSL", "-m", "60", "-o"]).arg(&path).arg(&url).status();
    if !matches!(status, Ok(s) if s.success()) {
        let _ = std::fs::remove_file(&path);
        eprintln!("could not fetch {url}");
    }
}
