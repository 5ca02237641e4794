//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so lines are never captured and the
//! memory reading for the performance criterion is not shared with other
//! tests. A criterion that cannot be checked in this environment is
//! printed as `FAIL (blocked: …)` and does not change the exit status.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trihof::analysis::{
    self, classify_bar, lemma_nu_for, sporadic_chunked_length, theorem2_nu, verify_theorem2,
    BehaviorClass, Outcome, THEOREM2_END,
};
use trihof::interface::{self, oeis_check_fixture, OeisStatus, OEIS_MAP};
use trihof::symbolic::{cross_validate, symbolic_expand, Constraint, LinearForm, Terminal, Variant};
use trihof::trials::lemma_suite;
use trihof::{linear_run, BigInt, Status, TemplateId};

const SEED: u64 = 20_240_607;

// time limits
const T1_LIMIT: Duration = Duration::from_secs(1);
const T2_LIMIT: Duration = Duration::from_secs(5);
const T7_LIMIT: Duration = Duration::from_secs(30);
const T12_LIMIT: Duration = Duration::from_secs(10);
const MEM12_LIMIT_KB: u64 = 1 << 20;

const LONGEVITY_BUDGET: usize = 1_000_000;
const SPORADIC_BUDGET: usize = 1_000_000;

enum Verdict {
    Pass(String),
    Fail(String),
    Blocked(String),
}

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn c12_performance() -> Verdict {
    let start = Instant::now();
    let run = linear_run(7, false, 10_000_000).expect("N = 7");
    let took = start.elapsed();
    let peak = peak_rss_kb();
    let alive = run.status() == Status::Alive && run.len() == 10_000_000;
    let mem_ok = peak.is_none_or(|kb| kb < MEM12_LIMIT_KB);
    let mem = peak.map_or_else(|| "peak RSS unavailable".to_string(), |kb| format!("peak RSS {} MB", kb / 1024));
    check(alive && took < T12_LIMIT && mem_ok, format!("B₇ to 10⁷ terms in {took:.2?}, {mem}"))
}

fn c1_theorem1_table() -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (n, length, last) in analysis::THEOREM1_SMALL {
        let run = linear_run(n, false, 10_000).expect("N ≥ 3");
        let got = (run.status(), run.len() as u64, run.term_at(run.len() as i64).ok());
        let want = (Status::Dead { undefined_index: length + 1 }, length, Some(BigInt::from(last)));
        if got != want {
            bad.push(format!("B_{n}: {got:?}"));
        }
    }
    let took = start.elapsed();
    check(bad.is_empty() && took < T1_LIMIT, format!("N ∈ {{3,4,10,11,12,13}} in {took:.2?} {bad:?}"))
}

fn c2_theorem1_generic() -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 14..=500u64 {
        let run = linear_run(n, false, 10_000).expect("N ≥ 3");
        let dies_right = run.status() == Status::Dead { undefined_index: n + 25 } && run.len() as u64 == n + 24;
        let arg = run.arguments_at(n + 25);
        if !dies_right || run.failing_shift() != 1 || arg[0] != BigInt::from(14 - n as i64) {
            bad.push(n);
        }
    }
    let took = start.elapsed();
    check(bad.is_empty() && took < T2_LIMIT, format!("N ∈ [14,500] die at N+25 via argument 14−N, {took:.2?}, failures {bad:?}"))
}

fn c3_longevity() -> Verdict {
    let mut bad = Vec::new();
    let plain = [7u64, 8, 9].map(|n| (n, Variant::Plain));
    let bar = [4u64, 7, 8, 9, 10, 11, 12, 13, 14, 15, 18].map(|n| (n, Variant::Bar));
    for (n, v) in plain.into_iter().chain(bar) {
        let run = linear_run(n, v.zero_extended(), LONGEVITY_BUDGET).expect("N ≥ 3");
        if !(run.status().is_alive() && run.len() == LONGEVITY_BUDGET) {
            bad.push(format!("{v} {n}: {}", run.status()));
        }
    }
    check(bad.is_empty(), format!("14 sequences alive at {LONGEVITY_BUDGET} terms {bad:?}"))
}

fn appendix_mismatches(variant: Variant, offsets: std::ops::RangeInclusive<i64>) -> (Vec<i64>, trihof::SymbolicRun) {
    let sym = symbolic_expand(variant, *offsets.end() as usize);
    let mut bad = Vec::new();
    for &(j, a, b, bound) in common::APPENDIX.iter().filter(|e| offsets.contains(&e.0)) {
        match sym.term(j) {
            Some(t) if t.value == LinearForm::new(a, b) && t.local_bound == Constraint::at_least(bound) => {}
            _ => bad.push(j),
        }
    }
    (bad, sym)
}

fn c4_appendix_a() -> Verdict {
    let (bad, _) = appendix_mismatches(Variant::Plain, 1..=24);
    let longer = symbolic_expand(Variant::Plain, 30);
    let cumulative = longer.cumulative_bound == Constraint::at_least(9) && longer.terms.len() == 24;
    let death = longer.terminal == Some(Terminal::Death { at_offset: 25, bound: Constraint::at_least(14) });
    check(
        bad.is_empty() && cumulative && death,
        format!("24 forms and bounds (mismatched offsets {bad:?}), cumulative {}, terminal {:?}", longer.cumulative_bound, longer.terminal),
    )
}

fn c5_appendix_b() -> Verdict {
    let (bad, sym) = appendix_mismatches(Variant::Bar, 25..=69);
    let also_a = appendix_mismatches(Variant::Bar, 1..=24).0;
    let ok = bad.is_empty() && also_a.is_empty() && sym.terms.len() == 69 && sym.cumulative_bound == Constraint::at_least(67);
    check(ok, format!("offsets 25–69 (mismatched {bad:?}), cumulative {}", sym.cumulative_bound))
}

fn c6_symbolic_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut summary = Vec::new();
    let mut ok = true;
    for (variant, count) in [(Variant::Plain, 24), (Variant::Bar, 69)] {
        let sym = symbolic_expand(variant, count);
        let ns: Vec<i64> = (0..20).map(|_| rng.gen_range(70..=10_000)).collect();
        let rep = cross_validate(&sym, &ns);
        let full = rep.checked == 20 * count as u64;
        ok &= rep.ok() && full;
        summary.push(format!("{variant}: {} terms, {} mismatches", rep.checked, rep.mismatches.len()));
    }
    check(ok, summary.join("; "))
}

fn c7_theorem2_lengths() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut ns: Vec<u64> = THEOREM2_END.iter().map(|e| e.0).collect();
    for &(threshold, _) in &THEOREM2_END {
        for _ in 0..3 {
            ns.push(threshold + 7 * rng.gen_range(1..=3_000));
        }
    }
    let reports = analysis::theorem2_suite(&ns).expect("N ≥ 72");
    let took = start.elapsed();
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !(r.matched && matches!(r.expected, Outcome::Ended { .. })))
        .map(|r| format!("{}: {}", r.n, r.observed))
        .collect();
    check(bad.is_empty() && took < T7_LIMIT, format!("{} values of N end after 2N+ℓ, {took:.2?} {bad:?}", ns.len()))
}

fn c8_theorem2_pattern() -> Verdict {
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in [72u64, 100, 118, 200] {
        let r = verify_theorem2(n).expect("N ≥ 72");
        if !r.details.is_empty() {
            bad.push(format!("{n}: {}", r.details[0]));
        }
        checked += analysis::theorem2_last_pattern_index(n) + 1 - (n + 67);
        let run = linear_run(n, true, 3 * n as usize).expect("N ≥ 3");
        for i in n + 67..=analysis::theorem2_last_pattern_index(n) {
            if run.term_at(i as i64).ok() != analysis::theorem2_expected_term(n, i) {
                bad.push(format!("{n}: index {i}"));
            }
        }
    }
    let nu_ok = (0..7u64).all(|r| theorem2_nu(700 + r) == lemma_nu_for(700 + r));
    check(bad.is_empty() && nu_ok, format!("{checked} pattern indices; ν tables agree: {nu_ok} {bad:?}"))
}

fn c9_lemmas() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for t in TemplateId::ALL {
        let r = lemma_suite(t, 200, SEED).expect("suite");
        ok &= r.ok();
        parts.push(format!("{t} {}/{}", r.passed, r.trials));
    }
    check(ok, parts.join(", "))
}

fn c10_sporadic() -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in analysis::SPORADIC_DOUBLING {
        let c = classify_bar(n, SPORADIC_BUDGET).expect("classify");
        if !matches!(c, BehaviorClass::ImmortalDoubling { .. }) {
            bad.push(format!("{n}: {c}"));
        }
    }
    for n in analysis::SPORADIC_FIVE_CYC {
        let c = classify_bar(n, SPORADIC_BUDGET).expect("classify");
        if !matches!(c, BehaviorClass::QuasiImmortal5cyc { .. }) {
            bad.push(format!("{n}: {c}"));
        }
    }
    let c = classify_bar(20830, SPORADIC_BUDGET).expect("classify");
    let length = match &c {
        BehaviorClass::ChunkedMortal { length, .. } => Some(length.clone()),
        _ => None,
    };
    if length.as_ref() != Some(&sporadic_chunked_length()) {
        bad.push(format!("20830: {c}"));
    }
    check(
        bad.is_empty(),
        format!("9 doubling, 2 5cyc, B̄₂₀₈₃₀ length {} in {:.2?} {bad:?}", length.map_or("?".into(), |l| analysis::format_big(&l)), start.elapsed()),
    )
}

fn c11_oeis() -> Verdict {
    let dir = interface::fixture_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/oeis"));
    let mut missing = Vec::new();
    let mut bad = Vec::new();
    let mut compared = 0;
    for (anum, ..) in OEIS_MAP {
        let r = oeis_check_fixture(&dir, anum).expect("known A-number");
        match &r.status {
            OeisStatus::Match => compared += r.compared,
            OeisStatus::Skipped { .. } | OeisStatus::NothingToCompare => missing.push(anum),
            _ => bad.push(format!("{anum}: {:?}", r.status)),
        }
    }
    if !bad.is_empty() {
        return Verdict::Fail(format!("{bad:?}"));
    }
    if !missing.is_empty() {
        return Verdict::Blocked(format!(
            "no b-file fixtures for {} of {} sequences in {} ({compared} terms matched elsewhere)",
            missing.len(),
            OEIS_MAP.len(),
            dir.display()
        ));
    }
    Verdict::Pass(format!("{compared} terms across {} b-files", OEIS_MAP.len()))
}

type Criterion = (u32, &'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 12] = [
        (12, "performance: B₇ 10⁷ terms", c12_performance),
        (1, "small-N death table", c1_theorem1_table),
        (2, "death after N+24 terms for N in [14,500]", c2_theorem1_generic),
        (3, "longevity at 10⁶ terms", c3_longevity),
        (4, "plain symbolic expansion", c4_appendix_a),
        (5, "zero-extended symbolic expansion", c5_appendix_b),
        (6, "symbolic vs concrete", c6_symbolic_oracle),
        (7, "B̄_N end lengths", c7_theorem2_lengths),
        (8, "B̄_N period-7 pattern and ν", c8_theorem2_pattern),
        (9, "lemma property suites", c9_lemmas),
        (10, "sporadic classification", c10_sporadic),
        (11, "OEIS fixtures", c11_oeis),
    ];
    let mut failed = 0;
    let mut blocked = 0;
    let mut lines = Vec::new();
    for (id, name, f) in criteria {
        let line = match f() {
            Verdict::Pass(d) => format!("PASS criterion {id:>2}: {name} | {d}"),
            Verdict::Fail(d) => {
                failed += 1;
                format!("FAIL criterion {id:>2}: {name} | {d}")
            }
            Verdict::Blocked(d) => {
                blocked += 1;
                format!("FAIL criterion {id:>2}: {name} | blocked: {d}")
            }
        };
        println!("{line}");
        lines.push((id, line));
    }
    println!("acceptance: {} passed, {failed} failed, {blocked} blocked", lines.len() - failed - blocked);
    if failed > 0 {
        std::process::exit(1);
    }
}
