use proptest::prelude::*;
use trihof::{generate, linear_run, BigInt, InitialConditions, RecurrenceSpec, Run, Status, StepOutcome};

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn b3_computes_six_then_dies() {
    let mut run = Run::new(RecurrenceSpec::three_term(), InitialConditions::linear(3)).unwrap();
    assert_eq!(run.step(), StepOutcome::Term(big(6)));
    assert_eq!(run.step(), StepOutcome::Died { at_index: 5, offending_shift: 1 });
    assert_eq!(run.status(), Status::Dead { undefined_index: 5 });
}

#[test]
fn trailing_zero_in_bar_run_ends() {
    let ics = InitialConditions::new([1, 2, 3, 0], true);
    let mut run = Run::new(RecurrenceSpec::three_term(), ics).unwrap();
    assert_eq!(run.step(), StepOutcome::Ended { at_index: 5, offending_shift: 1 });
}

#[test]
fn b10_dies_after_1015_terms() {
    let run = linear_run(10, false, 1_000_000).unwrap();
    assert_eq!(run.status(), Status::Dead { undefined_index: 1016 });
    assert_eq!(run.len(), 1015);
    assert_eq!(run.term_at(1015).unwrap(), big(1036));
}

#[test]
fn b14_has_38_terms() {
    let run = linear_run(14, false, 1_000_000).unwrap();
    assert_eq!(run.len(), 38);
    assert_eq!(run.status(), Status::Dead { undefined_index: 39 });
}

#[test]
fn bar_118_ends_after_245_terms() {
    let run = linear_run(118, true, 1_000_000).unwrap();
    assert_eq!(run.status(), Status::Ended { undefined_index: 246 });
    assert_eq!(run.len(), 245);
}

#[test]
fn b7_survives_a_million_terms() {
    let run = linear_run(7, false, 1_000_000).unwrap();
    assert!(run.status().is_alive());
    assert_eq!(run.len(), 1_000_000);
}

#[test]
fn term_lookup_examples() {
    let b5 = linear_run(5, false, 20).unwrap();
    assert_eq!(b5.term_at(3).unwrap(), big(3));
    assert!(b5.term_at(0).is_err());

    let bar = linear_run(72, true, 200).unwrap();
    assert_eq!(bar.term_at(-7).unwrap(), big(0));
    assert_eq!(bar.term_at(72 + 67).unwrap(), big(2 * 72 + 63));
}

#[test]
fn b5_and_b6_agree_from_index_7() {
    let b5 = linear_run(5, false, 1_000_000).unwrap();
    let b6 = linear_run(6, false, 1_000_000).unwrap();
    let (s5, s6) = (b5.small_terms().unwrap(), b6.small_terms().unwrap());
    assert_eq!(s5.len(), s6.len());
    assert_eq!(s5[6..], s6[6..]);
}

#[test]
fn generation_is_deterministic() {
    for (n, bar) in [(7, false), (193, true), (25, true)] {
        let a = linear_run(n, bar, 50_000).unwrap();
        let b = linear_run(n, bar, 50_000).unwrap();
        assert_eq!(a.status(), b.status());
        assert_eq!(a.small_terms(), b.small_terms());
    }
}

#[test]
fn values_beyond_i64_are_exact() {
    // ⟨0̄; 2, M, 2⟩ doubles M every two steps
    let m = big(i64::MAX / 4);
    let ics = InitialConditions::new([big(2), m.clone(), big(2)], true);
    let run = generate(RecurrenceSpec::three_term(), ics, 40).unwrap();
    assert!(run.status().is_alive());
    assert!(run.small_terms().is_none());
    // index 2 + 2k holds 2^k·M
    assert_eq!(run.term_at(2 + 2 * 10).unwrap(), &m << 10u32);
    assert_eq!(run.term_at(3 + 2 * 10).unwrap(), big(2));
}

/// Checks the death rule on a stopped run: some argument is out of range.
fn stop_is_justified(run: &Run) -> bool {
    let Some(n) = run.status().undefined_index() else { return true };
    let args = run.arguments_at(n);
    let nn = big(n as i64);
    match run.status() {
        Status::Ended { .. } => args.iter().any(|a| *a >= nn),
        _ => args.iter().any(|a| *a < big(1) || *a >= nn),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn every_stop_follows_the_death_rule(
        values in prop::collection::vec(-5i64..40, 3..12),
        bar in any::<bool>(),
    ) {
        let ics = InitialConditions::new(values, bar);
        let run = generate(RecurrenceSpec::three_term(), ics, 5_000).unwrap();
        prop_assert!(stop_is_justified(&run), "{}", run.status());
        if let Some(n) = run.status().undefined_index() {
            prop_assert_eq!(run.len() as u64, n - 1);
        }
    }

    #[test]
    fn linear_runs_stop_by_the_rule(n in 3u64..400, bar in any::<bool>()) {
        let run = linear_run(n, bar, 20_000).unwrap();
        prop_assert!(stop_is_justified(&run));
    }

    #[test]
    fn budget_is_a_prefix(n in 3u64..60, cut in 10usize..500) {
        let short = linear_run(n, true, cut).unwrap();
        let long = linear_run(n, true, 2_000).unwrap();
        for i in 1..=short.len() as i64 {
            prop_assert_eq!(short.term_at(i).unwrap(), long.term_at(i).unwrap());
        }
    }
}
