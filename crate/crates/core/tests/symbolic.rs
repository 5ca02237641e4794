mod common;

use proptest::prelude::*;
use trihof::symbolic::{classify_index, cross_validate, symbolic_expand, Category, StepResult, Terminal};
use trihof::{linear_run, Constraint, LinearForm, Status, SymbolicRun, Variant};

fn form(a: i64, b: i64) -> LinearForm {
    LinearForm::new(a, b)
}

#[test]
fn index_classification_examples() {
    let c = classify_index(form(1, -4), 2, Variant::Plain);
    assert_eq!(c.category, Category::InitialSegment { value: form(1, -4) });
    assert_eq!(c.constraint, Constraint::at_least(5));

    let c = classify_index(form(-1, 14), 25, Variant::Plain);
    assert_eq!(c.category, Category::Nonpositive);
    assert_eq!(c.constraint, Constraint::at_least(14));

    for j in [1, 10, 60] {
        let c = classify_index(form(0, 2), j, Variant::Bar);
        assert_eq!(c.category, Category::InitialSegment { value: form(0, 2) });
        assert_eq!(c.constraint, Constraint::at_least(2));
    }

    let c = classify_index(form(-3, 12), 63, Variant::Bar);
    assert_eq!(c.category, Category::Nonpositive);
    assert_eq!(c.constraint, Constraint::at_least(4));
}

#[test]
fn single_step_examples() {
    let plain = symbolic_expand(Variant::Plain, 24);
    let t = plain.term(1).unwrap();
    assert_eq!((t.value, t.local_bound), (form(0, 6), Constraint::at_least(3)));
    let t = plain.term(24).unwrap();
    assert_eq!((t.value, t.local_bound), (form(2, 11), Constraint::at_least(8)));

    let mut cont = plain.clone();
    assert_eq!(
        cont.step(),
        StepResult::Terminal(Terminal::Death { at_offset: 25, bound: Constraint::at_least(14) })
    );

    let bar = symbolic_expand(Variant::Bar, 69);
    let t = bar.term(25).unwrap();
    assert_eq!((t.value, t.local_bound), (form(2, 5), Constraint::at_least(14)));
    let t = bar.term(69).unwrap();
    assert_eq!((t.value, t.local_bound), (form(1, -2), Constraint::at_least(67)));
}

#[test]
fn plain_expansion_lists_24_forms() {
    let run = symbolic_expand(Variant::Plain, 24);
    let rendered: Vec<String> = run.terms.iter().map(|t| t.value.to_string()).collect();
    assert_eq!(rendered.len(), 24);
    assert_eq!(rendered[..5], ["6", "N+1", "N+2", "N+3", "9"]);
    assert_eq!(rendered.last().unwrap(), "2N+11");
    assert_eq!(run.cumulative_bound, Constraint::at_least(9));

    let longer = symbolic_expand(Variant::Plain, 30);
    assert_eq!(longer.terms.len(), 24);
    assert!(matches!(longer.terminal, Some(Terminal::Death { at_offset: 25, .. })));
}

#[test]
fn bar_expansion_has_69_terms() {
    let run = symbolic_expand(Variant::Bar, 69);
    assert_eq!(run.terms.len(), 69);
    assert_eq!(run.cumulative_bound, Constraint::at_least(67));
    assert!(run.terminal.is_none());
}

#[test]
fn emitted_pairs_match_the_frozen_table() {
    let plain = symbolic_expand(Variant::Plain, 24);
    let bar = symbolic_expand(Variant::Bar, 69);
    for &(j, a, b, bound) in &common::APPENDIX {
        let want = (form(a, b), Constraint::at_least(bound));
        if j <= 24 {
            let t = plain.term(j).unwrap();
            assert_eq!((t.value, t.local_bound), want, "plain offset {j}");
        }
        let t = bar.term(j).unwrap();
        assert_eq!((t.value, t.local_bound), want, "bar offset {j}");
    }
}

#[test]
fn cross_validation_examples() {
    let plain = symbolic_expand(Variant::Plain, 24);
    let rep = cross_validate(&plain, &[9, 50, 1000]);
    assert!(rep.ok(), "{:?}", rep.mismatches);
    assert_eq!(rep.checked, 3 * 24);

    let bar = symbolic_expand(Variant::Bar, 69);
    let rep = cross_validate(&bar, &[67]);
    assert!(rep.ok(), "{:?}", rep.mismatches);
    assert_eq!(rep.checked, 69);

    // at N = 5 only the prefix whose bounds are at most 5 is checked
    let rep = cross_validate(&plain, &[5]);
    let expected = (1..=24).take_while(|&j| plain.prefix_bound(j).holds(5)).count() as u64;
    assert!(rep.ok());
    assert_eq!(rep.checked, expected);
    assert!(expected < 24);
}

#[test]
fn concrete_runs_die_at_offset_25() {
    for n in 14..=300u64 {
        let run = linear_run(n, false, 1_000).unwrap();
        assert_eq!(run.status(), Status::Dead { undefined_index: n + 25 }, "N = {n}");
    }
}

#[test]
fn prefix_bound_is_monotone() {
    let run = symbolic_expand(Variant::Bar, 69);
    let bounds: Vec<i64> = (1..=69).map(|j| run.prefix_bound(j).lower_bound).collect();
    assert!(bounds.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(*bounds.last().unwrap(), run.cumulative_bound.lower_bound);
}

#[test]
fn stepping_matches_expand() {
    let mut run = SymbolicRun::new(Variant::Bar);
    for _ in 0..40 {
        run.step();
    }
    assert_eq!(run, symbolic_expand(Variant::Bar, 40));
}

/// Checks soundness of every term whose prefix bound admits `n`.
fn sound_at(sym: &SymbolicRun, n: i64) -> Result<(), TestCaseError> {
    let rep = cross_validate(sym, &[n]);
    prop_assert!(rep.ok(), "N = {n}: {:?}", rep.mismatches);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sound_just_above_each_bound(j in 1i64..=69, extra in 0i64..=100) {
        let bar = symbolic_expand(Variant::Bar, 69);
        sound_at(&bar, bar.prefix_bound(j).lower_bound.max(3) + extra)?;
        let plain = symbolic_expand(Variant::Plain, 24);
        sound_at(&plain, plain.prefix_bound(j.min(24)).lower_bound.max(3) + extra)?;
    }

    #[test]
    fn sound_for_large_n(n in 67i64..200_000) {
        let bar = symbolic_expand(Variant::Bar, 69);
        let rep = cross_validate(&bar, &[n]);
        prop_assert!(rep.ok());
        prop_assert_eq!(rep.checked, 69);
        let plain = symbolic_expand(Variant::Plain, 30);
        let rep = cross_validate(&plain, &[n]);
        prop_assert!(rep.ok());
        prop_assert_eq!((rep.checked, rep.terminal_checked), (24, 1));
    }
}
