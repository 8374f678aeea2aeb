//! Mini-corpus fixture checks: loading, round-tripping, decomposition,
//! and the corpus self test (canonical solutions must pass their own
//! suites on every language with a local toolchain).

use perturbeval::corpus::{load_mini_corpus, mini_corpus_path, parse_corpus, write_corpus};
use perturbeval::langkit::{decompose_prompt, LanguageId};
use perturbeval::runner::{self, toolchain_available, ExecLimits, OutcomeKind};

#[test]
fn fixture_has_ten_problems_per_language() {
    let problems = load_mini_corpus().expect("fixture loads");
    assert_eq!(problems.len(), 30);
    for lang in LanguageId::ALL {
        assert_eq!(
            problems.iter().filter(|p| p.language == lang).count(),
            10,
            "{lang}"
        );
    }
    // Line count is an independent check on the 10 × 3 accounting.
    let raw = std::fs::read_to_string(mini_corpus_path()).expect("fixture readable");
    assert_eq!(raw.lines().filter(|l| !l.trim().is_empty()).count(), 30);
}

#[test]
fn fixture_round_trips_byte_identically() {
    let raw = std::fs::read_to_string(mini_corpus_path()).expect("fixture readable");
    let problems = parse_corpus(&raw).expect("fixture parses");
    assert_eq!(write_corpus(&problems), raw);
}

#[test]
fn every_prompt_decomposes_losslessly() {
    for problem in load_mini_corpus().expect("fixture loads") {
        let prompt = problem.prompt_text();
        let parts = decompose_prompt(&prompt, problem.language, Some(&problem.entry_point))
            .unwrap_or_else(|e| panic!("{} {}: {e}", problem.language, problem.id));
        assert_eq!(parts.join(), prompt, "{} {}", problem.language, problem.id);
        assert!(
            !parts.doc.is_empty(),
            "{} {} should have a docstring",
            problem.language,
            problem.id
        );
        assert!(parts.signature.contains(&problem.entry_point));
    }
}

#[test]
fn full_programs_decompose_losslessly() {
    for problem in load_mini_corpus().expect("fixture loads") {
        let program = problem.canonical_program();
        let parts = decompose_prompt(&program, problem.language, Some(&problem.entry_point))
            .unwrap_or_else(|e| panic!("{} {}: {e}", problem.language, problem.id));
        assert_eq!(parts.join(), program, "{} {}", problem.language, problem.id);
    }
}

#[test]
fn self_test_passes_on_available_toolchains() {
    let problems: Vec<_> = load_mini_corpus()
        .expect("fixture loads")
        .into_iter()
        .filter(|p| toolchain_available(p.language))
        .collect();
    assert!(
        !problems.is_empty(),
        "no toolchain available for any corpus language"
    );
    let skipped: Vec<_> = LanguageId::ALL
        .iter()
        .filter(|l| !toolchain_available(**l))
        .collect();
    if !skipped.is_empty() {
        eprintln!("note: no toolchain for {skipped:?}; those languages are skipped");
    }
    let report = runner::self_test_corpus(&problems, &ExecLimits::default()).expect("self test runs");
    for (id, language, outcome) in &report {
        assert_eq!(
            outcome.kind,
            OutcomeKind::Passed,
            "{language} {id}: {:?} {}",
            outcome.kind,
            outcome.detail
        );
    }
}

#[test]
fn broken_canonical_solutions_are_caught() {
    if !toolchain_available(LanguageId::JavaScript) {
        eprintln!("skipping: no node toolchain");
        return;
    }
    let problems = load_mini_corpus().expect("fixture loads");
    let js_sum = problems
        .iter()
        .find(|p| p.language == LanguageId::JavaScript && p.id == "HumanEval_60")
        .expect("sumToN present");

    // Wrong constant: the assertions must fire.
    let wrong = runner::execute(
        "    return 7;\n}\n",
        js_sum,
        &ExecLimits::default(),
        None,
    )
    .expect("executes");
    assert_eq!(wrong.kind, OutcomeKind::AssertionFailure, "{}", wrong.detail);

    // Infinite loop: the wall clock must fire.
    let mut limits = ExecLimits::default();
    limits.run_timeout_secs = 3;
    let spin = runner::execute(
        "    let total = 0;\n    while (true) { total += 1; }\n    return total;\n}\n",
        js_sum,
        &limits,
        None,
    )
    .expect("executes");
    assert_eq!(spin.kind, OutcomeKind::Timeout);
}
