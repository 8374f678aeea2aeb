//! Docstring and function-name perturbations: blacklist-aware,
//! seed-deterministic transformations of the natural-language parts of a
//! prompt.

mod funcname;
mod keyboard;
mod lexicon;
mod rename;
mod words;

pub use funcname::{is_legal_identifier, perturb_function_name, FuncStrategy};
pub use lexicon::{Lexicon, TenseEntry};
pub use rename::{apply_rename, rename_identifier_tokens};

use crate::corpus::{PerturbedPrompt, Problem};
use crate::langkit::{self, decompose_prompt};
use crate::providers::{ProviderError, ProviderSet};
use crate::seed;
use crate::strategy::{self, Scope, StrategyKind};
use rand::Rng;
use std::collections::BTreeSet;
use thiserror::Error;
use words::{
    alpha_core, is_protected, join, match_case, segment, sentence_initial_flags, Segment,
};

/// Flag recorded when a provider-backed strategy fell back to identity.
pub const FLAG_DEGENERATE: &str = "degenerate";
/// Flag recorded when a strategy could not produce a variant and the
/// original text was emitted unchanged.
pub const FLAG_NO_VARIANT: &str = "no_variant";

#[derive(Debug, Error)]
pub enum NlError {
    #[error("no provider available for {strategy} and fallback disabled")]
    ProviderUnavailable { strategy: String },
    #[error("provider call failed: {0}")]
    Provider(#[from] ProviderError),
    #[error("no variant available for {name} under {strategy}")]
    NoVariantAvailable { name: String, strategy: String },
    #[error("old name {0} not found in prompt signature")]
    OldNameNotFound(String),
    #[error(transparent)]
    Decompose(#[from] langkit::DecomposeError),
}

/// The ten docstring perturbation strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum NlStrategy {
    ButterFingers,
    ChangeCharCase,
    SwapCharacters,
    Whitespace,
    SynonymSubstitution,
    SynonymInsertion,
    InflectionalVariation,
    TensePast,
    TenseFuture,
    BackTranslation,
}

impl NlStrategy {
    pub const ALL: [NlStrategy; 10] = [
        NlStrategy::ButterFingers,
        NlStrategy::ChangeCharCase,
        NlStrategy::SwapCharacters,
        NlStrategy::Whitespace,
        NlStrategy::SynonymSubstitution,
        NlStrategy::SynonymInsertion,
        NlStrategy::InflectionalVariation,
        NlStrategy::TensePast,
        NlStrategy::TenseFuture,
        NlStrategy::BackTranslation,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            NlStrategy::ButterFingers => "ButterFingers",
            NlStrategy::ChangeCharCase => "ChangeCharCase",
            NlStrategy::SwapCharacters => "SwapCharacters",
            NlStrategy::Whitespace => "Whitespace",
            NlStrategy::SynonymSubstitution => "SynonymSubstitution",
            NlStrategy::SynonymInsertion => "SynonymInsertion",
            NlStrategy::InflectionalVariation => "InflectionalVariation",
            NlStrategy::TensePast => "TensePast",
            NlStrategy::TenseFuture => "TenseFuture",
            NlStrategy::BackTranslation => "BackTranslation",
        }
    }
}

/// Per-character replacement probability for ButterFingers.
const BUTTER_FINGERS_RATE: f64 = 0.05;
/// Per-character case-flip probability for ChangeCharCase.
const CHANGE_CASE_RATE: f64 = 0.35;
/// Per-word swap probability for SwapCharacters.
const SWAP_RATE: f64 = 0.10;
/// Per-boundary insert/delete probability for Whitespace.
const WHITESPACE_RATE: f64 = 0.05;
/// Per-word substitution probability for SynonymSubstitution and
/// InflectionalVariation.
const WORD_SUB_RATE: f64 = 0.15;
/// Per-word insertion probability for SynonymInsertion.
const WORD_INSERT_RATE: f64 = 0.10;
/// Pivot language for the back-translation round trip.
const BACK_TRANSLATION_PIVOT: &str = "de";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbed {
    pub text: String,
    pub flags: Vec<String>,
}

impl Perturbed {
    fn clean(text: String) -> Perturbed {
        Perturbed { text, flags: Vec::new() }
    }
}

/// Apply one docstring strategy to `doc`. Deterministic in
/// `(doc, strategy, seed, lexicon)`; blacklisted words pass through
/// unmodified.
pub fn perturb_docstring(
    doc: &str,
    strategy: NlStrategy,
    seed_value: u64,
    blacklist: &BTreeSet<String>,
    providers: &ProviderSet,
    lexicon: &Lexicon,
) -> Result<Perturbed, NlError> {
    let mut rng = seed::rng(seed_value);
    let out = match strategy {
        NlStrategy::ButterFingers => Perturbed::clean(butter_fingers(doc, blacklist, &mut rng)),
        NlStrategy::ChangeCharCase => Perturbed::clean(change_char_case(doc, blacklist, &mut rng)),
        NlStrategy::SwapCharacters => Perturbed::clean(swap_characters(doc, blacklist, &mut rng)),
        NlStrategy::Whitespace => Perturbed::clean(whitespace(doc, blacklist, &mut rng)),
        NlStrategy::SynonymSubstitution => {
            Perturbed::clean(synonym_substitution(doc, blacklist, lexicon, &mut rng))
        }
        NlStrategy::SynonymInsertion => {
            Perturbed::clean(synonym_insertion(doc, blacklist, lexicon, &mut rng))
        }
        NlStrategy::InflectionalVariation => {
            Perturbed::clean(inflectional_variation(doc, blacklist, lexicon, &mut rng))
        }
        NlStrategy::TensePast => Perturbed::clean(tense(doc, blacklist, lexicon, TenseMode::Past)),
        NlStrategy::TenseFuture => {
            Perturbed::clean(tense(doc, blacklist, lexicon, TenseMode::Future))
        }
        NlStrategy::BackTranslation => back_translation(doc, providers)?,
    };
    Ok(out)
}

fn butter_fingers(doc: &str, blacklist: &BTreeSet<String>, rng: &mut impl Rng) -> String {
    map_eligible_words(doc, blacklist, |word, rng| {
        word.chars()
            .map(|c| {
                if c.is_alphabetic() && rng.gen_bool(BUTTER_FINGERS_RATE) {
                    let pool = keyboard::neighbors(c);
                    if pool.is_empty() {
                        c
                    } else {
                        let pick = pool
                            .chars()
                            .nth(rng.gen_range(0..pool.chars().count()))
                            .unwrap_or(c);
                        if c.is_uppercase() {
                            pick.to_ascii_uppercase()
                        } else {
                            pick
                        }
                    }
                } else {
                    c
                }
            })
            .collect()
    }, rng)
}

fn change_char_case(doc: &str, blacklist: &BTreeSet<String>, rng: &mut impl Rng) -> String {
    map_eligible_words(doc, blacklist, |word, rng| {
        word.chars()
            .map(|c| {
                if c.is_alphabetic() && rng.gen_bool(CHANGE_CASE_RATE) {
                    if c.is_uppercase() {
                        c.to_ascii_lowercase()
                    } else {
                        c.to_ascii_uppercase()
                    }
                } else {
                    c
                }
            })
            .collect()
    }, rng)
}

fn swap_characters(doc: &str, blacklist: &BTreeSet<String>, rng: &mut impl Rng) -> String {
    map_eligible_words(doc, blacklist, |word, rng| {
        let chars: Vec<char> = word.chars().collect();
        let eligible: Vec<usize> = (0..chars.len().saturating_sub(1))
            .filter(|&i| chars[i].is_alphabetic() && chars[i + 1].is_alphabetic())
            .collect();
        if eligible.is_empty() || !rng.gen_bool(SWAP_RATE) {
            return word.to_string();
        }
        let i = eligible[rng.gen_range(0..eligible.len())];
        let mut swapped = chars;
        swapped.swap(i, i + 1);
        swapped.into_iter().collect()
    }, rng)
}

/// Apply `f` to each non-protected word, consuming randomness for every
/// word (protected or not) is avoided: only eligible words draw from the
/// stream, keeping outputs stable when blacklists shrink or grow.
fn map_eligible_words(
    doc: &str,
    blacklist: &BTreeSet<String>,
    f: impl Fn(&str, &mut dyn rand::RngCore) -> String,
    rng: &mut impl Rng,
) -> String {
    let segments = segment(doc);
    let mut out = Vec::with_capacity(segments.len());
    for seg in &segments {
        match seg {
            Segment::Word(w) if !is_protected(w, blacklist) => {
                out.push(Segment::Word(f(w, rng)));
            }
            other => out.push(other.clone()),
        }
    }
    join(&out)
}

fn whitespace(doc: &str, blacklist: &BTreeSet<String>, rng: &mut impl Rng) -> String {
    let segments = segment(doc);
    let mut out = String::new();
    let words: Vec<&Segment> = segments.iter().collect();
    for (idx, seg) in words.iter().enumerate() {
        match seg {
            Segment::Word(w) => {
                if is_protected(w, blacklist) {
                    out.push_str(w);
                    continue;
                }
                // Seeded space insertion inside the word.
                let mut rebuilt = String::new();
                for (ci, c) in w.chars().enumerate() {
                    if ci > 0 && rng.gen_bool(WHITESPACE_RATE) {
                        rebuilt.push(' ');
                    }
                    rebuilt.push(c);
                }
                out.push_str(&rebuilt);
            }
            Segment::Whitespace(ws) => {
                // Deleting a separating space joins the neighbors, so only
                // do it between two unprotected words.
                let prev_ok = idx > 0
                    && matches!(words[idx - 1], Segment::Word(w) if !is_protected(w, blacklist));
                let next_ok = idx + 1 < words.len()
                    && matches!(words[idx + 1], Segment::Word(w) if !is_protected(w, blacklist));
                if ws == " " && prev_ok && next_ok && rng.gen_bool(WHITESPACE_RATE) {
                    continue;
                }
                out.push_str(ws);
            }
        }
    }
    out
}

fn synonym_substitution(
    doc: &str,
    blacklist: &BTreeSet<String>,
    lexicon: &Lexicon,
    rng: &mut impl Rng,
) -> String {
    map_eligible_words(doc, blacklist, |word, rng| {
        let Some(core) = alpha_core(word) else {
            return word.to_string();
        };
        let Some(synonyms) = lexicon.synonyms(core) else {
            return word.to_string();
        };
        if !rng.gen_bool(WORD_SUB_RATE) {
            return word.to_string();
        }
        let pick = &synonyms[rng.gen_range(0..synonyms.len())];
        word.replace(core, &match_case(core, pick))
    }, rng)
}

fn synonym_insertion(
    doc: &str,
    blacklist: &BTreeSet<String>,
    lexicon: &Lexicon,
    rng: &mut impl Rng,
) -> String {
    let segments = segment(doc);
    let words: Vec<&Segment> = segments.iter().collect();
    let mut out = String::new();
    for (idx, seg) in words.iter().enumerate() {
        match seg {
            Segment::Word(w) => {
                out.push_str(w);
                if is_protected(w, blacklist) {
                    continue;
                }
                // Never insert adjacent to a protected (code-like) word.
                let next_word = words[idx + 1..].iter().find_map(|s| match s {
                    Segment::Word(n) => Some(n),
                    _ => None,
                });
                if matches!(next_word, Some(n) if is_protected(n, blacklist)) {
                    continue;
                }
                let Some(core) = alpha_core(w) else { continue };
                let Some(synonyms) = lexicon.synonyms(core) else {
                    continue;
                };
                if rng.gen_bool(WORD_INSERT_RATE) {
                    let pick = &synonyms[rng.gen_range(0..synonyms.len())];
                    out.push(' ');
                    out.push_str(pick);
                }
            }
            Segment::Whitespace(ws) => out.push_str(ws),
        }
    }
    out
}

fn inflectional_variation(
    doc: &str,
    blacklist: &BTreeSet<String>,
    lexicon: &Lexicon,
    rng: &mut impl Rng,
) -> String {
    map_eligible_words(doc, blacklist, |word, rng| {
        let Some(core) = alpha_core(word) else {
            return word.to_string();
        };
        let Some(forms) = lexicon.inflections(core) else {
            return word.to_string();
        };
        if !rng.gen_bool(WORD_SUB_RATE) {
            return word.to_string();
        }
        let pick = &forms[rng.gen_range(0..forms.len())];
        word.replace(core, &match_case(core, pick))
    }, rng)
}

#[derive(Clone, Copy)]
enum TenseMode {
    Past,
    Future,
}

/// Deterministic tense transformation. Sentence-initial words are left
/// alone: docstrings open with imperatives ("Filter ...") that stay fixed
/// in both source tables and the reference outputs.
fn tense(doc: &str, blacklist: &BTreeSet<String>, lexicon: &Lexicon, mode: TenseMode) -> String {
    let segments = segment(doc);
    let initial = sentence_initial_flags(&segments);
    let mut word_idx = 0usize;
    let mut out = Vec::with_capacity(segments.len());
    for seg in &segments {
        match seg {
            Segment::Word(w) => {
                let sentence_initial = initial.get(word_idx).copied().unwrap_or(false);
                word_idx += 1;
                if sentence_initial || is_protected(w, blacklist) {
                    out.push(seg.clone());
                    continue;
                }
                let replaced = match alpha_core(w) {
                    Some(core) => match lexicon.tense(core) {
                        Some(entry) => {
                            let replacement = match mode {
                                TenseMode::Past => entry.past.clone(),
                                TenseMode::Future => format!("will {}", entry.base),
                            };
                            w.replace(core, &match_case(core, &replacement))
                        }
                        None => w.clone(),
                    },
                    None => w.clone(),
                };
                out.push(Segment::Word(replaced));
            }
            ws => out.push(ws.clone()),
        }
    }
    join(&out)
}

fn back_translation(doc: &str, providers: &ProviderSet) -> Result<Perturbed, NlError> {
    match providers.translator() {
        Some(client) => {
            let pivoted = client.translate(doc, BACK_TRANSLATION_PIVOT)?;
            let round_tripped = client.translate(&pivoted, "en")?;
            Ok(Perturbed::clean(round_tripped))
        }
        None if providers.allow_fallback() => Ok(Perturbed {
            text: doc.to_string(),
            flags: vec![FLAG_DEGENERATE.to_string()],
        }),
        None => Err(NlError::ProviderUnavailable {
            strategy: NlStrategy::BackTranslation.id().to_string(),
        }),
    }
}

/// Produce the `s` perturbation samples of one (problem, strategy) pair.
/// Duplicates across samples are an inherent property of low-entropy
/// strategies and are kept.
pub fn sample_set_nl(
    problem: &Problem,
    scope: Scope,
    strategy: &strategy::StrategyInfo,
    s: u32,
    base_seed: u64,
    providers: &ProviderSet,
    lexicon: &Lexicon,
) -> Result<Vec<PerturbedPrompt>, NlError> {
    assert!(s >= 1, "sample count must be at least 1");
    assert!(matches!(scope, Scope::Docstring | Scope::Function));
    let prompt = problem.prompt_text();
    let parts = decompose_prompt(&prompt, problem.language, Some(&problem.entry_point))?;
    let blacklist = langkit::keyword_blacklist_for_prompt(
        problem.language,
        &parts.code_parts(),
    );

    let mut out = Vec::with_capacity(s as usize);
    for i in 0..s {
        let sample_seed = seed::derive(base_seed, &problem.id, strategy.id, i);
        let record = match (scope, strategy.kind) {
            (Scope::Docstring, StrategyKind::Docstring(nl)) => {
                let perturbed = perturb_docstring(
                    &parts.doc.text,
                    nl,
                    sample_seed,
                    &blacklist,
                    providers,
                    lexicon,
                )?;
                let text = format!(
                    "{}{}{}",
                    parts.header,
                    parts.doc.with_text(&perturbed.text).raw(),
                    parts.signature
                );
                PerturbedPrompt {
                    problem_id: problem.id.clone(),
                    language: problem.language,
                    scope,
                    strategy: strategy.id.to_string(),
                    sample_index: i,
                    text,
                    rename: None,
                    flags: perturbed.flags,
                }
            }
            (Scope::Function, StrategyKind::Function(fs)) => {
                match perturb_function_name(
                    &problem.entry_point,
                    fs,
                    sample_seed,
                    problem.language,
                    lexicon,
                ) {
                    Ok(new_name) => {
                        let text = apply_rename(
                            &prompt,
                            problem.language,
                            &problem.entry_point,
                            &new_name,
                        )?;
                        PerturbedPrompt {
                            problem_id: problem.id.clone(),
                            language: problem.language,
                            scope,
                            strategy: strategy.id.to_string(),
                            sample_index: i,
                            text,
                            rename: Some((problem.entry_point.clone(), new_name)),
                            flags: Vec::new(),
                        }
                    }
                    Err(NlError::NoVariantAvailable { .. }) => PerturbedPrompt {
                        problem_id: problem.id.clone(),
                        language: problem.language,
                        scope,
                        strategy: strategy.id.to_string(),
                        sample_index: i,
                        text: prompt.clone(),
                        rename: None,
                        flags: vec![FLAG_NO_VARIANT.to_string()],
                    },
                    Err(other) => return Err(other),
                }
            }
            _ => panic!("strategy {} does not match scope {}", strategy.id, scope),
        };
        out.push(record);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_providers() -> ProviderSet {
        ProviderSet::offline()
    }

    fn blacklist_of(words: &[&str]) -> BTreeSet<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    const DOC: &str = "Filter an input list of strings only for ones that start with a given prefix.";

    #[test]
    fn deterministic_across_calls() {
        let bl = blacklist_of(&["prefix"]);
        let lex = Lexicon::bundled();
        for strat in NlStrategy::ALL {
            let a = perturb_docstring(DOC, strat, 7, &bl, &no_providers(), lex).unwrap();
            let b = perturb_docstring(DOC, strat, 7, &bl, &no_providers(), lex).unwrap();
            assert_eq!(a, b, "{strat:?}");
        }
    }

    #[test]
    fn blacklisted_words_survive_every_strategy() {
        let bl = blacklist_of(&["prefix", "strings"]);
        let lex = Lexicon::bundled();
        for strat in NlStrategy::ALL {
            for seed_value in 0..20u64 {
                let out = perturb_docstring(DOC, strat, seed_value, &bl, &no_providers(), lex)
                    .unwrap()
                    .text;
                assert!(out.contains("prefix"), "{strat:?} seed {seed_value}: {out}");
                assert!(out.contains("strings"), "{strat:?} seed {seed_value}: {out}");
            }
        }
    }

    #[test]
    fn tense_past_matches_reference_shape() {
        let bl = blacklist_of(&[]);
        let out = tense(
            "Filter ones that start with a given prefix.",
            &bl,
            Lexicon::bundled(),
            TenseMode::Past,
        );
        assert_eq!(out, "Filter ones that started with a gave prefix.");
    }

    #[test]
    fn tense_future_matches_reference_shape() {
        let bl = blacklist_of(&[]);
        let out = tense(
            "Filter ones that start with a given prefix.",
            &bl,
            Lexicon::bundled(),
            TenseMode::Future,
        );
        assert_eq!(out, "Filter ones that will start with a will give prefix.");
    }

    #[test]
    fn back_translation_without_provider_falls_back() {
        let out = perturb_docstring(
            DOC,
            NlStrategy::BackTranslation,
            1,
            &blacklist_of(&[]),
            &no_providers(),
            Lexicon::bundled(),
        )
        .unwrap();
        assert_eq!(out.text, DOC);
        assert_eq!(out.flags, vec![FLAG_DEGENERATE.to_string()]);
    }

    #[test]
    fn back_translation_errors_when_fallback_disabled() {
        let providers = ProviderSet::offline().with_fallback(false);
        let err = perturb_docstring(
            DOC,
            NlStrategy::BackTranslation,
            1,
            &blacklist_of(&[]),
            &providers,
            Lexicon::bundled(),
        )
        .unwrap_err();
        assert!(matches!(err, NlError::ProviderUnavailable { .. }));
    }

    #[test]
    fn butterfingers_produces_distinct_variants() {
        let bl = blacklist_of(&[]);
        let lex = Lexicon::bundled();
        let doc = DOC.repeat(3); // ~200 chars
        let outputs: BTreeSet<String> = (0..5)
            .map(|i| {
                perturb_docstring(&doc, NlStrategy::ButterFingers, i, &bl, &no_providers(), lex)
                    .unwrap()
                    .text
            })
            .collect();
        assert!(outputs.len() >= 2, "expected variety, got {outputs:?}");
    }

    #[test]
    fn whitespace_never_merges_protected_words() {
        let bl = blacklist_of(&["given", "prefix"]);
        for seed_value in 0..50 {
            let out = whitespace(DOC, &bl, &mut seed::rng(seed_value));
            assert!(out.contains("given"), "{out}");
            assert!(out.contains("prefix"), "{out}");
        }
    }
}
