//! Partial-prompt construction plus the syntax and format perturbations:
//! grammar-level rewrites that preserve program semantics.

mod format;
mod statements;
mod syntax;

pub use format::{perturb_format, FormatStrategy};
pub use syntax::{perturb_syntax_body, SyntaxOutcome, SyntaxStrategy};

use crate::corpus::{PerturbedPrompt, Problem};
use crate::langkit::{decompose_prompt, DecomposeError, PromptParts};
use crate::providers::ProviderSet;
use crate::seed;
use crate::strategy::{self, Scope, StrategyKind};
use thiserror::Error;

/// Flag recorded when a syntax strategy had no applicable site and the
/// partial prompt was emitted unmodified.
pub const FLAG_INAPPLICABLE: &str = "strategy_inapplicable";

#[derive(Debug, Error)]
pub enum CodePerturbError {
    #[error("canonical solution is empty")]
    EmptySolution,
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error("provider call failed: {0}")]
    Provider(#[from] crate::providers::ProviderError),
}

/// A code-completion prompt: docstring, signature, and roughly the first
/// half of the canonical solution's lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialPrompt {
    pub parts: PromptParts,
    pub retained_lines: usize,
}

impl PartialPrompt {
    pub fn text(&self) -> String {
        self.parts.join()
    }
}

/// Keep the first ⌊n/2⌋ physical lines of the canonical solution
/// (minimum 1 when the solution is non-empty).
pub fn build_partial_prompt(problem: &Problem) -> Result<PartialPrompt, CodePerturbError> {
    let lines: Vec<&str> = problem.canonical_solution.lines().collect();
    if lines.is_empty() {
        return Err(CodePerturbError::EmptySolution);
    }
    let retained = (lines.len() / 2).max(1);
    let mut body = lines[..retained].join("\n");
    body.push('\n');

    let prompt = problem.prompt_text();
    let mut parts = decompose_prompt(&prompt, problem.language, Some(&problem.entry_point))?;
    parts.body = body;
    parts.trailer = String::new();
    Ok(PartialPrompt {
        parts,
        retained_lines: retained,
    })
}

/// The partial (baseline) prompt record for syntax/format comparisons.
pub fn partial_prompt_record(problem: &Problem) -> Result<PerturbedPrompt, CodePerturbError> {
    let partial = build_partial_prompt(problem)?;
    Ok(PerturbedPrompt {
        problem_id: problem.id.clone(),
        language: problem.language,
        scope: Scope::Partial,
        strategy: "partial".to_string(),
        sample_index: 0,
        text: partial.text(),
        rename: None,
        flags: Vec::new(),
    })
}

/// Apply one syntax strategy to a partial prompt. Transformations touch
/// only the body lines; an inapplicable strategy yields the unmodified
/// partial with a flag.
pub fn perturb_syntax(
    partial: &PartialPrompt,
    strategy: SyntaxStrategy,
    seed_value: u64,
    language: crate::langkit::LanguageId,
    providers: &ProviderSet,
) -> Result<(PromptParts, Option<(String, String)>, Vec<String>), CodePerturbError> {
    let outcome = perturb_syntax_body(&partial.parts.body, strategy, seed_value, language, providers)?;
    let mut parts = partial.parts.clone();
    match outcome {
        SyntaxOutcome::Rewritten { body, rename } => {
            parts.body = body;
            Ok((parts, rename, Vec::new()))
        }
        SyntaxOutcome::Inapplicable => Ok((parts, None, vec![FLAG_INAPPLICABLE.to_string()])),
    }
}

/// Produce the `s` samples of one (problem, syntax-or-format strategy)
/// pair over the problem's partial prompt.
pub fn sample_set_code(
    problem: &Problem,
    scope: Scope,
    strategy: &strategy::StrategyInfo,
    s: u32,
    base_seed: u64,
    providers: &ProviderSet,
) -> Result<Vec<PerturbedPrompt>, CodePerturbError> {
    assert!(s >= 1, "sample count must be at least 1");
    assert!(matches!(scope, Scope::Syntax | Scope::Format));
    let partial = build_partial_prompt(problem)?;

    let mut out = Vec::with_capacity(s as usize);
    for i in 0..s {
        let sample_seed = seed::derive(base_seed, &problem.id, strategy.id, i);
        let record = match (scope, strategy.kind) {
            (Scope::Syntax, StrategyKind::Syntax(sy)) => {
                let (parts, rename, flags) =
                    perturb_syntax(&partial, sy, sample_seed, problem.language, providers)?;
                PerturbedPrompt {
                    problem_id: problem.id.clone(),
                    language: problem.language,
                    scope,
                    strategy: strategy.id.to_string(),
                    sample_index: i,
                    text: parts.join(),
                    rename,
                    flags,
                }
            }
            (Scope::Format, StrategyKind::Format(fs)) => {
                let parts = perturb_format(&partial.parts, fs, sample_seed, problem.language);
                PerturbedPrompt {
                    problem_id: problem.id.clone(),
                    language: problem.language,
                    scope,
                    strategy: strategy.id.to_string(),
                    sample_index: i,
                    text: parts.join(),
                    rename: None,
                    flags: Vec::new(),
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
    use crate::langkit::LanguageId;

    fn problem_with_body(lines: usize) -> Problem {
        let body: String = (0..lines)
            .map(|i| format!("        int v{i} = {i};\n"))
            .collect();
        Problem {
            id: "T".to_string(),
            language: LanguageId::Java,
            header: "class Solution {\n".to_string(),
            docstring: "    /**\n     Do the thing.\n     */\n".to_string(),
            signature: "    public static int doThing(int x) {\n".to_string(),
            canonical_solution: body,
            test_suite: String::new(),
            entry_point: "doThing".to_string(),
        }
    }

    #[test]
    fn eight_line_body_keeps_four() {
        let partial = build_partial_prompt(&problem_with_body(8)).unwrap();
        assert_eq!(partial.retained_lines, 4);
        assert_eq!(partial.parts.body.lines().count(), 4);
    }

    #[test]
    fn one_line_body_keeps_one() {
        let partial = build_partial_prompt(&problem_with_body(1)).unwrap();
        assert_eq!(partial.retained_lines, 1);
    }

    #[test]
    fn seven_line_body_keeps_three() {
        let partial = build_partial_prompt(&problem_with_body(7)).unwrap();
        assert_eq!(partial.retained_lines, 3);
        let expected: String = (0..3).map(|i| format!("        int v{i} = {i};\n")).collect();
        assert_eq!(partial.parts.body, expected);
    }

    #[test]
    fn empty_solution_is_an_error() {
        let err = build_partial_prompt(&problem_with_body(0)).unwrap_err();
        assert!(matches!(err, CodePerturbError::EmptySolution));
    }

    #[test]
    fn partial_reassembles_prompt_plus_half_body() {
        let p = problem_with_body(4);
        let partial = build_partial_prompt(&p).unwrap();
        let text = partial.text();
        assert!(text.starts_with(&p.prompt_text()));
        assert!(text.ends_with("int v1 = 1;\n"));
    }
}
