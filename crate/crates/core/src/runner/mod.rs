//! Generation driving, completion post-processing, and sandboxed
//! execution of candidate programs against test suites.

mod client;
mod postprocess;
mod sandbox;

pub use client::{
    GenClient, HttpGenClient, RecordingClient, ReplayClient, ReplayLog, StubEchoClient,
    ENV_GEN_URL,
};
pub use postprocess::postprocess;
pub use sandbox::{execute, toolchain_available, Toolchain};

use crate::corpus::{GenerationRecord, PerturbedPrompt, Problem};
use crate::langkit::LanguageId;
use crate::strategy::Scope;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("generation endpoint error: {0}")]
    Endpoint(String),
    #[error("generation request timed out")]
    Timeout,
    #[error("no toolchain available for {0}")]
    ToolchainMissing(LanguageId),
    #[error("sandbox setup failed: {0}")]
    SandboxSetup(String),
    #[error("replay log io: {0}")]
    ReplayIo(#[from] std::io::Error),
    #[error("replay log has no entry for request {0}")]
    ReplayMiss(String),
}

/// Generation hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub temperature: f64,
    pub top_p: f64,
    pub max_new_tokens: u32,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            temperature: 0.2,
            top_p: 0.95,
            max_new_tokens: 1536,
        }
    }
}

/// Sandbox limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExecLimits {
    pub compile_timeout_secs: u64,
    pub run_timeout_secs: u64,
    pub memory_cap_bytes: u64,
}

impl Default for ExecLimits {
    fn default() -> Self {
        ExecLimits {
            compile_timeout_secs: 30,
            run_timeout_secs: 10,
            memory_cap_bytes: 512 * 1024 * 1024,
        }
    }
}

impl ExecLimits {
    pub fn compile_timeout(&self) -> Duration {
        Duration::from_secs(self.compile_timeout_secs)
    }
    pub fn run_timeout(&self) -> Duration {
        Duration::from_secs(self.run_timeout_secs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutcomeKind {
    Passed,
    AssertionFailure,
    CompileError,
    RuntimeError,
    Timeout,
}

/// Classification of one execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub kind: OutcomeKind,
    pub detail: String,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.kind == OutcomeKind::Passed
    }

    pub fn new(kind: OutcomeKind, detail: impl Into<String>) -> Outcome {
        Outcome {
            kind,
            detail: detail.into(),
        }
    }
}

/// One generation per variant (k = 1), each executed against the
/// problem's test suite. Variants run on the current rayon pool, one
/// isolated workspace per execution.
pub fn evaluate_variants(
    problem: &Problem,
    variants: &[PerturbedPrompt],
    client: &dyn GenClient,
    params: &GenParams,
    limits: &ExecLimits,
) -> Result<Vec<GenerationRecord>, RunnerError> {
    if !toolchain_available(problem.language) {
        return Err(RunnerError::ToolchainMissing(problem.language));
    }
    for v in variants {
        assert_eq!(v.problem_id, problem.id, "variant belongs to another problem");
    }
    variants
        .par_iter()
        .map(|variant| evaluate_one(problem, variant, client, params, limits))
        .collect()
}

fn evaluate_one(
    problem: &Problem,
    variant: &PerturbedPrompt,
    client: &dyn GenClient,
    params: &GenParams,
    limits: &ExecLimits,
) -> Result<GenerationRecord, RunnerError> {
    let started = Instant::now();
    let (raw, cleaned, outcome) = match client.complete(variant, params) {
        Ok(raw) => {
            let cleaned = postprocess(&raw, problem.language, &variant.text);
            let test_rename = match variant.scope {
                Scope::Function => variant.rename.as_ref(),
                _ => None,
            };
            let outcome = execute_variant_body(problem, variant, &cleaned, test_rename, limits)?;
            (raw, cleaned, outcome)
        }
        Err(RunnerError::Timeout) => (
            String::new(),
            String::new(),
            Outcome::new(OutcomeKind::Timeout, "generation request timed out"),
        ),
        Err(RunnerError::Endpoint(detail)) => (
            String::new(),
            String::new(),
            Outcome::new(
                OutcomeKind::RuntimeError,
                format!("generation endpoint: {detail}"),
            ),
        ),
        Err(other) => return Err(other),
    };
    Ok(GenerationRecord {
        problem_id: problem.id.clone(),
        language: problem.language,
        scope: variant.scope,
        strategy: variant.strategy.clone(),
        sample_index: variant.sample_index,
        model_id: client.model_id(),
        raw_completion: raw,
        cleaned_code: cleaned,
        outcome,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}

/// Assemble the full program for a variant: the variant's prompt text,
/// the cleaned completion, and the test suite (function renames applied
/// to the harness so it calls the perturbed name).
pub fn assemble_variant_program(
    problem: &Problem,
    variant_text: &str,
    cleaned_code: &str,
    test_rename: Option<&(String, String)>,
) -> String {
    let test_suite = match test_rename {
        Some((old, new)) => {
            crate::nl_perturb::rename_identifier_tokens(&problem.test_suite, problem.language, old, new)
        }
        None => problem.test_suite.clone(),
    };
    let mut program = format!("{variant_text}{cleaned_code}");
    if !program.ends_with('\n') {
        program.push('\n');
    }
    program.push_str(&test_suite);
    program
}

fn execute_variant_body(
    problem: &Problem,
    variant: &PerturbedPrompt,
    cleaned_code: &str,
    test_rename: Option<&(String, String)>,
    limits: &ExecLimits,
) -> Result<Outcome, RunnerError> {
    let program = assemble_variant_program(problem, &variant.text, cleaned_code, test_rename);
    sandbox::execute_program(&program, problem.language, limits)
}

/// Per-problem self test: the canonical program must pass its own suite.
pub fn self_test_corpus(
    problems: &[Problem],
    limits: &ExecLimits,
) -> Result<Vec<(String, LanguageId, Outcome)>, RunnerError> {
    for language in problems.iter().map(|p| p.language).collect::<std::collections::BTreeSet<_>>() {
        if !toolchain_available(language) {
            return Err(RunnerError::ToolchainMissing(language));
        }
    }
    problems
        .par_iter()
        .map(|p| {
            let outcome = execute(&p.canonical_solution, p, limits, None)?;
            Ok((p.id.clone(), p.language, outcome))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_params_match_contract() {
        let p = GenParams::default();
        assert_eq!(p.temperature, 0.2);
        assert_eq!(p.top_p, 0.95);
        assert_eq!(p.max_new_tokens, 1536);
    }

    #[test]
    fn default_limits_are_positive() {
        let l = ExecLimits::default();
        assert!(l.compile_timeout_secs > 0);
        assert!(l.run_timeout_secs > 0);
        assert!(l.memory_cap_bytes > 0);
    }

    #[test]
    fn assemble_renames_test_harness_for_function_scope() {
        let problem = Problem {
            id: "x".into(),
            language: LanguageId::JavaScript,
            header: String::new(),
            docstring: "/*\n doc\n */\n".into(),
            signature: "function add(a, b) {\n".into(),
            canonical_solution: "    return a + b;\n}\n".into(),
            test_suite: "const assert = require('node:assert');\nassert.strictEqual(add(1, 2), 3);\n".into(),
            entry_point: "add".into(),
        };
        let rename = ("add".to_string(), "sum".to_string());
        let program = assemble_variant_program(
            &problem,
            "function sum(a, b) {\n",
            "    return a + b;\n}\n",
            Some(&rename),
        );
        assert!(program.contains("assert.strictEqual(sum(1, 2), 3);"));
        assert!(!program.contains("add(1, 2)"));
    }
}
