//! Corpus loading, validation, and addressing.
//!
//! The corpus is JSON-lines, one problem per line:
//! `{"task_id", "language", "header", "docstring", "signature",
//! "canonical_solution", "test", "entry_point"}`, UTF-8 with LF endings.

use crate::langkit::{self, LanguageId, TokenKind};
use crate::runner::Outcome;
use crate::strategy::Scope;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: malformed record: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("duplicate id {id} for language {language}")]
    DuplicateId { id: String, language: LanguageId },
    #[error("line {line}: unsupported language {value:?}")]
    UnsupportedLanguage { line: usize, value: String },
    #[error("io error reading corpus: {0}")]
    Io(#[from] std::io::Error),
}

/// One coding task in one language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    #[serde(rename = "task_id")]
    pub id: String,
    pub language: LanguageId,
    /// Imports/includes (and any container opening) preceding the function.
    pub header: String,
    /// The doc comment block, delimiters included.
    pub docstring: String,
    /// Declaration line(s) including the function name and the opening `{`.
    pub signature: String,
    /// Function body completing the signature, closing braces included.
    pub canonical_solution: String,
    /// Self-contained test harness appended after the solution.
    #[serde(rename = "test")]
    pub test_suite: String,
    pub entry_point: String,
}

impl Problem {
    /// The nominal prompt: header + docstring + signature, no body.
    pub fn prompt_text(&self) -> String {
        format!("{}{}{}", self.header, self.docstring, self.signature)
    }

    /// Assemble a complete program from a candidate body.
    pub fn assemble(&self, body: &str) -> String {
        let mut out = format!("{}{}", self.prompt_text(), body);
        if !out.ends_with('\n') {
            out.push('\n');
        }
        out.push_str(&self.test_suite);
        out
    }

    /// The canonical program that must pass the test suite.
    pub fn canonical_program(&self) -> String {
        self.assemble(&self.canonical_solution)
    }
}

/// One perturbation sample of one problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbedPrompt {
    pub problem_id: String,
    pub language: LanguageId,
    pub scope: Scope,
    /// Strategy id, or "nominal"/"partial" for the baselines.
    pub strategy: String,
    pub sample_index: u32,
    pub text: String,
    /// Old/new identifier pair when the strategy renamed something (the
    /// function for function-scope strategies, a variable for the
    /// VarRenamer family). The evaluator uses it to keep the assembled
    /// program consistent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rename: Option<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl PerturbedPrompt {
    /// The unperturbed baseline record for a problem.
    pub fn nominal(problem: &Problem) -> PerturbedPrompt {
        PerturbedPrompt {
            problem_id: problem.id.clone(),
            language: problem.language,
            scope: Scope::Nominal,
            strategy: "nominal".to_string(),
            sample_index: 0,
            text: problem.prompt_text(),
            rename: None,
            flags: Vec::new(),
        }
    }
}

/// One generation plus its execution outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub problem_id: String,
    pub language: LanguageId,
    pub scope: Scope,
    pub strategy: String,
    pub sample_index: u32,
    pub model_id: String,
    pub raw_completion: String,
    pub cleaned_code: String,
    pub outcome: Outcome,
    pub wall_time_secs: f64,
}

/// Serialize records as JSON-lines.
pub fn write_jsonl<T: Serialize>(records: &[T]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Parse JSON-lines into records, reporting the first bad line.
pub fn parse_jsonl<T: for<'de> Deserialize<'de>>(content: &str) -> Result<Vec<T>, CorpusError> {
    let mut out = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(line).map_err(|e| CorpusError::MalformedRecord {
                line: idx + 1,
                reason: e.to_string(),
            })?,
        );
    }
    Ok(out)
}

/// Raw record mirroring the wire schema, used so unsupported languages are
/// reported distinctly from malformed JSON.
#[derive(Deserialize)]
struct RawRecord {
    task_id: String,
    language: String,
    header: String,
    docstring: String,
    signature: String,
    canonical_solution: String,
    test: String,
    entry_point: String,
}

/// Load and validate a JSON-lines corpus. Problems come back grouped by
/// language (file order within each language).
pub fn load_corpus(path: &Path) -> Result<Vec<Problem>, CorpusError> {
    let content = std::fs::read_to_string(path)?;
    parse_corpus(&content)
}

pub fn parse_corpus(content: &str) -> Result<Vec<Problem>, CorpusError> {
    let mut problems: Vec<Problem> = Vec::new();
    let mut seen: BTreeSet<(LanguageId, String)> = BTreeSet::new();
    for (idx, line) in content.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord =
            serde_json::from_str(line).map_err(|e| CorpusError::MalformedRecord {
                line: line_no,
                reason: e.to_string(),
            })?;
        let language =
            LanguageId::parse(&raw.language).ok_or_else(|| CorpusError::UnsupportedLanguage {
                line: line_no,
                value: raw.language.clone(),
            })?;
        let problem = Problem {
            id: raw.task_id,
            language,
            header: raw.header,
            docstring: raw.docstring,
            signature: raw.signature,
            canonical_solution: raw.canonical_solution,
            test_suite: raw.test,
            entry_point: raw.entry_point,
        };
        validate_problem(&problem, line_no)?;
        if !seen.insert((language, problem.id.clone())) {
            return Err(CorpusError::DuplicateId {
                id: problem.id,
                language,
            });
        }
        problems.push(problem);
    }
    problems.sort_by(|a, b| a.language.cmp(&b.language).then_with(|| a.id.cmp(&b.id)));
    Ok(problems)
}

fn validate_problem(problem: &Problem, line: usize) -> Result<(), CorpusError> {
    let fail = |reason: String| CorpusError::MalformedRecord { line, reason };
    if problem.docstring.trim().is_empty() {
        return Err(fail(format!("{}: docstring is empty", problem.id)));
    }
    if problem.entry_point.trim().is_empty() {
        return Err(fail(format!("{}: entry_point is empty", problem.id)));
    }
    let occurrences = langkit::tokenize(&problem.signature, problem.language)
        .iter()
        .filter(|t| t.kind == TokenKind::Identifier && t.text == problem.entry_point)
        .count();
    if occurrences != 1 {
        return Err(fail(format!(
            "{}: signature must contain entry_point {:?} exactly once as an identifier, found {}",
            problem.id, problem.entry_point, occurrences
        )));
    }
    Ok(())
}

/// Serialize problems back to the canonical JSON-lines form. Loading a
/// canonically formatted file and writing it again is byte-identical.
pub fn write_corpus(problems: &[Problem]) -> String {
    let mut out = String::new();
    for p in problems {
        out.push_str(&serde_json::to_string(p).expect("problem serializes"));
        out.push('\n');
    }
    out
}

pub fn write_corpus_to(problems: &[Problem], path: &Path) -> Result<(), CorpusError> {
    std::fs::write(path, write_corpus(problems))?;
    Ok(())
}

/// Path of the bundled mini-corpus fixture (10 problems × 3 languages).
pub fn mini_corpus_path() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/mini_corpus.jsonl")
}

/// Load the bundled mini-corpus fixture.
pub fn load_mini_corpus() -> Result<Vec<Problem>, CorpusError> {
    load_corpus(&mini_corpus_path())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(task_id: &str, language: &str) -> String {
        serde_json::json!({
            "task_id": task_id,
            "language": language,
            "header": "import java.util.*;\n\nclass Solution {\n",
            "docstring": "    /**\n     Add two numbers.\n     */\n",
            "signature": "    public static int add(int a, int b) {\n",
            "canonical_solution": "        return a + b;\n    }\n}\n",
            "test": "class Main {\n    public static void main(String[] args) {\n        if (Solution.add(1, 2) != 3) { throw new AssertionError(); }\n    }\n}\n",
            "entry_point": "add"
        })
        .to_string()
    }

    #[test]
    fn single_valid_record_loads() {
        let problems = parse_corpus(&record("HumanEval_X", "java")).unwrap();
        assert_eq!(problems.len(), 1);
        assert_eq!(problems[0].language, LanguageId::Java);
        assert_eq!(problems[0].entry_point, "add");
    }

    #[test]
    fn duplicate_id_rejected() {
        let content = format!("{}\n{}\n", record("HumanEval_0", "java"), record("HumanEval_0", "java"));
        let err = parse_corpus(&content).unwrap_err();
        assert!(matches!(err, CorpusError::DuplicateId { .. }));
    }

    #[test]
    fn same_id_in_different_languages_is_fine() {
        let content = format!("{}\n{}\n", record("HumanEval_0", "java"), record("HumanEval_0", "cpp"));
        let problems = parse_corpus(&content).unwrap();
        assert_eq!(problems.len(), 2);
    }

    #[test]
    fn unsupported_language_reported_with_line() {
        let content = format!("{}\n{}\n", record("a", "java"), record("b", "go"));
        match parse_corpus(&content).unwrap_err() {
            CorpusError::UnsupportedLanguage { line, value } => {
                assert_eq!(line, 2);
                assert_eq!(value, "go");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn malformed_json_reported_with_line() {
        let err = parse_corpus("{not json}\n").unwrap_err();
        match err {
            CorpusError::MalformedRecord { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_docstring_rejected() {
        let mut value: serde_json::Value = serde_json::from_str(&record("x", "java")).unwrap();
        value["docstring"] = serde_json::json!("   ");
        let err = parse_corpus(&value.to_string()).unwrap_err();
        assert!(matches!(err, CorpusError::MalformedRecord { .. }));
    }

    #[test]
    fn entry_point_must_appear_once_in_signature() {
        let mut value: serde_json::Value = serde_json::from_str(&record("x", "java")).unwrap();
        value["signature"] = serde_json::json!("    public static int add_add(int a, int b) {\n");
        let err = parse_corpus(&value.to_string()).unwrap_err();
        assert!(matches!(err, CorpusError::MalformedRecord { .. }));
    }

    #[test]
    fn assemble_places_test_after_solution() {
        let problems = parse_corpus(&record("x", "java")).unwrap();
        let program = problems[0].canonical_program();
        assert!(program.contains("return a + b;"));
        let solution_pos = program.find("return a + b;").unwrap();
        let test_pos = program.find("class Main").unwrap();
        assert!(solution_pos < test_pos);
    }
}
