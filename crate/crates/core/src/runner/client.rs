//! Generation clients: the HTTP completion endpoint, a corpus-backed
//! echo stub for smoke-testing the pipeline, and record/replay wrappers.

use super::{GenParams, RunnerError};
use crate::corpus::{PerturbedPrompt, Problem};
use crate::langkit::LanguageId;
use crate::strategy::Scope;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::sync::Mutex;
use std::time::Duration;

pub const ENV_GEN_URL: &str = "PERTURBEVAL_GEN_URL";

pub trait GenClient: Send + Sync {
    fn complete(&self, prompt: &PerturbedPrompt, params: &GenParams) -> Result<String, RunnerError>;
    fn model_id(&self) -> String;
}

/// Minimal completion protocol:
/// POST `{"prompt", "temperature", "top_p", "max_new_tokens"}` →
/// `{"completion"}`.
pub struct HttpGenClient {
    url: String,
    model_id: String,
}

impl HttpGenClient {
    pub fn new(url: &str) -> HttpGenClient {
        HttpGenClient {
            url: url.to_string(),
            model_id: format!("http:{url}"),
        }
    }

    pub fn from_env() -> Option<HttpGenClient> {
        std::env::var(ENV_GEN_URL).ok().map(|url| HttpGenClient::new(&url))
    }

    pub fn with_model_id(mut self, id: &str) -> HttpGenClient {
        self.model_id = id.to_string();
        self
    }
}

#[derive(Serialize)]
struct CompletionRequest<'a> {
    prompt: &'a str,
    temperature: f64,
    top_p: f64,
    max_new_tokens: u32,
}

#[derive(Deserialize)]
struct CompletionResponse {
    completion: String,
}

impl GenClient for HttpGenClient {
    fn complete(&self, prompt: &PerturbedPrompt, params: &GenParams) -> Result<String, RunnerError> {
        let agent = ureq::AgentBuilder::new()
            .timeout(Duration::from_secs(600))
            .build();
        let response = agent
            .post(&self.url)
            .send_json(CompletionRequest {
                prompt: &prompt.text,
                temperature: params.temperature,
                top_p: params.top_p,
                max_new_tokens: params.max_new_tokens,
            })
            .map_err(|e| match e {
                ureq::Error::Status(code, _) => RunnerError::Endpoint(format!("status {code}")),
                ureq::Error::Transport(t) => {
                    let text = t.to_string();
                    if text.contains("timed out") {
                        RunnerError::Timeout
                    } else {
                        RunnerError::Endpoint(text)
                    }
                }
            })?;
        let body: CompletionResponse = response
            .into_json()
            .map_err(|e| RunnerError::Endpoint(format!("malformed response: {e}")))?;
        Ok(body.completion)
    }

    fn model_id(&self) -> String {
        self.model_id.clone()
    }
}

/// A perfect-model stub: completes every prompt with the canonical
/// solution (or its missing half for partial prompts), adjusted for any
/// recorded rename. Used for end-to-end smoke runs, where every robust
/// pass rate must come out at 1.0.
pub struct StubEchoClient {
    problems: BTreeMap<(LanguageId, String), Problem>,
}

impl StubEchoClient {
    pub fn new(problems: &[Problem]) -> StubEchoClient {
        StubEchoClient {
            problems: problems
                .iter()
                .map(|p| ((p.language, p.id.clone()), p.clone()))
                .collect(),
        }
    }

    fn remainder(problem: &Problem) -> String {
        let lines: Vec<&str> = problem.canonical_solution.lines().collect();
        if lines.is_empty() {
            return String::new();
        }
        let retained = (lines.len() / 2).max(1);
        let mut rest = lines[retained..].join("\n");
        if !rest.is_empty() {
            rest.push('\n');
        }
        rest
    }
}

impl GenClient for StubEchoClient {
    fn complete(&self, prompt: &PerturbedPrompt, _params: &GenParams) -> Result<String, RunnerError> {
        let problem = self
            .problems
            .get(&(prompt.language, prompt.problem_id.clone()))
            .ok_or_else(|| {
                RunnerError::Endpoint(format!("stub has no problem {}", prompt.problem_id))
            })?;
        let mut completion = match prompt.scope {
            Scope::Syntax | Scope::Format | Scope::Partial => Self::remainder(problem),
            _ => problem.canonical_solution.clone(),
        };
        if let Some((old, new)) = &prompt.rename {
            completion = crate::nl_perturb::rename_identifier_tokens(
                &completion,
                prompt.language,
                old,
                new,
            );
        }
        Ok(completion)
    }

    fn model_id(&self) -> String {
        "stub-echo".to_string()
    }
}

// ---------------------------------------------------------------------
// Record / replay
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ReplayEntry {
    request_hash: String,
    response: String,
}

/// JSON-lines log of `{request_hash, response}` pairs. Appends are
/// serialized; lookups are in-memory.
pub struct ReplayLog {
    path: std::path::PathBuf,
    entries: Mutex<BTreeMap<String, String>>,
}

impl ReplayLog {
    pub fn open(path: &Path) -> Result<ReplayLog, RunnerError> {
        let mut entries = BTreeMap::new();
        match std::fs::read_to_string(path) {
            Ok(content) => {
                for line in content.lines() {
                    if line.trim().is_empty() {
                        continue;
                    }
                    let entry: ReplayEntry = serde_json::from_str(line)
                        .map_err(|e| RunnerError::Endpoint(format!("bad replay line: {e}")))?;
                    entries.insert(entry.request_hash, entry.response);
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e.into()),
        }
        Ok(ReplayLog {
            path: path.to_path_buf(),
            entries: Mutex::new(entries),
        })
    }

    pub fn request_hash(prompt_text: &str, params: &GenParams) -> String {
        let canonical = serde_json::json!({
            "prompt": prompt_text,
            "temperature": params.temperature,
            "top_p": params.top_p,
            "max_new_tokens": params.max_new_tokens,
        });
        let mut hasher = Sha256::new();
        hasher.update(canonical.to_string().as_bytes());
        hex_string(&hasher.finalize())
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("replay lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, hash: &str) -> Option<String> {
        self.entries.lock().expect("replay lock").get(hash).cloned()
    }

    pub fn record(&self, hash: &str, response: &str) -> Result<(), RunnerError> {
        let mut entries = self.entries.lock().expect("replay lock");
        if entries.contains_key(hash) {
            return Ok(());
        }
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let line = serde_json::to_string(&ReplayEntry {
            request_hash: hash.to_string(),
            response: response.to_string(),
        })
        .expect("entry serializes");
        writeln!(file, "{line}")?;
        entries.insert(hash.to_string(), response.to_string());
        Ok(())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Wraps a live client and appends every (request, response) pair to the
/// log. Cache hits short-circuit the live call, making reruns cheap and
/// deterministic.
pub struct RecordingClient<'a> {
    inner: &'a dyn GenClient,
    log: &'a ReplayLog,
}

impl<'a> RecordingClient<'a> {
    pub fn new(inner: &'a dyn GenClient, log: &'a ReplayLog) -> Self {
        RecordingClient { inner, log }
    }
}

impl GenClient for RecordingClient<'_> {
    fn complete(&self, prompt: &PerturbedPrompt, params: &GenParams) -> Result<String, RunnerError> {
        let hash = ReplayLog::request_hash(&prompt.text, params);
        if let Some(hit) = self.log.get(&hash) {
            return Ok(hit);
        }
        let response = self.inner.complete(prompt, params)?;
        self.log.record(&hash, &response)?;
        Ok(response)
    }

    fn model_id(&self) -> String {
        self.inner.model_id()
    }
}

/// Serves completions exclusively from a replay log.
pub struct ReplayClient<'a> {
    log: &'a ReplayLog,
    model_id: String,
}

impl<'a> ReplayClient<'a> {
    pub fn new(log: &'a ReplayLog, model_id: &str) -> Self {
        ReplayClient {
            log,
            model_id: model_id.to_string(),
        }
    }
}

impl GenClient for ReplayClient<'_> {
    fn complete(&self, prompt: &PerturbedPrompt, params: &GenParams) -> Result<String, RunnerError> {
        let hash = ReplayLog::request_hash(&prompt.text, params);
        self.log
            .get(&hash)
            .ok_or_else(|| RunnerError::ReplayMiss(hash))
    }

    fn model_id(&self) -> String {
        self.model_id.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prompt(text: &str) -> PerturbedPrompt {
        PerturbedPrompt {
            problem_id: "p".into(),
            language: LanguageId::JavaScript,
            scope: Scope::Nominal,
            strategy: "nominal".into(),
            sample_index: 0,
            text: text.into(),
            rename: None,
            flags: Vec::new(),
        }
    }

    struct FixedClient(&'static str);
    impl GenClient for FixedClient {
        fn complete(&self, _: &PerturbedPrompt, _: &GenParams) -> Result<String, RunnerError> {
            Ok(self.0.to_string())
        }
        fn model_id(&self) -> String {
            "fixed".into()
        }
    }

    #[test]
    fn record_then_replay_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.jsonl");
        let log = ReplayLog::open(&path).unwrap();
        let live = FixedClient("the completion");
        let recorder = RecordingClient::new(&live, &log);
        let params = GenParams::default();
        let out = recorder.complete(&prompt("hello"), &params).unwrap();
        assert_eq!(out, "the completion");

        let log2 = ReplayLog::open(&path).unwrap();
        assert_eq!(log2.len(), 1);
        let replay = ReplayClient::new(&log2, "replayed");
        assert_eq!(replay.complete(&prompt("hello"), &params).unwrap(), "the completion");
        let err = replay.complete(&prompt("other"), &params).unwrap_err();
        assert!(matches!(err, RunnerError::ReplayMiss(_)));
    }

    #[test]
    fn request_hash_depends_on_prompt_and_params() {
        let params = GenParams::default();
        let a = ReplayLog::request_hash("x", &params);
        let b = ReplayLog::request_hash("y", &params);
        assert_ne!(a, b);
        let hotter = GenParams {
            temperature: 0.8,
            ..params
        };
        assert_ne!(a, ReplayLog::request_hash("x", &hotter));
    }

    #[test]
    fn stub_echo_completes_nominal_with_canonical() {
        let problem = Problem {
            id: "p".into(),
            language: LanguageId::JavaScript,
            header: String::new(),
            docstring: "/*\n d\n */\n".into(),
            signature: "function f(x) {\n".into(),
            canonical_solution: "    let y = x;\n    y += 1;\n    return y;\n}\n".into(),
            test_suite: String::new(),
            entry_point: "f".into(),
        };
        let stub = StubEchoClient::new(&[problem.clone()]);
        let mut p = prompt("ignored");
        p.language = LanguageId::JavaScript;
        let completion = stub.complete(&p, &GenParams::default()).unwrap();
        assert_eq!(completion, problem.canonical_solution);

        // Partial scope gets the remainder (last 2 of 4 lines).
        let mut partial = p.clone();
        partial.scope = Scope::Partial;
        let completion = stub.complete(&partial, &GenParams::default()).unwrap();
        assert_eq!(completion, "    return y;\n}\n");

        // A recorded variable rename is applied to the remainder.
        let mut renamed = partial.clone();
        renamed.scope = Scope::Syntax;
        renamed.rename = Some(("y".to_string(), "VAR_0".to_string()));
        let completion = stub.complete(&renamed, &GenParams::default()).unwrap();
        assert_eq!(completion, "    return VAR_0;\n}\n");
    }
}
