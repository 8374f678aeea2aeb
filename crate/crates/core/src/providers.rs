//! External providers: machine translation, masked-rename candidates,
//! and sentence embeddings, each behind a small trait with an HTTP
//! implementation. Callers decide whether to use the deterministic
//! offline fallbacks when a provider is absent.
//!
//! Wire protocols (all JSON over POST):
//! - translation: `{"text": str, "task": "translate", "to": lang}` →
//!   `{"text": str}`; url from `PERTURBEVAL_MT_URL`.
//! - masked rename: `{"code": str, "mask": "<MASK>", "language": str}` →
//!   `{"candidates": [{"name": str, "score": float}, ...]}`; url from
//!   `PERTURBEVAL_MLM_URL`.
//! - embeddings: `{"texts": [str]}` → `{"vectors": [[float]]}`; url from
//!   `PERTURBEVAL_EMB_URL`.

use serde::{Deserialize, Serialize};
use std::sync::{Arc, Mutex};
use std::time::Duration;
use thiserror::Error;

pub const ENV_MT_URL: &str = "PERTURBEVAL_MT_URL";
pub const ENV_MLM_URL: &str = "PERTURBEVAL_MLM_URL";
pub const ENV_EMB_URL: &str = "PERTURBEVAL_EMB_URL";

#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("provider endpoint error: {0}")]
    Endpoint(String),
    #[error("provider returned malformed payload: {0}")]
    Malformed(String),
    #[error("provider unavailable: {0}")]
    Unavailable(String),
}

pub trait Translator: Send + Sync {
    fn translate(&self, text: &str, to: &str) -> Result<String, ProviderError>;
}

pub trait MaskedRenamer: Send + Sync {
    /// Ranked candidate names for the masked identifier in `code`.
    fn candidates(&self, code: &str, language: &str) -> Result<Vec<String>, ProviderError>;
}

pub trait Embedder: Send + Sync {
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f32>>, ProviderError>;
    /// Stable id used to key the embedding cache.
    fn id(&self) -> &str;
}

/// The provider bundle handed through the perturbation pipeline.
#[derive(Clone, Default)]
pub struct ProviderSet {
    translator: Option<Arc<dyn Translator>>,
    renamer: Option<Arc<dyn MaskedRenamer>>,
    embedder: Option<Arc<dyn Embedder>>,
    disallow_fallback: bool,
}

impl ProviderSet {
    /// No external providers; offline fallbacks enabled.
    pub fn offline() -> ProviderSet {
        ProviderSet::default()
    }

    /// Build from the `PERTURBEVAL_*` environment variables.
    pub fn from_env() -> ProviderSet {
        let mut set = ProviderSet::offline();
        if let Ok(url) = std::env::var(ENV_MT_URL) {
            set.translator = Some(Arc::new(HttpTranslator::new(&url)));
        }
        if let Ok(url) = std::env::var(ENV_MLM_URL) {
            set.renamer = Some(Arc::new(HttpMaskedRenamer::new(&url)));
        }
        if let Ok(url) = std::env::var(ENV_EMB_URL) {
            set.embedder = Some(Arc::new(HttpEmbedder::new(&url)));
        }
        set
    }

    pub fn with_translator(mut self, t: Arc<dyn Translator>) -> Self {
        self.translator = Some(t);
        self
    }

    pub fn with_renamer(mut self, r: Arc<dyn MaskedRenamer>) -> Self {
        self.renamer = Some(r);
        self
    }

    pub fn with_embedder(mut self, e: Arc<dyn Embedder>) -> Self {
        self.embedder = Some(e);
        self
    }

    pub fn with_fallback(mut self, allow: bool) -> Self {
        self.disallow_fallback = !allow;
        self
    }

    pub fn translator(&self) -> Option<&Arc<dyn Translator>> {
        self.translator.as_ref()
    }

    pub fn renamer(&self) -> Option<&Arc<dyn MaskedRenamer>> {
        self.renamer.as_ref()
    }

    pub fn embedder(&self) -> Option<&Arc<dyn Embedder>> {
        self.embedder.as_ref()
    }

    pub fn allow_fallback(&self) -> bool {
        !self.disallow_fallback
    }
}

fn agent() -> ureq::Agent {
    ureq::AgentBuilder::new()
        .timeout(Duration::from_secs(120))
        .build()
}

fn post_json(url: &str, body: serde_json::Value) -> Result<serde_json::Value, ProviderError> {
    let response = agent()
        .post(url)
        .send_json(body)
        .map_err(|e| ProviderError::Endpoint(e.to_string()))?;
    response
        .into_json()
        .map_err(|e| ProviderError::Malformed(e.to_string()))
}

pub struct HttpTranslator {
    url: String,
    // Serializes requests: one shared client, bounded to one in-flight call.
    lock: Mutex<()>,
}

impl HttpTranslator {
    pub fn new(url: &str) -> HttpTranslator {
        HttpTranslator {
            url: url.to_string(),
            lock: Mutex::new(()),
        }
    }
}

impl Translator for HttpTranslator {
    fn translate(&self, text: &str, to: &str) -> Result<String, ProviderError> {
        let _guard = self.lock.lock().expect("translator lock");
        let payload = serde_json::json!({"text": text, "task": "translate", "to": to});
        let value = post_json(&self.url, payload)?;
        value
            .get("text")
            .and_then(|t| t.as_str())
            .map(|s| s.to_string())
            .ok_or_else(|| ProviderError::Malformed("missing \"text\" field".to_string()))
    }
}

pub struct HttpMaskedRenamer {
    url: String,
    lock: Mutex<()>,
}

impl HttpMaskedRenamer {
    pub fn new(url: &str) -> HttpMaskedRenamer {
        HttpMaskedRenamer {
            url: url.to_string(),
            lock: Mutex::new(()),
        }
    }
}

#[derive(Deserialize)]
struct RenameCandidate {
    name: String,
    #[allow(dead_code)]
    score: f64,
}

impl MaskedRenamer for HttpMaskedRenamer {
    fn candidates(&self, code: &str, language: &str) -> Result<Vec<String>, ProviderError> {
        let _guard = self.lock.lock().expect("renamer lock");
        let payload = serde_json::json!({"code": code, "mask": "<MASK>", "language": language});
        let value = post_json(&self.url, payload)?;
        let candidates: Vec<RenameCandidate> = serde_json::from_value(
            value
                .get("candidates")
                .cloned()
                .ok_or_else(|| ProviderError::Malformed("missing \"candidates\"".to_string()))?,
        )
        .map_err(|e| ProviderError::Malformed(e.to_string()))?;
        Ok(candidates.into_iter().map(|c| c.name).collect())
    }
}

pub struct HttpEmbedder {
    url: String,
    id: String,
    lock: Mutex<()>,
}

impl HttpEmbedder {
    pub fn new(url: &str) -> HttpEmbedder {
        HttpEmbedder {
            url: url.to_string(),
            id: "http".to_string(),
            lock: Mutex::new(()),
        }
    }

    pub fn with_id(mut self, id: &str) -> HttpEmbedder {
        self.id = id.to_string();
        self
    }
}

#[derive(Serialize)]
struct EmbedRequest<'a> {
    texts: &'a [String],
}

#[derive(Deserialize)]
struct EmbedResponse {
    vectors: Vec<Vec<f32>>,
}

impl Embedder for HttpEmbedder {
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f32>>, ProviderError> {
        let _guard = self.lock.lock().expect("embedder lock");
        let payload = serde_json::to_value(EmbedRequest { texts })
            .map_err(|e| ProviderError::Malformed(e.to_string()))?;
        let value = post_json(&self.url, payload)?;
        let response: EmbedResponse =
            serde_json::from_value(value).map_err(|e| ProviderError::Malformed(e.to_string()))?;
        if response.vectors.len() != texts.len() {
            return Err(ProviderError::Malformed(format!(
                "expected {} vectors, got {}",
                texts.len(),
                response.vectors.len()
            )));
        }
        Ok(response.vectors)
    }

    fn id(&self) -> &str {
        &self.id
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::{BufRead, BufReader, Read, Write};
    use std::net::TcpListener;

    /// Minimal single-request HTTP server for exercising the wire format.
    fn serve_once(
        respond: impl FnOnce(serde_json::Value) -> serde_json::Value + Send + 'static,
    ) -> (String, std::thread::JoinHandle<serde_json::Value>) {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind");
        let addr = listener.local_addr().expect("addr");
        let handle = std::thread::spawn(move || {
            let (stream, _) = listener.accept().expect("accept");
            let mut reader = BufReader::new(stream);
            let mut line = String::new();
            reader.read_line(&mut line).expect("request line");
            let mut content_length = 0usize;
            loop {
                let mut header = String::new();
                reader.read_line(&mut header).expect("header");
                if header.trim().is_empty() {
                    break;
                }
                if let Some(rest) = header.to_lowercase().strip_prefix("content-length:") {
                    content_length = rest.trim().parse().expect("length");
                }
            }
            let mut body = vec![0u8; content_length];
            reader.read_exact(&mut body).expect("body");
            let request: serde_json::Value = serde_json::from_slice(&body).expect("json body");
            let reply = respond(request.clone());
            let payload = serde_json::to_string(&reply).expect("reply json");
            let mut stream = reader.into_inner();
            write!(
                stream,
                "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\n\r\n{}",
                payload.len(),
                payload
            )
            .expect("write reply");
            request
        });
        (format!("http://{addr}"), handle)
    }

    #[test]
    fn translator_speaks_the_protocol() {
        let (url, handle) = serve_once(|req| {
            let text = req["text"].as_str().unwrap_or_default();
            serde_json::json!({"text": format!("<{}>", text)})
        });
        let client = HttpTranslator::new(&url);
        let out = client.translate("hello", "de").unwrap();
        assert_eq!(out, "<hello>");
        let request = handle.join().unwrap();
        assert_eq!(request["task"], "translate");
        assert_eq!(request["to"], "de");
        assert_eq!(request["text"], "hello");
    }

    #[test]
    fn embedder_checks_vector_count() {
        let (url, _handle) = serve_once(|_req| serde_json::json!({"vectors": [[1.0, 0.0]]}));
        let client = HttpEmbedder::new(&url);
        let err = client
            .embed(&["a".to_string(), "b".to_string()])
            .unwrap_err();
        assert!(matches!(err, ProviderError::Malformed(_)));
    }

    #[test]
    fn renamer_parses_candidates() {
        let (url, handle) = serve_once(|_req| {
            serde_json::json!({"candidates": [
                {"name": "data", "score": 0.9},
                {"name": "value", "score": 0.5},
            ]})
        });
        let client = HttpMaskedRenamer::new(&url);
        let out = client.candidates("int <MASK> = 0;", "java").unwrap();
        assert_eq!(out, vec!["data", "value"]);
        let request = handle.join().unwrap();
        assert_eq!(request["mask"], "<MASK>");
    }
}
