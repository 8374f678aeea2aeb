//! Perturbation-quality gates: token dissimilarity, embedding cosine
//! similarity, AST syntax match, and the similarity threshold gate.

use crate::langkit::{self, LanguageId};
use crate::providers::{Embedder, ProviderError};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QualityError {
    #[error(transparent)]
    Provider(#[from] ProviderError),
    #[error("embedding cache io: {0}")]
    CacheIo(#[from] std::io::Error),
    #[error("embedding cache corrupt: {0}")]
    CacheCorrupt(String),
    #[error(transparent)]
    Ast(#[from] langkit::AstError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityMethod {
    Token,
    Embedding,
    AstSyntax,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityScore {
    pub value: f64,
    pub method: SimilarityMethod,
}

/// Percentage of token-level change between two token sequences:
/// `(1 - 2*Matches/(|a|+|b|)) * 100` with classic sequence-matcher
/// matching. Two empty sequences score 0.
pub fn token_dissimilarity<T: PartialEq>(a: &[T], b: &[T]) -> f64 {
    let total = a.len() + b.len();
    if total == 0 {
        return 0.0;
    }
    let matches = matching_tokens(a, b);
    (1.0 - (2.0 * matches as f64) / total as f64) * 100.0
}

/// Total matched tokens over the recursive longest-matching-block
/// decomposition (difflib semantics: longest block first, ties broken by
/// smallest start in `a`, then smallest start in `b`).
pub fn matching_tokens<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut queue = vec![(0usize, a.len(), 0usize, b.len())];
    let mut total = 0usize;
    while let Some((alo, ahi, blo, bhi)) = queue.pop() {
        let (i, j, k) = longest_match(a, b, alo, ahi, blo, bhi);
        if k == 0 {
            continue;
        }
        total += k;
        queue.push((alo, i, blo, j));
        queue.push((i + k, ahi, j + k, bhi));
    }
    total
}

fn longest_match<T: PartialEq>(
    a: &[T],
    b: &[T],
    alo: usize,
    ahi: usize,
    blo: usize,
    bhi: usize,
) -> (usize, usize, usize) {
    let mut best = (alo, blo, 0usize);
    // lengths[j] = length of the match ending at a[i-1], b[j-1]
    let mut lengths = vec![0usize; bhi.saturating_sub(blo) + 1];
    for i in alo..ahi {
        let mut new_lengths = vec![0usize; bhi - blo + 1];
        for j in blo..bhi {
            if a[i] == b[j] {
                let k = lengths[j - blo] + 1;
                new_lengths[j - blo + 1] = k;
                if k > best.2 {
                    best = (i + 1 - k, j + 1 - k, k);
                }
            }
        }
        lengths = new_lengths;
    }
    best
}

/// Cosine similarity of provider embeddings, clamped to [0, 1].
/// Empty-vs-empty is 1.0 by convention.
pub fn cosine_clamped(a: &[f32], b: &[f32]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| *x as f64 * *y as f64).sum();
    let na: f64 = a.iter().map(|x| (*x as f64).powi(2)).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| (*x as f64).powi(2)).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return if na == nb { 1.0 } else { 0.0 };
    }
    (dot / (na * nb)).clamp(0.0, 1.0)
}

/// Embedding similarity of two texts through a (possibly cached)
/// provider. Both-empty texts score 1.0 without a provider call.
pub fn embedding_similarity(
    a: &str,
    b: &str,
    embedder: &dyn Embedder,
) -> Result<SimilarityScore, QualityError> {
    if a.is_empty() && b.is_empty() {
        return Ok(SimilarityScore {
            value: 1.0,
            method: SimilarityMethod::Embedding,
        });
    }
    let vectors = embedder.embed(&[a.to_string(), b.to_string()])?;
    Ok(SimilarityScore {
        value: cosine_clamped(&vectors[0], &vectors[1]),
        method: SimilarityMethod::Embedding,
    })
}

/// Function names are embedded as their space-joined word lists.
pub fn function_name_embedding_text(name: &str) -> String {
    langkit::split_identifier(name).join(" ")
}

/// Depth bound for the subtree multiset (CodeBLEU convention).
const SUBTREE_DEPTH_BOUND: usize = 3;

/// Fraction of `b`'s depth-bounded AST subtrees that appear in `a`'s
/// subtree multiset. Comment nodes are excluded, so comment-style-only
/// rewrites score 1.0.
pub fn ast_syntax_match(
    a: &str,
    b: &str,
    language: LanguageId,
) -> Result<SimilarityScore, QualityError> {
    let multiset_a = langkit::subtree_multiset(a, language, SUBTREE_DEPTH_BOUND)?;
    let multiset_b = langkit::subtree_multiset(b, language, SUBTREE_DEPTH_BOUND)?;
    let total_b: usize = multiset_b.values().sum();
    if total_b == 0 {
        let total_a: usize = multiset_a.values().sum();
        return Ok(SimilarityScore {
            value: if total_a == 0 { 1.0 } else { 0.0 },
            method: SimilarityMethod::AstSyntax,
        });
    }
    let mut matched = 0usize;
    for (sexp, count_b) in &multiset_b {
        let count_a = multiset_a.get(sexp).copied().unwrap_or(0);
        matched += count_a.min(*count_b);
    }
    Ok(SimilarityScore {
        value: matched as f64 / total_b as f64,
        method: SimilarityMethod::AstSyntax,
    })
}

/// Eq-gate: pass iff similarity(perturbed, nominal) >= epsilon. The
/// score is returned alongside the verdict for reporting.
pub fn gate(
    perturbed: &str,
    nominal: &str,
    epsilon: f64,
    method: SimilarityMethod,
    language: LanguageId,
    embedder: Option<&dyn Embedder>,
) -> Result<(bool, SimilarityScore), QualityError> {
    assert!(epsilon > 0.0 && epsilon < 1.0, "epsilon must be in (0, 1)");
    let score = match method {
        SimilarityMethod::Token => {
            let ta = langkit::tokenize(perturbed, language);
            let tb = langkit::tokenize(nominal, language);
            let ta: Vec<&str> = ta.iter().map(|t| t.text.as_str()).collect();
            let tb: Vec<&str> = tb.iter().map(|t| t.text.as_str()).collect();
            SimilarityScore {
                value: 1.0 - token_dissimilarity(&ta, &tb) / 100.0,
                method,
            }
        }
        SimilarityMethod::Embedding => {
            let embedder = embedder.ok_or_else(|| {
                ProviderError::Unavailable("no embedding provider configured".to_string())
            })?;
            embedding_similarity(perturbed, nominal, embedder)?
        }
        // Score how much of the perturbed structure is present in the
        // nominal one: additions (e.g. dead code) lower the score.
        SimilarityMethod::AstSyntax => ast_syntax_match(nominal, perturbed, language)?,
    };
    Ok((score.value >= epsilon, score))
}

/// Default gate thresholds per scope.
pub fn default_epsilon(scope: crate::strategy::Scope) -> f64 {
    use crate::strategy::Scope;
    match scope {
        Scope::Docstring => 0.75,
        Scope::Function => 0.60,
        _ => 0.85,
    }
}

// ---------------------------------------------------------------------
// Embedding cache
// ---------------------------------------------------------------------

/// Append-only binary log of embeddings keyed by (provider id, text).
///
/// File layout: magic `PEVC`, u32 LE version (1), then records of
/// `[32-byte sha256 key][u32 LE dim][dim × f32 LE]`. The key is
/// `sha256(provider_id || 0x00 || text)`. Concurrent readers are safe;
/// writes are serialized behind a mutex.
pub struct EmbeddingCache {
    path: PathBuf,
    entries: Mutex<BTreeMap<[u8; 32], Vec<f32>>>,
}

const CACHE_MAGIC: &[u8; 4] = b"PEVC";
const CACHE_VERSION: u32 = 1;

impl EmbeddingCache {
    pub fn open(path: &Path) -> Result<EmbeddingCache, QualityError> {
        let mut entries = BTreeMap::new();
        match std::fs::File::open(path) {
            Ok(mut file) => {
                let mut magic = [0u8; 4];
                file.read_exact(&mut magic)
                    .map_err(|_| QualityError::CacheCorrupt("missing magic".to_string()))?;
                if &magic != CACHE_MAGIC {
                    return Err(QualityError::CacheCorrupt("bad magic".to_string()));
                }
                let mut version = [0u8; 4];
                file.read_exact(&mut version)
                    .map_err(|_| QualityError::CacheCorrupt("missing version".to_string()))?;
                if u32::from_le_bytes(version) != CACHE_VERSION {
                    return Err(QualityError::CacheCorrupt("unknown version".to_string()));
                }
                loop {
                    let mut key = [0u8; 32];
                    match file.read_exact(&mut key) {
                        Ok(()) => {}
                        Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => break,
                        Err(e) => return Err(e.into()),
                    }
                    let mut dim_bytes = [0u8; 4];
                    file.read_exact(&mut dim_bytes)?;
                    let dim = u32::from_le_bytes(dim_bytes) as usize;
                    let mut raw = vec![0u8; dim * 4];
                    file.read_exact(&mut raw)?;
                    let vector: Vec<f32> = raw
                        .chunks_exact(4)
                        .map(|c| f32::from_le_bytes(c.try_into().expect("4-byte chunk")))
                        .collect();
                    entries.insert(key, vector);
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e.into()),
        }
        Ok(EmbeddingCache {
            path: path.to_path_buf(),
            entries: Mutex::new(entries),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn key(provider_id: &str, text: &str) -> [u8; 32] {
        let mut hasher = Sha256::new();
        hasher.update(provider_id.as_bytes());
        hasher.update([0u8]);
        hasher.update(text.as_bytes());
        hasher.finalize().into()
    }

    pub fn get(&self, provider_id: &str, text: &str) -> Option<Vec<f32>> {
        self.entries
            .lock()
            .expect("cache lock")
            .get(&Self::key(provider_id, text))
            .cloned()
    }

    pub fn put(&self, provider_id: &str, text: &str, vector: &[f32]) -> Result<(), QualityError> {
        let key = Self::key(provider_id, text);
        let mut entries = self.entries.lock().expect("cache lock");
        if entries.contains_key(&key) {
            return Ok(());
        }
        let fresh = !self.path.exists();
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        if fresh {
            file.write_all(CACHE_MAGIC)?;
            file.write_all(&CACHE_VERSION.to_le_bytes())?;
        }
        file.write_all(&key)?;
        file.write_all(&(vector.len() as u32).to_le_bytes())?;
        for v in vector {
            file.write_all(&v.to_le_bytes())?;
        }
        entries.insert(key, vector.to_vec());
        Ok(())
    }
}

/// An embedder that consults the cache first and stores fresh vectors
/// back. With no inner provider it serves cache hits only (replay mode).
pub struct CachedEmbedder<'a> {
    cache: &'a EmbeddingCache,
    inner: Option<&'a dyn Embedder>,
    provider_id: String,
}

impl<'a> CachedEmbedder<'a> {
    pub fn new(cache: &'a EmbeddingCache, inner: Option<&'a dyn Embedder>, provider_id: &str) -> Self {
        CachedEmbedder {
            cache,
            inner,
            provider_id: provider_id.to_string(),
        }
    }
}

impl Embedder for CachedEmbedder<'_> {
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f32>>, ProviderError> {
        let mut out: Vec<Option<Vec<f32>>> = texts
            .iter()
            .map(|t| self.cache.get(&self.provider_id, t))
            .collect();
        let missing: Vec<usize> = out
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_none())
            .map(|(i, _)| i)
            .collect();
        if !missing.is_empty() {
            let inner = self.inner.ok_or_else(|| {
                ProviderError::Unavailable(format!(
                    "{} texts missing from embedding replay cache",
                    missing.len()
                ))
            })?;
            let fresh_texts: Vec<String> = missing.iter().map(|&i| texts[i].clone()).collect();
            let fresh = inner.embed(&fresh_texts)?;
            for (&i, vector) in missing.iter().zip(fresh) {
                self.cache
                    .put(&self.provider_id, &texts[i], &vector)
                    .map_err(|e| ProviderError::Unavailable(e.to_string()))?;
                out[i] = Some(vector);
            }
        }
        Ok(out.into_iter().map(|v| v.expect("filled")).collect())
    }

    fn id(&self) -> &str {
        &self.provider_id
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn identical_sequences_have_zero_dissimilarity() {
        let a = toks(&["a", "b", "c"]);
        assert_eq!(token_dissimilarity(&a, &a), 0.0);
    }

    #[test]
    fn disjoint_sequences_score_100() {
        let a = toks(&["a", "b"]);
        let b = toks(&["x", "y"]);
        assert_eq!(token_dissimilarity(&a, &b), 100.0);
    }

    #[test]
    fn one_divergent_token_scores_a_third() {
        let a = toks(&["a", "b", "c"]);
        let b = toks(&["a", "b", "d"]);
        let d = token_dissimilarity(&a, &b);
        assert!((d - 100.0 / 3.0).abs() < 1e-9, "{d}");
    }

    #[test]
    fn both_empty_score_zero() {
        let a: Vec<String> = Vec::new();
        assert_eq!(token_dissimilarity(&a, &a), 0.0);
    }

    #[test]
    fn one_empty_scores_100() {
        let a: Vec<String> = Vec::new();
        let b = toks(&["x"]);
        assert_eq!(token_dissimilarity(&a, &b), 100.0);
    }

    #[test]
    fn dissimilarity_is_symmetric() {
        let a = toks(&["a", "b", "c", "a", "b"]);
        let b = toks(&["b", "c", "a"]);
        assert_eq!(token_dissimilarity(&a, &b), token_dissimilarity(&b, &a));
    }

    #[test]
    fn cosine_of_identical_vectors_is_one() {
        let v = vec![0.3f32, 0.4, 0.5];
        assert!((cosine_clamped(&v, &v) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn negative_cosine_clamps_to_zero() {
        assert_eq!(cosine_clamped(&[1.0, 0.0], &[-1.0, 0.0]), 0.0);
    }

    #[test]
    fn ast_match_identical_sources_is_one() {
        let src = "int f(int x) {\n    if (x > 0) {\n        return x;\n    }\n    return 0;\n}\n";
        let score = ast_syntax_match(src, src, LanguageId::Cpp).unwrap();
        assert_eq!(score.value, 1.0);
    }

    #[test]
    fn ast_match_unrelated_sources_is_low() {
        let a = "int f() { return 1; }";
        let b = "vector<string> g(vector<string> xs, string p) {\n    vector<string> out;\n    for (int i = 0; i < (int)xs.size(); i++) {\n        if (xs[i] == p) { out.push_back(xs[i]); }\n    }\n    return out;\n}\n";
        let score = ast_syntax_match(a, b, LanguageId::Cpp).unwrap();
        assert!(score.value < 0.3, "{}", score.value);
    }

    #[test]
    fn gate_passes_identical_texts() {
        let (ok, score) = gate(
            "return x;",
            "return x;",
            0.9,
            SimilarityMethod::Token,
            LanguageId::Java,
            None,
        )
        .unwrap();
        assert!(ok);
        assert_eq!(score.value, 1.0);
    }

    #[test]
    fn gate_fails_below_threshold() {
        let (ok, score) = gate(
            "a b c d",
            "w x y z",
            0.8,
            SimilarityMethod::Token,
            LanguageId::Java,
            None,
        )
        .unwrap();
        assert!(!ok);
        assert!(score.value < 0.8);
    }

    #[test]
    fn function_name_embeds_as_word_list() {
        assert_eq!(function_name_embedding_text("getPositive"), "get positive");
        assert_eq!(function_name_embedding_text("has_close_elements"), "has close elements");
    }

    #[test]
    fn cache_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("emb.bin");
        {
            let cache = EmbeddingCache::open(&path).unwrap();
            cache.put("mpnet", "hello", &[0.1, 0.2, 0.3]).unwrap();
            cache.put("mpnet", "world", &[0.4, 0.5]).unwrap();
            assert_eq!(cache.get("mpnet", "hello").unwrap(), vec![0.1, 0.2, 0.3]);
        }
        let reopened = EmbeddingCache::open(&path).unwrap();
        assert_eq!(reopened.len(), 2);
        assert_eq!(reopened.get("mpnet", "world").unwrap(), vec![0.4, 0.5]);
        assert!(reopened.get("other", "hello").is_none());
    }

    #[test]
    fn cached_embedder_replays_without_inner() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("emb.bin");
        let cache = EmbeddingCache::open(&path).unwrap();
        cache.put("mpnet", "a", &[1.0, 0.0]).unwrap();
        let replay = CachedEmbedder::new(&cache, None, "mpnet");
        let vectors = replay.embed(&["a".to_string()]).unwrap();
        assert_eq!(vectors[0], vec![1.0, 0.0]);
        let err = replay.embed(&["missing".to_string()]).unwrap_err();
        assert!(matches!(err, ProviderError::Unavailable(_)));
    }
}
