//! Stage orchestration: each command reads its predecessor's files and
//! writes its own, so stages are independently re-runnable.

use crate::analysis::{self, ImpactMatrix, LabeledSample, PromptPair};
use crate::code_perturb;
use crate::corpus::{self, GenerationRecord, PerturbedPrompt, Problem};
use crate::langkit::LanguageId;
use crate::metrics::{self, AggregationMode, PassMatrix, Row, StrategyMetrics};
use crate::nl_perturb::{self, Lexicon};
use crate::providers::ProviderSet;
use crate::quality::{self, CachedEmbedder, EmbeddingCache, SimilarityMethod};
use crate::repair;
use crate::runner::{self, ExecLimits, GenClient, GenParams};
use crate::strategy::{self, Scope};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("missing input for stage {stage}: {path}")]
    MissingStageInput { stage: &'static str, path: PathBuf },
    #[error(transparent)]
    Corpus(#[from] corpus::CorpusError),
    #[error(transparent)]
    Nl(#[from] nl_perturb::NlError),
    #[error(transparent)]
    Code(#[from] code_perturb::CodePerturbError),
    #[error(transparent)]
    Runner(#[from] runner::RunnerError),
    #[error(transparent)]
    Metrics(#[from] metrics::MetricsError),
    #[error(transparent)]
    Analysis(#[from] analysis::AnalysisError),
    #[error(transparent)]
    Repair(#[from] repair::RepairError),
    #[error(transparent)]
    Quality(#[from] quality::QualityError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Deterministic run configuration. Flags mirror these fields 1:1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub corpus_path: PathBuf,
    pub output_dir: PathBuf,
    #[serde(default = "default_languages")]
    pub languages: Vec<LanguageId>,
    #[serde(default = "default_scopes")]
    pub scopes: Vec<Scope>,
    /// None = all registered strategies.
    #[serde(default)]
    pub strategies: Option<Vec<String>>,
    #[serde(default = "default_s")]
    pub s: u32,
    #[serde(default = "default_t")]
    pub t: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub gen_params: GenParams,
    #[serde(default)]
    pub limits: ExecLimits,
    #[serde(default = "default_eps_docstring")]
    pub epsilon_docstring: f64,
    #[serde(default = "default_eps_function")]
    pub epsilon_function: f64,
    #[serde(default = "default_eps_code")]
    pub epsilon_code: f64,
    /// Worker pool width; None = logical CPU count.
    #[serde(default)]
    pub jobs: Option<usize>,
    /// Optional embedding replay cache path.
    #[serde(default)]
    pub embedding_cache: Option<PathBuf>,
}

fn default_languages() -> Vec<LanguageId> {
    LanguageId::ALL.to_vec()
}
fn default_scopes() -> Vec<Scope> {
    Scope::PERTURBATION_SCOPES.to_vec()
}
fn default_s() -> u32 {
    5
}
fn default_t() -> usize {
    3
}
fn default_seed() -> u64 {
    42
}
fn default_eps_docstring() -> f64 {
    0.75
}
fn default_eps_function() -> f64 {
    0.60
}
fn default_eps_code() -> f64 {
    0.85
}

impl RunConfig {
    pub fn new(corpus_path: &Path, output_dir: &Path) -> RunConfig {
        RunConfig {
            corpus_path: corpus_path.to_path_buf(),
            output_dir: output_dir.to_path_buf(),
            languages: default_languages(),
            scopes: default_scopes(),
            strategies: None,
            s: default_s(),
            t: default_t(),
            seed: default_seed(),
            gen_params: GenParams::default(),
            limits: ExecLimits::default(),
            epsilon_docstring: default_eps_docstring(),
            epsilon_function: default_eps_function(),
            epsilon_code: default_eps_code(),
            jobs: None,
            embedding_cache: None,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.s < 1 {
            return Err(PipelineError::Config("s must be at least 1".to_string()));
        }
        if self.t < 1 || self.t > self.s as usize {
            return Err(PipelineError::Config(format!(
                "t must satisfy 1 <= t <= s, got t={} s={}",
                self.t, self.s
            )));
        }
        if let Some(strategies) = &self.strategies {
            for id in strategies {
                if strategy::find(id).is_none() {
                    return Err(PipelineError::Config(format!("unknown strategy {id:?}")));
                }
            }
        }
        for scope in &self.scopes {
            if !Scope::PERTURBATION_SCOPES.contains(scope) {
                return Err(PipelineError::Config(format!(
                    "{scope} is not a perturbation scope"
                )));
            }
        }
        Ok(())
    }

    fn wants(&self, info: &strategy::StrategyInfo) -> bool {
        self.scopes.contains(&info.scope)
            && self
                .strategies
                .as_ref()
                .map(|list| list.iter().any(|id| id == info.id))
                .unwrap_or(true)
    }

    pub fn epsilon_for(&self, scope: Scope) -> f64 {
        match scope {
            Scope::Docstring => self.epsilon_docstring,
            Scope::Function => self.epsilon_function,
            _ => self.epsilon_code,
        }
    }

    pub fn stage_dir(&self, stage: &str) -> PathBuf {
        self.output_dir.join(stage)
    }

    pub fn load_problems(&self) -> Result<Vec<Problem>, PipelineError> {
        let problems = corpus::load_corpus(&self.corpus_path)?;
        Ok(problems
            .into_iter()
            .filter(|p| self.languages.contains(&p.language))
            .collect())
    }
}

// ---------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestFile {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub s: u32,
    pub t: usize,
    pub strategy_counts: BTreeMap<String, usize>,
    pub files: Vec<ManifestFile>,
}

fn sha256_file(path: &Path) -> Result<String, std::io::Error> {
    let bytes = std::fs::read(path)?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// Hash every file under `dir` (excluding the manifest itself) and write
/// `manifest.json`.
pub fn write_manifest(config: &RunConfig, dir: &Path) -> Result<Manifest, PipelineError> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(current) = stack.pop() {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(&current)?
            .map(|e| e.map(|e| e.path()))
            .collect::<Result<_, _>>()?;
        entries.sort();
        for entry in entries {
            if entry.is_dir() {
                stack.push(entry);
            } else if entry.file_name().map(|n| n != "manifest.json").unwrap_or(true) {
                files.push(ManifestFile {
                    path: entry
                        .strip_prefix(dir)
                        .expect("under dir")
                        .to_string_lossy()
                        .to_string(),
                    sha256: sha256_file(&entry)?,
                });
            }
        }
    }
    files.sort_by(|a, b| a.path.cmp(&b.path));

    let registry = strategy::registry();
    let mut strategy_counts: BTreeMap<String, usize> = BTreeMap::new();
    for scope in Scope::PERTURBATION_SCOPES {
        strategy_counts.insert(
            scope.to_string(),
            registry.iter().filter(|s| s.scope == scope).count(),
        );
    }
    strategy_counts.insert("total".to_string(), registry.len());

    let manifest = Manifest {
        seed: config.seed,
        s: config.s,
        t: config.t,
        strategy_counts,
        files,
    };
    std::fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
    )?;
    Ok(manifest)
}

// ---------------------------------------------------------------------
// perturb stage
// ---------------------------------------------------------------------

/// Generate all perturbed prompts plus the nominal and partial baselines,
/// one JSON-lines file per (language, scope, strategy).
pub fn cmd_perturb(
    config: &RunConfig,
    providers: &ProviderSet,
) -> Result<Manifest, PipelineError> {
    config.validate()?;
    let problems = config.load_problems()?;
    let lexicon = Lexicon::bundled();
    let stage = config.stage_dir("perturb");
    std::fs::create_dir_all(&stage)?;

    let mut by_file: BTreeMap<PathBuf, Vec<PerturbedPrompt>> = BTreeMap::new();
    for problem in &problems {
        let lang_dir = stage.join(problem.language.as_str());
        by_file
            .entry(lang_dir.join("nominal").join("nominal.jsonl"))
            .or_default()
            .push(PerturbedPrompt::nominal(problem));
        let needs_partial = config
            .scopes
            .iter()
            .any(|s| matches!(s, Scope::Syntax | Scope::Format));
        if needs_partial {
            by_file
                .entry(lang_dir.join("partial").join("partial.jsonl"))
                .or_default()
                .push(code_perturb::partial_prompt_record(problem)?);
        }

        for info in strategy::applicable(problem.language) {
            if !config.wants(&info) {
                continue;
            }
            let samples = match info.scope {
                Scope::Docstring | Scope::Function => nl_perturb::sample_set_nl(
                    problem,
                    info.scope,
                    &info,
                    config.s,
                    config.seed,
                    providers,
                    lexicon,
                )?,
                Scope::Syntax | Scope::Format => code_perturb::sample_set_code(
                    problem,
                    info.scope,
                    &info,
                    config.s,
                    config.seed,
                    providers,
                )?,
                _ => unreachable!("registry only holds perturbation scopes"),
            };
            by_file
                .entry(lang_dir.join(info.scope.as_str()).join(format!("{}.jsonl", info.id)))
                .or_default()
                .extend(samples);
        }
    }

    for (path, records) in &by_file {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, corpus::write_jsonl(records))?;
    }

    write_quality_report(config, providers, &problems, &by_file, &stage)?;
    write_manifest(config, &stage)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QualityRow {
    pub language: LanguageId,
    pub scope: Scope,
    pub strategy: String,
    pub samples: usize,
    pub mean_token_similarity: f64,
    pub gate_pass_rate: f64,
    pub epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_embedding_similarity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_ast_syntax_match: Option<f64>,
}

/// Per-strategy quality gates over the generated prompt set. Embedding
/// similarity is included when an embedder (live or replay cache) is
/// available; syntax/format strategies get the AST syntax match.
fn write_quality_report(
    config: &RunConfig,
    providers: &ProviderSet,
    problems: &[Problem],
    by_file: &BTreeMap<PathBuf, Vec<PerturbedPrompt>>,
    stage: &Path,
) -> Result<(), PipelineError> {
    let cache = match &config.embedding_cache {
        Some(path) => Some(EmbeddingCache::open(path)?),
        None => None,
    };
    let cached_embedder = cache.as_ref().map(|c| {
        CachedEmbedder::new(
            c,
            providers.embedder().map(|e| e.as_ref()),
            "mpnet-base-v2",
        )
    });
    let embedder: Option<&dyn crate::providers::Embedder> = match (&cached_embedder, providers.embedder()) {
        (Some(cached), _) => Some(cached),
        (None, Some(live)) => Some(live.as_ref()),
        (None, None) => None,
    };

    let problem_index: BTreeMap<(LanguageId, &str), &Problem> = problems
        .iter()
        .map(|p| ((p.language, p.id.as_str()), p))
        .collect();

    let mut grouped: BTreeMap<(LanguageId, Scope, &str), Vec<&PerturbedPrompt>> = BTreeMap::new();
    for records in by_file.values() {
        for r in records {
            if matches!(r.scope, Scope::Nominal | Scope::Partial) {
                continue;
            }
            grouped
                .entry((r.language, r.scope, r.strategy.as_str()))
                .or_default()
                .push(r);
        }
    }

    let mut rows = Vec::new();
    for ((language, scope, strategy_id), prompts) in grouped {
        let epsilon = config.epsilon_for(scope);
        let mut token_sims = Vec::new();
        let mut embed_sims = Vec::new();
        let mut ast_sims = Vec::new();
        let mut gate_passes = 0usize;

        for prompt in &prompts {
            let Some(problem) = problem_index.get(&(language, prompt.problem_id.as_str())) else {
                continue;
            };
            let (nominal_text, perturbed_unit, nominal_unit) = reference_texts(problem, prompt)?;
            let (_, token_score) = quality::gate(
                &prompt.text,
                &nominal_text,
                epsilon.min(0.999),
                SimilarityMethod::Token,
                language,
                None,
            )?;
            token_sims.push(token_score.value);

            match scope {
                Scope::Docstring | Scope::Function => {
                    if let Some(embedder) = embedder {
                        let score =
                            quality::embedding_similarity(&perturbed_unit, &nominal_unit, embedder)?;
                        embed_sims.push(score.value);
                        if score.value >= epsilon {
                            gate_passes += 1;
                        }
                    } else if token_score.value >= epsilon {
                        gate_passes += 1;
                    }
                }
                _ => {
                    let score = quality::ast_syntax_match(&nominal_text, &prompt.text, language)?;
                    ast_sims.push(score.value);
                    if score.value >= epsilon {
                        gate_passes += 1;
                    }
                }
            }
        }

        let mean = |v: &[f64]| -> Option<f64> {
            if v.is_empty() {
                None
            } else {
                Some(v.iter().sum::<f64>() / v.len() as f64)
            }
        };
        rows.push(QualityRow {
            language,
            scope,
            strategy: strategy_id.to_string(),
            samples: prompts.len(),
            mean_token_similarity: mean(&token_sims).unwrap_or(1.0),
            gate_pass_rate: if prompts.is_empty() {
                1.0
            } else {
                gate_passes as f64 / prompts.len() as f64
            },
            epsilon,
            mean_embedding_similarity: mean(&embed_sims),
            mean_ast_syntax_match: mean(&ast_sims),
        });
    }

    std::fs::write(
        stage.join("quality_report.json"),
        serde_json::to_string_pretty(&rows).expect("rows serialize"),
    )?;
    Ok(())
}

/// For a perturbed prompt, the nominal text to compare against plus the
/// scope-specific comparison unit (docstring text or function name word
/// list for NL scopes; full texts otherwise).
fn reference_texts(
    problem: &Problem,
    prompt: &PerturbedPrompt,
) -> Result<(String, String, String), PipelineError> {
    let nominal_text = match prompt.scope {
        Scope::Syntax | Scope::Format => code_perturb::build_partial_prompt(problem)?.text(),
        _ => problem.prompt_text(),
    };
    match prompt.scope {
        Scope::Docstring => {
            let nominal =
                crate::langkit::decompose_prompt(&nominal_text, problem.language, Some(&problem.entry_point))
                    .map(|p| p.doc.nl_text())
                    .unwrap_or_default();
            let entry = prompt
                .rename
                .as_ref()
                .map(|(_, new)| new.as_str())
                .unwrap_or(problem.entry_point.as_str());
            let perturbed = crate::langkit::decompose_prompt(&prompt.text, problem.language, Some(entry))
                .map(|p| p.doc.nl_text())
                .unwrap_or_default();
            Ok((nominal_text, perturbed, nominal))
        }
        Scope::Function => {
            let new_name = prompt
                .rename
                .as_ref()
                .map(|(_, new)| new.as_str())
                .unwrap_or(problem.entry_point.as_str());
            Ok((
                nominal_text,
                quality::function_name_embedding_text(new_name),
                quality::function_name_embedding_text(&problem.entry_point),
            ))
        }
        _ => Ok((nominal_text.clone(), prompt.text.clone(), nominal_text)),
    }
}

// ---------------------------------------------------------------------
// evaluate stage
// ---------------------------------------------------------------------

/// Read the perturb stage, drive the generation client for every prompt
/// (k = 1), execute everything, and write `records.jsonl`.
pub fn cmd_evaluate(config: &RunConfig, client: &dyn GenClient) -> Result<(), PipelineError> {
    config.validate()?;
    let perturb_dir = config.stage_dir("perturb");
    if !perturb_dir.is_dir() {
        return Err(PipelineError::MissingStageInput {
            stage: "evaluate",
            path: perturb_dir,
        });
    }
    let problems = config.load_problems()?;
    let prompts = read_perturbed_prompts(&perturb_dir)?;

    let mut by_problem: BTreeMap<(LanguageId, String), Vec<PerturbedPrompt>> = BTreeMap::new();
    for p in prompts {
        by_problem
            .entry((p.language, p.problem_id.clone()))
            .or_default()
            .push(p);
    }

    let mut records: Vec<GenerationRecord> = Vec::new();
    for problem in &problems {
        let Some(variants) = by_problem.get(&(problem.language, problem.id.clone())) else {
            continue;
        };
        let evaluated = runner::evaluate_variants(
            problem,
            variants,
            client,
            &config.gen_params,
            &config.limits,
        )?;
        records.extend(evaluated);
    }
    records.sort_by(|a, b| {
        (a.language, &a.problem_id, &a.strategy, a.sample_index).cmp(&(
            b.language,
            &b.problem_id,
            &b.strategy,
            b.sample_index,
        ))
    });

    let stage = config.stage_dir("evaluate");
    std::fs::create_dir_all(&stage)?;
    std::fs::write(stage.join("records.jsonl"), corpus::write_jsonl(&records))?;
    write_manifest(config, &stage)?;
    Ok(())
}

pub fn read_perturbed_prompts(perturb_dir: &Path) -> Result<Vec<PerturbedPrompt>, PipelineError> {
    let mut out = Vec::new();
    let mut stack = vec![perturb_dir.to_path_buf()];
    while let Some(dir) = stack.pop() {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(&dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<Result<_, _>>()?;
        entries.sort();
        for entry in entries {
            if entry.is_dir() {
                stack.push(entry);
            } else if entry.extension().map(|e| e == "jsonl").unwrap_or(false) {
                let content = std::fs::read_to_string(&entry)?;
                out.extend(corpus::parse_jsonl::<PerturbedPrompt>(&content)?);
            }
        }
    }
    Ok(out)
}

pub fn read_records(config: &RunConfig, stage: &'static str) -> Result<Vec<GenerationRecord>, PipelineError> {
    let path = config.stage_dir("evaluate").join("records.jsonl");
    if !path.is_file() {
        return Err(PipelineError::MissingStageInput { stage, path });
    }
    let content = std::fs::read_to_string(&path)?;
    Ok(corpus::parse_jsonl(&content)?)
}

// ---------------------------------------------------------------------
// metrics stage
// ---------------------------------------------------------------------

/// Group records into per-(language, scope) pass matrices with the
/// scope-appropriate baseline.
pub fn build_matrices(
    records: &[GenerationRecord],
    s: u32,
) -> Result<BTreeMap<(LanguageId, Scope), PassMatrix>, PipelineError> {
    let mut baselines: BTreeMap<(LanguageId, String, Scope), bool> = BTreeMap::new();
    for r in records {
        if let Some(scope) = strategy::scope_of(&r.strategy) {
            if matches!(scope, Scope::Nominal | Scope::Partial) {
                baselines.insert(
                    (r.language, r.problem_id.clone(), scope),
                    r.outcome.passed(),
                );
            }
        }
    }

    let mut grouped: BTreeMap<(LanguageId, Scope, String, String), Vec<&GenerationRecord>> =
        BTreeMap::new();
    for r in records {
        if matches!(r.scope, Scope::Nominal | Scope::Partial) {
            continue;
        }
        grouped
            .entry((r.language, r.scope, r.problem_id.clone(), r.strategy.clone()))
            .or_default()
            .push(r);
    }

    let mut matrices: BTreeMap<(LanguageId, Scope), PassMatrix> = BTreeMap::new();
    for ((language, scope, problem_id, strategy_id), mut rows) in grouped {
        rows.sort_by_key(|r| r.sample_index);
        let baseline_scope = scope.baseline();
        let nominal_pass = baselines
            .get(&(language, problem_id.clone(), baseline_scope))
            .copied()
            .unwrap_or(false);
        let samples: Vec<bool> = rows.iter().map(|r| r.outcome.passed()).collect();
        matrices
            .entry((language, scope))
            .or_insert_with(|| PassMatrix::new(s as usize))
            .insert(
                &problem_id,
                &strategy_id,
                Row {
                    nominal_pass,
                    samples,
                },
            )?;
    }
    Ok(matrices)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsReportRow {
    pub language: LanguageId,
    pub scope: Scope,
    #[serde(flatten)]
    pub metrics: StrategyMetrics,
}

/// Compute RP/RD/RR per strategy under both aggregation modes and write
/// `metrics.json` + `metrics.csv`.
pub fn cmd_metrics(config: &RunConfig) -> Result<Vec<MetricsReportRow>, PipelineError> {
    config.validate()?;
    let records = read_records(config, "metrics")?;
    let matrices = build_matrices(&records, config.s)?;

    let mut rows: Vec<MetricsReportRow> = Vec::new();
    for ((language, scope), matrix) in &matrices {
        for mode in [
            AggregationMode::WorstCase,
            AggregationMode::PartialCase { t: config.t },
        ] {
            for m in metrics::summarize(matrix, mode)? {
                rows.push(MetricsReportRow {
                    language: *language,
                    scope: *scope,
                    metrics: m,
                });
            }
        }
    }

    let stage = config.stage_dir("metrics");
    std::fs::create_dir_all(&stage)?;
    std::fs::write(
        stage.join("metrics.json"),
        serde_json::to_string_pretty(&rows).expect("rows serialize"),
    )?;

    let mut csv_out = String::from("language,scope,strategy,mode,nominal,rp,rd,rr\n");
    for row in &rows {
        csv_out.push_str(&format!(
            "{},{},{},{},{:.6},{:.6},{},{:.6}\n",
            row.language,
            row.scope,
            row.metrics.strategy,
            row.metrics.mode,
            row.metrics.nominal,
            row.metrics.rp,
            row.metrics
                .rd
                .map(|v| format!("{v:.6}"))
                .unwrap_or_else(|| "n/a".to_string()),
            row.metrics.rr,
        ));
    }
    std::fs::write(stage.join("metrics.csv"), csv_out)?;
    write_manifest(config, &stage)?;
    Ok(rows)
}

// ---------------------------------------------------------------------
// analyze stage
// ---------------------------------------------------------------------

/// RQ2 diagnostics: 18 features per sample, impact matrices per
/// perturbation family, Fisher's exact tests, and the report files.
pub fn cmd_analyze(config: &RunConfig) -> Result<BTreeMap<String, ImpactMatrix>, PipelineError> {
    config.validate()?;
    let records = read_records(config, "analyze")?;
    let perturb_dir = config.stage_dir("perturb");
    if !perturb_dir.is_dir() {
        return Err(PipelineError::MissingStageInput {
            stage: "analyze",
            path: perturb_dir,
        });
    }
    let problems = config.load_problems()?;
    let prompts = read_perturbed_prompts(&perturb_dir)?;

    let problem_index: BTreeMap<(LanguageId, String), &Problem> = problems
        .iter()
        .map(|p| ((p.language, p.id.clone()), p))
        .collect();
    let prompt_index: BTreeMap<(LanguageId, String, String, u32), &PerturbedPrompt> = prompts
        .iter()
        .map(|p| {
            (
                (p.language, p.problem_id.clone(), p.strategy.clone(), p.sample_index),
                p,
            )
        })
        .collect();
    let baseline_records: BTreeMap<(LanguageId, String, Scope), &GenerationRecord> = records
        .iter()
        .filter(|r| matches!(r.scope, Scope::Nominal | Scope::Partial))
        .map(|r| ((r.language, r.problem_id.clone(), r.scope), r))
        .collect();

    // Scoped to samples whose nominal generation passed; grouped per
    // (family, language).
    let mut samples: BTreeMap<(Scope, LanguageId), Vec<LabeledSample>> = BTreeMap::new();
    let mut fisher_tables: BTreeMap<(Scope, LanguageId), [[u64; 2]; 2]> = BTreeMap::new();

    for record in &records {
        if matches!(record.scope, Scope::Nominal | Scope::Partial) {
            continue;
        }
        let key = (record.language, record.problem_id.clone(), record.scope.baseline());
        let Some(nominal_record) = baseline_records.get(&key) else {
            continue;
        };
        let Some(problem) = problem_index.get(&(record.language, record.problem_id.clone()))
        else {
            continue;
        };

        // Fisher tables count every sample by (nominal, perturbed) status.
        let table = fisher_tables
            .entry((record.scope, record.language))
            .or_insert([[0, 0], [0, 0]]);
        let i = usize::from(!nominal_record.outcome.passed());
        let j = usize::from(!record.outcome.passed());
        table[i][j] += 1;

        if !nominal_record.outcome.passed() {
            continue;
        }
        let Some(prompt) = prompt_index.get(&(
            record.language,
            record.problem_id.clone(),
            record.strategy.clone(),
            record.sample_index,
        )) else {
            continue;
        };

        let nominal_text = match record.scope.baseline() {
            Scope::Partial => code_perturb::build_partial_prompt(problem)?.text(),
            _ => problem.prompt_text(),
        };
        let pair = PromptPair::from_texts(
            &nominal_text,
            &prompt.text,
            record.language,
            &problem.entry_point,
            prompt.rename.as_ref(),
        );
        let features = analysis::extract_features(nominal_record, record, problem, &pair);
        samples
            .entry((record.scope, record.language))
            .or_default()
            .push(LabeledSample {
                features,
                failed: !record.outcome.passed(),
            });
    }

    let mut by_family: BTreeMap<String, ImpactMatrix> = BTreeMap::new();
    for ((scope, language), language_samples) in &samples {
        let (fr, _) = analysis::failure_rate(language_samples);
        let cells = match analysis::impact_scores(language_samples, fr) {
            Ok(cells) => cells,
            Err(analysis::AnalysisError::InsufficientData(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        by_family
            .entry(scope.to_string())
            .or_default()
            .insert_language(*language, fr, cells);
    }

    let stage = config.stage_dir("analyze");
    std::fs::create_dir_all(&stage)?;
    analysis::export_reports(&by_family, &stage)?;

    let mut fisher_csv = String::from("scope,language,n_pass_p_pass,n_pass_p_fail,n_fail_p_pass,n_fail_p_fail,p_value\n");
    for ((scope, language), table) in &fisher_tables {
        let p = analysis::fisher_exact(*table);
        fisher_csv.push_str(&format!(
            "{},{},{},{},{},{},{:.6}\n",
            scope, language, table[0][0], table[0][1], table[1][0], table[1][1], p
        ));
    }
    std::fs::write(stage.join("fisher.csv"), fisher_csv)?;
    write_manifest(config, &stage)?;
    Ok(by_family)
}

// ---------------------------------------------------------------------
// repair stage
// ---------------------------------------------------------------------

/// Repair every docstring-scope prompt, regenerate code from the
/// repaired prompts, and write the delta report.
pub fn cmd_repair(
    config: &RunConfig,
    fix_client: &dyn GenClient,
    gen_client: &dyn GenClient,
) -> Result<Vec<repair::RepairSummary>, PipelineError> {
    config.validate()?;
    let perturb_dir = config.stage_dir("perturb");
    if !perturb_dir.is_dir() {
        return Err(PipelineError::MissingStageInput {
            stage: "repair",
            path: perturb_dir,
        });
    }
    let records = read_records(config, "repair")?;
    let problems = config.load_problems()?;
    let prompts = read_perturbed_prompts(&perturb_dir)?;

    let docstring_prompts: Vec<&PerturbedPrompt> = prompts
        .iter()
        .filter(|p| p.scope == Scope::Docstring)
        .collect();

    // Repair prompts first.
    let mut repaired_prompts: Vec<PerturbedPrompt> = Vec::new();
    for prompt in &docstring_prompts {
        let mut repaired = repair::repair_prompt(prompt, fix_client, &config.gen_params)?;
        // Keep the original strategy key for alignment; record the suffix
        // in flags-compatible strategy naming instead.
        repaired.strategy = prompt.strategy.clone();
        repaired_prompts.push(repaired);
    }

    // Regenerate and execute from repaired prompts.
    let mut by_problem: BTreeMap<(LanguageId, String), Vec<PerturbedPrompt>> = BTreeMap::new();
    for p in &repaired_prompts {
        by_problem
            .entry((p.language, p.problem_id.clone()))
            .or_default()
            .push(p.clone());
    }
    let mut repaired_records: Vec<GenerationRecord> = Vec::new();
    for problem in &problems {
        if let Some(variants) = by_problem.get(&(problem.language, problem.id.clone())) {
            repaired_records.extend(runner::evaluate_variants(
                problem,
                variants,
                gen_client,
                &config.gen_params,
                &config.limits,
            )?);
        }
    }
    repaired_records.sort_by(|a, b| {
        (a.language, &a.problem_id, &a.strategy, a.sample_index).cmp(&(
            b.language,
            &b.problem_id,
            &b.strategy,
            b.sample_index,
        ))
    });

    // Align and compare.
    let keyed = |r: &GenerationRecord| (r.problem_id.clone(), r.strategy.clone(), r.sample_index);
    let perturbed_outcomes: BTreeMap<repair::SampleKey, runner::Outcome> = records
        .iter()
        .filter(|r| r.scope == Scope::Docstring)
        .map(|r| (keyed(r), r.outcome.clone()))
        .collect();
    let repaired_outcomes: BTreeMap<repair::SampleKey, runner::Outcome> = repaired_records
        .iter()
        .map(|r| (keyed(r), r.outcome.clone()))
        .collect();
    let summaries = repair::compare_repair(&perturbed_outcomes, &repaired_outcomes)?;

    let nominal_rate = {
        let nominal: Vec<&GenerationRecord> = records
            .iter()
            .filter(|r| r.scope == Scope::Nominal)
            .collect();
        if nominal.is_empty() {
            0.0
        } else {
            nominal.iter().filter(|r| r.outcome.passed()).count() as f64 / nominal.len() as f64
        }
    };

    let stage = config.stage_dir("repair");
    std::fs::create_dir_all(&stage)?;
    std::fs::write(
        stage.join("repaired_prompts.jsonl"),
        corpus::write_jsonl(&repaired_prompts),
    )?;
    std::fs::write(
        stage.join("repaired_records.jsonl"),
        corpus::write_jsonl(&repaired_records),
    )?;
    repair::write_repair_csv(&summaries, nominal_rate, &stage.join("repair_deltas.csv"))?;
    write_manifest(config, &stage)?;
    Ok(summaries)
}

// ---------------------------------------------------------------------
// selftest stage
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelfTestRow {
    pub problem_id: String,
    pub language: LanguageId,
    pub outcome: runner::Outcome,
}

/// Run every problem's canonical program against its own test suite.
pub fn cmd_selftest(config: &RunConfig) -> Result<Vec<SelfTestRow>, PipelineError> {
    config.validate()?;
    let problems = config.load_problems()?;
    let results = runner::self_test_corpus(&problems, &config.limits)?;
    let rows: Vec<SelfTestRow> = results
        .into_iter()
        .map(|(problem_id, language, outcome)| SelfTestRow {
            problem_id,
            language,
            outcome,
        })
        .collect();
    let stage = config.stage_dir("selftest");
    std::fs::create_dir_all(&stage)?;
    std::fs::write(
        stage.join("report.json"),
        serde_json::to_string_pretty(&rows).expect("rows serialize"),
    )?;
    write_manifest(config, &stage)?;
    Ok(rows)
}

// ---------------------------------------------------------------------
// report stage
// ---------------------------------------------------------------------

/// Human-readable digest of the metrics stage.
pub fn cmd_report(config: &RunConfig) -> Result<String, PipelineError> {
    let path = config.stage_dir("metrics").join("metrics.json");
    if !path.is_file() {
        return Err(PipelineError::MissingStageInput {
            stage: "report",
            path,
        });
    }
    let rows: Vec<MetricsReportRow> = serde_json::from_str(&std::fs::read_to_string(&path)?)
        .map_err(|e| PipelineError::Config(format!("metrics.json unreadable: {e}")))?;

    let mut out = String::from("language scope strategy mode nominal rp rd rr\n");
    for row in &rows {
        out.push_str(&format!(
            "{} {} {} {} {:.2} {:.2} {} {:.2}\n",
            row.language,
            row.scope,
            row.metrics.strategy,
            row.metrics.mode,
            metrics::round_half_even(row.metrics.nominal, 2),
            metrics::round_half_even(row.metrics.rp, 2),
            row.metrics
                .rd
                .map(|v| format!("{:.2}", metrics::round_half_even(v, 2)))
                .unwrap_or_else(|| "n/a".to_string()),
            metrics::round_half_even(row.metrics.rr, 2),
        ));
    }
    let stage = config.stage_dir("report");
    std::fs::create_dir_all(&stage)?;
    std::fs::write(stage.join("summary.txt"), &out)?;
    write_manifest(config, &stage)?;
    Ok(out)
}

/// Install a rayon pool of the configured width for the duration of `f`.
pub fn with_worker_pool<T>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    match jobs {
        Some(width) => rayon::ThreadPoolBuilder::new()
            .num_threads(width)
            .build()
            .expect("worker pool builds")
            .install(f),
        None => f(),
    }
}
