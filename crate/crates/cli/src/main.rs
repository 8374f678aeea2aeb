//! perturbeval: multilingual robustness evaluation for code-generation
//! models.
//!
//! Subcommands mirror the pipeline stages: selftest, perturb, evaluate,
//! metrics, analyze, repair, report. Every stage reads the previous
//! stage's files under `--output-dir` and is independently re-runnable.

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use perturbeval::langkit::LanguageId;
use perturbeval::pipeline::{self, PipelineError, RunConfig};
use perturbeval::providers::ProviderSet;
use perturbeval::runner::{
    GenClient, HttpGenClient, RecordingClient, ReplayClient, ReplayLog, StubEchoClient,
};
use perturbeval::strategy::Scope;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_CONFIG: u8 = 2;
const EXIT_MISSING_INPUT: u8 = 3;
const EXIT_PROVIDER: u8 = 4;

#[derive(Parser)]
#[command(name = "perturbeval", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Corpus JSON-lines file.
    #[arg(long)]
    corpus: PathBuf,

    /// Directory for stage outputs.
    #[arg(long, default_value = "out")]
    output_dir: PathBuf,

    /// Languages to include.
    #[arg(long, value_delimiter = ',')]
    languages: Vec<String>,

    /// Perturbation scopes: docstring, function, syntax, format.
    #[arg(long, value_delimiter = ',')]
    scopes: Vec<String>,

    /// Strategy ids to include (default: all).
    #[arg(long, value_delimiter = ',')]
    strategies: Vec<String>,

    /// Samples per strategy.
    #[arg(long, default_value_t = 5)]
    samples: u32,

    /// Partial-case threshold t (of s samples).
    #[arg(long, default_value_t = 3)]
    threshold: usize,

    /// Base seed for all stochastic choices.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Worker pool width (default: logical CPU count).
    #[arg(long)]
    jobs: Option<usize>,

    /// Generation temperature.
    #[arg(long, default_value_t = 0.2)]
    temperature: f64,

    /// Nucleus sampling parameter.
    #[arg(long, default_value_t = 0.95)]
    top_p: f64,

    /// Maximum new tokens per generation.
    #[arg(long, default_value_t = 1536)]
    max_new_tokens: u32,

    /// Compile timeout in seconds.
    #[arg(long, default_value_t = 30)]
    compile_timeout: u64,

    /// Run timeout in seconds.
    #[arg(long, default_value_t = 10)]
    run_timeout: u64,

    /// Memory cap in MiB.
    #[arg(long, default_value_t = 512)]
    memory_cap_mib: u64,

    /// Similarity gate threshold for docstring perturbations.
    #[arg(long, default_value_t = 0.75)]
    epsilon_docstring: f64,

    /// Similarity gate threshold for function-name perturbations.
    #[arg(long, default_value_t = 0.60)]
    epsilon_function: f64,

    /// Similarity gate threshold for syntax/format perturbations.
    #[arg(long, default_value_t = 0.85)]
    epsilon_code: f64,

    /// Embedding replay cache file.
    #[arg(long)]
    embedding_cache: Option<PathBuf>,

    /// TOML config file; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct ClientArgs {
    /// Generation client: "http" (PERTURBEVAL_GEN_URL or --gen-url) or
    /// "stub-echo" (completes with canonical bodies).
    #[arg(long, default_value = "http")]
    client: String,

    /// Generation endpoint URL (overrides PERTURBEVAL_GEN_URL).
    #[arg(long)]
    gen_url: Option<String>,

    /// Record/replay log. With "http", responses are recorded here; with
    /// "replay", completions come exclusively from this log.
    #[arg(long)]
    replay_log: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    client: ClientArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Run every canonical solution against its own test suite.
    Selftest(CommonArgs),
    /// Generate all perturbed prompts plus nominal/partial baselines.
    Perturb(CommonArgs),
    /// Generate code for every prompt and execute it.
    Evaluate(EvalArgs),
    /// Compute RP/RD/RR from evaluation records.
    Metrics(CommonArgs),
    /// Feature extraction, impact scores, Fisher tests, heatmaps.
    Analyze(CommonArgs),
    /// Repair perturbed docstrings and re-evaluate.
    Repair(EvalArgs),
    /// Print and save a human-readable metrics digest.
    Report(CommonArgs),
}

fn build_config(args: &CommonArgs) -> anyhow::Result<RunConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let content = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            toml::from_str::<RunConfig>(&content).context("parsing config file")?
        }
        None => RunConfig::new(&args.corpus, &args.output_dir),
    };
    config.corpus_path = args.corpus.clone();
    config.output_dir = args.output_dir.clone();
    if !args.languages.is_empty() {
        config.languages = args
            .languages
            .iter()
            .map(|l| {
                LanguageId::parse(l).ok_or_else(|| anyhow::anyhow!("unknown language {l:?}"))
            })
            .collect::<anyhow::Result<_>>()?;
    }
    if !args.scopes.is_empty() {
        config.scopes = args
            .scopes
            .iter()
            .map(|s| Scope::parse(s).ok_or_else(|| anyhow::anyhow!("unknown scope {s:?}")))
            .collect::<anyhow::Result<_>>()?;
    }
    if !args.strategies.is_empty() {
        config.strategies = Some(args.strategies.clone());
    }
    config.s = args.samples;
    config.t = args.threshold;
    config.seed = args.seed;
    config.jobs = args.jobs;
    config.gen_params.temperature = args.temperature;
    config.gen_params.top_p = args.top_p;
    config.gen_params.max_new_tokens = args.max_new_tokens;
    config.limits.compile_timeout_secs = args.compile_timeout;
    config.limits.run_timeout_secs = args.run_timeout;
    config.limits.memory_cap_bytes = args.memory_cap_mib * 1024 * 1024;
    config.epsilon_docstring = args.epsilon_docstring;
    config.epsilon_function = args.epsilon_function;
    config.epsilon_code = args.epsilon_code;
    config.embedding_cache = args.embedding_cache.clone();
    Ok(config)
}

enum BuiltClient {
    Http(HttpGenClient),
    Stub(StubEchoClient),
    Replay(ReplayLog, String),
}

fn build_client(
    client_args: &ClientArgs,
    config: &RunConfig,
) -> anyhow::Result<(BuiltClient, Option<ReplayLog>)> {
    match client_args.client.as_str() {
        "stub-echo" => {
            let problems = config
                .load_problems()
                .map_err(|e| anyhow::anyhow!(e.to_string()))?;
            Ok((BuiltClient::Stub(StubEchoClient::new(&problems)), None))
        }
        "replay" => {
            let path = client_args
                .replay_log
                .clone()
                .ok_or_else(|| anyhow::anyhow!("--client replay requires --replay-log"))?;
            let log = ReplayLog::open(&path)?;
            Ok((BuiltClient::Replay(log, "replay".to_string()), None))
        }
        "http" => {
            let client = match &client_args.gen_url {
                Some(url) => HttpGenClient::new(url),
                None => HttpGenClient::from_env().ok_or_else(|| {
                    anyhow::anyhow!(
                        "no generation endpoint: set PERTURBEVAL_GEN_URL or pass --gen-url"
                    )
                })?,
            };
            let log = match &client_args.replay_log {
                Some(path) => Some(ReplayLog::open(path)?),
                None => None,
            };
            Ok((BuiltClient::Http(client), log))
        }
        other => anyhow::bail!("unknown client kind {other:?}"),
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if let Some(pipeline_err) = err.downcast_ref::<PipelineError>() {
        return match pipeline_err {
            PipelineError::Config(_) | PipelineError::Corpus(_) => EXIT_CONFIG,
            PipelineError::MissingStageInput { .. } => EXIT_MISSING_INPUT,
            PipelineError::Runner(r) => match r {
                perturbeval::runner::RunnerError::ToolchainMissing(_)
                | perturbeval::runner::RunnerError::Endpoint(_)
                | perturbeval::runner::RunnerError::Timeout
                | perturbeval::runner::RunnerError::ReplayMiss(_) => EXIT_PROVIDER,
                _ => 1,
            },
            PipelineError::Nl(perturbeval::nl_perturb::NlError::ProviderUnavailable { .. }) => {
                EXIT_PROVIDER
            }
            _ => 1,
        };
    }
    if err.to_string().contains("no generation endpoint") {
        return EXIT_PROVIDER;
    }
    EXIT_CONFIG
}

fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Selftest(common) => {
            let config = build_config(common)?;
            let rows = pipeline::with_worker_pool(config.jobs, || pipeline::cmd_selftest(&config))?;
            let mut failures = 0usize;
            for row in &rows {
                let status = if row.outcome.passed() { "PASS" } else { "FAIL" };
                println!("{status} {} {} {:?}", row.language, row.problem_id, row.outcome.kind);
                if !row.outcome.passed() {
                    failures += 1;
                }
            }
            println!("selftest: {}/{} passed", rows.len() - failures, rows.len());
            if failures > 0 {
                anyhow::bail!("{failures} corpus problems failed their own test suites");
            }
        }
        Command::Perturb(common) => {
            let config = build_config(common)?;
            let providers = ProviderSet::from_env();
            let manifest = pipeline::cmd_perturb(&config, &providers)?;
            println!(
                "perturb: wrote {} files under {}",
                manifest.files.len(),
                config.stage_dir("perturb").display()
            );
        }
        Command::Evaluate(args) => {
            let config = build_config(&args.common)?;
            let (built, log) = build_client(&args.client, &config)?;
            pipeline::with_worker_pool(config.jobs, || -> anyhow::Result<()> {
                match (&built, &log) {
                    (BuiltClient::Http(http), Some(log)) => {
                        let recording = RecordingClient::new(http, log);
                        pipeline::cmd_evaluate(&config, &recording)?;
                    }
                    (BuiltClient::Http(http), None) => pipeline::cmd_evaluate(&config, http)?,
                    (BuiltClient::Stub(stub), _) => pipeline::cmd_evaluate(&config, stub)?,
                    (BuiltClient::Replay(log, id), _) => {
                        let replay = ReplayClient::new(log, id);
                        pipeline::cmd_evaluate(&config, &replay)?;
                    }
                }
                Ok(())
            })?;
            println!(
                "evaluate: records at {}",
                config.stage_dir("evaluate").join("records.jsonl").display()
            );
        }
        Command::Metrics(common) => {
            let config = build_config(common)?;
            let rows = pipeline::cmd_metrics(&config)?;
            println!(
                "metrics: {} strategy rows at {}",
                rows.len(),
                config.stage_dir("metrics").display()
            );
        }
        Command::Analyze(common) => {
            let config = build_config(common)?;
            let families = pipeline::cmd_analyze(&config)?;
            println!(
                "analyze: {} impact matrices at {}",
                families.len(),
                config.stage_dir("analyze").display()
            );
        }
        Command::Repair(args) => {
            let config = build_config(&args.common)?;
            let (built, _log) = build_client(&args.client, &config)?;
            let fix_url = std::env::var("PERTURBEVAL_FIX_URL").ok();
            pipeline::with_worker_pool(config.jobs, || -> anyhow::Result<()> {
                let gen_client: &dyn GenClient = match &built {
                    BuiltClient::Http(http) => http,
                    BuiltClient::Stub(stub) => stub,
                    BuiltClient::Replay(_, _) => {
                        anyhow::bail!("repair regenerates live; use http or stub-echo")
                    }
                };
                // The repair client defaults to the generation endpoint.
                let fix_http = fix_url.as_deref().map(HttpGenClient::new);
                let fix_client: &dyn GenClient = match &fix_http {
                    Some(c) => c,
                    None => gen_client,
                };
                let summaries = pipeline::cmd_repair(&config, fix_client, gen_client)?;
                for s in &summaries {
                    println!(
                        "{}: already_passed={} newly_fixed={} newly_failed={} still_failed={}",
                        s.strategy, s.already_passed, s.newly_fixed, s.newly_failed, s.still_failed
                    );
                }
                Ok(())
            })?;
        }
        Command::Report(common) => {
            let config = build_config(common)?;
            let summary = pipeline::cmd_report(&config)?;
            print!("{summary}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
