//! Multilingual robustness-evaluation toolkit for code-generation models.
//!
//! The toolkit perturbs prompts with semantic-preserving transformations
//! across Java, C++, and JavaScript, evaluates generated code in sandboxed
//! execution against test suites, and computes robustness metrics,
//! impact-score diagnostics, and docstring-repair deltas.

pub mod analysis;
pub mod code_perturb;
pub mod corpus;
pub mod langkit;
pub mod metrics;
pub mod nl_perturb;
pub mod pipeline;
pub mod providers;
pub mod quality;
pub mod repair;
pub mod runner;
pub mod seed;
pub mod strategy;
