//! Docstring repair: send a perturbed docstring through a fix prompt,
//! reintegrate the response, and categorize the outcome deltas.

use crate::corpus::PerturbedPrompt;
use crate::langkit::decompose_prompt;
use crate::runner::{GenClient, GenParams, Outcome, RunnerError};
use crate::strategy::Scope;
use regex::Regex;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepairError {
    #[error("repair applies to docstring-scope prompts, got {0}")]
    WrongScope(Scope),
    #[error(transparent)]
    Decompose(#[from] crate::langkit::DecomposeError),
    #[error(transparent)]
    Endpoint(#[from] RunnerError),
    #[error("outcome sets are misaligned: {0}")]
    MisalignedSets(String),
}

/// Flag recorded when the repair response was blank and the original
/// docstring was kept.
pub const FLAG_EMPTY_REPAIR: &str = "empty_repair";
/// Flag recorded when the repaired text is much longer than the input.
pub const FLAG_LENGTH_RATIO: &str = "length_ratio_exceeded";

/// The verbatim fix-prompt template.
pub fn build_fix_prompt(docstring: &str) -> String {
    format!(
        "fix the grammatical errors, spelling, and typos in the following text and reply with the fixed text. Do not delete any information, and do not add any code snippets.\n\nText: {docstring}\n\nFixed Text:"
    )
}

/// Repair one docstring-scope prompt: extract the docstring, ask the
/// client to fix it, strip any fenced code, and splice the result back.
/// The code regions stay byte-identical.
pub fn repair_prompt(
    perturbed: &PerturbedPrompt,
    client: &dyn GenClient,
    params: &GenParams,
) -> Result<PerturbedPrompt, RepairError> {
    if perturbed.scope != Scope::Docstring {
        return Err(RepairError::WrongScope(perturbed.scope));
    }
    let parts = decompose_prompt(&perturbed.text, perturbed.language, None)?;

    let fix_request = PerturbedPrompt {
        strategy: format!("{}+fix-request", perturbed.strategy),
        text: build_fix_prompt(&parts.doc.text),
        ..perturbed.clone()
    };
    let response = client.complete(&fix_request, params)?;
    let mut flags = perturbed.flags.clone();

    // Keep the docstring's whitespace frame (indentation before the
    // closing delimiter and the like); clean only the content.
    let original = parts.doc.text.as_str();
    let content_start = original.len() - original.trim_start().len();
    let content_end = original.trim_end().len();
    let (prefix, suffix) = (&original[..content_start], &original[content_end.max(content_start)..]);
    let original_content = original.trim();

    let cleaned = clean_repair_response(&response, original_content);
    let repaired_text = match cleaned {
        Some(content) => {
            if content.len() > 2 * original_content.len().max(1) {
                flags.push(FLAG_LENGTH_RATIO.to_string());
            }
            format!("{prefix}{content}{suffix}")
        }
        None => {
            flags.push(FLAG_EMPTY_REPAIR.to_string());
            parts.doc.text.clone()
        }
    };

    let mut repaired_parts = parts.clone();
    repaired_parts.doc = parts.doc.with_text(&repaired_text);
    Ok(PerturbedPrompt {
        strategy: format!("{}+fixed", perturbed.strategy),
        text: repaired_parts.join(),
        flags,
        ..perturbed.clone()
    })
}

/// Strip fenced code blocks ("do not add any code snippets" is enforced
/// client-side) and trailing commentary paragraphs appended after a
/// single-paragraph fix. Returns the trimmed content; None when blank.
fn clean_repair_response(response: &str, original_content: &str) -> Option<String> {
    let fence = Regex::new(r"(?s)```.*?(```|$)").expect("valid regex");
    let without_fences = fence.replace_all(response, "").into_owned();
    let mut text = without_fences.trim().to_string();
    if !original_content.contains("\n\n") {
        if let Some(pos) = text.find("\n\n") {
            text.truncate(pos);
        }
    }
    let text = text.trim().to_string();
    if text.is_empty() {
        None
    } else {
        Some(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepairDelta {
    AlreadyPassed,
    NewlyFixed,
    NewlyFailed,
    StillFailed,
}

impl RepairDelta {
    pub fn categorize(perturbed: &Outcome, repaired: &Outcome) -> RepairDelta {
        match (perturbed.passed(), repaired.passed()) {
            (true, true) => RepairDelta::AlreadyPassed,
            (false, true) => RepairDelta::NewlyFixed,
            (true, false) => RepairDelta::NewlyFailed,
            (false, false) => RepairDelta::StillFailed,
        }
    }
}

/// Per-strategy delta counts plus pass rates.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RepairSummary {
    pub strategy: String,
    pub already_passed: usize,
    pub newly_fixed: usize,
    pub newly_failed: usize,
    pub still_failed: usize,
    pub perturbed_rate: f64,
    pub fixed_rate: f64,
}

impl RepairSummary {
    pub fn total(&self) -> usize {
        self.already_passed + self.newly_fixed + self.newly_failed + self.still_failed
    }
}

pub type SampleKey = (String, String, u32);

/// Compare aligned outcome sets. Keys are (problem, strategy,
/// sample_index); both maps must cover exactly the same keys.
pub fn compare_repair(
    perturbed_outcomes: &BTreeMap<SampleKey, Outcome>,
    repaired_outcomes: &BTreeMap<SampleKey, Outcome>,
) -> Result<Vec<RepairSummary>, RepairError> {
    if perturbed_outcomes.len() != repaired_outcomes.len() {
        return Err(RepairError::MisalignedSets(format!(
            "{} perturbed vs {} repaired samples",
            perturbed_outcomes.len(),
            repaired_outcomes.len()
        )));
    }
    let mut summaries: BTreeMap<String, RepairSummary> = BTreeMap::new();
    for (key, perturbed) in perturbed_outcomes {
        let repaired = repaired_outcomes
            .get(key)
            .ok_or_else(|| RepairError::MisalignedSets(format!("missing repaired {key:?}")))?;
        let entry = summaries.entry(key.1.clone()).or_insert_with(|| RepairSummary {
            strategy: key.1.clone(),
            ..RepairSummary::default()
        });
        match RepairDelta::categorize(perturbed, repaired) {
            RepairDelta::AlreadyPassed => entry.already_passed += 1,
            RepairDelta::NewlyFixed => entry.newly_fixed += 1,
            RepairDelta::NewlyFailed => entry.newly_failed += 1,
            RepairDelta::StillFailed => entry.still_failed += 1,
        }
    }
    let mut out: Vec<RepairSummary> = summaries.into_values().collect();
    for s in &mut out {
        let total = s.total().max(1) as f64;
        s.perturbed_rate = (s.already_passed + s.newly_failed) as f64 / total;
        s.fixed_rate = (s.already_passed + s.newly_fixed) as f64 / total;
    }
    Ok(out)
}

/// CSV export: strategy, category counts, and rates.
pub fn write_repair_csv(
    summaries: &[RepairSummary],
    nominal_rate: f64,
    path: &std::path::Path,
) -> Result<(), std::io::Error> {
    let mut out = String::from(
        "strategy,already_passed,newly_fixed,newly_failed,still_failed,nominal_rate,perturbed_rate,fixed_rate\n",
    );
    for s in summaries {
        out.push_str(&format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6}\n",
            s.strategy,
            s.already_passed,
            s.newly_fixed,
            s.newly_failed,
            s.still_failed,
            nominal_rate,
            s.perturbed_rate,
            s.fixed_rate
        ));
    }
    std::fs::write(path, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langkit::LanguageId;
    use crate::runner::OutcomeKind;

    struct EchoFix;
    impl GenClient for EchoFix {
        fn complete(&self, p: &PerturbedPrompt, _: &GenParams) -> Result<String, RunnerError> {
            // Echo back exactly the text between "Text: " and "\n\nFixed Text:".
            let start = p.text.find("Text: ").expect("template") + "Text: ".len();
            let end = p.text.rfind("\n\nFixed Text:").expect("template");
            Ok(p.text[start..end].to_string())
        }
        fn model_id(&self) -> String {
            "echo-fix".into()
        }
    }

    fn perturbed_prompt() -> PerturbedPrompt {
        PerturbedPrompt {
            problem_id: "p".into(),
            language: LanguageId::JavaScript,
            scope: Scope::Docstring,
            strategy: "ButterFingers".into(),
            sample_index: 0,
            text: "/*\n  Filher an input list of strings.\n  */\nfunction filterByPrefix(strings, prefix) {\n".into(),
            rename: None,
            flags: Vec::new(),
        }
    }

    #[test]
    fn template_is_verbatim() {
        let prompt = build_fix_prompt("Filher an input list");
        assert!(prompt.starts_with("fix the grammatical errors, spelling, and typos"));
        assert!(prompt.contains("Text: Filher an input list\n\nFixed Text:"));
    }

    #[test]
    fn echo_client_round_trips_the_prompt() {
        let p = perturbed_prompt();
        let repaired = repair_prompt(&p, &EchoFix, &GenParams::default()).unwrap();
        assert_eq!(repaired.text, p.text);
        assert_eq!(repaired.strategy, "ButterFingers+fixed");
        assert!(repaired.flags.is_empty());
    }

    #[test]
    fn code_regions_stay_byte_identical() {
        struct RewriteFix;
        impl GenClient for RewriteFix {
            fn complete(&self, _: &PerturbedPrompt, _: &GenParams) -> Result<String, RunnerError> {
                Ok("  Filter an input list of strings.\n  ".to_string())
            }
            fn model_id(&self) -> String {
                "rewrite".into()
            }
        }
        let p = perturbed_prompt();
        let repaired = repair_prompt(&p, &RewriteFix, &GenParams::default()).unwrap();
        assert!(repaired.text.ends_with("function filterByPrefix(strings, prefix) {\n"));
        assert!(repaired.text.contains("Filter an input list"));
    }

    #[test]
    fn fenced_code_blocks_are_stripped() {
        struct CodeyFix;
        impl GenClient for CodeyFix {
            fn complete(&self, _: &PerturbedPrompt, _: &GenParams) -> Result<String, RunnerError> {
                Ok("Filter an input list of strings.```js\nfilter()\n``` more".to_string())
            }
            fn model_id(&self) -> String {
                "codey".into()
            }
        }
        let p = perturbed_prompt();
        let repaired = repair_prompt(&p, &CodeyFix, &GenParams::default()).unwrap();
        assert!(!repaired.text.contains("```"));
        assert!(!repaired.text.contains("filter()"));
    }

    #[test]
    fn blank_repair_keeps_original_with_flag() {
        struct BlankFix;
        impl GenClient for BlankFix {
            fn complete(&self, _: &PerturbedPrompt, _: &GenParams) -> Result<String, RunnerError> {
                Ok("   \n".to_string())
            }
            fn model_id(&self) -> String {
                "blank".into()
            }
        }
        let p = perturbed_prompt();
        let repaired = repair_prompt(&p, &BlankFix, &GenParams::default()).unwrap();
        assert_eq!(repaired.text, p.text);
        assert!(repaired.flags.contains(&FLAG_EMPTY_REPAIR.to_string()));
    }

    #[test]
    fn wrong_scope_is_rejected() {
        let mut p = perturbed_prompt();
        p.scope = Scope::Syntax;
        assert!(matches!(
            repair_prompt(&p, &EchoFix, &GenParams::default()),
            Err(RepairError::WrongScope(Scope::Syntax))
        ));
    }

    fn outcome(passed: bool) -> Outcome {
        if passed {
            Outcome::new(OutcomeKind::Passed, "")
        } else {
            Outcome::new(OutcomeKind::AssertionFailure, "boom")
        }
    }

    #[test]
    fn categories_partition_aligned_pairs() {
        let mut perturbed = BTreeMap::new();
        let mut repaired = BTreeMap::new();
        let states = [
            (true, true),
            (false, true),
            (true, false),
            (false, false),
            (false, true),
        ];
        for (i, (p, r)) in states.iter().enumerate() {
            let key = (format!("p{i}"), "S".to_string(), 0u32);
            perturbed.insert(key.clone(), outcome(*p));
            repaired.insert(key, outcome(*r));
        }
        let summary = compare_repair(&perturbed, &repaired).unwrap();
        assert_eq!(summary.len(), 1);
        let s = &summary[0];
        assert_eq!(s.already_passed, 1);
        assert_eq!(s.newly_fixed, 2);
        assert_eq!(s.newly_failed, 1);
        assert_eq!(s.still_failed, 1);
        assert_eq!(s.total(), states.len());
    }

    #[test]
    fn identical_outcomes_have_no_flips() {
        let mut perturbed = BTreeMap::new();
        for i in 0..4 {
            perturbed.insert((format!("p{i}"), "S".to_string(), 0u32), outcome(i % 2 == 0));
        }
        let summary = compare_repair(&perturbed, &perturbed.clone()).unwrap();
        assert_eq!(summary[0].newly_fixed, 0);
        assert_eq!(summary[0].newly_failed, 0);
    }

    #[test]
    fn misaligned_sets_rejected() {
        let mut perturbed = BTreeMap::new();
        perturbed.insert(("p".to_string(), "S".to_string(), 0u32), outcome(true));
        let repaired = BTreeMap::new();
        assert!(matches!(
            compare_repair(&perturbed, &repaired),
            Err(RepairError::MisalignedSets(_))
        ));
    }
}
