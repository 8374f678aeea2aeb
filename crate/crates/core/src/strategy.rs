//! The strategy registry: every perturbation strategy the toolkit knows,
//! keyed by a stable string id.
//!
//! 29 strategies in total: 10 docstring, 7 function-name (the case
//! conversion appears as two language-conditional variants), 6 syntax,
//! and 6 format. 28 apply to any given problem: a language gets exactly
//! one of the two case-conversion variants.

use crate::code_perturb::{FormatStrategy, SyntaxStrategy};
use crate::langkit::LanguageId;
use crate::nl_perturb::{FuncStrategy, NlStrategy};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Docstring,
    Function,
    Syntax,
    Format,
    Nominal,
    Partial,
}

impl Scope {
    pub const PERTURBATION_SCOPES: [Scope; 4] =
        [Scope::Docstring, Scope::Function, Scope::Syntax, Scope::Format];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scope::Docstring => "docstring",
            Scope::Function => "function",
            Scope::Syntax => "syntax",
            Scope::Format => "format",
            Scope::Nominal => "nominal",
            Scope::Partial => "partial",
        }
    }

    pub fn parse(s: &str) -> Option<Scope> {
        match s {
            "docstring" => Some(Scope::Docstring),
            "function" => Some(Scope::Function),
            "syntax" => Some(Scope::Syntax),
            "format" => Some(Scope::Format),
            "nominal" => Some(Scope::Nominal),
            "partial" => Some(Scope::Partial),
            _ => None,
        }
    }

    /// The baseline the scope's results are compared against.
    pub fn baseline(&self) -> Scope {
        match self {
            Scope::Syntax | Scope::Format => Scope::Partial,
            _ => Scope::Nominal,
        }
    }
}

impl std::fmt::Display for Scope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Docstring(NlStrategy),
    Function(FuncStrategy),
    Syntax(SyntaxStrategy),
    Format(FormatStrategy),
}

#[derive(Debug, Clone, Copy)]
pub struct StrategyInfo {
    pub id: &'static str,
    pub scope: Scope,
    pub kind: StrategyKind,
}

/// All 29 registered strategies.
pub fn registry() -> Vec<StrategyInfo> {
    let mut out = Vec::with_capacity(29);
    for s in NlStrategy::ALL {
        out.push(StrategyInfo {
            id: s.id(),
            scope: Scope::Docstring,
            kind: StrategyKind::Docstring(s),
        });
    }
    // CaseConvert registers under both of its language-conditional names.
    out.push(StrategyInfo {
        id: "FuncRenameSnakeCase",
        scope: Scope::Function,
        kind: StrategyKind::Function(FuncStrategy::CaseConvert),
    });
    out.push(StrategyInfo {
        id: "FuncRenameCamelCase",
        scope: Scope::Function,
        kind: StrategyKind::Function(FuncStrategy::CaseConvert),
    });
    for s in [
        FuncStrategy::ButterFinger,
        FuncStrategy::SwapChar,
        FuncStrategy::ChangeChar,
        FuncStrategy::InflectionalVariation,
        FuncStrategy::SynonymSub,
    ] {
        out.push(StrategyInfo {
            id: s.fixed_id(),
            scope: Scope::Function,
            kind: StrategyKind::Function(s),
        });
    }
    for s in SyntaxStrategy::ALL {
        out.push(StrategyInfo {
            id: s.id(),
            scope: Scope::Syntax,
            kind: StrategyKind::Syntax(s),
        });
    }
    for s in FormatStrategy::ALL {
        out.push(StrategyInfo {
            id: s.id(),
            scope: Scope::Format,
            kind: StrategyKind::Format(s),
        });
    }
    out
}

/// The case-conversion variant applied to a language: names in the
/// language's expected convention are converted to the opposite one.
pub fn case_convert_id(language: LanguageId) -> &'static str {
    match language {
        // Java and JavaScript names are camelCase, so they get SnakeCase.
        LanguageId::Java | LanguageId::JavaScript => "FuncRenameSnakeCase",
        // C++ names are snake_case, so they get CamelCase.
        LanguageId::Cpp => "FuncRenameCamelCase",
    }
}

/// The 28 strategies applied to problems of `language`.
pub fn applicable(language: LanguageId) -> Vec<StrategyInfo> {
    let keep_case_variant = case_convert_id(language);
    registry()
        .into_iter()
        .filter(|info| match info.kind {
            StrategyKind::Function(FuncStrategy::CaseConvert) => info.id == keep_case_variant,
            _ => true,
        })
        .collect()
}

pub fn find(id: &str) -> Option<StrategyInfo> {
    registry().into_iter().find(|s| s.id == id)
}

/// Scope of a strategy id, treating "nominal" and "partial" as their own
/// pseudo-strategies.
pub fn scope_of(id: &str) -> Option<Scope> {
    match id {
        "nominal" => Some(Scope::Nominal),
        "partial" => Some(Scope::Partial),
        _ => find(id).map(|s| s.scope),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn registry_has_29_distinct_strategies() {
        let all = registry();
        assert_eq!(all.len(), 29);
        let ids: BTreeSet<&str> = all.iter().map(|s| s.id).collect();
        assert_eq!(ids.len(), 29);
        assert_eq!(all.iter().filter(|s| s.scope == Scope::Docstring).count(), 10);
        assert_eq!(all.iter().filter(|s| s.scope == Scope::Function).count(), 7);
        assert_eq!(all.iter().filter(|s| s.scope == Scope::Syntax).count(), 6);
        assert_eq!(all.iter().filter(|s| s.scope == Scope::Format).count(), 6);
    }

    #[test]
    fn each_language_gets_28() {
        for lang in LanguageId::ALL {
            let strategies = applicable(lang);
            assert_eq!(strategies.len(), 28, "{lang}");
        }
    }

    #[test]
    fn case_variants_are_language_conditional() {
        assert_eq!(case_convert_id(LanguageId::Java), "FuncRenameSnakeCase");
        assert_eq!(case_convert_id(LanguageId::JavaScript), "FuncRenameSnakeCase");
        assert_eq!(case_convert_id(LanguageId::Cpp), "FuncRenameCamelCase");
        let java_ids: Vec<&str> = applicable(LanguageId::Java).iter().map(|s| s.id).collect();
        assert!(java_ids.contains(&"FuncRenameSnakeCase"));
        assert!(!java_ids.contains(&"FuncRenameCamelCase"));
    }
}
