//! Grammar-based source analysis for the three target languages:
//! prompt decomposition, tokenization, identifier conventions, keyword
//! blacklists, and structural metrics.

mod ast;
mod convention;
mod decompose;
mod lexer;
mod metrics;

pub use ast::{parse_tree, subtree_multiset, AstError};
pub use convention::{detect_convention, join_convention, split_identifier, NamingConvention};
pub use decompose::{decompose_prompt, DecomposeError, DocBlock, DocStyle, PromptParts};
pub use lexer::{token_texts, tokenize, tokenize_spanned, Token, TokenKind};
pub use metrics::{structural_metrics, StructuralMetrics};

use serde::{Deserialize, Serialize};
use std::fmt;

/// One of the three supported target languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LanguageId {
    Java,
    Cpp,
    JavaScript,
}

impl LanguageId {
    pub const ALL: [LanguageId; 3] = [LanguageId::Java, LanguageId::Cpp, LanguageId::JavaScript];

    pub fn as_str(&self) -> &'static str {
        match self {
            LanguageId::Java => "java",
            LanguageId::Cpp => "cpp",
            LanguageId::JavaScript => "javascript",
        }
    }

    pub fn parse(value: &str) -> Option<LanguageId> {
        match value {
            "java" => Some(LanguageId::Java),
            "cpp" => Some(LanguageId::Cpp),
            "javascript" => Some(LanguageId::JavaScript),
            _ => None,
        }
    }

    /// Reserved words of the language. Used both for blacklisting words in
    /// natural-language perturbation and for rejecting illegal identifiers.
    pub fn reserved_words(&self) -> &'static [&'static str] {
        match self {
            LanguageId::Java => JAVA_RESERVED,
            LanguageId::Cpp => CPP_RESERVED,
            LanguageId::JavaScript => JS_RESERVED,
        }
    }

    /// The convention function names are expected to follow in this language.
    pub fn expected_convention(&self) -> NamingConvention {
        match self {
            LanguageId::Java | LanguageId::JavaScript => NamingConvention::CamelCase,
            LanguageId::Cpp => NamingConvention::SnakeCase,
        }
    }
}

impl fmt::Display for LanguageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

static JAVA_RESERVED: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while", "true", "false", "null", "var", "record", "yield", "sealed",
];

static CPP_RESERVED: &[&str] = &[
    "alignas", "alignof", "and", "and_eq", "asm", "auto", "bitand", "bitor", "bool", "break",
    "case", "catch", "char", "char8_t", "char16_t", "char32_t", "class", "compl", "concept",
    "const", "consteval", "constexpr", "constinit", "const_cast", "continue", "co_await",
    "co_return", "co_yield", "decltype", "default", "delete", "do", "double", "dynamic_cast",
    "else", "enum", "explicit", "export", "extern", "false", "float", "for", "friend", "goto",
    "if", "inline", "int", "long", "mutable", "namespace", "new", "noexcept", "not", "not_eq",
    "nullptr", "operator", "or", "or_eq", "private", "protected", "public", "register",
    "reinterpret_cast", "requires", "return", "short", "signed", "sizeof", "static",
    "static_assert", "static_cast", "struct", "switch", "template", "this", "thread_local",
    "throw", "true", "try", "typedef", "typeid", "typename", "union", "unsigned", "using",
    "virtual", "void", "volatile", "wchar_t", "while", "xor", "xor_eq",
];

static JS_RESERVED: &[&str] = &[
    "await", "break", "case", "catch", "class", "const", "continue", "debugger", "default",
    "delete", "do", "else", "enum", "export", "extends", "false", "finally", "for", "function",
    "if", "import", "in", "instanceof", "let", "new", "null", "of", "return", "static", "super",
    "switch", "this", "throw", "true", "try", "typeof", "undefined", "var", "void", "while",
    "with", "yield",
];

/// Reserved words plus identifiers appearing in the prompt's code parts
/// (function names, variable names, types). Words in this set are exempt
/// from natural-language perturbation.
pub fn keyword_blacklist(language: LanguageId) -> std::collections::BTreeSet<String> {
    language
        .reserved_words()
        .iter()
        .map(|w| (*w).to_string())
        .collect()
}

/// Blacklist extended with every identifier token found in `code_parts`.
pub fn keyword_blacklist_for_prompt(
    language: LanguageId,
    code_parts: &[&str],
) -> std::collections::BTreeSet<String> {
    let mut set = keyword_blacklist(language);
    for part in code_parts {
        for token in tokenize(part, language) {
            if token.kind == TokenKind::Identifier {
                set.insert(token.text);
            }
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn language_parse_round_trip() {
        for lang in LanguageId::ALL {
            assert_eq!(LanguageId::parse(lang.as_str()), Some(lang));
        }
        assert_eq!(LanguageId::parse("python"), None);
    }

    #[test]
    fn blacklist_contains_reserved_words() {
        let java = keyword_blacklist(LanguageId::Java);
        assert!(java.contains("while"));
        assert!(java.contains("class"));
        assert!(java.contains("int"));
        let js = keyword_blacklist(LanguageId::JavaScript);
        assert!(js.contains("function"));
        assert!(js.contains("const"));
    }

    #[test]
    fn blacklist_picks_up_prompt_identifiers() {
        let set = keyword_blacklist_for_prompt(
            LanguageId::Java,
            &["String prefix = args[0];", "int count = 0;"],
        );
        assert!(set.contains("prefix"));
        assert!(set.contains("count"));
        assert!(set.contains("args"));
    }
}
