//! Language-specific stop rules for raw completions.
//!
//! Java generations stop before a repeated `class Solution` container;
//! C++ and JavaScript stop before the second block-comment opener that
//! appears after the prompt region. The worst case returns the raw text
//! unchanged.

use crate::langkit::{tokenize_spanned, LanguageId, TokenKind};

pub fn postprocess(raw: &str, language: LanguageId, prompt_text: &str) -> String {
    match language {
        LanguageId::Java => truncate_java(raw, prompt_text),
        LanguageId::Cpp | LanguageId::JavaScript => truncate_at_second_comment_block(raw, language),
    }
}

/// Cut before the occurrence of `class Solution` that is the second one
/// of the whole stream (prompt + completion).
fn truncate_java(raw: &str, prompt_text: &str) -> String {
    let in_prompt = count_class_solution(prompt_text);
    let needed = 2usize.saturating_sub(in_prompt).max(1);
    let mut seen = 0usize;
    let tokens = tokenize_spanned(raw, LanguageId::Java);
    for pair in tokens.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.kind == TokenKind::Identifier
            && a.text == "class"
            && b.kind == TokenKind::Identifier
            && b.text == "Solution"
        {
            seen += 1;
            if seen == needed {
                return raw[..a.start].to_string();
            }
        }
    }
    raw.to_string()
}

fn count_class_solution(text: &str) -> usize {
    let tokens = tokenize_spanned(text, LanguageId::Java);
    tokens
        .windows(2)
        .filter(|pair| {
            pair[0].kind == TokenKind::Identifier
                && pair[0].text == "class"
                && pair[1].kind == TokenKind::Identifier
                && pair[1].text == "Solution"
        })
        .count()
}

/// The completion begins after the prompt, so "the second docstring or
/// comment block after the prompt region" is the second block-comment
/// opener within the raw completion itself.
fn truncate_at_second_comment_block(raw: &str, language: LanguageId) -> String {
    let tokens = tokenize_spanned(raw, language);
    let mut seen = 0usize;
    for t in &tokens {
        if t.kind == TokenKind::CommentDelim && t.text.starts_with("/*") {
            seen += 1;
            if seen == 2 {
                return raw[..t.start].to_string();
            }
        }
    }
    raw.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn java_truncates_at_repeated_solution_class() {
        let prompt = "import java.util.*;\n\nclass Solution {\n    public static int f() {\n";
        let raw = "        return 1;\n    }\n}\n\nclass Solution {\n    public static int f() {\n        return 2;\n    }\n}\n";
        let cleaned = postprocess(raw, LanguageId::Java, prompt);
        assert_eq!(cleaned, "        return 1;\n    }\n}\n\n");
    }

    #[test]
    fn java_without_stop_marker_is_unchanged() {
        let prompt = "class Solution {\n    public static int f() {\n";
        let raw = "        return 1;\n    }\n}\n";
        assert_eq!(postprocess(raw, LanguageId::Java, prompt), raw);
    }

    #[test]
    fn java_string_mention_does_not_count() {
        let prompt = "class Solution {\n    public static String f() {\n";
        let raw = "        return \"class Solution\";\n    }\n}\n";
        assert_eq!(postprocess(raw, LanguageId::Java, prompt), raw);
    }

    #[test]
    fn cpp_truncates_before_second_comment_block() {
        let raw = "    return x;\n}\n\n/* helper */\nint helper() {\n    return 0;\n}\n\n/* another docstring */\nint g() {\n";
        let cleaned = postprocess(raw, LanguageId::Cpp, "");
        assert!(cleaned.ends_with("return 0;\n}\n\n"), "{cleaned:?}");
        assert!(!cleaned.contains("another docstring"));
    }

    #[test]
    fn js_single_comment_block_is_kept() {
        let raw = "    return x;\n}\n/* trailing note */\n";
        assert_eq!(postprocess(raw, LanguageId::JavaScript, ""), raw);
    }

    #[test]
    fn empty_completion_is_unchanged() {
        assert_eq!(postprocess("", LanguageId::Java, "prompt"), "");
    }
}
