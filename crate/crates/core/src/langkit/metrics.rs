//! Structural source metrics: lines, tokens, cyclomatic complexity,
//! scope delimiters, comment-token ratio.

use super::lexer::{tokenize_spanned, TokenKind};
use super::LanguageId;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuralMetrics {
    /// Non-empty lines.
    pub loc: usize,
    pub tokens: usize,
    /// 1 + decision points (if, for, while, case, catch, ternary `?`,
    /// `&&`, `||`). `else` and `default` are not counted.
    pub cyclomatic: usize,
    /// Opening `{` tokens.
    pub scope_delimiters: usize,
    /// Comment tokens / total tokens; 0 when there are no tokens.
    pub comment_token_ratio: f64,
}

pub fn structural_metrics(source: &str, language: LanguageId) -> StructuralMetrics {
    let tokens = tokenize_spanned(source, language);
    let loc = source.lines().filter(|l| !l.trim().is_empty()).count();
    let total = tokens.len();
    let comment = tokens.iter().filter(|t| t.is_comment()).count();

    let mut decisions = 0usize;
    for t in &tokens {
        if t.is_comment() {
            continue;
        }
        let hit = match t.kind {
            TokenKind::Identifier => {
                matches!(t.text.as_str(), "if" | "for" | "while" | "case" | "catch")
            }
            TokenKind::Operator => matches!(t.text.as_str(), "&&" | "||" | "?"),
            _ => false,
        };
        if hit {
            decisions += 1;
        }
    }

    let scope_delimiters = tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Punct && t.text == "{")
        .count();

    StructuralMetrics {
        loc,
        tokens: total,
        cyclomatic: 1 + decisions,
        scope_delimiters,
        comment_token_ratio: if total == 0 {
            0.0
        } else {
            comment as f64 / total as f64
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_line_body_is_cyclomatic_one() {
        let m = structural_metrics("int a = 1;\nint b = 2;\nint c = a + b;\n", LanguageId::Java);
        assert_eq!(m.cyclomatic, 1);
        assert_eq!(m.loc, 3);
        assert_eq!(m.scope_delimiters, 0);
    }

    #[test]
    fn if_and_logical_and_count() {
        let src = "if (a > 0 && b > 0) {\n    c = 1;\n}\n";
        let m = structural_metrics(src, LanguageId::Cpp);
        assert_eq!(m.cyclomatic, 3);
        assert_eq!(m.scope_delimiters, 1);
    }

    #[test]
    fn pure_comment_has_ratio_one() {
        let m = structural_metrics("/* only a comment */", LanguageId::JavaScript);
        assert!((m.comment_token_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_source_has_zero_ratio() {
        let m = structural_metrics("", LanguageId::Java);
        assert_eq!(m.tokens, 0);
        assert_eq!(m.comment_token_ratio, 0.0);
    }

    #[test]
    fn comment_keywords_do_not_count_as_decisions() {
        let m = structural_metrics("// if while for\nx = 1;\n", LanguageId::Java);
        assert_eq!(m.cyclomatic, 1);
    }
}
