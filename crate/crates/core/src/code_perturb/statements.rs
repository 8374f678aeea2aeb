//! Line- and token-level helpers shared by the syntax strategies.

use crate::langkit::{tokenize_spanned, LanguageId, Token, TokenKind};

/// Byte span of each physical line, newline included.
pub fn line_spans(text: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = 0usize;
    for (i, b) in text.bytes().enumerate() {
        if b == b'\n' {
            spans.push((start, i + 1));
            start = i + 1;
        }
    }
    if start < text.len() {
        spans.push((start, text.len()));
    }
    spans
}

pub fn indent_of(line: &str) -> &str {
    let end = line
        .char_indices()
        .find(|(_, c)| !c.is_whitespace())
        .map(|(i, _)| i)
        .unwrap_or(line.len());
    &line[..end]
}

/// Code tokens (comments excluded) with their source spans.
pub fn code_tokens(text: &str, language: LanguageId) -> Vec<Token> {
    tokenize_spanned(text, language)
        .into_iter()
        .filter(|t| !t.is_comment())
        .collect()
}

pub fn is_type_keyword(text: &str, language: LanguageId) -> bool {
    match language {
        LanguageId::Java => matches!(
            text,
            "int" | "long" | "short" | "byte" | "char" | "boolean" | "float" | "double" | "var"
        ),
        LanguageId::Cpp => matches!(
            text,
            "int"
                | "long"
                | "short"
                | "char"
                | "bool"
                | "float"
                | "double"
                | "auto"
                | "unsigned"
                | "signed"
                | "void"
                | "wchar_t"
        ),
        LanguageId::JavaScript => false,
    }
}

/// Does this token sequence look like a variable declaration statement?
pub fn looks_like_declaration(tokens: &[&Token], language: LanguageId) -> bool {
    let Some(first) = tokens.first() else {
        return false;
    };
    match language {
        LanguageId::JavaScript => {
            first.kind == TokenKind::Identifier
                && matches!(first.text.as_str(), "let" | "const" | "var")
        }
        _ => {
            if first.kind != TokenKind::Identifier {
                return false;
            }
            if is_type_keyword(&first.text, language) {
                return true;
            }
            if language.reserved_words().contains(&first.text.as_str()) {
                return false;
            }
            // `Type name ...` or `Type<...> name ...`
            match tokens.get(1) {
                Some(second) if second.kind == TokenKind::Identifier => {
                    !language.reserved_words().contains(&second.text.as_str())
                }
                Some(second) if second.text == "<" => {
                    let mut depth = 0i32;
                    for (i, t) in tokens.iter().enumerate().skip(1) {
                        match t.text.as_str() {
                            "<" => depth += 1,
                            ">" => {
                                depth -= 1;
                                if depth == 0 {
                                    return matches!(
                                        tokens.get(i + 1),
                                        Some(t) if t.kind == TokenKind::Identifier
                                    );
                                }
                            }
                            ">>" => depth -= 2,
                            ";" | "(" => return false,
                            _ => {}
                        }
                    }
                    false
                }
                _ => false,
            }
        }
    }
}

/// Variables bound by declarations in the body, in order of first
/// occurrence: `(name, first_token_index)`.
pub fn declared_variables(tokens: &[Token], language: LanguageId) -> Vec<(String, usize)> {
    let mut out: Vec<(String, usize)> = Vec::new();
    for i in 0..tokens.len() {
        let t = &tokens[i];
        if t.kind != TokenKind::Identifier
            || language.reserved_words().contains(&t.text.as_str())
        {
            continue;
        }
        let next_ok = matches!(
            tokens.get(i + 1).map(|n| n.text.as_str()),
            Some("=") | Some(";") | Some(":")
        );
        if !next_ok {
            continue;
        }
        let prev_ok = match i.checked_sub(1).and_then(|p| tokens.get(p)) {
            Some(prev) => match prev.kind {
                TokenKind::Identifier => {
                    is_type_keyword(&prev.text, language)
                        || (language == LanguageId::JavaScript
                            && matches!(prev.text.as_str(), "let" | "const" | "var"))
                        || (language != LanguageId::JavaScript
                            && !language.reserved_words().contains(&prev.text.as_str()))
                }
                TokenKind::Operator => matches!(prev.text.as_str(), ">" | "*" | "&"),
                TokenKind::Punct => prev.text == "]",
                _ => false,
            },
            None => false,
        };
        // Member accesses are not declarations.
        let prev_prev_dot = i
            .checked_sub(2)
            .and_then(|p| tokens.get(p))
            .map(|t| t.text == "." || t.text == "->" || t.text == "::")
            .unwrap_or(false);
        if prev_ok && !prev_prev_dot && !out.iter().any(|(n, _)| n == &t.text) {
            out.push((t.text.clone(), i));
        }
    }
    out
}

/// The most frequently used declared variable: occurrence count over all
/// identifier tokens, ties broken by earliest first occurrence.
pub fn most_frequent_variable(tokens: &[Token], language: LanguageId) -> Option<String> {
    let declared = declared_variables(tokens, language);
    if declared.is_empty() {
        return None;
    }
    let mut best: Option<(usize, usize, &str)> = None; // (count, neg-first-pos via order, name)
    for (name, first_pos) in &declared {
        let count = tokens
            .iter()
            .filter(|t| t.kind == TokenKind::Identifier && &t.text == name)
            .count();
        let better = match best {
            None => true,
            Some((bc, bp, _)) => count > bc || (count == bc && *first_pos < bp),
        };
        if better {
            best = Some((count, *first_pos, name));
        }
    }
    best.map(|(_, _, name)| name.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_spans_cover_text() {
        let text = "a\nbb\nccc";
        let spans = line_spans(text);
        assert_eq!(spans, vec![(0, 2), (2, 5), (5, 8)]);
    }

    #[test]
    fn declaration_detection_java() {
        let lang = LanguageId::Java;
        let toks = code_tokens("int i = 0;", lang);
        let refs: Vec<&Token> = toks.iter().collect();
        assert!(looks_like_declaration(&refs, lang));

        let toks = code_tokens("List<String> out = new ArrayList<>();", lang);
        let refs: Vec<&Token> = toks.iter().collect();
        assert!(looks_like_declaration(&refs, lang));

        let toks = code_tokens("result.add(s);", lang);
        let refs: Vec<&Token> = toks.iter().collect();
        assert!(!looks_like_declaration(&refs, lang));

        let toks = code_tokens("return result;", lang);
        let refs: Vec<&Token> = toks.iter().collect();
        assert!(!looks_like_declaration(&refs, lang));
    }

    #[test]
    fn declaration_detection_js() {
        let lang = LanguageId::JavaScript;
        let toks = code_tokens("let x = 1;", lang);
        let refs: Vec<&Token> = toks.iter().collect();
        assert!(looks_like_declaration(&refs, lang));
        let toks = code_tokens("x = 1;", lang);
        let refs: Vec<&Token> = toks.iter().collect();
        assert!(!looks_like_declaration(&refs, lang));
    }

    #[test]
    fn declared_variables_found() {
        let body = "int sum = 0;\nfor (int i = 0; i < n; i++) {\n    sum += values[i];\n}\nreturn sum;\n";
        let toks = code_tokens(body, LanguageId::Java);
        let vars: Vec<String> = declared_variables(&toks, LanguageId::Java)
            .into_iter()
            .map(|(n, _)| n)
            .collect();
        assert_eq!(vars, vec!["sum", "i"]);
    }

    #[test]
    fn most_frequent_prefers_count_then_position() {
        let body = "int a = 0;\nint b = 0;\nb += 1;\nb += 2;\nreturn a + b;\n";
        let toks = code_tokens(body, LanguageId::Java);
        assert_eq!(
            most_frequent_variable(&toks, LanguageId::Java),
            Some("b".to_string())
        );
        // Tie: both used twice; earliest first occurrence wins.
        let body = "int a = 0;\nint b = 0;\nreturn a + b;\n";
        let toks = code_tokens(body, LanguageId::Java);
        assert_eq!(
            most_frequent_variable(&toks, LanguageId::Java),
            Some("a".to_string())
        );
    }

    #[test]
    fn member_access_is_not_a_declaration_site() {
        let toks = code_tokens("obj.field = 1;", LanguageId::Java);
        assert!(declared_variables(&toks, LanguageId::Java).is_empty());
    }
}
