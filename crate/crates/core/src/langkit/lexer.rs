//! Shared C-family lexer for Java, C++, and JavaScript.
//!
//! The three languages share enough lexical structure (comments, string
//! forms, identifier and operator shapes) that one lexer covers all of
//! them. Comments are not dropped: a comment yields its delimiter tokens
//! plus one token per whitespace-separated word, which is what the
//! dissimilarity features expect. Whitespace is excluded. Unlexable bytes
//! become single-character tokens, so lexing is total.

use super::LanguageId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Identifier,
    Number,
    StringLit,
    Operator,
    Punct,
    CommentDelim,
    CommentWord,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// Byte offset of the token start in the source.
    pub start: usize,
    /// Byte offset one past the token end.
    pub end: usize,
}

impl Token {
    pub fn is_comment(&self) -> bool {
        matches!(self.kind, TokenKind::CommentDelim | TokenKind::CommentWord)
    }
}

/// Multi-character operators, longest first so maximal munch works.
static OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "...", "===", "!==", "->*", "<=>", "::", "->", "++", "--", "<<",
    ">>", "<=", ">=", "==", "!=", "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "=>", "??", "?.", "**",
];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Lex `source` into tokens with byte spans. Total: every byte either
/// belongs to a token or is whitespace.
pub fn tokenize_spanned(source: &str, language: LanguageId) -> Vec<Token> {
    let bytes = source.as_bytes();
    let chars: Vec<(usize, char)> = source.char_indices().collect();
    let mut tokens = Vec::new();
    let mut i = 0usize; // index into chars

    let push = |tokens: &mut Vec<Token>, kind, start: usize, end: usize, src: &str| {
        tokens.push(Token {
            kind,
            text: src[start..end].to_string(),
            start,
            end,
        });
    };

    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        // Line comment.
        if c == '/' && matches!(chars.get(i + 1), Some((_, '/'))) {
            let delim_end = chars[i + 1].0 + 1;
            push(&mut tokens, TokenKind::CommentDelim, pos, delim_end, source);
            i += 2;
            let line_end = source[delim_end..]
                .find('\n')
                .map(|off| delim_end + off)
                .unwrap_or(source.len());
            lex_comment_words(source, delim_end, line_end, &mut tokens);
            while i < chars.len() && chars[i].0 < line_end {
                i += 1;
            }
            continue;
        }
        // Block comment.
        if c == '/' && matches!(chars.get(i + 1), Some((_, '*'))) {
            // The opener is the "/*" plus any additional '*' run ("/**").
            let mut j = i + 2;
            while j < chars.len() && chars[j].1 == '*' {
                // Don't swallow the '*' of a terminating "*/".
                if matches!(chars.get(j + 1), Some((_, '/'))) {
                    break;
                }
                j += 1;
            }
            let open_end = chars.get(j).map(|(p, _)| *p).unwrap_or(source.len());
            push(&mut tokens, TokenKind::CommentDelim, pos, open_end, source);
            let close = source[open_end..].find("*/").map(|off| open_end + off);
            let (content_end, next) = match close {
                Some(p) => (p, p + 2),
                None => (source.len(), source.len()),
            };
            lex_comment_words(source, open_end, content_end, &mut tokens);
            if close.is_some() {
                push(
                    &mut tokens,
                    TokenKind::CommentDelim,
                    content_end,
                    next,
                    source,
                );
            }
            while i < chars.len() && chars[i].0 < next {
                i += 1;
            }
            continue;
        }
        // String / char / template literals. Unterminated literals run to
        // end of line (backtick: end of input) so lexing stays total.
        if c == '"' || c == '\'' || (c == '`' && language == LanguageId::JavaScript) {
            let quote = c;
            let mut j = i + 1;
            let mut end = source.len();
            while j < chars.len() {
                let (p, cj) = chars[j];
                if cj == '\\' {
                    j += 2;
                    continue;
                }
                if cj == quote {
                    end = p + cj.len_utf8();
                    j += 1;
                    break;
                }
                if cj == '\n' && quote != '`' {
                    end = p;
                    break;
                }
                j += 1;
            }
            if j >= chars.len() && end == source.len() {
                // ran off the end
            }
            push(&mut tokens, TokenKind::StringLit, pos, end, source);
            while i < chars.len() && chars[i].0 < end {
                i += 1;
            }
            continue;
        }
        // Numbers: digits, hex, and decimal/exponent forms.
        if c.is_ascii_digit() || (c == '.' && matches!(chars.get(i + 1), Some((_, d)) if d.is_ascii_digit()))
        {
            let mut j = i;
            let mut seen_dot = c == '.';
            let mut seen_exp = false;
            j += 1;
            while j < chars.len() {
                let cj = chars[j].1;
                if cj.is_ascii_alphanumeric() {
                    if (cj == 'e' || cj == 'E')
                        && !seen_exp
                        && matches!(chars.get(j + 1), Some((_, s)) if s.is_ascii_digit() || *s == '+' || *s == '-')
                    {
                        seen_exp = true;
                        j += 1;
                        if matches!(chars.get(j), Some((_, s)) if *s == '+' || *s == '-') {
                            j += 1;
                        }
                        continue;
                    }
                    j += 1;
                } else if cj == '.' && !seen_dot && !seen_exp {
                    seen_dot = true;
                    j += 1;
                } else {
                    break;
                }
            }
            let end = chars.get(j).map(|(p, _)| *p).unwrap_or(source.len());
            push(&mut tokens, TokenKind::Number, pos, end, source);
            i = j;
            continue;
        }
        // Identifiers and keywords.
        if is_ident_start(c) {
            let mut j = i + 1;
            while j < chars.len() && is_ident_continue(chars[j].1) {
                j += 1;
            }
            let end = chars.get(j).map(|(p, _)| *p).unwrap_or(source.len());
            push(&mut tokens, TokenKind::Identifier, pos, end, source);
            i = j;
            continue;
        }
        // Multi-character operators.
        let rest = &source[pos..];
        if let Some(op) = OPERATORS.iter().find(|op| rest.starts_with(**op)) {
            let end = pos + op.len();
            push(&mut tokens, TokenKind::Operator, pos, end, source);
            while i < chars.len() && chars[i].0 < end {
                i += 1;
            }
            continue;
        }
        let kind = match c {
            '+' | '-' | '*' | '/' | '%' | '=' | '<' | '>' | '!' | '&' | '|' | '^' | '~' | '?' => {
                TokenKind::Operator
            }
            '(' | ')' | '{' | '}' | '[' | ']' | ';' | ',' | '.' | ':' | '@' | '#' => {
                TokenKind::Punct
            }
            _ => TokenKind::Other,
        };
        let end = pos + c.len_utf8();
        push(&mut tokens, kind, pos, end, source);
        i += 1;
    }
    let _ = bytes;
    tokens
}

fn lex_comment_words(source: &str, start: usize, end: usize, tokens: &mut Vec<Token>) {
    let mut word_start = None;
    let mut pos = start;
    for (off, c) in source[start..end].char_indices() {
        pos = start + off;
        if c.is_whitespace() {
            if let Some(ws) = word_start.take() {
                tokens.push(Token {
                    kind: TokenKind::CommentWord,
                    text: source[ws..pos].to_string(),
                    start: ws,
                    end: pos,
                });
            }
        } else if word_start.is_none() {
            word_start = Some(pos);
        }
    }
    if let Some(ws) = word_start {
        tokens.push(Token {
            kind: TokenKind::CommentWord,
            text: source[ws..end].to_string(),
            start: ws,
            end,
        });
    }
    let _ = pos;
}

/// Lex without spans. Whitespace excluded; comments contribute delimiter
/// tokens plus one token per whitespace-separated word.
pub fn tokenize(source: &str, language: LanguageId) -> Vec<Token> {
    tokenize_spanned(source, language)
}

/// Convenience: just the token texts.
pub fn token_texts(source: &str, language: LanguageId) -> Vec<String> {
    tokenize_spanned(source, language)
        .into_iter()
        .map(|t| t.text)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_expression() {
        let texts: Vec<String> = token_texts("a+b", LanguageId::Cpp);
        assert_eq!(texts, vec!["a", "+", "b"]);
    }

    #[test]
    fn empty_source() {
        assert!(tokenize("", LanguageId::Java).is_empty());
    }

    #[test]
    fn comments_split_into_words() {
        let texts = token_texts("/* hello brave world */", LanguageId::Java);
        assert_eq!(texts, vec!["/*", "hello", "brave", "world", "*/"]);
        let texts = token_texts("// line note\nx;", LanguageId::JavaScript);
        assert_eq!(texts, vec!["//", "line", "note", "x", ";"]);
    }

    #[test]
    fn doc_comment_opener_kept_whole() {
        let texts = token_texts("/**\n doc\n */", LanguageId::Java);
        assert_eq!(texts, vec!["/**", "doc", "*/"]);
    }

    #[test]
    fn maximal_munch_operators() {
        let texts = token_texts("a<=b&&c!==d", LanguageId::JavaScript);
        assert_eq!(texts, vec!["a", "<=", "b", "&&", "c", "!==", "d"]);
    }

    #[test]
    fn strings_are_single_tokens() {
        let texts = token_texts(r#"f("a b", 'c')"#, LanguageId::Java);
        assert_eq!(texts, vec!["f", "(", "\"a b\"", ",", "'c'", ")"]);
    }

    #[test]
    fn escaped_quote_stays_inside_string() {
        let texts = token_texts(r#""a\"b" x"#, LanguageId::JavaScript);
        assert_eq!(texts, vec![r#""a\"b""#, "x"]);
    }

    #[test]
    fn numbers_with_fraction_and_exponent() {
        let texts = token_texts("1.5e-3 + 0x1F + .5", LanguageId::Cpp);
        assert_eq!(texts, vec!["1.5e-3", "+", "0x1F", "+", ".5"]);
    }

    #[test]
    fn unlexable_bytes_are_single_tokens() {
        let texts = token_texts("a § b", LanguageId::Java);
        assert_eq!(texts, vec!["a", "§", "b"]);
    }

    #[test]
    fn spans_cover_token_text() {
        let src = "int x = 42; // done";
        for t in tokenize_spanned(src, LanguageId::Java) {
            assert_eq!(&src[t.start..t.end], t.text);
        }
    }
}
