//! Byte-exact prompt decomposition.
//!
//! Splits a prompt (or a full assembled program) into header, docstring,
//! signature, body, and trailer such that concatenating the parts
//! reproduces the input byte-for-byte. Works on ill-formed inputs:
//! perturbed and partial prompts routinely end mid-function.

use super::lexer::{tokenize_spanned, Token, TokenKind};
use super::LanguageId;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecomposeError {
    #[error("no function declaration found{}", match .entry_point { Some(e) => format!(" for entry point `{e}`"), None => String::new() })]
    NoFunctionFound { entry_point: Option<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocStyle {
    /// `/* ... */` or `/** ... */` block comment.
    Block,
    /// A run of consecutive `//` line comments.
    Lines,
    /// No docstring present.
    Absent,
}

/// The docstring with its comment delimiters recorded separately so the
/// inner text can be replaced without disturbing the layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocBlock {
    pub style: DocStyle,
    /// Indentation plus the opening delimiter (e.g. `    /**`). Empty for
    /// `Lines` and `Absent` styles.
    pub open: String,
    /// Raw bytes between the delimiters. For `Lines` style this is the
    /// whole comment run including the `//` markers.
    pub text: String,
    /// The closing delimiter and the rest of its line. Empty for `Lines`
    /// and `Absent`.
    pub close: String,
}

impl DocBlock {
    pub fn absent() -> Self {
        DocBlock {
            style: DocStyle::Absent,
            open: String::new(),
            text: String::new(),
            close: String::new(),
        }
    }

    pub fn raw(&self) -> String {
        format!("{}{}{}", self.open, self.text, self.close)
    }

    pub fn is_empty(&self) -> bool {
        self.style == DocStyle::Absent
    }

    /// Replace the inner text, keeping the delimiters. Only meaningful for
    /// `Block` style; other styles return the block unchanged.
    pub fn with_text(&self, text: &str) -> DocBlock {
        match self.style {
            DocStyle::Block => DocBlock {
                style: DocStyle::Block,
                open: self.open.clone(),
                text: text.to_string(),
                close: self.close.clone(),
            },
            _ => self.clone(),
        }
    }

    /// The natural-language text with comment markers and per-line
    /// indentation stripped.
    pub fn nl_text(&self) -> String {
        match self.style {
            DocStyle::Absent => String::new(),
            DocStyle::Block => strip_margin(&self.text),
            DocStyle::Lines => {
                let mut out = Vec::new();
                for line in self.text.lines() {
                    let trimmed = line.trim_start();
                    let content = trimmed.strip_prefix("//").unwrap_or(trimmed);
                    out.push(content.strip_prefix(' ').unwrap_or(content));
                }
                out.join("\n").trim().to_string()
            }
        }
    }
}

fn strip_margin(text: &str) -> String {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| {
            let t = l.trim_start();
            t.strip_prefix('*').map(|r| r.trim_start()).unwrap_or(t)
        })
        .collect();
    lines.join("\n").trim().to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptParts {
    pub header: String,
    pub doc: DocBlock,
    pub signature: String,
    pub body: String,
    pub trailer: String,
}

impl PromptParts {
    /// Reassemble the parts. Lossless for every decomposed input.
    pub fn join(&self) -> String {
        format!(
            "{}{}{}{}{}",
            self.header,
            self.doc.raw(),
            self.signature,
            self.body,
            self.trailer
        )
    }

    /// The code parts (everything except the docstring text).
    pub fn code_parts(&self) -> [&str; 4] {
        [&self.header, &self.signature, &self.body, &self.trailer]
    }
}

/// Decompose `source` around the declaration of `entry_point` (or the
/// first function-like declaration when no entry point is given).
///
/// The docstring is the comment block immediately preceding the
/// declaration; a source with no attached comment yields an absent doc
/// part. The signature runs from the start of the declaration's first
/// line through its opening `{` and trailing newline. The body extends to
/// the brace closing the function (trailer holds the rest) or to the end
/// of input for body-less and partial prompts.
pub fn decompose_prompt(
    source: &str,
    language: LanguageId,
    entry_point: Option<&str>,
) -> Result<PromptParts, DecomposeError> {
    let tokens = tokenize_spanned(source, language);
    let decl = find_declaration(source, &tokens, language, entry_point).ok_or(
        DecomposeError::NoFunctionFound {
            entry_point: entry_point.map(|s| s.to_string()),
        },
    )?;

    let sig_start = line_start(source, decl.first_token_start);
    let sig_end = match decl.open_brace_end {
        Some(end) => end_of_line(source, end),
        None => source.len(),
    };

    let doc = find_attached_comment(source, &tokens, sig_start);
    let (doc_block, doc_start) = match doc {
        Some((block, start)) => (block, start),
        None => (DocBlock::absent(), sig_start),
    };

    let header = source[..doc_start].to_string();
    let signature = source[sig_start..sig_end].to_string();

    let (body, trailer) = match decl.open_brace_end {
        Some(_) => {
            let body_start = sig_end;
            match find_function_close(&tokens, sig_end) {
                Some(close_tok_start) => {
                    let body_end = line_start(source, close_tok_start);
                    let body_end = body_end.max(body_start);
                    (
                        source[body_start..body_end].to_string(),
                        source[body_end..].to_string(),
                    )
                }
                None => (source[body_start..].to_string(), String::new()),
            }
        }
        None => (String::new(), String::new()),
    };

    Ok(PromptParts {
        header,
        doc: doc_block,
        signature,
        body,
        trailer,
    })
}

struct Declaration {
    first_token_start: usize,
    /// Byte offset one past the opening `{`, when present.
    open_brace_end: Option<usize>,
}

fn find_declaration(
    source: &str,
    tokens: &[Token],
    language: LanguageId,
    entry_point: Option<&str>,
) -> Option<Declaration> {
    let code: Vec<(usize, &Token)> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_comment())
        .collect();

    for (ci, (_, tok)) in code.iter().enumerate() {
        if tok.kind != TokenKind::Identifier {
            continue;
        }
        if let Some(name) = entry_point {
            if tok.text != name {
                continue;
            }
        }
        // An identifier immediately followed by `(`.
        let Some((_, next)) = code.get(ci + 1) else {
            continue;
        };
        if !(next.kind == TokenKind::Punct && next.text == "(") {
            continue;
        }
        // Skip over the balanced parameter list.
        let mut depth = 0i32;
        let mut after_params = None;
        for (cj, (_, t)) in code.iter().enumerate().skip(ci + 1) {
            match t.text.as_str() {
                "(" => depth += 1,
                ")" => {
                    depth -= 1;
                    if depth == 0 {
                        after_params = Some(cj + 1);
                        break;
                    }
                }
                _ => {}
            }
        }
        let Some(after) = after_params else { continue };
        // Between the parameter list and `{` only declaration glue may
        // appear (throws clauses, const/noexcept, identifiers, commas).
        // Anything else means this was a call, not a declaration.
        let mut open_brace_end = None;
        let mut is_declaration = after >= code.len(); // body-less prompt ending at `)`
        for (_, t) in code.iter().skip(after) {
            match (t.kind, t.text.as_str()) {
                (TokenKind::Punct, "{") => {
                    open_brace_end = Some(t.end);
                    is_declaration = true;
                    break;
                }
                (TokenKind::Identifier, _) | (TokenKind::Punct, ",") => {}
                _ => break,
            }
        }
        if !is_declaration {
            continue;
        }
        // Require a declaration prefix so bare calls like `f(x)` at the
        // start of a statement are not misread. JS declares with a
        // keyword; Java/C++ with modifiers or a type.
        let prev = if ci > 0 { Some(code[ci - 1].1) } else { None };
        let prefix_ok = match language {
            LanguageId::JavaScript => matches!(
                prev.map(|t| t.text.as_str()),
                Some("function") | Some("async")
            ),
            _ => match prev {
                None => false,
                Some(p) => {
                    (p.kind == TokenKind::Identifier
                        || (p.kind == TokenKind::Operator && (p.text == ">" || p.text == "*" || p.text == "&"))
                        || (p.kind == TokenKind::Punct && p.text == "]"))
                        && p.text != "return"
                        && p.text != "new"
                }
            },
        };
        if !prefix_ok {
            continue;
        }
        // The declaration starts at the head of the modifier/type chain.
        let first = declaration_head(&code, ci, language);
        return Some(Declaration {
            first_token_start: first,
            open_brace_end,
        });
    }
    let _ = source;
    None
}

/// Walk backwards over the modifier/return-type chain to the first token
/// of the declaration.
fn declaration_head(code: &[(usize, &Token)], name_ci: usize, language: LanguageId) -> usize {
    if language == LanguageId::JavaScript {
        // `function name(` or `async function name(`
        let mut ci = name_ci;
        while ci > 0 {
            let prev = code[ci - 1].1;
            if prev.kind == TokenKind::Identifier
                && (prev.text == "function" || prev.text == "async")
            {
                ci -= 1;
            } else {
                break;
            }
        }
        return code[ci].1.start;
    }
    let mut ci = name_ci;
    while ci > 0 {
        let prev = code[ci - 1].1;
        let glue = match (prev.kind, prev.text.as_str()) {
            (TokenKind::Identifier, "return") | (TokenKind::Identifier, "new") => false,
            (TokenKind::Identifier, _) => true,
            (TokenKind::Operator, "<") | (TokenKind::Operator, ">") => true,
            (TokenKind::Operator, "*") | (TokenKind::Operator, "&") => true,
            (TokenKind::Punct, "[") | (TokenKind::Punct, "]") => true,
            (TokenKind::Punct, ",") | (TokenKind::Punct, ".") => true,
            (TokenKind::Punct, ":") => true, // C++ `::`elements lex as ':' ':'? (no: '::' is one op)
            (TokenKind::Operator, "::") => true,
            _ => false,
        };
        if glue {
            ci -= 1;
        } else {
            break;
        }
    }
    code[ci].1.start
}

/// The comment block whose end is separated from `sig_start` by
/// whitespace only.
fn find_attached_comment(
    source: &str,
    tokens: &[Token],
    sig_start: usize,
) -> Option<(DocBlock, usize)> {
    let comments: Vec<&Token> = tokens.iter().filter(|t| t.is_comment()).collect();
    // Find the last comment delimiter that closes before the signature.
    let mut best_end = None;
    for t in tokens {
        if t.end <= sig_start && t.is_comment() {
            best_end = Some(t.end);
        }
    }
    let last_comment_end = best_end?;
    if !source[last_comment_end..sig_start].trim().is_empty() {
        return None;
    }
    let _ = comments;

    // Scan the raw bytes backwards for the block opener or the first line
    // of a `//` run.
    let before = &source[..last_comment_end];
    if before.ends_with("*/") {
        let close_end = end_of_line(source, last_comment_end);
        if !source[last_comment_end..close_end.min(sig_start)]
            .trim()
            .is_empty()
        {
            return None;
        }
        let open_pos = before.rfind("/*")?;
        let mut open_end = open_pos + 2;
        let bytes = source.as_bytes();
        while open_end < last_comment_end - 2 && bytes[open_end] == b'*' {
            // keep "/**" openers whole, but never swallow the closing "*/"
            if open_end + 1 < source.len() && bytes[open_end + 1] == b'/' {
                break;
            }
            open_end += 1;
        }
        let line_begin = line_start(source, open_pos);
        if !source[line_begin..open_pos].trim().is_empty() {
            return None;
        }
        let close_start = last_comment_end - 2;
        let block = DocBlock {
            style: DocStyle::Block,
            open: source[line_begin..open_end].to_string(),
            text: source[open_end..close_start].to_string(),
            close: source[close_start..close_end].to_string(),
        };
        return Some((block, line_begin));
    }

    // Line-comment run: walk upwards while lines are `//` comments.
    let mut start_line = line_start(source, last_comment_end.saturating_sub(1));
    if !source[start_line..].trim_start().starts_with("//") {
        return None;
    }
    loop {
        if start_line == 0 {
            break;
        }
        let prev_line_start = line_start(source, start_line - 1);
        let prev_line = &source[prev_line_start..start_line];
        if prev_line.trim_start().starts_with("//") {
            start_line = prev_line_start;
        } else {
            break;
        }
    }
    let run_end = end_of_line(source, last_comment_end);
    let block = DocBlock {
        style: DocStyle::Lines,
        open: String::new(),
        text: source[start_line..run_end.min(sig_start)].to_string(),
        close: String::new(),
    };
    Some((block, start_line))
}

/// Find the `}` token that closes the function opened just before
/// `body_start`. Returns its byte offset.
fn find_function_close(tokens: &[Token], body_start: usize) -> Option<usize> {
    let mut depth = 1i32;
    for t in tokens {
        if t.start < body_start || t.is_comment() {
            continue;
        }
        match t.text.as_str() {
            "{" => depth += 1,
            "}" => {
                depth -= 1;
                if depth == 0 {
                    return Some(t.start);
                }
            }
            _ => {}
        }
    }
    None
}

pub(crate) fn line_start(source: &str, pos: usize) -> usize {
    source[..pos].rfind('\n').map(|p| p + 1).unwrap_or(0)
}

/// Byte offset one past the `\n` ending the line containing `pos`
/// (or the end of input).
pub(crate) fn end_of_line(source: &str, pos: usize) -> usize {
    source[pos..]
        .find('\n')
        .map(|off| pos + off + 1)
        .unwrap_or(source.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    const JAVA_PROMPT: &str = "import java.util.*;\n\nclass Solution {\n    /**\n     Return only positive numbers in the list.\n     >>> getPositive(List.of(-1, 2, -4, 5, 6))\n     [2, 5, 6]\n     */\n    public static List<Integer> getPositive(List<Integer> numbers) {\n";

    #[test]
    fn java_prompt_decomposes() {
        let parts = decompose_prompt(JAVA_PROMPT, LanguageId::Java, Some("getPositive")).unwrap();
        assert!(parts.header.starts_with("import java.util.*;"));
        assert!(parts.header.ends_with("class Solution {\n"));
        assert_eq!(parts.doc.style, DocStyle::Block);
        assert!(parts.doc.text.contains("Return only positive numbers"));
        assert!(parts.signature.contains("getPositive"));
        assert!(parts.signature.ends_with("{\n"));
        assert_eq!(parts.body, "");
        assert_eq!(parts.join(), JAVA_PROMPT);
    }

    #[test]
    fn cpp_prompt_decomposes() {
        let src = "#include <vector>\nusing namespace std;\n\n/*\n Return only positive numbers.\n */\nvector<float> get_positive(vector<float> l) {\n";
        let parts = decompose_prompt(src, LanguageId::Cpp, Some("get_positive")).unwrap();
        assert!(parts.doc.text.contains("Return only positive numbers"));
        assert!(parts.signature.starts_with("vector<float> get_positive"));
        assert_eq!(parts.join(), src);
    }

    #[test]
    fn js_prompt_decomposes_with_empty_header() {
        let src = "/*\n  Add two numbers.\n  */\nfunction add(x, y) {\n";
        let parts = decompose_prompt(src, LanguageId::JavaScript, Some("add")).unwrap();
        assert_eq!(parts.header, "");
        assert_eq!(parts.signature, "function add(x, y) {\n");
        assert_eq!(parts.join(), src);
    }

    #[test]
    fn missing_comment_yields_absent_doc() {
        let src = "function add(x, y) {\n";
        let parts = decompose_prompt(src, LanguageId::JavaScript, Some("add")).unwrap();
        assert!(parts.doc.is_empty());
        assert_eq!(parts.join(), src);
    }

    #[test]
    fn full_program_splits_body_and_trailer() {
        let src = "class Solution {\n    /** doc */\n    public static int add(int a, int b) {\n        return a + b;\n    }\n}\nclass Main {\n    public static void main(String[] a) {\n        if (Solution.add(1, 2) != 3) { throw new AssertionError(); }\n    }\n}\n";
        let parts = decompose_prompt(src, LanguageId::Java, Some("add")).unwrap();
        assert_eq!(parts.body, "        return a + b;\n");
        assert!(parts.trailer.starts_with("    }\n}\nclass Main"));
        assert_eq!(parts.join(), src);
    }

    #[test]
    fn call_sites_are_not_declarations() {
        let src = "class Main {\n    public static void main(String[] a) {\n        int add = 1;\n        if (Solution.add(1, 2) != 3) { throw new AssertionError(); }\n    }\n    static int add(int a, int b) {\n        return a + b;\n    }\n}\n";
        let parts = decompose_prompt(src, LanguageId::Java, Some("add")).unwrap();
        assert!(parts.signature.contains("static int add(int a, int b)"));
    }

    #[test]
    fn line_comment_docstring() {
        let src = "// Add two numbers.\n// Returns the sum.\nfunction add(x, y) {\n";
        let parts = decompose_prompt(src, LanguageId::JavaScript, Some("add")).unwrap();
        assert_eq!(parts.doc.style, DocStyle::Lines);
        assert_eq!(parts.doc.nl_text(), "Add two numbers.\nReturns the sum.");
        assert_eq!(parts.join(), src);
    }

    #[test]
    fn no_function_is_an_error() {
        let err = decompose_prompt("int x = 3;", LanguageId::Cpp, Some("add")).unwrap_err();
        assert!(matches!(err, DecomposeError::NoFunctionFound { .. }));
    }

    #[test]
    fn doc_text_replacement_is_spliced() {
        let parts = decompose_prompt(JAVA_PROMPT, LanguageId::Java, Some("getPositive")).unwrap();
        let replaced = parts.doc.with_text("x");
        assert_eq!(replaced.raw(), format!("{}x{}", parts.doc.open, parts.doc.close));
    }
}
