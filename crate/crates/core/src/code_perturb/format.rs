//! The six format perturbations. All of them are total and keep the
//! token stream intact (modulo comment delimiter style for
//! doc2comments); only whitespace and comment layout move.

use super::statements::{indent_of, line_spans};
use crate::langkit::{tokenize_spanned, DocBlock, DocStyle, LanguageId, PromptParts};
use crate::seed;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FormatStrategy {
    Doc2Comments,
    NewLineAfterCode,
    NewLineAfterDoc,
    NewLines,
    SplitLines,
    TabIndent,
}

impl FormatStrategy {
    pub const ALL: [FormatStrategy; 6] = [
        FormatStrategy::Doc2Comments,
        FormatStrategy::NewLineAfterCode,
        FormatStrategy::NewLineAfterDoc,
        FormatStrategy::NewLines,
        FormatStrategy::SplitLines,
        FormatStrategy::TabIndent,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            FormatStrategy::Doc2Comments => "doc2comments",
            FormatStrategy::NewLineAfterCode => "new_line_aftercode",
            FormatStrategy::NewLineAfterDoc => "new_line_afterdoc",
            FormatStrategy::NewLines => "new_lines",
            FormatStrategy::SplitLines => "split_lines",
            FormatStrategy::TabIndent => "tab_indent",
        }
    }
}

/// Per-line probability that tab_indent rewrites a line's indentation.
const TAB_INDENT_RATE: f64 = 0.5;

pub fn perturb_format(
    parts: &PromptParts,
    strategy: FormatStrategy,
    seed_value: u64,
    language: LanguageId,
) -> PromptParts {
    let mut rng = seed::rng(seed_value);
    let mut out = parts.clone();
    match strategy {
        FormatStrategy::Doc2Comments => {
            out.doc = doc_to_line_comments(&parts.doc);
        }
        FormatStrategy::NewLineAfterCode => {
            out.body.push('\n');
        }
        FormatStrategy::NewLineAfterDoc => {
            // One blank line between the docstring and the signature.
            out.signature = format!("\n{}", parts.signature);
        }
        FormatStrategy::NewLines => {
            let spans = line_spans(&parts.body);
            if spans.is_empty() {
                out.body.push('\n');
            } else {
                let at = rng.gen_range(0..=spans.len());
                let pos = if at == spans.len() {
                    parts.body.len()
                } else {
                    spans[at].0
                };
                let mut body = parts.body.clone();
                body.insert(pos, '\n');
                out.body = body;
            }
        }
        FormatStrategy::SplitLines => {
            out.body = split_longest_line(&parts.body, language);
        }
        FormatStrategy::TabIndent => {
            out.body = tab_indent(&parts.body, &mut rng);
        }
    }
    out
}

/// Convert a block-comment docstring into per-line `//` comments.
fn doc_to_line_comments(doc: &DocBlock) -> DocBlock {
    if doc.style != DocStyle::Block {
        return doc.clone();
    }
    let indent = indent_of(&doc.open).to_string();
    let mut lines = Vec::new();
    for line in doc.text.lines() {
        let content = line.trim_start();
        if content.is_empty() {
            lines.push(format!("{indent}//"));
        } else {
            lines.push(format!("{indent}// {content}"));
        }
    }
    // Blank first lines come from the newline right after the opener.
    while lines.first().map(|l| l.trim() == "//").unwrap_or(false) {
        lines.remove(0);
    }
    let mut text = lines.join("\n");
    text.push('\n');
    DocBlock {
        style: DocStyle::Lines,
        open: String::new(),
        text,
        close: String::new(),
    }
}

/// Break the longest body line at the token boundary nearest its
/// midpoint; the first of equal-longest lines wins.
fn split_longest_line(body: &str, language: LanguageId) -> String {
    let spans = line_spans(body);
    let Some(&(start, end)) = spans.iter().max_by_key(|(s, e)| {
        let line = &body[*s..*e];
        line.trim_end_matches('\n').len()
    }) else {
        return body.to_string();
    };
    // max_by_key returns the last maximum; scan for the first instead.
    let longest_len = body[start..end].trim_end_matches('\n').len();
    let (start, end) = spans
        .iter()
        .copied()
        .find(|(s, e)| body[*s..*e].trim_end_matches('\n').len() == longest_len)
        .unwrap_or((start, end));

    let line = body[start..end].trim_end_matches('\n');
    let tokens = tokenize_spanned(line, language);
    if tokens.len() < 2 {
        return body.to_string();
    }
    let mid = line.len() / 2;
    // Candidate break points: gaps between consecutive tokens.
    let mut best: Option<(usize, usize, usize)> = None; // (distance, gap_start, gap_end)
    for pair in tokens.windows(2) {
        let gap_start = pair[0].end;
        let gap_end = pair[1].start;
        let distance = gap_start.abs_diff(mid);
        let better = match best {
            None => true,
            Some((bd, _, _)) => distance < bd,
        };
        if better {
            best = Some((distance, gap_start, gap_end));
        }
    }
    let Some((_, gap_start, gap_end)) = best else {
        return body.to_string();
    };
    let indent = indent_of(line);
    let new_line = format!(
        "{}\n{}{}",
        &line[..gap_start],
        indent,
        &line[gap_end..]
    );
    let mut out = String::with_capacity(body.len() + indent.len() + 1);
    out.push_str(&body[..start]);
    out.push_str(&new_line);
    out.push_str(&body[start + line.len()..]);
    out
}

/// Replace leading space runs with tabs (or leading tabs with four
/// spaces) on seeded lines.
fn tab_indent(body: &str, rng: &mut impl Rng) -> String {
    let mut out_lines = Vec::new();
    for line in body.split_inclusive('\n') {
        let (content, newline) = match line.strip_suffix('\n') {
            Some(c) => (c, "\n"),
            None => (line, ""),
        };
        let indent = indent_of(content);
        if indent.is_empty() || !rng.gen_bool(TAB_INDENT_RATE) {
            out_lines.push(line.to_string());
            continue;
        }
        let rest = &content[indent.len()..];
        let new_indent = if indent.contains('\t') {
            indent.replace('\t', "    ")
        } else {
            let spaces = indent.chars().filter(|c| *c == ' ').count();
            "\t".repeat(spaces / 4) + &" ".repeat(spaces % 4)
        };
        out_lines.push(format!("{new_indent}{rest}{newline}"));
    }
    out_lines.concat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langkit::decompose_prompt;

    fn sample_parts() -> PromptParts {
        let prompt = "class Solution {\n    /**\n     Sum the list values.\n     */\n    public static int sumAll(List<Integer> xs) {\n        int total = 0;\n        for (int i = 0; i < xs.size(); i++) {\n";
        let mut parts = decompose_prompt(prompt, LanguageId::Java, Some("sumAll")).unwrap();
        parts.trailer = String::new();
        parts
    }

    fn code_token_texts(s: &str) -> Vec<String> {
        tokenize_spanned(s, LanguageId::Java)
            .into_iter()
            .filter(|t| !t.is_comment())
            .map(|t| t.text)
            .collect()
    }

    #[test]
    fn new_line_afterdoc_adds_exactly_one_blank_line() {
        let parts = sample_parts();
        let out = perturb_format(&parts, FormatStrategy::NewLineAfterDoc, 0, LanguageId::Java);
        assert_eq!(out.signature, format!("\n{}", parts.signature));
        assert_eq!(out.body, parts.body);
        assert_eq!(out.doc, parts.doc);
    }

    #[test]
    fn new_line_aftercode_appends_blank_line() {
        let parts = sample_parts();
        let out = perturb_format(&parts, FormatStrategy::NewLineAfterCode, 0, LanguageId::Java);
        assert_eq!(out.body, format!("{}\n", parts.body));
    }

    #[test]
    fn doc2comments_preserves_words() {
        let parts = sample_parts();
        let out = perturb_format(&parts, FormatStrategy::Doc2Comments, 0, LanguageId::Java);
        assert_eq!(out.doc.style, DocStyle::Lines);
        assert!(out.doc.text.contains("// Sum the list values."), "{}", out.doc.text);
        assert!(!out.doc.raw().contains("/*"));
    }

    #[test]
    fn split_lines_preserves_token_stream() {
        let parts = sample_parts();
        let out = perturb_format(&parts, FormatStrategy::SplitLines, 0, LanguageId::Java);
        assert_eq!(code_token_texts(&out.body), code_token_texts(&parts.body));
        assert_eq!(out.body.lines().count(), parts.body.lines().count() + 1);
    }

    #[test]
    fn tab_indent_swaps_spaces_for_tabs() {
        let parts = sample_parts();
        let mut saw_tab = false;
        for seed in 0..10 {
            let out = perturb_format(&parts, FormatStrategy::TabIndent, seed, LanguageId::Java);
            assert_eq!(code_token_texts(&out.body), code_token_texts(&parts.body));
            if out.body.contains('\t') {
                saw_tab = true;
            }
        }
        assert!(saw_tab);
    }

    #[test]
    fn tab_indent_on_four_spaces_yields_tab() {
        let line = "    int x = 1;\n";
        let mut rng = seed::rng(0);
        // Try a few seeds until the 0.5 gate fires; determinism per seed
        // is covered elsewhere.
        let mut hit = false;
        for s in 0..10u64 {
            rng = seed::rng(s);
            let out = tab_indent(line, &mut rng);
            if out.starts_with('\t') {
                assert_eq!(out, "\tint x = 1;\n");
                hit = true;
                break;
            }
        }
        assert!(hit);
    }

    #[test]
    fn new_lines_inserts_single_blank_line_in_body() {
        let parts = sample_parts();
        let out = perturb_format(&parts, FormatStrategy::NewLines, 1, LanguageId::Java);
        assert_eq!(out.body.matches('\n').count(), parts.body.matches('\n').count() + 1);
        assert_eq!(
            out.body.replace("\n\n", "\n"),
            parts.body
        );
    }

    #[test]
    fn all_format_strategies_are_total_and_deterministic() {
        let parts = sample_parts();
        for strat in FormatStrategy::ALL {
            let a = perturb_format(&parts, strat, 9, LanguageId::Java);
            let b = perturb_format(&parts, strat, 9, LanguageId::Java);
            assert_eq!(a, b, "{strat:?}");
        }
    }
}
