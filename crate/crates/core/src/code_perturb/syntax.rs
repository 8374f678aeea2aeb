//! The six syntax perturbations. All of them rewrite body text only and
//! preserve program semantics; a strategy with no applicable site
//! reports `Inapplicable` instead of guessing.

use super::statements::{
    code_tokens, indent_of, line_spans, looks_like_declaration,
    most_frequent_variable,
};
use crate::langkit::{LanguageId, Token, TokenKind};
use crate::nl_perturb;
use crate::providers::{ProviderSet, ProviderError};
use crate::seed;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SyntaxStrategy {
    DeadCodeInserter,
    ForWhileTransformer,
    OperandSwap,
    VarRenamerCB,
    VarRenamerNaive,
    VarRenamerRN,
}

impl SyntaxStrategy {
    pub const ALL: [SyntaxStrategy; 6] = [
        SyntaxStrategy::DeadCodeInserter,
        SyntaxStrategy::ForWhileTransformer,
        SyntaxStrategy::OperandSwap,
        SyntaxStrategy::VarRenamerCB,
        SyntaxStrategy::VarRenamerNaive,
        SyntaxStrategy::VarRenamerRN,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            SyntaxStrategy::DeadCodeInserter => "DeadCodeInserter",
            SyntaxStrategy::ForWhileTransformer => "ForWhileTransformer",
            SyntaxStrategy::OperandSwap => "OperandSwap",
            SyntaxStrategy::VarRenamerCB => "VarRenamerCB",
            SyntaxStrategy::VarRenamerNaive => "VarRenamerNaive",
            SyntaxStrategy::VarRenamerRN => "VarRenamerRN",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SyntaxOutcome {
    Rewritten {
        body: String,
        /// `(old, new)` when the strategy renamed an identifier.
        rename: Option<(String, String)>,
    },
    Inapplicable,
}

/// Fallback pool for VarRenamerCB when no masked-rename provider is
/// configured.
const CB_FALLBACK_NAMES: &[&str] = &[
    "data", "value", "item", "temp", "res", "entry", "buf", "acc",
];

/// Subtree budget for copied dead-code statements.
const DEAD_CODE_MAX_TOKENS: usize = 30;

pub fn perturb_syntax_body(
    body: &str,
    strategy: SyntaxStrategy,
    seed_value: u64,
    language: LanguageId,
    providers: &ProviderSet,
) -> Result<SyntaxOutcome, ProviderError> {
    let mut rng = seed::rng(seed_value);
    let outcome = match strategy {
        SyntaxStrategy::DeadCodeInserter => dead_code_insert(body, language, &mut rng),
        SyntaxStrategy::ForWhileTransformer => for_while_transform(body, language, &mut rng),
        SyntaxStrategy::OperandSwap => operand_swap(body, language, &mut rng),
        SyntaxStrategy::VarRenamerNaive => {
            rename_most_frequent(body, language, &mut rng, |_, _| Ok(Some("VAR_0".to_string())))?
        }
        SyntaxStrategy::VarRenamerRN => {
            rename_most_frequent(body, language, &mut rng, |rng, taken| {
                Ok(Some(random_name(rng, taken)))
            })?
        }
        SyntaxStrategy::VarRenamerCB => {
            rename_most_frequent(body, language, &mut rng, |rng, taken| {
                match providers.renamer() {
                    Some(client) => {
                        let masked = mask_most_frequent(body, language);
                        let candidates = client.candidates(&masked, language.as_str())?;
                        Ok(candidates
                            .into_iter()
                            .find(|c| {
                                nl_perturb::is_legal_identifier(c, language) && !taken.contains(c)
                            }))
                    }
                    None => {
                        let start = rng.gen_range(0..CB_FALLBACK_NAMES.len());
                        let pick = (0..CB_FALLBACK_NAMES.len())
                            .map(|i| CB_FALLBACK_NAMES[(start + i) % CB_FALLBACK_NAMES.len()])
                            .find(|c| !taken.contains(*c))
                            .map(|c| c.to_string());
                        Ok(pick)
                    }
                }
            })?
        }
    };
    Ok(outcome)
}

// ---------------------------------------------------------------------
// Dead code insertion
// ---------------------------------------------------------------------

/// Copy a contiguous run of 1-3 eligible statement lines and insert them
/// right after the run, wrapped in a never-executing block. Inserting
/// after the copied statements keeps every referenced name in scope.
fn dead_code_insert(body: &str, language: LanguageId, rng: &mut impl Rng) -> SyntaxOutcome {
    let spans = line_spans(body);
    let tokens = code_tokens(body, language);
    let eligible: Vec<bool> = spans
        .iter()
        .map(|(start, end)| line_eligible_for_copy(body, &tokens, *start, *end, language))
        .collect();

    // All (start, len) runs of eligible lines within the token budget.
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for start in 0..spans.len() {
        if !eligible[start] {
            continue;
        }
        let mut token_budget = 0usize;
        for len in 1..=3usize {
            let idx = start + len - 1;
            if idx >= spans.len() || !eligible[idx] {
                break;
            }
            token_budget += tokens
                .iter()
                .filter(|t| t.start >= spans[idx].0 && t.end <= spans[idx].1)
                .count();
            if token_budget > DEAD_CODE_MAX_TOKENS {
                break;
            }
            runs.push((start, len));
        }
    }
    if runs.is_empty() {
        return SyntaxOutcome::Inapplicable;
    }
    let (run_start, run_len) = runs[rng.gen_range(0..runs.len())];

    // Java rejects `while (false)` bodies as unreachable; `if (false)` is
    // allowed in every target language.
    let wrapper = if language == LanguageId::Java || rng.gen_bool(0.5) {
        "if (false)"
    } else {
        "while (false)"
    };

    let first_line = &body[spans[run_start].0..spans[run_start].1];
    let indent = indent_of(first_line).to_string();
    let mut block = format!("{indent}{wrapper} {{\n");
    for i in run_start..run_start + run_len {
        let line = &body[spans[i].0..spans[i].1];
        block.push_str(&format!("{indent}    {}\n", line.trim_end().trim_start()));
    }
    block.push_str(&format!("{indent}}}\n"));

    let insert_at = spans[run_start + run_len - 1].1;
    let mut out = String::with_capacity(body.len() + block.len());
    out.push_str(&body[..insert_at]);
    if !out.ends_with('\n') {
        out.push('\n');
    }
    out.push_str(&block);
    out.push_str(&body[insert_at..]);
    SyntaxOutcome::Rewritten {
        body: out,
        rename: None,
    }
}

fn line_eligible_for_copy(
    body: &str,
    tokens: &[Token],
    start: usize,
    end: usize,
    language: LanguageId,
) -> bool {
    let line = &body[start..end];
    let trimmed = line.trim();
    if trimmed.is_empty() || !trimmed.ends_with(';') {
        return false;
    }
    let line_tokens: Vec<&Token> = tokens
        .iter()
        .filter(|t| t.start >= start && t.end <= end)
        .collect();
    if line_tokens.is_empty() {
        return false;
    }
    // Balanced brackets within the line: complete statement.
    let mut paren = 0i32;
    let mut bracket = 0i32;
    let mut brace = 0i32;
    for t in &line_tokens {
        match t.text.as_str() {
            "(" => paren += 1,
            ")" => paren -= 1,
            "[" => bracket += 1,
            "]" => bracket -= 1,
            "{" => brace += 1,
            "}" => brace -= 1,
            _ => {}
        }
    }
    if paren != 0 || bracket != 0 || brace != 0 {
        return false;
    }
    let first = line_tokens[0];
    if matches!(
        first.text.as_str(),
        "case" | "default" | "break" | "continue" | "else" | "catch" | "finally" | "do"
    ) {
        return false;
    }
    // Copied declarations would collide with the originals in Java, which
    // forbids local shadowing.
    if language == LanguageId::Java && looks_like_declaration(&line_tokens, language) {
        return false;
    }
    true
}

// ---------------------------------------------------------------------
// For/while transformation
// ---------------------------------------------------------------------

struct ForLoop {
    for_start: usize,
    header_end: usize, // one past the `{`
    init: String,
    cond: String,
    update: String,
    close_brace_start: usize,
    indent: String,
    body_has_continue: bool,
}

struct WhileLoop {
    while_start: usize,
    cond: String,
    header_end: usize, // one past the `{`
}

fn for_while_transform(body: &str, language: LanguageId, rng: &mut impl Rng) -> SyntaxOutcome {
    let tokens = code_tokens(body, language);
    let fors = find_canonical_for_loops(body, &tokens);
    let whiles = find_braced_while_loops(body, &tokens);

    let applicable_fors: Vec<&ForLoop> = fors.iter().filter(|f| !f.body_has_continue).collect();
    let total = applicable_fors.len() + whiles.len();
    if total == 0 {
        return SyntaxOutcome::Inapplicable;
    }
    let pick = rng.gen_range(0..total);

    if pick < applicable_fors.len() {
        let f = applicable_fors[pick];
        // for (init; cond; update) { body } => init; while (cond) { body update; }
        let mut replacement = String::new();
        if !f.init.trim().is_empty() {
            let init = f.init.trim();
            let init = init.strip_suffix(';').unwrap_or(init);
            replacement.push_str(&format!("{init};\n{}", f.indent));
        }
        let cond = if f.cond.trim().is_empty() {
            "true".to_string()
        } else {
            f.cond.trim().to_string()
        };
        replacement.push_str(&format!("while ({cond}) {{"));

        let mut update_block = String::new();
        for piece in split_top_level_commas(&f.update) {
            let piece = piece.trim();
            if !piece.is_empty() {
                update_block.push_str(&format!("{}    {piece};\n", f.indent));
            }
        }

        let mut out = String::new();
        out.push_str(&body[..f.for_start]);
        out.push_str(&replacement);
        out.push_str(&body[f.header_end..f.close_brace_start]);
        out.push_str(&update_block);
        out.push_str(&body[f.close_brace_start..]);
        SyntaxOutcome::Rewritten {
            body: out,
            rename: None,
        }
    } else {
        let w = &whiles[pick - applicable_fors.len()];
        // while (cond) { ... } => for (; cond; ) { ... }
        let mut out = String::new();
        out.push_str(&body[..w.while_start]);
        out.push_str(&format!("for (; {}; ) {{", w.cond.trim()));
        out.push_str(&body[w.header_end..]);
        SyntaxOutcome::Rewritten {
            body: out,
            rename: None,
        }
    }
}

fn find_canonical_for_loops(body: &str, tokens: &[Token]) -> Vec<ForLoop> {
    let mut out = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if !(t.kind == TokenKind::Identifier && t.text == "for") {
            continue;
        }
        let Some(open) = tokens.get(i + 1).filter(|t| t.text == "(") else {
            continue;
        };
        // Matching close paren and top-level semicolons.
        let mut depth = 0i32;
        let mut semis = Vec::new();
        let mut close_idx = None;
        let mut range_style = false;
        for (j, tj) in tokens.iter().enumerate().skip(i + 1) {
            match tj.text.as_str() {
                "(" => depth += 1,
                ")" => {
                    depth -= 1;
                    if depth == 0 {
                        close_idx = Some(j);
                        break;
                    }
                }
                ";" if depth == 1 => semis.push(j),
                ":" if depth == 1 => range_style = true,
                "of" | "in" if depth == 1 && tj.kind == TokenKind::Identifier => {
                    range_style = true
                }
                _ => {}
            }
        }
        let Some(close_idx) = close_idx else { continue };
        if range_style || semis.len() != 2 {
            continue; // enhanced/range/iterator loops are inapplicable
        }
        let Some(brace) = tokens.get(close_idx + 1).filter(|t| t.text == "{") else {
            continue;
        };
        let Some(close_brace) = matching_close_brace(tokens, close_idx + 1) else {
            continue;
        };

        let init = body[open.end..tokens[semis[0]].start].to_string();
        let cond = body[tokens[semis[0]].end..tokens[semis[1]].start].to_string();
        let update = body[tokens[semis[1]].end..tokens[close_idx].start].to_string();
        let line_begin = body[..t.start].rfind('\n').map(|p| p + 1).unwrap_or(0);
        let indent = indent_of(&body[line_begin..t.start.max(line_begin)]).to_string();
        let body_has_continue = tokens[close_idx + 1..]
            .iter()
            .take_while(|tk| tk.start < tokens[close_brace].start)
            .any(|tk| tk.kind == TokenKind::Identifier && tk.text == "continue");

        out.push(ForLoop {
            for_start: t.start,
            header_end: brace.end,
            init,
            cond,
            update,
            close_brace_start: {
                let cb = &tokens[close_brace];
                body[..cb.start].rfind('\n').map(|p| p + 1).unwrap_or(0)
            },
            indent,
            body_has_continue,
        });
    }
    out
}

fn find_braced_while_loops(body: &str, tokens: &[Token]) -> Vec<WhileLoop> {
    let mut out = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if !(t.kind == TokenKind::Identifier && t.text == "while") {
            continue;
        }
        // `do { } while (...)` tails end with `;`, never `{`.
        let Some(open) = tokens.get(i + 1).filter(|t| t.text == "(") else {
            continue;
        };
        let mut depth = 0i32;
        let mut close_idx = None;
        for (j, tj) in tokens.iter().enumerate().skip(i + 1) {
            match tj.text.as_str() {
                "(" => depth += 1,
                ")" => {
                    depth -= 1;
                    if depth == 0 {
                        close_idx = Some(j);
                        break;
                    }
                }
                _ => {}
            }
        }
        let Some(close_idx) = close_idx else { continue };
        let Some(brace) = tokens.get(close_idx + 1).filter(|t| t.text == "{") else {
            continue;
        };
        if matching_close_brace(tokens, close_idx + 1).is_none() {
            continue;
        }
        out.push(WhileLoop {
            while_start: t.start,
            cond: body[open.end..tokens[close_idx].start].to_string(),
            header_end: brace.end,
        });
    }
    out
}

fn matching_close_brace(tokens: &[Token], open_idx: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (j, t) in tokens.iter().enumerate().skip(open_idx) {
        match t.text.as_str() {
            "{" => depth += 1,
            "}" => {
                depth -= 1;
                if depth == 0 {
                    return Some(j);
                }
            }
            _ => {}
        }
    }
    None
}

fn split_top_level_commas(text: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut current));
                continue;
            }
            _ => {}
        }
        current.push(c);
    }
    if !current.trim().is_empty() {
        parts.push(current);
    }
    parts
}

// ---------------------------------------------------------------------
// Operand swap
// ---------------------------------------------------------------------

struct Comparison {
    left_start: usize,
    right_end: usize,
    left: String,
    op: String,
    right: String,
}

fn operand_swap(body: &str, language: LanguageId, rng: &mut impl Rng) -> SyntaxOutcome {
    let tokens = code_tokens(body, language);
    let candidates = find_swappable_comparisons(body, &tokens);
    if candidates.is_empty() {
        return SyntaxOutcome::Inapplicable;
    }
    let c = &candidates[rng.gen_range(0..candidates.len())];
    let mirrored = mirror_operator(&c.op);
    let mut out = String::new();
    out.push_str(&body[..c.left_start]);
    out.push_str(&format!("{} {} {}", c.right.trim(), mirrored, c.left.trim()));
    out.push_str(&body[c.right_end..]);
    SyntaxOutcome::Rewritten {
        body: out,
        rename: None,
    }
}

fn mirror_operator(op: &str) -> &'static str {
    match op {
        "<" => ">",
        ">" => "<",
        "<=" => ">=",
        ">=" => "<=",
        "==" => "==",
        "!=" => "!=",
        "===" => "===",
        "!==" => "!==",
        _ => unreachable!("not a comparison operator"),
    }
}

fn find_swappable_comparisons(body: &str, tokens: &[Token]) -> Vec<Comparison> {
    let mut out = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if t.kind != TokenKind::Operator
            || !matches!(t.text.as_str(), "<" | ">" | "<=" | ">=" | "==" | "!=" | "===" | "!==")
        {
            continue;
        }
        if !in_condition_context(tokens, i) {
            continue;
        }
        let Some((li, lj)) = scan_operand(tokens, i, Direction::Left) else {
            continue;
        };
        let Some((ri, rj)) = scan_operand(tokens, i, Direction::Right) else {
            continue;
        };
        if !operand_is_pure(&tokens[li..=lj]) || !operand_is_pure(&tokens[ri..=rj]) {
            continue;
        }
        out.push(Comparison {
            left_start: tokens[li].start,
            right_end: tokens[rj].end,
            left: body[tokens[li].start..tokens[lj].end].to_string(),
            op: t.text.clone(),
            right: body[tokens[ri].start..tokens[rj].end].to_string(),
        });
    }
    out
}

enum Direction {
    Left,
    Right,
}

/// Extent of one comparison operand: scan until a boundary token at
/// bracket balance zero. Returns inclusive token indices.
fn scan_operand(tokens: &[Token], op_idx: usize, dir: Direction) -> Option<(usize, usize)> {
    let boundary = |t: &Token, balance: i32| -> bool {
        if balance > 0 {
            return false;
        }
        matches!(
            t.text.as_str(),
            ";" | "," | "{" | "}" | "&&" | "||" | "!" | "?" | ":" | "=" | "+=" | "-=" | "*=" | "/="
                | "<" | ">" | "<=" | ">=" | "==" | "!=" | "===" | "!=="
        ) || (t.kind == TokenKind::Identifier && matches!(t.text.as_str(), "return" | "if" | "while" | "for"))
    };
    match dir {
        Direction::Left => {
            let mut balance = 0i32;
            let mut start = None;
            let mut j = op_idx;
            while j > 0 {
                j -= 1;
                let t = &tokens[j];
                match t.text.as_str() {
                    ")" | "]" => balance += 1,
                    "(" | "[" => {
                        if balance == 0 {
                            break;
                        }
                        balance -= 1;
                    }
                    _ => {}
                }
                if balance == 0 && boundary(t, 0) {
                    break;
                }
                start = Some(j);
            }
            let s = start?;
            if s > op_idx - 1 {
                return None;
            }
            Some((s, op_idx - 1))
        }
        Direction::Right => {
            let mut balance = 0i32;
            let mut end = None;
            for (j, t) in tokens.iter().enumerate().skip(op_idx + 1) {
                match t.text.as_str() {
                    "(" | "[" => balance += 1,
                    ")" | "]" => {
                        if balance == 0 {
                            break;
                        }
                        balance -= 1;
                    }
                    _ => {}
                }
                if balance == 0 && boundary(t, 0) {
                    break;
                }
                end = Some(j);
            }
            let e = end?;
            Some((op_idx + 1, e))
        }
    }
}

/// Operands must be side-effect-free expressions: identifiers, literals,
/// member accesses, subscripts, casts, and argument-free-ish calls.
/// Assignment and increment operators disqualify the operand.
fn operand_is_pure(tokens: &[Token]) -> bool {
    if tokens.is_empty() {
        return false;
    }
    for t in tokens {
        let bad = matches!(
            t.text.as_str(),
            "++" | "--" | "=" | "+=" | "-=" | "*=" | "/=" | "%=" | "new"
        );
        if bad {
            return false;
        }
    }
    true
}

/// A comparison participates in a condition when its innermost enclosing
/// parenthesis belongs to `if`/`while`, it sits in the middle section of
/// a canonical `for`, or its statement begins with `return`.
fn in_condition_context(tokens: &[Token], op_idx: usize) -> bool {
    // Innermost unclosed paren before op_idx.
    let mut stack: Vec<usize> = Vec::new();
    for (j, t) in tokens.iter().enumerate().take(op_idx) {
        match t.text.as_str() {
            "(" => stack.push(j),
            ")" => {
                stack.pop();
            }
            _ => {}
        }
    }
    let mut paren = stack.last().copied();
    while let Some(p) = paren {
        let before = p.checked_sub(1).map(|i| &tokens[i]);
        match before.map(|t| t.text.as_str()) {
            Some("if") | Some("while") => return true,
            Some("for") => {
                let semis = tokens[p..op_idx].iter().filter(|t| t.text == ";").count();
                return semis == 1;
            }
            Some("(") => {
                // Nested grouping parens: walk outward.
                let idx = p - 1;
                paren = Some(idx);
                continue;
            }
            _ => return false,
        }
    }
    // No enclosing paren: allow `return EXPR <op> EXPR;` statements.
    let mut j = op_idx;
    while j > 0 {
        j -= 1;
        let t = &tokens[j];
        if matches!(t.text.as_str(), ";" | "{" | "}") {
            return false;
        }
        if t.kind == TokenKind::Identifier && t.text == "return" {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------
// Variable renaming
// ---------------------------------------------------------------------

fn rename_most_frequent(
    body: &str,
    language: LanguageId,
    rng: &mut rand_chacha::ChaCha8Rng,
    pick_name: impl FnOnce(
        &mut rand_chacha::ChaCha8Rng,
        &std::collections::BTreeSet<String>,
    ) -> Result<Option<String>, ProviderError>,
) -> Result<SyntaxOutcome, ProviderError> {
    let tokens = code_tokens(body, language);
    let Some(target) = most_frequent_variable(&tokens, language) else {
        return Ok(SyntaxOutcome::Inapplicable);
    };
    let taken: std::collections::BTreeSet<String> = tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Identifier)
        .map(|t| t.text.clone())
        .collect();
    let Some(new_name) = pick_name(rng, &taken)? else {
        return Ok(SyntaxOutcome::Inapplicable);
    };
    if new_name == target || !nl_perturb::is_legal_identifier(&new_name, language) {
        return Ok(SyntaxOutcome::Inapplicable);
    }
    let renamed = crate::nl_perturb::rename_identifier_tokens(body, language, &target, &new_name);
    Ok(SyntaxOutcome::Rewritten {
        body: renamed,
        rename: Some((target, new_name)),
    })
}

/// Masked variant of the body for the rename provider: the most frequent
/// variable replaced by `<MASK>`.
fn mask_most_frequent(body: &str, language: LanguageId) -> String {
    let tokens = code_tokens(body, language);
    match most_frequent_variable(&tokens, language) {
        Some(target) => {
            crate::nl_perturb::rename_identifier_tokens(body, language, &target, "<MASK>")
        }
        None => body.to_string(),
    }
}

fn random_name(rng: &mut impl Rng, taken: &std::collections::BTreeSet<String>) -> String {
    const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    const ALNUM: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789";
    loop {
        let mut name = String::with_capacity(8);
        name.push(LETTERS[rng.gen_range(0..LETTERS.len())] as char);
        for _ in 1..8 {
            name.push(ALNUM[rng.gen_range(0..ALNUM.len())] as char);
        }
        if !taken.contains(&name) {
            return name;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::providers::ProviderSet;

    const JAVA_BODY: &str = "        List<Integer> result = new ArrayList<>();\n        for (int i = 0; i < numbers.size(); i++) {\n            if (numbers.get(i) > 0) {\n                result.add(numbers.get(i));\n            }\n        }\n        return result;\n    }\n}\n";

    fn apply(body: &str, strategy: SyntaxStrategy, seed: u64, lang: LanguageId) -> SyntaxOutcome {
        perturb_syntax_body(body, strategy, seed, lang, &ProviderSet::offline()).unwrap()
    }

    #[test]
    fn operand_swap_mirrors_comparison() {
        let body = "        if (a < b) {\n            return true;\n        }\n";
        match apply(body, SyntaxStrategy::OperandSwap, 0, LanguageId::Java) {
            SyntaxOutcome::Rewritten { body, .. } => {
                assert!(body.contains("if (b > a)"), "{body}");
            }
            other => panic!("expected rewrite, got {other:?}"),
        }
    }

    #[test]
    fn operand_swap_skips_generics() {
        let body = "        List<String> out = new ArrayList<>();\n        out.add(\"x\");\n";
        assert_eq!(
            apply(body, SyntaxStrategy::OperandSwap, 0, LanguageId::Java),
            SyntaxOutcome::Inapplicable
        );
    }

    #[test]
    fn operand_swap_handles_return_comparisons() {
        let body = "        return distance < threshold;\n";
        match apply(body, SyntaxStrategy::OperandSwap, 0, LanguageId::Java) {
            SyntaxOutcome::Rewritten { body, .. } => {
                assert!(body.contains("return threshold > distance;"), "{body}");
            }
            other => panic!("expected rewrite, got {other:?}"),
        }
    }

    #[test]
    fn var_renamer_naive_renames_most_frequent() {
        match apply(JAVA_BODY, SyntaxStrategy::VarRenamerNaive, 0, LanguageId::Java) {
            SyntaxOutcome::Rewritten { body, rename } => {
                assert_eq!(rename, Some(("i".to_string(), "VAR_0".to_string())));
                assert!(body.contains("for (int VAR_0 = 0; VAR_0 < numbers.size(); VAR_0++)"));
                // `result` is less frequent than `i`, stays put.
                assert!(body.contains("result.add"));
            }
            other => panic!("expected rewrite, got {other:?}"),
        }
    }

    #[test]
    fn var_renamer_rn_generates_alnum_name() {
        match apply(JAVA_BODY, SyntaxStrategy::VarRenamerRN, 3, LanguageId::Java) {
            SyntaxOutcome::Rewritten { rename, .. } => {
                let (_, new) = rename.unwrap();
                assert_eq!(new.len(), 8);
                assert!(new.chars().next().unwrap().is_ascii_lowercase());
                assert!(new.chars().all(|c| c.is_ascii_alphanumeric()));
            }
            other => panic!("expected rewrite, got {other:?}"),
        }
    }

    #[test]
    fn var_renamer_without_declarations_is_inapplicable() {
        let body = "        return x + y;\n";
        assert_eq!(
            apply(body, SyntaxStrategy::VarRenamerNaive, 0, LanguageId::Java),
            SyntaxOutcome::Inapplicable
        );
    }

    #[test]
    fn for_while_hoists_init_and_appends_update() {
        match apply(JAVA_BODY, SyntaxStrategy::ForWhileTransformer, 1, LanguageId::Java) {
            SyntaxOutcome::Rewritten { body, .. } => {
                assert!(body.contains("int i = 0;"), "{body}");
                assert!(body.contains("while (i < numbers.size()) {"), "{body}");
                assert!(body.contains("i++;"), "{body}");
            }
            other => panic!("expected rewrite, got {other:?}"),
        }
    }

    #[test]
    fn while_becomes_for() {
        let body = "        int i = 0;\n        while (i < n) {\n            i++;\n        }\n";
        match apply(body, SyntaxStrategy::ForWhileTransformer, 0, LanguageId::Java) {
            SyntaxOutcome::Rewritten { body, .. } => {
                assert!(body.contains("for (; i < n; ) {"), "{body}");
            }
            other => panic!("expected rewrite, got {other:?}"),
        }
    }

    #[test]
    fn loop_free_body_is_inapplicable_for_forwhile() {
        let body = "        return a + b;\n";
        assert_eq!(
            apply(body, SyntaxStrategy::ForWhileTransformer, 0, LanguageId::Java),
            SyntaxOutcome::Inapplicable
        );
    }

    #[test]
    fn enhanced_for_is_inapplicable() {
        let body = "        for (String s : strings) {\n            out.add(s);\n        }\n";
        assert_eq!(
            apply(body, SyntaxStrategy::ForWhileTransformer, 0, LanguageId::Java),
            SyntaxOutcome::Inapplicable
        );
    }

    #[test]
    fn dead_code_wraps_copied_statements() {
        match apply(JAVA_BODY, SyntaxStrategy::DeadCodeInserter, 2, LanguageId::Java) {
            SyntaxOutcome::Rewritten { body, .. } => {
                assert!(body.contains("if (false) {"), "{body}");
            }
            other => panic!("expected rewrite, got {other:?}"),
        }
    }

    #[test]
    fn dead_code_java_never_uses_while_false() {
        for seed in 0..30 {
            if let SyntaxOutcome::Rewritten { body, .. } =
                apply(JAVA_BODY, SyntaxStrategy::DeadCodeInserter, seed, LanguageId::Java)
            {
                assert!(!body.contains("while (false)"), "{body}");
            }
        }
    }

    #[test]
    fn dead_code_never_copies_java_declarations() {
        let body = "        int x = 1;\n        int y = 2;\n";
        assert_eq!(
            apply(body, SyntaxStrategy::DeadCodeInserter, 0, LanguageId::Java),
            SyntaxOutcome::Inapplicable
        );
        // The same lines are fair game in C++ where shadowing is legal.
        match apply(body, SyntaxStrategy::DeadCodeInserter, 0, LanguageId::Cpp) {
            SyntaxOutcome::Rewritten { body, .. } => {
                assert!(body.contains("(false)"), "{body}");
            }
            other => panic!("expected rewrite, got {other:?}"),
        }
    }

    #[test]
    fn transforms_are_deterministic() {
        for strategy in SyntaxStrategy::ALL {
            let a = apply(JAVA_BODY, strategy, 5, LanguageId::Java);
            let b = apply(JAVA_BODY, strategy, 5, LanguageId::Java);
            assert_eq!(a, b, "{strategy:?}");
        }
    }
}
