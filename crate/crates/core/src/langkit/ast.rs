//! Tree-sitter parsing and depth-bounded subtree enumeration.
//!
//! Grammar definitions are vendored per language through the tree-sitter
//! grammar crates; parsing is error-tolerant, so perturbed and partial
//! sources still produce a tree.

use super::LanguageId;
use std::collections::BTreeMap;
use thiserror::Error;
use tree_sitter::{Node, Parser};

#[derive(Debug, Error)]
pub enum AstError {
    #[error("grammar rejected by tree-sitter: {0}")]
    Grammar(String),
    #[error("parser returned no tree")]
    NoTree,
}

fn grammar(language: LanguageId) -> tree_sitter::Language {
    match language {
        LanguageId::Java => tree_sitter_java::language(),
        LanguageId::Cpp => tree_sitter_cpp::language(),
        LanguageId::JavaScript => tree_sitter_javascript::language(),
    }
}

/// Parse `source`, tolerating errors. One parser per call: parser state
/// is not shared across threads.
pub fn parse_tree(source: &str, language: LanguageId) -> Result<tree_sitter::Tree, AstError> {
    let mut parser = Parser::new();
    parser
        .set_language(&grammar(language))
        .map_err(|e| AstError::Grammar(e.to_string()))?;
    parser.parse(source, None).ok_or(AstError::NoTree)
}

fn is_comment_node(node: &Node) -> bool {
    node.kind().contains("comment")
}

/// Multiset of depth-bounded subtree shapes.
///
/// Every named, non-comment node with at least one named child contributes
/// one entry: its s-expression of node kinds truncated at `depth_bound`
/// levels. The multiset is what CodeBLEU-style syntax matching compares.
pub fn subtree_multiset(
    source: &str,
    language: LanguageId,
    depth_bound: usize,
) -> Result<BTreeMap<String, usize>, AstError> {
    let tree = parse_tree(source, language)?;
    let mut out = BTreeMap::new();
    collect(tree.root_node(), depth_bound, &mut out);
    Ok(out)
}

fn collect(node: Node, depth_bound: usize, out: &mut BTreeMap<String, usize>) {
    if !is_comment_node(&node) && has_named_child(&node) {
        let mut sexp = String::new();
        write_sexp(&node, depth_bound, &mut sexp);
        *out.entry(sexp).or_insert(0) += 1;
    }
    let mut cursor = node.walk();
    for child in node.named_children(&mut cursor) {
        collect(child, depth_bound, out);
    }
}

fn has_named_child(node: &Node) -> bool {
    let mut cursor = node.walk();
    let found = node
        .named_children(&mut cursor)
        .any(|c| !is_comment_node(&c));
    found
}

fn write_sexp(node: &Node, depth_left: usize, out: &mut String) {
    out.push('(');
    out.push_str(node.kind());
    if depth_left > 0 {
        let mut cursor = node.walk();
        for child in node.named_children(&mut cursor) {
            if is_comment_node(&child) {
                continue;
            }
            out.push(' ');
            write_sexp(&child, depth_left - 1, out);
        }
    }
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_three_languages() {
        for (lang, src) in [
            (LanguageId::Java, "class A { int f() { return 1; } }"),
            (LanguageId::Cpp, "int f() { return 1; }"),
            (LanguageId::JavaScript, "function f() { return 1; }"),
        ] {
            let tree = parse_tree(src, lang).unwrap();
            assert!(!tree.root_node().has_error());
        }
    }

    #[test]
    fn partial_source_still_yields_subtrees() {
        let m = subtree_multiset(
            "int f(int x) {\n    if (x > 0) {\n",
            LanguageId::Cpp,
            3,
        )
        .unwrap();
        assert!(!m.is_empty());
    }

    #[test]
    fn identical_sources_have_identical_multisets() {
        let src = "function f(a) {\n    let s = 0;\n    for (let i = 0; i < a.length; i++) {\n        s += a[i];\n    }\n    return s;\n}\n";
        let a = subtree_multiset(src, LanguageId::JavaScript, 3).unwrap();
        let b = subtree_multiset(src, LanguageId::JavaScript, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn comment_style_does_not_change_multiset() {
        let block = "/* doc */\nint f() { return 1; }";
        let line = "// doc\nint f() { return 1; }";
        let a = subtree_multiset(block, LanguageId::Cpp, 3).unwrap();
        let b = subtree_multiset(line, LanguageId::Cpp, 3).unwrap();
        assert_eq!(a, b);
    }
}
