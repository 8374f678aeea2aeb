//! Realize a function rename inside a prompt.

use super::NlError;
use crate::langkit::{decompose_prompt, tokenize_spanned, LanguageId, TokenKind};
use regex::Regex;

/// Replace every identifier-token occurrence of `old` in the prompt's
/// code parts with `new`. Inside the docstring only code-like mentions
/// are rewritten: backticked names and call forms. Substring matches
/// inside longer identifiers are never touched.
pub fn apply_rename(
    prompt: &str,
    language: LanguageId,
    old: &str,
    new: &str,
) -> Result<String, NlError> {
    let parts = decompose_prompt(prompt, language, Some(old))
        .map_err(|_| NlError::OldNameNotFound(old.to_string()))?;
    let in_signature = tokenize_spanned(&parts.signature, language)
        .iter()
        .any(|t| t.kind == TokenKind::Identifier && t.text == old);
    if !in_signature {
        return Err(NlError::OldNameNotFound(old.to_string()));
    }

    let header = rename_identifier_tokens(&parts.header, language, old, new);
    let signature = rename_identifier_tokens(&parts.signature, language, old, new);
    let body = rename_identifier_tokens(&parts.body, language, old, new);
    let trailer = rename_identifier_tokens(&parts.trailer, language, old, new);
    let doc = parts.doc.with_text(&rename_doc_mentions(&parts.doc.text, old, new));

    Ok(format!("{header}{}{signature}{body}{trailer}", doc.raw()))
}

/// Token-boundary replacement over lexed identifiers.
pub fn rename_identifier_tokens(source: &str, language: LanguageId, old: &str, new: &str) -> String {
    let tokens = tokenize_spanned(source, language);
    let mut out = String::with_capacity(source.len());
    let mut cursor = 0usize;
    for t in &tokens {
        if t.kind == TokenKind::Identifier && t.text == old {
            out.push_str(&source[cursor..t.start]);
            out.push_str(new);
            cursor = t.end;
        }
    }
    out.push_str(&source[cursor..]);
    out
}

/// Rewrite standalone code-like mentions in docstring text: `` `old` ``
/// and call forms `old(...)`.
fn rename_doc_mentions(doc_text: &str, old: &str, new: &str) -> String {
    let escaped = regex::escape(old);
    let call = Regex::new(&format!(r"\b{escaped}\s*\(")).expect("valid regex");
    let out = call
        .replace_all(doc_text, |caps: &regex::Captures| {
            caps.get(0).expect("match").as_str().replacen(old, new, 1)
        })
        .into_owned();
    let ticked = Regex::new(&format!("`{escaped}`")).expect("valid regex");
    ticked.replace_all(&out, format!("`{new}`")).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;

    const PROMPT: &str = "class Solution {\n    /**\n     Return only positive numbers.\n     >>> getPositive(List.of(-1, 2))\n     [2]\n     Mentioning getPositiveCount and plain getPositive here.\n     */\n    public static List<Integer> getPositive(List<Integer> numbers) {\n";

    #[test]
    fn signature_occurrence_replaced() {
        let out = apply_rename(PROMPT, LanguageId::Java, "getPositive", "getOositive").unwrap();
        assert!(out.contains("public static List<Integer> getOositive("));
    }

    #[test]
    fn longer_identifiers_untouched() {
        let out = apply_rename(PROMPT, LanguageId::Java, "getPositive", "getOositive").unwrap();
        assert!(out.contains("getPositiveCount"));
    }

    #[test]
    fn docstring_call_form_replaced_plain_mention_kept() {
        let out = apply_rename(PROMPT, LanguageId::Java, "getPositive", "getOositive").unwrap();
        assert!(out.contains(">>> getOositive(List.of(-1, 2))"));
        assert!(out.contains("plain getPositive here"));
    }

    #[test]
    fn missing_old_name_is_an_error() {
        let err = apply_rename(PROMPT, LanguageId::Java, "nosuch", "x").unwrap_err();
        assert!(matches!(err, NlError::OldNameNotFound(_)));
    }

    #[test]
    fn reassembly_only_differs_in_name() {
        let out = apply_rename(PROMPT, LanguageId::Java, "getPositive", "getPositiveX").unwrap();
        let back = out.replace("getPositiveX", "getPositive");
        assert_eq!(back, PROMPT);
    }
}
