//! Word-level view of docstring text: lossless segmentation into
//! whitespace and word runs, with blacklist protection rules.

use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Whitespace(String),
    Word(String),
}

impl Segment {
    pub fn text(&self) -> &str {
        match self {
            Segment::Whitespace(s) | Segment::Word(s) => s,
        }
    }
}

/// Split text into alternating whitespace/word segments. Joining the
/// segment texts reproduces the input exactly.
pub fn segment(text: &str) -> Vec<Segment> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut in_ws: Option<bool> = None;
    for c in text.chars() {
        let ws = c.is_whitespace();
        match in_ws {
            Some(prev) if prev == ws => current.push(c),
            Some(prev) => {
                out.push(if prev {
                    Segment::Whitespace(std::mem::take(&mut current))
                } else {
                    Segment::Word(std::mem::take(&mut current))
                });
                current.push(c);
                in_ws = Some(ws);
            }
            None => {
                current.push(c);
                in_ws = Some(ws);
            }
        }
    }
    if let Some(prev) = in_ws {
        out.push(if prev {
            Segment::Whitespace(current)
        } else {
            Segment::Word(current)
        });
    }
    out
}

pub fn join(segments: &[Segment]) -> String {
    segments.iter().map(|s| s.text()).collect()
}

/// The alphabetic core of a word: leading/trailing sentence punctuation
/// stripped. Empty when the word is not a plain alphabetic word.
pub fn alpha_core(word: &str) -> Option<&str> {
    let trimmed = word.trim_matches(|c: char| matches!(c, ',' | '.' | ';' | ':' | '!' | '?'));
    if trimmed.is_empty() || !trimmed.chars().all(|c| c.is_alphabetic()) {
        return None;
    }
    Some(trimmed)
}

/// A word is protected when it must never be perturbed: it is code-like
/// (contains anything but letters and sentence punctuation) or its core
/// matches the blacklist.
pub fn is_protected(word: &str, blacklist: &BTreeSet<String>) -> bool {
    match alpha_core(word) {
        None => true,
        Some(core) => {
            blacklist.contains(core) || blacklist.contains(&core.to_lowercase())
        }
    }
}

/// Match `replacement`'s capitalization to `original` (first letter only).
pub fn match_case(original: &str, replacement: &str) -> String {
    let starts_upper = original.chars().next().map(|c| c.is_uppercase()).unwrap_or(false);
    if starts_upper {
        let mut chars = replacement.chars();
        match chars.next() {
            Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
            None => String::new(),
        }
    } else {
        replacement.to_string()
    }
}

/// Word indices that start a sentence: the first word of the text and any
/// word following one that ends with sentence-final punctuation.
pub fn sentence_initial_flags(segments: &[Segment]) -> Vec<bool> {
    let mut flags = Vec::new();
    let mut at_start = true;
    for seg in segments {
        if let Segment::Word(w) = seg {
            flags.push(at_start);
            at_start = w.ends_with('.') || w.ends_with('!') || w.ends_with('?');
        }
    }
    flags
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segmentation_is_lossless() {
        let text = "  Filter an input list,\n of strings. ";
        assert_eq!(join(&segment(text)), text);
    }

    #[test]
    fn cores_strip_sentence_punctuation() {
        assert_eq!(alpha_core("prefix."), Some("prefix"));
        assert_eq!(alpha_core("list,"), Some("list"));
        assert_eq!(alpha_core(">>>"), None);
        assert_eq!(alpha_core("getPositive([1])"), None);
        assert_eq!(alpha_core("a_b"), None);
    }

    #[test]
    fn protection_rules() {
        let blacklist: BTreeSet<String> =
            ["prefix".to_string(), "while".to_string()].into_iter().collect();
        assert!(is_protected("prefix", &blacklist));
        assert!(is_protected("prefix.", &blacklist));
        assert!(is_protected("While", &blacklist));
        assert!(is_protected(">>>", &blacklist));
        assert!(!is_protected("strings", &blacklist));
    }

    #[test]
    fn sentence_initial_detection() {
        let segs = segment("Filter the list. Return them all.");
        let flags = sentence_initial_flags(&segs);
        // Filter, the, list., Return, them, all.
        assert_eq!(flags, vec![true, false, false, true, false, false]);
    }
}
