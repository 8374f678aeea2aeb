//! Identifier naming-convention detection, splitting, and joining.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamingConvention {
    CamelCase,
    SnakeCase,
    Mixed,
    SingleWord,
}

/// Detect the convention of `name`. A name is `SingleWord` iff splitting
/// yields exactly one word.
pub fn detect_convention(name: &str) -> NamingConvention {
    let has_underscore = name.contains('_');
    let has_case_boundary = has_camel_boundary(name);
    let words = split_identifier(name);
    if words.len() <= 1 {
        NamingConvention::SingleWord
    } else if has_underscore && has_case_boundary {
        NamingConvention::Mixed
    } else if has_underscore {
        NamingConvention::SnakeCase
    } else {
        NamingConvention::CamelCase
    }
}

fn has_camel_boundary(name: &str) -> bool {
    let chars: Vec<char> = name.chars().collect();
    chars
        .windows(2)
        .any(|w| w[0].is_lowercase() && w[1].is_uppercase())
}

/// Split an identifier into lowercase words on underscores and
/// lower-to-upper case boundaries.
pub fn split_identifier(name: &str) -> Vec<String> {
    let mut words = Vec::new();
    let mut current = String::new();
    let mut prev_lower = false;
    for c in name.chars() {
        if c == '_' || c == '$' {
            if !current.is_empty() {
                words.push(current.to_lowercase());
                current = String::new();
            }
            prev_lower = false;
            continue;
        }
        if c.is_uppercase() && prev_lower {
            words.push(current.to_lowercase());
            current = String::new();
        }
        prev_lower = c.is_lowercase() || c.is_ascii_digit();
        current.push(c);
    }
    if !current.is_empty() {
        words.push(current.to_lowercase());
    }
    words
}

/// Join lowercase words back into an identifier under `convention`.
/// `Mixed` and `SingleWord` join as camelCase.
pub fn join_convention(words: &[String], convention: NamingConvention) -> String {
    match convention {
        NamingConvention::SnakeCase => words.join("_"),
        _ => {
            let mut out = String::new();
            for (i, w) in words.iter().enumerate() {
                if i == 0 {
                    out.push_str(w);
                } else {
                    out.push_str(&capitalize(w));
                }
            }
            out
        }
    }
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn camel_case_split() {
        assert_eq!(detect_convention("getPositive"), NamingConvention::CamelCase);
        assert_eq!(split_identifier("getPositive"), vec!["get", "positive"]);
    }

    #[test]
    fn snake_case_split() {
        assert_eq!(detect_convention("get_positive"), NamingConvention::SnakeCase);
        assert_eq!(split_identifier("get_positive"), vec!["get", "positive"]);
    }

    #[test]
    fn single_word() {
        assert_eq!(detect_convention("sum"), NamingConvention::SingleWord);
        assert_eq!(split_identifier("sum"), vec!["sum"]);
    }

    #[test]
    fn mixed_convention() {
        assert_eq!(detect_convention("get_PositiveValue"), NamingConvention::Mixed);
    }

    #[test]
    fn join_round_trip() {
        let words = split_identifier("hasCloseElements");
        assert_eq!(join_convention(&words, NamingConvention::CamelCase), "hasCloseElements");
        assert_eq!(join_convention(&words, NamingConvention::SnakeCase), "has_close_elements");
    }

    #[test]
    fn digits_do_not_break_words() {
        assert_eq!(split_identifier("base64Encode"), vec!["base64", "encode"]);
    }
}
