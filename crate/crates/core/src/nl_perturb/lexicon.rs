//! Word lexicon backing the word-level perturbations: synonyms,
//! inflectional forms, and verb tense rules. Shipped as plain-text
//! mapping files distilled from a WordNet-style resource; unknown words
//! are skipped, never guessed.

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TenseEntry {
    pub past: String,
    pub base: String,
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    synonyms: BTreeMap<String, Vec<String>>,
    inflections: BTreeMap<String, Vec<String>>,
    tense: BTreeMap<String, TenseEntry>,
}

impl Lexicon {
    /// The lexicon bundled with the crate.
    pub fn bundled() -> &'static Lexicon {
        use std::sync::OnceLock;
        static LEXICON: OnceLock<Lexicon> = OnceLock::new();
        LEXICON.get_or_init(|| {
            Lexicon::parse(
                include_str!("data/synonyms.txt"),
                include_str!("data/inflections.txt"),
                include_str!("data/tense.txt"),
            )
        })
    }

    pub fn parse(synonyms: &str, inflections: &str, tense: &str) -> Lexicon {
        let mut lex = Lexicon::default();
        for (key, values) in parse_mapping(synonyms) {
            // No word maps to itself as its only synonym.
            let filtered: Vec<String> = values.into_iter().filter(|v| *v != key).collect();
            if !filtered.is_empty() {
                lex.synonyms.insert(key, filtered);
            }
        }
        for (key, values) in parse_mapping(inflections) {
            let filtered: Vec<String> = values.into_iter().filter(|v| *v != key).collect();
            if !filtered.is_empty() {
                lex.inflections.insert(key, filtered);
            }
        }
        for (key, values) in parse_mapping(tense) {
            if values.len() == 2 {
                lex.tense.insert(
                    key,
                    TenseEntry {
                        past: values[0].clone(),
                        base: values[1].clone(),
                    },
                );
            }
        }
        lex
    }

    pub fn synonyms(&self, word: &str) -> Option<&[String]> {
        self.synonyms.get(&word.to_lowercase()).map(|v| v.as_slice())
    }

    pub fn inflections(&self, word: &str) -> Option<&[String]> {
        self.inflections
            .get(&word.to_lowercase())
            .map(|v| v.as_slice())
    }

    pub fn tense(&self, word: &str) -> Option<&TenseEntry> {
        self.tense.get(&word.to_lowercase())
    }
}

fn parse_mapping(content: &str) -> Vec<(String, Vec<String>)> {
    let mut out = Vec::new();
    for line in content.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, rest)) = line.split_once(':') else {
            continue;
        };
        let values: Vec<String> = rest
            .split(',')
            .map(|v| v.trim().to_lowercase())
            .filter(|v| !v.is_empty())
            .collect();
        if !values.is_empty() {
            out.push((key.trim().to_lowercase(), values));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lexicon_parses() {
        let lex = Lexicon::bundled();
        assert!(lex.synonyms("start").unwrap().contains(&"get down".to_string()));
        assert!(lex.synonyms("give").unwrap().contains(&"impart".to_string()));
        assert!(lex.synonyms("get").unwrap().contains(&"catch".to_string()));
    }

    #[test]
    fn lookups_are_case_insensitive() {
        let lex = Lexicon::bundled();
        assert_eq!(lex.synonyms("Start"), lex.synonyms("start"));
        assert_eq!(lex.tense("Given").unwrap().past, "gave");
    }

    #[test]
    fn no_self_only_synonyms() {
        let lex = Lexicon::bundled();
        for (word, syns) in &lex.synonyms {
            assert!(
                !(syns.len() == 1 && &syns[0] == word),
                "{word} maps only to itself"
            );
        }
    }

    #[test]
    fn tense_rules_shape() {
        let lex = Lexicon::bundled();
        let e = lex.tense("start").unwrap();
        assert_eq!(e.past, "started");
        assert_eq!(e.base, "start");
        let e = lex.tense("given").unwrap();
        assert_eq!(e.past, "gave");
        assert_eq!(e.base, "give");
    }

    #[test]
    fn unknown_words_are_none() {
        assert!(Lexicon::bundled().synonyms("zzgrumble").is_none());
    }
}
