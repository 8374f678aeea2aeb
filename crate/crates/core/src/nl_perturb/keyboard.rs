//! QWERTY adjacency map for typo-style perturbations.

static ADJACENT: &[(&str, &str)] = &[
    ("a", "qwsz"),
    ("b", "vghn"),
    ("c", "xdfv"),
    ("d", "serfcx"),
    ("e", "wsdr"),
    ("f", "drtgvc"),
    ("g", "ftyhbv"),
    ("h", "gyujnb"),
    ("i", "ujko"),
    ("j", "huikmn"),
    ("k", "jiolm"),
    ("l", "kop"),
    ("m", "njk"),
    ("n", "bhjm"),
    ("o", "iklp"),
    ("p", "ol"),
    ("q", "wa"),
    ("r", "edft"),
    ("s", "awedxz"),
    ("t", "rfgy"),
    ("u", "yhji"),
    ("v", "cfgb"),
    ("w", "qase"),
    ("x", "zsdc"),
    ("y", "tghu"),
    ("z", "asx"),
];

/// Keys adjacent to `c` on a QWERTY layout (lowercase only; returns an
/// empty slice for anything else).
pub fn neighbors(c: char) -> &'static str {
    let lower = c.to_ascii_lowercase();
    ADJACENT
        .iter()
        .find(|(k, _)| k.chars().next() == Some(lower))
        .map(|(_, v)| *v)
        .unwrap_or("")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_have_neighbors() {
        for c in 'a'..='z' {
            assert!(!neighbors(c).is_empty(), "{c}");
        }
        assert!(neighbors('5').is_empty());
    }

    #[test]
    fn map_is_plausible() {
        assert!(neighbors('p').contains('o'));
        assert!(neighbors('t').contains('r'));
    }
}
