use std::collections::HashSet;

use crate::frame::lexicon_entries;

const ADJECTIVES: &str = include_str!("../../resources/adjectives.txt");
const IRREGULARS: &str = include_str!("../../resources/irregular_superlatives.txt");
const LEXICAL: &str = include_str!("../../resources/lexical_superlatives.txt");
const IDIOMS: &str = include_str!("../../resources/idioms.txt");
const ABBREVIATIONS: &str = include_str!("../../resources/abbreviations.txt");

/// Nouns ending in "-ly" that must not be read as adverbs.
const LY_NOUNS: [&str; 16] = [
    "family",
    "italy",
    "july",
    "supply",
    "reply",
    "rally",
    "ally",
    "belly",
    "bully",
    "jelly",
    "lily",
    "holly",
    "assembly",
    "monopoly",
    "anomaly",
    "butterfly",
];

const ADJECTIVE_SUFFIXES: [&str; 14] = [
    "ous", "ful", "ive", "able", "ible", "ical", "ic", "ant", "ent", "less", "ish", "ary", "ed", "ing",
];

/// Editable word lists behind the detector.
#[derive(Debug, Clone)]
pub struct Lexicon {
    pub adjectives: HashSet<String>,
    pub irregulars: HashSet<String>,
    pub lexical: HashSet<String>,
    /// Multiword idioms as lowercase word sequences.
    pub idioms: Vec<Vec<String>>,
    pub abbreviations: HashSet<String>,
}

fn words(text: &str) -> HashSet<String> {
    lexicon_entries(text)
        .flat_map(str::split_whitespace)
        .map(str::to_lowercase)
        .collect()
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::bundled()
    }
}

impl Lexicon {
    /// The bundled lists.
    pub fn bundled() -> Self {
        Lexicon {
            adjectives: words(ADJECTIVES),
            irregulars: words(IRREGULARS),
            lexical: words(LEXICAL),
            idioms: lexicon_entries(IDIOMS)
                .map(|l| l.split_whitespace().map(str::to_lowercase).collect())
                .collect(),
            abbreviations: words(ABBREVIATIONS),
        }
    }

    /// Adds every word of a whitespace/line separated list to the adjective
    /// lexicon.
    pub fn extend_adjectives(&mut self, text: &str) {
        self.adjectives.extend(words(text));
    }

    /// Whether `word` (lowercase) is an "-est" form of a listed stem.
    ///
    /// Tries the stem after removing "-est" and "-st", the undoubled final
    /// consonant (`biggest`) and y-restoration for "-iest" (`happiest`).
    pub fn is_est_superlative(&self, word: &str) -> bool {
        if word.chars().count() < 4 || !word.ends_with("est") {
            return false;
        }
        let stem = &word[..word.len() - 3];
        let mut variants = vec![stem.to_string(), format!("{stem}e"), word[..word.len() - 2].to_string()];
        let b = stem.as_bytes();
        if b.len() >= 2 && b[b.len() - 1] == b[b.len() - 2] {
            variants.push(stem[..stem.len() - 1].to_string());
        }
        if let Some(base) = stem.strip_suffix('i') {
            variants.push(format!("{base}y"));
        }
        variants.iter().any(|v| !v.is_empty() && self.adjectives.contains(v))
    }

    /// Adjective or adverb test for the word after "most"/"least".
    pub fn is_adjective_or_adverb(&self, word: &str) -> bool {
        if self.adjectives.contains(word) || self.is_est_superlative(word) {
            return true;
        }
        let len = word.chars().count();
        if word.ends_with("ly") && len > 4 && !LY_NOUNS.contains(&word) {
            return true;
        }
        len > 5 && ADJECTIVE_SUFFIXES.iter().any(|s| word.ends_with(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn est_morphology() {
        let lex = Lexicon::bundled();
        for w in [
            "tallest", "largest", "biggest", "happiest", "driest", "nicest", "latest", "fewest", "freest", "shyest",
        ] {
            assert!(lex.is_est_superlative(w), "{w}");
        }
        for w in [
            "forest", "honest", "interest", "west", "rest", "guest", "priest", "request", "modest", "est",
        ] {
            assert!(!lex.is_est_superlative(w), "{w}");
        }
    }

    #[test]
    fn adjective_test() {
        let lex = Lexicon::bundled();
        for w in [
            "expensive",
            "commonly",
            "popular",
            "beautiful",
            "spoken",
            "often",
            "interesting",
        ] {
            assert!(lex.is_adjective_or_adverb(w), "{w}");
        }
        for w in ["of", "people", "students", "family", "the", "cards"] {
            assert!(!lex.is_adjective_or_adverb(w), "{w}");
        }
    }
}
