use std::collections::HashSet;

use serde::{Deserialize, Serialize};

/// A sentence span in character offsets, end exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub index: usize,
    pub start: usize,
    pub end: usize,
    pub text: String,
}

const TERMINALS: [char; 3] = ['.', '!', '?'];
const CLOSERS: [char; 7] = ['"', '\'', ')', ']', '”', '’', '»'];

/// Rule-based sentence splitter.
///
/// A sentence ends after a run of `.`, `!` or `?` (plus closing quotes or
/// brackets) that is followed by whitespace or the end of the text, and at
/// blank lines. A single period does not end a sentence after a listed
/// abbreviation, and a run of periods does not end one when the next word
/// starts lowercase.
pub fn segment(text: &str, abbreviations: &HashSet<String>) -> Vec<Sentence> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let mut last_solid = 0usize;

    let push = |out: &mut Vec<Sentence>, from: usize, to: usize| {
        out.push(Sentence {
            index: out.len(),
            start: from,
            end: to,
            text: chars[from..to].iter().collect(),
        });
    };

    let mut i = 0;
    while i < n {
        let c = chars[i];
        if c.is_whitespace() {
            if c == '\n' {
                if let Some(s) = start {
                    let mut j = i + 1;
                    while j < n && chars[j].is_whitespace() && chars[j] != '\n' {
                        j += 1;
                    }
                    if j < n && chars[j] == '\n' {
                        push(&mut out, s, last_solid + 1);
                        start = None;
                    }
                }
            }
            i += 1;
            continue;
        }
        if start.is_none() {
            start = Some(i);
        }
        last_solid = i;
        if TERMINALS.contains(&c) {
            let mut j = i;
            while j + 1 < n && TERMINALS.contains(&chars[j + 1]) {
                j += 1;
            }
            let single_period = j == i && c == '.';
            let periods_only = chars[i..=j].iter().all(|&p| p == '.');
            while j + 1 < n && CLOSERS.contains(&chars[j + 1]) {
                j += 1;
            }
            let at_break = j + 1 == n || chars[j + 1].is_whitespace();
            let mut boundary = at_break;
            if boundary && periods_only {
                let next = chars[j + 1..].iter().find(|c| !c.is_whitespace());
                let abbreviation = single_period && abbreviations.contains(&preceding_word(&chars, i));
                if abbreviation || next.is_some_and(|c| c.is_lowercase()) {
                    boundary = false;
                }
            }
            if boundary {
                push(&mut out, start.take().expect("sentence open"), j + 1);
            }
            last_solid = j;
            i = j + 1;
            continue;
        }
        i += 1;
    }
    if let Some(s) = start {
        push(&mut out, s, last_solid + 1);
    }
    out
}

/// Lowercased token ending right before `period` (letters, digits and
/// inner periods), without the final period.
fn preceding_word(chars: &[char], period: usize) -> String {
    let mut j = period;
    while j > 0 && (chars[j - 1].is_alphanumeric() || chars[j - 1] == '.') {
        j -= 1;
    }
    chars[j..period].iter().collect::<String>().to_lowercase()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::Lexicon;

    fn split(text: &str) -> Vec<String> {
        segment(text, &Lexicon::bundled().abbreviations)
            .into_iter()
            .map(|s| s.text)
            .collect()
    }

    #[test]
    fn punctuation_split() {
        assert_eq!(split("A. B? C!"), vec!["A.", "B?", "C!"]);
    }

    #[test]
    fn empty_input() {
        assert!(split("").is_empty());
        assert!(split("  \n ").is_empty());
    }

    #[test]
    fn abbreviation_guard() {
        assert_eq!(
            split("Mr. Smith arrived. He left."),
            vec!["Mr. Smith arrived.", "He left."]
        );
        assert_eq!(
            split("We met e.g. Dr. Who there. Fine."),
            vec!["We met e.g. Dr. Who there.", "Fine."]
        );
    }

    #[test]
    fn quotes_ellipses_and_blank_lines() {
        assert_eq!(
            split("He said \"go.\" Then... nothing!? Ok\n\nNext line"),
            vec!["He said \"go.\"", "Then... nothing!?", "Ok", "Next line"]
        );
        assert_eq!(
            split("It costs 3.5 dollars. Cheap."),
            vec!["It costs 3.5 dollars.", "Cheap."]
        );
    }

    #[test]
    fn offsets_are_faithful() {
        let text = "  Tom went fishing at the lake.  He caught the largest fish. ";
        for s in segment(text, &Lexicon::bundled().abbreviations) {
            assert_eq!(crate::text::char_slice(text, s.start, s.end), Some(s.text.as_str()));
        }
    }

    #[test]
    fn unicode_offsets() {
        let text = "Größte Stadt. Zweite Zeile!";
        let sents = segment(text, &HashSet::new());
        assert_eq!(sents[1].start, 14);
        assert_eq!(
            crate::text::char_slice(text, sents[1].start, sents[1].end),
            Some("Zweite Zeile!")
        );
    }
}
