//! Text normalization shared by the metrics and the discourse string-matching
//! statistics.
//!
//! Everything here works on Unicode scalar values. A character counts as
//! punctuation when it is neither alphanumeric nor whitespace.

/// Returns true for characters treated as punctuation by every normalizer.
pub fn is_punct(c: char) -> bool {
    !(c.is_alphanumeric() || c.is_whitespace())
}

/// Lowercases and collapses runs of whitespace into single spaces.
pub fn fold_whitespace(s: &str) -> String {
    s.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// The default exact-match normalization: case-fold, collapse whitespace and
/// strip leading/trailing punctuation.
pub fn normalize_answer(s: &str) -> String {
    let folded = fold_whitespace(s);
    folded
        .trim_matches(|c: char| is_punct(c) || c.is_whitespace())
        .to_string()
}

/// Metric tokenization: punctuation becomes a separator, then the lowercased
/// text is split on whitespace.
pub fn tokens(s: &str) -> Vec<String> {
    s.chars()
        .map(|c| if is_punct(c) { ' ' } else { c })
        .collect::<String>()
        .split_whitespace()
        .map(str::to_lowercase)
        .collect()
}

/// Key used for the "automatic string matching" statistics: case-folded,
/// punctuation-stripped, whitespace-normalized.
pub fn match_key(s: &str) -> String {
    tokens(s).join(" ")
}

/// Substring test over [`match_key`]s. An empty needle never matches.
pub fn key_contains(haystack: &str, needle: &str) -> bool {
    let needle = match_key(needle);
    !needle.is_empty() && match_key(haystack).contains(&needle)
}

/// Slices `text` by character offsets. Returns `None` when the range is out
/// of bounds or inverted.
pub fn char_slice(text: &str, start: usize, end: usize) -> Option<&str> {
    if start > end {
        return None;
    }
    let mut indices = text.char_indices().map(|(i, _)| i).chain(std::iter::once(text.len()));
    let begin = indices.nth(start)?;
    let finish = if end == start {
        begin
    } else {
        indices.nth(end - start - 1)?
    };
    Some(&text[begin..finish])
}

/// Number of characters in `text`.
pub fn char_len(text: &str) -> usize {
    text.chars().count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn answer_normalization() {
        assert_eq!(normalize_answer("  Popularity. "), "popularity");
        assert_eq!(normalize_answer("the  Largest\tfish"), "the largest fish");
        assert_eq!(normalize_answer("\"quoted\""), "quoted");
    }

    #[test]
    fn tokenization_splits_on_punctuation() {
        assert_eq!(
            tokens("paper-and-pencil surveys!"),
            vec!["paper", "and", "pencil", "surveys"]
        );
        assert_eq!(tokens("Tom & John"), vec!["tom", "john"]);
        assert!(tokens(" ,. ").is_empty());
    }

    #[test]
    fn key_matching() {
        assert!(key_contains("Wikipedia editions", "wikipedia"));
        assert!(key_contains("for Observational   Studies.", "observational studies"));
        assert!(!key_contains("anything", "  "));
    }

    #[test]
    fn char_slicing() {
        let s = "héllo wörld";
        assert_eq!(char_slice(s, 0, 5), Some("héllo"));
        assert_eq!(char_slice(s, 6, 11), Some("wörld"));
        assert_eq!(char_slice(s, 11, 11), Some(""));
        assert_eq!(char_slice(s, 3, 12), None);
        assert_eq!(char_slice(s, 4, 2), None);
    }
}
