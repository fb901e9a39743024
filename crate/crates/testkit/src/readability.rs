//! Independent syllable and complexity recomputation for fixture texts.

/// Vowel-group syllable count with the silent-e rule, written separately
/// from the production tokenizer. Pure-digit tokens count as one syllable.
pub fn syllables_brute(word: &str) -> usize {
    let w: Vec<char> = word.to_lowercase().chars().collect();
    if !w.iter().any(|c| c.is_alphabetic()) {
        return 1;
    }
    let is_vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
    let mut groups = 0usize;
    let mut in_group = false;
    for &c in &w {
        if is_vowel(c) {
            if !in_group {
                groups += 1;
            }
            in_group = true;
        } else {
            in_group = false;
        }
    }
    let len = w.len();
    if len >= 2 && w[len - 1] == 'e' {
        let le_after_consonant =
            len >= 3 && w[len - 2] == 'l' && !is_vowel(w[len - 3]) && w[len - 3].is_alphabetic();
        if !le_after_consonant && !is_vowel(w[len - 2]) {
            groups = groups.saturating_sub(1);
        }
    }
    groups.max(1)
}

/// Complexity = 1 - Flesch Reading Ease, from explicit word/sentence/syllable
/// totals.
pub fn complexity_brute(words: f64, sentences: f64, syllables: f64) -> f64 {
    let fre = 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words);
    1.0 - fre
}
