//! Sentence segmentation, tokenization and lemmatization.
//!
//! The tokenizer is deliberately not pluggable: vocabulary entries and corpus
//! text must go through the same rules or lemma-sequence matching silently
//! misses.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::conll::Token;
use crate::error::{Error, Result};

const TERMINATORS: &[char] = &['.', '!', '?', '…'];
const CLOSERS: &[char] = &['"', '\'', '»', '”', '’', ')', ']'];
const OPENERS: &[char] = &['"', '\'', '«', '“', '„', '(', '[', '—', '–', '-'];

/// Abbreviations that do not end a sentence, stored case-folded without the
/// trailing period.
#[derive(Debug, Clone, Default)]
pub struct Abbreviations(HashSet<String>);

impl Abbreviations {
    pub fn new<I, S>(items: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Abbreviations(
            items
                .into_iter()
                .map(|s| s.as_ref().trim().trim_end_matches('.').to_lowercase())
                .filter(|s| !s.is_empty())
                .collect(),
        )
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::new(text.lines()))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Split running text into sentences.
///
/// A boundary falls after a run of `. ! ? …` (plus any closing quotes or
/// brackets) when the run ends the input, or is followed by whitespace and
/// then, after optional opening punctuation, an uppercase letter. A single
/// period directly after a listed abbreviation never ends a sentence.
pub fn segment_sentences(text: &str, abbrev: &Abbreviations) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;

    while i < chars.len() {
        let (_, c) = chars[i];
        if !TERMINATORS.contains(&c) {
            i += 1;
            continue;
        }
        let run_start = i;
        let mut j = i;
        while j < chars.len() && TERMINATORS.contains(&chars[j].1) {
            j += 1;
        }
        while j < chars.len() && CLOSERS.contains(&chars[j].1) {
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |&(b, _)| b);

        if is_boundary(&chars, run_start, j, abbrev) {
            push_trimmed(&mut out, &text[start..end]);
            start = end;
        }
        i = j;
    }
    push_trimmed(&mut out, &text[start..]);
    out
}

fn is_boundary(chars: &[(usize, char)], run_start: usize, after: usize, abbrev: &Abbreviations) -> bool {
    let mut k = after;
    if k < chars.len() && !chars[k].1.is_whitespace() {
        return false;
    }
    while k < chars.len() && chars[k].1.is_whitespace() {
        k += 1;
    }
    if k < chars.len() {
        while k < chars.len() && OPENERS.contains(&chars[k].1) {
            k += 1;
        }
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        if k >= chars.len() || !chars[k].1.is_uppercase() {
            return false;
        }
    }
    // Abbreviation check only applies to a lone period.
    if chars[run_start].1 == '.' && (run_start + 1 == after || chars[run_start + 1].1 != '.') {
        let mut w = run_start;
        while w > 0 && chars[w - 1].1.is_alphabetic() {
            w -= 1;
        }
        if w < run_start {
            let word: String = chars[w..run_start].iter().map(|&(_, c)| c).collect();
            if abbrev.contains(&word) {
                return false;
            }
        }
    }
    true
}

fn push_trimmed(out: &mut Vec<String>, piece: &str) {
    let piece = piece.trim();
    if !piece.is_empty() {
        out.push(piece.to_owned());
    }
}

fn is_punct(c: char) -> bool {
    !c.is_alphanumeric()
}

/// Split a sentence into tokens.
///
/// Whitespace separates chunks; leading and trailing punctuation is peeled
/// off each chunk, with runs of the same character (such as `...`) kept
/// together. Inner punctuation, including hyphens, stays inside the word.
pub fn tokenize(sentence: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for chunk in sentence.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut lo = 0;
        let mut hi = chars.len();
        while lo < hi && is_punct(chars[lo]) {
            lo += 1;
        }
        while hi > lo && is_punct(chars[hi - 1]) {
            hi -= 1;
        }
        push_punct_runs(&mut out, &chars[..lo]);
        if lo < hi {
            out.push(make_token(chars[lo..hi].iter().collect()));
        }
        push_punct_runs(&mut out, &chars[hi..]);
    }
    out
}

fn push_punct_runs(out: &mut Vec<Token>, chars: &[char]) {
    let mut i = 0;
    while i < chars.len() {
        let mut j = i + 1;
        while j < chars.len() && chars[j] == chars[i] {
            j += 1;
        }
        out.push(make_token(chars[i..j].iter().collect()));
        i = j;
    }
}

fn make_token(surface: String) -> Token {
    Token::new(surface).expect("chunks come from split_whitespace and are never empty")
}

/// Maps a surface token to its dictionary form. Implementations must be
/// deterministic and return case-normalized lemmas.
pub trait Lemmatizer: Send + Sync {
    fn lemma(&self, surface: &str) -> String;
}

/// Lemma = lowercased surface.
#[derive(Debug, Clone, Copy, Default)]
pub struct CaseFold;

impl Lemmatizer for CaseFold {
    fn lemma(&self, surface: &str) -> String {
        surface.to_lowercase()
    }
}

/// Table lookup keyed by the lowercased surface, falling back to
/// [`CaseFold`] on a miss.
#[derive(Debug, Clone, Default)]
pub struct LemmaTable {
    entries: HashMap<String, String>,
}

impl LemmaTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Later inserts for the same folded surface replace earlier ones.
    pub fn insert(&mut self, surface: &str, lemma: &str) {
        self.entries.insert(surface.to_lowercase(), lemma.to_lowercase());
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parse `surface<TAB>lemma` lines. Blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = LemmaTable::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() {
                continue;
            }
            match line.split('\t').collect::<Vec<_>>().as_slice() {
                [surface, lemma] if !surface.is_empty() && !lemma.is_empty() => {
                    table.insert(surface, lemma)
                }
                _ => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: "expected `surface<TAB>lemma`".into(),
                    })
                }
            }
        }
        Ok(table)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Parse { line, msg } => Error::Parse {
                line,
                msg: format!("{}: {msg}", path.display()),
            },
            other => other,
        })
    }
}

impl FromIterator<(String, String)> for LemmaTable {
    fn from_iter<I: IntoIterator<Item = (String, String)>>(iter: I) -> Self {
        let mut table = LemmaTable::new();
        for (s, l) in iter {
            table.insert(&s, &l);
        }
        table
    }
}

impl Lemmatizer for LemmaTable {
    fn lemma(&self, surface: &str) -> String {
        let folded = surface.to_lowercase();
        match self.entries.get(&folded) {
            Some(lemma) => lemma.clone(),
            None => folded,
        }
    }
}

impl<L: Lemmatizer + ?Sized> Lemmatizer for &L {
    fn lemma(&self, surface: &str) -> String {
        (**self).lemma(surface)
    }
}

impl<L: Lemmatizer + ?Sized> Lemmatizer for Box<L> {
    fn lemma(&self, surface: &str) -> String {
        (**self).lemma(surface)
    }
}

/// Fill in the lemma of every token.
pub fn lemmatize(mut tokens: Vec<Token>, lem: &dyn Lemmatizer) -> Vec<Token> {
    for token in &mut tokens {
        let lemma = lem.lemma(token.surface());
        token.set_lemma(lemma);
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surfaces(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(Token::surface).collect()
    }

    #[test]
    fn segments_on_terminators() {
        let none = Abbreviations::default();
        assert_eq!(segment_sentences("A. B.", &none), vec!["A.", "B."]);
        assert!(segment_sentences("", &none).is_empty());
        assert!(segment_sentences("   \n ", &none).is_empty());
        assert_eq!(segment_sentences("Что? Да! Нет…", &none), vec!["Что?", "Да!", "Нет…"]);
    }

    #[test]
    fn lowercase_continuation_is_not_a_boundary() {
        let none = Abbreviations::default();
        assert_eq!(segment_sentences("См. выше и т. д.", &none).len(), 1);
    }

    #[test]
    fn russian_paragraph_with_abbreviation() {
        let text = "В 1812 г. Наполеон вторгся в Россию. Армия отступала к Москве! \
                    Состоялась ли битва при Бородине? «Война и мир» описывает эти события.";
        let abbrev = Abbreviations::new(["г"]);
        let got = segment_sentences(text, &abbrev);
        assert_eq!(
            got,
            vec![
                "В 1812 г. Наполеон вторгся в Россию.",
                "Армия отступала к Москве!",
                "Состоялась ли битва при Бородине?",
                "«Война и мир» описывает эти события.",
            ]
        );
        // without the abbreviation the "г." splits the first sentence
        assert_eq!(segment_sentences(text, &Abbreviations::default()).len(), 5);
    }

    #[test]
    fn closing_quote_stays_with_its_sentence() {
        let none = Abbreviations::default();
        assert_eq!(
            segment_sentences("Он сказал: «Вперёд!» Все пошли.", &none),
            vec!["Он сказал: «Вперёд!»", "Все пошли."]
        );
    }

    #[test]
    fn tokenizes_battle_sentence() {
        let t = tokenize("Иван Грозный ввёл опричнину.");
        assert_eq!(surfaces(&t), ["Иван", "Грозный", "ввёл", "опричнину", "."]);
    }

    #[test]
    fn tokenizes_quotes_and_hyphens() {
        assert!(tokenize("").is_empty());
        let t = tokenize("«Слово о полку Игореве»");
        assert_eq!(surfaces(&t), ["«", "Слово", "о", "полку", "Игореве", "»"]);
        let t = tokenize("Австро-Венгрия, (1914)...");
        assert_eq!(surfaces(&t), ["Австро-Венгрия", ",", "(", "1914", ")", "..."]);
    }

    #[test]
    fn lemmatize_with_table_and_fallback() {
        let table = LemmaTable::parse("битве\tбитва\n").unwrap();
        let toks = lemmatize(tokenize("битве Москву ."), &table);
        let lemmas: Vec<_> = toks.iter().map(|t| t.lemma().unwrap()).collect();
        assert_eq!(lemmas, ["битва", "москву", "."]);
        assert_eq!(surfaces(&toks), ["битве", "Москву", "."]);
    }

    #[test]
    fn table_keys_are_case_folded() {
        let table = LemmaTable::parse("Битве\tБитва\n\n").unwrap();
        assert_eq!(table.lemma("БИТВЕ"), "битва");
    }

    #[test]
    fn malformed_table_line() {
        let err = LemmaTable::parse("a\tb\nc\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(LemmaTable::parse("a\tb\tc\n").is_err());
    }

    proptest! {
        #[test]
        fn tokens_are_never_empty_or_spaced(s in "[ а-яА-Яa-z0-9.,!?«»()\\-—\t\n]{0,60}") {
            for t in tokenize(&s) {
                prop_assert!(!t.surface().is_empty());
                prop_assert!(!t.surface().chars().any(char::is_whitespace));
            }
        }

        #[test]
        fn tokenize_preserves_non_space_chars(s in "[ а-яa-z0-9.,!?«»\\-]{0,60}") {
            let joined: String = tokenize(&s).iter().map(Token::surface).collect();
            let expect: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            prop_assert_eq!(joined, expect);
        }

        #[test]
        fn segmentation_preserves_non_space_chars(s in "[ А-Яа-я.!?…«»г]{0,80}") {
            let abbrev = Abbreviations::new(["г"]);
            let joined: String = segment_sentences(&s, &abbrev).concat();
            let strip = |x: &str| x.chars().filter(|c| !c.is_whitespace()).collect::<String>();
            prop_assert_eq!(strip(&joined), strip(&s));
        }

        #[test]
        fn fallback_lemma_is_a_fixed_point(s in "[А-Яа-яA-Za-z]{1,12}") {
            let once = CaseFold.lemma(&s);
            prop_assert_eq!(CaseFold.lemma(&once), once);
        }
    }
}
