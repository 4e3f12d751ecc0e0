//! Tokens, tagged sentences, datasets and the two-column CoNLL format.
//!
//! One `token<TAB>tag` pair per line, sentences separated by a single blank
//! line. The writer emits UTF-8 with LF endings, no byte-order mark and no
//! trailing blank line; the parser additionally tolerates CRLF endings, a
//! leading BOM and runs of blank lines, so `write(parse(x))` normalizes `x`.

use std::fmt;
use std::sync::Arc;

use log::warn;

use crate::error::{Error, Result};
use crate::label::{is_iob_valid, repair_iob, Label};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    surface: String,
    lemma: Option<String>,
}

impl Token {
    /// Fails on an empty surface or one containing whitespace.
    pub fn new(surface: impl Into<String>) -> Result<Self> {
        let surface = surface.into();
        if surface.is_empty() {
            return Err(Error::Other("empty token".into()));
        }
        if surface.chars().any(char::is_whitespace) {
            return Err(Error::Other(format!("token {surface:?} contains whitespace")));
        }
        Ok(Token { surface, lemma: None })
    }

    pub fn with_lemma(mut self, lemma: impl Into<String>) -> Self {
        self.lemma = Some(lemma.into());
        self
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn lemma(&self) -> Option<&str> {
        self.lemma.as_deref()
    }

    pub fn set_lemma(&mut self, lemma: impl Into<String>) {
        self.lemma = Some(lemma.into());
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surface)
    }
}

/// A non-empty token sequence with one tag per token.
///
/// IOB validity is not enforced here; files written by other tools may carry
/// dangling Inside tags. See [`TaggedSentence::is_iob_valid`] and
/// [`TaggedSentence::repaired`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaggedSentence {
    tokens: Vec<Token>,
    tags: Vec<Label>,
}

impl TaggedSentence {
    pub fn new(tokens: Vec<Token>, tags: Vec<Label>) -> Result<Self> {
        if tokens.len() != tags.len() {
            return Err(Error::Other(format!(
                "{} tokens but {} tags",
                tokens.len(),
                tags.len()
            )));
        }
        if tokens.is_empty() {
            return Err(Error::Other("empty sentence".into()));
        }
        Ok(TaggedSentence { tokens, tags })
    }

    /// All tokens tagged `O`.
    pub fn outside(tokens: Vec<Token>) -> Result<Self> {
        let tags = vec![Label::Outside; tokens.len()];
        Self::new(tokens, tags)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn tags(&self) -> &[Label] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> + '_ {
        self.tokens.iter().map(Token::surface)
    }

    pub fn is_iob_valid(&self) -> bool {
        is_iob_valid(&self.tags)
    }

    pub fn is_all_outside(&self) -> bool {
        self.tags.iter().all(|t| t.is_outside())
    }

    pub fn repaired(&self) -> TaggedSentence {
        TaggedSentence {
            tokens: self.tokens.clone(),
            tags: repair_iob(&self.tags),
        }
    }

    /// Same tokens, different tags.
    pub fn retagged(&self, tags: Vec<Label>) -> Result<TaggedSentence> {
        TaggedSentence::new(self.tokens.clone(), tags)
    }

    pub fn into_parts(self) -> (Vec<Token>, Vec<Label>) {
        (self.tokens, self.tags)
    }
}

/// An ordered collection of sentences with an optional source tag each.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    sentences: Vec<TaggedSentence>,
    provenance: Vec<Option<Arc<str>>>,
}

impl Dataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, sentence: TaggedSentence) {
        self.sentences.push(sentence);
        self.provenance.push(None);
    }

    pub fn push_with_source(&mut self, sentence: TaggedSentence, source: Option<Arc<str>>) {
        self.sentences.push(sentence);
        self.provenance.push(source);
    }

    /// Tag every sentence with the same source.
    pub fn with_source(mut self, source: &str) -> Self {
        let source: Arc<str> = Arc::from(source);
        for p in &mut self.provenance {
            *p = Some(source.clone());
        }
        self
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn sentences(&self) -> &[TaggedSentence] {
        &self.sentences
    }

    pub fn source(&self, index: usize) -> Option<&str> {
        self.provenance.get(index).and_then(|p| p.as_deref())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TaggedSentence, Option<&str>)> + '_ {
        self.sentences
            .iter()
            .zip(self.provenance.iter().map(|p| p.as_deref()))
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(TaggedSentence::len).sum()
    }

    /// Indices of sentences whose tags are not IOB-valid.
    pub fn iob_invalid(&self) -> Vec<usize> {
        self.sentences
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_iob_valid())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn into_entries(self) -> impl Iterator<Item = (TaggedSentence, Option<Arc<str>>)> {
        self.sentences.into_iter().zip(self.provenance)
    }

    pub(crate) fn entries(&self) -> impl Iterator<Item = (&TaggedSentence, &Option<Arc<str>>)> {
        self.sentences.iter().zip(self.provenance.iter())
    }
}

impl FromIterator<TaggedSentence> for Dataset {
    fn from_iter<I: IntoIterator<Item = TaggedSentence>>(iter: I) -> Self {
        let mut ds = Dataset::new();
        for s in iter {
            ds.push(s);
        }
        ds
    }
}

impl FromIterator<(TaggedSentence, Option<Arc<str>>)> for Dataset {
    fn from_iter<I: IntoIterator<Item = (TaggedSentence, Option<Arc<str>>)>>(iter: I) -> Self {
        let mut ds = Dataset::new();
        for (s, p) in iter {
            ds.push_with_source(s, p);
        }
        ds
    }
}

pub fn parse_conll(bytes: &[u8]) -> Result<Dataset> {
    let text = std::str::from_utf8(bytes)?;
    parse_conll_str(text)
}

pub fn parse_conll_str(text: &str) -> Result<Dataset> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut ds = Dataset::new();
    let mut tokens = Vec::new();
    let mut tags = Vec::new();

    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() {
            if !tokens.is_empty() {
                let sentence = TaggedSentence::new(std::mem::take(&mut tokens), std::mem::take(&mut tags))?;
                ds.push(sentence);
            }
            continue;
        }
        let mut cols = line.split('\t');
        let (Some(surface), Some(tag), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!(
                    "expected 2 tab-separated columns, found {}",
                    line.split('\t').count()
                ),
            });
        };
        let token = Token::new(surface).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        let label: Label = tag.parse().map_err(|e: Error| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        tokens.push(token);
        tags.push(label);
    }
    if !tokens.is_empty() {
        ds.push(TaggedSentence::new(tokens, tags)?);
    }

    let invalid = ds.iob_invalid();
    if !invalid.is_empty() {
        warn!(
            "{} sentence(s) are not IOB-valid (first at index {})",
            invalid.len(),
            invalid[0]
        );
    }
    Ok(ds)
}

pub fn write_conll(ds: &Dataset) -> Vec<u8> {
    let mut out = String::with_capacity(ds.token_count() * 12);
    for (i, sentence) in ds.sentences().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for (token, tag) in sentence.tokens().iter().zip(sentence.tags()) {
            out.push_str(token.surface());
            out.push('\t');
            out.push_str(&tag.to_string());
            out.push('\n');
        }
    }
    out.into_bytes()
}
