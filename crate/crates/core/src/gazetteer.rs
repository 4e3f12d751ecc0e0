//! Dictionary annotation over lemma sequences.
//!
//! Every vocabulary surface is tokenized and lemmatized with the same rules
//! as the corpus and inserted into a token-level prefix tree. A sentence is
//! scanned left to right; at each position the longest pattern starting
//! there wins and scanning resumes after it.

use std::collections::HashMap;

use log::{debug, warn};

use crate::conll::Token;
use crate::error::{Error, Result};
use crate::label::{is_iob_valid, EntityType, Label};
use crate::textproc::{lemmatize, tokenize, Lemmatizer};
use crate::wiki::Vocabulary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    General,
    Dictionary,
}

/// One annotator's tags for one sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationLayer {
    pub tags: Vec<Label>,
    pub origin: Origin,
}

impl AnnotationLayer {
    pub fn new(tags: Vec<Label>, origin: Origin) -> Self {
        AnnotationLayer { tags, origin }
    }

    pub fn outside(len: usize, origin: Origin) -> Self {
        AnnotationLayer::new(vec![Label::Outside; len], origin)
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    /// Index of the originating entry in the vocabulary.
    pub entry: usize,
    pub lemmas: Vec<String>,
    pub labels: Option<Vec<Label>>,
}

#[derive(Debug, Default, Clone)]
struct Node {
    children: HashMap<String, usize>,
    pattern: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildReport {
    /// Surfaces that tokenize to nothing.
    pub skipped_empty: Vec<String>,
    /// `(kept surface, rejected surface)` pairs sharing a lemma sequence.
    pub collisions: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct MatchIndex {
    nodes: Vec<Node>,
    patterns: Vec<Pattern>,
}

impl Default for MatchIndex {
    fn default() -> Self {
        MatchIndex {
            nodes: vec![Node::default()],
            patterns: Vec::new(),
        }
    }
}

impl MatchIndex {
    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Look up the pattern stored under exactly this lemma sequence.
    pub fn get<S: AsRef<str>>(&self, lemmas: &[S]) -> Option<&Pattern> {
        let mut node = 0;
        for lemma in lemmas {
            node = *self.nodes[node].children.get(lemma.as_ref())?;
        }
        self.nodes[node].pattern.map(|p| &self.patterns[p])
    }

    /// Returns the index of the pattern already occupying `lemmas`, if any.
    fn insert(&mut self, pattern: Pattern) -> std::result::Result<(), usize> {
        let mut node = 0;
        for lemma in &pattern.lemmas {
            node = match self.nodes[node].children.get(lemma) {
                Some(&next) => next,
                None => {
                    self.nodes.push(Node::default());
                    let next = self.nodes.len() - 1;
                    self.nodes[node].children.insert(lemma.clone(), next);
                    next
                }
            };
        }
        if let Some(existing) = self.nodes[node].pattern {
            return Err(existing);
        }
        self.nodes[node].pattern = Some(self.patterns.len());
        self.patterns.push(pattern);
        Ok(())
    }

    /// Longest pattern whose lemma sequence starts at `lemmas[start]`.
    fn longest_at<S: AsRef<str>>(&self, lemmas: &[S], start: usize) -> Option<&Pattern> {
        let mut node = 0;
        let mut best = None;
        for lemma in &lemmas[start..] {
            match self.nodes[node].children.get(lemma.as_ref()) {
                Some(&next) => node = next,
                None => break,
            }
            if let Some(p) = self.nodes[node].pattern {
                best = Some(p);
            }
        }
        best.map(|p| &self.patterns[p])
    }
}

/// Build the match index for a vocabulary. The stored `lemmas` of each entry
/// are ignored; surfaces are re-processed with `lem` so index and corpus
/// share one pipeline.
pub fn build_index(vocab: &Vocabulary, lem: &dyn Lemmatizer) -> Result<(MatchIndex, BuildReport)> {
    let mut index = MatchIndex::default();
    let mut report = BuildReport::default();

    for (i, entry) in vocab.entries().iter().enumerate() {
        let tokens = lemmatize(tokenize(&entry.surface), lem);
        if tokens.is_empty() {
            report.skipped_empty.push(entry.surface.clone());
            continue;
        }
        if let Some(labels) = &entry.labels {
            if labels.len() != tokens.len() {
                return Err(Error::InvalidEntry {
                    surface: entry.surface.clone(),
                    msg: format!("{} labels for {} tokens", labels.len(), tokens.len()),
                });
            }
            if !is_iob_valid(labels) {
                return Err(Error::InvalidEntry {
                    surface: entry.surface.clone(),
                    msg: "predefined labels are not IOB-valid".into(),
                });
            }
        }
        let lemmas = tokens
            .iter()
            .map(|t| t.lemma().expect("lemmatize fills every lemma").to_owned())
            .collect();
        let pattern = Pattern {
            entry: i,
            lemmas,
            labels: entry.labels.clone(),
        };
        if let Err(existing) = index.insert(pattern) {
            let kept = &vocab.entries()[index.patterns[existing].entry].surface;
            debug!("lemma collision: {:?} shadows {:?}", kept, entry.surface);
            report.collisions.push((kept.clone(), entry.surface.clone()));
        }
    }
    if !report.collisions.is_empty() {
        warn!("{} vocabulary entries collide after lemmatization", report.collisions.len());
    }
    Ok((index, report))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AnnotateOptions {
    /// Use an entry's predefined tag sequence instead of MISC when present.
    pub predefined_labels: bool,
}

/// Selected non-overlapping matches as `(start, pattern)` pairs.
pub fn find_matches<'a, S: AsRef<str>>(lemmas: &[S], index: &'a MatchIndex) -> Vec<(usize, &'a Pattern)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < lemmas.len() {
        match index.longest_at(lemmas, i) {
            Some(p) => {
                out.push((i, p));
                i += p.lemmas.len();
            }
            None => i += 1,
        }
    }
    out
}

/// Tag every dictionary mention in a lemmatized sentence.
pub fn annotate(tokens: &[Token], index: &MatchIndex, opts: AnnotateOptions) -> Result<AnnotationLayer> {
    let lemmas = tokens
        .iter()
        .enumerate()
        .map(|(i, t)| t.lemma().ok_or(Error::MissingLemma(i)))
        .collect::<Result<Vec<_>>>()?;

    let mut tags = vec![Label::Outside; tokens.len()];
    for (start, pattern) in find_matches(&lemmas, index) {
        let span = &mut tags[start..start + pattern.lemmas.len()];
        match (&pattern.labels, opts.predefined_labels) {
            (Some(labels), true) => span.copy_from_slice(labels),
            _ => {
                span[0] = Label::Begin(EntityType::Misc);
                for tag in &mut span[1..] {
                    *tag = Label::Inside(EntityType::Misc);
                }
            }
        }
    }
    Ok(AnnotationLayer::new(tags, Origin::Dictionary))
}
