use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::snapshot::ArticleGraph;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::textproc::{lemmatize, tokenize, Lemmatizer};

/// A candidate entity before filtering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEntity {
    pub title: String,
    pub interlink_freq: u64,
    pub categories: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Wiki,
    External,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabEntry {
    pub surface: String,
    #[serde(default)]
    pub lemmas: Vec<String>,
    /// `None` for externally merged entries, which carry no link statistics.
    pub interlink_freq: Option<u64>,
    #[serde(default)]
    pub categories: Vec<String>,
    pub source: Source,
    /// Optional fixed tag sequence for every mention of this entry, one tag
    /// per token of `surface`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Label>>,
}

impl VocabEntry {
    pub fn external(surface: impl Into<String>) -> Self {
        VocabEntry {
            surface: surface.into(),
            lemmas: Vec::new(),
            interlink_freq: None,
            categories: Vec::new(),
            source: Source::External,
            labels: None,
        }
    }
}

/// Entries unique by surface string, in a stable order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    entries: Vec<VocabEntry>,
}

impl Vocabulary {
    /// Keeps the first entry for each surface.
    pub fn from_entries(entries: impl IntoIterator<Item = VocabEntry>) -> Self {
        let mut seen = HashSet::new();
        let entries = entries
            .into_iter()
            .filter(|e| seen.insert(e.surface.clone()))
            .collect();
        Vocabulary { entries }
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, surface: &str) -> bool {
        self.entries.iter().any(|e| e.surface == surface)
    }

    /// Tokenize and lemmatize every surface into `lemmas`.
    pub fn fill_lemmas(&mut self, lem: &dyn Lemmatizer) {
        for entry in &mut self.entries {
            entry.lemmas = lemmatize(tokenize(&entry.surface), lem)
                .iter()
                .map(|t| t.lemma().unwrap_or_default().to_owned())
                .collect();
        }
    }

    pub fn parse_jsonl(reader: impl BufRead) -> Result<Self> {
        let mut entries = Vec::new();
        let mut seen = HashSet::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::Other(format!("line {line_no}: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: VocabEntry = serde_json::from_str(&line).map_err(|source| Error::Json {
                context: "vocabulary".into(),
                line: line_no,
                source,
            })?;
            if !seen.insert(entry.surface.clone()) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("duplicate surface {:?}", entry.surface),
                });
            }
            entries.push(entry);
        }
        Ok(Vocabulary { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse_jsonl(std::io::BufReader::new(file))
    }

    pub fn write_jsonl(&self, mut w: impl Write) -> std::io::Result<()> {
        for entry in &self.entries {
            serde_json::to_writer(&mut w, entry)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_jsonl(&mut out).expect("writing to a Vec cannot fail");
        out
    }
}

/// One entity per distinct title among the traversed articles and every
/// interlink target inside them. `interlink_freq` counts link occurrences
/// across the traversed articles; categories come from the entity's own
/// article when the snapshot has it.
pub fn harvest_entities(graph: &ArticleGraph, articles: &BTreeSet<String>) -> Vec<RawEntity> {
    let titles: Vec<&String> = articles.iter().collect();
    let counts: BTreeMap<&str, u64> = titles
        .par_iter()
        .filter_map(|t| graph.articles.get(t.as_str()))
        .fold(BTreeMap::new, |mut acc: BTreeMap<&str, u64>, article| {
            for link in &article.interlinks {
                *acc.entry(link.as_str()).or_default() += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });

    let mut names: BTreeSet<&str> = articles.iter().map(String::as_str).collect();
    names.extend(counts.keys().copied());

    names
        .into_iter()
        .map(|title| RawEntity {
            title: title.to_owned(),
            interlink_freq: counts.get(title).copied().unwrap_or(0),
            categories: graph
                .articles
                .get(title)
                .map(|a| a.categories.clone())
                .unwrap_or_default(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterConfig {
    pub min_interlink: u64,
    pub min_category: u64,
    pub seed_words: Vec<String>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            min_interlink: 2,
            min_category: 3,
            seed_words: Vec::new(),
        }
    }
}

/// For each category name, how many raw entities list it.
pub fn category_frequencies(raw: &[RawEntity]) -> HashMap<&str, u64> {
    let mut freq = HashMap::new();
    for entity in raw {
        let distinct: HashSet<&str> = entity.categories.iter().map(String::as_str).collect();
        for name in distinct {
            *freq.entry(name).or_insert(0) += 1;
        }
    }
    freq
}

/// The largest global frequency among the entity's categories, 0 if it has none.
pub fn entity_category_frequency(entity: &RawEntity, table: &HashMap<&str, u64>) -> u64 {
    entity
        .categories
        .iter()
        .filter_map(|c| table.get(c.as_str()).copied())
        .max()
        .unwrap_or(0)
}

fn matches_seed_word(categories: &[String], seed_words: &[String]) -> bool {
    categories.iter().any(|c| {
        let c = c.to_lowercase();
        seed_words.iter().any(|w| c.contains(w.as_str()))
    })
}

/// Keep entities whose interlink frequency and category frequency both reach
/// their thresholds and, when seed words are given, that have a category name
/// containing one of them (case-insensitive). Output is sorted by surface.
pub fn filter_vocabulary(raw: &[RawEntity], config: &FilterConfig) -> Vocabulary {
    let table = category_frequencies(raw);
    let seed_words: Vec<String> = config
        .seed_words
        .iter()
        .map(|w| w.trim().to_lowercase())
        .filter(|w| !w.is_empty())
        .collect();

    let mut kept: Vec<VocabEntry> = raw
        .iter()
        .filter(|e| e.interlink_freq >= config.min_interlink)
        .filter(|e| entity_category_frequency(e, &table) >= config.min_category)
        .filter(|e| seed_words.is_empty() || matches_seed_word(&e.categories, &seed_words))
        .map(|e| VocabEntry {
            surface: e.title.clone(),
            lemmas: Vec::new(),
            interlink_freq: Some(e.interlink_freq),
            categories: e.categories.clone(),
            source: Source::Wiki,
            labels: None,
        })
        .collect();
    kept.sort_by(|a, b| a.surface.cmp(&b.surface));
    Vocabulary::from_entries(kept)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MergeReport {
    pub added: usize,
    pub duplicates: Vec<String>,
}

/// Append external surfaces not yet in the vocabulary. Existing entries are
/// never modified; collisions are listed in the report.
pub fn merge_external_entities<S: AsRef<str>>(vocab: &Vocabulary, extra: &[S]) -> (Vocabulary, MergeReport) {
    let mut entries = vocab.entries.clone();
    let mut present: HashSet<String> = entries.iter().map(|e| e.surface.clone()).collect();
    let mut report = MergeReport::default();
    for surface in extra {
        let surface = surface.as_ref().trim();
        if surface.is_empty() {
            continue;
        }
        if present.insert(surface.to_owned()) {
            entries.push(VocabEntry::external(surface));
            report.added += 1;
        } else {
            report.duplicates.push(surface.to_owned());
        }
    }
    (Vocabulary { entries }, report)
}
