use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::BufRead;
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Category {
    #[serde(default)]
    pub subcategories: Vec<String>,
    #[serde(default)]
    pub articles: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    #[serde(default)]
    pub summary: String,
    #[serde(default)]
    pub body: String,
    #[serde(default)]
    pub categories: Vec<String>,
    /// Interlink targets in body order; a title linked twice appears twice.
    #[serde(default)]
    pub interlinks: Vec<String>,
}

/// One line of a snapshot file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SnapshotRecord {
    Category {
        name: String,
        #[serde(flatten)]
        category: Category,
    },
    Article {
        title: String,
        #[serde(flatten)]
        article: Article,
    },
}

/// References in a snapshot that point outside it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DanglingReport {
    /// `(parent category, missing subcategory)`
    pub subcategories: Vec<(String, String)>,
    /// `(category, missing article)`
    pub members: Vec<(String, String)>,
    /// `(article, missing interlink target)`
    pub interlinks: Vec<(String, String)>,
}

impl DanglingReport {
    pub fn is_empty(&self) -> bool {
        self.subcategories.is_empty() && self.members.is_empty() && self.interlinks.is_empty()
    }

    pub fn total(&self) -> usize {
        self.subcategories.len() + self.members.len() + self.interlinks.len()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArticleGraph {
    pub categories: BTreeMap<String, Category>,
    pub articles: BTreeMap<String, Article>,
    pub dangling: DanglingReport,
}

impl ArticleGraph {
    pub fn from_records(records: impl IntoIterator<Item = SnapshotRecord>) -> Result<Self> {
        let mut graph = ArticleGraph::default();
        for (idx, record) in records.into_iter().enumerate() {
            graph.insert(record, idx + 1)?;
        }
        graph.dangling = graph.find_dangling();
        Ok(graph)
    }

    pub fn parse_jsonl(reader: impl BufRead) -> Result<Self> {
        let mut graph = ArticleGraph::default();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::Other(format!("line {line_no}: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            let record: SnapshotRecord =
                serde_json::from_str(&line).map_err(|source| Error::Json {
                    context: "snapshot".into(),
                    line: line_no,
                    source,
                })?;
            graph.insert(record, line_no)?;
        }
        graph.dangling = graph.find_dangling();
        if !graph.dangling.is_empty() {
            warn!("snapshot has {} dangling reference(s)", graph.dangling.total());
        }
        Ok(graph)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse_jsonl(std::io::BufReader::new(file)).map_err(|e| match e {
            Error::Json { line, source, .. } => Error::Json {
                context: path.display().to_string(),
                line,
                source,
            },
            other => other,
        })
    }

    fn insert(&mut self, record: SnapshotRecord, line: usize) -> Result<()> {
        match record {
            SnapshotRecord::Category { name, category } => {
                if self.categories.contains_key(&name) {
                    return Err(Error::DuplicateNode { kind: "category", name, line });
                }
                self.categories.insert(name, category);
            }
            SnapshotRecord::Article { title, article } => {
                if self.articles.contains_key(&title) {
                    return Err(Error::DuplicateNode { kind: "article", name: title, line });
                }
                self.articles.insert(title, article);
            }
        }
        Ok(())
    }

    fn find_dangling(&self) -> DanglingReport {
        let mut report = DanglingReport::default();
        for (name, cat) in &self.categories {
            for sub in &cat.subcategories {
                if !self.categories.contains_key(sub) {
                    report.subcategories.push((name.clone(), sub.clone()));
                }
            }
            for title in &cat.articles {
                if !self.articles.contains_key(title) {
                    report.members.push((name.clone(), title.clone()));
                }
            }
        }
        for (title, article) in &self.articles {
            let mut seen = HashSet::new();
            for link in &article.interlinks {
                if !self.articles.contains_key(link) && seen.insert(link) {
                    report.interlinks.push((title.clone(), link.clone()));
                }
            }
        }
        report
    }

    pub fn to_records(&self) -> Vec<SnapshotRecord> {
        let cats = self.categories.iter().map(|(name, c)| SnapshotRecord::Category {
            name: name.clone(),
            category: c.clone(),
        });
        let arts = self.articles.iter().map(|(title, a)| SnapshotRecord::Article {
            title: title.clone(),
            article: a.clone(),
        });
        cats.chain(arts).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Traversal {
    /// Sorted titles of member articles that exist in the snapshot.
    pub articles: BTreeSet<String>,
    pub categories_visited: BTreeSet<String>,
    pub missing_seeds: Vec<String>,
}

/// Breadth-first expansion over subcategory edges from `seeds`. Every
/// category within `depth` hops contributes its member articles. Interlinks
/// never expand the frontier.
pub fn traverse<S: AsRef<str>>(graph: &ArticleGraph, seeds: &[S], depth: usize) -> Result<Traversal> {
    let mut out = Traversal::default();
    let mut frontier: Vec<&str> = Vec::new();
    for seed in seeds {
        let seed = seed.as_ref();
        if graph.categories.contains_key(seed) {
            if out.categories_visited.insert(seed.to_owned()) {
                frontier.push(seed);
            }
        } else {
            warn!("seed category {seed:?} is not in the snapshot; skipped");
            out.missing_seeds.push(seed.to_owned());
        }
    }
    if frontier.is_empty() {
        return Err(Error::NoSeeds(out.missing_seeds));
    }

    for level in 0..=depth {
        let mut next = Vec::new();
        for name in frontier {
            let cat = &graph.categories[name];
            out.articles.extend(
                cat.articles
                    .iter()
                    .filter(|t| graph.articles.contains_key(*t))
                    .cloned(),
            );
            if level == depth {
                continue;
            }
            for sub in &cat.subcategories {
                if graph.categories.contains_key(sub) && out.categories_visited.insert(sub.clone()) {
                    next.push(sub.as_str());
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(out)
}

/// Corpus text for the traversed articles: each summary (and, if asked,
/// each body) as its own paragraph, in title order.
pub fn corpus_text(graph: &ArticleGraph, articles: &BTreeSet<String>, with_bodies: bool) -> String {
    let mut paragraphs = Vec::new();
    for title in articles {
        let Some(article) = graph.articles.get(title) else { continue };
        paragraphs.push(article.summary.trim());
        if with_bodies {
            paragraphs.push(article.body.trim());
        }
    }
    let mut out = paragraphs
        .into_iter()
        .filter(|p| !p.is_empty())
        .collect::<Vec<_>>()
        .join("\n\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(name: &str, subs: &[&str], arts: &[&str]) -> SnapshotRecord {
        SnapshotRecord::Category {
            name: name.into(),
            category: Category {
                subcategories: subs.iter().map(|s| s.to_string()).collect(),
                articles: arts.iter().map(|s| s.to_string()).collect(),
            },
        }
    }

    fn art(title: &str, links: &[&str]) -> SnapshotRecord {
        SnapshotRecord::Article {
            title: title.into(),
            article: Article {
                interlinks: links.iter().map(|s| s.to_string()).collect(),
                ..Default::default()
            },
        }
    }

    fn chain() -> ArticleGraph {
        ArticleGraph::from_records([
            cat("C", &["C1"], &["a"]),
            cat("C1", &["C2"], &["b"]),
            cat("C2", &[], &["c"]),
            art("a", &[]),
            art("b", &[]),
            art("c", &[]),
        ])
        .unwrap()
    }

    fn titles(t: &Traversal) -> Vec<&str> {
        t.articles.iter().map(String::as_str).collect()
    }

    #[test]
    fn depth_zero_is_direct_members() {
        assert_eq!(titles(&traverse(&chain(), &["C"], 0).unwrap()), ["a"]);
    }

    #[test]
    fn chain_depths() {
        let g = chain();
        assert_eq!(traverse(&g, &["C"], 1).unwrap().articles.len(), 2);
        assert_eq!(traverse(&g, &["C"], 2).unwrap().articles.len(), 3);
        assert_eq!(traverse(&g, &["C"], 9).unwrap().articles.len(), 3);
    }

    #[test]
    fn cycles_terminate() {
        let g = ArticleGraph::from_records([
            cat("A", &["B"], &["x"]),
            cat("B", &["A"], &["y"]),
            art("x", &[]),
            art("y", &[]),
        ])
        .unwrap();
        assert_eq!(titles(&traverse(&g, &["A"], 50).unwrap()), ["x", "y"]);
    }

    #[test]
    fn missing_seeds() {
        let g = chain();
        let t = traverse(&g, &["nope", "C"], 0).unwrap();
        assert_eq!(t.missing_seeds, ["nope"]);
        assert!(matches!(traverse(&g, &["nope"], 1), Err(Error::NoSeeds(_))));
    }

    #[test]
    fn dangling_references_are_reported() {
        let g = ArticleGraph::from_records([
            cat("C", &["Ghost"], &["a", "missing"]),
            art("a", &["X", "X", "a"]),
        ])
        .unwrap();
        assert_eq!(g.dangling.subcategories, [("C".into(), "Ghost".into())]);
        assert_eq!(g.dangling.members, [("C".into(), "missing".into())]);
        assert_eq!(g.dangling.interlinks, [("a".into(), "X".into())]);
        // and traversal skips them
        assert_eq!(titles(&traverse(&g, &["C"], 3).unwrap()), ["a"]);
    }

    #[test]
    fn parses_jsonl_and_rejects_bad_lines() {
        let text = r#"{"kind":"category","name":"C","subcategories":[],"articles":["a"]}

{"kind":"article","title":"a","summary":"s","body":"b","categories":["C"],"interlinks":[]}
"#;
        let g = ArticleGraph::parse_jsonl(text.as_bytes()).unwrap();
        assert_eq!(g.categories.len(), 1);
        assert_eq!(g.articles["a"].summary, "s");

        let bad = "{\"kind\":\"category\",\"name\":\"C\"}\n{\"kind\":\"page\",\"title\":\"x\"}\n";
        match ArticleGraph::parse_jsonl(bad.as_bytes()) {
            Err(Error::Json { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        let bad = "{not json}\n";
        assert!(matches!(
            ArticleGraph::parse_jsonl(bad.as_bytes()),
            Err(Error::Json { line: 1, .. })
        ));
    }

    #[test]
    fn duplicates_are_rejected() {
        let text = "{\"kind\":\"article\",\"title\":\"a\"}\n{\"kind\":\"article\",\"title\":\"a\"}\n";
        assert!(matches!(
            ArticleGraph::parse_jsonl(text.as_bytes()),
            Err(Error::DuplicateNode { kind: "article", line: 2, .. })
        ));
    }

    #[test]
    fn corpus_uses_summaries_in_title_order() {
        let mut g = chain();
        g.articles.get_mut("a").unwrap().summary = "Первое.".into();
        g.articles.get_mut("c").unwrap().summary = "Третье.".into();
        g.articles.get_mut("c").unwrap().body = "Тело.".into();
        let all = traverse(&g, &["C"], 2).unwrap().articles;
        assert_eq!(corpus_text(&g, &all, false), "Первое.\n\nТретье.\n");
        assert_eq!(corpus_text(&g, &all, true), "Первое.\n\nТретье.\n\nТело.\n");
        assert_eq!(corpus_text(&g, &BTreeSet::new(), true), "");
    }

    #[test]
    fn records_round_trip() {
        let g = chain();
        assert_eq!(ArticleGraph::from_records(g.to_records()).unwrap(), g);
    }
}
