//! Snapshot download from a live MediaWiki API.
//!
//! This is the only code in the crate that touches the network; the rest of
//! the pipeline reads the JSON Lines snapshot it writes. Category and article
//! names are full page titles as the API returns them (including the
//! namespace prefix for categories). The API reports each link target once
//! per article, so interlink lists fetched here hold distinct targets.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::Duration;

use log::{debug, info};
use serde_json::Value;

use super::snapshot::{Article, ArticleGraph, Category};
use crate::error::{Error, Result};

pub const DEFAULT_API: &str = "https://ru.wikipedia.org/w/api.php";

pub struct Fetcher {
    api: String,
    client: reqwest::blocking::Client,
}

impl Fetcher {
    pub fn new(api: &str) -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .user_agent(concat!("nerforge/", env!("CARGO_PKG_VERSION")))
            .timeout(Duration::from_secs(60))
            .build()
            .map_err(|e| Error::Other(format!("http client: {e}")))?;
        Ok(Fetcher {
            api: api.to_owned(),
            client,
        })
    }

    fn query(&self, params: &[(&str, &str)]) -> Result<Vec<Value>> {
        let mut pages = Vec::new();
        let mut cont: BTreeMap<String, String> = BTreeMap::new();
        loop {
            let mut all: Vec<(String, String)> = params
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect();
            all.push(("action".into(), "query".into()));
            all.push(("format".into(), "json".into()));
            all.push(("formatversion".into(), "2".into()));
            all.extend(cont.clone());
            debug!("GET {} {:?}", self.api, all);
            let resp: Value = self
                .client
                .get(&self.api)
                .query(&all)
                .send()
                .and_then(|r| r.error_for_status())
                .and_then(|r| r.json())
                .map_err(|e| Error::Other(format!("{}: {e}", self.api)))?;
            if let Some(err) = resp.get("error") {
                return Err(Error::Other(format!("api error: {err}")));
            }
            pages.push(resp.clone());
            match resp.get("continue").and_then(Value::as_object) {
                Some(c) => {
                    cont = c
                        .iter()
                        .filter_map(|(k, v)| v.as_str().map(|s| (k.clone(), s.to_owned())))
                        .collect();
                }
                None => return Ok(pages),
            }
        }
    }

    fn category(&self, name: &str) -> Result<Category> {
        let mut cat = Category::default();
        for resp in self.query(&[
            ("list", "categorymembers"),
            ("cmtitle", name),
            ("cmtype", "page|subcat"),
            ("cmlimit", "max"),
        ])? {
            for member in resp["query"]["categorymembers"].as_array().into_iter().flatten() {
                let Some(title) = member["title"].as_str() else { continue };
                match member["ns"].as_i64() {
                    Some(14) => cat.subcategories.push(title.to_owned()),
                    Some(0) => cat.articles.push(title.to_owned()),
                    _ => {}
                }
            }
        }
        Ok(cat)
    }

    fn extract(&self, title: &str, intro_only: bool) -> Result<String> {
        let mut params = vec![("prop", "extracts"), ("titles", title), ("explaintext", "1")];
        if intro_only {
            params.push(("exintro", "1"));
        }
        let mut text = String::new();
        for resp in self.query(&params)? {
            for page in resp["query"]["pages"].as_array().into_iter().flatten() {
                if let Some(t) = page["extract"].as_str() {
                    text.push_str(t);
                }
            }
        }
        Ok(text)
    }

    fn article(&self, title: &str) -> Result<Article> {
        let mut article = Article {
            summary: self.extract(title, true)?,
            body: self.extract(title, false)?,
            ..Default::default()
        };
        for resp in self.query(&[
            ("prop", "categories|links"),
            ("titles", title),
            ("clshow", "!hidden"),
            ("cllimit", "max"),
            ("plnamespace", "0"),
            ("pllimit", "max"),
        ])? {
            for page in resp["query"]["pages"].as_array().into_iter().flatten() {
                for c in page["categories"].as_array().into_iter().flatten() {
                    if let Some(t) = c["title"].as_str() {
                        article.categories.push(t.to_owned());
                    }
                }
                for l in page["links"].as_array().into_iter().flatten() {
                    if let Some(t) = l["title"].as_str() {
                        article.interlinks.push(t.to_owned());
                    }
                }
            }
        }
        Ok(article)
    }

    /// Crawl categories breadth-first to `depth` and download every member
    /// article.
    pub fn fetch(&self, seeds: &[String], depth: usize) -> Result<ArticleGraph> {
        let mut graph = ArticleGraph::default();
        let mut queue: VecDeque<(String, usize)> = seeds.iter().map(|s| (s.clone(), 0)).collect();
        let mut seen: BTreeSet<String> = seeds.iter().cloned().collect();
        let mut titles = BTreeSet::new();

        while let Some((name, level)) = queue.pop_front() {
            info!("category {name:?} (depth {level})");
            let cat = self.category(&name)?;
            titles.extend(cat.articles.iter().cloned());
            if level < depth {
                for sub in &cat.subcategories {
                    if seen.insert(sub.clone()) {
                        queue.push_back((sub.clone(), level + 1));
                    }
                }
            }
            graph.categories.insert(name, cat);
        }
        for title in titles {
            info!("article {title:?}");
            let article = self.article(&title)?;
            graph.articles.insert(title, article);
        }
        Ok(graph)
    }
}
