//! Entity vocabulary mining over a category-graph snapshot.

#[cfg(feature = "fetch")]
pub mod fetch;
mod snapshot;
mod vocab;

pub use snapshot::{corpus_text, traverse, Article, ArticleGraph, Category, DanglingReport, SnapshotRecord, Traversal};
pub use vocab::{
    category_frequencies, entity_category_frequency, filter_vocabulary, harvest_entities,
    merge_external_entities, FilterConfig, MergeReport, RawEntity, Source, VocabEntry, Vocabulary,
};
