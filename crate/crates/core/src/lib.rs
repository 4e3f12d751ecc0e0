//! Weakly supervised NER dataset construction.
//!
//! The pipeline mines an entity vocabulary from a category-graph snapshot
//! ([`wiki`]), tags vocabulary mentions in a lemmatized corpus
//! ([`gazetteer`]), merges those tags with a general-domain tagger's output
//! ([`unify`]), filters and splits the result ([`assemble`]) and scores
//! predictions token by token ([`metrics`]). Stages exchange two-column
//! CoNLL files ([`conll`]).

pub mod assemble;
pub mod cli;
pub mod conll;
pub mod error;
pub mod gazetteer;
pub mod label;
pub mod metrics;
pub mod pipeline;
pub mod textproc;
pub mod unify;
pub mod wiki;

pub use conll::{parse_conll, write_conll, Dataset, TaggedSentence, Token};
pub use error::{Error, Result};
pub use label::{repair_iob, EntityType, Label};
