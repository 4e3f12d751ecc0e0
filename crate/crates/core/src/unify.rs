//! Merging a general-model layer with a dictionary layer.
//!
//! Precedence is per span: every general span is kept as is, and a
//! dictionary span survives only if it shares no token with any general
//! span. A partially overlapping dictionary span is dropped whole.

use crate::conll::{Token, TaggedSentence};
use crate::error::{Error, Result};
use crate::gazetteer::{AnnotationLayer, Origin};
use crate::label::{is_iob_valid, spans, tags_from_spans, Label, Span};

/// Span-level merge of two tag sequences of equal length.
pub fn merge_tags(general: &[Label], dict: &[Label]) -> Vec<Label> {
    debug_assert_eq!(general.len(), dict.len());
    let kept: Vec<Span> = spans(general);
    let mut merged = kept.clone();
    merged.extend(
        spans(dict)
            .into_iter()
            .filter(|d| !kept.iter().any(|g| g.intersects(d))),
    );
    merged.sort();
    let tags = tags_from_spans(general.len(), &merged);
    debug_assert!(is_iob_valid(&tags));
    tags
}

pub fn unify(tokens: &[Token], general: &AnnotationLayer, dict: &AnnotationLayer) -> Result<TaggedSentence> {
    for (layer, name) in [(general, "general"), (dict, "dictionary")] {
        if layer.len() != tokens.len() {
            return Err(Error::Other(format!(
                "{name} layer has {} tags for {} tokens",
                layer.len(),
                tokens.len()
            )));
        }
    }
    if general.origin != Origin::General || dict.origin != Origin::Dictionary {
        return Err(Error::Other("layers passed in the wrong order".into()));
    }
    TaggedSentence::new(tokens.to_vec(), merge_tags(&general.tags, &dict.tags))
}
