//! Whole-dataset drivers for the per-sentence operations. Sentences are
//! processed in parallel on the current rayon pool; output order always
//! equals input order.

use rayon::prelude::*;

use crate::conll::{Dataset, TaggedSentence};
use crate::error::{Error, Result};
use crate::gazetteer::{annotate, AnnotateOptions, AnnotationLayer, MatchIndex, Origin};
use crate::textproc::{lemmatize, segment_sentences, tokenize, Abbreviations, Lemmatizer};
use crate::unify::unify;

/// Everything the dictionary annotator needs.
pub struct Annotator<'a> {
    pub index: &'a MatchIndex,
    pub lemmatizer: &'a dyn Lemmatizer,
    pub options: AnnotateOptions,
}

impl Annotator<'_> {
    fn tag(&self, tokens: Vec<crate::conll::Token>) -> Result<TaggedSentence> {
        let tokens = lemmatize(tokens, self.lemmatizer);
        let layer = annotate(&tokens, self.index, self.options)?;
        TaggedSentence::new(tokens, layer.tags)
    }

    /// Segment, tokenize and annotate raw text.
    pub fn annotate_text(&self, text: &str, abbrev: &Abbreviations) -> Result<Dataset> {
        let sentences: Vec<Vec<crate::conll::Token>> = segment_sentences(text, abbrev)
            .iter()
            .map(|s| tokenize(s))
            .filter(|t| !t.is_empty())
            .collect();
        let tagged = sentences
            .into_par_iter()
            .map(|tokens| self.tag(tokens))
            .collect::<Result<Vec<_>>>()?;
        Ok(tagged.into_iter().collect())
    }

    /// Re-annotate pre-tokenized sentences; existing tags are ignored.
    pub fn annotate_dataset(&self, ds: &Dataset) -> Result<Dataset> {
        let tagged = ds
            .sentences()
            .par_iter()
            .map(|s| self.tag(s.tokens().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(tagged.into_iter().collect())
    }
}

/// Unify two token-identical datasets sentence by sentence.
pub fn unify_datasets(general: &Dataset, dict: &Dataset) -> Result<Dataset> {
    if general.len() != dict.len() {
        return Err(Error::Alignment {
            sentence: general.len().min(dict.len()),
            msg: format!(
                "general layer has {} sentences, dictionary layer has {}",
                general.len(),
                dict.len()
            ),
        });
    }
    let merged = general
        .sentences()
        .par_iter()
        .zip(dict.sentences().par_iter())
        .enumerate()
        .map(|(i, (g, d))| {
            if g.len() != d.len() {
                return Err(Error::Alignment {
                    sentence: i,
                    msg: format!("{} vs {} tokens", g.len(), d.len()),
                });
            }
            if let Some((j, (a, b))) = g.surfaces().zip(d.surfaces()).enumerate().find(|(_, (a, b))| a != b) {
                return Err(Error::TokenMismatch {
                    sentence: i,
                    token: j,
                    left: a.to_owned(),
                    right: b.to_owned(),
                });
            }
            unify(
                g.tokens(),
                &AnnotationLayer::new(g.tags().to_vec(), Origin::General),
                &AnnotationLayer::new(d.tags().to_vec(), Origin::Dictionary),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merged.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conll::parse_conll_str;
    use crate::gazetteer::build_index;
    use crate::textproc::LemmaTable;
    use crate::wiki::{VocabEntry, Vocabulary};

    #[test]
    fn annotates_text_in_order() {
        let table = LemmaTable::parse("опричнину\tопричнина\n").unwrap();
        let vocab = Vocabulary::from_entries([VocabEntry::external("опричнина")]);
        let (index, _) = build_index(&vocab, &table).unwrap();
        let ann = Annotator { index: &index, lemmatizer: &table, options: AnnotateOptions::default() };
        let ds = ann
            .annotate_text("Иван Грозный ввёл опричнину. Опричнина длилась семь лет.", &Abbreviations::default())
            .unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.sentences()[0].tags()[3].to_string(), "B-MISC");
        assert_eq!(ds.sentences()[1].tags()[0].to_string(), "B-MISC");
    }

    #[test]
    fn unify_rejects_token_mismatch() {
        let g = parse_conll_str("a\tO\nb\tO\n\nc\tO\n").unwrap();
        let d = parse_conll_str("a\tO\nb\tO\n\nx\tO\n").unwrap();
        match unify_datasets(&g, &d) {
            Err(Error::TokenMismatch { sentence: 1, token: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(unify_datasets(&g, &Dataset::new()).is_err());
    }
}
