//! Token-level per-label precision, recall and F1 with support-weighted
//! averages.
//!
//! Every token counts, including `O`. A ratio with an empty denominator is
//! 0, and F1 is 0 when precision and recall are both 0.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::conll::Dataset;
use crate::error::{Error, Result};
use crate::label::Label;

const N: usize = Label::ALL.len();

fn slot(label: Label) -> usize {
    Label::ALL.iter().position(|&l| l == label).expect("ALL lists every label")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rounded {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LabelScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
    pub predicted: u64,
    pub true_positive: u64,
    pub rounded: Rounded,
}

impl LabelScores {
    pub fn from_counts(true_positive: u64, predicted: u64, support: u64) -> Self {
        let precision = ratio(true_positive, predicted);
        let recall = ratio(true_positive, support);
        let f1 = f1(precision, recall);
        LabelScores {
            precision,
            recall,
            f1,
            support,
            predicted,
            true_positive,
            rounded: Rounded {
                precision: round2(precision),
                recall: round2(recall),
                f1: round2(f1),
            },
        }
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// `Σ support·value / Σ support`, or 0 when the total support is 0.
pub fn weighted_average(values: &[(f64, u64)]) -> f64 {
    let total: u64 = values.iter().map(|&(_, s)| s).sum();
    if total == 0 {
        return 0.0;
    }
    values.iter().map(|&(v, s)| v * s as f64).sum::<f64>() / total as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Averages {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub rounded: Rounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    /// Keyed by tag string; lexical order matches the table layout
    /// `B-LOC … B-PER, I-LOC … I-PER, O`.
    pub per_label: BTreeMap<String, LabelScores>,
    pub weighted_avg: Averages,
    pub total_support: u64,
    pub accuracy: f64,
}

impl EvalReport {
    /// Build a report from per-label scores. Labels with zero support and
    /// zero predictions are omitted.
    pub fn from_scores(scores: impl IntoIterator<Item = (Label, LabelScores)>) -> Self {
        let per_label: BTreeMap<String, LabelScores> = scores
            .into_iter()
            .filter(|(_, s)| s.support > 0 || s.predicted > 0)
            .map(|(l, s)| (l.to_string(), s))
            .collect();
        let pick = |f: fn(&LabelScores) -> f64| {
            weighted_average(&per_label.values().map(|s| (f(s), s.support)).collect::<Vec<_>>())
        };
        let (precision, recall, f1) = (pick(|s| s.precision), pick(|s| s.recall), pick(|s| s.f1));
        let total_support = per_label.values().map(|s| s.support).sum();
        let correct: u64 = per_label.values().map(|s| s.true_positive).sum();
        EvalReport {
            per_label,
            weighted_avg: Averages {
                precision,
                recall,
                f1,
                rounded: Rounded {
                    precision: round2(precision),
                    recall: round2(recall),
                    f1: round2(f1),
                },
            },
            total_support,
            accuracy: ratio(correct, total_support),
        }
    }

    pub fn get(&self, label: Label) -> Option<&LabelScores> {
        self.per_label.get(&label.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<8} {:>9} {:>9} {:>9} {:>9}", "label", "precision", "recall", "f1", "support")?;
        for (label, s) in &self.per_label {
            writeln!(
                f,
                "{:<8} {:>9.2} {:>9.2} {:>9.2} {:>9}",
                label, s.precision, s.recall, s.f1, s.support
            )?;
        }
        let a = &self.weighted_avg;
        write!(
            f,
            "{:<8} {:>9.2} {:>9.2} {:>9.2} {:>9}",
            "AVG", a.precision, a.recall, a.f1, self.total_support
        )
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Counts {
    gold: [u64; N],
    pred: [u64; N],
    tp: [u64; N],
}

impl Counts {
    fn merge(mut self, other: Counts) -> Counts {
        for i in 0..N {
            self.gold[i] += other.gold[i];
            self.pred[i] += other.pred[i];
            self.tp[i] += other.tp[i];
        }
        self
    }
}

/// Score `pred` against `gold`. Both must hold the same sentences with the
/// same token surfaces.
pub fn evaluate(gold: &Dataset, pred: &Dataset) -> Result<EvalReport> {
    if gold.len() != pred.len() {
        return Err(Error::Alignment {
            sentence: gold.len().min(pred.len()),
            msg: format!("gold has {} sentences, prediction has {}", gold.len(), pred.len()),
        });
    }
    for (i, (g, p)) in gold.sentences().iter().zip(pred.sentences()).enumerate() {
        if g.len() != p.len() {
            return Err(Error::Alignment {
                sentence: i,
                msg: format!("gold has {} tokens, prediction has {}", g.len(), p.len()),
            });
        }
        if let Some((j, (a, b))) = g.surfaces().zip(p.surfaces()).enumerate().find(|(_, (a, b))| a != b) {
            return Err(Error::TokenMismatch {
                sentence: i,
                token: j,
                left: a.to_owned(),
                right: b.to_owned(),
            });
        }
    }

    let counts = gold
        .sentences()
        .par_iter()
        .zip(pred.sentences().par_iter())
        .fold(Counts::default, |mut c, (g, p)| {
            for (&gt, &pt) in g.tags().iter().zip(p.tags()) {
                c.gold[slot(gt)] += 1;
                c.pred[slot(pt)] += 1;
                if gt == pt {
                    c.tp[slot(gt)] += 1;
                }
            }
            c
        })
        .reduce(Counts::default, Counts::merge);

    Ok(EvalReport::from_scores(Label::ALL.iter().enumerate().map(|(i, &l)| {
        (l, LabelScores::from_counts(counts.tp[i], counts.pred[i], counts.gold[i]))
    })))
}

/// Map every entity type to MISC, keeping B/I prefixes.
pub fn unify_labels(ds: &Dataset) -> Dataset {
    ds.entries()
        .map(|(s, p)| {
            let tags = s.tags().iter().map(|t| t.unified()).collect();
            (s.retagged(tags).expect("same length"), p.clone())
        })
        .collect()
}
