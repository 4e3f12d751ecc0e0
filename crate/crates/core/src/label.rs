//! The IOB label system: four entity types and nine tags.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityType {
    Per,
    Loc,
    Org,
    Misc,
}

impl EntityType {
    pub const ALL: [EntityType; 4] = [
        EntityType::Per,
        EntityType::Loc,
        EntityType::Org,
        EntityType::Misc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityType::Per => "PER",
            EntityType::Loc => "LOC",
            EntityType::Org => "ORG",
            EntityType::Misc => "MISC",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "PER" => Some(EntityType::Per),
            "LOC" => Some(EntityType::Loc),
            "ORG" => Some(EntityType::Org),
            "MISC" => Some(EntityType::Misc),
            _ => None,
        }
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One IOB tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Outside,
    Begin(EntityType),
    Inside(EntityType),
}

impl Label {
    /// All nine labels, in the column order used by the evaluation tables:
    /// B-* first, then I-*, then O.
    pub const ALL: [Label; 9] = [
        Label::Begin(EntityType::Loc),
        Label::Begin(EntityType::Misc),
        Label::Begin(EntityType::Org),
        Label::Begin(EntityType::Per),
        Label::Inside(EntityType::Loc),
        Label::Inside(EntityType::Misc),
        Label::Inside(EntityType::Org),
        Label::Inside(EntityType::Per),
        Label::Outside,
    ];

    pub fn entity_type(self) -> Option<EntityType> {
        match self {
            Label::Outside => None,
            Label::Begin(t) | Label::Inside(t) => Some(t),
        }
    }

    pub fn is_outside(self) -> bool {
        matches!(self, Label::Outside)
    }

    /// Collapse the entity type to MISC, keeping the prefix.
    pub fn unified(self) -> Label {
        match self {
            Label::Outside => Label::Outside,
            Label::Begin(_) => Label::Begin(EntityType::Misc),
            Label::Inside(_) => Label::Inside(EntityType::Misc),
        }
    }

    /// Whether `self` may directly follow `prev` in a valid IOB sequence.
    pub fn may_follow(self, prev: Option<Label>) -> bool {
        match self {
            Label::Inside(t) => matches!(prev, Some(Label::Begin(p) | Label::Inside(p)) if p == t),
            _ => true,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Outside => f.write_str("O"),
            Label::Begin(t) => write!(f, "B-{t}"),
            Label::Inside(t) => write!(f, "I-{t}"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "O" {
            return Ok(Label::Outside);
        }
        let parsed = match s.split_once('-') {
            Some(("B", ty)) => EntityType::parse(ty).map(Label::Begin),
            Some(("I", ty)) => EntityType::parse(ty).map(Label::Inside),
            _ => None,
        };
        parsed.ok_or_else(|| Error::UnknownTag(s.to_owned()))
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// True when every Inside tag continues an entity of the same type.
pub fn is_iob_valid(tags: &[Label]) -> bool {
    let mut prev = None;
    for &tag in tags {
        if !tag.may_follow(prev) {
            return false;
        }
        prev = Some(tag);
    }
    true
}

/// Promote every dangling `I-T` to `B-T`. Other tags are left alone.
pub fn repair_iob(tags: &[Label]) -> Vec<Label> {
    let mut out = Vec::with_capacity(tags.len());
    let mut prev = None;
    for &tag in tags {
        let fixed = match tag {
            Label::Inside(t) if !tag.may_follow(prev) => Label::Begin(t),
            other => other,
        };
        out.push(fixed);
        prev = Some(fixed);
    }
    out
}

/// A contiguous entity mention over token positions `start..end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub ty: EntityType,
}

impl Span {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn intersects(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// Decompose a tag sequence into entity spans. Dangling Inside tags open a
/// new span, exactly as [`repair_iob`] would rewrite them.
pub fn spans(tags: &[Label]) -> Vec<Span> {
    let mut out: Vec<Span> = Vec::new();
    let mut open: Option<Span> = None;
    for (i, &tag) in tags.iter().enumerate() {
        match tag {
            Label::Outside => {
                out.extend(open.take());
            }
            Label::Begin(ty) => {
                out.extend(open.take());
                open = Some(Span { start: i, end: i + 1, ty });
            }
            Label::Inside(ty) => match open.as_mut() {
                Some(span) if span.ty == ty => span.end = i + 1,
                _ => {
                    out.extend(open.take());
                    open = Some(Span { start: i, end: i + 1, ty });
                }
            },
        }
    }
    out.extend(open);
    out
}

/// Render spans back to a tag sequence of length `len`.
pub fn tags_from_spans(len: usize, spans: &[Span]) -> Vec<Label> {
    let mut tags = vec![Label::Outside; len];
    for span in spans {
        tags[span.start] = Label::Begin(span.ty);
        for tag in &mut tags[span.start + 1..span.end] {
            *tag = Label::Inside(span.ty);
        }
    }
    tags
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(s: &str) -> Vec<Label> {
        s.split_whitespace().map(|t| t.parse().unwrap()).collect()
    }

    #[test]
    fn nine_distinct_labels_round_trip_through_strings() {
        let mut seen = std::collections::HashSet::new();
        for label in Label::ALL {
            let s = label.to_string();
            assert_eq!(s.parse::<Label>().unwrap(), label);
            assert!(seen.insert(s));
        }
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn rejects_unknown_and_lowercase_tags() {
        for bad in ["", "b-PER", "B-per", "B-DATE", "B", "E-PER", "I-", "o"] {
            assert!(bad.parse::<Label>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn repair_promotes_dangling_inside() {
        assert_eq!(repair_iob(&tags("O I-LOC O")), tags("O B-LOC O"));
        assert_eq!(repair_iob(&tags("B-PER I-PER")), tags("B-PER I-PER"));
        assert_eq!(
            repair_iob(&tags("I-MISC I-MISC I-ORG")),
            tags("B-MISC I-MISC B-ORG")
        );
    }

    #[test]
    fn validity() {
        assert!(is_iob_valid(&tags("B-PER I-PER O B-LOC")));
        assert!(!is_iob_valid(&tags("B-PER I-LOC")));
        assert!(!is_iob_valid(&tags("I-PER")));
        assert!(is_iob_valid(&[]));
    }

    #[test]
    fn spans_round_trip_on_valid_tags() {
        let t = tags("B-PER I-PER O B-MISC B-MISC I-MISC O");
        let s = spans(&t);
        assert_eq!(s.len(), 3);
        assert_eq!(s[2], Span { start: 4, end: 6, ty: EntityType::Misc });
        assert_eq!(tags_from_spans(t.len(), &s), t);
    }

    #[test]
    fn spans_of_dangling_inside_match_repair() {
        let t = tags("O I-LOC I-LOC B-PER I-ORG");
        assert_eq!(tags_from_spans(t.len(), &spans(&t)), repair_iob(&t));
    }

    #[test]
    fn unified_collapses_types() {
        assert_eq!(Label::Begin(EntityType::Per).unified(), Label::Begin(EntityType::Misc));
        assert_eq!(Label::Inside(EntityType::Loc).unified(), Label::Inside(EntityType::Misc));
        assert_eq!(Label::Outside.unified(), Label::Outside);
    }
}
