#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nerforge::label::EntityType;
use nerforge::{Dataset, Label, TaggedSentence, Token};
use rand::RngExt;
use rand_chacha::ChaCha8Rng;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn mini(name: &str) -> PathBuf {
    fixtures().join("mini").join(name)
}

pub fn nerforge<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nerforge"))
        .args(args)
        .env("NERFORGE_LOG", "error")
        .output()
        .expect("spawn nerforge")
}

pub fn ok<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Output {
    let out = nerforge(args);
    assert!(
        out.status.success(),
        "nerforge {:?} failed: {}",
        args.iter().map(|a| a.as_ref().to_string_lossy().into_owned()).collect::<Vec<_>>(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// Run build-vocab, annotate, unify and assemble on the miniature fixture
/// inside `dir`; returns the bytes of every intermediate and final file.
pub fn run_pipeline(dir: &Path, threads: usize) -> Vec<(String, Vec<u8>)> {
    let t = threads.to_string();
    let m = |n: &str| mini(n).to_string_lossy().into_owned();
    let p = |n: &str| dir.join(n).to_string_lossy().into_owned();
    ok(&[
        "build-vocab", "--snapshot", &m("snapshot.jsonl"), "--seeds", &m("seeds.txt"),
        "--seed-words", &m("seed_words.txt"), "--extra-entities", &m("extra.txt"),
        "--lemmas", &m("lemmas.tsv"), "--threads", &t, "-o", &p("vocab.jsonl"),
    ]);
    ok(&[
        "annotate", "--vocab", &p("vocab.jsonl"), "--lemmas", &m("lemmas.tsv"),
        "--abbrev", &m("abbrev.txt"), &m("corpus.txt"), "--threads", &t, "-o", &p("dict.conll"),
    ]);
    ok(&["unify", &m("general.conll"), &p("dict.conll"), "--threads", &t, "-o", &p("unified.conll")]);
    ok(&["assemble", &p("unified.conll"), "--dedup", "--drop-all-o", "-o", &p("final.conll")]);
    ["vocab.jsonl", "dict.conll", "unified.conll", "final.conll"]
        .into_iter()
        .map(|n| (n.to_owned(), std::fs::read(dir.join(n)).unwrap()))
        .collect()
}

pub fn tags(s: &str) -> Vec<Label> {
    s.split_whitespace().map(|t| t.parse().unwrap()).collect()
}

pub fn sentence(words: &str, t: &str) -> TaggedSentence {
    let tokens = words.split_whitespace().map(|w| Token::new(w).unwrap()).collect();
    TaggedSentence::new(tokens, tags(t)).unwrap()
}

pub fn random_label(rng: &mut ChaCha8Rng) -> Label {
    Label::ALL[rng.random_range(0..Label::ALL.len())]
}

pub fn random_type(rng: &mut ChaCha8Rng) -> EntityType {
    EntityType::ALL[rng.random_range(0..EntityType::ALL.len())]
}

/// Arbitrary tag sequence, IOB-valid or not.
pub fn random_tags(rng: &mut ChaCha8Rng, len: usize) -> Vec<Label> {
    (0..len)
        .map(|_| {
            if rng.random_bool(0.5) {
                Label::Outside
            } else {
                random_label(rng)
            }
        })
        .collect()
}

const SURFACE_CHARS: &[char] = &[
    'а', 'б', 'в', 'Г', 'Д', 'ё', 'Я', 'x', 'Y', 'z', '0', '7', '.', ',', '-', '«', '»', '"', '\'', '#', 'é', '中', '…', '(',
    ')', '/',
];

pub fn random_surface(rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(1..8);
    (0..n)
        .map(|_| SURFACE_CHARS[rng.random_range(0..SURFACE_CHARS.len())])
        .collect()
}

pub fn random_dataset(rng: &mut ChaCha8Rng, sentences: usize) -> Dataset {
    (0..sentences)
        .map(|_| {
            let len = rng.random_range(1..25);
            let tokens = (0..len).map(|_| Token::new(random_surface(rng)).unwrap()).collect();
            TaggedSentence::new(tokens, random_tags(rng, len)).unwrap()
        })
        .collect()
}

/// Independent IOB reading: an `I-T` continues only a preceding `B-T` or
/// `I-T`; anything else starts a new entity of type T.
pub fn oracle_spans(tags: &[Label]) -> Vec<(usize, usize, EntityType)> {
    let mut out: Vec<(usize, usize, EntityType)> = Vec::new();
    let mut open: Option<(usize, EntityType)> = None;
    for (i, tag) in tags.iter().enumerate() {
        let (starts, ty) = match *tag {
            Label::Outside => {
                if let Some((s, t)) = open.take() {
                    out.push((s, i, t));
                }
                continue;
            }
            Label::Begin(t) => (true, t),
            Label::Inside(t) => (open.is_none_or(|(_, o)| o != t), t),
        };
        if starts {
            if let Some((s, t)) = open.take() {
                out.push((s, i, t));
            }
            open = Some((i, ty));
        }
    }
    if let Some((s, t)) = open {
        out.push((s, tags.len(), t));
    }
    out
}

pub fn oracle_iob_valid(tags: &[Label]) -> bool {
    tags.iter().enumerate().all(|(i, t)| match t {
        Label::Inside(ty) => i > 0 && tags[i - 1] != Label::Outside && tags[i - 1].entity_type() == Some(*ty),
        _ => true,
    })
}
