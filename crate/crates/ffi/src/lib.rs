//! C ABI over the nerforge pipeline.
//!
//! Every object crosses the boundary as an opaque handle created by a
//! `*_new`/`*_parse` function and released by the matching `*_free`.
//! Functions return an [`NfStatus`]; on failure [`nf_last_error`] describes
//! what went wrong on the calling thread. Strings handed out by the library
//! are NUL-terminated UTF-8 and must be released with [`nf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nerforge::assemble::{concat, deduplicate, drop_all_outside, split, SplitRatios};
use nerforge::conll::{parse_conll, write_conll, Dataset};
use nerforge::gazetteer::{build_index, AnnotateOptions, MatchIndex};
use nerforge::metrics::{evaluate, unify_labels};
use nerforge::pipeline::{unify_datasets, Annotator};
use nerforge::textproc::{Abbreviations, CaseFold, LemmaTable, Lemmatizer};
use nerforge::wiki::Vocabulary;
use nerforge::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NfStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Mismatch = 4,
    InvalidInput = 5,
    Panic = 99,
}

/// A parsed CoNLL dataset.
pub struct NfDataset(Dataset);

/// A dictionary annotator: match index, lemmatizer and abbreviation list.
pub struct NfAnnotator {
    index: MatchIndex,
    lemmatizer: Box<dyn Lemmatizer>,
    abbrev: Abbreviations,
    options: AnnotateOptions,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', "\\0")).expect("NULs were escaped");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(NfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } | Error::UnknownTag(_) | Error::Json { .. } => NfStatus::Parse,
            Error::Utf8(_) => NfStatus::InvalidUtf8,
            Error::Alignment { .. } | Error::TokenMismatch { .. } => NfStatus::Mismatch,
            _ => NfStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            NfStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(NfStatus::NullArgument, format!("{what} is null"))
}

unsafe fn bytes<'a>(data: *const u8, len: usize, what: &str) -> Result<&'a [u8], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn text<'a>(data: *const u8, len: usize, what: &str) -> Result<&'a str, Failure> {
    std::str::from_utf8(bytes(data, len, what)?)
        .map_err(|e| Failure(NfStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn dataset<'a>(ds: *const NfDataset, what: &str) -> Result<&'a Dataset, Failure> {
    ds.as_ref().map(|d| &d.0).ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| Failure(NfStatus::InvalidInput, "output contains a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nf_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version has interior NUL"),
    };
    VERSION.as_ptr()
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn nf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse CoNLL bytes into a new dataset.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nf_dataset_parse(data: *const u8, len: usize, out: *mut *mut NfDataset) -> NfStatus {
    guard(|| {
        let ds = parse_conll(bytes(data, len, "data")?)?;
        put(out, NfDataset(ds))
    })
}

/// # Safety
/// `ds` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn nf_dataset_free(ds: *mut NfDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Number of sentences; 0 for null.
///
/// # Safety
/// `ds` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nf_dataset_len(ds: *const NfDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.0.len())
}

/// # Safety
/// `ds` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nf_dataset_token_count(ds: *const NfDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.0.token_count())
}

/// Number of sentences whose tags are not IOB-valid.
///
/// # Safety
/// `ds` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nf_dataset_iob_invalid_count(ds: *const NfDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.0.iob_invalid().len())
}

/// Serialize to CoNLL text.
///
/// # Safety
/// `ds` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nf_dataset_write(ds: *const NfDataset, out: *mut *mut c_char) -> NfStatus {
    guard(|| {
        let ds = dataset(ds, "dataset")?;
        let text = String::from_utf8(write_conll(ds)).expect("writer emits UTF-8");
        put_string(out, text)
    })
}

/// New dataset with dangling Inside tags promoted to Begin.
///
/// # Safety
/// `ds` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nf_dataset_repair(ds: *const NfDataset, out: *mut *mut NfDataset) -> NfStatus {
    guard(|| {
        let ds = dataset(ds, "dataset")?;
        let repaired = ds.sentences().iter().map(|s| s.repaired()).collect();
        put(out, NfDataset(repaired))
    })
}

/// New dataset with duplicate token sequences removed (first copy kept).
///
/// # Safety
/// `ds` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nf_dataset_dedup(ds: *const NfDataset, out: *mut *mut NfDataset) -> NfStatus {
    guard(|| put(out, NfDataset(deduplicate(dataset(ds, "dataset")?).0)))
}

/// New dataset without all-`O` sentences.
///
/// # Safety
/// `ds` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nf_dataset_drop_all_outside(ds: *const NfDataset, out: *mut *mut NfDataset) -> NfStatus {
    guard(|| put(out, NfDataset(drop_all_outside(dataset(ds, "dataset")?))))
}

/// New dataset holding `a`'s sentences followed by `b`'s.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nf_dataset_concat(
    a: *const NfDataset,
    b: *const NfDataset,
    out: *mut *mut NfDataset,
) -> NfStatus {
    guard(|| put(out, NfDataset(concat(dataset(a, "a")?, dataset(b, "b")?))))
}

/// Seeded train/dev/test split.
///
/// # Safety
/// `ds` must be a live handle; the three output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn nf_dataset_split(
    ds: *const NfDataset,
    train_ratio: f64,
    dev_ratio: f64,
    test_ratio: f64,
    seed: u64,
    train: *mut *mut NfDataset,
    dev: *mut *mut NfDataset,
    test: *mut *mut NfDataset,
) -> NfStatus {
    guard(|| {
        let ds = dataset(ds, "dataset")?;
        if train.is_null() || dev.is_null() || test.is_null() {
            return Err(null("output pointer"));
        }
        let ratios = SplitRatios::new(train_ratio, dev_ratio, test_ratio)?;
        let parts = split(ds, ratios, seed);
        put(train, NfDataset(parts.train))?;
        put(dev, NfDataset(parts.dev))?;
        put(test, NfDataset(parts.test))
    })
}

/// Build an annotator from a vocabulary (JSON Lines), an optional lemma
/// table (TSV) and an optional abbreviation list (one per line). Pass a null
/// pointer or zero length to omit an optional input.
///
/// # Safety
/// Every non-null data pointer must reference the stated number of bytes;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nf_annotator_new(
    vocab_jsonl: *const u8,
    vocab_len: usize,
    lemma_tsv: *const u8,
    lemma_len: usize,
    abbrev: *const u8,
    abbrev_len: usize,
    predefined_labels: bool,
    out: *mut *mut NfAnnotator,
) -> NfStatus {
    guard(|| {
        let vocab = Vocabulary::parse_jsonl(bytes(vocab_jsonl, vocab_len, "vocabulary")?)?;
        let lemmatizer: Box<dyn Lemmatizer> = if lemma_tsv.is_null() || lemma_len == 0 {
            Box::new(CaseFold)
        } else {
            Box::new(LemmaTable::parse(text(lemma_tsv, lemma_len, "lemma table")?)?)
        };
        let abbrev = if abbrev.is_null() || abbrev_len == 0 {
            Abbreviations::default()
        } else {
            Abbreviations::new(text(abbrev, abbrev_len, "abbreviations")?.lines())
        };
        let (index, _) = build_index(&vocab, lemmatizer.as_ref())?;
        put(
            out,
            NfAnnotator {
                index,
                lemmatizer,
                abbrev,
                options: AnnotateOptions { predefined_labels },
            },
        )
    })
}

/// # Safety
/// `ann` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn nf_annotator_free(ann: *mut NfAnnotator) {
    if !ann.is_null() {
        drop(Box::from_raw(ann));
    }
}

/// Number of distinct lemma patterns in the annotator's index.
///
/// # Safety
/// `ann` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nf_annotator_pattern_count(ann: *const NfAnnotator) -> usize {
    ann.as_ref().map_or(0, |a| a.index.len())
}

fn annotator(a: &NfAnnotator) -> Annotator<'_> {
    Annotator {
        index: &a.index,
        lemmatizer: a.lemmatizer.as_ref(),
        options: a.options,
    }
}

/// Segment, tokenize and tag raw UTF-8 text.
///
/// # Safety
/// `ann` must be a live handle; `text_ptr` must reference `len` bytes;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nf_annotate_text(
    ann: *const NfAnnotator,
    text_ptr: *const u8,
    len: usize,
    out: *mut *mut NfDataset,
) -> NfStatus {
    guard(|| {
        let a = ann.as_ref().ok_or_else(|| null("annotator"))?;
        let input = text(text_ptr, len, "text")?;
        put(out, NfDataset(annotator(a).annotate_text(input, &a.abbrev)?))
    })
}

/// Tag the tokens of an existing dataset, ignoring its current tags.
///
/// # Safety
/// `ann` and `ds` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nf_annotate_dataset(
    ann: *const NfAnnotator,
    ds: *const NfDataset,
    out: *mut *mut NfDataset,
) -> NfStatus {
    guard(|| {
        let a = ann.as_ref().ok_or_else(|| null("annotator"))?;
        put(out, NfDataset(annotator(a).annotate_dataset(dataset(ds, "dataset")?)?))
    })
}

/// Merge a general-model layer with a dictionary layer.
///
/// # Safety
/// `general` and `dict` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nf_unify(
    general: *const NfDataset,
    dict: *const NfDataset,
    out: *mut *mut NfDataset,
) -> NfStatus {
    guard(|| {
        let merged = unify_datasets(dataset(general, "general")?, dataset(dict, "dict")?)?;
        put(out, NfDataset(merged))
    })
}

/// Score `pred` against `gold`; writes the JSON report to `out_json`.
///
/// # Safety
/// `gold` and `pred` must be live handles; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nf_evaluate(
    gold: *const NfDataset,
    pred: *const NfDataset,
    unify: bool,
    out_json: *mut *mut c_char,
) -> NfStatus {
    guard(|| {
        let (gold, pred) = (dataset(gold, "gold")?, dataset(pred, "pred")?);
        let report = if unify {
            evaluate(&unify_labels(gold), &unify_labels(pred))?
        } else {
            evaluate(gold, pred)?
        };
        put_string(out_json, report.to_json())
    })
}
