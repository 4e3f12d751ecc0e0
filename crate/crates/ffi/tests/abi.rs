use std::ffi::{c_char, CStr};
use std::path::{Path, PathBuf};
use std::ptr;

use nerforge_ffi::*;

fn mini(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/mini").join(name)
}

fn read(name: &str) -> Vec<u8> {
    std::fs::read(mini(name)).unwrap()
}

fn last_error() -> String {
    let p = nf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn parse(bytes: &[u8]) -> *mut NfDataset {
    let mut ds = ptr::null_mut();
    let status = unsafe { nf_dataset_parse(bytes.as_ptr(), bytes.len(), &mut ds) };
    assert_eq!(status, NfStatus::Ok, "{}", last_error());
    ds
}

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { nf_string_free(p) };
    s
}

fn write(ds: *const NfDataset) -> String {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nf_dataset_write(ds, &mut out) }, NfStatus::Ok);
    take_string(out)
}

#[test]
fn parse_write_round_trip_and_counts() {
    let bytes = read("general.conll");
    let ds = parse(&bytes);
    unsafe {
        assert_eq!(nf_dataset_len(ds), 50);
        assert_eq!(nf_dataset_token_count(ds), 399);
        assert_eq!(nf_dataset_iob_invalid_count(ds), 1);
    }
    assert_eq!(write(ds).as_bytes(), &bytes[..]);

    let mut repaired = ptr::null_mut();
    assert_eq!(unsafe { nf_dataset_repair(ds, &mut repaired) }, NfStatus::Ok);
    assert_eq!(unsafe { nf_dataset_iob_invalid_count(repaired) }, 0);
    unsafe {
        nf_dataset_free(repaired);
        nf_dataset_free(ds);
    }
}

#[test]
fn miniature_pipeline_through_the_c_abi() {
    let vocab = read("expected/vocab.jsonl");
    let lemmas = read("lemmas.tsv");
    let abbrev = read("abbrev.txt");
    let corpus = read("corpus.txt");

    let mut ann = ptr::null_mut();
    let status = unsafe {
        nf_annotator_new(
            vocab.as_ptr(),
            vocab.len(),
            lemmas.as_ptr(),
            lemmas.len(),
            abbrev.as_ptr(),
            abbrev.len(),
            false,
            &mut ann,
        )
    };
    assert_eq!(status, NfStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { nf_annotator_pattern_count(ann) }, 20);

    let mut dict = ptr::null_mut();
    assert_eq!(unsafe { nf_annotate_text(ann, corpus.as_ptr(), corpus.len(), &mut dict) }, NfStatus::Ok);
    assert_eq!(write(dict).as_bytes(), &read("expected/dict.conll")[..]);

    let general = parse(&read("general.conll"));
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { nf_annotate_dataset(ann, general, &mut again) }, NfStatus::Ok);
    assert_eq!(write(again), write(dict));

    let mut unified = ptr::null_mut();
    assert_eq!(unsafe { nf_unify(general, dict, &mut unified) }, NfStatus::Ok);
    assert_eq!(write(unified).as_bytes(), &read("expected/unified.conll")[..]);

    let (mut dropped, mut deduped) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(nf_dataset_drop_all_outside(unified, &mut dropped), NfStatus::Ok);
        assert_eq!(nf_dataset_dedup(dropped, &mut deduped), NfStatus::Ok);
    }
    assert_eq!(write(deduped).as_bytes(), &read("expected/final.conll")[..]);

    unsafe {
        for ds in [dict, general, again, unified, dropped, deduped] {
            nf_dataset_free(ds);
        }
        nf_annotator_free(ann);
    }
}

#[test]
fn concat_split_and_evaluate() {
    let a = parse(&read("expected/unified.conll"));
    let b = parse(&read("general.conll"));
    let mut both = ptr::null_mut();
    assert_eq!(unsafe { nf_dataset_concat(a, b, &mut both) }, NfStatus::Ok);
    assert_eq!(unsafe { nf_dataset_len(both) }, 100);

    let (mut train, mut dev, mut test) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    let status = unsafe { nf_dataset_split(both, 0.8, 0.1, 0.1, 3, &mut train, &mut dev, &mut test) };
    assert_eq!(status, NfStatus::Ok);
    unsafe {
        assert_eq!((nf_dataset_len(train), nf_dataset_len(dev), nf_dataset_len(test)), (80, 10, 10));
    }
    let status = unsafe { nf_dataset_split(both, 0.8, 0.3, 0.1, 3, &mut train, &mut dev, &mut test) };
    assert_eq!(status, NfStatus::InvalidInput);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { nf_evaluate(a, a, false, &mut json) }, NfStatus::Ok);
    let report: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(report["weighted_avg"]["f1"], 1.0);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { nf_evaluate(a, b, true, &mut json) }, NfStatus::Ok);
    let report: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    let keys: Vec<&String> = report["per_label"].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["B-MISC", "I-MISC", "O"]);
    assert!(report["weighted_avg"]["f1"].as_f64().unwrap() < 1.0);

    unsafe {
        for ds in [a, b, both, train, dev, test] {
            nf_dataset_free(ds);
        }
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut ds = ptr::null_mut();
    let bad = b"a\tB-PER\nb\tI-PER\textra\n";
    assert_eq!(unsafe { nf_dataset_parse(bad.as_ptr(), bad.len(), &mut ds) }, NfStatus::Parse);
    assert!(ds.is_null());
    assert!(last_error().contains("line 2"), "{}", last_error());

    let unknown = b"a\tB-DATE\n";
    assert_eq!(unsafe { nf_dataset_parse(unknown.as_ptr(), unknown.len(), &mut ds) }, NfStatus::Parse);

    let invalid = b"\xff\tO\n";
    assert_eq!(unsafe { nf_dataset_parse(invalid.as_ptr(), invalid.len(), &mut ds) }, NfStatus::InvalidUtf8);

    let g = parse(b"a\tO\nb\tO\n");
    let d = parse(b"a\tO\nc\tO\n");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nf_unify(g, d, &mut out) }, NfStatus::Mismatch);
    assert!(last_error().contains("sentence 0"), "{}", last_error());

    let mut ann = ptr::null_mut();
    let vocab = b"{not json}\n";
    let status = unsafe {
        nf_annotator_new(vocab.as_ptr(), vocab.len(), ptr::null(), 0, ptr::null(), 0, false, &mut ann)
    };
    assert_eq!(status, NfStatus::Parse);
    assert!(ann.is_null());
    unsafe {
        nf_dataset_free(g);
        nf_dataset_free(d);
    }
}

#[test]
fn null_arguments_are_rejected() {
    let mut ds = ptr::null_mut();
    unsafe {
        assert_eq!(nf_dataset_parse(ptr::null(), 4, &mut ds), NfStatus::NullArgument);
        assert_eq!(nf_dataset_write(ptr::null(), &mut ptr::null_mut()), NfStatus::NullArgument);
        assert_eq!(nf_dataset_parse(b"a\tO\n".as_ptr(), 4, ptr::null_mut()), NfStatus::NullArgument);
        assert_eq!(nf_unify(ptr::null(), ptr::null(), &mut ds), NfStatus::NullArgument);
        assert_eq!(nf_dataset_len(ptr::null()), 0);
        assert_eq!(nf_annotator_pattern_count(ptr::null()), 0);
        nf_dataset_free(ptr::null_mut());
        nf_annotator_free(ptr::null_mut());
        nf_string_free(ptr::null_mut());
    }
    assert!(last_error().contains("null"));

    let empty = parse(b"");
    assert_eq!(unsafe { nf_dataset_len(empty) }, 0);
    unsafe { nf_dataset_free(empty) };
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(nf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/nerforge.h")).unwrap();
    let source = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 20);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from the header");
    }
    for item in ["typedef struct NfDataset NfDataset;", "typedef struct NfAnnotator NfAnnotator;", "NF_STATUS_OK = 0"] {
        assert!(header.contains(item), "{item} missing from the header");
    }
}

#[test]
fn c_example_builds_and_unifies_the_fixture() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libnerforge_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("unify");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = std::process::Command::new(cc)
        .arg(format!("-I{}", manifest.join("include").display()))
        .arg(manifest.join("examples/unify.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = std::process::Command::new(&exe)
        .arg(mini("general.conll"))
        .arg(mini("expected/dict.conll"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(out.stdout, read("expected/unified.conll"));
}
