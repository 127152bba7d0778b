//! The JSONL fixtures under `tests/fixtures` are the serialized forms of
//! the builders in `common`. Set `UPDATE_FIXTURES=1` to rewrite them.

mod common;

use std::path::PathBuf;

use discourse_core::io::{document_to_string, load_document};
use discourse_core::Document;

fn check_fixture(name: &str, document: Document) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    let text = document_to_string(&document);
    if std::env::var_os("UPDATE_FIXTURES").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let on_disk = std::fs::read_to_string(&path).unwrap();
    assert_eq!(on_disk, text, "{} is stale; rerun with UPDATE_FIXTURES=1", name);
    assert_eq!(load_document(&path).unwrap(), document);
}

#[test]
fn walkthrough_fixture_is_current() {
    check_fixture("walkthrough.jsonl", common::walkthrough_document());
}

#[test]
fn cursor_fixture_is_current() {
    check_fixture("cursor.jsonl", common::cursor_document());
}

#[test]
fn synthetic_fixture_is_current() {
    let corpus = common::synthetic::synthetic_corpus(42, 60, 6, 4);
    check_fixture("synthetic.jsonl", corpus.document);
}
