//! Shipped fixture files: canonical form, round trips and located errors.

use std::path::PathBuf;

use lpinf::error::Error;
use lpinf::fixtures;
use lpinf::io::{load, parse, serialize};

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Set `LPINF_REGENERATE=1` to rewrite the shipped files from the library fixtures.
#[test]
fn shipped_files_match_library_fixtures() {
    let regenerate = std::env::var_os("LPINF_REGENERATE").is_some();
    for (file, doc) in fixtures::documents() {
        let path = fixture_dir().join(file);
        let text = serialize(&doc);
        if regenerate {
            std::fs::write(&path, &text).unwrap();
        }
        let shipped =
            std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(shipped, text, "{file} is stale");
    }
}

#[test]
fn round_trips_on_shipped_files() {
    for (file, _) in fixtures::documents() {
        let text = std::fs::read_to_string(fixture_dir().join(file)).unwrap();
        let doc = parse(&text).unwrap();
        assert_eq!(serialize(&doc), text, "serialize ∘ parse on {file}");
        assert_eq!(
            parse(&serialize(&doc)).unwrap(),
            doc,
            "parse ∘ serialize on {file}"
        );
    }
}

#[test]
fn standalone_files_resolve() {
    for (file, _) in fixtures::documents() {
        if file.ends_with("_homotopy.toml") {
            continue;
        }
        let text = std::fs::read_to_string(fixture_dir().join(file)).unwrap();
        load(&text).unwrap_or_else(|e| panic!("{file}: {e}"));
    }
}

#[test]
fn key_order_is_sorted() {
    let text = std::fs::read_to_string(fixture_dir().join("pairing.toml")).unwrap();
    // tables are written depth-first, so compare the header paths as key lists
    let headers: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| l.starts_with('['))
        .map(|l| {
            l.trim_matches(|c| c == '[' || c == ']')
                .split('.')
                .collect()
        })
        .collect();
    let mut sorted = headers.clone();
    sorted.sort();
    assert_eq!(headers, sorted);
}

#[test]
fn corruptions_are_located() {
    let text = std::fs::read_to_string(fixture_dir().join("sl2.toml")).unwrap();
    let cases = [
        text.replacen("\"2\"", "\"2/0\"", 1),
        text.replacen("\"h\", 0", "\"h\", \"zero\"", 1),
        text.replacen("basis", "basys", 1),
        text.replacen("adjoint = true", "adjoint = tru", 1),
        text.replacen("[\"e\", \"f\", \"h\"", "[\"e\", \"q\", \"h\"", 1),
    ];
    for bad in cases {
        assert_ne!(bad, text);
        match load(&bad) {
            Err(Error::Parse { line, column, .. }) => assert!(line >= 1 && column >= 1),
            other => panic!("expected a located error, got {other:?}"),
        }
    }
}
