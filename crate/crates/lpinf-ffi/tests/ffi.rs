use std::ffi::{CStr, CString};
use std::ptr;

use lpinf_ffi::*;

fn last_error() -> String {
    let p = lpinf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn fixture(name: &str) -> *mut LpinfDocument {
    let name = CString::new(name).unwrap();
    let mut doc = ptr::null_mut();
    assert_eq!(
        unsafe { lpinf_fixture(name.as_ptr(), &mut doc) },
        LpinfStatus::Ok
    );
    assert!(!doc.is_null());
    doc
}

#[test]
fn fixture_documents_pass_every_check() {
    for name in ["sl2.toml", "pairing.toml", "lie_pair.toml"] {
        let doc = fixture(name);
        unsafe {
            assert_eq!(lpinf_document_validate(doc), LpinfStatus::Ok, "{name}");
            assert_eq!(lpinf_leibniz_agree(doc, 3), LpinfStatus::Ok, "{name}");
            assert_eq!(lpinf_leibniz_identities(doc, 3), LpinfStatus::Ok, "{name}");
            assert_eq!(lpinf_htan_check(doc), LpinfStatus::Ok, "{name}");
            lpinf_document_free(doc);
        }
    }
}

#[test]
fn parse_and_serialize_round_trip() {
    let doc = fixture("pairing.toml");
    let mut text = ptr::null_mut();
    unsafe {
        assert_eq!(lpinf_document_serialize(doc, &mut text), LpinfStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(lpinf_document_parse(text, &mut again), LpinfStatus::Ok);
        let mut text2 = ptr::null_mut();
        assert_eq!(lpinf_document_serialize(again, &mut text2), LpinfStatus::Ok);
        assert_eq!(CStr::from_ptr(text), CStr::from_ptr(text2));
        lpinf_string_free(text);
        lpinf_string_free(text2);
        lpinf_document_free(again);
        lpinf_document_free(doc);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let bad = CString::new(
        "[algebra]\nbasis = [[\"x\", 0]]\nbracket = [[\"x\", \"x\", \"x\", \"1/0\"]]\n",
    )
    .unwrap();
    let mut doc = ptr::null_mut();
    assert_eq!(
        unsafe { lpinf_document_parse(bad.as_ptr(), &mut doc) },
        LpinfStatus::InputError
    );
    assert!(doc.is_null());
    assert!(last_error().contains("line 3"), "{}", last_error());

    let two_dim = CString::new("[algebra]\nbasis = [[\"x\", 0], [\"y\", 0]]\nbracket = [[\"x\", \"y\", \"x\", \"1\"], [\"x\", \"y\", \"y\", \"1\"]]\n").unwrap();
    assert_eq!(
        unsafe { lpinf_document_parse(two_dim.as_ptr(), &mut doc) },
        LpinfStatus::Ok
    );
    unsafe { lpinf_document_free(doc) };

    let not_lie =
        CString::new("[algebra]\nbasis = [[\"x\", 1]]\nbracket = [[\"x\", \"x\", \"x\", \"1\"]]\n")
            .unwrap();
    assert_eq!(
        unsafe { lpinf_document_parse(not_lie.as_ptr(), &mut doc) },
        LpinfStatus::Violation
    );
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { lpinf_document_parse(ptr::null(), &mut doc) },
        LpinfStatus::NullPointer
    );
    assert_eq!(
        unsafe { lpinf_document_validate(ptr::null()) },
        LpinfStatus::NullPointer
    );
    let invalid = [0xffu8, 0];
    assert_eq!(
        unsafe { lpinf_document_parse(invalid.as_ptr().cast(), &mut doc) },
        LpinfStatus::InvalidUtf8
    );
    let unknown = CString::new("nope.toml").unwrap();
    assert_eq!(
        unsafe { lpinf_fixture(unknown.as_ptr(), &mut doc) },
        LpinfStatus::InputError
    );
}

#[test]
fn tree_class_counts() {
    let mut out = 0u64;
    let expected = [1u64, 1, 2, 6, 24];
    for (n, e) in (1..=5).zip(expected) {
        assert_eq!(unsafe { lpinf_tree_classes(n, &mut out) }, LpinfStatus::Ok);
        assert_eq!(out, e);
    }
    assert_eq!(
        unsafe { lpinf_tree_classes(0, &mut out) },
        LpinfStatus::InputError
    );
    assert_eq!(
        unsafe { lpinf_tree_classes(3, ptr::null_mut()) },
        LpinfStatus::NullPointer
    );
}

#[test]
fn header_declares_every_entry_point() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/lpinf.h")).unwrap();
    for f in [
        "lpinf_document_parse",
        "lpinf_fixture",
        "lpinf_document_free",
        "lpinf_document_serialize",
        "lpinf_string_free",
        "lpinf_document_validate",
        "lpinf_leibniz_agree",
        "lpinf_leibniz_identities",
        "lpinf_htan_check",
        "lpinf_tree_classes",
        "lpinf_last_error",
    ] {
        assert!(
            header.contains(&format!("{f}(")),
            "{f} missing from the header"
        );
    }
    assert!(header.contains("typedef struct LpinfDocument LpinfDocument;"));
}
