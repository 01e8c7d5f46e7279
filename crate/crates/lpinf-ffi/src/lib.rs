//! C ABI over the `lpinf` library.
//!
//! Objects cross the boundary as opaque handles created by a `*_new` or
//! `*_parse` function and released by the matching `*_free`. Every fallible
//! function returns an [`LpinfStatus`]; the message of the last failure on the
//! calling thread is available from [`lpinf_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lpinf::error::Error;
use lpinf::fixtures;
use lpinf::io::{self, Resolved, SpecDocument};
use lpinf::leibniz::{htan_compatibility, tuples, LeibnizInfty};
use lpinf::lp::WeakLp;
use lpinf::trees::{enumerate_mlrt, TreeEvaluator};

/// Outcome of a call.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpinfStatus {
    Ok = 0,
    /// A mathematical check failed; the message carries the witness.
    Violation = 1,
    /// The input could not be parsed or resolved.
    InputError = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    /// An internal error; the library state is unaffected.
    Panic = 5,
}

/// A parsed and resolved document.
pub struct LpinfDocument {
    doc: SpecDocument,
    resolved: Resolved,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> LpinfStatus {
    set_error(e.to_string());
    if e.is_mathematical() {
        LpinfStatus::Violation
    } else {
        LpinfStatus::InputError
    }
}

fn guard(f: impl FnOnce() -> LpinfStatus) -> LpinfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal error");
            LpinfStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, LpinfStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(LpinfStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        LpinfStatus::InvalidUtf8
    })
}

unsafe fn doc_arg<'a>(p: *const LpinfDocument) -> Result<&'a LpinfDocument, LpinfStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null document handle");
        LpinfStatus::NullPointer
    })
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

fn weak_lp(d: &LpinfDocument) -> WeakLp {
    d.resolved
        .lp
        .clone()
        .unwrap_or_else(|| WeakLp::identity(&d.resolved.algebra))
}

/// Parses and resolves a document. On success `*out` owns a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lpinf_document_parse(
    text: *const c_char,
    out: *mut *mut LpinfDocument,
) -> LpinfStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return LpinfStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let text = tri!(str_arg(text));
        match io::load(text) {
            Ok((doc, resolved)) => {
                *out = Box::into_raw(Box::new(LpinfDocument { doc, resolved }));
                LpinfStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Loads one of the built-in fixture documents by file name, e.g. `"sl2.toml"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lpinf_fixture(
    name: *const c_char,
    out: *mut *mut LpinfDocument,
) -> LpinfStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return LpinfStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let name = tri!(str_arg(name));
        let Some((_, doc)) = fixtures::documents().into_iter().find(|(n, _)| *n == name) else {
            set_error(format!("no fixture named {name:?}"));
            return LpinfStatus::InputError;
        };
        let text = io::serialize(&doc);
        match io::load(&text) {
            Ok((doc, resolved)) => {
                *out = Box::into_raw(Box::new(LpinfDocument { doc, resolved }));
                LpinfStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `doc` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lpinf_document_free(doc: *mut LpinfDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Canonical text of the document. Release the string with [`lpinf_string_free`].
///
/// # Safety
/// `doc` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lpinf_document_serialize(
    doc: *const LpinfDocument,
    out: *mut *mut c_char,
) -> LpinfStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return LpinfStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let d = tri!(doc_arg(doc));
        let text = io::serialize(&d.doc).replace('\0', " ");
        *out = CString::new(text).expect("NUL removed").into_raw();
        LpinfStatus::Ok
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lpinf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Re-runs every check on the document: algebra, modules, morphisms,
/// homotopies (both routes) and the Leibniz algebra, if any.
///
/// # Safety
/// `doc` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpinf_document_validate(doc: *const LpinfDocument) -> LpinfStatus {
    guard(|| {
        let d = tri!(doc_arg(doc));
        let r = &d.resolved;
        let run = || -> lpinf::Result<()> {
            r.algebra.verify_ce_square_zero()?;
            for m in r.modules.values() {
                m.verify_square_zero()?;
            }
            for f in r.morphisms.values() {
                f.validate()?;
            }
            for h in r.homotopies.values() {
                h.verify()?;
            }
            if let Some(l) = &r.leibniz {
                l.validate()?;
            }
            Ok(())
        };
        match run() {
            Ok(()) => LpinfStatus::Ok,
            Err(e) => status_of(&e),
        }
    })
}

/// Checks that the recursive, closed-form and tree evaluations of `λ_arity`
/// agree on every basis tuple of the document's weak LP module (the identity
/// on the adjoint module if none is selected).
///
/// # Safety
/// `doc` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpinf_leibniz_agree(doc: *const LpinfDocument, arity: u32) -> LpinfStatus {
    guard(|| {
        let d = tri!(doc_arg(doc));
        let ev = LeibnizInfty::new(weak_lp(d));
        let mut trees = TreeEvaluator::new(&ev);
        for args in tuples(ev.dim(), arity as usize) {
            let r = ev.lambda_recursive(&args);
            if ev.lambda_closed_form(&args) != r || trees.lambda(&args) != r {
                set_error(format!("λ_{arity} disagrees on basis tuple {args:?}"));
                return LpinfStatus::Violation;
            }
        }
        LpinfStatus::Ok
    })
}

/// Verifies the Leibniz∞[1] identities through arity `n_max`.
///
/// # Safety
/// `doc` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpinf_leibniz_identities(
    doc: *const LpinfDocument,
    n_max: u32,
) -> LpinfStatus {
    guard(|| {
        let d = tri!(doc_arg(doc));
        match LeibnizInfty::new(weak_lp(d)).verify_identities(n_max as usize) {
            Ok(()) => LpinfStatus::Ok,
            Err(v) => status_of(&v.into()),
        }
    })
}

/// Compatibility of the Leibniz bracket on `H_tan(M)` with `λ₂`.
///
/// # Safety
/// `doc` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lpinf_htan_check(doc: *const LpinfDocument) -> LpinfStatus {
    guard(|| {
        let d = tri!(doc_arg(doc));
        match htan_compatibility(&LeibnizInfty::new(weak_lp(d))) {
            Ok(_) => LpinfStatus::Ok,
            Err(e) => status_of(&e),
        }
    })
}

/// Number of classes of monotonically labelled rooted trees with `n` vertices.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lpinf_tree_classes(n: u32, out: *mut u64) -> LpinfStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return LpinfStatus::NullPointer;
        }
        if n == 0 || n > 8 {
            set_error("n must be between 1 and 8");
            return LpinfStatus::InputError;
        }
        *out = enumerate_mlrt(n as usize).len() as u64;
        LpinfStatus::Ok
    })
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn lpinf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
