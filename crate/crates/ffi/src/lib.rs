// SPDX-License-Identifier: Apache-2.0

//! C ABI over `aacts`. Machines live behind opaque handles, every function
//! returns an [`AactsStatus`], and strings handed out must be released with
//! [`aacts_string_free`]. The message of the last failure on the calling
//! thread is available from [`aacts_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use aacts::analysis::{self, compare_levels, Equivalence, Verdict};
use aacts::document::{parse_document, Document};
use aacts::switching::{gen_double, gen_single, DoubleParams, RotationPolicy, SingleParams};
use aacts::translate::{cts_to_aa, cts_to_aa_executor, ExecutorChoice, NondeterminismPolicy};
use aacts::{ComposedCts, Error, GlobalAA, Limits, ProcessId};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AactsStatus {
    Ok = 0,
    /// The call succeeded but the answer is negative (languages differ,
    /// a process is neither fully-listening nor trivializable).
    Negative = 1,
    InvalidInput = 2,
    ResourceLimit = 3,
    NullPointer = 4,
    Utf8 = 5,
    Panic = 6,
}

/// A composed channeled system.
pub struct AactsSystem(ComposedCts);

/// An asynchronous automaton.
pub struct AactsAutomaton(GlobalAA);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Fail {
    Status(AactsStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(AactsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, translating errors and panics into a status and a message.
fn guard(f: impl FnOnce() -> Result<AactsStatus, Fail>) -> AactsStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail::Status(s, m))) => {
            set_error(&m);
            s
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            if e.is_resource() {
                AactsStatus::ResourceLimit
            } else {
                AactsStatus::InvalidInput
            }
        }
        Err(_) => {
            set_error("internal panic");
            AactsStatus::Panic
        }
    }
}

/// # Safety
/// `s` must be null or a NUL-terminated string.
unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail::Status(AactsStatus::Utf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `out` must be null or writable.
unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<AactsStatus, Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(AactsStatus::Ok)
}

/// # Safety
/// `out` must be null or writable.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = CString::new(s).expect("no interior NUL").into_raw();
    Ok(())
}

fn limits() -> Result<Limits, Fail> {
    Ok(Limits::from_env()?)
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn aacts_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn aacts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a `cts` or `cts-system` document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aacts_system_from_json(json: *const c_char, out: *mut *mut AactsSystem) -> AactsStatus {
    guard(|| {
        let sys = match parse_document(text(json, "json")?)? {
            Document::CtsSystem(s) => s,
            Document::Cts(c) => aacts::compose(vec![c])?,
            other => return Err(Error::input(format!("expected a cts-system document, got '{}'", other.kind())).into()),
        };
        put(out, AactsSystem(sys))
    })
}

/// Single-switching system with `n` processes.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aacts_gen_single(n: u32, out: *mut *mut AactsSystem) -> AactsStatus {
    guard(|| put(out, AactsSystem(gen_single(SingleParams::new(n as usize))?.into_system())))
}

/// Double-switching system with `n` processes; `disjoint` selects the
/// rotation that keeps switching channels unowned.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aacts_gen_double(n: u32, disjoint: bool, out: *mut *mut AactsSystem) -> AactsStatus {
    guard(|| {
        let rotation = if disjoint {
            RotationPolicy::Disjoint
        } else {
            RotationPolicy::Verbatim
        };
        put(
            out,
            AactsSystem(gen_double(DoubleParams { n: n as usize, rotation })?.into_system()),
        )
    })
}

/// # Safety
/// `sys` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aacts_system_free(sys: *mut AactsSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aacts_system_to_json(sys: *const AactsSystem, out: *mut *mut c_char) -> AactsStatus {
    guard(|| {
        let s = sys.as_ref().ok_or_else(|| null("system"))?;
        put_string(out, Document::CtsSystem(s.0.clone()).to_json())?;
        Ok(AactsStatus::Ok)
    })
}

/// Parses a `global-aa` or `local-aa` document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aacts_automaton_from_json(json: *const c_char, out: *mut *mut AactsAutomaton) -> AactsStatus {
    guard(|| {
        let aa = match parse_document(text(json, "json")?)? {
            Document::GlobalAa(g) => g,
            Document::LocalAa(l) => GlobalAA::from_local(&l),
            other => return Err(Error::input(format!("expected an automaton document, got '{}'", other.kind())).into()),
        };
        put(out, AactsAutomaton(aa))
    })
}

/// # Safety
/// `aa` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aacts_automaton_free(aa: *mut AactsAutomaton) {
    if !aa.is_null() {
        drop(Box::from_raw(aa));
    }
}

/// # Safety
/// `aa` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aacts_automaton_to_json(aa: *const AactsAutomaton, out: *mut *mut c_char) -> AactsStatus {
    guard(|| {
        let a = aa.as_ref().ok_or_else(|| null("automaton"))?;
        put_string(out, Document::GlobalAa(a.0.clone()).to_json())?;
        Ok(AactsStatus::Ok)
    })
}

/// Automaton in which every process takes part in every channel.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aacts_translate_cts_to_aa(sys: *const AactsSystem, out: *mut *mut AactsAutomaton) -> AactsStatus {
    guard(|| {
        let s = sys.as_ref().ok_or_else(|| null("system"))?;
        put(out, AactsAutomaton(cts_to_aa(&s.0, NondeterminismPolicy::Reject, limits()?)?))
    })
}

/// Automaton in which process `executor` simulates the whole system and
/// the others listen to nothing.
///
/// # Safety
/// `sys` must be a live handle, `executor` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn aacts_translate_cts_to_aa_executor(
    sys: *const AactsSystem,
    executor: *const c_char,
    out: *mut *mut AactsAutomaton,
) -> AactsStatus {
    guard(|| {
        let s = sys.as_ref().ok_or_else(|| null("system"))?;
        let name = text(executor, "executor")?;
        let p = s
            .0
            .process_by_name(name)
            .ok_or_else(|| Error::input(format!("unknown process '{name}'")))?;
        let choice = ExecutorChoice::new(ProcessId(p as u16));
        put(
            out,
            AactsAutomaton(cts_to_aa_executor(&s.0, &choice, NondeterminismPolicy::Reject, limits()?)?),
        )
    })
}

/// Compares the languages of two documents up to length `max_len`.
/// Returns `AACTS_STATUS_NEGATIVE` when they differ; the distinguishing
/// word (letters separated by spaces) is then written to `word_out` if it
/// is not null.
///
/// # Safety
/// `a` and `b` must be NUL-terminated strings; `word_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn aacts_equiv_documents(
    a: *const c_char,
    b: *const c_char,
    max_len: u32,
    word_out: *mut *mut c_char,
) -> AactsStatus {
    guard(|| {
        let lim = limits()?;
        let da = parse_document(text(a, "first document")?)?;
        let db = parse_document(text(b, "second document")?)?;
        let la = analysis::document_language(&da, max_len as usize, lim)?;
        let lb = analysis::document_language(&db, max_len as usize, lim)?;
        match compare_levels(&la, &lb) {
            Equivalence::Equal => Ok(AactsStatus::Ok),
            Equivalence::Differs { word, .. } => {
                if !word_out.is_null() {
                    put_string(word_out, word.join(" "))?;
                }
                Ok(AactsStatus::Negative)
            }
        }
    })
}

/// Number of words of length at most `max_len` in the document's language.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aacts_language_count(json: *const c_char, max_len: u32, out: *mut u64) -> AactsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let doc = parse_document(text(json, "json")?)?;
        let levels = analysis::document_language(&doc, max_len as usize, limits()?)?;
        *out = levels.iter().map(|l| l.len() as u64).sum();
        Ok(AactsStatus::Ok)
    })
}

/// Classifies every process; the JSON report is written to `report_out` if
/// it is not null. Returns `AACTS_STATUS_NEGATIVE` when some process is
/// neither fully-listening nor trivializable.
///
/// # Safety
/// `aa` must be a live handle; `report_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn aacts_analyze(aa: *const AactsAutomaton, report_out: *mut *mut c_char) -> AactsStatus {
    guard(|| {
        let a = aa.as_ref().ok_or_else(|| null("automaton"))?;
        let report = analysis::analyze(&a.0, None, limits()?)?;
        if !report_out.is_null() {
            put_string(report_out, Document::report(&report)?.to_json())?;
        }
        if report.processes.iter().any(|p| p.verdict == Verdict::NeitherDetected) {
            Ok(AactsStatus::Negative)
        } else {
            Ok(AactsStatus::Ok)
        }
    })
}
