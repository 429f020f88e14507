//! C ABI for khlab.
//!
//! Diagrams and homology results are opaque handles created by the library
//! and released with the matching `*_free` function. Every fallible call
//! returns a `KhStatus`; on failure the message is available from
//! `khlab_last_error` on the same thread until the next failing call.
//! Strings returned by the library are released with `khlab_string_free`.
//! Theories are passed as `ring/h/t` strings, e.g. `"q/0/1"` or `"fp:2/1/0"`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use khlab::frobenius::TheoryTriple;
use khlab::homology::{analyze, Analysis, ComputeOptions};
use khlab::invariant::{s_invariant, verify_main_theorem};
use khlab::linkio::{parse_input, LinkDiagram};
use khlab::Error;

/// Result codes; `Ok` is zero.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    IndexOutOfRange = 4,
    MalformedPd = 10,
    InconsistentDiagram = 11,
    BadLetter = 12,
    MalformedBraid = 13,
    BadTorusParameters = 14,
    NotPrime = 20,
    BadRing = 21,
    RingNotField = 22,
    ShapeMismatch = 23,
    RingMismatch = 24,
    NotDiagonalizable = 30,
    NoSquareRatio = 31,
    CharTwoUnsupported = 32,
    NotAUnit = 33,
    InvalidTheory = 34,
    CubeTooLarge = 40,
    ZeroChain = 41,
    MixedDegree = 42,
    GammaVanishesModP = 50,
    NotAKnot = 51,
    HypothesisViolated = 52,
    UnexpectedProfile = 53,
    VerificationFailed = 54,
    FileNotFound = 60,
    IoError = 61,
    BadInput = 62,
}

impl From<&Error> for KhStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::MalformedPd(_) => KhStatus::MalformedPd,
            Error::InconsistentDiagram(_) => KhStatus::InconsistentDiagram,
            Error::BadLetter { .. } => KhStatus::BadLetter,
            Error::MalformedBraid(_) => KhStatus::MalformedBraid,
            Error::BadTorusParameters { .. } => KhStatus::BadTorusParameters,
            Error::NotPrime(_) => KhStatus::NotPrime,
            Error::BadRing(_) => KhStatus::BadRing,
            Error::RingNotField => KhStatus::RingNotField,
            Error::ShapeMismatch(_) => KhStatus::ShapeMismatch,
            Error::RingMismatch => KhStatus::RingMismatch,
            Error::NotDiagonalizable(_) => KhStatus::NotDiagonalizable,
            Error::NoSquareRatio => KhStatus::NoSquareRatio,
            Error::CharTwoUnsupported => KhStatus::CharTwoUnsupported,
            Error::NotAUnit => KhStatus::NotAUnit,
            Error::InvalidTheory(_) => KhStatus::InvalidTheory,
            Error::CubeTooLarge { .. } => KhStatus::CubeTooLarge,
            Error::ZeroChain => KhStatus::ZeroChain,
            Error::MixedDegree => KhStatus::MixedDegree,
            Error::GammaVanishesModP { .. } => KhStatus::GammaVanishesModP,
            Error::NotAKnot(_) => KhStatus::NotAKnot,
            Error::HypothesisViolated(_) => KhStatus::HypothesisViolated,
            Error::UnexpectedProfile(_) => KhStatus::UnexpectedProfile,
            Error::VerificationFailed(_) => KhStatus::VerificationFailed,
            Error::FileNotFound(_) => KhStatus::FileNotFound,
            Error::Io(_) => KhStatus::IoError,
            Error::BadInput(_) => KhStatus::BadInput,
        }
    }
}

/// A parsed link diagram.
pub struct KhDiagram(LinkDiagram);

/// Homology and filtration profile of a diagram under one theory.
pub struct KhHomology(Analysis);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Run `f`, recording failures and converting panics to `KhStatus::Panic`.
fn guard(f: impl FnOnce() -> Result<(), (KhStatus, String)>) -> KhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KhStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            KhStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (KhStatus, String) {
    (KhStatus::from(&e), format!("[{}] {e}", e.code()))
}

fn null(what: &str) -> (KhStatus, String) {
    (KhStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (KhStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (KhStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `p` is null or a live handle from this library.
unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, (KhStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

fn options(reduce: bool) -> ComputeOptions {
    ComputeOptions { reduce, ..ComputeOptions::default() }
}

fn out_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failing call on this thread; empty if none. Valid
/// until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn khlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse a PD code (`PD[X[...],...]`) or braid closure (`braid:<n>:<letters>`).
///
/// # Safety
/// `input` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_diagram_parse(input: *const c_char, out: *mut *mut KhDiagram) -> KhStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let d = parse_input(text(input, "input")?).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(KhDiagram(d)));
        Ok(())
    })
}

/// # Safety
/// `d` is null or a handle from `khlab_diagram_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn khlab_diagram_free(d: *mut KhDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of link components, or 0 for a null handle.
///
/// # Safety
/// `d` is null or a live diagram handle.
#[no_mangle]
pub unsafe extern "C" fn khlab_diagram_components(d: *const KhDiagram) -> usize {
    d.as_ref().map_or(0, |d| d.0.n_components())
}

/// Number of crossings, or 0 for a null handle.
///
/// # Safety
/// `d` is null or a live diagram handle.
#[no_mangle]
pub unsafe extern "C" fn khlab_diagram_crossings(d: *const KhDiagram) -> usize {
    d.as_ref().map_or(0, |d| d.0.n_crossings())
}

/// Homology of `d` under `triple`.
///
/// # Safety
/// `d` is a live diagram handle, `triple` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_homology(
    d: *const KhDiagram,
    triple: *const c_char,
    reduce: bool,
    out: *mut *mut KhHomology,
) -> KhStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let d = handle(d, "diagram")?;
        let t = TheoryTriple::parse(text(triple, "triple")?).map_err(lib_err)?;
        let a = analyze(&d.0, &t, options(reduce)).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(KhHomology(a)));
        Ok(())
    })
}

/// # Safety
/// `h` is null or a handle from `khlab_homology` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn khlab_homology_free(h: *mut KhHomology) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Total dimension (free rank over `Z`), or 0 for a null handle.
///
/// # Safety
/// `h` is null or a live homology handle.
#[no_mangle]
pub unsafe extern "C" fn khlab_homology_total(h: *const KhHomology) -> usize {
    h.as_ref().map_or(0, |h| h.0.homology.total_rank())
}

/// Number of degrees with non-zero homology.
///
/// # Safety
/// `h` is null or a live homology handle.
#[no_mangle]
pub unsafe extern "C" fn khlab_homology_degree_count(h: *const KhHomology) -> usize {
    h.as_ref().map_or(0, |h| h.0.homology.degrees.len())
}

/// The `index`-th non-zero degree in ascending order, its rank and its
/// number of torsion summands.
///
/// # Safety
/// `h` is a live homology handle; the out pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_homology_degree(
    h: *const KhHomology,
    index: usize,
    degree: *mut i64,
    rank: *mut usize,
    torsion_count: *mut usize,
) -> KhStatus {
    guard(|| {
        let h = handle(h, "homology")?;
        if degree.is_null() || rank.is_null() || torsion_count.is_null() {
            return Err(null("output"));
        }
        let (i, dh) = h.0.homology.degrees.iter().nth(index).ok_or((
            KhStatus::IndexOutOfRange,
            format!("degree index {index} out of range ({} degrees)", h.0.homology.degrees.len()),
        ))?;
        *degree = *i;
        *rank = dh.rank;
        *torsion_count = dh.torsion.len();
        Ok(())
    })
}

/// The full result as JSON; release with `khlab_string_free`.
///
/// # Safety
/// `h` is a live homology handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_homology_json(h: *const KhHomology, out: *mut *mut c_char) -> KhStatus {
    guard(|| {
        let h = handle(h, "homology")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let json = serde_json::to_string(&h.0).map_err(|e| (KhStatus::Panic, e.to_string()))?;
        *out = out_string(json);
        Ok(())
    })
}

/// The s-invariant of a knot under `triple`.
///
/// # Safety
/// `d` is a live diagram handle, `triple` a NUL-terminated string and `s`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_s_invariant(d: *const KhDiagram, triple: *const c_char, s: *mut i64) -> KhStatus {
    guard(|| {
        let d = handle(d, "diagram")?;
        if s.is_null() {
            return Err(null("s"));
        }
        let t = TheoryTriple::parse(text(triple, "triple")?).map_err(lib_err)?;
        *s = s_invariant(&d.0, &t, options(true)).map_err(lib_err)?.s;
        Ok(())
    })
}

/// Compute `s` under the default panel. Writes whether all values agree and
/// the report as JSON (release with `khlab_string_free`; `json` may be null).
///
/// # Safety
/// `d` is a live diagram handle; `pass` is writable; `json` is null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn khlab_verify_theorem(d: *const KhDiagram, pass: *mut bool, json: *mut *mut c_char) -> KhStatus {
    guard(|| {
        let d = handle(d, "diagram")?;
        if pass.is_null() {
            return Err(null("pass"));
        }
        let r = verify_main_theorem(&d.0, &TheoryTriple::default_panel(), options(true)).map_err(lib_err)?;
        *pass = r.pass;
        if !json.is_null() {
            *json = out_string(serde_json::to_string(&r).map_err(|e| (KhStatus::Panic, e.to_string()))?);
        }
        Ok(())
    })
}

/// # Safety
/// `s` is null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn khlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn trefoil_round_trip() {
        unsafe {
            let mut d = ptr::null_mut();
            assert_eq!(khlab_diagram_parse(c("braid:2:1,1,1").as_ptr(), &mut d), KhStatus::Ok);
            assert_eq!((khlab_diagram_components(d), khlab_diagram_crossings(d)), (1, 3));
            let mut s = 0;
            assert_eq!(khlab_s_invariant(d, c("fp:2/1/0").as_ptr(), &mut s), KhStatus::Ok);
            assert_eq!(s, 2);

            let mut h = ptr::null_mut();
            assert_eq!(khlab_homology(d, c("z/0/0").as_ptr(), true, &mut h), KhStatus::Ok);
            assert_eq!(khlab_homology_total(h), 4);
            assert_eq!(khlab_homology_degree_count(h), 3);
            let (mut deg, mut rank, mut tors) = (0, 0, 0);
            assert_eq!(khlab_homology_degree(h, 2, &mut deg, &mut rank, &mut tors), KhStatus::Ok);
            assert_eq!((deg, rank, tors), (3, 1, 1));
            assert_eq!(khlab_homology_degree(h, 3, &mut deg, &mut rank, &mut tors), KhStatus::IndexOutOfRange);
            let mut json = ptr::null_mut();
            assert_eq!(khlab_homology_json(h, &mut json), KhStatus::Ok);
            assert!(CStr::from_ptr(json).to_str().unwrap().contains("\"torsion\":[2]"));
            khlab_string_free(json);
            khlab_homology_free(h);

            let mut pass = false;
            assert_eq!(khlab_verify_theorem(d, &mut pass, ptr::null_mut()), KhStatus::Ok);
            assert!(pass);
            khlab_diagram_free(d);
        }
    }

    #[test]
    fn errors_set_status_and_message() {
        unsafe {
            let mut d = ptr::null_mut();
            assert_eq!(khlab_diagram_parse(c("PD[X[1,2]").as_ptr(), &mut d), KhStatus::MalformedPd);
            assert!(d.is_null());
            assert!(CStr::from_ptr(khlab_last_error()).to_str().unwrap().starts_with("[MALFORMED_PD]"));
            assert_eq!(khlab_diagram_parse(ptr::null(), &mut d), KhStatus::NullPointer);

            assert_eq!(khlab_diagram_parse(c("PD[X[4,1,3,2],X[2,3,1,4]]").as_ptr(), &mut d), KhStatus::Ok);
            let mut s = 0;
            assert_eq!(khlab_s_invariant(d, c("q/0/1").as_ptr(), &mut s), KhStatus::NotAKnot);
            assert_eq!(khlab_s_invariant(d, c("q/0").as_ptr(), &mut s), KhStatus::InvalidTheory);
            assert_eq!(khlab_s_invariant(ptr::null(), c("q/0/1").as_ptr(), &mut s), KhStatus::NullPointer);
            khlab_diagram_free(d);
            khlab_diagram_free(ptr::null_mut());
        }
    }
}
