//! C ABI over `sfdt-core`.
//!
//! Instances and solutions are opaque handles owned by the caller and
//! released with their `_free` function. Every entry point returns an
//! [`SfdtStatus`]; on a negative status a message is available from
//! [`sfdt_last_error`] on the same thread. Panics never cross the boundary.
//!
//! Fiber indices are 0-based here, unlike the 1-based JSON format.
//!
//! The header `include/sfdt.h` is regenerated by the build script.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use sfdt_core::cover::{Cover, Transversal, ValueMap};
use sfdt_core::io::CoverDoc;
use sfdt_core::solver::{self, SolveOptions, SolveResult, SolveStatus};
use sfdt_core::{construct, Error};

/// Result of every call. Non-negative values are answers, negative values errors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfdtStatus {
    /// Success, or the question was answered yes.
    Ok = 0,
    /// The question was answered no (for instance, no SFDT exists).
    No = 1,
    /// A node or time limit stopped the search.
    Aborted = 2,
    NullPointer = -1,
    /// Malformed JSON, bad UTF-8 or a shape mismatch.
    InvalidInput = -2,
    /// The input is well formed but outside what the call supports.
    Precondition = -3,
    /// An internal panic was caught.
    Panic = -4,
}

/// A cover together with its value map.
pub struct SfdtInstance {
    cover: Cover,
    f: ValueMap,
}

/// Outcome of a search.
pub struct SfdtSolution {
    status: SolveStatus,
    picks: Option<Vec<usize>>,
    nodes: u64,
    bounded: bool,
    strictly_bounded: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

#[doc(hidden)]
pub struct Failure(SfdtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Precondition(_) | Error::Disconnected | Error::TooLarge { .. } | Error::EnumerationGuard { .. } => {
                SfdtStatus::Precondition
            }
            _ => SfdtStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SfdtStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting failures and panics into a status and recording
/// the message for [`sfdt_last_error`].
#[doc(hidden)]
pub fn guard(body: impl FnOnce() -> Result<SfdtStatus, Failure>) -> SfdtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(s)) => s,
        Ok(Err(Failure(s, msg))) => {
            set_error(msg);
            s
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            SfdtStatus::Panic
        }
    }
}

#[doc(hidden)]
pub fn fail(status: SfdtStatus, msg: &str) -> Result<SfdtStatus, Failure> {
    Err(Failure(status, msg.into()))
}

unsafe fn instance<'a>(p: *const SfdtInstance) -> Result<&'a SfdtInstance, Failure> {
    p.as_ref().ok_or_else(|| null("instance"))
}

unsafe fn transversal(inst: &SfdtInstance, picks: *const usize, len: usize) -> Result<Transversal, Failure> {
    if picks.is_null() && len > 0 {
        return Err(null("picks"));
    }
    let slice = if len == 0 { &[][..] } else { std::slice::from_raw_parts(picks, len) };
    if len != inst.cover.n() {
        return Err(Error::TransversalShape {
            expected: inst.cover.n(),
            got: len,
        }
        .into());
    }
    if let Some(&q) = slice.iter().find(|&&q| q >= inst.cover.kappa()) {
        return Err(Failure(
            SfdtStatus::InvalidInput,
            format!("pick {q} out of range 0..{}", inst.cover.kappa()),
        ));
    }
    Ok(Transversal::new(slice.to_vec()))
}

fn options(max_nodes: u64, timeout_s: f64) -> Result<SolveOptions, Failure> {
    if timeout_s.is_nan() || timeout_s < 0.0 || timeout_s.is_infinite() {
        return Err(Failure(SfdtStatus::InvalidInput, "timeout must be finite and non-negative".into()));
    }
    Ok(SolveOptions {
        max_nodes: (max_nodes > 0).then_some(max_nodes),
        timeout: (timeout_s > 0.0).then(|| Duration::from_secs_f64(timeout_s)),
    })
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no interior nul").into_raw()
}

fn deliver(res: SolveResult, out: *mut *mut SfdtSolution) -> SfdtStatus {
    let status = match res.status {
        SolveStatus::Found => SfdtStatus::Ok,
        SolveStatus::Exhausted => SfdtStatus::No,
        SolveStatus::Aborted => SfdtStatus::Aborted,
    };
    let sol = SfdtSolution {
        status: res.status,
        picks: res.witness.map(|r| r.picks),
        nodes: res.nodes_expanded,
        bounded: res.bounded,
        strictly_bounded: res.strictly_bounded,
    };
    unsafe { *out = Box::into_raw(Box::new(sol)) };
    status
}

/// Parses an instance from its JSON document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sfdt_instance_from_json(json: *const c_char, out: *mut *mut SfdtInstance) -> SfdtStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(SfdtStatus::InvalidInput, format!("json is not UTF-8: {e}")))?;
        let (cover, f) = CoverDoc::from_json(text)?.to_instance()?;
        *out = Box::into_raw(Box::new(SfdtInstance { cover, f }));
        Ok(SfdtStatus::Ok)
    })
}

/// Serialises an instance; release the string with [`sfdt_string_free`].
///
/// # Safety
/// `inst` must come from [`sfdt_instance_from_json`]; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sfdt_instance_to_json(inst: *const SfdtInstance, out: *mut *mut c_char) -> SfdtStatus {
    guard(|| {
        let inst = instance(inst)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = c_string(CoverDoc::from_instance(&inst.cover, &inst.f).to_json());
        Ok(SfdtStatus::Ok)
    })
}

/// Base vertex count, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn sfdt_instance_n(inst: *const SfdtInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.cover.n())
}

/// Fiber size, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn sfdt_instance_kappa(inst: *const SfdtInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.cover.kappa())
}

/// # Safety
/// `inst` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sfdt_instance_free(inst: *mut SfdtInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Searches for a strictly f-degenerate transversal. Returns `SFDT_STATUS_OK`
/// when one is found, `SFDT_STATUS_NO` when none exists and
/// `SFDT_STATUS_ABORTED` when a limit was hit; `*out` is set in all three
/// cases. A zero `max_nodes` or `timeout_s` means unlimited.
///
/// # Safety
/// `inst` must be a live instance handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sfdt_solve(
    inst: *const SfdtInstance,
    max_nodes: u64,
    timeout_s: f64,
    out: *mut *mut SfdtSolution,
) -> SfdtStatus {
    guard(|| {
        let inst = instance(inst)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let res = solver::find_sfdt_with(&inst.cover, &inst.f, options(max_nodes, timeout_s)?);
        Ok(deliver(res, out))
    })
}

/// Like [`sfdt_solve`], but the witness is pushed down by deficiency descent
/// so that every pick is bounded (`strict == false`) or strictly bounded.
/// The strict form needs every fiber sum to exceed the degree.
///
/// # Safety
/// `inst` must be a live instance handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sfdt_solve_bounded(
    inst: *const SfdtInstance,
    strict: bool,
    max_nodes: u64,
    timeout_s: f64,
    out: *mut *mut SfdtSolution,
) -> SfdtStatus {
    guard(|| {
        let inst = instance(inst)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let opts = options(max_nodes, timeout_s)?;
        let res = if strict {
            solver::find_sfdt_strictly_bounded_with(&inst.cover, &inst.f, opts)?
        } else {
            solver::find_sfdt_bounded_with(&inst.cover, &inst.f, opts)
        };
        Ok(deliver(res, out))
    })
}

/// Number of picks in the witness, 0 when there is none.
///
/// # Safety
/// `sol` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn sfdt_solution_len(sol: *const SfdtSolution) -> usize {
    sol.as_ref().and_then(|s| s.picks.as_ref()).map_or(0, Vec::len)
}

/// Copies the witness into `buf`, which must hold [`sfdt_solution_len`]
/// entries. Returns `SFDT_STATUS_NO` when the solution has no witness.
///
/// # Safety
/// `sol` must be a live solution handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn sfdt_solution_picks(sol: *const SfdtSolution, buf: *mut usize, cap: usize) -> SfdtStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("solution"))?;
        let Some(picks) = &sol.picks else {
            return Ok(SfdtStatus::No);
        };
        if buf.is_null() {
            return Err(null("buf"));
        }
        if cap < picks.len() {
            return fail(SfdtStatus::InvalidInput, "buffer too small");
        }
        ptr::copy_nonoverlapping(picks.as_ptr(), buf, picks.len());
        Ok(SfdtStatus::Ok)
    })
}

/// Search nodes expanded, or 0 for a null handle.
///
/// # Safety
/// `sol` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn sfdt_solution_nodes(sol: *const SfdtSolution) -> u64 {
    sol.as_ref().map_or(0, |s| s.nodes)
}

/// Whether the witness has `deg(v, q) <= f(v, q)` at every pick.
///
/// # Safety
/// `sol` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn sfdt_solution_bounded(sol: *const SfdtSolution) -> bool {
    sol.as_ref().is_some_and(|s| s.bounded)
}

/// Whether the witness has `deg(v, q) < f(v, q)` at every pick.
///
/// # Safety
/// `sol` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn sfdt_solution_strictly_bounded(sol: *const SfdtSolution) -> bool {
    sol.as_ref().is_some_and(|s| s.strictly_bounded)
}

/// Serialises the solution as the CLI does (`status`, `nodes`, 1-based `witness`).
///
/// # Safety
/// `sol` must be a live solution handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sfdt_solution_to_json(sol: *const SfdtSolution, out: *mut *mut c_char) -> SfdtStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut doc = serde_json::json!({ "status": sol.status, "nodes": sol.nodes });
        if let Some(p) = &sol.picks {
            doc["witness"] = p.iter().map(|q| q + 1).collect();
        }
        *out = c_string(doc.to_string());
        Ok(SfdtStatus::Ok)
    })
}

/// # Safety
/// `sol` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sfdt_solution_free(sol: *mut SfdtSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Checks whether `picks` (length n, 0-based) is a strictly f-degenerate
/// transversal. Returns `SFDT_STATUS_OK` for yes and `SFDT_STATUS_NO` for no.
///
/// # Safety
/// `inst` must be a live instance handle and `picks` valid for `len` reads.
#[no_mangle]
pub unsafe extern "C" fn sfdt_check_transversal(inst: *const SfdtInstance, picks: *const usize, len: usize) -> SfdtStatus {
    guard(|| {
        let inst = instance(inst)?;
        let r = transversal(inst, picks, len)?;
        Ok(if solver::is_sfdt(&inst.cover, &inst.f, &r) {
            SfdtStatus::Ok
        } else {
            SfdtStatus::No
        })
    })
}

/// Writes the deficiency `|E(R)| - sum f(v, R(v))` of the transversal.
///
/// # Safety
/// `inst` must be a live instance handle, `picks` valid for `len` reads and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sfdt_deficiency(inst: *const SfdtInstance, picks: *const usize, len: usize, out: *mut i64) -> SfdtStatus {
    guard(|| {
        let inst = instance(inst)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = transversal(inst, picks, len)?;
        *out = solver::deficiency(&inst.cover, &inst.f, &r).0;
        Ok(SfdtStatus::Ok)
    })
}

/// Decides constructibility. On `SFDT_STATUS_OK` the construction tree is
/// written to `*tree_json` (free with [`sfdt_string_free`]); on
/// `SFDT_STATUS_NO` it is set to null. `tree_json` may be null when only the
/// answer is wanted.
///
/// # Safety
/// `inst` must be a live instance handle; `tree_json` null or valid.
#[no_mangle]
pub unsafe extern "C" fn sfdt_is_constructible(inst: *const SfdtInstance, tree_json: *mut *mut c_char) -> SfdtStatus {
    guard(|| {
        let inst = instance(inst)?;
        if !tree_json.is_null() {
            *tree_json = ptr::null_mut();
        }
        match construct::is_constructible(&inst.cover, &inst.f)? {
            Some(tree) => {
                if !tree_json.is_null() {
                    *tree_json = c_string(serde_json::to_string(&tree).expect("trees serialise"));
                }
                Ok(SfdtStatus::Ok)
            }
            None => Ok(SfdtStatus::No),
        }
    })
}

/// Message for the last negative status on this thread, or null. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn sfdt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sfdt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sfdt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
