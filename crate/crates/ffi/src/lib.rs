//! C interface to the `multispace` engine.
//!
//! Instances are opaque heap handles created by [`ms_instance_parse`] and
//! released with [`ms_instance_free`]. Every fallible call returns an
//! [`MsStatus`]; on failure [`ms_last_error_message`] describes the problem.
//! Strings handed out by the library must be released with [`ms_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use multispace::search::{find_formula_discrepancies, GeneratorConfig};
use multispace::{
    is_multi_subspace, parse_instance, Error, InstanceError, MultiVectorSpace, OperationPolicy,
};

/// Result codes shared by all functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Semantic = 4,
    CapExceeded = 5,
    PolicyMismatch = 6,
    InvalidArgument = 7,
    Panic = 8,
}

/// Operation policy selector for [`ms_search_count`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsPolicy {
    Total = 0,
    Closed = 1,
}

/// Opaque instance handle.
pub struct MsInstance {
    inner: MultiVectorSpace,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Failure = (MsStatus, String);

fn core_failure(e: Error) -> Failure {
    let status = match e {
        ref e if e.is_cap_exceeded() => MsStatus::CapExceeded,
        Error::PolicyMismatch { .. } => MsStatus::PolicyMismatch,
        _ => MsStatus::InvalidArgument,
    };
    (status, e.to_string())
}

fn guard<F>(f: F) -> MsStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            MsStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    (MsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn instance<'a>(p: *const MsInstance, what: &str) -> Result<&'a MultiVectorSpace, Failure> {
    p.as_ref().map(|i| &i.inner).ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

/// Parses an instance file held in a NUL-terminated UTF-8 string.
///
/// # Safety
/// `text` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_instance_parse(
    text: *const c_char,
    out: *mut *mut MsInstance,
) -> MsStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (MsStatus::InvalidUtf8, e.to_string()))?;
        let m = parse_instance(s).map_err(|e| match e {
            InstanceError::Parse { .. } => (MsStatus::Parse, e.to_string()),
            InstanceError::Semantic { .. } => (MsStatus::Semantic, e.to_string()),
        })?;
        out.write(Box::into_raw(Box::new(MsInstance { inner: m })));
        Ok(())
    })
}

/// Releases an instance. Null is ignored.
///
/// # Safety
/// `inst` must come from [`ms_instance_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ms_instance_free(inst: *mut MsInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Writes the number of components.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ms_component_count(inst: *const MsInstance, out: *mut usize) -> MsStatus {
    guard(|| write_out(out, instance(inst, "inst")?.k()))
}

/// Writes the size of the greedy basis.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ms_dim_greedy(inst: *const MsInstance, out: *mut usize) -> MsStatus {
    guard(|| {
        let d = instance(inst, "inst")?.dim_greedy().map_err(core_failure)?;
        write_out(out, d)
    })
}

/// Writes the inclusion-exclusion dimension value.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ms_dim_inclusion_exclusion(
    inst: *const MsInstance,
    out: *mut i64,
) -> MsStatus {
    guard(|| {
        let d = instance(inst, "inst")?
            .dim_inclusion_exclusion()
            .map_err(core_failure)?;
        write_out(out, d)
    })
}

/// Writes whether `candidate` is a multi-vector subspace of `parent`, under
/// the policy of `parent`.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ms_is_multi_subspace(
    candidate: *const MsInstance,
    parent: *const MsInstance,
    out: *mut bool,
) -> MsStatus {
    guard(|| {
        let c = instance(candidate, "candidate")?;
        let p = instance(parent, "parent")?;
        let verdict = is_multi_subspace(c, p).map_err(core_failure)?;
        write_out(out, verdict)
    })
}

/// Renders the greedy basis, one `label c1,c2,...` line per vector. The
/// string must be released with [`ms_string_free`].
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ms_basis_render(
    inst: *const MsInstance,
    out: *mut *mut c_char,
) -> MsStatus {
    guard(|| {
        let basis = instance(inst, "inst")?
            .greedy_basis(None)
            .map_err(core_failure)?;
        let mut text = String::new();
        for v in basis {
            let coords: Vec<String> = v.coords().iter().map(|x| x.to_string()).collect();
            text += &format!("{} {}\n", v.ambient().label(), coords.join(","));
        }
        let c = CString::new(text).map_err(|e| (MsStatus::InvalidArgument, e.to_string()))?;
        write_out(out, c.into_raw())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs the random search over draws `0..trials` and writes the number of
/// instances on which the two dimension values disagree.
///
/// # Safety
/// `primes` must point to `prime_count` values; `out` must be valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ms_search_count(
    primes: *const u64,
    prime_count: usize,
    max_dim: usize,
    max_components: usize,
    max_ambients: usize,
    policy: MsPolicy,
    seed: u64,
    trials: u64,
    out: *mut u64,
) -> MsStatus {
    guard(|| {
        if primes.is_null() && prime_count > 0 {
            return Err(null("primes"));
        }
        let primes = if prime_count == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(primes, prime_count).to_vec()
        };
        let cfg = GeneratorConfig {
            primes,
            max_ambient_dim: max_dim,
            max_components,
            max_ambients,
            policy: match policy {
                MsPolicy::Total => OperationPolicy::Total,
                MsPolicy::Closed => OperationPolicy::Closed,
            },
            seed,
        };
        let found = find_formula_discrepancies(&cfg, trials).map_err(core_failure)?;
        write_out(out, found.len() as u64)
    })
}

/// Message for the last failure on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ms_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
