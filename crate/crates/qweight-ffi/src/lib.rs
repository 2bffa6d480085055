//! C ABI for the qweight library.
//!
//! All objects are opaque handles created by `qw_*_new`-style constructors
//! and released with the matching `qw_*_free`. Every fallible call returns a
//! [`QwStatus`]; on failure a thread-local message is readable through
//! [`qw_last_error`]. Passing a null handle to any accessor is reported as
//! `QW_STATUS_NULL_POINTER` rather than undefined behavior.
//!
//! The generated C header lives at `include/qweight.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use qweight::analysis;
use qweight::enumerators::{enumerator_set, EnumeratorSet};
use qweight::stabilizer::{named_code, StabilizerGroup};
use qweight::states::{load_density_matrix, named_state};
use qweight::swap::{analytic_distribution, circuit_distribution, estimate, sample, SwapDistribution};
use qweight::tensor::{purity, Operator, SubsystemShape};

/// Status code of every fallible call.
#[allow(non_camel_case_types)]
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QwStatus {
    QW_STATUS_OK = 0,
    QW_STATUS_NULL_POINTER = 1,
    QW_STATUS_INVALID_INPUT = 2,
    QW_STATUS_SIZE_CAP_EXCEEDED = 3,
    QW_STATUS_NUMERIC_ERROR = 4,
    QW_STATUS_BUFFER_TOO_SMALL = 5,
}

use QwStatus::*;

/// Distribution engine selector.
#[allow(non_camel_case_types)]
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QwEngine {
    QW_ENGINE_ANALYTIC = 0,
    QW_ENGINE_CIRCUIT = 1,
}

/// Enumerator family selector.
#[allow(non_camel_case_types)]
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QwFamily {
    QW_FAMILY_A = 0,
    QW_FAMILY_B = 1,
    QW_FAMILY_A_PRIME = 2,
    QW_FAMILY_B_PRIME = 3,
    QW_FAMILY_SHADOW = 4,
}

/// A density matrix together with its subsystem shape.
pub struct QwState {
    rho: Operator,
    shape: SubsystemShape,
}

/// A validated stabilizer code and its normalized projector.
pub struct QwCode {
    group: StabilizerGroup,
    state: QwState,
    dim: u64,
}

/// A SWAP-test outcome distribution.
pub struct QwDistribution {
    dist: SwapDistribution,
}

/// The five enumerator families of one state.
pub struct QwEnumerators {
    set: EnumeratorSet,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &qweight::Error) -> QwStatus {
    use qweight::Error;
    match err {
        Error::SizeCap(_) => QW_STATUS_SIZE_CAP_EXCEEDED,
        Error::Numeric(_) | Error::Io(_) | Error::Json(_) => QW_STATUS_NUMERIC_ERROR,
        _ => QW_STATUS_INVALID_INPUT,
    }
}

/// Run a fallible body, translating errors and panics into status codes.
fn guarded<T>(
    out: *mut *mut T,
    body: impl FnOnce() -> Result<T, qweight::Error>,
) -> QwStatus {
    if out.is_null() {
        set_last_error("output pointer is null");
        return QW_STATUS_NULL_POINTER;
    }
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(value)) => {
            unsafe { *out = Box::into_raw(Box::new(value)) };
            QW_STATUS_OK
        }
        Ok(Err(err)) => {
            set_last_error(&err.to_string());
            status_of(&err)
        }
        Err(_) => {
            set_last_error("internal panic");
            QW_STATUS_NUMERIC_ERROR
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, QwStatus> {
    if ptr.is_null() {
        set_last_error("string argument is null");
        return Err(QW_STATUS_NULL_POINTER);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error("string argument is not valid UTF-8");
        QW_STATUS_INVALID_INPUT
    })
}

macro_rules! deref_or {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(v) => v,
            None => {
                set_last_error("handle is null");
                return QW_STATUS_NULL_POINTER;
            }
        }
    };
}

/// Copy the message of the most recent error on this thread into `buffer`
/// (NUL-terminated, truncated to `capacity`). Returns the full message
/// length including the terminator.
#[no_mangle]
pub extern "C" fn qw_last_error(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buffer.is_null() && capacity > 0 {
            let take = bytes.len().min(capacity - 1);
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buffer, take);
                *buffer.add(take) = 0;
            }
        }
        bytes.len()
    })
}

/// Library version string (static storage, do not free).
#[no_mangle]
pub extern "C" fn qw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Create a state from a named spec: `ghz:n[:d]`, `w:n`, `basis:<bits>`.
#[no_mangle]
pub extern "C" fn qw_state_named(spec: *const c_char, out: *mut *mut QwState) -> QwStatus {
    let spec = match unsafe { read_str(spec) } {
        Ok(s) => s.to_owned(),
        Err(status) => return status,
    };
    guarded(out, || {
        let (rho, shape) = named_state(&spec)?;
        Ok(QwState { rho, shape })
    })
}

/// Load a density matrix from a JSON file
/// (`{"dims": [...], "re": [[...]], "im": [[...]]}`).
#[no_mangle]
pub extern "C" fn qw_state_from_density_file(
    path: *const c_char,
    out: *mut *mut QwState,
) -> QwStatus {
    let path = match unsafe { read_str(path) } {
        Ok(s) => s.to_owned(),
        Err(status) => return status,
    };
    guarded(out, || {
        let (rho, shape) = load_density_matrix(Path::new(&path))?;
        Ok(QwState { rho, shape })
    })
}

#[no_mangle]
pub extern "C" fn qw_state_free(state: *mut QwState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Number of sites, or 0 for a null handle.
#[no_mangle]
pub extern "C" fn qw_state_sites(state: *const QwState) -> u32 {
    unsafe { state.as_ref() }.map_or(0, |s| s.shape.n() as u32)
}

/// Purity `Tr(rho^2)`, or -1 for a null handle.
#[no_mangle]
pub extern "C" fn qw_state_purity(state: *const QwState) -> f64 {
    unsafe { state.as_ref() }.map_or(-1.0, |s| purity(&s.rho))
}

/// Create one of the built-in codes: `five-qubit`, `steane`, `shor`.
#[no_mangle]
pub extern "C" fn qw_code_named(name: *const c_char, out: *mut *mut QwCode) -> QwStatus {
    let name = match unsafe { read_str(name) } {
        Ok(s) => s.to_owned(),
        Err(status) => return status,
    };
    guarded(out, || {
        let group = named_code(&name).ok_or_else(|| {
            qweight::Error::argument(format!("unknown code {name:?}"))
        })?;
        code_from_group(group)
    })
}

/// Parse a stabilizer file (one generator per line, `#` comments).
#[no_mangle]
pub extern "C" fn qw_code_from_file(path: *const c_char, out: *mut *mut QwCode) -> QwStatus {
    let path = match unsafe { read_str(path) } {
        Ok(s) => s.to_owned(),
        Err(status) => return status,
    };
    guarded(out, || {
        let text = std::fs::read_to_string(Path::new(&path))?;
        code_from_group(StabilizerGroup::from_text(&text)?)
    })
}

fn code_from_group(group: StabilizerGroup) -> Result<QwCode, qweight::Error> {
    let space = group.code_projector()?;
    Ok(QwCode {
        group,
        state: QwState {
            rho: space.rho,
            shape: space.shape,
        },
        dim: space.dim as u64,
    })
}

#[no_mangle]
pub extern "C" fn qw_code_free(code: *mut QwCode) {
    if !code.is_null() {
        drop(unsafe { Box::from_raw(code) });
    }
}

/// Number of physical qubits, or 0 for a null handle.
#[no_mangle]
pub extern "C" fn qw_code_sites(code: *const QwCode) -> u32 {
    unsafe { code.as_ref() }.map_or(0, |c| c.group.n() as u32)
}

/// Code space dimension `K`, or 0 for a null handle.
#[no_mangle]
pub extern "C" fn qw_code_dimension(code: *const QwCode) -> u64 {
    unsafe { code.as_ref() }.map_or(0, |c| c.dim)
}

/// New state handle holding the normalized projector `rho_Q = Pi/K`.
#[no_mangle]
pub extern "C" fn qw_code_state(code: *const QwCode, out: *mut *mut QwState) -> QwStatus {
    let code = deref_or!(code);
    guarded(out, || {
        Ok(QwState {
            rho: code.state.rho.clone(),
            shape: code.state.shape.clone(),
        })
    })
}

/// Outcome distribution of the parallelized SWAP test of two states.
#[no_mangle]
pub extern "C" fn qw_swap_test(
    a: *const QwState,
    b: *const QwState,
    engine: QwEngine,
    out: *mut *mut QwDistribution,
) -> QwStatus {
    let a = deref_or!(a);
    let b = deref_or!(b);
    guarded(out, || {
        if a.shape != b.shape {
            return Err(qweight::Error::shape(format!(
                "states have shapes {:?} and {:?}",
                a.shape.local_dims(),
                b.shape.local_dims()
            )));
        }
        let dist = match engine {
            QwEngine::QW_ENGINE_ANALYTIC => analytic_distribution(&a.rho, &b.rho, &a.shape)?,
            QwEngine::QW_ENGINE_CIRCUIT => circuit_distribution(&a.rho, &b.rho, &a.shape)?,
        };
        Ok(QwDistribution { dist })
    })
}

#[no_mangle]
pub extern "C" fn qw_distribution_free(dist: *mut QwDistribution) {
    if !dist.is_null() {
        drop(unsafe { Box::from_raw(dist) });
    }
}

/// Number of ancilla bits, or 0 for a null handle.
#[no_mangle]
pub extern "C" fn qw_distribution_sites(dist: *const QwDistribution) -> u32 {
    unsafe { dist.as_ref() }.map_or(0, |d| d.dist.n() as u32)
}

/// Copy all `2^n` probabilities into `buffer`, indexed by the ancilla
/// bitstring read as a binary number (first ancilla = most significant bit).
/// `capacity` must be at least `2^n`.
#[no_mangle]
pub extern "C" fn qw_distribution_probabilities(
    dist: *const QwDistribution,
    buffer: *mut f64,
    capacity: usize,
) -> QwStatus {
    let dist = deref_or!(dist);
    if buffer.is_null() {
        set_last_error("buffer is null");
        return QW_STATUS_NULL_POINTER;
    }
    let values = dist.dist.p().values();
    if capacity < values.len() {
        set_last_error("buffer holds fewer than 2^n entries");
        return QW_STATUS_BUFFER_TOO_SMALL;
    }
    unsafe { std::ptr::copy_nonoverlapping(values.as_ptr(), buffer, values.len()) };
    QW_STATUS_OK
}

/// Multinomial sample of the distribution; returns a new distribution of
/// empirical frequencies. Deterministic for a fixed seed.
#[no_mangle]
pub extern "C" fn qw_distribution_sample(
    dist: *const QwDistribution,
    shots: u64,
    seed: u64,
    out: *mut *mut QwDistribution,
) -> QwStatus {
    let dist = deref_or!(dist);
    guarded(out, || {
        let record = sample(&dist.dist, shots, seed)?;
        Ok(QwDistribution {
            dist: estimate(&record)?,
        })
    })
}

/// Serialize the distribution to JSON. Free the result with
/// [`qw_string_free`].
#[no_mangle]
pub extern "C" fn qw_distribution_json(
    dist: *const QwDistribution,
    out: *mut *mut c_char,
) -> QwStatus {
    let dist = deref_or!(dist);
    if out.is_null() {
        set_last_error("output pointer is null");
        return QW_STATUS_NULL_POINTER;
    }
    match dist.dist.to_json() {
        Ok(text) => match CString::new(text) {
            Ok(cstr) => {
                unsafe { *out = cstr.into_raw() };
                QW_STATUS_OK
            }
            Err(_) => {
                set_last_error("serialized text contains interior NUL");
                QW_STATUS_NUMERIC_ERROR
            }
        },
        Err(err) => {
            set_last_error(&err.to_string());
            status_of(&err)
        }
    }
}

#[no_mangle]
pub extern "C" fn qw_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

/// All five enumerator families of a state's self SWAP test, with declared
/// code dimension `code_dim` (use 1 for pure states).
#[no_mangle]
pub extern "C" fn qw_enumerators_compute(
    state: *const QwState,
    code_dim: f64,
    out: *mut *mut QwEnumerators,
) -> QwStatus {
    let state = deref_or!(state);
    guarded(out, || {
        Ok(QwEnumerators {
            set: enumerator_set(&state.rho, &state.shape, code_dim)?,
        })
    })
}

#[no_mangle]
pub extern "C" fn qw_enumerators_free(e: *mut QwEnumerators) {
    if !e.is_null() {
        drop(unsafe { Box::from_raw(e) });
    }
}

/// Number of sites, or 0 for a null handle. Each family has `n + 1` entries.
#[no_mangle]
pub extern "C" fn qw_enumerators_sites(e: *const QwEnumerators) -> u32 {
    unsafe { e.as_ref() }.map_or(0, |e| e.set.n as u32)
}

/// Copy one family (indexed by weight `0..=n`) into `buffer`; `capacity`
/// must be at least `n + 1`.
#[no_mangle]
pub extern "C" fn qw_enumerators_family(
    e: *const QwEnumerators,
    family: QwFamily,
    buffer: *mut f64,
    capacity: usize,
) -> QwStatus {
    let e = deref_or!(e);
    if buffer.is_null() {
        set_last_error("buffer is null");
        return QW_STATUS_NULL_POINTER;
    }
    let values = match family {
        QwFamily::QW_FAMILY_A => &e.set.a,
        QwFamily::QW_FAMILY_B => &e.set.b,
        QwFamily::QW_FAMILY_A_PRIME => &e.set.a_prime,
        QwFamily::QW_FAMILY_B_PRIME => &e.set.b_prime,
        QwFamily::QW_FAMILY_SHADOW => &e.set.shadow,
    };
    if capacity < values.len() {
        set_last_error("buffer holds fewer than n + 1 entries");
        return QW_STATUS_BUFFER_TOO_SMALL;
    }
    unsafe { std::ptr::copy_nonoverlapping(values.as_ptr(), buffer, values.len()) };
    QW_STATUS_OK
}

/// Code distance via the residual scan; writes the distance and a purity
/// flag (1 = pure).
#[no_mangle]
pub extern "C" fn qw_code_distance(
    code: *const QwCode,
    tolerance: f64,
    out_delta: *mut u32,
    out_pure: *mut u8,
) -> QwStatus {
    let code = deref_or!(code);
    if out_delta.is_null() || out_pure.is_null() {
        set_last_error("output pointer is null");
        return QW_STATUS_NULL_POINTER;
    }
    match catch_unwind(AssertUnwindSafe(|| {
        analysis::code_distance(
            &code.state.rho,
            code.dim as f64,
            &code.state.shape,
            tolerance,
        )
    })) {
        Ok(Ok(report)) => {
            unsafe {
                *out_delta = report.delta as u32;
                *out_pure = u8::from(report.pure);
            }
            QW_STATUS_OK
        }
        Ok(Err(err)) => {
            set_last_error(&err.to_string());
            status_of(&err)
        }
        Err(_) => {
            set_last_error("internal panic");
            QW_STATUS_NUMERIC_ERROR
        }
    }
}

/// k-uniformity of a pure state.
#[no_mangle]
pub extern "C" fn qw_state_k_uniformity(
    state: *const QwState,
    tolerance: f64,
    out_k: *mut u32,
) -> QwStatus {
    let state = deref_or!(state);
    if out_k.is_null() {
        set_last_error("output pointer is null");
        return QW_STATUS_NULL_POINTER;
    }
    match catch_unwind(AssertUnwindSafe(|| {
        analysis::k_uniformity(&state.rho, &state.shape, tolerance)
    })) {
        Ok(Ok(k)) => {
            unsafe { *out_k = k as u32 };
            QW_STATUS_OK
        }
        Ok(Err(err)) => {
            set_last_error(&err.to_string());
            status_of(&err)
        }
        Err(_) => {
            set_last_error("internal panic");
            QW_STATUS_NUMERIC_ERROR
        }
    }
}
