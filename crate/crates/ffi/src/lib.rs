//! C ABI over the composition-operator laboratory: opaque handles, status
//! codes, and a generated header (`include/opnum_lab.h`).
//!
//! Conventions: every fallible call returns an [`OpnumStatus`]; outputs go
//! through out-pointers; handles are freed with their `_free` function;
//! strings returned by the library are freed with [`opnum_string_free`].
//! The most recent error message per thread is available from
//! [`opnum_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use opnum_lab::bidisk;
use opnum_lab::capacity;
use opnum_lab::error::Error;
use opnum_lab::hardy1d::{
    self, build_matrix, singular_values, BasisKind, BuildOptions, QuadOptions, SingularSpectrum,
};
use opnum_lab::rates::{self, DecayFamily};
use opnum_lab::symbols::{self, Role, SymbolSpec};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpnumStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidJson = 3,
    OutsideDomain = 4,
    BranchCut = 5,
    Divergent = 6,
    Unbounded = 7,
    DecompositionFailed = 8,
    InsufficientData = 9,
    InternalError = 10,
}

/// Decay-law families for `opnum_fit_decay`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpnumDecayFamily {
    Exponential = 0,
    SqrtExponential = 1,
    CubeRootExponential = 2,
    SqrtOverLog = 3,
    LinearOverLog = 4,
}

impl From<OpnumDecayFamily> for DecayFamily {
    fn from(f: OpnumDecayFamily) -> DecayFamily {
        match f {
            OpnumDecayFamily::Exponential => DecayFamily::Exponential,
            OpnumDecayFamily::SqrtExponential => DecayFamily::SqrtExponential,
            OpnumDecayFamily::CubeRootExponential => DecayFamily::CubeRootExponential,
            OpnumDecayFamily::SqrtOverLog => DecayFamily::SqrtOverLog,
            OpnumDecayFamily::LinearOverLog => DecayFamily::LinearOverLog,
        }
    }
}

/// Opaque handle to an analytic self-map / weight description.
pub struct OpnumSymbol(SymbolSpec);

/// Opaque handle to a computed singular value spectrum.
pub struct OpnumSpectrum(SingularSpectrum);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> OpnumStatus {
    match err {
        Error::OutsideDisk { .. } => OpnumStatus::OutsideDomain,
        Error::BranchCut { .. } => OpnumStatus::BranchCut,
        Error::QuadratureDivergent { .. } => OpnumStatus::Divergent,
        Error::UnboundedEvidence { .. } => OpnumStatus::Unbounded,
        Error::Decomposition => OpnumStatus::DecompositionFailed,
        Error::InsufficientData { .. } | Error::NotDecaying => OpnumStatus::InsufficientData,
        Error::Json(_) => OpnumStatus::InvalidJson,
        _ => OpnumStatus::InvalidArgument,
    }
}

fn fail(err: &Error) -> OpnumStatus {
    set_error(&err.to_string());
    status_of(err)
}

/// Run a closure, translating panics into `InternalError`.
fn guarded<F: FnOnce() -> OpnumStatus>(f: F) -> OpnumStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            OpnumStatus::InternalError
        }
    }
}

/// Message for the most recent error on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn opnum_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parse a symbol from its JSON expression tree.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn opnum_symbol_parse_json(
    json: *const c_char,
    out: *mut *mut OpnumSymbol,
) -> OpnumStatus {
    if json.is_null() || out.is_null() {
        set_error("null pointer");
        return OpnumStatus::NullPointer;
    }
    guarded(|| {
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("json argument is not valid UTF-8");
                return OpnumStatus::InvalidJson;
            }
        };
        match serde_json::from_str::<SymbolSpec>(text) {
            Ok(spec) => {
                if let Err(e) = spec.validate(Role::Weight) {
                    return fail(&e);
                }
                *out = Box::into_raw(Box::new(OpnumSymbol(spec)));
                OpnumStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                OpnumStatus::InvalidJson
            }
        }
    })
}

/// Serialize a symbol back to JSON. Returns NULL on error; free the result
/// with `opnum_string_free`.
///
/// # Safety
/// `symbol` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn opnum_symbol_to_json(symbol: *const OpnumSymbol) -> *mut c_char {
    if symbol.is_null() {
        set_error("null pointer");
        return std::ptr::null_mut();
    }
    match serde_json::to_string(&(*symbol).0) {
        Ok(json) => CString::new(json)
            .map(CString::into_raw)
            .unwrap_or_else(|_| {
                set_error("serialized JSON contained a NUL byte");
                std::ptr::null_mut()
            }),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Free a string returned by this library.
///
/// # Safety
/// `text` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn opnum_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Free a symbol handle.
///
/// # Safety
/// `symbol` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn opnum_symbol_free(symbol: *mut OpnumSymbol) {
    if !symbol.is_null() {
        drop(Box::from_raw(symbol));
    }
}

/// Evaluate the symbol at `z = re + i im`, `|z| <= 1`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn opnum_symbol_eval(
    symbol: *const OpnumSymbol,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> OpnumStatus {
    if symbol.is_null() || out_re.is_null() || out_im.is_null() {
        set_error("null pointer");
        return OpnumStatus::NullPointer;
    }
    guarded(|| match (*symbol).0.eval(Complex64::new(re, im)) {
        Ok(v) => {
            *out_re = v.re;
            *out_im = v.im;
            OpnumStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// Pseudo-hyperbolic distance between two points of the open disk.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn opnum_pseudo_hyperbolic(
    a_re: f64,
    a_im: f64,
    b_re: f64,
    b_im: f64,
    out: *mut f64,
) -> OpnumStatus {
    if out.is_null() {
        set_error("null pointer");
        return OpnumStatus::NullPointer;
    }
    match symbols::pseudo_hyperbolic(Complex64::new(a_re, a_im), Complex64::new(b_re, b_im)) {
        Ok(v) => {
            *out = v;
            OpnumStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Green capacity of the centered disk of radius `r` in the unit disk.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn opnum_green_capacity_disk(r: f64, out: *mut f64) -> OpnumStatus {
    if out.is_null() {
        set_error("null pointer");
        return OpnumStatus::NullPointer;
    }
    match capacity::green_capacity_disk(r) {
        Ok(v) => {
            *out = v;
            OpnumStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Monge-Ampere capacity parameters of a centered polydisk: `tau_m` and
/// `Gamma_m`.
///
/// # Safety
/// `radii` must point to `len` doubles; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn opnum_polydisk_capacity(
    radii: *const f64,
    len: usize,
    out_tau: *mut f64,
    out_gamma: *mut f64,
) -> OpnumStatus {
    if radii.is_null() || out_tau.is_null() || out_gamma.is_null() {
        set_error("null pointer");
        return OpnumStatus::NullPointer;
    }
    let slice = std::slice::from_raw_parts(radii, len);
    match capacity::tau_polydisk(slice) {
        Ok(v) => {
            *out_tau = v.tau;
            *out_gamma = v.gamma;
            OpnumStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Norm of the bidisk reproducing kernel at `(a, b)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn opnum_kernel_norm(
    a_re: f64,
    a_im: f64,
    b_re: f64,
    b_im: f64,
    out: *mut f64,
) -> OpnumStatus {
    if out.is_null() {
        set_error("null pointer");
        return OpnumStatus::NullPointer;
    }
    match bidisk::kernel_norm(Complex64::new(a_re, a_im), Complex64::new(b_re, b_im)) {
        Ok(v) => {
            *out = v;
            OpnumStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Singular values of the truncated (weighted) composition operator.
/// `weight` may be NULL for the unweighted operator; `bergman_domain`
/// selects the Bergman-to-Hardy normalization.
///
/// # Safety
/// Handles must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn opnum_spectrum_compute(
    phi: *const OpnumSymbol,
    weight: *const OpnumSymbol,
    truncation: usize,
    n_keep: usize,
    bergman_domain: bool,
    out: *mut *mut OpnumSpectrum,
) -> OpnumStatus {
    if phi.is_null() || out.is_null() {
        set_error("null pointer");
        return OpnumStatus::NullPointer;
    }
    guarded(|| {
        let domain = if bergman_domain {
            BasisKind::Bergman
        } else {
            BasisKind::Hardy
        };
        let weight_spec = if weight.is_null() {
            None
        } else {
            Some(&(*weight).0)
        };
        let matrix = match build_matrix(
            weight_spec,
            &(*phi).0,
            truncation,
            domain,
            &BuildOptions::default(),
        ) {
            Ok(m) => m,
            Err(e) => return fail(&e),
        };
        match singular_values(&matrix, n_keep.min(truncation)) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(OpnumSpectrum(s)));
                OpnumStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Number of singular values held by the spectrum.
///
/// # Safety
/// `spectrum` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn opnum_spectrum_len(spectrum: *const OpnumSpectrum) -> usize {
    if spectrum.is_null() {
        return 0;
    }
    (*spectrum).0.values.len()
}

/// Copy the singular values into `buffer` (at most `len` of them); returns
/// the count written through `written`.
///
/// # Safety
/// `buffer` must point to at least `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn opnum_spectrum_values(
    spectrum: *const OpnumSpectrum,
    buffer: *mut f64,
    len: usize,
    written: *mut usize,
) -> OpnumStatus {
    if spectrum.is_null() || buffer.is_null() || written.is_null() {
        set_error("null pointer");
        return OpnumStatus::NullPointer;
    }
    let values = &(*spectrum).0.values;
    let count = values.len().min(len);
    std::ptr::copy_nonoverlapping(values.as_ptr(), buffer, count);
    *written = count;
    OpnumStatus::Ok
}

/// 1 if the indexed value is stabilized under truncation doubling, 0 if
/// not, -1 on an invalid handle or index.
///
/// # Safety
/// `spectrum` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn opnum_spectrum_is_stabilized(
    spectrum: *const OpnumSpectrum,
    index: usize,
) -> i32 {
    if spectrum.is_null() || index >= (*spectrum).0.values.len() {
        return -1;
    }
    (*spectrum).0.stabilized(index) as i32
}

/// The recorded matrix perturbation budget of the spectrum.
///
/// # Safety
/// `spectrum` must be a live handle; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn opnum_spectrum_tail_budget(
    spectrum: *const OpnumSpectrum,
    out: *mut f64,
) -> OpnumStatus {
    if spectrum.is_null() || out.is_null() {
        set_error("null pointer");
        return OpnumStatus::NullPointer;
    }
    *out = (*spectrum).0.tail_budget;
    OpnumStatus::Ok
}

/// Free a spectrum handle.
///
/// # Safety
/// `spectrum` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn opnum_spectrum_free(spectrum: *mut OpnumSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Least-squares decay fit of the spectrum against the chosen family.
///
/// # Safety
/// `spectrum` must be a live handle; out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn opnum_fit_decay(
    spectrum: *const OpnumSpectrum,
    family: OpnumDecayFamily,
    out_beta: *mut f64,
    out_amplitude: *mut f64,
    out_r2: *mut f64,
) -> OpnumStatus {
    if spectrum.is_null() || out_beta.is_null() || out_amplitude.is_null() || out_r2.is_null() {
        set_error("null pointer");
        return OpnumStatus::NullPointer;
    }
    guarded(|| match rates::fit_decay(&(*spectrum).0, family.into()) {
        Ok(fit) => {
            *out_beta = fit.beta;
            *out_amplitude = fit.amplitude;
            *out_r2 = fit.r2;
            OpnumStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// Hilbert-Schmidt norm of the (weighted) composition operator by boundary
/// quadrature. `weight` may be NULL. Divergence comes back as
/// `OpnumStatus::Divergent`.
///
/// # Safety
/// Handles must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn opnum_hs_norm(
    phi: *const OpnumSymbol,
    weight: *const OpnumSymbol,
    out: *mut f64,
) -> OpnumStatus {
    if phi.is_null() || out.is_null() {
        set_error("null pointer");
        return OpnumStatus::NullPointer;
    }
    guarded(|| {
        let weight_spec = if weight.is_null() {
            None
        } else {
            Some(&(*weight).0)
        };
        match hardy1d::hs_norm(weight_spec, &(*phi).0, &QuadOptions::default()) {
            Ok(v) => {
                *out = v;
                OpnumStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}
