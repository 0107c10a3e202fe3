//! C ABI over `ppoly`.
//!
//! Objects cross the boundary as opaque handles created by `ppoly_*_new`
//! or builder functions and released with the matching `ppoly_*_free`.
//! Every fallible call returns a [`PpolyStatus`]; on failure the message is
//! available from [`ppoly_last_error`] until the next failing call on the
//! same thread. Strings returned through `char **` are owned by the caller
//! and released with [`ppoly_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ppoly::arith::{BigComplex, PrecisionContext};
use ppoly::cli::{build_family, run_suite, SuiteConfig, FORM_FAMILIES};
use ppoly::forms::{eigenforms_cached, eisenstein_expansion, FourierExpansion};
use ppoly::lfun::{completed_l_derivative, required_truncation};
use ppoly::periodpoly::LaurentPoly;
use ppoly::roots::{unimodularity_report, ExclusionPolicy, Tolerances, Verdict};
use ppoly::Error;

/// Result of an FFI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PpolyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Precision = 3,
    Truncation = 4,
    Numerical = 5,
    Io = 6,
    Panic = 7,
}

/// Verdict of a zero report or suite.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PpolyVerdict {
    Pass = 0,
    Fail = 1,
    Inconclusive = 2,
}

impl From<Verdict> for PpolyVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => PpolyVerdict::Pass,
            Verdict::Fail => PpolyVerdict::Fail,
            Verdict::Inconclusive => PpolyVerdict::Inconclusive,
        }
    }
}

/// Working precision.
pub struct PpolyContext {
    ctx: PrecisionContext,
}

/// A q-expansion.
pub struct PpolyForm {
    form: FourierExpansion,
}

/// A Laurent polynomial with complex coefficients.
pub struct PpolyPoly {
    poly: LaurentPoly,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn status_of(e: &Error) -> PpolyStatus {
    match e {
        Error::PrecisionInfeasible(_) => PpolyStatus::Precision,
        Error::TruncationInsufficient(_) | Error::CoefficientBound(_) => PpolyStatus::Truncation,
        Error::Io(_) | Error::Json(_) => PpolyStatus::Io,
        Error::InvalidArgument(_)
        | Error::Parse(_)
        | Error::UnknownSuite(_)
        | Error::ConfigInvalid(_)
        | Error::Pole(_)
        | Error::DimensionZero(_) => PpolyStatus::InvalidArgument,
        _ => PpolyStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (PpolyStatus, String)>) -> PpolyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PpolyStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            PpolyStatus::Panic
        }
    }
}

trait Lift<T> {
    fn lift(self) -> Result<T, (PpolyStatus, String)>;
}

impl<T> Lift<T> for ppoly::Result<T> {
    fn lift(self) -> Result<T, (PpolyStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (PpolyStatus, String)> {
    p.as_ref().ok_or_else(|| (PpolyStatus::NullPointer, format!("{what} is null")))
}

unsafe fn string_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (PpolyStatus, String)> {
    if p.is_null() {
        return Err((PpolyStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (PpolyStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), (PpolyStatus, String)> {
    if out.is_null() {
        return Err((PpolyStatus::NullPointer, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (PpolyStatus, String)> {
    if out.is_null() {
        return Err((PpolyStatus::NullPointer, "output pointer is null".into()));
    }
    *out = CString::new(s).map_err(|e| (PpolyStatus::Io, e.to_string()))?.into_raw();
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, (PpolyStatus, String)> {
    serde_json::to_string(v).map_err(|e| (PpolyStatus::Io, e.to_string()))
}

/// Message of the last failing call on this thread, or NULL.
/// The pointer stays valid until the next failing call.
#[no_mangle]
pub extern "C" fn ppoly_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ppoly_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a context working at `bits` bits.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ppoly_context_new(bits: u32, out: *mut *mut PpolyContext) -> PpolyStatus {
    guard(|| {
        let ctx = PrecisionContext::new(bits).lift()?;
        put(out, PpolyContext { ctx })
    })
}

/// # Safety
/// `ctx` must come from [`ppoly_context_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ppoly_context_free(ctx: *mut PpolyContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// The `index`-th normalized Hecke eigenform of weight `k`, ordered by `a_2`.
///
/// # Safety
/// `ctx` must be a live context and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ppoly_form_eigen(
    ctx: *const PpolyContext,
    k: u32,
    index: usize,
    out: *mut *mut PpolyForm,
) -> PpolyStatus {
    guard(|| {
        let c = &deref(ctx, "ctx")?.ctx;
        let pkg = eigenforms_cached(k, required_truncation(k, c), c, None).lift()?;
        let form = pkg.forms.get(index).cloned().ok_or_else(|| {
            (PpolyStatus::InvalidArgument, format!("weight {k} has {} eigenforms", pkg.forms.len()))
        })?;
        put(out, PpolyForm { form })
    })
}

/// The Eisenstein series `E_k` with constant term `-B_k/(2k)`.
///
/// # Safety
/// `ctx` must be a live context and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ppoly_form_eisenstein(ctx: *const PpolyContext, k: u32, out: *mut *mut PpolyForm) -> PpolyStatus {
    guard(|| {
        let c = &deref(ctx, "ctx")?.ctx;
        let form = eisenstein_expansion(k, required_truncation(k, c)).lift()?;
        put(out, PpolyForm { form })
    })
}

/// # Safety
/// `form` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ppoly_form_free(form: *mut PpolyForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Weight of a form.
///
/// # Safety
/// `form` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ppoly_form_weight(form: *const PpolyForm) -> u32 {
    form.as_ref().map_or(0, |f| f.form.weight)
}

/// `Lambda_f^{(m)}(s)` for real `s`, rounded to doubles.
///
/// # Safety
/// Handles must be live; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ppoly_lvalue(
    ctx: *const PpolyContext,
    form: *const PpolyForm,
    s: f64,
    m: u32,
    re: *mut f64,
    im: *mut f64,
    err: *mut f64,
) -> PpolyStatus {
    guard(|| {
        let c = &deref(ctx, "ctx")?.ctx;
        let f = &deref(form, "form")?.form;
        if re.is_null() || im.is_null() || err.is_null() {
            return Err((PpolyStatus::NullPointer, "output pointer is null".into()));
        }
        let s = BigComplex::from_f64(s, 0.0, c.bits() + 64);
        let v = completed_l_derivative(f, &s, m, c).lift()?;
        *re = v.value.re.to_f64();
        *im = v.value.im.to_f64();
        *err = v.est_error.to_f64();
        Ok(())
    })
}

/// Builds a polynomial by family name (`r`, `q`, `sigma-ss`, `zagier-tilde`,
/// `brown-closed`, `ramanujan`, `lalin-smyth`, `p-m`, `correction-p`).
/// `form` may be NULL for families that do not need one. `parity` is NULL,
/// `"odd"` or `"even"`.
///
/// # Safety
/// Handles must be live or NULL as described; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ppoly_poly_build(
    ctx: *const PpolyContext,
    family: *const c_char,
    form: *const PpolyForm,
    k: u32,
    m: u32,
    parity: *const c_char,
    out: *mut *mut PpolyPoly,
) -> PpolyStatus {
    guard(|| {
        let c = &deref(ctx, "ctx")?.ctx;
        let family = string_arg(family, "family")?;
        let f = form.as_ref().map(|f| &f.form);
        if f.is_none() && FORM_FAMILIES.contains(&family) {
            return Err((PpolyStatus::NullPointer, format!("family `{family}` needs a form")));
        }
        let parity = if parity.is_null() { None } else { Some(string_arg(parity, "parity")?) };
        let k = f.map_or(k, |f| f.weight);
        let poly = build_family(family, f, k, m, parity, c).lift()?;
        put(out, PpolyPoly { poly })
    })
}

/// # Safety
/// `poly` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ppoly_poly_free(poly: *mut PpolyPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Smallest and largest stored exponents. A zero polynomial gives `0, -1`.
///
/// # Safety
/// `poly` must be live; outputs valid.
#[no_mangle]
pub unsafe extern "C" fn ppoly_poly_exponents(poly: *const PpolyPoly, lo: *mut i64, hi: *mut i64) -> PpolyStatus {
    guard(|| {
        let p = &deref(poly, "poly")?.poly;
        if lo.is_null() || hi.is_null() {
            return Err((PpolyStatus::NullPointer, "output pointer is null".into()));
        }
        match p.max_exp() {
            Some(top) => {
                *lo = p.min_exp();
                *hi = top;
            }
            None => {
                *lo = 0;
                *hi = -1;
            }
        }
        Ok(())
    })
}

/// Coefficient of `z^e` rounded to doubles.
///
/// # Safety
/// `poly` must be live; outputs valid.
#[no_mangle]
pub unsafe extern "C" fn ppoly_poly_coeff(poly: *const PpolyPoly, e: i64, re: *mut f64, im: *mut f64) -> PpolyStatus {
    guard(|| {
        let p = &deref(poly, "poly")?.poly;
        if re.is_null() || im.is_null() {
            return Err((PpolyStatus::NullPointer, "output pointer is null".into()));
        }
        let c = p.coeff(e);
        *re = c.re.to_f64();
        *im = c.im.to_f64();
        Ok(())
    })
}

/// Full-precision JSON of a polynomial.
///
/// # Safety
/// `poly` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ppoly_poly_json(poly: *const PpolyPoly, out: *mut *mut c_char) -> PpolyStatus {
    guard(|| {
        let p = &deref(poly, "poly")?.poly;
        put_string(out, json(p)?)
    })
}

/// Roots of `poly` and their unimodularity verdict. `policy` is `"none"`,
/// `"exclude-reals"` or `"exclude-quadruple-and-zero"`. The report is
/// written as JSON to `out`.
///
/// # Safety
/// Handles must be live; strings NUL-terminated; outputs valid.
#[no_mangle]
pub unsafe extern "C" fn ppoly_zeros(
    ctx: *const PpolyContext,
    poly: *const PpolyPoly,
    policy: *const c_char,
    pass_tol: f64,
    fail_tol: f64,
    verdict: *mut PpolyVerdict,
    out: *mut *mut c_char,
) -> PpolyStatus {
    guard(|| {
        let c = &deref(ctx, "ctx")?.ctx;
        let p = &deref(poly, "poly")?.poly;
        let policy = ExclusionPolicy::parse(string_arg(policy, "policy")?).lift()?;
        if !(pass_tol > 0.0 && pass_tol < fail_tol) {
            return Err((PpolyStatus::InvalidArgument, "need 0 < pass_tol < fail_tol".into()));
        }
        if verdict.is_null() {
            return Err((PpolyStatus::NullPointer, "output pointer is null".into()));
        }
        let tol = Tolerances { pass: pass_tol, fail: fail_tol };
        let z = unimodularity_report(p, policy, &tol, c).lift()?;
        *verdict = z.verdict.into();
        put_string(out, json(&z)?)
    })
}

/// Runs a verification suite with its default grid at `bits` bits
/// (0 keeps the suite default). The report is written as JSON to `out`.
///
/// # Safety
/// `suite` NUL-terminated; outputs valid.
#[no_mangle]
pub unsafe extern "C" fn ppoly_verify(
    suite: *const c_char,
    bits: u32,
    k_max: u32,
    verdict: *mut PpolyVerdict,
    out: *mut *mut c_char,
) -> PpolyStatus {
    guard(|| {
        let name = string_arg(suite, "suite")?;
        if verdict.is_null() {
            return Err((PpolyStatus::NullPointer, "output pointer is null".into()));
        }
        let mut cfg = SuiteConfig::new(name);
        if bits != 0 {
            cfg.precision_bits = bits;
        }
        if k_max != 0 {
            cfg.k_max = k_max;
            cfg.k_min = cfg.k_min.min(k_max);
        }
        let report = run_suite(&cfg).lift()?;
        *verdict = report.verdict.into();
        put_string(out, json(&report)?)
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ppoly_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Numeric value of a status, for bindings without enum support.
#[no_mangle]
pub extern "C" fn ppoly_status_code(s: PpolyStatus) -> c_int {
    s as c_int
}
