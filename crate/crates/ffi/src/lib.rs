//! C ABI for dynforms.
//!
//! Models are opaque handles created by `df_model_new` or
//! `df_model_from_json` and released with `df_model_free`. Every fallible
//! call returns a `DfStatus`; on failure `df_last_error_message` describes
//! the error on the calling thread. Strings returned by the library are
//! owned by the caller and released with `df_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dynforms::complex::{FormModel, Subcomplex};
use dynforms::fourier::{self, FourierSeries, SeriesRecord, SlopeSpec};
use dynforms::models::{instantiate, parse_model_json, ModelSpec};
use dynforms::report::{self, VerifyOptions};
use dynforms::sl2::{self, GroupPoint};
use dynforms::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownModel = 3,
    InvalidModel = 4,
    Parse = 5,
    Domain = 6,
    Resonance = 7,
    Obstruction = 8,
    NotHyperbolic = 9,
    BufferTooSmall = 10,
    Internal = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DfSubcomplex {
    Full = 0,
    Invariant = 1,
    Basic = 2,
}

/// Opaque model handle.
pub struct DfModel {
    inner: FormModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> DfStatus {
    match e {
        Error::UnknownModel(_) => DfStatus::UnknownModel,
        Error::InvalidModel { .. } | Error::ModelInconsistency(_) | Error::FieldMismatch { .. } => {
            DfStatus::InvalidModel
        }
        Error::Parse(_) | Error::Json(_) => DfStatus::Parse,
        Error::Resonance { .. } => DfStatus::Resonance,
        Error::Obstruction { .. } => DfStatus::Obstruction,
        Error::NotHyperbolic { .. } => DfStatus::NotHyperbolic,
        Error::Domain(_) | Error::Degree { .. } | Error::Shape(_) | Error::ZeroDenominator => DfStatus::Domain,
        Error::Io(_) => DfStatus::Internal,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), DfStatus>) -> DfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DfStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            DfStatus::Internal
        }
    }
}

fn fail(e: Error) -> DfStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> DfStatus {
    set_error(format!("{what} is null"));
    DfStatus::NullPointer
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, DfStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not UTF-8"));
        DfStatus::InvalidUtf8
    })
}

unsafe fn model_ref<'a>(m: *const DfModel) -> Result<&'a FormModel, DfStatus> {
    m.as_ref().map(|m| &m.inner).ok_or_else(|| null("model"))
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> &'a [T] {
    if len == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(p, len)
    }
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn df_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Built-in model by name. `n <= 0` selects the family default; `genus`
/// applies to the sl2 models.
///
/// # Safety
/// `name` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn df_model_new(name: *const c_char, n: i32, genus: u32, out: *mut *mut DfModel) -> DfStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let n = (n > 0).then_some(n as usize);
        let spec = ModelSpec::parse(name, n).map_err(fail)?.with_genus(genus);
        let inner = instantiate(&spec).map_err(fail)?;
        *out = Box::into_raw(Box::new(DfModel { inner }));
        Ok(())
    })
}

/// Model from the JSON model-file format.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn df_model_from_json(json: *const c_char, out: *mut *mut DfModel) -> DfStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = parse_model_json(text, "custom").map_err(fail)?;
        *out = Box::into_raw(Box::new(DfModel { inner }));
        Ok(())
    })
}

/// # Safety
/// `model` must come from `df_model_new`/`df_model_from_json` or be null.
#[no_mangle]
pub unsafe extern "C" fn df_model_free(model: *mut DfModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of degree-one generators, or 0 for a null handle.
///
/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn df_model_generator_count(model: *const DfModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.n())
}

/// Writes `dim H^k` for `k = 0..=n` of the chosen subcomplex into `out`
/// (capacity `len`) and the count into `written`.
///
/// # Safety
/// `model` must be a live handle; `out` must hold `len` elements;
/// `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn df_model_cohomology_dims(
    model: *const DfModel,
    which: DfSubcomplex,
    out: *mut usize,
    len: usize,
    written: *mut usize,
) -> DfStatus {
    guard(|| {
        let m = model_ref(model)?;
        if out.is_null() || written.is_null() {
            return Err(null("output buffer"));
        }
        let which = match which {
            DfSubcomplex::Full => Subcomplex::Full,
            DfSubcomplex::Invariant => Subcomplex::Invariant,
            DfSubcomplex::Basic => Subcomplex::Basic,
        };
        let dims = m.dims(which).map_err(fail)?;
        *written = dims.len();
        if dims.len() > len {
            set_error(format!("need {} entries, have {len}", dims.len()));
            return Err(DfStatus::BufferTooSmall);
        }
        std::slice::from_raw_parts_mut(out, dims.len()).copy_from_slice(&dims);
        Ok(())
    })
}

/// Full JSON report for the model; `passed` receives the overall verdict.
///
/// # Safety
/// `model` must be a live handle; `out` and `passed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn df_model_report_json(model: *const DfModel, out: *mut *mut c_char, passed: *mut bool) -> DfStatus {
    guard(|| {
        let m = model_ref(model)?;
        if out.is_null() || passed.is_null() {
            return Err(null("out"));
        }
        let r = report::model_report(m, None).map_err(fail)?;
        *passed = r.pass;
        *out = to_c_string(r.to_json());
        Ok(())
    })
}

/// Runs the full suite with the given seed.
///
/// # Safety
/// `passed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn df_verify_all(seed: u64, passed: *mut bool) -> DfStatus {
    guard(|| {
        if passed.is_null() {
            return Err(null("passed"));
        }
        let mut opts = VerifyOptions::default();
        opts.numeric.seed = seed;
        *passed = report::verify_all(&opts).map_err(fail)?.pass;
        Ok(())
    })
}

/// Solves `(∂x + α∂y) f = g` for `len` coefficients `g_{m[j], n[j]}`;
/// writes `f` at the same frequencies and the residual.
///
/// # Safety
/// All arrays must hold `len` elements; `alpha` must be a valid C string;
/// `residual` must be valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn df_solve_torus(
    alpha: *const c_char,
    m: *const i64,
    n: *const i64,
    re: *const f64,
    im: *const f64,
    len: usize,
    subtract_mean: bool,
    out_re: *mut f64,
    out_im: *mut f64,
    residual: *mut f64,
) -> DfStatus {
    guard(|| {
        let slope = SlopeSpec::parse(read_str(alpha, "alpha")?).map_err(fail)?;
        if len > 0 && [m.is_null(), n.is_null(), re.is_null(), im.is_null(), out_re.is_null(), out_im.is_null()].contains(&true)
        {
            return Err(null("coefficient array"));
        }
        if residual.is_null() {
            return Err(null("residual"));
        }
        let (ms, ns, res, ims) = (slice(m, len), slice(n, len), slice(re, len), slice(im, len));
        let records: Vec<SeriesRecord> = (0..len)
            .map(|j| SeriesRecord {
                m: ms[j],
                n: ns[j],
                re: res[j],
                im: ims[j],
            })
            .collect();
        let g = FourierSeries::from_records(&records).map_err(fail)?;
        let (f, diag) = fourier::solve_cohomological(&slope, &g, subtract_mean).map_err(fail)?;
        for j in 0..len {
            let c = f.get(ms[j], ns[j]);
            *out_re.add(j) = c.re;
            *out_im.add(j) = c.im;
        }
        *residual = diag.residual;
        Ok(())
    })
}

/// Translation length of the hyperbolic element `[[a, b], [c, d]]` and the
/// integral of `ω0` along its closed geodesic.
///
/// # Safety
/// `length` and `integral` must be valid.
#[no_mangle]
pub unsafe extern "C" fn df_closed_geodesic_period(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    length: *mut f64,
    integral: *mut f64,
) -> DfStatus {
    guard(|| {
        if length.is_null() || integral.is_null() {
            return Err(null("output"));
        }
        let h = GroupPoint::new([[a, b], [c, d]]).map_err(fail)?;
        let r = sl2::closed_geodesic_period(&h).map_err(fail)?;
        *length = r.length;
        *integral = r.integral;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn df_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
