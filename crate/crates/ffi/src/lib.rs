//! C interface to `maxspec`.
//!
//! Every fallible function returns a [`MaxspecStatus`]; on failure the message
//! is available from [`maxspec_last_error`] on the same thread. Spectra and ψ
//! tables are opaque handles released with their `_free` functions. Functions
//! taking a `psi` handle accept NULL for the builtin table.

use maxspec::cli::parse_dist;
use maxspec::gls::GlsFit;
use maxspec::inference::{asymptotic_ci, CiMethod, ConfidenceReport};
use maxspec::psi::Provenance;
use maxspec::{
    builtin_psi, compute_spectrum, gls_fit, hill_estimate, hill_plot, permutation_bootstrap, select_j1, tail_estimate,
    Error, MaxSpectrum, PsiTable, SeededStream,
};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxspecStatus {
    Ok = 0,
    NullPointer = 1,
    Parameter = 2,
    Input = 3,
    Parse = 4,
    Scale = 5,
    Range = 6,
    Validity = 7,
    DegenerateData = 8,
    Numeric = 9,
    UnsupportedModel = 10,
    InfiniteMoment = 11,
    NonPositiveSlope = 12,
    InsufficientScales = 13,
    Domain = 14,
    Io = 15,
    BufferTooSmall = 16,
    Panic = 17,
}

impl From<&Error> for MaxspecStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parameter(_) => MaxspecStatus::Parameter,
            Error::Input(_) => MaxspecStatus::Input,
            Error::Parse { .. } => MaxspecStatus::Parse,
            Error::Scale { .. } => MaxspecStatus::Scale,
            Error::Range(_) => MaxspecStatus::Range,
            Error::Validity { .. } => MaxspecStatus::Validity,
            Error::DegenerateData(_) => MaxspecStatus::DegenerateData,
            Error::Numeric(_) => MaxspecStatus::Numeric,
            Error::UnsupportedModel(_) => MaxspecStatus::UnsupportedModel,
            Error::InfiniteMoment { .. } => MaxspecStatus::InfiniteMoment,
            Error::NonPositiveSlope { .. } => MaxspecStatus::NonPositiveSlope,
            Error::InsufficientScales { .. } => MaxspecStatus::InsufficientScales,
            Error::Domain(_) => MaxspecStatus::Domain,
            Error::Io(_) => MaxspecStatus::Io,
        }
    }
}

/// Opaque max-spectrum.
pub struct MaxspecSpectrum(MaxSpectrum);

/// Opaque ψ table.
pub struct MaxspecPsiTable(PsiTable);

/// GLS fit summary. `alpha` and `sigma0` are NaN when `h <= 0`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxspecFit {
    pub j1: usize,
    pub j2: usize,
    pub h: f64,
    pub c: f64,
    pub cw: f64,
    pub se_h: f64,
    pub n_top: usize,
    pub alpha: f64,
    pub sigma0: f64,
}

/// Confidence interval for H and its inversion for α. When `alpha_defined`
/// is false the whole H interval is non-positive; when `alpha_unbounded` is
/// true `alpha_high` is +infinity.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxspecInterval {
    pub level: f64,
    pub h_hat: f64,
    pub h_low: f64,
    pub h_high: f64,
    pub alpha_defined: bool,
    pub alpha_unbounded: bool,
    pub alpha_low: f64,
    pub alpha_high: f64,
    /// Bootstrap replicates dropped for undefined spectra (0 for asymptotic).
    pub dropped: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, mapping errors and panics to a status and recording the message.
fn guard(f: impl FnOnce() -> Result<(), MaxspecFailure>) -> MaxspecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MaxspecStatus::Ok,
        Ok(Err(MaxspecFailure::Core(e))) => {
            set_last_error(e.to_string());
            MaxspecStatus::from(&e)
        }
        Ok(Err(MaxspecFailure::Status(s, msg))) => {
            set_last_error(msg);
            s
        }
        Err(_) => {
            set_last_error("internal panic".into());
            MaxspecStatus::Panic
        }
    }
}

enum MaxspecFailure {
    Core(Error),
    Status(MaxspecStatus, String),
}

impl From<Error> for MaxspecFailure {
    fn from(e: Error) -> Self {
        MaxspecFailure::Core(e)
    }
}

fn null(what: &str) -> MaxspecFailure {
    MaxspecFailure::Status(MaxspecStatus::NullPointer, format!("{what} is NULL"))
}

/// Borrows `len` doubles; a NULL pointer is accepted only for `len == 0`.
unsafe fn slice<'a>(data: *const f64, len: usize) -> Result<&'a [f64], MaxspecFailure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null("data"));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn psi_or_builtin(psi: *const MaxspecPsiTable) -> PsiTable {
    match psi.as_ref() {
        Some(p) => p.0.clone(),
        None => builtin_psi(),
    }
}

fn fit_out(fit: &GlsFit) -> MaxspecFit {
    let (alpha, sigma0) = match tail_estimate(fit) {
        Ok(t) => (t.alpha, t.sigma0),
        Err(_) => (f64::NAN, f64::NAN),
    };
    MaxspecFit {
        j1: fit.j1,
        j2: fit.j2,
        h: fit.h,
        c: fit.c,
        cw: fit.cw,
        se_h: fit.se_h,
        n_top: fit.n_top,
        alpha,
        sigma0,
    }
}

fn interval_out(r: &ConfidenceReport) -> MaxspecInterval {
    let dropped = match r.method {
        CiMethod::Permutation { dropped, .. } => dropped,
        CiMethod::Asymptotic => 0,
    };
    let (alpha_defined, alpha_unbounded, alpha_low, alpha_high) = match r.alpha_interval {
        Some(a) => (true, a.unbounded, a.low, a.high),
        None => (false, false, f64::NAN, f64::NAN),
    };
    MaxspecInterval {
        level: r.level,
        h_hat: r.h_hat,
        h_low: r.h_interval.0,
        h_high: r.h_interval.1,
        alpha_defined,
        alpha_unbounded,
        alpha_low,
        alpha_high,
        dropped,
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn maxspec_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn maxspec_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `data` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn maxspec_spectrum_compute(
    data: *const f64,
    n: usize,
    out: *mut *mut MaxspecSpectrum,
) -> MaxspecStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = compute_spectrum(slice(data, n)?)?;
        *out = Box::into_raw(Box::new(MaxspecSpectrum(spec)));
        Ok(())
    })
}

/// # Safety
/// `spec` must come from `maxspec_spectrum_compute` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn maxspec_spectrum_free(spec: *mut MaxspecSpectrum) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Largest scale `jMax`, or 0 for NULL.
///
/// # Safety
/// `spec` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxspec_spectrum_j_max(spec: *const MaxspecSpectrum) -> usize {
    spec.as_ref().map_or(0, |s| s.0.j_max)
}

/// Smallest scale with a defined `Y_j`, or 0 for NULL.
///
/// # Safety
/// `spec` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maxspec_spectrum_j_min_valid(spec: *const MaxspecSpectrum) -> usize {
    spec.as_ref().map_or(0, |s| s.0.j_min_valid)
}

/// `Y_j` and the block count `N_j` at scale `j`.
///
/// # Safety
/// `spec` must be a live handle; `y` and `nj` must be writable (either may be NULL).
#[no_mangle]
pub unsafe extern "C" fn maxspec_spectrum_scale(
    spec: *const MaxspecSpectrum,
    j: usize,
    y: *mut f64,
    nj: *mut usize,
) -> MaxspecStatus {
    guard(|| {
        let s = &spec.as_ref().ok_or_else(|| null("spec"))?.0;
        if j == 0 || j > s.j_max {
            return Err(Error::Scale { j, max: s.j_max }.into());
        }
        if !nj.is_null() {
            *nj = s.n_j(j);
        }
        let v = s.y(j).ok_or(Error::Validity { j, j_min_valid: s.j_min_valid })?;
        if !y.is_null() {
            *y = v;
        }
        Ok(())
    })
}

/// The builtin ψ table.
#[no_mangle]
pub extern "C" fn maxspec_psi_builtin() -> *mut MaxspecPsiTable {
    Box::into_raw(Box::new(MaxspecPsiTable(builtin_psi())))
}

/// A ψ table from `values[0..len]` (lags 0, 1, …), validated.
///
/// # Safety
/// `values` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn maxspec_psi_from_values(
    values: *const f64,
    len: usize,
    out: *mut *mut MaxspecPsiTable,
) -> MaxspecStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let table = PsiTable::new(slice(values, len)?.to_vec(), Provenance::External)?;
        *out = Box::into_raw(Box::new(MaxspecPsiTable(table)));
        Ok(())
    })
}

/// # Safety
/// `psi` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn maxspec_psi_free(psi: *mut MaxspecPsiTable) {
    if !psi.is_null() {
        drop(Box::from_raw(psi));
    }
}

/// GLS fit on scales `j1..=j2`.
///
/// # Safety
/// `spec` must be a live handle, `psi` NULL or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn maxspec_gls_fit(
    spec: *const MaxspecSpectrum,
    j1: usize,
    j2: usize,
    psi: *const MaxspecPsiTable,
    out: *mut MaxspecFit,
) -> MaxspecStatus {
    guard(|| {
        let s = &spec.as_ref().ok_or_else(|| null("spec"))?.0;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = fit_out(&gls_fit(s, j1, j2, &psi_or_builtin(psi))?);
        Ok(())
    })
}

/// Automatic `j1` selection up to `jMax`; `out` receives the final fit.
///
/// # Safety
/// `spec` must be a live handle, `psi` NULL or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn maxspec_select_j1(
    spec: *const MaxspecSpectrum,
    p: f64,
    b: usize,
    psi: *const MaxspecPsiTable,
    out: *mut MaxspecFit,
) -> MaxspecStatus {
    guard(|| {
        let s = &spec.as_ref().ok_or_else(|| null("spec"))?.0;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = fit_out(&select_j1(s, p, b, &psi_or_builtin(psi))?.final_fit);
        Ok(())
    })
}

/// Asymptotic interval from a fit produced by this library.
///
/// # Safety
/// `fit` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn maxspec_asymptotic_ci(
    fit: *const MaxspecFit,
    level: f64,
    out: *mut MaxspecInterval,
) -> MaxspecStatus {
    guard(|| {
        let f = fit.as_ref().ok_or_else(|| null("fit"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let core = GlsFit {
            j1: f.j1,
            j2: f.j2,
            h: f.h,
            c: f.c,
            w: Vec::new(),
            v: Vec::new(),
            cw: f.cw,
            se_h: f.se_h,
            n_top: f.n_top,
        };
        *out = interval_out(&asymptotic_ci(&core, level)?);
        Ok(())
    })
}

/// Permutation-bootstrap interval on scales `j1..=j2` with `replicates`
/// permutations drawn from stream `(seed, stream)`.
///
/// # Safety
/// `data` must point to `n` doubles, `psi` NULL or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn maxspec_bootstrap(
    data: *const f64,
    n: usize,
    j1: usize,
    j2: usize,
    replicates: usize,
    level: f64,
    seed: u64,
    stream: u64,
    psi: *const MaxspecPsiTable,
    out: *mut MaxspecInterval,
) -> MaxspecStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let r = permutation_bootstrap(
            slice(data, n)?,
            j1,
            j2,
            replicates,
            level,
            SeededStream::new(seed, stream),
            &psi_or_builtin(psi),
        )?;
        *out = interval_out(&r);
        Ok(())
    })
}

/// Hill estimate from the top `k` order statistics.
///
/// # Safety
/// `data` must point to `n` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn maxspec_hill_estimate(data: *const f64, n: usize, k: usize, out: *mut f64) -> MaxspecStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = hill_estimate(slice(data, n)?, k)?;
        Ok(())
    })
}

/// Hill plot: `alpha[k-1]` receives the estimate at `k = 1, 2, …`. `len`
/// receives the number of points; when it exceeds `capacity` nothing is
/// written and the status is `BUFFER_TOO_SMALL`.
///
/// # Safety
/// `data` must point to `n` doubles, `alpha` to `capacity` writable doubles,
/// `len` writable.
#[no_mangle]
pub unsafe extern "C" fn maxspec_hill_plot(
    data: *const f64,
    n: usize,
    alpha: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> MaxspecStatus {
    guard(|| {
        let len = len.as_mut().ok_or_else(|| null("len"))?;
        let plot = hill_plot(slice(data, n)?)?;
        *len = plot.len();
        if plot.len() > capacity {
            return Err(MaxspecFailure::Status(
                MaxspecStatus::BufferTooSmall,
                format!("hill plot has {} points, buffer holds {capacity}", plot.len()),
            ));
        }
        if alpha.is_null() {
            return Err(null("alpha"));
        }
        let dst = std::slice::from_raw_parts_mut(alpha, plot.len());
        for (d, (_, a)) in dst.iter_mut().zip(&plot) {
            *d = *a;
        }
        Ok(())
    })
}

/// Draws `n` values from the model described by `dist`
/// (`name:key=value,…`, e.g. `"frechet:alpha=1.5"`) into `out`.
///
/// # Safety
/// `dist` must be a NUL-terminated string and `out` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn maxspec_sample(
    dist: *const c_char,
    n: usize,
    seed: u64,
    stream: u64,
    out: *mut f64,
) -> MaxspecStatus {
    guard(|| {
        if dist.is_null() {
            return Err(null("dist"));
        }
        let text =
            CStr::from_ptr(dist).to_str().map_err(|_| Error::Parameter("distribution string is not UTF-8".into()))?;
        let spec = parse_dist(text)?;
        let values = spec.sample(n, SeededStream::new(seed, stream))?;
        if n > 0 {
            if out.is_null() {
                return Err(null("out"));
            }
            std::slice::from_raw_parts_mut(out, n).copy_from_slice(&values);
        }
        Ok(())
    })
}
