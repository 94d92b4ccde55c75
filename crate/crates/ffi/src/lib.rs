//! C bindings for the `secant` library.
//!
//! Configurations and scan results are opaque handles owned by the caller
//! and released with the matching `_free` function. Every fallible call
//! returns a [`SecantStatus`]; on failure a description is available from
//! [`secant_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use secant::rank::{BackendMode, RankBackendConfig};
use secant::scan::{self, CellStatus, ScanPlan, ScanRecord};
use secant::{combin, veronese, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecantStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidConfig = 2,
    OutOfRange = 3,
    Shape = 4,
    DegenerateSample = 5,
    NonFinite = 6,
    RegistryContradiction = 7,
    Parse = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecantBackend {
    Exact = 0,
    Float = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecantCellStatus {
    CertifiedNondefective = 0,
    ProbableNondefective = 1,
    CandidateDefective = 2,
    OracleConfirmedDefective = 3,
}

/// One classified cell. `prime` is 0 for the float backend.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SecantRecord {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub ambient: usize,
    pub saturation: usize,
    pub expected_dim: usize,
    pub computed_dim: usize,
    pub defect: usize,
    pub status: SecantCellStatus,
    pub backend: SecantBackend,
    pub prime: u32,
    pub seed: u64,
    pub trials: usize,
}

/// Rank backend settings.
pub struct SecantConfig {
    inner: RankBackendConfig,
}

/// Records produced by [`secant_scan_range`].
pub struct SecantScan {
    records: Vec<ScanRecord>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SecantStatus {
    match e {
        Error::InvalidConfig(_) | Error::Empty(_) => SecantStatus::InvalidConfig,
        Error::Index(_) => SecantStatus::OutOfRange,
        Error::Shape(_) => SecantStatus::Shape,
        Error::DegenerateSample(_) => SecantStatus::DegenerateSample,
        Error::NonFinite { .. } => SecantStatus::NonFinite,
        Error::RegistryContradiction { .. } => SecantStatus::RegistryContradiction,
        Error::Parse(_) => SecantStatus::Parse,
        Error::Io(_) => SecantStatus::Io,
    }
}

fn guard<F: FnOnce() -> Result<(), SecantStatus>>(f: F) -> SecantStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SecantStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            SecantStatus::Panic
        }
    }
}

fn lift<T>(r: secant::Result<T>) -> Result<T, SecantStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn config_ref<'a>(cfg: *const SecantConfig) -> Result<&'a RankBackendConfig, SecantStatus> {
    match cfg.as_ref() {
        Some(c) => Ok(&c.inner),
        None => {
            set_error("null config".into());
            Err(SecantStatus::NullPointer)
        }
    }
}

unsafe fn config_mut<'a>(cfg: *mut SecantConfig) -> Result<&'a mut RankBackendConfig, SecantStatus> {
    match cfg.as_mut() {
        Some(c) => Ok(&mut c.inner),
        None => {
            set_error("null config".into());
            Err(SecantStatus::NullPointer)
        }
    }
}

fn to_c(r: &ScanRecord) -> SecantRecord {
    SecantRecord {
        n: r.n,
        k: r.k,
        s: r.s,
        ambient: r.ambient,
        saturation: r.saturation,
        expected_dim: r.expected_dim,
        computed_dim: r.computed_dim,
        defect: r.defect,
        status: match r.status {
            CellStatus::CertifiedNondefective => SecantCellStatus::CertifiedNondefective,
            CellStatus::ProbableNondefective => SecantCellStatus::ProbableNondefective,
            CellStatus::CandidateDefective => SecantCellStatus::CandidateDefective,
            CellStatus::OracleConfirmedDefective => SecantCellStatus::OracleConfirmedDefective,
        },
        backend: match r.backend {
            BackendMode::ExactPrime => SecantBackend::Exact,
            BackendMode::FloatSvd => SecantBackend::Float,
        },
        prime: r.prime.unwrap_or(0),
        seed: r.seed,
        trials: r.trials,
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), SecantStatus> {
    if out.is_null() {
        set_error("null output pointer".into());
        return Err(SecantStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn secant_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn secant_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `C(a, b)`.
#[no_mangle]
pub extern "C" fn secant_binomial(a: u64, b: u64) -> u64 {
    combin::binomial(a, b)
}

/// `C(n+1, k+1) - 1`; requires `k < n`, returns 0 otherwise.
#[no_mangle]
pub extern "C" fn secant_ambient_dim(k: usize, n: usize) -> usize {
    if k >= n {
        return 0;
    }
    scan::ambient_dim(k, n)
}

/// Expected dimension of `G(k, n)^s`; requires `k < n`, returns 0 otherwise.
#[no_mangle]
pub extern "C" fn secant_expected_dim(k: usize, n: usize, s: usize) -> usize {
    if k >= n {
        return 0;
    }
    scan::expected_dim(k, n, s)
}

/// Saturation bound `S`; requires `k < n`, returns 0 otherwise.
#[no_mangle]
pub extern "C" fn secant_saturation_s(k: usize, n: usize) -> usize {
    if k >= n {
        return 0;
    }
    scan::saturation_s(k, n)
}

/// Dimension of `G(1, n)^s`.
#[no_mangle]
pub extern "C" fn secant_lines_oracle(n: usize, s: usize) -> usize {
    scan::lines_oracle(n, s)
}

/// New configuration with the library defaults for `backend`.
#[no_mangle]
pub extern "C" fn secant_config_new(backend: SecantBackend, seed: u64) -> *mut SecantConfig {
    let inner = match backend {
        SecantBackend::Exact => RankBackendConfig::exact(seed),
        SecantBackend::Float => RankBackendConfig::float(seed),
    };
    Box::into_raw(Box::new(SecantConfig { inner }))
}

/// # Safety
/// `cfg` must be NULL or a pointer from [`secant_config_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn secant_config_free(cfg: *mut SecantConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

// Applies `edit` to a copy and keeps it only if it validates under both
// backends, so switching backends later cannot expose a bad value.
unsafe fn update(cfg: *mut SecantConfig, edit: impl FnOnce(&mut RankBackendConfig)) -> SecantStatus {
    guard(|| {
        let c = config_mut(cfg)?;
        let mut next = c.clone();
        edit(&mut next);
        for mode in [BackendMode::ExactPrime, BackendMode::FloatSvd] {
            lift(RankBackendConfig { mode, ..next.clone() }.validate())?;
        }
        *c = next;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn secant_config_set_trials(cfg: *mut SecantConfig, trials: usize) -> SecantStatus {
    update(cfg, |c| c.trials = trials)
}

/// Sets the modulus; it must be a prime in `[2^30, 2^31)`.
///
/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn secant_config_set_prime(cfg: *mut SecantConfig, prime: u32) -> SecantStatus {
    update(cfg, |c| c.prime = prime)
}

/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn secant_config_set_tolerance(cfg: *mut SecantConfig, tolerance: f64) -> SecantStatus {
    update(cfg, |c| c.tolerance = tolerance)
}

/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn secant_config_set_vary_prime(cfg: *mut SecantConfig, vary: bool) -> SecantStatus {
    update(cfg, |c| c.vary_prime = vary)
}

/// Classifies `G(k, n)^s`.
///
/// # Safety
/// `cfg` must be a live configuration handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn secant_classify_cell(
    cfg: *const SecantConfig,
    k: usize,
    n: usize,
    s: usize,
    out: *mut SecantRecord,
) -> SecantStatus {
    guard(|| {
        let r = lift(scan::classify_cell(k, n, s, config_ref(cfg)?))?;
        write_out(out, to_c(&r))
    })
}

/// Classifies the `s`-secant variety of the degree-`k` Veronese embedding
/// of `P^n`.
///
/// # Safety
/// `cfg` must be a live configuration handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn secant_veronese_classify(
    cfg: *const SecantConfig,
    k: usize,
    n: usize,
    s: usize,
    out: *mut SecantRecord,
) -> SecantStatus {
    guard(|| {
        let r = lift(veronese::veronese_classify(k, n, s, config_ref(cfg)?))?;
        write_out(out, to_c(&r))
    })
}

/// Sweeps `n_min <= n <= n_max` with the default `k` range, or
/// `k <= k_max` when `k_max` is nonzero. On success `*out` receives a handle
/// to free with [`secant_scan_free`].
///
/// # Safety
/// `cfg` must be a live configuration handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn secant_scan_range(
    cfg: *const SecantConfig,
    n_min: usize,
    n_max: usize,
    k_max: usize,
    out: *mut *mut SecantScan,
) -> SecantStatus {
    guard(|| {
        let plan = ScanPlan { n_min, n_max, k_max: (k_max > 0).then_some(k_max), ..ScanPlan::default() };
        let records = lift(scan::scan_range(&plan, config_ref(cfg)?, None))?;
        write_out(out, Box::into_raw(Box::new(SecantScan { records })))
    })
}

/// Number of records in a scan; 0 for NULL.
///
/// # Safety
/// `scan` must be NULL or a live scan handle.
#[no_mangle]
pub unsafe extern "C" fn secant_scan_len(scan: *const SecantScan) -> usize {
    scan.as_ref().map_or(0, |s| s.records.len())
}

/// Copies record `index` into `out`.
///
/// # Safety
/// `scan` must be a live scan handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn secant_scan_get(
    scan: *const SecantScan,
    index: usize,
    out: *mut SecantRecord,
) -> SecantStatus {
    guard(|| {
        let Some(s) = scan.as_ref() else {
            set_error("null scan".into());
            return Err(SecantStatus::NullPointer);
        };
        let Some(r) = s.records.get(index) else {
            set_error(format!("index {index} out of range for {} records", s.records.len()));
            return Err(SecantStatus::OutOfRange);
        };
        write_out(out, to_c(r))
    })
}

/// # Safety
/// `scan` must be NULL or a handle from [`secant_scan_range`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn secant_scan_free(scan: *mut SecantScan) {
    if !scan.is_null() {
        drop(Box::from_raw(scan));
    }
}
