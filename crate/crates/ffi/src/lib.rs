//! C ABI over `homdip`.
//!
//! Every fallible function returns a [`HomdipStatus`]; on failure a message is
//! available from [`homdip_last_error`] on the same thread until the next
//! call. Handles are opaque and must be released with their `_free` function.
//! Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use homdip::multimode::{mode_identity_deviation, MultiModeBasis};
use homdip::states::{self, State};
use homdip::verify::{scan_phase, CriterionForm, PhaseScan};
use homdip::{BeamSplitterParams, CriterionKind, CriterionReport, Error, PhaseConvention};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomdipStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    Truncation = 4,
    Numerical = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomdipCriterion {
    IdealD = 0,
    Measured = 1,
    Asymmetric = 2,
    Conservative = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomdipForm {
    Standard = 0,
    PairCorrected = 1,
    WorstCase = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomdipConvention {
    PerPhoton = 0,
    PerFockComponent = 1,
}

/// Criterion outcome. `q11` and `r` are NaN when the criterion does not use
/// them.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomdipReport {
    pub criterion: HomdipCriterion,
    pub p0: f64,
    pub p02: f64,
    pub p20: f64,
    pub p22: f64,
    pub p11: f64,
    pub q11: f64,
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub entangled: bool,
    pub concurrence_lower_bound: f64,
}

/// Opaque state handle.
pub struct HomdipState(State);

/// Opaque phase-scan handle.
pub struct HomdipScan(PhaseScan);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(HomdipStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::TruncationUnsafe { .. } => HomdipStatus::Truncation,
            Error::Json { .. } | Error::Field { .. } => HomdipStatus::ParseError,
            Error::InvalidDensity(_) | Error::NotNormalized { .. } => HomdipStatus::Numerical,
            _ => HomdipStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(HomdipStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HomdipStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HomdipStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            HomdipStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Failure(
            HomdipStatus::InvalidArgument,
            format!("{what} is not UTF-8"),
        )
    })
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

impl From<HomdipConvention> for PhaseConvention {
    fn from(c: HomdipConvention) -> Self {
        match c {
            HomdipConvention::PerPhoton => PhaseConvention::PerPhoton,
            HomdipConvention::PerFockComponent => PhaseConvention::PerFockComponent,
        }
    }
}

impl From<HomdipCriterion> for CriterionKind {
    fn from(c: HomdipCriterion) -> Self {
        match c {
            HomdipCriterion::IdealD => CriterionKind::IdealD,
            HomdipCriterion::Measured => CriterionKind::Measured,
            HomdipCriterion::Asymmetric => CriterionKind::Asymmetric,
            HomdipCriterion::Conservative => CriterionKind::Conservative,
        }
    }
}

impl From<HomdipForm> for CriterionForm {
    fn from(f: HomdipForm) -> Self {
        match f {
            HomdipForm::Standard => CriterionForm::Standard,
            HomdipForm::PairCorrected => CriterionForm::PairCorrected,
            HomdipForm::WorstCase => CriterionForm::WorstCase,
        }
    }
}

impl HomdipReport {
    fn new(criterion: HomdipCriterion, rep: &CriterionReport) -> Self {
        Self {
            criterion,
            p0: rep.p0,
            p02: rep.p02,
            p20: rep.p20,
            p22: rep.p22,
            p11: rep.p11,
            q11: rep.q11.unwrap_or(f64::NAN),
            r: rep.r.unwrap_or(f64::NAN),
            lhs: rep.lhs,
            rhs: rep.rhs,
            entangled: rep.entangled,
            concurrence_lower_bound: rep.concurrence_lower_bound,
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn homdip_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn homdip_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

fn boxed(state: State) -> *mut HomdipState {
    Box::into_raw(Box::new(HomdipState(state)))
}

/// Named state: "hom", "rho1", "rho2", "worst2color" or "vacuum".
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn homdip_state_named(
    name: *const c_char,
    out: *mut *mut HomdipState,
) -> HomdipStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let state = states::named(name)?;
        write_out(out, boxed(state), "out")
    })
}

/// State from the JSON state-file format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn homdip_state_from_json(
    json: *const c_char,
    out: *mut *mut HomdipState,
) -> HomdipStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let state = homdip::formats::parse_state_json(text)?;
        write_out(out, boxed(state), "out")
    })
}

/// Serializes a state to JSON. The returned string must be released with
/// [`homdip_string_free`].
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn homdip_state_to_json(
    state: *const HomdipState,
    out: *mut *mut c_char,
) -> HomdipStatus {
    guard(|| {
        let state = state.as_ref().ok_or_else(|| null("state"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let json = homdip::formats::state_to_json(&state.0)?;
        let c = CString::new(json)
            .map_err(|_| Failure(HomdipStatus::Numerical, "JSON contains NUL".into()))?;
        write_out(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn homdip_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `state` must be a live handle or null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn homdip_state_free(state: *mut HomdipState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// 1 for a multimode state, 0 for a single-mode state, -1 for null.
///
/// # Safety
/// `state` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn homdip_state_is_multimode(state: *const HomdipState) -> i32 {
    match state.as_ref() {
        None => -1,
        Some(HomdipState(State::Single(_))) => 0,
        Some(HomdipState(State::Multi(_))) => 1,
    }
}

/// Applies a phase `phi` on port A in place.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn homdip_state_phase_shift(
    state: *mut HomdipState,
    phi: f64,
    convention: HomdipConvention,
) -> HomdipStatus {
    guard(|| {
        let state = state.as_mut().ok_or_else(|| null("state"))?;
        if !phi.is_finite() {
            return Err(Failure(
                HomdipStatus::InvalidArgument,
                "phi must be finite".into(),
            ));
        }
        state.0 = state.0.phase_shifted(phi, convention.into())?;
        Ok(())
    })
}

/// Evaluates a criterion. `r` is the splitter reflection coefficient for the
/// asymmetric criterion and is ignored otherwise.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn homdip_check(
    state: *const HomdipState,
    criterion: HomdipCriterion,
    form: HomdipForm,
    r: f64,
    out: *mut HomdipReport,
) -> HomdipStatus {
    guard(|| {
        let state = state.as_ref().ok_or_else(|| null("state"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let params = if criterion == HomdipCriterion::Asymmetric {
            BeamSplitterParams::new(r)?
        } else {
            BeamSplitterParams::balanced()
        };
        let rep = states::evaluate(&state.0, criterion.into(), form.into(), &params)?;
        write_out(out, HomdipReport::new(criterion, &rep), "out")
    })
}

/// Scans the measured criterion over the phase on port A.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn homdip_scan(
    state: *const HomdipState,
    points: usize,
    convention: HomdipConvention,
    out: *mut *mut HomdipScan,
) -> HomdipStatus {
    guard(|| {
        let state = state.as_ref().ok_or_else(|| null("state"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let State::Single(rho) = &state.0 else {
            return Err(Failure(
                HomdipStatus::InvalidArgument,
                "phase scans need a single-mode state".into(),
            ));
        };
        let scan = scan_phase(rho, points, convention.into())?;
        write_out(out, Box::into_raw(Box::new(HomdipScan(scan))), "out")
    })
}

/// Number of detection intervals; 0 for null.
///
/// # Safety
/// `scan` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn homdip_scan_interval_count(scan: *const HomdipScan) -> usize {
    scan.as_ref().map_or(0, |s| s.0.intervals.len())
}

/// Endpoints of interval `k` in radians; `end` may exceed 2π for an interval
/// that wraps.
///
/// # Safety
/// `scan` must be a live handle; `start` and `end` must be writable.
#[no_mangle]
pub unsafe extern "C" fn homdip_scan_interval(
    scan: *const HomdipScan,
    k: usize,
    start: *mut f64,
    end: *mut f64,
) -> HomdipStatus {
    guard(|| {
        let scan = scan.as_ref().ok_or_else(|| null("scan"))?;
        let iv = scan.0.intervals.get(k).ok_or_else(|| {
            Failure(
                HomdipStatus::InvalidArgument,
                format!("interval {k} out of range ({})", scan.0.intervals.len()),
            )
        })?;
        write_out(start, iv.start, "start")?;
        write_out(end, iv.end, "end")
    })
}

/// Grid phase maximizing Q11; NaN for null.
///
/// # Safety
/// `scan` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn homdip_scan_argmax(scan: *const HomdipScan) -> f64 {
    scan.as_ref().map_or(f64::NAN, |s| s.0.argmax_phi)
}

/// # Safety
/// `scan` must be a live handle or null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn homdip_scan_free(scan: *mut HomdipScan) {
    if !scan.is_null() {
        drop(Box::from_raw(scan));
    }
}

/// Deviation of the two-mode product identity on a basis with `modes`
/// internal modes (at least 2) and at most four photons.
///
/// # Safety
/// `deviation` must be writable.
#[no_mangle]
pub unsafe extern "C" fn homdip_mode_identity_check(
    modes: usize,
    deviation: *mut f64,
) -> HomdipStatus {
    guard(|| {
        if deviation.is_null() {
            return Err(null("deviation"));
        }
        let basis = MultiModeBasis::new(modes, homdip::multimode::DEFAULT_N_MAX_TOTAL)?;
        let dev = mode_identity_deviation(&basis, 0, 1, 0.0)?;
        write_out(deviation, dev, "deviation")
    })
}
