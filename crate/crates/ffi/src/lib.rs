//! C interface to the solver.
//!
//! Instances and solutions are opaque handles created by this library and
//! released with the matching `*_free` function. Every fallible call
//! returns a [`TtpStatus`]; on failure [`ttp_last_error`] describes the
//! problem for the calling thread. City and item ids are one-based, as in
//! the instance files.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ttp_core::coordination::CoordMode;
use ttp_core::io::{parse_instance_str, read_instance_file};
use ttp_core::search::{ttps, ClockKind, KpsMode, SearchConfig, SearchStats, Solution};
use ttp_core::{evaluate, CollectionPlan, Instance, Tour, TtpError};

/// Result of a library call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TtpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    InvalidSolution = 5,
    SizeGuard = 6,
    ConfigError = 7,
    IoError = 8,
    TrainingError = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TtpCoord {
    Noch = 0,
    Sgch = 1,
    Pgch = 2,
    Lgch = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TtpKps {
    Sbfs = 0,
    Mbfs = 1,
    Sas = 2,
}

/// Settings for [`ttp_solve`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TtpSolveOptions {
    pub coord: TtpCoord,
    pub kps: TtpKps,
    pub timeout_ms: u64,
    pub seed: u64,
    /// Non-zero measures the budget in counted work, which makes runs
    /// repeatable.
    pub work_clock: u8,
}

/// Opaque parsed instance.
pub struct TtpInstance {
    inner: Instance,
}

/// Opaque solver result.
pub struct TtpSolution {
    solution: Solution,
    stats: SearchStats,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &TtpError) -> TtpStatus {
    match err {
        TtpError::Parse { .. } => TtpStatus::ParseError,
        TtpError::Validation(_) => TtpStatus::ValidationError,
        TtpError::InvalidSolution(_) | TtpError::InvalidMove(_) => TtpStatus::InvalidSolution,
        TtpError::SizeGuard(_) => TtpStatus::SizeGuard,
        TtpError::Config(_) => TtpStatus::ConfigError,
        TtpError::Training(_) => TtpStatus::TrainingError,
        TtpError::Io(_) => TtpStatus::IoError,
    }
}

fn fail(err: TtpError) -> TtpStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

/// Runs `f`, turning a panic into [`TtpStatus::Panic`].
fn guarded(f: impl FnOnce() -> TtpStatus) -> TtpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            TtpStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, TtpStatus> {
    if s.is_null() {
        set_error("string argument is null");
        return Err(TtpStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        TtpStatus::InvalidUtf8
    })
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ttp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Default options: PGCH coordination, marginal bit-flip search, ten
/// seconds, seed zero, wall clock.
#[no_mangle]
pub extern "C" fn ttp_solve_options_default() -> TtpSolveOptions {
    TtpSolveOptions {
        coord: TtpCoord::Pgch,
        kps: TtpKps::Mbfs,
        timeout_ms: 10_000,
        seed: 0,
        work_clock: 0,
    }
}

fn store_instance(inst: Instance, out: *mut *mut TtpInstance) -> TtpStatus {
    unsafe { *out = Box::into_raw(Box::new(TtpInstance { inner: inst })) };
    TtpStatus::Ok
}

/// Parses an instance from benchmark-format text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ttp_instance_parse(text: *const c_char, out: *mut *mut TtpInstance) -> TtpStatus {
    guarded(|| {
        if out.is_null() {
            set_error("output pointer is null");
            return TtpStatus::NullPointer;
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_instance_str(text) {
            Ok(inst) => store_instance(inst, out),
            Err(e) => fail(e),
        }
    })
}

/// Reads an instance file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ttp_instance_load(path: *const c_char, out: *mut *mut TtpInstance) -> TtpStatus {
    guarded(|| {
        if out.is_null() {
            set_error("output pointer is null");
            return TtpStatus::NullPointer;
        }
        let path = match read_str(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match read_instance_file(std::path::Path::new(path)) {
            Ok(inst) => store_instance(inst, out),
            Err(e) => fail(e),
        }
    })
}

/// Releases an instance. Null is ignored.
///
/// # Safety
/// `inst` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ttp_instance_free(inst: *mut TtpInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of cities, zero for null.
///
/// # Safety
/// `inst` must be null or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn ttp_instance_num_cities(inst: *const TtpInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.num_cities())
}

/// Number of items, zero for null.
///
/// # Safety
/// `inst` must be null or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn ttp_instance_num_items(inst: *const TtpInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.num_items())
}

/// Objective of a solution given as a closed tour (`num_cities + 1` ids,
/// starting and ending at city 1) and a list of collected items.
///
/// # Safety
/// Arrays must hold the stated number of elements; `items` may be null when
/// `items_len` is zero.
#[no_mangle]
pub unsafe extern "C" fn ttp_evaluate(
    inst: *const TtpInstance,
    tour: *const usize,
    tour_len: usize,
    items: *const usize,
    items_len: usize,
    out_objective: *mut f64,
) -> TtpStatus {
    guarded(|| {
        let Some(inst) = inst.as_ref() else {
            set_error("instance is null");
            return TtpStatus::NullPointer;
        };
        if tour.is_null() || out_objective.is_null() || (items.is_null() && items_len > 0) {
            set_error("array or output pointer is null");
            return TtpStatus::NullPointer;
        }
        let inst = &inst.inner;
        let tour = std::slice::from_raw_parts(tour, tour_len);
        let items = if items_len == 0 { &[][..] } else { std::slice::from_raw_parts(items, items_len) };
        let to_zero = |ids: &[usize], what: &str| -> Result<Vec<usize>, TtpError> {
            ids.iter()
                .map(|&i| {
                    i.checked_sub(1)
                        .ok_or_else(|| TtpError::InvalidSolution(format!("{what} ids are one-based")))
                })
                .collect()
        };
        let result = (|| {
            let t = Tour::from_closed(&to_zero(tour, "city")?)?;
            if t.len() != inst.num_cities() {
                return Err(TtpError::InvalidSolution(format!(
                    "tour has {} cities, instance has {}",
                    t.len(),
                    inst.num_cities()
                )));
            }
            let p = CollectionPlan::from_items(inst, &to_zero(items, "item")?)?;
            if !p.is_feasible(inst) {
                return Err(TtpError::InvalidSolution("collected weight exceeds capacity".into()));
            }
            Ok(evaluate(inst, &t, &p).objective())
        })();
        match result {
            Ok(v) => {
                *out_objective = v;
                TtpStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Runs the solver.
///
/// # Safety
/// `inst` must be a live instance handle, `opts` null (defaults) or valid,
/// and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ttp_solve(
    inst: *const TtpInstance,
    opts: *const TtpSolveOptions,
    out: *mut *mut TtpSolution,
) -> TtpStatus {
    guarded(|| {
        let Some(inst) = inst.as_ref() else {
            set_error("instance is null");
            return TtpStatus::NullPointer;
        };
        if out.is_null() {
            set_error("output pointer is null");
            return TtpStatus::NullPointer;
        }
        let o = opts.as_ref().copied().unwrap_or_else(|| ttp_solve_options_default());
        let coord = match o.coord {
            TtpCoord::Noch => CoordMode::Noch,
            TtpCoord::Sgch => CoordMode::Sgch,
            TtpCoord::Pgch => CoordMode::Pgch,
            TtpCoord::Lgch => CoordMode::Lgch,
        };
        let kps = match o.kps {
            TtpKps::Sbfs => KpsMode::Sbfs,
            TtpKps::Mbfs => KpsMode::Mbfs,
            TtpKps::Sas => KpsMode::Sas,
        };
        let cfg = SearchConfig {
            clock: if o.work_clock != 0 { ClockKind::Work } else { ClockKind::Wall },
            ..SearchConfig::new(coord, kps, o.timeout_ms, o.seed)
        };
        match ttps(&inst.inner, &cfg) {
            Ok((solution, stats)) => {
                *out = Box::into_raw(Box::new(TtpSolution { solution, stats }));
                TtpStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a solution. Null is ignored.
///
/// # Safety
/// `sol` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ttp_solution_free(sol: *mut TtpSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Objective of the solution, NaN for null.
///
/// # Safety
/// `sol` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn ttp_solution_objective(sol: *const TtpSolution) -> f64 {
    sol.as_ref().map_or(f64::NAN, |s| s.solution.objective)
}

/// Restarts performed by the run, zero for null.
///
/// # Safety
/// `sol` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn ttp_solution_restarts(sol: *const TtpSolution) -> u64 {
    sol.as_ref().map_or(0, |s| s.stats.restarts)
}

unsafe fn copy_ids(ids: &[usize], buf: *mut usize, cap: usize, len: *mut usize) -> TtpStatus {
    if len.is_null() {
        set_error("length pointer is null");
        return TtpStatus::NullPointer;
    }
    *len = ids.len();
    if buf.is_null() || cap < ids.len() {
        set_error(format!("buffer holds {cap} ids, {} needed", ids.len()));
        return TtpStatus::BufferTooSmall;
    }
    for (k, &id) in ids.iter().enumerate() {
        *buf.add(k) = id + 1;
    }
    TtpStatus::Ok
}

/// Copies the closed tour into `buf`. `*len` receives the required length
/// even when the buffer is too small or null.
///
/// # Safety
/// `buf` must hold `cap` elements or be null; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ttp_solution_tour(sol: *const TtpSolution, buf: *mut usize, cap: usize, len: *mut usize) -> TtpStatus {
    guarded(|| match sol.as_ref() {
        Some(s) => copy_ids(s.solution.tour.order(), buf, cap, len),
        None => {
            set_error("solution is null");
            TtpStatus::NullPointer
        }
    })
}

/// Copies the collected item ids, increasing, into `buf`. Sizing works as
/// for [`ttp_solution_tour`].
///
/// # Safety
/// `buf` must hold `cap` elements or be null; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ttp_solution_items(sol: *const TtpSolution, buf: *mut usize, cap: usize, len: *mut usize) -> TtpStatus {
    guarded(|| match sol.as_ref() {
        Some(s) => copy_ids(&s.solution.plan.picked_items(), buf, cap, len),
        None => {
            set_error("solution is null");
            TtpStatus::NullPointer
        }
    })
}
