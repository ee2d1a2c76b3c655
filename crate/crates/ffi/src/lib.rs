//! C ABI over `openshop`.
//!
//! Instances and schedules are opaque handles owned by the caller and
//! released with `os_instance_free` / `os_schedule_free`. Rationals cross
//! the boundary as strings (`"7"`, `"46/9"`) and every string returned by
//! this library must be released with `os_string_free`. Every fallible call
//! returns an [`OsStatus`]; on failure `os_last_error_message` describes the
//! most recent error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use openshop::exact::{exact_solve, ExactLimits};
use openshop::harness::{read_instance, read_schedule, write_schedule};
use openshop::listsched::{jackson_priority, list_schedule, PriorityList};
use openshop::ptas::{ptas_solve, Mode, PtasError, PtasParams};
use openshop::rational::{format_rational, parse_rational};
use openshop::{bounds, lateness_profile, validate_schedule, Instance, Schedule};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    InfeasibleSchedule = 5,
    LimitExceeded = 6,
    SolverError = 7,
    Panic = 8,
}

/// Opaque problem instance.
pub struct OsInstance(Instance);

/// Opaque schedule.
pub struct OsSchedule(Schedule);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(OsStatus, String);

type Outcome = Result<(), Failure>;

fn fail<T>(status: OsStatus, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, msg.into()))
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs stripped");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Outcome) -> OsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            OsStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return fail(OsStatus::NullPointer, format!("{what} is null"));
    }
    CStr::from_ptr(p).to_str().or_else(|_| fail(OsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(OsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Outcome {
    if out.is_null() {
        return fail(OsStatus::NullPointer, format!("{what} is null"));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior NUL").into_raw()
}

unsafe fn put_schedule(out: *mut *mut OsSchedule, schedule: Schedule) -> Outcome {
    if out.is_null() {
        return fail(OsStatus::NullPointer, "out is null");
    }
    out.write(Box::into_raw(Box::new(OsSchedule(schedule))));
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn os_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn os_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an instance from its JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn os_instance_from_json(json: *const c_char, out: *mut *mut OsInstance) -> OsStatus {
    guard(|| {
        let s = text(json, "json")?;
        let inst = read_instance(s.as_bytes()).or_else(|e| fail(OsStatus::ParseError, e.to_string()))?;
        put(out, Box::into_raw(Box::new(OsInstance(inst))), "out")
    })
}

/// # Safety
/// `inst` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn os_instance_free(inst: *mut OsInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// # Safety
/// `inst` must be a live handle; `machines` and `jobs` must be writable.
#[no_mangle]
pub unsafe extern "C" fn os_instance_dims(inst: *const OsInstance, machines: *mut usize, jobs: *mut usize) -> OsStatus {
    guard(|| {
        let inst = &borrow(inst, "inst")?.0;
        put(machines, inst.machines(), "machines")?;
        put(jobs, inst.jobs(), "jobs")
    })
}

/// Lower bounds: `P` (largest machine load) and `Q` (largest job work plus
/// delivery time), as strings to free with `os_string_free`.
///
/// # Safety
/// `inst` must be a live handle; `p_out` and `q_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn os_bounds(
    inst: *const OsInstance,
    p_out: *mut *mut c_char,
    q_out: *mut *mut c_char,
) -> OsStatus {
    guard(|| {
        let b = bounds(&borrow(inst, "inst")?.0);
        if p_out.is_null() || q_out.is_null() {
            return fail(OsStatus::NullPointer, "output pointer is null");
        }
        p_out.write(c_string(format_rational(&b.p)));
        q_out.write(c_string(format_rational(&b.q)));
        Ok(())
    })
}

/// Schedule from Jackson's priority list (largest delivery time first).
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn os_solve_jackson(inst: *const OsInstance, out: *mut *mut OsSchedule) -> OsStatus {
    guard(|| {
        let inst = &borrow(inst, "inst")?.0;
        put_schedule(out, list_schedule(inst, &jackson_priority(inst)))
    })
}

/// List schedule for the priority order `order[0..len]` (0-based jobs,
/// highest priority first).
///
/// # Safety
/// `inst` must be a live handle, `order` must point to `len` readable
/// values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn os_solve_list(
    inst: *const OsInstance,
    order: *const usize,
    len: usize,
    out: *mut *mut OsSchedule,
) -> OsStatus {
    guard(|| {
        let inst = &borrow(inst, "inst")?.0;
        let order =
            if len == 0 { Vec::new() } else { std::slice::from_raw_parts(borrow(order, "order")?, len).to_vec() };
        let prio = PriorityList::new(order, inst.jobs()).or_else(|e| fail(OsStatus::InvalidArgument, e.to_string()))?;
        put_schedule(out, list_schedule(inst, &prio))
    })
}

/// Exact branch and bound. `max_combinations = 0` uses the default node
/// limit. On `OS_STATUS_LIMIT_EXCEEDED` the best schedule found is still
/// stored in `out`.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn os_solve_exact(
    inst: *const OsInstance,
    max_combinations: u64,
    out: *mut *mut OsSchedule,
) -> OsStatus {
    guard(|| {
        let inst = &borrow(inst, "inst")?.0;
        let mut limits = ExactLimits::default();
        if max_combinations > 0 {
            limits.max_combinations = max_combinations;
        }
        let res = exact_solve(inst, limits);
        let optimal = res.is_optimal();
        let examined = res.combinations_examined;
        put_schedule(out, res.schedule)?;
        if optimal {
            Ok(())
        } else {
            fail(OsStatus::LimitExceeded, format!("node limit reached after {examined} nodes"))
        }
    })
}

/// Approximation scheme. `epsilon` is a rational string in (0, 1] (larger
/// values are clamped to 1); `mode` is `"enumerate"` or `"oracle-guided"`;
/// `delta` may be null for the formal grid step; zero `budget` or
/// `max_combinations` selects the default.
///
/// # Safety
/// `inst` must be a live handle, string arguments NUL-terminated (or null
/// where allowed) and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn os_solve_ptas(
    inst: *const OsInstance,
    epsilon: *const c_char,
    mode: *const c_char,
    delta: *const c_char,
    budget: u64,
    max_combinations: u64,
    out: *mut *mut OsSchedule,
) -> OsStatus {
    guard(|| {
        let inst = &borrow(inst, "inst")?.0;
        let arg = |e: String| Failure(OsStatus::InvalidArgument, e);
        let eps = parse_rational(text(epsilon, "epsilon")?).map_err(|e| arg(e.to_string()))?;
        let mode_text = text(mode, "mode")?;
        let mode = Mode::parse(mode_text).ok_or_else(|| arg(format!("unknown mode '{mode_text}'")))?;
        let mut params = PtasParams::new(eps, mode).map_err(|e| arg(e.to_string()))?;
        if !delta.is_null() {
            let d = parse_rational(text(delta, "delta")?).map_err(|e| arg(e.to_string()))?;
            params = params.with_delta(d).map_err(|e| arg(e.to_string()))?;
        }
        if budget > 0 {
            params = params.with_budget(budget).map_err(|e| arg(e.to_string()))?;
        }
        if max_combinations > 0 {
            params = params.with_exact_limits(ExactLimits { max_combinations });
        }
        let outcome = ptas_solve(inst, &params).map_err(|e| {
            let status = match e {
                PtasError::BudgetExhausted { .. } | PtasError::ExactLimitExceeded { .. } | PtasError::GridTooLarge => {
                    OsStatus::LimitExceeded
                }
                PtasError::InvalidEpsilon(_) | PtasError::InvalidDelta(_) | PtasError::InvalidBudget => {
                    OsStatus::InvalidArgument
                }
                _ => OsStatus::SolverError,
            };
            Failure(status, e.to_string())
        })?;
        put_schedule(out, outcome.schedule)
    })
}

/// Number of feasibility violations (0 means feasible). Details go to
/// `os_last_error_message` as one line per violation.
///
/// # Safety
/// `inst` and `sched` must be live handles; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn os_validate(inst: *const OsInstance, sched: *const OsSchedule, count: *mut usize) -> OsStatus {
    guard(|| {
        let violations = validate_schedule(&borrow(inst, "inst")?.0, &borrow(sched, "sched")?.0);
        put(count, violations.len(), "count")?;
        if !violations.is_empty() {
            set_error(violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n"));
        }
        Ok(())
    })
}

/// Maximum lateness of a feasible schedule, as a string to free with
/// `os_string_free`.
///
/// # Safety
/// `inst` and `sched` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn os_schedule_lmax(
    inst: *const OsInstance,
    sched: *const OsSchedule,
    out: *mut *mut c_char,
) -> OsStatus {
    guard(|| {
        let profile = lateness_profile(&borrow(inst, "inst")?.0, &borrow(sched, "sched")?.0)
            .or_else(|e| fail(OsStatus::InfeasibleSchedule, e.to_string()))?;
        if out.is_null() {
            return fail(OsStatus::NullPointer, "out is null");
        }
        out.write(c_string(format_rational(&profile.lmax)));
        Ok(())
    })
}

/// # Safety
/// `sched` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn os_schedule_to_json(sched: *const OsSchedule, out: *mut *mut c_char) -> OsStatus {
    guard(|| {
        let bytes = write_schedule(&borrow(sched, "sched")?.0);
        if out.is_null() {
            return fail(OsStatus::NullPointer, "out is null");
        }
        out.write(c_string(String::from_utf8(bytes).expect("JSON is UTF-8")));
        Ok(())
    })
}

/// Parses a schedule; feasibility is not checked (see `os_validate`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn os_schedule_from_json(json: *const c_char, out: *mut *mut OsSchedule) -> OsStatus {
    guard(|| {
        let s = text(json, "json")?;
        let sched = read_schedule(s.as_bytes()).or_else(|e| fail(OsStatus::ParseError, e.to_string()))?;
        put_schedule(out, sched)
    })
}

/// # Safety
/// `sched` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn os_schedule_free(sched: *mut OsSchedule) {
    if !sched.is_null() {
        drop(Box::from_raw(sched));
    }
}
