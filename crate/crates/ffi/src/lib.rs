//! C interface to `bblab`.
//!
//! Machines and runs are opaque handles owned by the caller and released
//! with the matching `_free` function. Every fallible call returns a
//! [`BblabStatus`]; on failure [`bblab_last_error`] describes the problem.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use bblab::search::{checkpoint_steps, enumerate, EnumerationOptions, SearchError, SpaceMode};
use bblab::sim::{time_scale, verify_simulation, Encoding, SimError};
use bblab::ternary::scan_erdos;
use bblab::{Configuration, MachineTable};

/// Result codes. `BBLAB_STATUS_OK` is zero; everything else is an error.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BblabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    /// A verification found a disagreement.
    Mismatch = 4,
    /// The enumeration space exceeds the guard.
    SpaceTooLarge = 5,
    /// The output buffer is too small.
    BufferTooSmall = 6,
    Panic = 7,
}

/// A validated transition table.
pub struct BblabMachine(Arc<MachineTable>);

/// A machine together with a configuration being stepped.
pub struct BblabRun {
    machine: Arc<MachineTable>,
    config: Configuration,
}

/// Outcome of an exhaustive enumeration.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BblabEnumerationSummary {
    pub machines: u64,
    pub halting: u64,
    pub non_halting: u64,
    pub undecided: u64,
    /// Longest halting run; meaningful only when `has_max` is true.
    pub max_steps: u64,
    pub has_max: bool,
    pub champion_count: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: BblabStatus, msg: impl Into<String>) -> BblabStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> BblabStatus) -> BblabStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(BblabStatus::Panic, "internal panic"))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, BblabStatus> {
    if s.is_null() {
        return Err(fail(BblabStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(BblabStatus::InvalidArgument, "string is not UTF-8"))
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            return fail(BblabStatus::NullPointer, "null pointer argument");
        }
    };
}

/// The message for the last failed call on this thread, or null. Valid until
/// the next `bblab_` call on the same thread.
#[no_mangle]
pub extern "C" fn bblab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bblab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn put_machine(m: MachineTable, out: *mut *mut BblabMachine) -> BblabStatus {
    // SAFETY: callers check `out` for null first.
    unsafe { *out = Box::into_raw(Box::new(BblabMachine(Arc::new(m)))) };
    BblabStatus::Ok
}

/// Loads `m54`, `m152` or `bb5-champion`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bblab_machine_builtin(
    name: *const c_char,
    out: *mut *mut BblabMachine,
) -> BblabStatus {
    guard(|| {
        non_null!(out);
        let name = try_status!(text(name));
        match bblab::builtin(name) {
            Some(m) => put_machine(m, out),
            None => fail(BblabStatus::InvalidArgument, format!("unknown builtin `{name}`")),
        }
    })
}

/// Parses a machine in the `.tm` text format.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bblab_machine_parse(
    src: *const c_char,
    out: *mut *mut BblabMachine,
) -> BblabStatus {
    guard(|| {
        non_null!(out);
        match bblab::parse_machine(try_status!(text(src))) {
            Ok(m) => put_machine(m, out),
            Err(e) => fail(BblabStatus::ParseError, e.to_string()),
        }
    })
}

/// Parses a compact table such as `1RB1LB_1LA---`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bblab_machine_parse_compact(
    src: *const c_char,
    out: *mut *mut BblabMachine,
) -> BblabStatus {
    guard(|| {
        non_null!(out);
        match bblab::parse_compact(try_status!(text(src))) {
            Ok(m) => put_machine(m, out),
            Err(e) => fail(BblabStatus::ParseError, e.to_string()),
        }
    })
}

/// Writes the canonical `.tm` text of `m` to `*out`; free it with
/// [`bblab_string_free`].
///
/// # Safety
/// `m` must be a live machine handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bblab_machine_serialize(
    m: *const BblabMachine,
    out: *mut *mut c_char,
) -> BblabStatus {
    guard(|| {
        non_null!(m, out);
        let s = bblab::serialize_machine(&(*m).0);
        match CString::new(s) {
            Ok(s) => {
                *out = s.into_raw();
                BblabStatus::Ok
            }
            Err(_) => fail(BblabStatus::InvalidArgument, "machine text contains NUL"),
        }
    })
}

/// # Safety
/// `m` must be a live machine handle or null.
#[no_mangle]
pub unsafe extern "C" fn bblab_machine_num_states(m: *const BblabMachine) -> u32 {
    m.as_ref().map_or(0, |m| m.0.num_states() as u32)
}

/// # Safety
/// `m` must be a live machine handle or null.
#[no_mangle]
pub unsafe extern "C" fn bblab_machine_num_symbols(m: *const BblabMachine) -> u32 {
    m.as_ref().map_or(0, |m| m.0.num_symbols() as u32)
}

/// # Safety
/// `m` must come from this library and not have been freed. Runs created
/// from it stay valid.
#[no_mangle]
pub unsafe extern "C" fn bblab_machine_free(m: *mut BblabMachine) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Starts a run of `m` from the blank tape.
///
/// # Safety
/// `m` must be a live machine handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bblab_run_new(m: *const BblabMachine, out: *mut *mut BblabRun) -> BblabStatus {
    guard(|| {
        non_null!(m, out);
        let machine = Arc::clone(&(*m).0);
        let config = machine.initial_configuration();
        *out = Box::into_raw(Box::new(BblabRun { machine, config }));
        BblabStatus::Ok
    })
}

/// Runs at most `budget` further steps, stopping at a halt. The number of
/// steps taken goes to `*taken` when it is not null.
///
/// # Safety
/// `run` must be a live run handle; `taken` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn bblab_run_advance(run: *mut BblabRun, budget: u64, taken: *mut u64) -> BblabStatus {
    guard(|| {
        non_null!(run);
        let r = &mut *run;
        let n = r.config.run(&r.machine, budget);
        if !taken.is_null() {
            *taken = n;
        }
        BblabStatus::Ok
    })
}

/// One step. Stepping a halted run is an `InvalidArgument` error.
///
/// # Safety
/// `run` must be a live run handle.
#[no_mangle]
pub unsafe extern "C" fn bblab_run_step(run: *mut BblabRun) -> BblabStatus {
    guard(|| {
        non_null!(run);
        let r = &mut *run;
        match r.config.step(&r.machine) {
            Ok(_) => BblabStatus::Ok,
            Err(e) => fail(BblabStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `run` must be a live run handle.
#[no_mangle]
pub unsafe extern "C" fn bblab_run_state(run: *const BblabRun) -> u32 {
    (*run).config.state.0 as u32
}

/// # Safety
/// `run` must be a live run handle.
#[no_mangle]
pub unsafe extern "C" fn bblab_run_head(run: *const BblabRun) -> i64 {
    (*run).config.head
}

/// Steps taken so far, counting a final Halt.
///
/// # Safety
/// `run` must be a live run handle.
#[no_mangle]
pub unsafe extern "C" fn bblab_run_steps(run: *const BblabRun) -> u64 {
    (*run).config.step
}

/// # Safety
/// `run` must be a live run handle.
#[no_mangle]
pub unsafe extern "C" fn bblab_run_is_halted(run: *const BblabRun) -> bool {
    (*run).config.halted
}

/// Copies the symbol indices of cells `lo..=hi` into `buf`, which must hold
/// `hi - lo + 1` bytes.
///
/// # Safety
/// `run` must be a live run handle and `buf` valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn bblab_run_window(
    run: *const BblabRun,
    lo: i64,
    hi: i64,
    buf: *mut u8,
    len: usize,
) -> BblabStatus {
    guard(|| {
        non_null!(run, buf);
        if hi < lo {
            return fail(BblabStatus::InvalidArgument, "window ends before it starts");
        }
        let need = (hi - lo) as u64 + 1;
        if need > len as u64 {
            return fail(BblabStatus::BufferTooSmall, format!("window needs {need} bytes"));
        }
        let cells = (*run).config.window(lo, hi);
        let out = std::slice::from_raw_parts_mut(buf, cells.len());
        for (o, s) in out.iter_mut().zip(cells) {
            *o = s.0;
        }
        BblabStatus::Ok
    })
}

/// # Safety
/// `run` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bblab_run_free(run: *mut BblabRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Scans `2^0 ..= 2^max_n`. Exponents with no ternary digit 2 are written
/// to `buf` (up to `cap` of them) and their number to `*count`. A
/// counterexample (an exponent above 8) yields `Mismatch`.
///
/// # Safety
/// `count` must be writable; `buf` must be valid for `cap` values or null
/// when `cap` is 0.
#[no_mangle]
pub unsafe extern "C" fn bblab_scan(max_n: u64, buf: *mut u64, cap: usize, count: *mut usize) -> BblabStatus {
    guard(|| {
        non_null!(count);
        if cap > 0 && buf.is_null() {
            return fail(BblabStatus::NullPointer, "null buffer");
        }
        let r = scan_erdos(max_n);
        *count = r.digit_two_free.len();
        if cap > 0 {
            let out = std::slice::from_raw_parts_mut(buf, cap);
            for (o, &n) in out.iter_mut().zip(&r.digit_two_free) {
                *o = n;
            }
        }
        if let Some(n) = r.counterexamples().next() {
            return fail(BblabStatus::Mismatch, format!("2^{n} has no ternary digit 2"));
        }
        if r.digit_two_free.len() > cap {
            return fail(BblabStatus::BufferTooSmall, "more exponents than buffer slots");
        }
        BblabStatus::Ok
    })
}

/// Checks that the built-in `m152` simulates `m54` for `steps` steps and
/// writes `f(steps)` to `*f_out` when it is not null.
///
/// # Safety
/// `f_out` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn bblab_verify_simulation(steps: u64, f_out: *mut u64) -> BblabStatus {
    guard(|| {
        let small = bblab::machines::builtin_m54();
        let big = bblab::machines::builtin_m152();
        let result = Encoding::standard(&small, &big)
            .and_then(|enc| verify_simulation(&big, &small, &enc, steps))
            .and_then(|t| time_scale(&t, t.verified_steps().min(steps)));
        match result {
            Ok(f) => {
                if !f_out.is_null() {
                    *f_out = f;
                }
                BblabStatus::Ok
            }
            Err(e @ SimError::Mismatch(_)) => fail(BblabStatus::Mismatch, e.to_string()),
            Err(e) => fail(BblabStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// The step `s_n` at which `m54` holds `2^n` and returns to `rewind`.
#[no_mangle]
pub extern "C" fn bblab_checkpoint_steps(n: u64) -> u64 {
    checkpoint_steps(n)
}

/// Classifies every `n`-state, `k`-symbol machine with a simulation budget.
/// `reduced` selects the tree-normal-form space.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bblab_enumerate(
    n: u32,
    k: u32,
    budget: u64,
    reduced: bool,
    out: *mut BblabEnumerationSummary,
) -> BblabStatus {
    guard(|| {
        non_null!(out);
        let mut o = EnumerationOptions::new(n as usize, k as usize, budget);
        if reduced {
            o.mode = SpaceMode::TreeNormalForm;
        }
        match enumerate(&o) {
            Ok(s) => {
                *out = BblabEnumerationSummary {
                    machines: s.machines,
                    halting: s.halting,
                    non_halting: s.non_halting_total(),
                    undecided: s.undecided.len() as u64,
                    max_steps: s.max_steps.unwrap_or(0),
                    has_max: s.max_steps.is_some(),
                    champion_count: s.champion_count,
                };
                BblabStatus::Ok
            }
            Err(e @ SearchError::SpaceTooLarge { .. }) => fail(BblabStatus::SpaceTooLarge, e.to_string()),
            Err(e @ SearchError::Shape(_)) => fail(BblabStatus::InvalidArgument, e.to_string()),
            Err(e) => fail(BblabStatus::Mismatch, e.to_string()),
        }
    })
}
