//! C ABI over `qsi-core`.
//!
//! States are opaque handles created from a JSON state document and released
//! with [`qsi_state_free`]. Every fallible call returns a [`QsiStatus`]; on
//! failure [`qsi_last_error_message`] describes the cause for the calling
//! thread. Label lists are comma-separated C strings.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clap::Parser;

use qsi_core::cli::Cli;
use qsi_core::costs::{transfer_costs, ChannelKind, PartitionSpec};
use qsi_core::document::parse_state_document;
use qsi_core::entropy::{qcmi, qmi, von_neumann};
use qsi_core::error::QsiError;
use qsi_core::hilbert::MultipartiteState;
use qsi_core::recovery::{recovery_report, RecoverySplit};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QsiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// The state document is unreadable, violates the schema or does not
    /// describe a valid state.
    InvalidDocument = 3,
    /// Unknown labels, bad partitions or out-of-range parameters.
    InvalidArgument = 4,
    /// Command-line arguments passed to `qsi_run` did not parse.
    Usage = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QsiChannel {
    Quantum = 0,
    Classical = 1,
}

/// Channel rate and ebit rate of one transfer.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QsiRates {
    pub channel_rate: f64,
    pub ebit_rate: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QsiRecovery {
    pub qcmi: f64,
    pub achieved_fidelity: f64,
    pub bound: f64,
    pub trace_deficiency: f64,
    pub bound_satisfied: bool,
    pub trace_deficiency_flagged: bool,
}

/// Opaque state handle.
pub struct QsiState {
    state: MultipartiteState,
    partition: PartitionSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &QsiError) -> QsiStatus {
    match err {
        QsiError::Document(_) => QsiStatus::InvalidDocument,
        _ => QsiStatus::InvalidArgument,
    }
}

struct Failure(QsiStatus, String);

impl From<QsiError> for Failure {
    fn from(e: QsiError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QsiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_last_error();
            QsiStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            QsiStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(QsiStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(QsiStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn labels_arg(p: *const c_char, name: &str) -> Result<Vec<String>, Failure> {
    Ok(str_arg(p, name)?
        .split(',')
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect())
}

unsafe fn state_arg<'a>(p: *const QsiState) -> Result<&'a QsiState, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(QsiStatus::NullPointer, "state is null".to_string()))
}

fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    unsafe { p.as_mut() }.ok_or_else(|| Failure(QsiStatus::NullPointer, format!("{name} is null")))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn qsi_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qsi_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a JSON state document. `seed` is used by random kinds that do not
/// set one.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qsi_state_from_json(json: *const c_char, seed: u64, out: *mut *mut QsiState) -> QsiStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let text = str_arg(json, "json")?;
        let (state, partition) = parse_state_document(text, seed)?;
        *out = Box::into_raw(Box::new(QsiState { state, partition }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `state` must come from [`qsi_state_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qsi_state_free(state: *mut QsiState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Total Hilbert-space dimension, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qsi_state_dim(state: *const QsiState) -> usize {
    state.as_ref().map_or(0, |s| s.state.dim())
}

/// Von Neumann entropy in bits of the subsystems in `labels`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qsi_entropy(state: *const QsiState, labels: *const c_char, out: *mut f64) -> QsiStatus {
    guard(|| {
        let s = state_arg(state)?;
        let x = labels_arg(labels, "labels")?;
        *out_arg(out, "out")? = von_neumann(&s.state, &x)?.0;
        Ok(())
    })
}

/// Mutual information `I(x; y)` in bits.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qsi_qmi(
    state: *const QsiState,
    x: *const c_char,
    y: *const c_char,
    out: *mut f64,
) -> QsiStatus {
    guard(|| {
        let s = state_arg(state)?;
        let (x, y) = (labels_arg(x, "x")?, labels_arg(y, "y")?);
        *out_arg(out, "out")? = qmi(&s.state, &x, &y)?.0;
        Ok(())
    })
}

/// Conditional mutual information `I(x; y | z)` in bits.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qsi_qcmi(
    state: *const QsiState,
    x: *const c_char,
    y: *const c_char,
    z: *const c_char,
    out: *mut f64,
) -> QsiStatus {
    guard(|| {
        let s = state_arg(state)?;
        let (x, y, z) = (labels_arg(x, "x")?, labels_arg(y, "y")?, labels_arg(z, "z")?);
        *out_arg(out, "out")? = qcmi(&s.state, &x, &y, &z)?.0;
        Ok(())
    })
}

/// Optimal rates when Alice uses her first `i` and Bob his first `j`
/// side-information systems.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsi_costs(
    state: *const QsiState,
    i: usize,
    j: usize,
    channel: QsiChannel,
    out: *mut QsiRates,
) -> QsiStatus {
    guard(|| {
        let s = state_arg(state)?;
        let kind = match channel {
            QsiChannel::Quantum => ChannelKind::Quantum,
            QsiChannel::Classical => ChannelKind::Classical,
        };
        let usage = s.partition.usage(i, j)?;
        let v = transfer_costs(&s.state, &s.partition, usage, kind)?;
        *out_arg(out, "out")? = QsiRates {
            channel_rate: v.channel_rate,
            ebit_rate: v.ebit_rate,
        };
        Ok(())
    })
}

/// Petz recovery of `c` from `s1` onto `c, s1, s2`. Subsystems outside the
/// three lists are traced out first.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qsi_recovery(
    state: *const QsiState,
    c: *const c_char,
    s1: *const c_char,
    s2: *const c_char,
    out: *mut QsiRecovery,
) -> QsiStatus {
    guard(|| {
        let s = state_arg(state)?;
        let (c, s1, s2) = (labels_arg(c, "c")?, labels_arg(s1, "s1")?, labels_arg(s2, "s2")?);
        let keep: Vec<&String> = c.iter().chain(&s1).chain(&s2).collect();
        let reduced = s.state.partial_trace(&keep)?;
        let rep = recovery_report(&reduced, &RecoverySplit::new(&c, &s1, &s2))?;
        *out_arg(out, "out")? = QsiRecovery {
            qcmi: rep.qcmi,
            achieved_fidelity: rep.achieved_fidelity,
            bound: rep.bound,
            trace_deficiency: rep.trace_deficiency,
            bound_satisfied: rep.bound_satisfied,
            trace_deficiency_flagged: rep.flagged,
        };
        Ok(())
    })
}

/// Runs a `qsi` command line (without the program name) and stores the JSON
/// report in `out_json`, to be released with [`qsi_string_free`].
/// `out_pass` receives 1 when every identity check passed, else 0.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qsi_run(
    argv: *const *const c_char,
    argc: usize,
    out_json: *mut *mut c_char,
    out_pass: *mut c_int,
) -> QsiStatus {
    guard(|| {
        let out_json = out_arg(out_json, "out_json")?;
        *out_json = ptr::null_mut();
        let out_pass = out_arg(out_pass, "out_pass")?;
        *out_pass = 0;
        if argv.is_null() && argc > 0 {
            return Err(Failure(QsiStatus::NullPointer, "argv is null".to_string()));
        }
        let mut args = Vec::with_capacity(argc);
        for k in 0..argc {
            args.push(str_arg(*argv.add(k), "argv element")?.to_string());
        }
        let cli = Cli::try_parse_from(std::iter::once("qsi".to_string()).chain(args.iter().cloned()))
            .map_err(|e| Failure(QsiStatus::Usage, e.render().to_string()))?;
        let report = cli.execute(args)?;
        *out_pass = c_int::from(report.pass);
        *out_json = CString::new(report.to_json()).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qsi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
