//! C ABI over the `pmwct` crate.
//!
//! Objects are opaque handles created and destroyed through this API. Every
//! fallible call returns a [`PmwctStatus`]; on failure a message is kept
//! per thread and can be read with [`pmwct_last_error`]. Strings returned
//! to the caller must be released with [`pmwct_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pmwct::bounds::Horizon;
use pmwct::flowgraph::{build_af_graph_with, eaf_for_instance, graph_stats, EafOptions};
use pmwct::heuristic::{ils, IlsConfig};
use pmwct::instance::{self, Instance, Schedule};
use pmwct::milp::{build_af_model, build_ciqp, build_eaf_model, build_pti, build_ti, emit_lp, emit_mps};
use pmwct::oracle::brute_force_optimal;
use pmwct::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmwctStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Validation = 4,
    Infeasible = 5,
    Unsupported = 6,
    Mapping = 7,
    SizeGuard = 8,
    ExternalSolver = 9,
    Io = 10,
    Utf8 = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmwctGraphKind {
    Af = 0,
    Eaf = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmwctForm {
    Ti = 0,
    Ciqp = 1,
    Pti = 2,
    Af = 3,
    Eaf = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmwctFormat {
    Lp = 0,
    Mps = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PmwctGraphStats {
    pub nodes: usize,
    pub job_arcs: usize,
    pub loss_arcs: usize,
    pub variables: usize,
}

/// Opaque problem instance.
pub struct PmwctInstance(Instance);

/// Opaque schedule.
pub struct PmwctSchedule(Schedule);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PmwctStatus {
    match e {
        Error::Parse { .. } => PmwctStatus::Parse,
        Error::InvalidArgument(_) => PmwctStatus::InvalidArgument,
        Error::Validation(_) => PmwctStatus::Validation,
        Error::InfeasibleHorizon { .. } | Error::InfeasibleWindow { .. } => PmwctStatus::Infeasible,
        Error::UnsupportedFormat(_) => PmwctStatus::Unsupported,
        Error::Mapping(_) => PmwctStatus::Mapping,
        Error::SizeGuard { .. } => PmwctStatus::SizeGuard,
        Error::ExternalSolver(_) => PmwctStatus::ExternalSolver,
        Error::Io(_) => PmwctStatus::Io,
    }
}

struct Fail(PmwctStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(PmwctStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure, and turns panics into `Panic`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PmwctStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PmwctStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PmwctStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(PmwctStatus::Utf8, "string contains a nul byte".into()))
}

/// Message of the last failed call on this thread, or NULL. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pmwct_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pmwct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the text instance format (`n m` header, then `p w` rows).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmwct_instance_parse(text: *const c_char, out: *mut *mut PmwctInstance) -> PmwctStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Fail(PmwctStatus::Utf8, "instance text is not UTF-8".into()))?;
        let inst = instance::parse_instance(text)?;
        write_out(out, Box::into_raw(Box::new(PmwctInstance(inst))), "out")
    })
}

/// Builds an instance from `n` processing times and weights.
///
/// # Safety
/// `p` and `w` must point to `n` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmwct_instance_new(
    m: usize,
    n: usize,
    p: *const u64,
    w: *const u64,
    out: *mut *mut PmwctInstance,
) -> PmwctStatus {
    guard(|| {
        if n > 0 && (p.is_null() || w.is_null()) {
            return Err(null("p or w"));
        }
        let (p, w) = if n == 0 { (&[][..], &[][..]) } else { (std::slice::from_raw_parts(p, n), std::slice::from_raw_parts(w, n)) };
        let inst = Instance::new(m, p.iter().copied().zip(w.iter().copied()))?;
        write_out(out, Box::into_raw(Box::new(PmwctInstance(inst))), "out")
    })
}

/// Random instance from the same generator as the CLI.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmwct_instance_generate(
    n: usize,
    m: usize,
    p_max: u64,
    w_max: u64,
    seed: u64,
    out: *mut *mut PmwctInstance,
) -> PmwctStatus {
    guard(|| {
        let inst = instance::generate_instance(n, m, p_max, w_max, seed)?;
        write_out(out, Box::into_raw(Box::new(PmwctInstance(inst))), "out")
    })
}

/// # Safety
/// `inst` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pmwct_instance_free(inst: *mut PmwctInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of jobs, or 0 for NULL.
///
/// # Safety
/// `inst` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pmwct_instance_jobs(inst: *const PmwctInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.n())
}

/// Number of machines, or 0 for NULL.
///
/// # Safety
/// `inst` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pmwct_instance_machines(inst: *const PmwctInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.m())
}

/// Serializes the instance; free the result with `pmwct_string_free`.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmwct_instance_write(inst: *const PmwctInstance, out: *mut *mut c_char) -> PmwctStatus {
    guard(|| {
        let inst = deref(inst, "inst")?;
        write_out(out, to_c_string(instance::write_instance(&inst.0))?, "out")
    })
}

/// Horizon `T` and lower bound `T'` on the last completion.
///
/// # Safety
/// `inst` must be a live handle; `t` and `t_prime` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmwct_horizon(inst: *const PmwctInstance, t: *mut u64, t_prime: *mut u64) -> PmwctStatus {
    guard(|| {
        let h = Horizon::new(&deref(inst, "inst")?.0);
        write_out(t, h.t, "t")?;
        write_out(t_prime, h.t_prime, "t_prime")
    })
}

/// Size of the AF or EAF graph (all EAF reductions on).
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmwct_graph_stats(
    inst: *const PmwctInstance,
    kind: PmwctGraphKind,
    strict_figure: bool,
    out: *mut PmwctGraphStats,
) -> PmwctStatus {
    guard(|| {
        let inst = &deref(inst, "inst")?.0;
        let g = match kind {
            PmwctGraphKind::Af => build_af_graph_with(inst, Horizon::new(inst).t, strict_figure)?,
            PmwctGraphKind::Eaf => {
                eaf_for_instance(inst, &EafOptions { strict_figure, ..EafOptions::default() })?.0
            }
        };
        let s = graph_stats(&g);
        let stats = PmwctGraphStats {
            nodes: s.node_count,
            job_arcs: s.job_arc_count,
            loss_arcs: s.loss_arc_count,
            variables: s.variable_count,
        };
        write_out(out, stats, "out")
    })
}

/// Writes a MILP formulation as LP or MPS text; free with
/// `pmwct_string_free`.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmwct_model_emit(
    inst: *const PmwctInstance,
    form: PmwctForm,
    format: PmwctFormat,
    out: *mut *mut c_char,
) -> PmwctStatus {
    guard(|| {
        let inst = &deref(inst, "inst")?.0;
        let t = Horizon::new(inst).t;
        let model = match form {
            PmwctForm::Ti => build_ti(inst, t),
            PmwctForm::Ciqp => build_ciqp(inst),
            PmwctForm::Pti => build_pti(inst, t),
            PmwctForm::Af => build_af_model(&build_af_graph_with(inst, t, false)?, inst),
            PmwctForm::Eaf => {
                let (g, types) = eaf_for_instance(inst, &EafOptions::default())?;
                build_eaf_model(&g, &types)
            }
        };
        let text = match format {
            PmwctFormat::Lp => emit_lp(&model),
            PmwctFormat::Mps => emit_mps(&model)?,
        };
        write_out(out, to_c_string(text)?, "out")
    })
}

unsafe fn emit_schedule(
    sched: Schedule,
    value: u64,
    out_sched: *mut *mut PmwctSchedule,
    out_value: *mut u64,
) -> Result<(), Fail> {
    if out_sched.is_null() {
        return Err(null("out_sched"));
    }
    if !out_value.is_null() {
        out_value.write(value);
    }
    out_sched.write(Box::into_raw(Box::new(PmwctSchedule(sched))));
    Ok(())
}

/// Exact optimum by enumeration; fails with `SizeGuard` on large inputs.
/// `out_value` may be NULL.
///
/// # Safety
/// `inst` must be a live handle; `out_sched` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmwct_solve_exact(
    inst: *const PmwctInstance,
    out_sched: *mut *mut PmwctSchedule,
    out_value: *mut u64,
) -> PmwctStatus {
    guard(|| {
        let r = brute_force_optimal(&deref(inst, "inst")?.0, false)?;
        emit_schedule(r.schedule, r.optimum, out_sched, out_value)
    })
}

/// Iterated local search with `iterations` iterations (deterministic for a
/// given seed). `out_value` may be NULL.
///
/// # Safety
/// `inst` must be a live handle; `out_sched` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmwct_solve_ils(
    inst: *const PmwctInstance,
    seed: u64,
    iterations: u64,
    out_sched: *mut *mut PmwctSchedule,
    out_value: *mut u64,
) -> PmwctStatus {
    guard(|| {
        let cfg = IlsConfig { seed, max_iters: iterations, ..IlsConfig::default() };
        let r = ils(&deref(inst, "inst")?.0, &cfg)?;
        emit_schedule(r.schedule, r.value, out_sched, out_value)
    })
}

/// # Safety
/// `sched` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pmwct_schedule_free(sched: *mut PmwctSchedule) {
    if !sched.is_null() {
        drop(Box::from_raw(sched));
    }
}

/// Number of machines in the schedule, or 0 for NULL.
///
/// # Safety
/// `sched` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pmwct_schedule_machines(sched: *const PmwctSchedule) -> usize {
    sched.as_ref().map_or(0, |s| s.0.machines.len())
}

/// Copies the job ids of machine `k` (0-based) into `buf`. `len` receives
/// the machine's length; pass `cap = 0` to query it.
///
/// # Safety
/// `sched` must be a live handle; `buf` must hold `cap` values; `len` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn pmwct_schedule_jobs(
    sched: *const PmwctSchedule,
    k: usize,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> PmwctStatus {
    guard(|| {
        let s = &deref(sched, "sched")?.0;
        let seq = s
            .machines
            .get(k)
            .ok_or_else(|| Fail(PmwctStatus::InvalidArgument, format!("machine {k} out of range")))?;
        write_out(len, seq.len(), "len")?;
        if cap == 0 {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        if cap < seq.len() {
            return Err(Fail(PmwctStatus::InvalidArgument, format!("buffer holds {cap}, machine has {}", seq.len())));
        }
        ptr::copy_nonoverlapping(seq.as_ptr(), buf, seq.len());
        Ok(())
    })
}

/// Total weighted completion time of `sched` for `inst`.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmwct_schedule_value(
    inst: *const PmwctInstance,
    sched: *const PmwctSchedule,
    out: *mut u64,
) -> PmwctStatus {
    guard(|| {
        let v = instance::evaluate_schedule(&deref(inst, "inst")?.0, &deref(sched, "sched")?.0)?;
        write_out(out, v, "out")
    })
}

/// Schedule file text (`objective V`, then `machine k: ...` lines).
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmwct_schedule_write(
    inst: *const PmwctInstance,
    sched: *const PmwctSchedule,
    out: *mut *mut c_char,
) -> PmwctStatus {
    guard(|| {
        let text = instance::write_schedule(&deref(inst, "inst")?.0, &deref(sched, "sched")?.0)?;
        write_out(out, to_c_string(text)?, "out")
    })
}
