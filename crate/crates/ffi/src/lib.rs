//! C ABI for `gatesearch`.
//!
//! Objects cross the boundary as opaque handles created by `gs_*_new`/`gs_build_*`
//! and released by the matching `gs_*_free`. Every fallible call returns a
//! [`GsStatus`]; on failure the message is kept per thread and can be read
//! with [`gs_last_error`]. Strings returned to the caller are owned by the
//! caller and released with [`gs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufWriter;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gatesearch::circuit::write_jsonl;
use gatesearch::constructions::{boost_to_one, build_c1, build_recursive, build_schedule, BuildMode, RecursionSchedule, SearchAlgorithm};
use gatesearch::estimator::{estimate_recursive, EstimateReport};
use gatesearch::numerics::{compute_w, EvalCache, Real};
use gatesearch::oracle::{make_unique_database, Database};
use gatesearch::simulator::{good_probability, run, SimConfig};
use gatesearch::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsStatus {
    Ok = 0,
    Domain = 1,
    Config = 2,
    Validation = 3,
    Index = 4,
    Resource = 5,
    Parse = 6,
    Io = 7,
    NullPointer = 8,
    /// A Rust panic was caught at the boundary; the handle arguments are unchanged.
    Panic = 9,
}

impl From<&Error> for GsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => GsStatus::Domain,
            Error::Config(_) => GsStatus::Config,
            Error::Validation(_) => GsStatus::Validation,
            Error::Index(_) => GsStatus::Index,
            Error::Resource(_) => GsStatus::Resource,
            Error::Parse(_) => GsStatus::Parse,
            Error::Io(_) => GsStatus::Io,
        }
    }
}

/// A recursion schedule.
pub struct GsSchedule(RecursionSchedule);

/// A database with its marked items.
pub struct GsDatabase(Database);

/// A built search algorithm, with or without its circuit.
pub struct GsAlgorithm(SearchAlgorithm);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, converting errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), (GsStatus, String)>) -> GsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned());
            set_error(format!("panic: {}", msg.unwrap_or_else(|| "unknown".into())));
            GsStatus::Panic
        }
    }
}

fn lib<T>(r: gatesearch::Result<T>) -> Result<T, (GsStatus, String)> {
    r.map_err(|e| (GsStatus::from(&e), e.to_string()))
}

fn null(what: &str) -> (GsStatus, String) {
    (GsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (GsStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (GsStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (GsStatus::Parse, format!("{what} is not UTF-8")))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or null if none failed.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn gs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Rounds needed to amplify `2^-n` to exactly `1/k`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gs_compute_w(n: u32, k: u64, out: *mut u64) -> GsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let k = i64::try_from(k).map_err(|_| (GsStatus::Domain, format!("k = {k} out of range")))?;
        let w = lib(compute_w(&Real::pow2_neg(n), &Real::ratio(1, k)))?;
        *out = w.to_u64().ok_or_else(|| (GsStatus::Resource, format!("w = {w} does not fit in 64 bits")))?;
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gs_schedule_new(n: u32, k: u64, r: u32, relaxed: bool, out: *mut *mut GsSchedule) -> GsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let s = lib(build_schedule(n, k, r, relaxed))?;
        *out = Box::into_raw(Box::new(GsSchedule(s)));
        Ok(())
    })
}

/// Number of levels; 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live schedule handle.
#[no_mangle]
pub unsafe extern "C" fn gs_schedule_len(s: *const GsSchedule) -> usize {
    s.as_ref().map_or(0, |s| s.0.n_seq.len())
}

/// Address width of level `i` (0-based).
///
/// # Safety
/// `s` must be a live schedule handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gs_schedule_width(s: *const GsSchedule, i: usize, out: *mut u32) -> GsStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("schedule"))?;
        let out = out_ptr(out, "out")?;
        *out = *s.0.n_seq.get(i).ok_or_else(|| (GsStatus::Index, format!("level {i} of {}", s.0.n_seq.len())))?;
        Ok(())
    })
}

/// Whether every hypothesis of the schedule holds.
///
/// # Safety
/// `s` must be null or a live schedule handle.
#[no_mangle]
pub unsafe extern "C" fn gs_schedule_preconditions_hold(s: *const GsSchedule) -> bool {
    s.as_ref().is_some_and(|s| s.0.preconditions_hold())
}

/// # Safety
/// `s` must be null or a handle from [`gs_schedule_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gs_schedule_free(s: *mut GsSchedule) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// A database of `2^n` items with the single marked item `t`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gs_database_unique(n: u32, t: u64, out: *mut *mut GsDatabase) -> GsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(GsDatabase(lib(make_unique_database(n, t))?)));
        Ok(())
    })
}

/// A database from a hex string of exactly `2^n / 4` digits (`n ≥ 2`).
///
/// # Safety
/// `hex` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gs_database_from_hex(hex: *const c_char, n: u32, out: *mut *mut GsDatabase) -> GsStatus {
    guard(|| {
        let hex = str_arg(hex, "hex")?;
        let out = out_ptr(out, "out")?;
        *out = Box::into_raw(Box::new(GsDatabase(lib(Database::from_hex(hex, Some(n)))?)));
        Ok(())
    })
}

/// # Safety
/// `db` must be null or a database handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gs_database_free(db: *mut GsDatabase) {
    if !db.is_null() {
        drop(Box::from_raw(db));
    }
}

fn mode(count_only: bool) -> BuildMode {
    if count_only {
        BuildMode::CountOnly
    } else {
        BuildMode::Circuit
    }
}

/// First level: `H^n` amplified to exactly `1/k`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gs_build_c1(n: u32, k: u64, count_only: bool, out: *mut *mut GsAlgorithm) -> GsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let k = i64::try_from(k).map_err(|_| (GsStatus::Domain, format!("k = {k} out of range")))?;
        let alg = lib(build_c1(n, &Real::ratio(k, 1), mode(count_only), &mut EvalCache::default()))?;
        *out = Box::into_raw(Box::new(GsAlgorithm(alg)));
        Ok(())
    })
}

/// The recursion over `len` hand-picked widths, optionally boosted to certainty.
///
/// # Safety
/// `widths` must point to `len` readable values and `out` be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gs_build_pipeline(
    widths: *const u32,
    len: usize,
    k: u64,
    boost: bool,
    count_only: bool,
    out: *mut *mut GsAlgorithm,
) -> GsStatus {
    guard(|| {
        if widths.is_null() {
            return Err(null("widths"));
        }
        let out = out_ptr(out, "out")?;
        let seq = std::slice::from_raw_parts(widths, len).to_vec();
        let s = lib(RecursionSchedule::with_widths(seq, k))?;
        let mut cache = EvalCache::default();
        let p = lib(build_recursive(&s, false, mode(count_only), &mut cache))?;
        let alg = match boost {
            true => lib(boost_to_one(p.last(), &Real::ratio(k as i64, 1), &mut cache))?,
            false => p.last().clone(),
        };
        *out = Box::into_raw(Box::new(GsAlgorithm(alg)));
        Ok(())
    })
}

/// # Safety
/// `alg` must be null or an algorithm handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gs_algorithm_free(alg: *mut GsAlgorithm) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Exact query and gate counts as decimal strings; free both with [`gs_string_free`].
///
/// # Safety
/// `alg` must be a live handle; `queries` and `gates` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gs_algorithm_counts(alg: *const GsAlgorithm, queries: *mut *mut c_char, gates: *mut *mut c_char) -> GsStatus {
    guard(|| {
        let alg = alg.as_ref().ok_or_else(|| null("algorithm"))?;
        let q = out_ptr(queries, "queries")?;
        let g = out_ptr(gates, "gates")?;
        *q = to_c_string(alg.0.queries().to_string());
        *g = to_c_string(alg.0.gates().to_string());
        Ok(())
    })
}

/// The success probability the construction guarantees, as a 40-digit decimal.
///
/// # Safety
/// `alg` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gs_algorithm_a_known(alg: *const GsAlgorithm, out: *mut *mut c_char) -> GsStatus {
    guard(|| {
        let alg = alg.as_ref().ok_or_else(|| null("algorithm"))?;
        *out_ptr(out, "out")? = to_c_string(alg.0.a_known().to_decimal(40));
        Ok(())
    })
}

/// Total wires: address plus one flag per amplification.
///
/// # Safety
/// `alg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gs_algorithm_wires(alg: *const GsAlgorithm) -> u64 {
    alg.as_ref().map_or(0, |a| a.0.total_wires())
}

/// Runs the circuit on `db` and writes the probability of measuring a good state.
///
/// # Safety
/// `alg` and `db` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gs_algorithm_simulate(
    alg: *const GsAlgorithm,
    db: *const GsDatabase,
    max_wires: usize,
    out: *mut f64,
) -> GsStatus {
    guard(|| {
        let alg = alg.as_ref().ok_or_else(|| null("algorithm"))?;
        let db = db.as_ref().ok_or_else(|| null("database"))?;
        let out = out_ptr(out, "out")?;
        let circuit = lib(alg.0.require_circuit())?;
        let state = lib(run(circuit, &db.0, &SimConfig { max_wires }))?;
        *out = lib(good_probability(&state, &alg.0.good_set(&db.0)))?;
        Ok(())
    })
}

/// Writes the circuit as line-oriented JSON with its extension record.
///
/// # Safety
/// `alg` must be a live handle and `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn gs_algorithm_export(alg: *const GsAlgorithm, path: *const c_char) -> GsStatus {
    guard(|| {
        let alg = alg.as_ref().ok_or_else(|| null("algorithm"))?;
        let path = str_arg(path, "path")?;
        let circuit = lib(alg.0.require_circuit())?;
        let file = File::create(path).map_err(|e| (GsStatus::Io, format!("{path}: {e}")))?;
        lib(write_jsonl(circuit, Some(&alg.0.extension()), BufWriter::new(file)))
    })
}

/// Count-only estimate of the recursion for `N = 2^n` as a JSON report.
///
/// # Safety
/// `out` must be valid for writes; free the result with [`gs_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gs_estimate_json(n: u32, k: u64, r: u32, boost: bool, relaxed: bool, out: *mut *mut c_char) -> GsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let p = lib(estimate_recursive(n, k, r, relaxed, boost, &mut EvalCache::default()))?;
        *out = to_c_string(EstimateReport::from_pipeline(&p).to_json());
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_set_the_message() {
        let mut s = ptr::null_mut();
        let st = unsafe { gs_schedule_new(1024, 6, 2, false, &mut s) };
        assert_eq!(st, GsStatus::Config);
        assert!(s.is_null());
        let msg = unsafe { CStr::from_ptr(gs_last_error()) }.to_str().unwrap();
        assert!(msg.contains("power of 2"), "{msg}");
        assert_eq!(unsafe { gs_compute_w(4, 4, ptr::null_mut()) }, GsStatus::NullPointer);
    }
}
