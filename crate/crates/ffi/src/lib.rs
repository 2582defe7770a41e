//! C ABI over `floquet-ent`.
//!
//! States and Floquet operators are opaque heap handles created by `fe_*_new`-style
//! constructors and released with the matching `fe_*_free`. Every fallible function returns
//! an [`FeStatus`]; on failure `fe_last_error_message` describes the error for the calling
//! thread. Sites are 1-based. Complex amplitudes cross the boundary as interleaved
//! `(re, im)` double pairs.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use floquet_ent::chain::{fidelity, make_ghz, make_polarized_state, make_psi_o, Axis, Direction, Sign};
use floquet_ent::entanglement::{average_entanglement_entropy, geometric_measure, GeometricOptions};
use floquet_ent::floquet::{Boundary, Floquet, FloquetSpec, Model};
use floquet_ent::qfi::{maximize_qfi, producibility_bound, QfiOptions};
use floquet_ent::{Complex64, Error, StateVector};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeStatus {
    Ok = 0,
    NullPointer = 1,
    Size = 2,
    Index = 3,
    Argument = 4,
    Validation = 5,
    Resource = 6,
    NoSpacing = 7,
    Config = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeModel {
    U0 = 0,
    Ux = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeBoundary {
    Open = 0,
    Closed = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeDirection {
    X = 0,
    Y = 1,
    Z = 2,
}

/// A normalized chain state.
pub struct FeState {
    inner: StateVector,
}

/// A one-period evolution operator.
pub struct FeFloquet {
    inner: Floquet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(error: &Error) -> FeStatus {
    match error {
        Error::Size(_) => FeStatus::Size,
        Error::Index { .. } => FeStatus::Index,
        Error::Argument(_) => FeStatus::Argument,
        Error::Validation(_) => FeStatus::Validation,
        Error::Resource(_) => FeStatus::Resource,
        Error::NoSpacing { .. } => FeStatus::NoSpacing,
        Error::Config { .. } => FeStatus::Config,
        Error::Io { .. } => FeStatus::Io,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, translating errors and panics into a status plus the thread's last message.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FeStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FeStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(name))) => {
            set_error(format!("null pointer passed as `{name}`"));
            FeStatus::NullPointer
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            FeStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(name))
}

unsafe fn write_out<T>(p: *mut T, name: &'static str, value: T) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    p.write(value);
    Ok(())
}

fn direction(d: FeDirection) -> Direction {
    match d {
        FeDirection::X => Direction::X,
        FeDirection::Y => Direction::Y,
        FeDirection::Z => Direction::Z,
    }
}

fn boxed_state(state: StateVector) -> *mut FeState {
    Box::into_raw(Box::new(FeState { inner: state }))
}

/// Every site in the `direction` eigenstate with eigenvalue `sign` (`+1` or `-1`).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fe_state_polarized(
    num_sites: usize,
    dir: FeDirection,
    sign: i32,
    out: *mut *mut FeState,
) -> FeStatus {
    guard(|| {
        let sign = match sign {
            1 => Sign::Plus,
            -1 => Sign::Minus,
            s => return Err(Error::Argument(format!("sign must be +1 or -1, got {s}")).into()),
        };
        let state = make_polarized_state(num_sites, Axis::new(direction(dir), sign))?;
        write_out(out, "out", boxed_state(state))
    })
}

/// `(|α+…⟩ + |α−…⟩)/√2`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fe_state_ghz(num_sites: usize, dir: FeDirection, out: *mut *mut FeState) -> FeStatus {
    guard(|| {
        let state = make_ghz(num_sites, direction(dir))?;
        write_out(out, "out", boxed_state(state))
    })
}

/// Product of z-basis GHZ states on the two chain halves.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fe_state_psi_o(num_sites: usize, out: *mut *mut FeState) -> FeStatus {
    guard(|| {
        let state = make_psi_o(num_sites)?;
        write_out(out, "out", boxed_state(state))
    })
}

/// Wraps `2·2^L` interleaved doubles; the state must already be normalized.
///
/// # Safety
/// `re_im` must point to `len` readable doubles and `out` to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fe_state_from_amplitudes(
    num_sites: usize,
    re_im: *const f64,
    len: usize,
    out: *mut *mut FeState,
) -> FeStatus {
    guard(|| {
        if re_im.is_null() {
            return Err(Failure::Null("re_im"));
        }
        if !len.is_multiple_of(2) {
            return Err(Error::Argument(format!("odd number of doubles ({len})")).into());
        }
        let data = slice::from_raw_parts(re_im, len);
        let amps = data.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
        let state = StateVector::from_amplitudes(num_sites, amps)?;
        write_out(out, "out", boxed_state(state))
    })
}

/// Releases a state; null is ignored.
///
/// # Safety
/// `state` must be null or a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fe_state_free(state: *mut FeState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of sites, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fe_state_num_sites(state: *const FeState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.num_sites())
}

/// Copies the amplitudes as interleaved `(re, im)` pairs; `len` must be at least `2·2^L`.
///
/// # Safety
/// `state` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fe_state_amplitudes(state: *const FeState, out: *mut f64, len: usize) -> FeStatus {
    guard(|| {
        let s = deref(state, "state")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let amps = s.inner.amplitudes();
        if len < 2 * amps.len() {
            return Err(Error::Argument(format!("buffer holds {len} doubles, need {}", 2 * amps.len())).into());
        }
        let buf = slice::from_raw_parts_mut(out, 2 * amps.len());
        for (c, a) in buf.chunks_exact_mut(2).zip(amps) {
            c[0] = a.re;
            c[1] = a.im;
        }
        Ok(())
    })
}

/// `|⟨a|b⟩|²`.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fe_state_fidelity(a: *const FeState, b: *const FeState, out: *mut f64) -> FeStatus {
    guard(|| {
        let f = fidelity(&deref(a, "a")?.inner, &deref(b, "b")?.inner)?;
        write_out(out, "out", f)
    })
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fe_floquet_new(
    model: FeModel,
    num_sites: usize,
    boundary: FeBoundary,
    out: *mut *mut FeFloquet,
) -> FeStatus {
    guard(|| {
        let model = match model {
            FeModel::U0 => Model::U0,
            FeModel::Ux => Model::Ux,
        };
        let boundary = match boundary {
            FeBoundary::Open => Boundary::Open,
            FeBoundary::Closed => Boundary::Closed,
        };
        let floquet = Floquet::new(FloquetSpec::new(model, num_sites, boundary)?)?;
        write_out(out, "out", Box::into_raw(Box::new(FeFloquet { inner: floquet })))
    })
}

/// Releases an operator; null is ignored.
///
/// # Safety
/// `floquet` must be null or a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fe_floquet_free(floquet: *mut FeFloquet) {
    if !floquet.is_null() {
        drop(Box::from_raw(floquet));
    }
}

/// Applies `periods` periods to `state`, returning a new state handle.
///
/// # Safety
/// `floquet` and `state` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fe_floquet_apply(
    floquet: *const FeFloquet,
    state: *const FeState,
    periods: usize,
    out: *mut *mut FeState,
) -> FeStatus {
    guard(|| {
        let next = deref(floquet, "floquet")?.inner.evolve(&deref(state, "state")?.inner, periods)?;
        write_out(out, "out", boxed_state(next))
    })
}

/// Mean von Neumann entropy (bits) over all size-`l` subsets.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fe_average_entanglement_entropy(state: *const FeState, l: usize, out: *mut f64) -> FeStatus {
    guard(|| {
        let entry = average_entanglement_entropy(&deref(state, "state")?.inner, l)?;
        write_out(out, "out", entry.entropy)
    })
}

/// Geometric measure; either output pointer may be null.
///
/// # Safety
/// `state` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn fe_geometric_measure(
    state: *const FeState,
    restarts: usize,
    seed: u64,
    lambda: *mut f64,
    e_g: *mut f64,
) -> FeStatus {
    guard(|| {
        let opts = GeometricOptions {
            restarts,
            seed,
            ..GeometricOptions::default()
        };
        let r = geometric_measure(&deref(state, "state")?.inner, &opts)?;
        if !lambda.is_null() {
            lambda.write(r.lambda);
        }
        if !e_g.is_null() {
            e_g.write(r.e_g);
        }
        Ok(())
    })
}

/// Maximized QFI over local directions and the certified entanglement depth; either output
/// pointer may be null.
///
/// # Safety
/// `state` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn fe_maximize_qfi(
    state: *const FeState,
    restarts: usize,
    seed: u64,
    f_q: *mut f64,
    depth: *mut usize,
) -> FeStatus {
    guard(|| {
        let opts = QfiOptions {
            restarts,
            seed,
            ..QfiOptions::default()
        };
        let r = maximize_qfi(&deref(state, "state")?.inner, &opts)?;
        if !f_q.is_null() {
            f_q.write(r.f_q);
        }
        if !depth.is_null() {
            depth.write(r.depth);
        }
        Ok(())
    })
}

/// Largest QFI a `k`-producible state of `num_sites` sites can reach.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fe_producibility_bound(num_sites: usize, k: usize, out: *mut usize) -> FeStatus {
    guard(|| {
        let kappa = producibility_bound(num_sites, k)?;
        write_out(out, "out", kappa)
    })
}

/// Message for the most recent failure on this thread, or null. Valid until the next call
/// into this library from the same thread.
#[no_mangle]
pub extern "C" fn fe_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fe_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
