//! C ABI for `jcm-core`.
//!
//! Objects are opaque handles created by `jcm_*_new`/producer functions and
//! released with the matching `jcm_*_free`. Every function returns a
//! [`JcmStatus`]; on failure a message is available from
//! [`jcm_last_error_message`] on the same thread. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use jcm_core::catlab::{count_components, diagnose_cat, dip_offset};
use jcm_core::dynamics::{atom_density, field_rank2, rabi_frequency, JointState, Model, ModelParams, RabiMode};
use jcm_core::observables::{atomic_inversion_with, entropy, pnd, q_grid, PhaseGrid, PhaseWindow};
use jcm_core::{Error, Tau, C64};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JcmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    TailTooHeavy = 3,
    BufferTooSmall = 4,
    Parse = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JcmMode {
    Exact = 0,
    Quadratic = 1,
}

/// Modes arrive as plain integers so that out-of-range values are an error, not UB.
fn mode_of(mode: u32) -> Result<RabiMode, Fail> {
    match mode {
        m if m == JcmMode::Exact as u32 => Ok(RabiMode::Exact),
        m if m == JcmMode::Quadratic as u32 => Ok(RabiMode::Quadratic),
        _ => Err(Fail(JcmStatus::InvalidArgument, format!("unknown mode {mode}"))),
    }
}

/// Reduced atomic density matrix in the basis `(|g>, |e>)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct JcmAtomDensity {
    pub rho11: f64,
    pub rho22: f64,
    pub rho12_re: f64,
    pub rho12_im: f64,
}

/// Field diagnostics at `pi/4 + delta_r`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct JcmCatDiagnostics {
    pub tau: f64,
    pub entropy: f64,
    pub fidelity_ground: f64,
    pub fidelity_excited: f64,
    pub field_fidelity: f64,
    pub cat_norm_deviation: f64,
}

pub struct JcmModel(Model);
pub struct JcmJointState(JointState);
pub struct JcmPhaseGrid(PhaseGrid);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> JcmStatus {
    match err {
        Error::TailTooHeavy { .. } => JcmStatus::TailTooHeavy,
        Error::Parse { .. } | Error::Json(_) => JcmStatus::Parse,
        _ => JcmStatus::InvalidArgument,
    }
}

struct Fail(JcmStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(JcmStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> JcmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => JcmStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            JcmStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn fill(buf: *mut f64, len: usize, values: &[f64]) -> Result<(), Fail> {
    if buf.is_null() {
        return Err(null("buffer"));
    }
    if len < values.len() {
        return Err(Fail(JcmStatus::BufferTooSmall, format!("buffer holds {len}, need {}", values.len())));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Copies the last error message on this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length excluding the NUL.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn jcm_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// `sqrt((n+1)...(n+k))` or, for `k = 4` in quadratic mode, `n^2 + 5n + 5`;
/// `mode` is a [`JcmMode`] value.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jcm_rabi_frequency(n: usize, k: u32, mode: u32, out: *mut f64) -> JcmStatus {
    guard(|| put(out, rabi_frequency(n, k, mode_of(mode)?)?, "out"))
}

/// Dip offset `delta_r = r pi / (16 nbar)` and the time `pi/4 + delta_r`.
///
/// # Safety
/// `delta` and `tau` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jcm_dip_offset(r: i64, nbar: f64, delta: *mut f64, tau: *mut f64) -> JcmStatus {
    guard(|| {
        let d = dip_offset(r, nbar)?;
        put(delta, d.delta, "delta")?;
        put(tau, d.tau().value(), "tau")
    })
}

/// Builds a model for the initial state `|e> (x) |alpha>`; `mode` is a [`JcmMode`] value.
///
/// # Safety
/// `out` must be valid for writes. The handle must be released with [`jcm_model_free`].
#[no_mangle]
pub unsafe extern "C" fn jcm_model_new(
    k: u32,
    alpha_re: f64,
    alpha_im: f64,
    cutoff: usize,
    mode: u32,
    tail_tol: f64,
    out: *mut *mut JcmModel,
) -> JcmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = ModelParams::new(k, C64::new(alpha_re, alpha_im), cutoff, mode_of(mode)?, tail_tol)?;
        let model = Model::new(params)?;
        put(out, boxed(JcmModel(model)), "out")
    })
}

/// # Safety
/// `model` must be null or a handle from [`jcm_model_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jcm_model_free(model: *mut JcmModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Fock cutoff `N`; buffers for per-photon-number data need `N + 1` entries.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jcm_model_cutoff(model: *const JcmModel, out: *mut usize) -> JcmStatus {
    guard(|| put(out, get(model, "model")?.0.params().cutoff, "out"))
}

unsafe fn evolve_into(model: *const JcmModel, tau: Tau, out: *mut *mut JcmJointState) -> Result<(), Fail> {
    let model = get(model, "model")?;
    if out.is_null() {
        return Err(null("out"));
    }
    if !tau.is_finite() {
        return Err(Fail(JcmStatus::InvalidArgument, "tau must be finite".into()));
    }
    put(out, boxed(JcmJointState(model.0.evolve(tau))), "out")
}

/// Joint state at scaled time `tau`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes. Release the
/// result with [`jcm_state_free`].
#[no_mangle]
pub unsafe extern "C" fn jcm_model_evolve(model: *const JcmModel, tau: f64, out: *mut *mut JcmJointState) -> JcmStatus {
    guard(|| evolve_into(model, Tau::new(tau), out))
}

/// Joint state at `tau = num pi / den`, with phases reduced exactly.
///
/// # Safety
/// As [`jcm_model_evolve`].
#[no_mangle]
pub unsafe extern "C" fn jcm_model_evolve_pi(
    model: *const JcmModel,
    num: i64,
    den: i64,
    out: *mut *mut JcmJointState,
) -> JcmStatus {
    guard(|| {
        if den == 0 {
            return Err(Fail(JcmStatus::InvalidArgument, "zero denominator".into()));
        }
        evolve_into(model, Tau::pi_fraction(num, den), out)
    })
}

/// Joint state at a symbolic time such as `"pi/8-pi/24000"`.
///
/// # Safety
/// `expr` must be a NUL-terminated string; otherwise as [`jcm_model_evolve`].
#[no_mangle]
pub unsafe extern "C" fn jcm_model_evolve_expr(
    model: *const JcmModel,
    expr: *const c_char,
    out: *mut *mut JcmJointState,
) -> JcmStatus {
    guard(|| {
        if expr.is_null() {
            return Err(null("expr"));
        }
        let text =
            CStr::from_ptr(expr).to_str().map_err(|_| Fail(JcmStatus::Parse, "expression is not UTF-8".into()))?;
        evolve_into(model, text.parse::<Tau>()?, out)
    })
}

/// Atomic inversion `W(tau)`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jcm_model_inversion(model: *const JcmModel, tau: f64, out: *mut f64) -> JcmStatus {
    guard(|| put(out, atomic_inversion_with(&get(model, "model")?.0, Tau::new(tau)), "out"))
}

/// Cat-state diagnostics at `pi/4 + delta_r` for odd `r`.
///
/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jcm_model_diagnose_cat(
    model: *const JcmModel,
    r: i64,
    out: *mut JcmCatDiagnostics,
) -> JcmStatus {
    guard(|| {
        let model = &get(model, "model")?.0;
        let d = diagnose_cat(model, &dip_offset(r, model.params().nbar())?)?;
        let diag = JcmCatDiagnostics {
            tau: d.tau,
            entropy: d.entropy,
            fidelity_ground: d.fidelity_ground,
            fidelity_excited: d.fidelity_excited,
            field_fidelity: d.field_fidelity,
            cat_norm_deviation: d.cat_norm_deviation,
        };
        put(out, diag, "out")
    })
}

/// # Safety
/// `state` must be null or a handle from a `jcm_model_evolve*` call not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jcm_state_free(state: *mut JcmJointState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Photon-number distribution; `buf` needs `cutoff + 1` entries.
///
/// # Safety
/// `state` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn jcm_state_pnd(state: *const JcmJointState, buf: *mut f64, len: usize) -> JcmStatus {
    guard(|| fill(buf, len, &pnd(&get(state, "state")?.0).probabilities))
}

/// # Safety
/// `state` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jcm_state_atom_density(state: *const JcmJointState, out: *mut JcmAtomDensity) -> JcmStatus {
    guard(|| {
        let rho = atom_density(&get(state, "state")?.0);
        let value =
            JcmAtomDensity { rho11: rho.rho11, rho22: rho.rho22, rho12_re: rho.rho12.re, rho12_im: rho.rho12.im };
        put(out, value, "out")
    })
}

/// Von Neumann entropy of the field (equal to that of the atom).
///
/// # Safety
/// `state` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jcm_state_entropy(state: *const JcmJointState, out: *mut f64) -> JcmStatus {
    guard(|| put(out, entropy(&atom_density(&get(state, "state")?.0)), "out"))
}

/// Husimi Q-function of the field on an `nx` by `ny` grid.
///
/// # Safety
/// `state` must be a live handle and `out` valid for writes. Release the
/// result with [`jcm_grid_free`].
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn jcm_state_q_grid(
    state: *const JcmJointState,
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
    nx: usize,
    ny: usize,
    out: *mut *mut JcmPhaseGrid,
) -> JcmStatus {
    guard(|| {
        let state = get(state, "state")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let window = PhaseWindow::new(re_min, re_max, im_min, im_max)?;
        let grid = q_grid(&field_rank2(&state.0), window, nx, ny)?;
        put(out, boxed(JcmPhaseGrid(grid)), "out")
    })
}

/// # Safety
/// `grid` must be null or a handle from [`jcm_state_q_grid`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jcm_grid_free(grid: *mut JcmPhaseGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Grid values row by row (`values[iy * nx + ix]`); `buf` needs `nx * ny` entries.
///
/// # Safety
/// `grid` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn jcm_grid_values(grid: *const JcmPhaseGrid, buf: *mut f64, len: usize) -> JcmStatus {
    guard(|| fill(buf, len, &get(grid, "grid")?.0.values))
}

/// Sum of the grid values times the cell area.
///
/// # Safety
/// `grid` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jcm_grid_riemann_sum(grid: *const JcmPhaseGrid, out: *mut f64) -> JcmStatus {
    guard(|| put(out, get(grid, "grid")?.0.riemann_sum(), "out"))
}

/// Number of 4-connected regions above `threshold_fraction` of the peak.
///
/// # Safety
/// `grid` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn jcm_grid_count_components(
    grid: *const JcmPhaseGrid,
    threshold_fraction: f64,
    out: *mut usize,
) -> JcmStatus {
    guard(|| put(out, count_components(&get(grid, "grid")?.0, threshold_fraction)?.count, "out"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_values() {
        assert!(matches!(mode_of(0), Ok(RabiMode::Exact)));
        assert!(matches!(mode_of(1), Ok(RabiMode::Quadratic)));
        assert!(matches!(mode_of(2), Err(Fail(JcmStatus::InvalidArgument, _))));
    }

    #[test]
    fn status_mapping() {
        let tail = Error::TailTooHeavy { tail_mass: 1.0, tail_tol: 1e-9, cutoff: 1 };
        assert_eq!(status_of(&tail), JcmStatus::TailTooHeavy);
        assert_eq!(status_of(&"x".parse::<Tau>().unwrap_err()), JcmStatus::Parse);
        assert_eq!(status_of(&Error::EvenR(2)), JcmStatus::InvalidArgument);
    }

    #[test]
    fn panics_become_status() {
        let st = guard(|| panic!("boom"));
        assert_eq!(st, JcmStatus::Panic);
        assert_eq!(LAST_ERROR.with(|e| e.borrow().clone()), "internal panic");
    }
}
