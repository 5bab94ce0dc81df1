//! C ABI over `ap_atlas`.
//!
//! Profiles and solutions are opaque heap handles created by `ap_*_new`
//! style constructors and released with the matching `*_free`. Every
//! fallible call returns an [`ApStatus`]; on failure a message is kept per
//! thread and can be read with [`ap_last_error_message`]. Outputs are only
//! written on success.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ap_atlas::families::Solution;
use ap_atlas::params::HomogeneityParams;
use ap_atlas::special::UpsilonProfile;
use ap_atlas::Error;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Bracket = 3,
    Convergence = 4,
    Overlap = 5,
    Fit = 6,
    StepFailure = 7,
    Panic = 8,
}

/// Opaque handle to `Υ` for one `(a, m)`.
pub struct ApProfile {
    inner: UpsilonProfile,
}

/// Opaque handle to a homogeneous solution.
pub struct ApSolution {
    inner: Solution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ApStatus {
    match e {
        Error::Domain(_) => ApStatus::Domain,
        Error::Bracket(_) => ApStatus::Bracket,
        Error::Convergence(_) => ApStatus::Convergence,
        Error::Overlap(_) => ApStatus::Overlap,
        Error::Fit(_) => ApStatus::Fit,
        Error::StepFailure(_) => ApStatus::StepFailure,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), ApStatus>) -> ApStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ApStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            ApStatus::Panic
        }
    }
}

fn fail(e: Error) -> ApStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> ApStatus {
    set_error(&format!("{what} is NULL"));
    ApStatus::NullPointer
}

/// # Safety
/// `p` must be NULL or valid for a write of `T`.
unsafe fn write_out<T>(p: *mut T, v: T, what: &str) -> Result<(), ApStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

/// # Safety
/// `p` must be NULL or point to a live `T`.
unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, ApStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ap_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `a = 2 / (2 - gamma)`.
///
/// # Safety
/// `a_out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_params_from_gamma(gamma: f64, a_out: *mut f64) -> ApStatus {
    guard(|| {
        let p = HomogeneityParams::from_gamma(gamma).map_err(fail)?;
        write_out(a_out, p.a(), "a_out")
    })
}

/// `gamma = 2 - 2 / a`.
///
/// # Safety
/// `gamma_out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_params_from_a(a: f64, gamma_out: *mut f64) -> ApStatus {
    guard(|| {
        let p = HomogeneityParams::from_a(a).map_err(fail)?;
        write_out(gamma_out, p.gamma(), "gamma_out")
    })
}

/// Builds `Υ` for `(a, m)`; `*out` receives a handle to free with
/// [`ap_profile_free`].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_profile_new(a: f64, m: f64, out: *mut *mut ApProfile) -> ApStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = UpsilonProfile::build(a, m).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(ApProfile { inner })), "out")
    })
}

/// # Safety
/// `profile` must be NULL or a handle from [`ap_profile_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ap_profile_free(profile: *mut ApProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// # Safety
/// `profile` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_profile_t_star(profile: *const ApProfile, out: *mut f64) -> ApStatus {
    guard(|| write_out(out, deref(profile, "profile")?.inner.t_star(), "out"))
}

/// # Safety
/// `profile` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_profile_y_star(profile: *const ApProfile, out: *mut f64) -> ApStatus {
    guard(|| write_out(out, deref(profile, "profile")?.inner.y_star(), "out"))
}

/// `Υ(t)` for `t ∈ [0, 2 t_*]`.
///
/// # Safety
/// `profile` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_profile_upsilon(profile: *const ApProfile, t: f64, out: *mut f64) -> ApStatus {
    guard(|| {
        let v = deref(profile, "profile")?.inner.upsilon(t).map_err(fail)?;
        write_out(out, v, "out")
    })
}

/// `Υ, Υ', Υ''` at an interior `t ∈ (0, 2 t_*)`.
///
/// # Safety
/// `profile` must be a live handle; the three outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_profile_jet(
    profile: *const ApProfile,
    t: f64,
    y: *mut f64,
    dy: *mut f64,
    d2y: *mut f64,
) -> ApStatus {
    guard(|| {
        if y.is_null() || dy.is_null() || d2y.is_null() {
            return Err(null("jet output"));
        }
        let j = deref(profile, "profile")?.inner.jet(t).map_err(fail)?;
        write_out(y, j.y, "y")?;
        write_out(dy, j.dy, "dy")?;
        write_out(d2y, j.d2y, "d2y")
    })
}

unsafe fn emit_solution(out: *mut *mut ApSolution, built: ap_atlas::Result<Solution>) -> Result<(), ApStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    let inner = built.map_err(fail)?;
    write_out(out, Box::into_raw(Box::new(ApSolution { inner })), "out")
}

fn params(a: f64) -> ap_atlas::Result<HomogeneityParams> {
    HomogeneityParams::from_a(a)
}

/// `C_a |x|^a`, `a > 1`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_solution_radial(a: f64, out: *mut *mut ApSolution) -> ApStatus {
    guard(|| emit_solution(out, params(a).and_then(Solution::radial)))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_solution_half_plane(a: f64, out: *mut *mut ApSolution) -> ApStatus {
    guard(|| emit_solution(out, params(a).map(Solution::half_plane)))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_solution_slab(a: f64, out: *mut *mut ApSolution) -> ApStatus {
    guard(|| emit_solution(out, params(a).map(Solution::slab)))
}

/// Resonant cone at `a = 1/2` with parameter `c ≠ 0`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_solution_resonant_cone(c: f64, out: *mut *mut ApSolution) -> ApStatus {
    guard(|| emit_solution(out, params(0.5).and_then(|p| Solution::resonant_cone(p, c))))
}

/// The implicit solution built on a profile; the profile is copied.
///
/// # Safety
/// `profile` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_solution_implicit(profile: *const ApProfile, out: *mut *mut ApSolution) -> ApStatus {
    guard(|| {
        let p = deref(profile, "profile")?.inner.clone();
        emit_solution(out, Solution::implicit(p))
    })
}

/// `(x₂² + 2√m x₁x₂)/2` on its positivity set.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_solution_explicit_a2(m: f64, out: *mut *mut ApSolution) -> ApStatus {
    guard(|| emit_solution(out, Solution::explicit_a2(m)))
}

/// Glued acute cones: flap `i` has rotation `rotations[i]` and `cs[i] < 0`.
///
/// # Safety
/// `rotations` and `cs` must be valid for `n` reads; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_solution_multi_flap(
    rotations: *const f64,
    cs: *const f64,
    n: usize,
    out: *mut *mut ApSolution,
) -> ApStatus {
    guard(|| {
        if n > 0 && (rotations.is_null() || cs.is_null()) {
            return Err(null("flap arrays"));
        }
        let flaps: Vec<(f64, f64)> = (0..n).map(|i| (*rotations.add(i), *cs.add(i))).collect();
        emit_solution(out, Solution::multi_flap(&flaps))
    })
}

/// Rotates a solution counter-clockwise in place.
///
/// # Safety
/// `solution` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ap_solution_rotate(solution: *mut ApSolution, angle: f64) -> ApStatus {
    guard(|| {
        let s = solution.as_mut().ok_or_else(|| null("solution"))?;
        if !angle.is_finite() {
            return Err(fail(Error::Domain(format!("rotation must be finite, got {angle}"))));
        }
        s.inner = s.inner.clone().rotated(angle);
        Ok(())
    })
}

/// Homogeneity degree of a solution.
///
/// # Safety
/// `solution` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_solution_degree(solution: *const ApSolution, out: *mut f64) -> ApStatus {
    guard(|| write_out(out, deref(solution, "solution")?.inner.degree(), "out"))
}

/// `u(x₁, x₂)`, zero outside the positivity set.
///
/// # Safety
/// `solution` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ap_solution_evaluate(
    solution: *const ApSolution,
    x1: f64,
    x2: f64,
    out: *mut f64,
) -> ApStatus {
    guard(|| write_out(out, deref(solution, "solution")?.inner.evaluate(x1, x2), "out"))
}

/// Evaluates `n` points; `out[i] = u(x1[i], x2[i])`.
///
/// # Safety
/// `x1`, `x2` valid for `n` reads, `out` valid for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn ap_solution_evaluate_many(
    solution: *const ApSolution,
    x1: *const f64,
    x2: *const f64,
    n: usize,
    out: *mut f64,
) -> ApStatus {
    guard(|| {
        let s = deref(solution, "solution")?;
        if n > 0 && (x1.is_null() || x2.is_null() || out.is_null()) {
            return Err(null("point arrays"));
        }
        for i in 0..n {
            *out.add(i) = s.inner.evaluate(*x1.add(i), *x2.add(i));
        }
        Ok(())
    })
}

/// # Safety
/// `solution` must be NULL or a live handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ap_solution_free(solution: *mut ApSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}
