//! C ABI over `diamflow-core`.
//!
//! Configurations and profiles cross the boundary as opaque heap handles
//! that the caller releases with the matching `*_free` function. Every
//! fallible call returns a [`DfStatus`]; on failure a message is available
//! from [`diamflow_last_error`] until the next failing call on the same
//! thread. Panics never unwind into C; they surface as `DF_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use diamflow_core::constructions::{
    push_construction, regular_ngon, single_diameter_move, ConstructionSpec,
};
use diamflow_core::error::Error;
use diamflow_core::flow::{flow_map, pair_statistics, remainder_power_sum};
use diamflow_core::geometry::{
    diameter, log_discriminant, log_ratio, read_configuration, rescale_to_diameter,
    write_configuration, Configuration, Point2,
};
use diamflow_core::profile::Profile;
use diamflow_core::quadrature::{integral_i, limit_constant};
use diamflow_core::solvers::{c_max, eps_max, t_max};

#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfStatus {
    DF_STATUS_OK = 0,
    DF_STATUS_NULL_POINTER = 1,
    DF_STATUS_INVALID_ARGUMENT = 2,
    DF_STATUS_DEGENERATE = 3,
    DF_STATUS_DOMAIN = 4,
    DF_STATUS_SOLVER_FAILURE = 5,
    DF_STATUS_IO = 6,
    DF_STATUS_PANIC = 7,
}

use DfStatus::*;

/// Opaque planar configuration.
pub struct DfConfiguration(Configuration);

/// Opaque push profile.
pub struct DfProfile(Profile);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DfBindingReport {
    pub c_max: f64,
    pub c_upper: f64,
    pub binding_i: usize,
    pub binding_j: usize,
    pub binding_distance: f64,
    pub binding_angle: f64,
    pub iterations: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DfQuadratureResult {
    pub re: f64,
    pub im: f64,
    pub refinement_gap: f64,
    pub grid_size: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> DfStatus {
    match err {
        Error::Degenerate { .. } | Error::ZeroDiameter => DF_STATUS_DEGENERATE,
        Error::FieldUndefined { .. } | Error::ExpansionDiverges { .. } => DF_STATUS_DOMAIN,
        Error::Bracket { .. } | Error::NoFeasiblePush(_) | Error::SweepAborted { .. } => {
            DF_STATUS_SOLVER_FAILURE
        }
        Error::Parse { .. } | Error::Io(_) | Error::Csv(_) => DF_STATUS_IO,
        Error::TooFewPoints(_)
        | Error::NonFinitePoint { .. }
        | Error::NotEvenN(_)
        | Error::InvalidArgument(_)
        | Error::BadProfile(_) => DF_STATUS_INVALID_ARGUMENT,
    }
}

enum Failure {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DF_STATUS_OK,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer passed for `{what}`"));
            DF_STATUS_NULL_POINTER
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            DF_STATUS_PANIC
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

fn boxed_config(c: Configuration) -> *mut DfConfiguration {
    Box::into_raw(Box::new(DfConfiguration(c)))
}

unsafe fn c_path<'a>(p: *const c_char, what: &'static str) -> Result<&'a Path, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    let s = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error::InvalidArgument(format!("`{what}` is not UTF-8")))?;
    Ok(Path::new(s))
}

/// Message of the last failure on this thread, or NULL. Owned by the library;
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn diamflow_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static NUL-terminated version string.
#[no_mangle]
pub extern "C" fn diamflow_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---------------------------------------------------------------- profiles

#[no_mangle]
pub extern "C" fn diamflow_profile_linear() -> *mut DfProfile {
    Box::into_raw(Box::new(DfProfile(Profile::Linear)))
}

#[no_mangle]
pub extern "C" fn diamflow_profile_cosine() -> *mut DfProfile {
    Box::into_raw(Box::new(DfProfile(Profile::Cosine)))
}

/// Piecewise-linear profile through `len` samples `(thetas[k], values[k])`.
///
/// # Safety
/// `thetas` and `values` must point to `len` readable doubles; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_profile_table(
    thetas: *const f64,
    values: *const f64,
    len: usize,
    out: *mut *mut DfProfile,
) -> DfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if thetas.is_null() || values.is_null() {
            return Err(Failure::Null("thetas/values"));
        }
        let t = std::slice::from_raw_parts(thetas, len);
        let v = std::slice::from_raw_parts(values, len);
        let samples: Vec<(f64, f64)> = t.iter().copied().zip(v.iter().copied()).collect();
        *out = Box::into_raw(Box::new(DfProfile(Profile::table(&samples)?)));
        Ok(())
    })
}

/// # Safety
/// `profile` must be NULL or a handle from a `diamflow_profile_*` constructor
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn diamflow_profile_free(profile: *mut DfProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

// ----------------------------------------------------------- configurations

/// Copy `len` points `(re[k], im[k])` into a new configuration.
///
/// # Safety
/// `re` and `im` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_config_new(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut DfConfiguration,
) -> DfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if re.is_null() || im.is_null() {
            return Err(Failure::Null("re/im"));
        }
        let re = std::slice::from_raw_parts(re, len);
        let im = std::slice::from_raw_parts(im, len);
        let pts = re
            .iter()
            .zip(im)
            .map(|(&a, &b)| Point2::new(a, b))
            .collect();
        *out = boxed_config(Configuration::new(pts, "ffi")?);
        Ok(())
    })
}

/// # Safety
/// `config` must be NULL or a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn diamflow_config_free(config: *mut DfConfiguration) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Number of points, or 0 for NULL.
///
/// # Safety
/// `config` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn diamflow_config_len(config: *const DfConfiguration) -> usize {
    config.as_ref().map_or(0, |c| c.0.len())
}

/// Copy the points into caller buffers of capacity `cap` (at least the
/// configuration length).
///
/// # Safety
/// `config` must be a live handle; `re` and `im` must be writable for `cap`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn diamflow_config_points(
    config: *const DfConfiguration,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
) -> DfStatus {
    guard(|| {
        let c = &deref(config, "config")?.0;
        if re.is_null() || im.is_null() {
            return Err(Failure::Null("re/im"));
        }
        if cap < c.len() {
            return Err(Error::InvalidArgument(format!(
                "buffer capacity {cap} smaller than {} points",
                c.len()
            ))
            .into());
        }
        let re = std::slice::from_raw_parts_mut(re, c.len());
        let im = std::slice::from_raw_parts_mut(im, c.len());
        for (k, z) in c.points().iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated UTF-8 string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_config_read(
    path: *const c_char,
    out: *mut *mut DfConfiguration,
) -> DfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = boxed_config(read_configuration(c_path(path, "path")?)?);
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle; `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn diamflow_config_write(
    config: *const DfConfiguration,
    path: *const c_char,
) -> DfStatus {
    guard(|| {
        write_configuration(&deref(config, "config")?.0, c_path(path, "path")?)?;
        Ok(())
    })
}

// ------------------------------------------------------------ constructions

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_regular_ngon(
    n: usize,
    out: *mut *mut DfConfiguration,
) -> DfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = boxed_config(regular_ngon(n)?);
        Ok(())
    })
}

/// # Safety
/// `profile` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_push_construction(
    n: usize,
    c: f64,
    profile: *const DfProfile,
    out: *mut *mut DfConfiguration,
) -> DfStatus {
    guard(|| {
        let p = deref(profile, "profile")?.0.clone();
        let out = out_ref(out, "out")?;
        *out = boxed_config(push_construction(&ConstructionSpec::new(n, c, p)?)?);
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_single_diameter_move(
    n: usize,
    eps: f64,
    out: *mut *mut DfConfiguration,
) -> DfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = boxed_config(single_diameter_move(n, eps)?);
        Ok(())
    })
}

/// # Safety
/// `config` and `profile` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_flow_map(
    config: *const DfConfiguration,
    t: f64,
    profile: *const DfProfile,
    out: *mut *mut DfConfiguration,
) -> DfStatus {
    guard(|| {
        let c = &deref(config, "config")?.0;
        let p = &deref(profile, "profile")?.0;
        let out = out_ref(out, "out")?;
        *out = boxed_config(flow_map(c, t, p)?);
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_rescale_to_diameter(
    config: *const DfConfiguration,
    target: f64,
    out: *mut *mut DfConfiguration,
) -> DfStatus {
    guard(|| {
        let c = &deref(config, "config")?.0;
        let out = out_ref(out, "out")?;
        *out = boxed_config(rescale_to_diameter(c, target)?);
        Ok(())
    })
}

// ---------------------------------------------------------------- measures

/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_diameter(
    config: *const DfConfiguration,
    out: *mut f64,
) -> DfStatus {
    guard(|| {
        let c = &deref(config, "config")?.0;
        *out_ref(out, "out")? = diameter(c);
        Ok(())
    })
}

/// `log Δ = 2 Σ_{i<j} ln|z_i − z_j|`.
///
/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_log_discriminant(
    config: *const DfConfiguration,
    out: *mut f64,
) -> DfStatus {
    guard(|| {
        let c = &deref(config, "config")?.0;
        *out_ref(out, "out")? = log_discriminant(c)?;
        Ok(())
    })
}

/// `log Δ − n ln n`.
///
/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_log_ratio(
    config: *const DfConfiguration,
    out: *mut f64,
) -> DfStatus {
    guard(|| {
        let c = &deref(config, "config")?.0;
        *out_ref(out, "out")? = log_ratio(c)?;
        Ok(())
    })
}

/// `S_m = Σ_{i≠j} ρ_ij^m` for `m = 1..=max_power`, written to
/// `re[m-1]`, `im[m-1]`.
///
/// # Safety
/// `config`, `profile` must be live handles; `re`, `im` writable for
/// `max_power` doubles.
#[no_mangle]
pub unsafe extern "C" fn diamflow_power_sums(
    config: *const DfConfiguration,
    profile: *const DfProfile,
    max_power: usize,
    re: *mut f64,
    im: *mut f64,
) -> DfStatus {
    guard(|| {
        let c = &deref(config, "config")?.0;
        let p = &deref(profile, "profile")?.0;
        if re.is_null() || im.is_null() {
            return Err(Failure::Null("re/im"));
        }
        if max_power == 0 {
            return Err(Error::InvalidArgument("max_power must be at least 1".into()).into());
        }
        let st = pair_statistics(c, p, max_power, None)?;
        let re = std::slice::from_raw_parts_mut(re, max_power);
        let im = std::slice::from_raw_parts_mut(im, max_power);
        for (k, s) in st.power_sums.iter().enumerate() {
            re[k] = s.re;
            im[k] = s.im;
        }
        Ok(())
    })
}

/// `Σ_{i≠j} |ρ_ij|⁴ / (1 − |ρ_ij t|)⁴`.
///
/// # Safety
/// `config`, `profile` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_remainder_power_sum(
    config: *const DfConfiguration,
    profile: *const DfProfile,
    t: f64,
    out: *mut f64,
) -> DfStatus {
    guard(|| {
        let c = &deref(config, "config")?.0;
        let p = &deref(profile, "profile")?.0;
        *out_ref(out, "out")? = remainder_power_sum(c, p, t)?;
        Ok(())
    })
}

// ------------------------------------------------------------------ solvers

/// # Safety
/// `profile` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_c_max(
    n: usize,
    profile: *const DfProfile,
    tol: f64,
    out: *mut DfBindingReport,
) -> DfStatus {
    guard(|| {
        let p = &deref(profile, "profile")?.0;
        let out = out_ref(out, "out")?;
        let r = c_max(n, p, tol)?;
        *out = DfBindingReport {
            c_max: r.c_max,
            c_upper: r.c_upper,
            binding_i: r.binding_pair.0,
            binding_j: r.binding_pair.1,
            binding_distance: r.binding_distance,
            binding_angle: r.binding_angle,
            iterations: r.iterations,
        };
        Ok(())
    })
}

/// # Safety
/// `profile` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_t_max(
    n: usize,
    profile: *const DfProfile,
    tol: f64,
    out: *mut f64,
) -> DfStatus {
    guard(|| {
        let p = &deref(profile, "profile")?.0;
        *out_ref(out, "out")? = t_max(n, p, tol)?;
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_eps_max(n: usize, tol: f64, out: *mut f64) -> DfStatus {
    guard(|| {
        *out_ref(out, "out")? = eps_max(n, tol)?;
        Ok(())
    })
}

// --------------------------------------------------------------- quadrature

/// # Safety
/// `profile` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamflow_integral(
    profile: *const DfProfile,
    grid: usize,
    out: *mut DfQuadratureResult,
) -> DfStatus {
    guard(|| {
        let p = &deref(profile, "profile")?.0;
        let out = out_ref(out, "out")?;
        let q = integral_i(p, grid)?;
        *out = DfQuadratureResult {
            re: q.re(),
            im: q.im(),
            refinement_gap: q.refinement_gap,
            grid_size: q.grid_size,
        };
        Ok(())
    })
}

/// `exp(−I π²/128)`.
#[no_mangle]
pub extern "C" fn diamflow_limit_constant(i_real: f64) -> f64 {
    limit_constant(i_real)
}
