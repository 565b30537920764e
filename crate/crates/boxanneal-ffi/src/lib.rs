//! C ABI for the boxanneal library.
//!
//! All functions return a [`BxStatus`]; results come back through out
//! pointers. Objects cross the boundary as opaque handles that must be
//! released with the matching `bx_*_free` function. A human-readable message
//! for the most recent error on the calling thread is available via
//! [`bx_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};

use boxanneal::dynamics::{self, IntegrationOptions, ReferenceSpec, Schedule};
use boxanneal::hamiltonian::{build_hamiltonian, BasisSpec};
use boxanneal::potential::BoxPotential;
use boxanneal::{oracles, spectrum, Error};

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BxStatus {
    /// Success.
    BxOk = 0,
    /// A pointer argument was null.
    BxNullPointer = 1,
    /// Parameters violate a domain constraint.
    BxInvalidArgument = 2,
    /// A numerical routine failed to converge or certify its result.
    BxNumericalFailure = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(e: Error) -> BxStatus {
    let status = match e {
        Error::Domain(_) | Error::Config(_) => BxStatus::BxInvalidArgument,
        _ => BxStatus::BxNumericalFailure,
    };
    let msg = CString::new(e.to_string()).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
    status
}

/// Message for the most recent error on this thread. The pointer stays valid
/// until the next failing call on the same thread; never free it.
#[no_mangle]
pub extern "C" fn bx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static UTF-8 string; never free it.
#[no_mangle]
pub extern "C" fn bx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Opaque multi-well box potential.
pub struct BxPotential(BoxPotential);

/// Creates a box potential with `mu` cosine periods, envelope amplitude `a`,
/// and box width `l`. On success writes a handle to `out`.
///
/// # Safety
/// `out` must be a valid pointer. The handle must be released with
/// [`bx_potential_free`].
#[no_mangle]
pub unsafe extern "C" fn bx_potential_new(
    mu: u32,
    a: f64,
    l: f64,
    out: *mut *mut BxPotential,
) -> BxStatus {
    if out.is_null() {
        return BxStatus::BxNullPointer;
    }
    match BoxPotential::new(mu, a, l) {
        Ok(p) => {
            *out = Box::into_raw(Box::new(BxPotential(p)));
            BxStatus::BxOk
        }
        Err(e) => fail(e),
    }
}

/// Evaluates `V(x)`; `x` must lie inside the box.
///
/// # Safety
/// `p` must be a live handle from [`bx_potential_new`]; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bx_potential_eval(
    p: *const BxPotential,
    x: f64,
    out: *mut f64,
) -> BxStatus {
    if p.is_null() || out.is_null() {
        return BxStatus::BxNullPointer;
    }
    match (*p).0.eval(x) {
        Ok(v) => {
            *out = v;
            BxStatus::BxOk
        }
        Err(e) => fail(e),
    }
}

/// Number of potential minima (wells plus walls).
///
/// # Safety
/// `p` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bx_potential_minima_count(
    p: *const BxPotential,
    out: *mut u32,
) -> BxStatus {
    if p.is_null() || out.is_null() {
        return BxStatus::BxNullPointer;
    }
    *out = (*p).0.minima_count() as u32;
    BxStatus::BxOk
}

/// Releases a potential handle. Passing null is a no-op.
///
/// # Safety
/// `p` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn bx_potential_free(p: *mut BxPotential) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Computes the lowest `levels` eigenvalues of `H(s)` in an `n_dim`-function
/// basis and writes them, ascending, into `out` (capacity `levels`).
///
/// # Safety
/// `p` must be a live handle; `out` must point to at least `levels` doubles.
#[no_mangle]
pub unsafe extern "C" fn bx_spectrum_lowest(
    p: *const BxPotential,
    s: f64,
    n_dim: usize,
    levels: usize,
    out: *mut f64,
) -> BxStatus {
    if p.is_null() || out.is_null() {
        return BxStatus::BxNullPointer;
    }
    let compute = || -> boxanneal::Result<Vec<f64>> {
        let basis = BasisSpec::new(n_dim, (*p).0.l, 1.0, 1.0)?;
        let h = build_hamiltonian(&(*p).0, s, &basis)?;
        spectrum::eigenvalues(&h, levels)
    };
    match compute() {
        Ok(values) => {
            std::ptr::copy_nonoverlapping(values.as_ptr(), out, levels);
            BxStatus::BxOk
        }
        Err(e) => fail(e),
    }
}

/// Result of a single annealing run.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BxAnnealResult {
    /// Final energy expectation `⟨H(s_f)⟩`.
    pub final_energy: f64,
    /// Residual above the reference level at `s_f`.
    pub residual: f64,
    /// Reference level index.
    pub e_ref_level: usize,
    /// Reference level energy.
    pub e_ref_energy: f64,
    /// `|‖ψ‖ − 1|` accumulated over the run.
    pub norm_drift: f64,
    /// Number of split-operator steps taken.
    pub steps: u64,
}

/// Anneals the ground state of `H(s_i)` to `s_f` over time `t_total` with the
/// linear schedule and writes the outcome to `out`. `accuracy` in (0, 1]
/// scales the step size (smaller is more accurate); pass 0 for the default.
/// The reference level is chosen automatically (lowest state in the wells
/// adjacent to the center for `a > 0`, the ground state otherwise).
///
/// # Safety
/// `p` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bx_anneal(
    p: *const BxPotential,
    n_dim: usize,
    s_i: f64,
    s_f: f64,
    t_total: f64,
    accuracy: f64,
    out: *mut BxAnnealResult,
) -> BxStatus {
    if p.is_null() || out.is_null() {
        return BxStatus::BxNullPointer;
    }
    let compute = || -> boxanneal::Result<BxAnnealResult> {
        let basis = BasisSpec::new(n_dim, (*p).0.l, 1.0, 1.0)?;
        let sch = Schedule::new(s_i, s_f, t_total)?;
        let mut opts = IntegrationOptions::default();
        if accuracy > 0.0 {
            opts.accuracy = accuracy;
        }
        let res = dynamics::integrate(&(*p).0, &sch, &basis, &opts)?;
        let (level, e_ref) =
            dynamics::resolve_reference(&(*p).0, &basis, s_f, ReferenceSpec::Auto, 64.min(n_dim))?;
        Ok(BxAnnealResult {
            final_energy: res.final_energy,
            residual: dynamics::residual_energy(&res, e_ref),
            e_ref_level: level,
            e_ref_energy: e_ref,
            norm_drift: res.norm_drift,
            steps: res.steps as u64,
        })
    };
    match compute() {
        Ok(r) => {
            *out = r;
            BxStatus::BxOk
        }
        Err(e) => fail(e),
    }
}

/// Deep-limit ground-state energy `ħπμ/(2L√(2ms))` above a well.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bx_oracle_zero_point(
    mu: u32,
    s: f64,
    l: f64,
    out: *mut f64,
) -> BxStatus {
    if out.is_null() {
        return BxStatus::BxNullPointer;
    }
    *out = oracles::zero_point_energy(mu, s, l, 1.0, 1.0);
    BxStatus::BxOk
}

/// Closed-form residual-energy envelope for a linear annealing schedule.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bx_oracle_adiabatic_residual(
    mu: u32,
    l: f64,
    s_i: f64,
    s_f: f64,
    t_total: f64,
    out: *mut f64,
) -> BxStatus {
    if out.is_null() {
        return BxStatus::BxNullPointer;
    }
    let params =
        oracles::AdiabaticParams { mu, l, mass: 1.0, hbar: 1.0, s_i, s_f, t_total };
    *out = oracles::adiabatic_residual(&params);
    BxStatus::BxOk
}
