//! C ABI for the mbtrap library.
//!
//! Every function returns an [`MbtrapStatus`]; results are written through
//! out-pointers only on success. The message of the last failure on the
//! calling thread is available from [`mbtrap_last_error`]. Trap contexts are
//! opaque handles created by [`mbtrap_context_new`] and released with
//! [`mbtrap_context_free`].

use mbtrap::coeffs::{ConvergentSet, RegulatorSpec, Scheme};
use mbtrap::energies::{self, OrderBreakdown, TrapContext};
use mbtrap::scatter::{self, GaussianPotential};
use mbtrap::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MbtrapStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Convergence = 3,
    RankDeficient = 4,
    Bracket = 5,
    BoundState = 6,
    Unreachable = 7,
    Invalid = 8,
    Panic = 9,
}

/// Regulator scheme selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MbtrapScheme {
    HardCutoff = 0,
    Exponential = 1,
}

/// Opaque trap context.
pub struct MbtrapContext {
    inner: TrapContext,
}

/// One interaction energy split by order, in units of ħω.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MbtrapBreakdown {
    pub first: f64,
    pub second: f64,
    pub third: f64,
    pub effective_range: f64,
    pub total: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MbtrapEnergies {
    pub u2: MbtrapBreakdown,
    pub u3: MbtrapBreakdown,
    pub u4: MbtrapBreakdown,
}

/// The c coefficients at the context's ω/ω₀.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MbtrapCoefficients {
    pub c2_1: f64,
    pub c2_2: f64,
    pub c2_3: f64,
    pub d2_12: f64,
    pub c3_2: f64,
    pub c3_3: f64,
    pub c3_3_uncertainty: f64,
    pub c4_3: f64,
}

/// Zero-energy scattering length and effective range of a Gaussian
/// potential, lengths in the unit of `r0`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MbtrapEffectiveRange {
    pub a0: f64,
    pub r_eff: f64,
    pub volume: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MbtrapStatus {
    match e {
        Error::Domain(_) => MbtrapStatus::Domain,
        Error::Convergence(_) => MbtrapStatus::Convergence,
        Error::RankDeficient(_) => MbtrapStatus::RankDeficient,
        Error::Bracket(_) => MbtrapStatus::Bracket,
        Error::BoundState(_) => MbtrapStatus::BoundState,
        Error::Unreachable(_) => MbtrapStatus::Unreachable,
        Error::Invalid(_) => MbtrapStatus::Invalid,
    }
}

/// Runs `f`, storing its value in `out` on success and recording failures.
fn guard<T, F: FnOnce() -> mbtrap::Result<T>>(out: *mut T, f: F) -> MbtrapStatus {
    if out.is_null() {
        set_error("output pointer is null");
        return MbtrapStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            // SAFETY: `out` is non-null and the caller guarantees it points to a writable T.
            unsafe { out.write(v) };
            MbtrapStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            MbtrapStatus::Panic
        }
    }
}

fn context<'a>(ctx: *const MbtrapContext) -> mbtrap::Result<&'a TrapContext> {
    // SAFETY: a non-null handle was produced by `mbtrap_context_new` and not yet freed.
    unsafe { ctx.as_ref() }.map(|c| &c.inner).ok_or_else(|| Error::Domain("context handle is null".into()))
}

/// Message describing the last failed call on this thread; empty if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mbtrap_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates a context in oscillator units: `omega_ratio` = ω/ω₀ (may be
/// +infinity for ω₀ = 0), `xi` = a_t/σ(ω), `reff_ratio` = r_eff/σ(ω) and a
/// regulator with cutoff ratio ω_c/ω.
#[no_mangle]
pub extern "C" fn mbtrap_context_new(
    omega_ratio: f64,
    xi: f64,
    reff_ratio: f64,
    scheme: MbtrapScheme,
    cutoff_ratio: f64,
    out: *mut *mut MbtrapContext,
) -> MbtrapStatus {
    guard(out, || {
        let scheme = match scheme {
            MbtrapScheme::HardCutoff => Scheme::HardCutoff,
            MbtrapScheme::Exponential => Scheme::Exponential,
        };
        let reg = RegulatorSpec::new(scheme, cutoff_ratio)?;
        let inner = TrapContext::dimensionless(omega_ratio, xi, reff_ratio, reg, ConvergentSet::reference()?)?;
        Ok(Box::into_raw(Box::new(MbtrapContext { inner })))
    })
}

/// Releases a context; null is ignored. Passing any other pointer that did
/// not come from [`mbtrap_context_new`], or freeing twice, is undefined.
#[no_mangle]
#[allow(clippy::not_unsafe_ptr_arg_deref)]
pub extern "C" fn mbtrap_context_free(ctx: *mut MbtrapContext) {
    if !ctx.is_null() {
        // SAFETY: the handle came from `Box::into_raw` in `mbtrap_context_new`.
        drop(unsafe { Box::from_raw(ctx) });
    }
}

fn breakdown(b: &OrderBreakdown) -> MbtrapBreakdown {
    MbtrapBreakdown {
        first: b.first,
        second: b.second,
        third: b.third,
        effective_range: b.effective_range,
        total: b.total(),
    }
}

/// U₂, U₃, U₄ in units of ħω.
#[no_mangle]
pub extern "C" fn mbtrap_energies(ctx: *const MbtrapContext, out: *mut MbtrapEnergies) -> MbtrapStatus {
    guard(out, || {
        let e = energies::interaction_energies(context(ctx)?)?;
        Ok(MbtrapEnergies { u2: breakdown(&e.u2), u3: breakdown(&e.u3), u4: breakdown(&e.u4) })
    })
}

/// Ground-state energy of `n` bosons in units of ħω.
#[no_mangle]
pub extern "C" fn mbtrap_total_energy(ctx: *const MbtrapContext, n: u64, out: *mut f64) -> MbtrapStatus {
    guard(out, || energies::total_energy(context(ctx)?, n))
}

#[no_mangle]
pub extern "C" fn mbtrap_coefficients(ctx: *const MbtrapContext, out: *mut MbtrapCoefficients) -> MbtrapStatus {
    guard(out, || {
        let c = context(ctx)?;
        let t = energies::coefficient_table(c.omega, c.omega0, &c.coefficients)?;
        Ok(MbtrapCoefficients {
            c2_1: t.c2_1,
            c2_2: t.c2_2,
            c2_3: t.c2_3,
            d2_12: t.d2_12,
            c3_2: t.c3_2,
            c3_3: t.c3_3,
            c3_3_uncertainty: t.c3_3_uncertainty,
            c4_3: t.c4_3,
        })
    })
}

/// Exact relative energy of two bosons in ħω for a/σ = `xi`, |xi| < 1.
#[no_mangle]
pub extern "C" fn mbtrap_exact_two_body_energy(xi: f64, out: *mut f64) -> MbtrapStatus {
    guard(out, || energies::exact_two_body_energy(xi))
}

/// Scattering length of V₀exp(-r²/(2r0²)) with `v0` = m·V₀/ħ².
#[no_mangle]
pub extern "C" fn mbtrap_zero_energy_a(v0: f64, r0: f64, out: *mut f64) -> MbtrapStatus {
    guard(out, || scatter::zero_energy_a(&GaussianPotential::new(v0, r0)?))
}

/// `v0` = m·V₀/ħ² producing scattering length `a` without a bound state.
#[no_mangle]
pub extern "C" fn mbtrap_tune_depth(a: f64, r0: f64, out: *mut f64) -> MbtrapStatus {
    guard(out, || scatter::tune_depth(a, r0).map(|p| p.v0))
}

/// Effective-range fit on the default low-energy grid.
#[no_mangle]
pub extern "C" fn mbtrap_effective_range(v0: f64, r0: f64, out: *mut MbtrapEffectiveRange) -> MbtrapStatus {
    guard(out, || {
        let p = GaussianPotential::new(v0, r0)?;
        let a = scatter::zero_energy_a(&p)?;
        let e = scatter::fit_effective_range(&p, &scatter::default_k_grid(r0, a))?;
        Ok(MbtrapEffectiveRange { a0: e.a0, r_eff: e.r_eff, volume: e.volume })
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mbtrap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
