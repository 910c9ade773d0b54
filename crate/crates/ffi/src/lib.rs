//! C ABI over the `ftrl-core` learners.
//!
//! Learners live behind an opaque `FtrlLearner` handle created with
//! `ftrl_learner_new` and released with `ftrl_learner_free`. Every fallible
//! call returns an `FtrlStatus`; panics are caught at the boundary and
//! reported as `FTRL_STATUS_PANIC`.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use ftrl_core::cli::{build_learner, LearnerKind, Params, StreamKind};
use ftrl_core::primitives::{soft_threshold_argmin, softmax_simplex};
use ftrl_core::{Error, OnlineLearner, Point};

/// Result codes shared by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FtrlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    InvariantViolation = 4,
    Unsupported = 5,
    DimensionMismatch = 6,
    InternalConsistency = 7,
    Unbounded = 8,
    Parse = 9,
    Panic = 10,
}

impl From<&Error> for FtrlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) => FtrlStatus::InvalidArgument,
            Error::Domain(_) => FtrlStatus::Domain,
            Error::InvariantViolation(_) => FtrlStatus::InvariantViolation,
            Error::UnsupportedCombination(_) => FtrlStatus::Unsupported,
            Error::DimensionMismatch { .. } | Error::LengthMismatch { .. } => FtrlStatus::DimensionMismatch,
            Error::InternalConsistency(_) => FtrlStatus::InternalConsistency,
            Error::Unbounded(_) => FtrlStatus::Unbounded,
            Error::Parse { .. } => FtrlStatus::Parse,
        }
    }
}

/// Learners constructible through the C ABI.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FtrlLearnerKind {
    DualAveraging = 0,
    ConstantOgd = 1,
    FtrlProximal = 2,
    AdagradProximal = 3,
    AdagradDa = 4,
    FtrlL1 = 5,
    Entropic = 6,
    ScOgd = 7,
    MdL1 = 8,
    LazyProjection = 9,
    GreedyProjection = 10,
}

impl From<FtrlLearnerKind> for LearnerKind {
    fn from(k: FtrlLearnerKind) -> Self {
        match k {
            FtrlLearnerKind::DualAveraging => LearnerKind::DualAveraging,
            FtrlLearnerKind::ConstantOgd => LearnerKind::ConstantOgd,
            FtrlLearnerKind::FtrlProximal => LearnerKind::FtrlProximal,
            FtrlLearnerKind::AdagradProximal => LearnerKind::AdaGradProximal,
            FtrlLearnerKind::AdagradDa => LearnerKind::AdaGradDa,
            FtrlLearnerKind::FtrlL1 => LearnerKind::FtrlL1,
            FtrlLearnerKind::Entropic => LearnerKind::Entropic,
            FtrlLearnerKind::ScOgd => LearnerKind::ScOgd,
            FtrlLearnerKind::MdL1 => LearnerKind::MdL1,
            FtrlLearnerKind::LazyProjection => LearnerKind::LazyProjection,
            FtrlLearnerKind::GreedyProjection => LearnerKind::GreedyProjection,
        }
    }
}

/// Learner constants. `eta <= 0` selects `R / (G sqrt(rounds))` for the
/// fixed-rate learners.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtrlParams {
    pub n: usize,
    pub rounds: usize,
    pub r: f64,
    pub g: f64,
    pub r_inf: f64,
    pub g_inf: f64,
    pub lambda: f64,
    pub eta: f64,
}

/// Opaque learner handle.
pub struct FtrlLearner {
    inner: Box<dyn OnlineLearner>,
}

fn guard(f: impl FnOnce() -> Result<(), FtrlStatus>) -> FtrlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FtrlStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => FtrlStatus::Panic,
    }
}

fn core<T>(r: ftrl_core::Result<T>) -> Result<T, FtrlStatus> {
    r.map_err(|e| FtrlStatus::from(&e))
}

unsafe fn input<'a>(ptr: *const f64, len: usize) -> Result<&'a [f64], FtrlStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(FtrlStatus::NullPointer);
    }
    Ok(slice::from_raw_parts(ptr, len))
}

unsafe fn output<'a>(ptr: *mut f64, len: usize) -> Result<&'a mut [f64], FtrlStatus> {
    if len == 0 {
        return Ok(&mut []);
    }
    if ptr.is_null() {
        return Err(FtrlStatus::NullPointer);
    }
    Ok(slice::from_raw_parts_mut(ptr, len))
}

fn write_point(x: &Point, out: &mut [f64]) -> Result<(), FtrlStatus> {
    if out.len() != x.dim() {
        return Err(FtrlStatus::DimensionMismatch);
    }
    out.copy_from_slice(x.as_slice());
    Ok(())
}

/// Creates a learner; on success `*out` owns a handle to release with
/// `ftrl_learner_free`.
///
/// # Safety
/// `params` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ftrl_learner_new(
    kind: FtrlLearnerKind,
    params: *const FtrlParams,
    out: *mut *mut FtrlLearner,
) -> FtrlStatus {
    guard(|| {
        if params.is_null() || out.is_null() {
            return Err(FtrlStatus::NullPointer);
        }
        let p = &*params;
        let params = Params {
            stream: StreamKind::RandomLinear,
            rounds: p.rounds,
            seed: 0,
            n: p.n,
            r: p.r,
            g: p.g,
            r_inf: p.r_inf,
            g_inf: p.g_inf,
            lambda: p.lambda,
            eta: (p.eta > 0.0).then_some(p.eta),
            set: None,
            data: None,
            active: None,
        };
        let inner = core(build_learner(kind.into(), &params))?;
        *out = Box::into_raw(Box::new(FtrlLearner { inner }));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `learner` must come from `ftrl_learner_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ftrl_learner_free(learner: *mut FtrlLearner) {
    if !learner.is_null() {
        drop(Box::from_raw(learner));
    }
}

/// Dimension of the learner's iterates, 0 for a null handle.
///
/// # Safety
/// `learner` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ftrl_learner_dim(learner: *const FtrlLearner) -> usize {
    learner.as_ref().map_or(0, |l| l.inner.dim())
}

/// Completed rounds, 0 for a null handle.
///
/// # Safety
/// `learner` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ftrl_learner_round(learner: *const FtrlLearner) -> usize {
    learner.as_ref().map_or(0, |l| l.inner.round())
}

/// Copies the point to play next into `out[0..len]`.
///
/// # Safety
/// `learner` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn ftrl_learner_current(learner: *const FtrlLearner, out: *mut f64, len: usize) -> FtrlStatus {
    guard(|| {
        let l = learner.as_ref().ok_or(FtrlStatus::NullPointer)?;
        write_point(l.inner.current(), output(out, len)?)
    })
}

/// Feeds the gradient `g[0..len]` and writes the next iterate to `out`.
///
/// # Safety
/// `learner` must be a live handle, `g` valid for `len` reads and `out`
/// valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn ftrl_learner_observe(
    learner: *mut FtrlLearner,
    g: *const f64,
    out: *mut f64,
    len: usize,
) -> FtrlStatus {
    guard(|| {
        let l = learner.as_mut().ok_or(FtrlStatus::NullPointer)?;
        if len != l.inner.dim() {
            return Err(FtrlStatus::DimensionMismatch);
        }
        let g = core(Point::new(input(g, len)?.to_vec()))?;
        let next = core(l.inner.observe(&g))?;
        write_point(&next, output(out, len)?)
    })
}

/// `argmin_x b x + lambda |x| + a x^2 / 2`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ftrl_soft_threshold(b: f64, lambda: f64, a: f64, out: *mut f64) -> FtrlStatus {
    guard(|| {
        let out = out.as_mut().ok_or(FtrlStatus::NullPointer)?;
        *out = core(soft_threshold_argmin(b, lambda, a))?;
        Ok(())
    })
}

/// Softmax of `z[0..len]` into `out[0..len]`.
///
/// # Safety
/// `z` must be valid for `len` reads and `out` for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn ftrl_softmax(z: *const f64, out: *mut f64, len: usize) -> FtrlStatus {
    guard(|| {
        if len == 0 {
            return Err(FtrlStatus::InvalidArgument);
        }
        let z = core(Point::new(input(z, len)?.to_vec()))?;
        write_point(&softmax_simplex(&z), output(out, len)?)
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ftrl_status_message(status: FtrlStatus) -> *const c_char {
    let msg: &'static CStr = match status {
        FtrlStatus::Ok => c"ok",
        FtrlStatus::NullPointer => c"null pointer",
        FtrlStatus::InvalidArgument => c"invalid argument",
        FtrlStatus::Domain => c"domain error",
        FtrlStatus::InvariantViolation => c"schedule invariant violated",
        FtrlStatus::Unsupported => c"unsupported combination",
        FtrlStatus::DimensionMismatch => c"dimension mismatch",
        FtrlStatus::InternalConsistency => c"internal consistency check failed",
        FtrlStatus::Unbounded => c"objective unbounded below",
        FtrlStatus::Parse => c"parse error",
        FtrlStatus::Panic => c"panic caught at the C boundary",
    };
    msg.as_ptr()
}
