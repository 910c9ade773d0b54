use std::ffi::CStr;
use std::process::Command;
use std::ptr;

use ftrl_ffi::*;

fn params(n: usize) -> FtrlParams {
    FtrlParams { n, rounds: 100, r: 1.0, g: 1.0, r_inf: 1.0, g_inf: 1.0, lambda: 0.1, eta: 0.0 }
}

fn new_learner(kind: FtrlLearnerKind, p: &FtrlParams) -> *mut FtrlLearner {
    let mut handle = ptr::null_mut();
    assert_eq!(unsafe { ftrl_learner_new(kind, p, &mut handle) }, FtrlStatus::Ok);
    assert!(!handle.is_null());
    handle
}

#[test]
fn constant_rate_learner_steps_against_gradient() {
    let mut p = params(2);
    p.eta = 0.25;
    let l = new_learner(FtrlLearnerKind::ConstantOgd, &p);
    unsafe {
        assert_eq!(ftrl_learner_dim(l), 2);
        let mut x = [9.0; 2];
        assert_eq!(ftrl_learner_current(l, x.as_mut_ptr(), 2), FtrlStatus::Ok);
        assert_eq!(x, [0.0, 0.0]);
        let g = [1.0, -2.0];
        assert_eq!(ftrl_learner_observe(l, g.as_ptr(), x.as_mut_ptr(), 2), FtrlStatus::Ok);
        assert_eq!(x, [-0.25, 0.5]);
        assert_eq!(ftrl_learner_round(l), 1);
        ftrl_learner_free(l);
    }
}

#[test]
fn every_kind_constructs() {
    for kind in [
        FtrlLearnerKind::DualAveraging,
        FtrlLearnerKind::ConstantOgd,
        FtrlLearnerKind::FtrlProximal,
        FtrlLearnerKind::AdagradProximal,
        FtrlLearnerKind::AdagradDa,
        FtrlLearnerKind::FtrlL1,
        FtrlLearnerKind::Entropic,
        FtrlLearnerKind::ScOgd,
        FtrlLearnerKind::MdL1,
        FtrlLearnerKind::LazyProjection,
        FtrlLearnerKind::GreedyProjection,
    ] {
        let l = new_learner(kind, &params(3));
        let g = [0.5, -0.5, 0.1];
        let mut x = [0.0; 3];
        assert_eq!(unsafe { ftrl_learner_observe(l, g.as_ptr(), x.as_mut_ptr(), 3) }, FtrlStatus::Ok, "{kind:?}");
        unsafe { ftrl_learner_free(l) };
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut handle = ptr::null_mut();
    let mut bad = params(2);
    bad.r = -1.0;
    unsafe {
        assert_eq!(ftrl_learner_new(FtrlLearnerKind::DualAveraging, &bad, &mut handle), FtrlStatus::InvalidArgument);
        assert!(handle.is_null());
        assert_eq!(ftrl_learner_new(FtrlLearnerKind::DualAveraging, ptr::null(), &mut handle), FtrlStatus::NullPointer);
        let l = new_learner(FtrlLearnerKind::DualAveraging, &params(2));
        let g = [1.0, 2.0, 3.0];
        let mut x = [0.0; 3];
        assert_eq!(ftrl_learner_observe(l, g.as_ptr(), x.as_mut_ptr(), 3), FtrlStatus::DimensionMismatch);
        let nan = [f64::NAN, 0.0];
        assert_eq!(ftrl_learner_observe(l, nan.as_ptr(), x.as_mut_ptr(), 2), FtrlStatus::Domain);
        assert_eq!(ftrl_learner_current(l, ptr::null_mut(), 2), FtrlStatus::NullPointer);
        ftrl_learner_free(l);
        ftrl_learner_free(ptr::null_mut());
        assert_eq!(ftrl_learner_dim(ptr::null()), 0);
    }
}

#[test]
fn closed_form_solvers() {
    let mut out = 0.0;
    unsafe {
        assert_eq!(ftrl_soft_threshold(-3.0, 1.0, 2.0, &mut out), FtrlStatus::Ok);
        assert_eq!(out, 1.0);
        assert_eq!(ftrl_soft_threshold(0.5, 1.0, 2.0, &mut out), FtrlStatus::Ok);
        assert_eq!(out, 0.0);
        assert_eq!(ftrl_soft_threshold(0.5, 1.0, 2.0, ptr::null_mut()), FtrlStatus::NullPointer);
        let z = [0.0, 0.0, 0.0, 0.0];
        let mut p = [0.0; 4];
        assert_eq!(ftrl_softmax(z.as_ptr(), p.as_mut_ptr(), 4), FtrlStatus::Ok);
        assert!(p.iter().all(|v| (v - 0.25).abs() < 1e-15));
        assert_eq!(ftrl_softmax(z.as_ptr(), p.as_mut_ptr(), 0), FtrlStatus::InvalidArgument);
    }
}

#[test]
fn status_messages_are_static_strings() {
    let msg = unsafe { CStr::from_ptr(ftrl_status_message(FtrlStatus::DimensionMismatch)) };
    assert_eq!(msg.to_str().unwrap(), "dimension mismatch");
    let ok = unsafe { CStr::from_ptr(ftrl_status_message(FtrlStatus::Ok)) };
    assert_eq!(ok.to_str().unwrap(), "ok");
}

#[test]
fn header_is_generated_and_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/ftrl.h");
    let text = std::fs::read_to_string(header).expect("generated header");
    for symbol in ["ftrl_learner_new", "ftrl_learner_observe", "ftrl_softmax", "FTRL_STATUS_OK", "typedef struct FtrlLearner FtrlLearner"] {
        assert!(text.contains(symbol), "{symbol}");
    }
    let status = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .status()
        .expect("a C compiler named cc");
    assert!(status.success());
}
