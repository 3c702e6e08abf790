use std::ffi::CStr;
use std::ptr;

use nonclassical_ffi::*;

fn socs(s: f64, alpha: f64) -> *mut nc_state_t {
    let mut st = ptr::null_mut();
    let t = (1.0 - s * s).sqrt();
    assert_eq!(unsafe { nc_state_socs_new(s, t, alpha, 0.0, 0.0, &mut st) }, nc_status_t::NC_OK);
    assert!(!st.is_null());
    st
}

#[test]
fn moment_matches_between_backends() {
    let st = socs(0.5, 1.0);
    let (mut a, mut b, mut c, mut d) = (0.0, 0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(nc_state_moment(st, 2, 1, NC_BACKEND_CLOSED, &mut a, &mut b), nc_status_t::NC_OK);
        assert_eq!(nc_state_moment(st, 2, 1, NC_BACKEND_ORACLE, &mut c, &mut d), nc_status_t::NC_OK);
        nc_state_free(st);
    }
    assert!((a - c).abs() < 1e-9 * a.abs().max(1.0));
    assert!((b - d).abs() < 1e-9);
}

#[test]
fn normalization_and_probabilities() {
    let mut st = ptr::null_mut();
    unsafe {
        assert_eq!(nc_state_sots_new(0.3, 0.9539392014169457, 1.0, 0.25, &mut st), nc_status_t::NC_OK);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(nc_state_moment(st, 0, 0, NC_BACKEND_CLOSED, &mut re, &mut im), nc_status_t::NC_OK);
        assert!((re - 1.0).abs() < 1e-12 && im == 0.0);
        let total: f64 = (0..200)
            .map(|m| {
                let mut p = 0.0;
                assert_eq!(nc_state_photon_probability(st, m, &mut p), nc_status_t::NC_OK);
                p
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-10);
        nc_state_free(st);
    }
}

#[test]
fn witness_flags() {
    // a† a on thermal light with n̄ = 1 gives p_n ∝ n² 2^-n, whose Q is 17/39
    let mut st = ptr::null_mut();
    let mut w = nc_witness_t::default();
    unsafe {
        assert_eq!(nc_state_sots_new(0.0, 1.0, 1.0, 0.0, &mut st), nc_status_t::NC_OK);
        assert_eq!(nc_state_witness(st, NC_CRITERION_MANDEL_Q, 2, NC_BACKEND_CLOSED, &mut w), nc_status_t::NC_OK);
        assert!((w.value - 17.0 / 39.0).abs() < 1e-12);
        assert!(!w.nonclassical && !w.singular);
        nc_state_free(st);
    }
    let st = socs(0.2, 2.0);
    unsafe {
        assert_eq!(nc_state_witness(st, NC_CRITERION_KLYSHKO, 1, NC_BACKEND_ORACLE, &mut w), nc_status_t::NC_OK);
        assert!(w.nonclassical);
        let mut q = -1.0;
        assert_eq!(nc_state_husimi(st, 0.0, 0.0, &mut q), nc_status_t::NC_OK);
        assert!(q >= 0.0);
        nc_state_free(st);
    }
}

#[test]
fn errors_are_reported() {
    let mut st = ptr::null_mut();
    unsafe {
        assert_eq!(nc_state_socs_new(0.6, 0.6, 1.0, 0.0, 0.0, &mut st), nc_status_t::NC_INVALID_ARGUMENT);
        assert!(st.is_null());
        let msg = CStr::from_ptr(nc_last_error_message()).to_string_lossy().into_owned();
        assert!(!msg.is_empty());

        assert_eq!(nc_state_socs_new(0.6, 0.8, 1.0, 0.0, 0.0, ptr::null_mut()), nc_status_t::NC_NULL_POINTER);

        let st = socs(0.2, 0.0);
        let mut w = nc_witness_t::default();
        assert_eq!(nc_state_witness(st, NC_CRITERION_MANDEL_Q, 2, NC_BACKEND_CLOSED, &mut w), nc_status_t::NC_UNDEFINED);
        assert_eq!(nc_state_witness(st, 99, 2, NC_BACKEND_CLOSED, &mut w), nc_status_t::NC_INVALID_ARGUMENT);
        assert_eq!(nc_state_witness(st, NC_CRITERION_HOA, 2, 7, &mut w), nc_status_t::NC_INVALID_ARGUMENT);
        assert_eq!(nc_state_witness(ptr::null(), NC_CRITERION_HOA, 2, 0, &mut w), nc_status_t::NC_NULL_POINTER);

        let mut p = 0.0;
        assert_eq!(nc_state_photon_probability(st, 0, &mut p), nc_status_t::NC_OK);
        assert!(nc_last_error_message().is_null());
        nc_state_free(st);
        nc_state_free(ptr::null_mut());
    }
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(nc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/nonclassical.h")).unwrap();
    for name in [
        "nc_state_socs_new",
        "nc_state_sots_new",
        "nc_state_free",
        "nc_state_moment",
        "nc_state_photon_probability",
        "nc_state_witness",
        "nc_state_husimi",
        "nc_last_error_message",
        "nc_version",
        "typedef struct nc_state_t nc_state_t;",
        "NC_CRITERION_HUSIMI 6",
        "NC_PANIC = 6",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
