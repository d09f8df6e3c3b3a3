use std::ffi::CString;
use std::ptr;

use jcm_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    let n = unsafe { jcm_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n.min(255)].iter().map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

fn reference_model() -> *mut JcmModel {
    let mut model = ptr::null_mut();
    let st = unsafe { jcm_model_new(4, 50f64.sqrt(), 0.0, 256, JcmMode::Quadratic as u32, 1e-9, &mut model) };
    assert_eq!(st, JcmStatus::Ok);
    model
}

#[test]
fn evolve_and_observe() {
    let model = reference_model();
    unsafe {
        let mut cutoff = 0;
        assert_eq!(jcm_model_cutoff(model, &mut cutoff), JcmStatus::Ok);
        assert_eq!(cutoff, 256);

        let mut state = ptr::null_mut();
        assert_eq!(jcm_model_evolve_pi(model, 1, 2, &mut state), JcmStatus::Ok);
        let mut s = f64::NAN;
        assert_eq!(jcm_state_entropy(state, &mut s), JcmStatus::Ok);
        assert!(s < 1e-6);
        let mut p = vec![0.0; cutoff + 1];
        assert_eq!(jcm_state_pnd(state, p.as_mut_ptr(), p.len()), JcmStatus::Ok);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let mut rho = JcmAtomDensity::default();
        assert_eq!(jcm_state_atom_density(state, &mut rho), JcmStatus::Ok);
        assert!((rho.rho11 - 1.0).abs() < 1e-10);
        jcm_state_free(state);

        let expr = CString::new("pi/4").unwrap();
        let mut state = ptr::null_mut();
        assert_eq!(jcm_model_evolve_expr(model, expr.as_ptr(), &mut state), JcmStatus::Ok);
        assert_eq!(jcm_state_entropy(state, &mut s), JcmStatus::Ok);
        assert!((s - std::f64::consts::LN_2).abs() < 1e-6);

        let mut grid = ptr::null_mut();
        assert_eq!(jcm_state_q_grid(state, -12.0, 12.0, -12.0, 12.0, 121, 121, &mut grid), JcmStatus::Ok);
        let (mut count, mut mass) = (0usize, 0.0);
        assert_eq!(jcm_grid_count_components(grid, 0.1, &mut count), JcmStatus::Ok);
        assert_eq!(jcm_grid_riemann_sum(grid, &mut mass), JcmStatus::Ok);
        assert_eq!(count, 4);
        assert!((mass - 1.0).abs() < 1e-3);
        let mut values = vec![0.0; 121 * 121];
        assert_eq!(jcm_grid_values(grid, values.as_mut_ptr(), values.len()), JcmStatus::Ok);
        assert!(values.iter().all(|v| *v >= 0.0));
        assert_eq!(jcm_grid_values(grid, values.as_mut_ptr(), 10), JcmStatus::BufferTooSmall);
        jcm_grid_free(grid);
        jcm_state_free(state);

        let mut w = 0.0;
        assert_eq!(jcm_model_inversion(model, 0.0, &mut w), JcmStatus::Ok);
        assert!((w - 1.0).abs() < 1e-12);

        let mut cat = JcmCatDiagnostics::default();
        assert_eq!(jcm_model_diagnose_cat(model, 1, &mut cat), JcmStatus::Ok);
        assert!(cat.fidelity_ground > 0.999);
        assert_eq!(jcm_model_diagnose_cat(model, 2, &mut cat), JcmStatus::InvalidArgument);
        assert!(last_error().contains('2'), "{}", last_error());
        jcm_model_free(model);
    }
}

#[test]
fn scalar_helpers() {
    unsafe {
        let mut w = 0.0;
        assert_eq!(jcm_rabi_frequency(50, 4, JcmMode::Quadratic as u32, &mut w), JcmStatus::Ok);
        assert_eq!(w, 2755.0);
        assert_eq!(jcm_rabi_frequency(50, 4, 7, &mut w), JcmStatus::InvalidArgument);
        assert!(last_error().contains("mode"));
        let (mut delta, mut tau) = (0.0, 0.0);
        assert_eq!(jcm_dip_offset(1, 50.0, &mut delta, &mut tau), JcmStatus::Ok);
        assert!((delta - std::f64::consts::PI / 800.0).abs() < 1e-15);
        assert!((tau - std::f64::consts::FRAC_PI_4 - delta).abs() < 1e-15);
        assert_eq!(jcm_dip_offset(0, 50.0, &mut delta, &mut tau), JcmStatus::InvalidArgument);
    }
}

#[test]
fn errors_are_reported_not_raised() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(
            jcm_model_new(4, 50f64.sqrt(), 0.0, 60, JcmMode::Quadratic as u32, 1e-9, &mut model),
            JcmStatus::TailTooHeavy
        );
        assert!(model.is_null());
        assert_eq!(jcm_model_new(4, 1.0, 0.0, 40, 1, 1e-9, ptr::null_mut()), JcmStatus::NullPointer);

        let model = reference_model();
        let mut state = ptr::null_mut();
        let bad = CString::new("pi/").unwrap();
        assert_eq!(jcm_model_evolve_expr(model, bad.as_ptr(), &mut state), JcmStatus::Parse);
        assert_eq!(jcm_model_evolve_pi(model, 1, 0, &mut state), JcmStatus::InvalidArgument);
        assert_eq!(jcm_model_evolve(model, f64::NAN, &mut state), JcmStatus::InvalidArgument);
        assert_eq!(jcm_model_evolve(ptr::null(), 0.0, &mut state), JcmStatus::NullPointer);
        assert!(state.is_null());
        let mut s = 0.0;
        assert_eq!(jcm_state_entropy(ptr::null(), &mut s), JcmStatus::NullPointer);
        jcm_model_free(model);
        jcm_model_free(ptr::null_mut());
        jcm_state_free(ptr::null_mut());
        jcm_grid_free(ptr::null_mut());
    }
}

#[test]
fn last_error_truncates() {
    unsafe {
        let mut w = 0.0;
        jcm_rabi_frequency(1, 4, 9, &mut w);
        let full = jcm_last_error_message(ptr::null_mut(), 0);
        let mut buf = [0 as std::ffi::c_char; 4];
        assert_eq!(jcm_last_error_message(buf.as_mut_ptr(), buf.len()), full);
        assert_eq!(buf[3], 0);
    }
}
