use std::ffi::{CStr, CString};
use std::ptr;

use diamflow_ffi::*;
use DfStatus::*;

fn last_error() -> String {
    let p = diamflow_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn ngon_measures() {
    unsafe {
        let mut cfg = ptr::null_mut();
        assert_eq!(diamflow_regular_ngon(64, &mut cfg), DF_STATUS_OK);
        assert_eq!(diamflow_config_len(cfg), 64);
        let mut d = 0.0;
        assert_eq!(diamflow_diameter(cfg, &mut d), DF_STATUS_OK);
        assert!((d - 2.0).abs() < 1e-14);
        let mut lr = 1.0;
        assert_eq!(diamflow_log_ratio(cfg, &mut lr), DF_STATUS_OK);
        assert!(lr.abs() < 1e-10, "{lr}");
        let mut ld = 0.0;
        assert_eq!(diamflow_log_discriminant(cfg, &mut ld), DF_STATUS_OK);
        assert!((ld - 64.0 * 64f64.ln()).abs() < 1e-10);
        diamflow_config_free(cfg);
    }
}

#[test]
fn config_roundtrip_through_buffers() {
    let re = [1.0, 0.0, -1.0, 0.0];
    let im = [0.0, 1.0, 0.0, -1.0];
    unsafe {
        let mut cfg = ptr::null_mut();
        assert_eq!(
            diamflow_config_new(re.as_ptr(), im.as_ptr(), 4, &mut cfg),
            DF_STATUS_OK
        );
        let (mut r2, mut i2) = ([0.0; 4], [0.0; 4]);
        assert_eq!(
            diamflow_config_points(cfg, r2.as_mut_ptr(), i2.as_mut_ptr(), 4),
            DF_STATUS_OK
        );
        assert_eq!((r2, i2), (re, im));
        assert_eq!(
            diamflow_config_points(cfg, r2.as_mut_ptr(), i2.as_mut_ptr(), 3),
            DF_STATUS_INVALID_ARGUMENT
        );
        diamflow_config_free(cfg);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut cfg = ptr::null_mut();
        assert_eq!(
            diamflow_regular_ngon(1, &mut cfg),
            DF_STATUS_INVALID_ARGUMENT
        );
        assert!(cfg.is_null());
        assert!(!last_error().is_empty());

        let re = [0.0, 0.0, 1.0];
        let im = [0.0, 0.0, 0.0];
        assert_eq!(
            diamflow_config_new(re.as_ptr(), im.as_ptr(), 3, &mut cfg),
            DF_STATUS_OK
        );
        let mut v = 0.0;
        assert_eq!(diamflow_log_discriminant(cfg, &mut v), DF_STATUS_DEGENERATE);
        diamflow_config_free(cfg);

        let nan = [f64::NAN, 1.0];
        assert_eq!(
            diamflow_config_new(nan.as_ptr(), im.as_ptr(), 2, &mut cfg),
            DF_STATUS_INVALID_ARGUMENT
        );

        assert_eq!(
            diamflow_diameter(ptr::null(), &mut v),
            DF_STATUS_NULL_POINTER
        );
        assert!(last_error().contains("config"));

        let p = diamflow_profile_linear();
        let mut rep = DfBindingReport::default();
        assert_eq!(
            diamflow_c_max(7, p, 1e-8, &mut rep),
            DF_STATUS_INVALID_ARGUMENT
        );
        assert_eq!(
            diamflow_c_max(8, p, 0.0, &mut rep),
            DF_STATUS_INVALID_ARGUMENT
        );
        diamflow_profile_free(p);

        let th = [0.0, std::f64::consts::PI];
        let huge = [1e6, 1e6];
        let mut p = ptr::null_mut();
        assert_eq!(
            diamflow_profile_table(th.as_ptr(), huge.as_ptr(), 2, &mut p),
            DF_STATUS_OK
        );
        assert_eq!(
            diamflow_c_max(16, p, 1e-6, &mut rep),
            DF_STATUS_SOLVER_FAILURE
        );
        diamflow_profile_free(p);

        // The field is undefined at the origin.
        let zre = [0.0, 1.0, -1.0];
        let zim = [0.0, 0.0, 0.0];
        assert_eq!(
            diamflow_config_new(zre.as_ptr(), zim.as_ptr(), 3, &mut cfg),
            DF_STATUS_OK
        );
        let p = diamflow_profile_cosine();
        let mut out = ptr::null_mut();
        assert_eq!(diamflow_flow_map(cfg, 0.1, p, &mut out), DF_STATUS_DOMAIN);
        diamflow_profile_free(p);
        diamflow_config_free(cfg);

        let missing = CString::new("/nonexistent/dir/cfg.txt").unwrap();
        assert_eq!(
            diamflow_config_read(missing.as_ptr(), &mut cfg),
            DF_STATUS_IO
        );

        diamflow_config_free(ptr::null_mut());
        diamflow_profile_free(ptr::null_mut());
    }
}

#[test]
fn solvers_and_quadrature() {
    unsafe {
        let p = diamflow_profile_linear();
        let mut rep = DfBindingReport::default();
        assert_eq!(diamflow_c_max(4, p, 1e-10, &mut rep), DF_STATUS_OK);
        assert!((rep.c_max - 4.0 * (3f64.sqrt() - 1.0)).abs() < 2e-10);
        assert!(rep.c_upper > rep.c_max);
        let mut t = 0.0;
        assert_eq!(diamflow_t_max(4, p, 1e-10, &mut t), DF_STATUS_OK);
        assert!((t - rep.c_max / 4.0).abs() < 1e-15);
        let mut e = 0.0;
        assert_eq!(diamflow_eps_max(4, 1e-12, &mut e), DF_STATUS_OK);
        assert!((e - (3f64.sqrt() - 1.0)).abs() < 2e-12);

        let mut q = DfQuadratureResult::default();
        assert_eq!(diamflow_integral(p, 64, &mut q), DF_STATUS_OK);
        assert_eq!(q.grid_size, 64);
        assert!(q.im.abs() < 1e-12);
        assert!(
            (diamflow_limit_constant(q.re) - (-q.re * std::f64::consts::PI.powi(2) / 128.0).exp())
                .abs()
                < 1e-15
        );
        assert_eq!(diamflow_integral(p, 3, &mut q), DF_STATUS_INVALID_ARGUMENT);
        diamflow_profile_free(p);
    }
}

#[test]
fn push_flow_and_power_sums() {
    unsafe {
        let p = diamflow_profile_linear();
        let n = 32usize;
        let c = 1.5;
        let (mut pushed, mut base, mut flowed) =
            (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(
            diamflow_push_construction(n, c, p, &mut pushed),
            DF_STATUS_OK
        );
        assert_eq!(diamflow_regular_ngon(n, &mut base), DF_STATUS_OK);
        assert_eq!(
            diamflow_flow_map(base, c / n as f64, p, &mut flowed),
            DF_STATUS_OK
        );
        let (mut a_re, mut a_im) = (vec![0.0; n], vec![0.0; n]);
        let (mut b_re, mut b_im) = (vec![0.0; n], vec![0.0; n]);
        diamflow_config_points(pushed, a_re.as_mut_ptr(), a_im.as_mut_ptr(), n);
        diamflow_config_points(flowed, b_re.as_mut_ptr(), b_im.as_mut_ptr(), n);
        for k in 0..n {
            assert!((a_re[k] - b_re[k]).abs() < 1e-14 && (a_im[k] - b_im[k]).abs() < 1e-14);
        }

        let (mut re, mut im) = ([0.0; 4], [0.0; 4]);
        assert_eq!(
            diamflow_power_sums(base, p, 4, re.as_mut_ptr(), im.as_mut_ptr()),
            DF_STATUS_OK
        );
        assert!(re[0].abs() < 1e-10 && re[2].abs() < 1e-10);
        assert!(re[1] < 0.0);
        let mut rem = 0.0;
        assert_eq!(
            diamflow_remainder_power_sum(base, p, 0.0, &mut rem),
            DF_STATUS_OK
        );
        // At t = 0 the envelope is Σ|ρ|⁴, which dominates |S₄|.
        assert!(rem >= re[3].hypot(im[3]) * (1.0 - 1e-12));
        assert_eq!(
            diamflow_remainder_power_sum(base, p, 10.0, &mut rem),
            DF_STATUS_DOMAIN
        );

        let mut scaled = ptr::null_mut();
        assert_eq!(
            diamflow_rescale_to_diameter(pushed, 1.0, &mut scaled),
            DF_STATUS_OK
        );
        let mut d = 0.0;
        diamflow_diameter(scaled, &mut d);
        assert!((d - 1.0).abs() < 1e-14);

        let mut moved = ptr::null_mut();
        assert_eq!(
            diamflow_single_diameter_move(n, 0.01, &mut moved),
            DF_STATUS_OK
        );
        let (mut m_re, mut m_im) = (vec![0.0; n], vec![0.0; n]);
        diamflow_config_points(moved, m_re.as_mut_ptr(), m_im.as_mut_ptr(), n);
        assert!((m_re[0] - 1.01).abs() < 1e-15 && (m_re[n / 2] + 0.99).abs() < 1e-15);
        for h in [pushed, base, flowed, scaled, moved] {
            diamflow_config_free(h);
        }
        diamflow_profile_free(p);
    }
}

#[test]
fn table_profile_and_file_roundtrip() {
    let dir = std::env::temp_dir().join(format!("diamflow-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = CString::new(dir.join("cfg.txt").to_str().unwrap()).unwrap();
    unsafe {
        let th = [0.0, std::f64::consts::PI];
        let va = [1.0, -1.0];
        let mut p = ptr::null_mut();
        assert_eq!(
            diamflow_profile_table(th.as_ptr(), va.as_ptr(), 2, &mut p),
            DF_STATUS_OK
        );
        let mut cfg = ptr::null_mut();
        assert_eq!(
            diamflow_push_construction(16, 1.0, p, &mut cfg),
            DF_STATUS_OK
        );
        assert_eq!(diamflow_config_write(cfg, path.as_ptr()), DF_STATUS_OK);
        let mut back = ptr::null_mut();
        assert_eq!(diamflow_config_read(path.as_ptr(), &mut back), DF_STATUS_OK);
        let (mut a, mut b) = (0.0, 0.0);
        diamflow_log_ratio(cfg, &mut a);
        diamflow_log_ratio(back, &mut b);
        assert_eq!(a, b);
        diamflow_config_free(cfg);
        diamflow_config_free(back);
        diamflow_profile_free(p);

        let bad = [0.0, 1.0];
        assert_eq!(
            diamflow_profile_table(bad.as_ptr(), va.as_ptr(), 2, &mut p),
            DF_STATUS_INVALID_ARGUMENT
        );
    }
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(diamflow_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
