use std::ffi::{CStr, CString};
use std::ptr;

use superclt_ffi::*;

fn last_error() -> String {
    let p = superclt_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn cfg0() -> *mut SupercltModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { superclt_model_new(1, 1.0, 2.0, 2.0, 1.0, 1.0, &mut m) }, SupercltStatus::Ok);
    m
}

fn basis(n: u32) -> *mut SupercltFunction {
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(superclt_function_new(&mut f), SupercltStatus::Ok);
        assert_eq!(superclt_function_add_term(f, &n, 1, 1.0), SupercltStatus::Ok);
    }
    f
}

#[test]
fn limit_constants_through_the_c_abi() {
    let m = cfg0();
    let (f1, f2, f3) = (basis(0), basis(1), basis(2));
    let mut v = 0.0;
    unsafe {
        assert_eq!(superclt_sigma2(m, f3, &mut v), SupercltStatus::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(superclt_rho2(m, f2, &mut v), SupercltStatus::Ok);
        assert_eq!(v, 2.0);
        assert_eq!(superclt_beta2(m, f1, &mut v), SupercltStatus::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(superclt_eta2(m, f1, &0.0, 1, &mut v), SupercltStatus::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(superclt_variance(m, f3, &0.0, 1, 1.0, &mut v), SupercltStatus::Ok);
        assert!((v - 3.68605).abs() < 1e-5);
        assert_eq!(superclt_mean(m, f1, &0.0, 1, 1.0, &mut v), SupercltStatus::Ok);
        assert!((v - 2f64.exp()).abs() < 1e-12);
        assert_eq!(superclt_function_eval(m, f2, &2.0, 1, &mut v), SupercltStatus::Ok);
        assert_eq!(v, 2.0);

        let (mut regime, mut gamma) = (SupercltRegime::Zero, 0);
        assert_eq!(superclt_classify(m, f2, &mut regime, &mut gamma), SupercltStatus::Ok);
        assert_eq!((regime, gamma), (SupercltRegime::Critical, 2));

        assert_eq!(superclt_model_eigenvalue(m, 3, &mut v), SupercltStatus::Ok);
        assert_eq!(v, 0.0);
        let mut n = 0usize;
        assert_eq!(superclt_model_multiplicity(m, 3, &mut n), SupercltStatus::Ok);
        assert_eq!(n, 1);

        for f in [f1, f2, f3] {
            superclt_function_free(f);
        }
        superclt_model_free(m);
    }
}

#[test]
fn errors_set_status_and_message() {
    let m = cfg0();
    let f2 = basis(1);
    let mut v = 0.0;
    unsafe {
        assert_eq!(superclt_sigma2(m, f2, &mut v), SupercltStatus::Validation);
        assert!(last_error().contains("small"), "{}", last_error());
        assert_eq!(superclt_sigma2(ptr::null(), f2, &mut v), SupercltStatus::NullPointer);
        assert!(last_error().contains("model"));
        assert_eq!(superclt_sigma2(m, f2, ptr::null_mut()), SupercltStatus::NullPointer);

        let mut bad = ptr::null_mut();
        assert_eq!(superclt_model_new(1, 1.0, 2.0, -1.0, 1.0, 1.0, &mut bad), SupercltStatus::Validation);
        assert!(bad.is_null());

        assert_eq!(superclt_model_eigenvalue(m, 0, &mut v), SupercltStatus::Validation);
        let json = CString::new("{\"dimension\": 1}").unwrap();
        assert_eq!(superclt_model_from_json(json.as_ptr(), &mut bad), SupercltStatus::Validation);

        assert_eq!(superclt_model_eigenvalue(m, 2, &mut v), SupercltStatus::Ok);
        assert!(superclt_last_error().is_null());

        superclt_function_free(f2);
        superclt_model_free(m);
        superclt_model_free(ptr::null_mut());
        superclt_string_free(ptr::null_mut());
    }
}

#[test]
fn model_from_json_matches_parameters() {
    let json = CString::new(
        r#"{"dimension": 1, "drift_c": 1.0, "diffusion": 2.0, "branch_a": 2.0, "branch_b": 1.0, "branch_rate": 1.0}"#,
    )
    .unwrap();
    let mut m = ptr::null_mut();
    let mut v = 0.0;
    unsafe {
        assert_eq!(superclt_model_from_json(json.as_ptr(), &mut m), SupercltStatus::Ok);
        assert_eq!(superclt_model_eigenvalue(m, 1, &mut v), SupercltStatus::Ok);
        assert_eq!(v, -2.0);
        superclt_model_free(m);
    }
    let version = unsafe { CStr::from_ptr(superclt_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn ensemble_run_accessors_and_verify() {
    let m = cfg0();
    let fs = [basis(0), basis(1), basis(2)];
    let names: Vec<CString> = ["phi1", "phi2", "phi3"].iter().map(|s| CString::new(*s).unwrap()).collect();
    let name_ptrs: Vec<_> = names.iter().map(|n| n.as_ptr()).collect();
    let fn_ptrs: Vec<*const SupercltFunction> = fs.iter().map(|&f| f as *const _).collect();
    let plan = CString::new(
        r#"{"scale_n": 100, "initial_measure": [{"point": [0.0], "mass": 1.0}], "checkpoints": [1.0, 2.0],
            "horizon": 3.0, "replicas": 300, "master_seed": 5}"#,
    )
    .unwrap();
    unsafe {
        let mut ens = ptr::null_mut();
        let st = superclt_ensemble_run(m, plan.as_ptr(), name_ptrs.as_ptr(), fn_ptrs.as_ptr(), 3, 1, &mut ens);
        assert_eq!(st, SupercltStatus::Ok, "{}", last_error());
        let (mut r, mut c, mut k) = (0, 0, 0);
        assert_eq!(superclt_ensemble_shape(ens, &mut r, &mut c, &mut k), SupercltStatus::Ok);
        assert_eq!((r, c, k), (300, 2, 3));

        let mut again = ptr::null_mut();
        assert_eq!(
            superclt_ensemble_run(m, plan.as_ptr(), name_ptrs.as_ptr(), fn_ptrs.as_ptr(), 3, 0, &mut again),
            SupercltStatus::Ok
        );
        let (mut v, mut alive) = (0.0, false);
        let (mut w, mut alive2) = (0.0, false);
        for rep in [0, 17, 299] {
            assert_eq!(superclt_ensemble_readout(ens, rep, 1, 2, &mut v, &mut alive), SupercltStatus::Ok);
            assert_eq!(superclt_ensemble_readout(again, rep, 1, 2, &mut w, &mut alive2), SupercltStatus::Ok);
            assert_eq!((v, alive), (w, alive2));
            if !alive {
                assert_eq!(v, 0.0);
            }
        }
        assert_eq!(superclt_ensemble_readout(ens, 300, 0, 0, &mut v, &mut alive), SupercltStatus::Validation);
        assert_eq!(superclt_ensemble_w_inf(ens, 0, &mut v), SupercltStatus::Ok);
        assert!(v >= 0.0);

        let mut json = ptr::null_mut();
        let st = superclt_ensemble_verify(ens, fs[2], fs[1], fs[0], 2.0, &mut json);
        assert_eq!(st, SupercltStatus::Ok, "{}", last_error());
        let report: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        superclt_string_free(json);
        let names: Vec<&str> = report["tests"].as_array().unwrap().iter().map(|t| t["name"].as_str().unwrap()).collect();
        assert!(names.contains(&"ks[c4:phi3]") && names.contains(&"survival(1)"));

        let st = superclt_ensemble_verify(ens, fs[2], ptr::null(), fs[0], 2.0, &mut json);
        assert_eq!(st, SupercltStatus::Validation);

        superclt_ensemble_free(ens);
        superclt_ensemble_free(again);
        for f in fs {
            superclt_function_free(f);
        }
        superclt_model_free(m);
    }
}

#[test]
fn too_few_replicas_is_insufficient_data() {
    let m = cfg0();
    let plan = CString::new(
        r#"{"scale_n": 100, "initial_measure": [{"point": [0.0], "mass": 1.0}], "checkpoints": [1.0], "replicas": 10, "master_seed": 1}"#,
    )
    .unwrap();
    unsafe {
        let mut ens = ptr::null_mut();
        assert_eq!(superclt_ensemble_run(m, plan.as_ptr(), ptr::null(), ptr::null(), 0, 0, &mut ens), SupercltStatus::Ok);
        let mut json = ptr::null_mut();
        let st = superclt_ensemble_verify(ens, ptr::null(), ptr::null(), ptr::null(), 1.0, &mut json);
        assert_eq!(st, SupercltStatus::InsufficientData);
        assert!(json.is_null());
        superclt_ensemble_free(ens);
        superclt_model_free(m);
    }
}

#[test]
fn generated_header_declares_the_api_and_compiles_as_c() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/superclt.h")).unwrap();
    for name in [
        "typedef struct SupercltModel SupercltModel",
        "SUPERCLT_STATUS_NULL_POINTER",
        "SUPERCLT_REGIME_CRITICAL",
        "superclt_model_new",
        "superclt_ensemble_verify",
        "superclt_last_error",
        "superclt_string_free",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
    let probe = std::env::temp_dir().join(format!("superclt_probe_{}.c", std::process::id()));
    std::fs::write(&probe, "#include \"superclt.h\"\nint main(void) { return superclt_version() == 0; }\n").unwrap();
    let status = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
        .arg(dir.join("include"))
        .arg(&probe)
        .status();
    std::fs::remove_file(&probe).ok();
    match status {
        Ok(s) => assert!(s.success(), "header does not compile as C"),
        Err(e) => eprintln!("no C compiler available, syntax check skipped: {e}"),
    }
}
