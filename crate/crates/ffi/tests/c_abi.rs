use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use qsi_ffi::*;

const GHZ3: &str = r#"{"subsystems":[{"label":"q1","dim":2,"role":"transfer"},{"label":"q2","dim":2,"role":"bob_qsi"},{"label":"q3","dim":2,"role":"reference"}],"state":{"kind":"ghz"}}"#;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = qsi_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn load(doc: &str) -> *mut QsiState {
    let mut h = ptr::null_mut();
    let json = cstr(doc);
    assert_eq!(unsafe { qsi_state_from_json(json.as_ptr(), 0, &mut h) }, QsiStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn ghz3_information_quantities() {
    let h = load(GHZ3);
    assert_eq!(unsafe { qsi_state_dim(h) }, 8);
    let mut v = f64::NAN;
    let q1 = cstr("q1");
    let q2 = cstr("q2");
    let q3 = cstr("q3");
    let q12 = cstr("q1,q2");
    unsafe {
        assert_eq!(qsi_entropy(h, q1.as_ptr(), &mut v), QsiStatus::Ok);
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(qsi_entropy(h, q12.as_ptr(), &mut v), QsiStatus::Ok);
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(qsi_qmi(h, q1.as_ptr(), q2.as_ptr(), &mut v), QsiStatus::Ok);
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(qsi_qcmi(h, q1.as_ptr(), q3.as_ptr(), q2.as_ptr(), &mut v), QsiStatus::Ok);
        assert!((v - 1.0).abs() < 1e-12);
        qsi_state_free(h);
    }
}

#[test]
fn ghz3_costs_and_recovery() {
    let h = load(GHZ3);
    let mut r = QsiRates::default();
    unsafe {
        assert_eq!(qsi_costs(h, 0, 1, QsiChannel::Classical, &mut r), QsiStatus::Ok);
        assert!((r.channel_rate - 1.0).abs() < 1e-12 && r.ebit_rate.abs() < 1e-12);
        assert_eq!(qsi_costs(h, 0, 1, QsiChannel::Quantum, &mut r), QsiStatus::Ok);
        assert!((r.channel_rate - 0.5).abs() < 1e-12 && (r.ebit_rate + 0.5).abs() < 1e-12);
        assert_eq!(qsi_costs(h, 1, 0, QsiChannel::Quantum, &mut r), QsiStatus::InvalidArgument);
        assert!(!last_error().is_empty());

        let (c, s1, s2) = (cstr("q1"), cstr("q2"), cstr("q3"));
        let mut rec = QsiRecovery::default();
        assert_eq!(qsi_recovery(h, c.as_ptr(), s1.as_ptr(), s2.as_ptr(), &mut rec), QsiStatus::Ok);
        assert!((rec.qcmi - 1.0).abs() < 1e-10);
        assert!((rec.bound - 0.5f64.sqrt()).abs() < 1e-10);
        assert!(rec.achieved_fidelity >= rec.bound - 1e-8);
        assert!(rec.bound_satisfied && !rec.trace_deficiency_flagged);
        qsi_state_free(h);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(qsi_state_from_json(ptr::null(), 0, &mut h), QsiStatus::NullPointer);
        let bad = cstr(r#"{"subsystems":[{"label":"a","dim":1,"role":"transfer"}],"state":{"kind":"bell"}}"#);
        assert_eq!(qsi_state_from_json(bad.as_ptr(), 0, &mut h), QsiStatus::InvalidDocument);
        assert!(last_error().contains("dim must be >= 2"), "{}", last_error());
        assert!(h.is_null());

        let unnormalized = cstr(
            r#"{"subsystems":[{"label":"a","dim":2,"role":"transfer"}],"state":{"kind":"pure","amplitudes":[[1,0],[1,0]]}}"#,
        );
        assert_eq!(qsi_state_from_json(unnormalized.as_ptr(), 0, &mut h), QsiStatus::InvalidDocument);
        assert!(last_error().contains("state.amplitudes"));

        let h = load(GHZ3);
        let mut v = 0.0;
        let nope = cstr("nope");
        assert_eq!(qsi_entropy(h, nope.as_ptr(), &mut v), QsiStatus::InvalidArgument);
        assert!(last_error().contains("nope"));
        let q1 = cstr("q1");
        assert_eq!(qsi_entropy(h, q1.as_ptr(), ptr::null_mut()), QsiStatus::NullPointer);
        assert_eq!(qsi_entropy(ptr::null(), q1.as_ptr(), &mut v), QsiStatus::NullPointer);
        assert_eq!(qsi_entropy(h, q1.as_ptr(), &mut v), QsiStatus::Ok);
        assert!(qsi_last_error_message().is_null());
        qsi_state_free(h);
        qsi_state_free(ptr::null_mut());
    }
}

fn run(args: &[&str]) -> (QsiStatus, Option<String>, c_int) {
    let owned: Vec<CString> = args.iter().map(|a| cstr(a)).collect();
    let ptrs: Vec<*const c_char> = owned.iter().map(|a| a.as_ptr()).collect();
    let mut out = ptr::null_mut();
    let mut pass = -1;
    let status = unsafe { qsi_run(ptrs.as_ptr(), ptrs.len(), &mut out, &mut pass) };
    let json = (!out.is_null()).then(|| {
        let s = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
        unsafe { qsi_string_free(out) };
        s
    });
    (status, json, pass)
}

#[test]
fn run_matches_cli_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ghz3.json");
    std::fs::write(&path, GHZ3).unwrap();
    let p = path.to_str().unwrap();

    let (status, json, pass) = run(&["catalog", "--state", p]);
    assert_eq!(status, QsiStatus::Ok);
    assert_eq!(pass, 1);
    let v: serde_json::Value = serde_json::from_str(json.as_deref().unwrap()).unwrap();
    assert_eq!(v["results"]["SM.c"], 1.0);
    assert_eq!(v["results"]["FQSW.E"], -0.5);

    let (again, json2, _) = run(&["catalog", "--state", p]);
    assert_eq!(again, QsiStatus::Ok);
    assert_eq!(json, json2);

    let (status, json, _) = run(&["frobnicate"]);
    assert_eq!(status, QsiStatus::Usage);
    assert!(json.is_none());

    let (status, _, _) = run(&["grid", "--state", "/nonexistent/doc.json"]);
    assert_eq!(status, QsiStatus::InvalidDocument);

    let (status, _, pass) = run(&["costs", "--state", p, "--use-alice", "1", "--use-bob", "0"]);
    assert_eq!(status, QsiStatus::InvalidArgument);
    assert_eq!(pass, 0);
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(qsi_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
