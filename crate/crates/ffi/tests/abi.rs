use std::ffi::{c_char, CStr, CString};
use std::ptr;

use sfdt_core::cover::{Cover, ValueMap};
use sfdt_core::io::CoverDoc;
use sfdt_ffi::*;

fn doc(c: &Cover, f: &ValueMap) -> CString {
    CString::new(CoverDoc::from_instance(c, f).to_json()).unwrap()
}

fn load(json: &CString) -> *mut SfdtInstance {
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { sfdt_instance_from_json(json.as_ptr(), &mut inst) }, SfdtStatus::Ok);
    assert!(!inst.is_null());
    inst
}

fn ladder(n: usize) -> *mut SfdtInstance {
    load(&doc(&Cover::circular_ladder(n).unwrap(), &ValueMap::constant(n, 2, 1)))
}

fn mobius(n: usize) -> *mut SfdtInstance {
    load(&doc(&Cover::mobius_ladder(n).unwrap(), &ValueMap::constant(n, 2, 1)))
}

fn last_error() -> String {
    let p = sfdt_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { sfdt_string_free(p) };
    s
}

#[test]
fn solve_finds_witness_on_mobius_ladder() {
    let inst = mobius(5);
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { sfdt_solve(inst, 0, 0.0, &mut sol) }, SfdtStatus::Ok);
    let len = unsafe { sfdt_solution_len(sol) };
    assert_eq!(len, 5);
    let mut picks = vec![usize::MAX; len];
    assert_eq!(unsafe { sfdt_solution_picks(sol, picks.as_mut_ptr(), len) }, SfdtStatus::Ok);
    assert!(picks.iter().all(|&q| q < 2));
    assert_eq!(unsafe { sfdt_check_transversal(inst, picks.as_ptr(), len) }, SfdtStatus::Ok);
    assert!(unsafe { sfdt_solution_nodes(sol) } > 0);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { sfdt_solution_to_json(sol, &mut json) }, SfdtStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["status"], "found");
    let one_based: Vec<usize> = serde_json::from_value(v["witness"].clone()).unwrap();
    assert_eq!(one_based, picks.iter().map(|q| q + 1).collect::<Vec<_>>());

    unsafe {
        sfdt_solution_free(sol);
        sfdt_instance_free(inst);
    }
}

#[test]
fn odd_ladder_has_no_witness_and_is_constructible() {
    let inst = ladder(5);
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { sfdt_solve(inst, 0, 0.0, &mut sol) }, SfdtStatus::No);
    assert!(!sol.is_null());
    assert_eq!(unsafe { sfdt_solution_len(sol) }, 0);
    let mut buf = [0usize; 5];
    assert_eq!(unsafe { sfdt_solution_picks(sol, buf.as_mut_ptr(), 5) }, SfdtStatus::No);
    unsafe { sfdt_solution_free(sol) };

    let mut tree = ptr::null_mut();
    assert_eq!(unsafe { sfdt_is_constructible(inst, &mut tree) }, SfdtStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(tree)).unwrap();
    assert_eq!(v["leaves"].as_array().unwrap().len(), 1);
    assert_eq!(unsafe { sfdt_is_constructible(inst, ptr::null_mut()) }, SfdtStatus::Ok);
    unsafe { sfdt_instance_free(inst) };

    let inst = mobius(5);
    let mut tree = ptr::null_mut();
    assert_eq!(unsafe { sfdt_is_constructible(inst, &mut tree) }, SfdtStatus::No);
    assert!(tree.is_null());
    unsafe { sfdt_instance_free(inst) };
}

#[test]
fn node_limit_aborts() {
    let inst = ladder(9);
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { sfdt_solve(inst, 2, 0.0, &mut sol) }, SfdtStatus::Aborted);
    assert!(!sol.is_null());
    unsafe {
        sfdt_solution_free(sol);
        sfdt_instance_free(inst);
    }
}

#[test]
fn bounded_and_strict_solving() {
    let t = Cover::tilde_complete(3, 2).unwrap();
    let inst = load(&doc(&t, &ValueMap::per_layer(3, &[2, 1])));
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { sfdt_solve_bounded(inst, false, 0, 0.0, &mut sol) }, SfdtStatus::Ok);
    assert!(unsafe { sfdt_solution_bounded(sol) });
    unsafe { sfdt_solution_free(sol) };
    assert_eq!(unsafe { sfdt_solve_bounded(inst, true, 0, 0.0, &mut sol) }, SfdtStatus::Ok);
    assert!(unsafe { sfdt_solution_strictly_bounded(sol) });
    unsafe {
        sfdt_solution_free(sol);
        sfdt_instance_free(inst);
    }

    // Fiber sums equal to degrees do not meet the strict precondition.
    let inst = ladder(4);
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { sfdt_solve_bounded(inst, true, 0, 0.0, &mut sol) }, SfdtStatus::Precondition);
    assert!(sol.is_null());
    assert!(!last_error().is_empty());
    unsafe { sfdt_instance_free(inst) };
}

#[test]
fn deficiency_and_transversal_checks() {
    let inst = ladder(4);
    // Constant picks on Γ4 span the 4-cycle: 4 edges against 4 units of f.
    let zeros = [0usize; 4];
    let mut d = i64::MIN;
    assert_eq!(unsafe { sfdt_deficiency(inst, zeros.as_ptr(), 4, &mut d) }, SfdtStatus::Ok);
    assert_eq!(d, 0);
    assert_eq!(unsafe { sfdt_check_transversal(inst, zeros.as_ptr(), 4) }, SfdtStatus::No);

    assert_eq!(unsafe { sfdt_check_transversal(inst, zeros.as_ptr(), 3) }, SfdtStatus::InvalidInput);
    assert!(last_error().contains("expected 4"));
    let bad = [0usize, 0, 2, 0];
    assert_eq!(unsafe { sfdt_check_transversal(inst, bad.as_ptr(), 4) }, SfdtStatus::InvalidInput);
    assert_eq!(unsafe { sfdt_deficiency(inst, zeros.as_ptr(), 4, ptr::null_mut()) }, SfdtStatus::NullPointer);
    unsafe { sfdt_instance_free(inst) };
}

#[test]
fn json_round_trip() {
    let json = doc(&Cover::mobius_ladder(4).unwrap(), &ValueMap::constant(4, 2, 1));
    let inst = load(&json);
    assert_eq!(unsafe { sfdt_instance_n(inst) }, 4);
    assert_eq!(unsafe { sfdt_instance_kappa(inst) }, 2);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sfdt_instance_to_json(inst, &mut out) }, SfdtStatus::Ok);
    assert_eq!(take_string(out), json.to_str().unwrap());
    unsafe { sfdt_instance_free(inst) };
}

#[test]
fn bad_input_reports_errors() {
    let mut inst = ptr::null_mut();
    let broken = CString::new("{\"n\": 3").unwrap();
    assert_eq!(unsafe { sfdt_instance_from_json(broken.as_ptr(), &mut inst) }, SfdtStatus::InvalidInput);
    assert!(inst.is_null());
    assert!(!last_error().is_empty());

    let loop_edge = CString::new(r#"{"n":2,"kappa":1,"edges":[[1,1]]}"#).unwrap();
    assert_eq!(unsafe { sfdt_instance_from_json(loop_edge.as_ptr(), &mut inst) }, SfdtStatus::InvalidInput);

    let bytes = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { sfdt_instance_from_json(bytes.as_ptr().cast(), &mut inst) },
        SfdtStatus::InvalidInput
    );
    assert!(last_error().contains("UTF-8"));

    assert_eq!(unsafe { sfdt_instance_from_json(ptr::null(), &mut inst) }, SfdtStatus::NullPointer);
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { sfdt_solve(ptr::null(), 0, 0.0, &mut sol) }, SfdtStatus::NullPointer);
    let inst = ladder(3);
    assert_eq!(unsafe { sfdt_solve(inst, 0, f64::NAN, &mut sol) }, SfdtStatus::InvalidInput);
    assert_eq!(unsafe { sfdt_solve(inst, 0, 0.0, ptr::null_mut()) }, SfdtStatus::NullPointer);
    unsafe { sfdt_instance_free(inst) };
}

#[test]
fn errors_clear_on_success() {
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { sfdt_instance_from_json(ptr::null(), &mut inst) }, SfdtStatus::NullPointer);
    assert!(!sfdt_last_error().is_null());
    let inst = ladder(3);
    assert!(sfdt_last_error().is_null());
    unsafe { sfdt_instance_free(inst) };
}

#[test]
fn panics_become_status_codes() {
    let status = guard(|| panic!("boom"));
    assert_eq!(status, SfdtStatus::Panic);
    assert_eq!(last_error(), "panic: boom");
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        sfdt_instance_free(ptr::null_mut());
        sfdt_solution_free(ptr::null_mut());
        sfdt_string_free(ptr::null_mut());
        assert_eq!(sfdt_instance_n(ptr::null()), 0);
        assert_eq!(sfdt_solution_len(ptr::null()), 0);
    }
    let v = unsafe { CStr::from_ptr(sfdt_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
