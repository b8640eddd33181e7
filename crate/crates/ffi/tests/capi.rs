use std::ffi::{CStr, CString};
use std::ptr;

use ttp_core::harness::{generate_instance, GeneratorConfig};
use ttp_core::io::write_instance;
use ttp_ffi::*;

fn instance_text(cities: usize, seed: u64) -> CString {
    let inst = generate_instance(&GeneratorConfig::cat_b(cities, seed)).unwrap();
    CString::new(write_instance(&inst)).unwrap()
}

fn parse(text: &CString) -> *mut TtpInstance {
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { ttp_instance_parse(text.as_ptr(), &mut inst) }, TtpStatus::Ok);
    assert!(!inst.is_null());
    inst
}

fn last_error() -> String {
    let p = ttp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn parse_reports_sizes() {
    let inst = parse(&instance_text(12, 1));
    unsafe {
        assert_eq!(ttp_instance_num_cities(inst), 12);
        assert_eq!(ttp_instance_num_items(inst), 11 * 5);
        ttp_instance_free(inst);
    }
}

#[test]
fn bad_text_sets_error_message() {
    let text = CString::new("PROBLEM NAME: broken\nDIMENSION: x\n").unwrap();
    let mut inst = ptr::null_mut();
    let status = unsafe { ttp_instance_parse(text.as_ptr(), &mut inst) };
    assert_eq!(status, TtpStatus::ParseError);
    assert!(inst.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_arguments_are_rejected() {
    let mut inst = ptr::null_mut();
    unsafe {
        assert_eq!(ttp_instance_parse(ptr::null(), &mut inst), TtpStatus::NullPointer);
        let text = instance_text(6, 2);
        assert_eq!(ttp_instance_parse(text.as_ptr(), ptr::null_mut()), TtpStatus::NullPointer);
        let mut obj = 0.0;
        let tour = [1usize, 2, 1];
        assert_eq!(ttp_evaluate(ptr::null(), tour.as_ptr(), 3, ptr::null(), 0, &mut obj), TtpStatus::NullPointer);
        assert_eq!(ttp_instance_num_cities(ptr::null()), 0);
        assert!(ttp_solution_objective(ptr::null()).is_nan());
        ttp_instance_free(ptr::null_mut());
        ttp_solution_free(ptr::null_mut());
    }
}

#[test]
fn load_missing_file_is_io_error() {
    let path = CString::new("/nonexistent/dir/none.ttp").unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { ttp_instance_load(path.as_ptr(), &mut inst) }, TtpStatus::IoError);
}

#[test]
fn load_reads_written_file() {
    let text = instance_text(9, 3);
    let path = std::env::temp_dir().join(format!("ttp_ffi_load_{}.ttp", std::process::id()));
    std::fs::write(&path, text.as_bytes()).unwrap();
    let cpath = CString::new(path.to_str().unwrap()).unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { ttp_instance_load(cpath.as_ptr(), &mut inst) }, TtpStatus::Ok);
    unsafe {
        assert_eq!(ttp_instance_num_cities(inst), 9);
        ttp_instance_free(inst);
    }
    std::fs::remove_file(path).unwrap();
}

#[test]
fn solve_then_evaluate_round_trip() {
    let inst = parse(&instance_text(20, 4));
    let opts = TtpSolveOptions { timeout_ms: 200, seed: 7, work_clock: 1, ..ttp_solve_options_default() };
    let mut sol = ptr::null_mut();
    unsafe {
        assert_eq!(ttp_solve(inst, &opts, &mut sol), TtpStatus::Ok);
        let objective = ttp_solution_objective(sol);
        assert!(objective.is_finite());
        assert!(ttp_solution_restarts(sol) >= 1);

        let mut len = 0usize;
        assert_eq!(ttp_solution_tour(sol, ptr::null_mut(), 0, &mut len), TtpStatus::BufferTooSmall);
        assert_eq!(len, 21);
        let mut tour = vec![0usize; len];
        assert_eq!(ttp_solution_tour(sol, tour.as_mut_ptr(), tour.len(), &mut len), TtpStatus::Ok);
        assert_eq!((tour[0], tour[20]), (1, 1));

        let mut n_items = 0usize;
        ttp_solution_items(sol, ptr::null_mut(), 0, &mut n_items);
        let mut items = vec![0usize; n_items];
        assert_eq!(ttp_solution_items(sol, items.as_mut_ptr(), items.len(), &mut n_items), TtpStatus::Ok);
        assert!(items.windows(2).all(|w| w[0] < w[1]));

        let mut again = f64::NAN;
        let status = ttp_evaluate(inst, tour.as_ptr(), tour.len(), items.as_ptr(), items.len(), &mut again);
        assert_eq!(status, TtpStatus::Ok);
        assert!((again - objective).abs() <= 1e-6 * objective.abs().max(1.0));

        ttp_solution_free(sol);
        ttp_instance_free(inst);
    }
}

#[test]
fn work_clock_solves_are_repeatable() {
    let inst = parse(&instance_text(15, 5));
    let opts = TtpSolveOptions { timeout_ms: 100, seed: 3, work_clock: 1, ..ttp_solve_options_default() };
    let run = || unsafe {
        let mut sol = ptr::null_mut();
        assert_eq!(ttp_solve(inst, &opts, &mut sol), TtpStatus::Ok);
        let v = ttp_solution_objective(sol);
        ttp_solution_free(sol);
        v
    };
    assert_eq!(run().to_bits(), run().to_bits());
    unsafe { ttp_instance_free(inst) };
}

#[test]
fn evaluate_rejects_bad_solutions() {
    let inst = parse(&instance_text(5, 6));
    let mut obj = 0.0;
    unsafe {
        let short = [1usize, 2, 3, 1];
        assert_eq!(ttp_evaluate(inst, short.as_ptr(), 4, ptr::null(), 0, &mut obj), TtpStatus::InvalidSolution);
        let zero_based = [0usize, 1, 2, 3, 4, 0];
        assert_eq!(ttp_evaluate(inst, zero_based.as_ptr(), 6, ptr::null(), 0, &mut obj), TtpStatus::InvalidSolution);
        let good = [1usize, 2, 3, 4, 5, 1];
        let bad_item = [999usize];
        assert_ne!(ttp_evaluate(inst, good.as_ptr(), 6, bad_item.as_ptr(), 1, &mut obj), TtpStatus::Ok);
        assert_eq!(ttp_evaluate(inst, good.as_ptr(), 6, ptr::null(), 0, &mut obj), TtpStatus::Ok);
        assert!(obj < 0.0);
        ttp_instance_free(inst);
    }
}

#[test]
fn header_lists_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ttp.h")).unwrap();
    for name in [
        "ttp_last_error",
        "ttp_solve_options_default",
        "ttp_instance_parse",
        "ttp_instance_load",
        "ttp_instance_free",
        "ttp_instance_num_cities",
        "ttp_instance_num_items",
        "ttp_evaluate",
        "ttp_solve",
        "ttp_solution_free",
        "ttp_solution_objective",
        "ttp_solution_restarts",
        "ttp_solution_tour",
        "ttp_solution_items",
        "typedef struct TtpInstance TtpInstance",
        "TTP_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
