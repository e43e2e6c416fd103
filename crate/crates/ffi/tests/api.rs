use std::ffi::{CStr, CString};
use std::ptr;

use bblab_ffi::*;

fn last_error() -> String {
    let p = bblab_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn builtin(name: &str) -> *mut BblabMachine {
    let name = CString::new(name).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { bblab_machine_builtin(name.as_ptr(), &mut m) }, BblabStatus::Ok);
    m
}

#[test]
fn champion_through_handles() {
    unsafe {
        let m = builtin("bb5-champion");
        assert_eq!((bblab_machine_num_states(m), bblab_machine_num_symbols(m)), (5, 2));
        let mut run = ptr::null_mut();
        assert_eq!(bblab_run_new(m, &mut run), BblabStatus::Ok);
        // the run keeps its own reference to the table
        bblab_machine_free(m);
        let mut taken = 0;
        assert_eq!(bblab_run_advance(run, 100_000_000, &mut taken), BblabStatus::Ok);
        assert_eq!(taken, 47_176_870);
        assert!(bblab_run_is_halted(run));
        assert_eq!(bblab_run_steps(run), 47_176_870);
        assert_eq!(bblab_run_step(run), BblabStatus::InvalidArgument);
        assert!(last_error().contains("halted"));
        bblab_run_free(run);
    }
}

#[test]
fn m54_window_at_step_5() {
    unsafe {
        let m = builtin("m54");
        let mut run = ptr::null_mut();
        bblab_run_new(m, &mut run);
        for _ in 0..5 {
            assert_eq!(bblab_run_step(run), BblabStatus::Ok);
        }
        assert_eq!(bblab_run_head(run), -1);
        // states: mul2_F mul2_G find_2 rewind check_halt
        assert_eq!(bblab_run_state(run), 3);
        let mut buf = [0u8; 4];
        assert_eq!(bblab_run_window(run, -2, 1, buf.as_mut_ptr(), 4), BblabStatus::Ok);
        // symbols: 0 1 2 #
        assert_eq!(buf, [0, 3, 1, 3]);
        assert_eq!(bblab_run_window(run, -2, 1, buf.as_mut_ptr(), 3), BblabStatus::BufferTooSmall);
        assert_eq!(bblab_run_window(run, 1, -2, buf.as_mut_ptr(), 4), BblabStatus::InvalidArgument);
        bblab_run_free(run);
        bblab_machine_free(m);
    }
}

#[test]
fn parse_and_serialize() {
    unsafe {
        let compact = CString::new("1RB1LB_1LA---").unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(bblab_machine_parse_compact(compact.as_ptr(), &mut m), BblabStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(bblab_machine_serialize(m, &mut text), BblabStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(bblab_machine_parse(text, &mut again), BblabStatus::Ok);
        let mut text2 = ptr::null_mut();
        bblab_machine_serialize(again, &mut text2);
        assert_eq!(CStr::from_ptr(text), CStr::from_ptr(text2));
        bblab_string_free(text);
        bblab_string_free(text2);
        bblab_machine_free(m);
        bblab_machine_free(again);

        let bad = CString::new("1RB1XB_1LA---").unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(bblab_machine_parse_compact(bad.as_ptr(), &mut m), BblabStatus::ParseError);
        assert!(m.is_null());
        assert!(!last_error().is_empty());
        let unknown = CString::new("m99").unwrap();
        assert_eq!(bblab_machine_builtin(unknown.as_ptr(), &mut m), BblabStatus::InvalidArgument);
    }
}

#[test]
fn null_arguments() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(bblab_machine_builtin(ptr::null(), &mut m), BblabStatus::NullPointer);
        let name = CString::new("m54").unwrap();
        assert_eq!(bblab_machine_builtin(name.as_ptr(), ptr::null_mut()), BblabStatus::NullPointer);
        assert_eq!(bblab_run_step(ptr::null_mut()), BblabStatus::NullPointer);
        assert_eq!(bblab_machine_num_states(ptr::null()), 0);
        bblab_machine_free(ptr::null_mut());
        bblab_run_free(ptr::null_mut());
        bblab_string_free(ptr::null_mut());
    }
}

#[test]
fn errors_clear_on_success() {
    unsafe {
        let mut m = ptr::null_mut();
        bblab_machine_builtin(ptr::null(), &mut m);
        assert!(!bblab_last_error().is_null());
        let name = CString::new("m152").unwrap();
        assert_eq!(bblab_machine_builtin(name.as_ptr(), &mut m), BblabStatus::Ok);
        assert!(bblab_last_error().is_null());
        bblab_machine_free(m);
    }
}

#[test]
fn scan() {
    unsafe {
        let mut buf = [0u64; 8];
        let mut count = 0;
        assert_eq!(bblab_scan(1000, buf.as_mut_ptr(), 8, &mut count), BblabStatus::Ok);
        assert_eq!(&buf[..count], &[0, 2, 8]);
        assert_eq!(bblab_scan(1000, buf.as_mut_ptr(), 2, &mut count), BblabStatus::BufferTooSmall);
        assert_eq!(count, 3);
        assert_eq!(bblab_scan(0, ptr::null_mut(), 0, &mut count), BblabStatus::BufferTooSmall);
        assert_eq!(count, 1);
    }
}

#[test]
fn simulation_and_checkpoints() {
    unsafe {
        let mut f = 0;
        assert_eq!(bblab_verify_simulation(333, &mut f), BblabStatus::Ok);
        assert_eq!(f, 741);
        assert_eq!(bblab_verify_simulation(0, &mut f), BblabStatus::Ok);
        assert_eq!(f, 0);
    }
    assert_eq!(bblab_checkpoint_steps(0), 5);
    assert_eq!(bblab_checkpoint_steps(20), 333);
}

#[test]
fn enumeration() {
    unsafe {
        let mut s = BblabEnumerationSummary::default();
        assert_eq!(bblab_enumerate(2, 2, 100, false, &mut s), BblabStatus::Ok);
        assert_eq!((s.max_steps, s.has_max, s.undecided), (6, true, 0));
        assert_eq!(s.machines, 6561);
        assert_eq!(s.machines, s.halting + s.non_halting);
        assert_eq!(bblab_enumerate(3, 2, 1000, true, &mut s), BblabStatus::Ok);
        assert_eq!((s.max_steps, s.undecided), (21, 0));
        assert_eq!(bblab_enumerate(5, 2, 100, false, &mut s), BblabStatus::SpaceTooLarge);
        assert_eq!(bblab_enumerate(0, 2, 100, false, &mut s), BblabStatus::InvalidArgument);
        assert_eq!(bblab_enumerate(2, 2, 100, false, ptr::null_mut()), BblabStatus::NullPointer);
    }
}
