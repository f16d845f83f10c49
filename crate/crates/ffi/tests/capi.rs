//! Exercises the C ABI exactly as a foreign caller would: through raw
//! pointers, status codes and the generated header.

use std::ffi::{CStr, CString};
use std::ptr;

use rctutte_ffi::*;

fn k3() -> *mut RctGraph {
    let us = [0usize, 0, 1];
    let vs = [1usize, 2, 2];
    let mut g: *mut RctGraph = ptr::null_mut();
    let status = unsafe { rct_graph_from_edges(3, us.as_ptr(), vs.as_ptr(), 3, &mut g) };
    assert_eq!(status, RctStatus::Ok);
    assert!(!g.is_null());
    g
}

#[test]
fn graph_accessors() {
    let g = k3();
    unsafe {
        assert_eq!(rct_graph_vertex_count(g), 3);
        assert_eq!(rct_graph_edge_count(g), 3);
        assert_eq!(rct_graph_min_degree(g), 2);
        rct_graph_free(g);
    }
    unsafe {
        assert_eq!(rct_graph_vertex_count(ptr::null()), 0);
        rct_graph_free(ptr::null_mut());
    }
}

#[test]
fn out_of_range_edge_rejected() {
    let us = [0usize];
    let vs = [9usize];
    let mut g: *mut RctGraph = ptr::null_mut();
    let status = unsafe { rct_graph_from_edges(2, us.as_ptr(), vs.as_ptr(), 1, &mut g) };
    assert_eq!(status, RctStatus::Parse);
    let msg = unsafe { CStr::from_ptr(rct_last_error_message()) };
    assert!(msg.to_str().unwrap().contains("out of range"));
}

#[test]
fn exact_oracles_through_ffi() {
    let g = k3();
    let mut out = 0.0f64;
    unsafe {
        assert_eq!(rct_tutte_exact(g, 1.0, 1.0, &mut out), RctStatus::Ok);
        assert_eq!(out, 3.0); // spanning trees of the triangle

        assert_eq!(rct_z_exact(g, 0.5, 1.0, &mut out), RctStatus::Ok);
        assert_eq!(out, 1.0);

        assert_eq!(rct_chromatic_exact(g, 3, &mut out), RctStatus::Ok);
        assert_eq!(out, 6.0);

        let edges = [0usize];
        assert_eq!(
            rct_lambda_exact(g, 0.5, 2.0, edges.as_ptr(), 1, &mut out),
            RctStatus::Ok
        );
        assert!(out > 0.0 && out < 1.0);
        rct_graph_free(g);
    }
}

#[test]
fn estimators_through_ffi() {
    let g = k3();
    let mut est = RctEstimate {
        estimate: 0.0,
        mean: 0.0,
        variance: 0.0,
        t: 0,
        seed: 0,
    };
    unsafe {
        // Q = 1 point: exact with zero variance.
        assert_eq!(
            rct_estimate_tutte(g, 2.0, 2.0, 0.1, 32, 9, &mut est),
            RctStatus::Ok
        );
        assert_eq!(est.estimate, 8.0);
        assert_eq!(est.variance, 0.0);
        assert_eq!(est.t, 32);
        assert_eq!(est.seed, 9);

        // Domain violation -> RCT_STATUS_DOMAIN plus a message.
        assert_eq!(
            rct_estimate_tutte(g, 2.0, 0.5, 0.1, 8, 9, &mut est),
            RctStatus::Domain
        );
        let msg = CStr::from_ptr(rct_last_error_message());
        assert!(msg.to_str().unwrap().contains("x > 1"));

        assert_eq!(
            rct_estimate_z(g, 0.5, 1.0, 0.1, 64, 3, &mut est),
            RctStatus::Ok
        );
        assert_eq!(est.estimate, 1.0);

        let edges = [0usize];
        let mut lambda = 0.0f64;
        assert_eq!(
            rct_estimate_lambda(g, 0.5, 2.0, edges.as_ptr(), 1, 0.2, 50_000, 4, &mut lambda),
            RctStatus::Ok
        );
        assert!(lambda > 0.0 && lambda < 1.0);
        rct_graph_free(g);
    }
}

#[test]
fn file_roundtrip_through_ffi() {
    let dir = std::env::temp_dir().join(format!("rctutte-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.txt");
    let cpath = CString::new(path.to_str().unwrap()).unwrap();

    let g = k3();
    unsafe {
        assert_eq!(rct_graph_write_file(g, cpath.as_ptr()), RctStatus::Ok);
        let mut back: *mut RctGraph = ptr::null_mut();
        assert_eq!(rct_graph_read_file(cpath.as_ptr(), &mut back), RctStatus::Ok);
        assert_eq!(rct_graph_vertex_count(back), 3);
        assert_eq!(rct_graph_edge_count(back), 3);
        rct_graph_free(back);
        rct_graph_free(g);

        let mut missing: *mut RctGraph = ptr::null_mut();
        let bogus = CString::new("/definitely/not/here.txt").unwrap();
        assert_eq!(
            rct_graph_read_file(bogus.as_ptr(), &mut missing),
            RctStatus::Io
        );
    }
}

#[test]
fn generators_through_ffi() {
    unsafe {
        let mut g: *mut RctGraph = ptr::null_mut();
        let mut dropped = 0i64;
        assert_eq!(
            rct_generate_plg(2.0, 1.0, 7, &mut g, &mut dropped),
            RctStatus::Ok
        );
        assert_eq!(rct_graph_vertex_count(g), 16);
        assert_eq!(rct_graph_edge_count(g), 20);
        assert_eq!(dropped, 15);
        rct_graph_free(g);

        let mut fam: *mut RctGraph = ptr::null_mut();
        assert_eq!(
            rct_generate_family(RctFamily::Subdense, 1.0, 64, 3, &mut fam),
            RctStatus::Ok
        );
        assert!(rct_graph_min_degree(fam) >= 32);
        rct_graph_free(fam);

        // K_n via the superdense f = 0 family.
        let mut kn: *mut RctGraph = ptr::null_mut();
        assert_eq!(
            rct_generate_family(RctFamily::SuperdenseConst, 0.0, 10, 1, &mut kn),
            RctStatus::Ok
        );
        assert_eq!(rct_graph_edge_count(kn), 45);
        rct_graph_free(kn);
    }
}

#[test]
fn null_pointers_are_reported() {
    let mut out = 0.0f64;
    unsafe {
        assert_eq!(
            rct_tutte_exact(ptr::null(), 1.0, 1.0, &mut out),
            RctStatus::NullPointer
        );
        let g = k3();
        assert_eq!(
            rct_tutte_exact(g, 1.0, 1.0, ptr::null_mut()),
            RctStatus::NullPointer
        );
        rct_graph_free(g);
    }
}

#[test]
fn version_and_header_exist() {
    let v = unsafe { CStr::from_ptr(rct_version()) };
    assert!(!v.to_str().unwrap().is_empty());

    // The build script must have generated the C header with the key symbols.
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/rctutte.h");
    let text = std::fs::read_to_string(header).expect("generated header exists");
    for symbol in [
        "rct_graph_from_edges",
        "rct_estimate_tutte",
        "rct_estimate_lambda",
        "rct_generate_plg",
        "RctStatus",
        "RctEstimate",
    ] {
        assert!(text.contains(symbol), "header misses {symbol}");
    }
}
