use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use swo_ffi::*;

fn profile(text: &str) -> *mut SwoProfile {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { swo_profile_parse(c.as_ptr(), &mut out) }, SwoStatus::Ok);
    out
}

fn ordering(toml: &str) -> *mut SwoOrdering {
    let c = CString::new(toml).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { swo_ordering_from_toml(c.as_ptr(), &mut out) };
    assert_eq!(status, SwoStatus::Ok, "{:?}", last_error());
    out
}

fn last_error() -> Option<String> {
    let p = swo_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

const RDU: &str = "kind = \"rdu\"\nrho = \"101/100\"\ng = { kind = \"sqrt\" }\n";

#[test]
fn tyranny_of_the_majority_through_the_abi() {
    let o = ordering(RDU);
    let u = profile("1000000*100");
    let v = profile("90, 999*100, 999000*300");
    let mut verdict = SwoVerdict::Incomparable;
    unsafe {
        assert_eq!(swo_compare(o, u, v, 0.0, &mut verdict), SwoStatus::Ok);
        assert_eq!(verdict, SwoVerdict::StrictlyBetter);
        assert_eq!(swo_profile_len(v), 1_000_000);
        let (mut value, mut bound) = (0.0, 0.0);
        assert_eq!(swo_value(o, u, &mut value, &mut bound), SwoStatus::Ok);
        assert!(value > 0.0 && bound < 1e-6);
        swo_profile_free(u);
        swo_profile_free(v);
        swo_ordering_free(o);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let bad = CString::new("1, two, 3").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { swo_profile_parse(bad.as_ptr(), &mut out) }, SwoStatus::Parse);
    assert!(out.is_null());
    assert!(last_error().unwrap().contains("column"));

    let lex = ordering("kind = \"leximin\"\n");
    let u = profile("1, 2");
    let (mut value, mut bound) = (0.0, 0.0);
    assert_eq!(unsafe { swo_value(lex, u, &mut value, &mut bound) }, SwoStatus::NotValueBased);
    assert_eq!(
        unsafe { swo_compare(ptr::null(), u, u, 0.0, &mut SwoVerdict::Equivalent) },
        SwoStatus::NullPointer
    );
    unsafe {
        swo_profile_free(u);
        swo_ordering_free(lex);
    }
}

#[test]
fn profiles_print_canonically() {
    let p = profile("3, 3, 3, 1/2");
    unsafe {
        let s = swo_profile_to_string(p);
        assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "3*3, 1/2");
        swo_string_free(s);
        swo_profile_free(p);
    }
}

#[test]
fn certificates_validate() {
    let c = swo::propositions::build_prop1_chain(
        &swo::propositions::ChainParams {
            theta_p: swo::numeric::int(10),
            theta_r: swo::numeric::int(20),
            alpha: swo::numeric::int(2),
            beta: swo::numeric::int(1),
            gamma: swo::numeric::int(2),
            delta: swo::numeric::int(1),
        },
        3,
    )
    .unwrap();
    let text = CString::new(swo::propositions::write_certificate(&c.chain)).unwrap();
    let mut failures = u64::MAX;
    assert_eq!(unsafe { swo_certificate_validate(text.as_ptr(), &mut failures) }, SwoStatus::Ok);
    assert_eq!(failures, 0);
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "swo.h"

int main(void) {
    SwoOrdering *o = NULL;
    SwoProfile *u = NULL, *v = NULL;
    SwoVerdict verdict;
    if (swo_ordering_from_toml("kind = \"leximin\"\n", &o) != SWO_STATUS_OK) return 1;
    if (swo_profile_parse("1, 2, 3", &u) != SWO_STATUS_OK) return 2;
    if (swo_profile_parse("1, 1, 5", &v) != SWO_STATUS_OK) return 3;
    if (swo_compare(o, u, v, 0.0, &verdict) != SWO_STATUS_OK) return 4;
    if (verdict != SWO_VERDICT_STRICTLY_BETTER) return 5;
    if (swo_profile_parse("1,,", &u) != SWO_STATUS_PARSE || swo_last_error() == NULL) return 6;
    printf("%s\n", swo_last_error());
    swo_profile_free(v);
    swo_ordering_free(o);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("swo.h").exists(), "build script writes the header");
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    // Tests run under the dev-style `test` profile, which writes to target/debug.
    let lib_dir = tmp.parent().unwrap().join("debug");
    assert!(lib_dir.join("libswo_ffi.so").exists(), "shared library not found in {}", lib_dir.display());
    let src = tmp.join("abi_smoke.c");
    let exe = tmp.join("abi_smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let built = Command::new("cc")
        .args(["-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg(format!("-I{}", header_dir.display()))
        .arg(format!("-L{}", lib_dir.display()))
        .arg("-lswo_ffi")
        .status()
        .expect("C compiler available");
    assert!(built.success());
    let out = Command::new(&exe).env("LD_LIBRARY_PATH", &lib_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("parse error"));
}
