//! Replays the checked-in fuzz corpus through the fuzz target bodies, so the seeds
//! are exercised on stable toolchains too.

use std::path::Path;

use pfk_core::fuzz_support as t;

fn replay(target: &str, body: fn(&[u8])) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut n = 0;
    for entry in std::fs::read_dir(&dir).unwrap_or_else(|e| panic!("{}: {e}", dir.display())) {
        let path = entry.unwrap().path();
        body(&std::fs::read(&path).unwrap());
        n += 1;
    }
    assert!(n > 0, "empty corpus for {target}");
}

#[test]
fn complex_json() {
    replay("complex_json", t::complex_json);
}

#[test]
fn poly_text() {
    replay("poly_text", t::poly_text);
}

#[test]
fn poly_json() {
    replay("poly_json", t::poly_json);
}

#[test]
fn sparse_text() {
    replay("sparse_text", t::sparse_text);
}

#[test]
fn field_spec() {
    replay("field_spec", t::field_spec);
}

#[test]
fn report_json() {
    replay("report_json", t::report_json);
}

#[test]
fn garbage_does_not_panic() {
    for bytes in [&b""[..], b"\xff\xfe", b"{", b"x^", b"1 1 1\n2 2 3\n", b"zp:", b"zp:99999999999999999999", b"x^4294967296"] {
        t::complex_json(bytes);
        t::poly_text(bytes);
        t::poly_json(bytes);
        t::sparse_text(bytes);
        t::field_spec(bytes);
        t::report_json(bytes);
    }
}
