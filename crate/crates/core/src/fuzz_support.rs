//! Bodies of the fuzz targets. Each one feeds arbitrary bytes to a parser and, when the
//! parse succeeds, checks that serializing and parsing again is the identity.
//! Errors are fine; panics are bugs.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::complex::{complex_from_json, complex_to_json};
use crate::linalg::{CoeffDomain, SparseMatrix};
use crate::poly::{text, PolyRing, Polynomial};
use crate::report::ReportFile;

fn utf8(data: &[u8]) -> Option<&str> {
    std::str::from_utf8(data).ok()
}

pub fn complex_json(data: &[u8]) {
    let Some(s) = utf8(data) else { return };
    if let Ok(c) = complex_from_json(s) {
        let out = complex_to_json(&c);
        let back = complex_from_json(&out).expect("serialized complex parses");
        assert_eq!(back, c);
        assert_eq!(complex_to_json(&back), out);
    }
}

fn rings() -> Vec<Arc<PolyRing>> {
    let names: Vec<String> = ["x", "y", "z", "p1_2"].iter().map(|s| s.to_string()).collect();
    let degrees = vec![crate::poly::Multidegree::single(1); names.len()];
    [CoeffDomain::INTEGERS, CoeffDomain::rationals(), CoeffDomain::prime_field(7).expect("prime")]
        .into_iter()
        .map(|d| Arc::new(PolyRing::new(names.clone(), degrees.clone(), d).expect("valid ring")))
        .collect()
}

pub fn poly_text(data: &[u8]) {
    let Some(s) = utf8(data) else { return };
    for ring in rings() {
        if let Ok(p) = text::parse_text::<BigInt>(&ring, s) {
            let out = text::to_text(&p);
            let back: Polynomial = text::parse_text(&ring, &out).expect("printed polynomial parses");
            assert_eq!(back, p);
        }
    }
}

pub fn poly_json(data: &[u8]) {
    let Some(s) = utf8(data) else { return };
    for ring in rings() {
        if let Ok(p) = text::parse_json::<BigInt>(&ring, s) {
            let back: Polynomial = text::parse_json(&ring, &text::to_json(&p)).expect("serialized polynomial parses");
            assert_eq!(back, p);
        }
    }
}

pub fn sparse_text(data: &[u8]) {
    let Some(s) = utf8(data) else { return };
    if let Ok(m) = SparseMatrix::<BigInt>::parse_text(s) {
        let back = SparseMatrix::<BigInt>::parse_text(&m.to_text()).expect("printed matrix parses");
        assert_eq!(back, m);
    }
}

pub fn field_spec(data: &[u8]) {
    let Some(s) = utf8(data) else { return };
    if let Ok(d) = s.parse::<CoeffDomain>() {
        assert_eq!(d.to_string().parse::<CoeffDomain>().expect("printed spec parses"), d);
    }
}

pub fn report_json(data: &[u8]) {
    let Some(s) = utf8(data) else { return };
    if let Ok(r) = ReportFile::from_json(s) {
        let out = r.to_json();
        assert_eq!(ReportFile::from_json(&out).expect("serialized report parses").to_json(), out);
        let _ = r.to_text();
        let _ = r.to_csv();
    }
}
