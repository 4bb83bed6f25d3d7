//! Serde helpers for values without a stable serialized form.

use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::Serializer;

/// Big integers as decimal strings.
pub fn bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub fn opt_bigints<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => bigints(v, s),
        None => s.serialize_none(),
    }
}

pub fn bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
