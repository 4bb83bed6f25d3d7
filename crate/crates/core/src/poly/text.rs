//! Text and JSON serializations of polynomials.
//!
//! Text: `c*x^e*y + c*z`, one explicit coefficient per term, `0` for zero.
//! JSON: `[{"coeff": "c", "exp": [e1, ..., en]}, ...]`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::coeff::Coefficient;
use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::ring::PolyRing;
use crate::error::{Error, Result};

pub fn to_text<C: Coefficient>(p: &Polynomial<C>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let names = p.ring().names();
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        if k > 0 {
            out.push_str(" + ");
        }
        out.push_str(&c.to_decimal());
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => {
                    out.push('*');
                    out.push_str(&names[i]);
                }
                _ => {
                    out.push('*');
                    out.push_str(&names[i]);
                    out.push('^');
                    out.push_str(&e.to_string());
                }
            }
        }
    }
    out
}

/// Parses the text form. Accepts `+`/`-` between terms, implicit coefficient 1,
/// and repeated factors (`x*x`).
pub fn parse_text<C: Coefficient>(ring: &Arc<PolyRing>, s: &str) -> Result<Polynomial<C>> {
    let domain = ring.domain();
    if !C::supports(domain) {
        return Err(Error::InvalidParameter(format!("coefficient type does not match domain {domain}")));
    }
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    for (negative, body) in split_terms(&compact)? {
        let mut coeff = C::from_i64(if negative { -1 } else { 1 }, domain);
        let mut exp = vec![0u8; ring.nvars()];
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in '{body}'")));
            }
            let first = factor.chars().next().unwrap();
            if first.is_ascii_digit() {
                coeff = coeff.mul(&C::parse(factor, domain)?);
                continue;
            }
            let (name, power) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: u32 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?;
                    (n, e)
                }
                None => (factor, 1),
            };
            let i = ring
                .var_index(name)
                .ok_or_else(|| Error::Parse(format!("unknown variable '{name}'")))?;
            let total = exp[i] as u32 + power;
            exp[i] = u8::try_from(total).map_err(|_| Error::Parse(format!("exponent too large in '{factor}'")))?;
        }
        terms.push((Monomial::from_exponents(&exp), coeff));
    }
    Polynomial::from_terms(ring, terms)
}

fn split_terms(s: &str) -> Result<Vec<(bool, &str)>> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut start = 0;
    let mut negative = false;
    let mut i = 0;
    // leading signs
    while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
        negative ^= bytes[i] == b'-';
        i += 1;
        start = i;
    }
    while i < bytes.len() {
        let b = bytes[i];
        let after_op = i > 0 && matches!(bytes[i - 1], b'^' | b'*' | b'/');
        if (b == b'+' || b == b'-') && !after_op {
            if start == i {
                return Err(Error::Parse(format!("dangling sign in '{s}'")));
            }
            out.push((negative, &s[start..i]));
            negative = false;
            while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                negative ^= bytes[i] == b'-';
                i += 1;
            }
            start = i;
            continue;
        }
        i += 1;
    }
    if start >= s.len() {
        return Err(Error::Parse(format!("dangling sign in '{s}'")));
    }
    out.push((negative, &s[start..]));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub exp: Vec<u32>,
}

pub fn to_json_terms<C: Coefficient>(p: &Polynomial<C>) -> Vec<TermJson> {
    p.terms()
        .iter()
        .map(|(m, c)| TermJson { coeff: c.to_decimal(), exp: m.exponents().iter().map(|&e| e as u32).collect() })
        .collect()
}

pub fn from_json_terms<C: Coefficient>(ring: &Arc<PolyRing>, terms: &[TermJson]) -> Result<Polynomial<C>> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        if t.exp.len() != ring.nvars() {
            return Err(Error::Parse(format!("exponent vector of length {} for {} variables", t.exp.len(), ring.nvars())));
        }
        let exp: Vec<u8> = t
            .exp
            .iter()
            .map(|&e| u8::try_from(e).map_err(|_| Error::Parse(format!("exponent {e} too large"))))
            .collect::<Result<_>>()?;
        let c = C::parse(t.coeff.trim(), ring.domain())?;
        out.push((Monomial::from_exponents(&exp), c));
    }
    Polynomial::from_terms(ring, out)
}

pub fn to_json<C: Coefficient>(p: &Polynomial<C>) -> String {
    serde_json::to_string(&to_json_terms(p)).expect("serializable")
}

pub fn parse_json<C: Coefficient>(ring: &Arc<PolyRing>, s: &str) -> Result<Polynomial<C>> {
    let terms: Vec<TermJson> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    from_json_terms(ring, &terms)
}
