//! Text and JSON serialisation of ring elements, polynomials, matrices,
//! codes and distance reports.
//!
//! Element forms match the ring family:
//!
//! * `Z_{p^s}`: plain integers, `"3"` / `3`;
//! * `GR(p^s, m)`: polynomials in `w`, `"3*w+2"`, JSON ascending
//!   coefficient lists `[2, 3]`;
//! * `R_m`: square-free monomials in `u1..um`, `"1+u1+u1*u2"`, JSON bit
//!   lists indexed by subset masks;
//! * composites: component tuples `"(1|4)"` / `[1, 4]`; plain integers are
//!   also accepted for `Z_k`-style composites and resolved by CRT.
//!
//! Matrices separate entries with `,` and rows with `;`.  Polynomials use
//! the `X^3+2*X^2+X+3` form with coefficients in the element syntax,
//! parenthesised when they contain `+`.

use std::fmt;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::code::LinearCode;
use crate::distance::{DistanceReport, DistanceStatus, SearchStrategy, WeightKind};
use crate::linalg::RingMatrix;
use crate::poly::RingPoly;
use crate::ring::{Ring, RingElement, RingKind};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// elements
// ---------------------------------------------------------------------------

pub fn element_to_text(e: &RingElement) -> String {
    match e.ring().kind() {
        RingKind::Chain { m: 1, .. } => format!("{}", e.coords()[0]),
        RingKind::Chain { .. } => {
            let mut terms: Vec<String> = Vec::new();
            for (i, &c) in e.coords().iter().enumerate().rev() {
                if c == 0 {
                    continue;
                }
                let t = match (i, c) {
                    (0, c) => format!("{c}"),
                    (1, 1) => "w".into(),
                    (1, c) => format!("{c}*w"),
                    (i, 1) => format!("w^{i}"),
                    (i, c) => format!("{c}*w^{i}"),
                };
                terms.push(t);
            }
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join("+")
            }
        }
        RingKind::LocalAlgebra { m } => {
            let mut terms: Vec<String> = Vec::new();
            for (mask, &c) in e.coords().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                if mask == 0 {
                    terms.push("1".into());
                } else {
                    let mono: Vec<String> = (0..*m)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| format!("u{}", i + 1))
                        .collect();
                    terms.push(mono.join("*"));
                }
            }
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join("+")
            }
        }
        RingKind::Composite { .. } => {
            let parts = e.ring().crt_split_element(e).unwrap();
            let inner: Vec<String> = parts.iter().map(element_to_text).collect();
            format!("({})", inner.join("|"))
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&element_to_text(self))
    }
}

pub fn element_from_text(ring: &Ring, text: &str) -> Result<RingElement> {
    let text = text.trim();
    match ring.kind() {
        RingKind::Chain { m: 1, .. } => {
            let v: i64 = text
                .parse()
                .map_err(|_| Error::Parse(format!("bad element `{text}`")))?;
            Ok(ring.from_integer(v))
        }
        RingKind::Chain { m, .. } => {
            let coeffs = parse_w_poly(text, ring.coord_mods()[0])?;
            if coeffs.len() > *m as usize {
                return Err(Error::Parse(format!(
                    "element `{text}` has degree >= {m} in w"
                )));
            }
            let mut coords = vec![0u64; *m as usize];
            coords[..coeffs.len()].copy_from_slice(&coeffs);
            ring.element_from_coords(coords)
        }
        RingKind::LocalAlgebra { m } => {
            let mut coords = vec![0u64; 1 << m];
            if text == "0" {
                return ring.element_from_coords(coords);
            }
            for term in text.split('+') {
                let term = term.trim();
                if term == "1" {
                    coords[0] ^= 1;
                    continue;
                }
                let mut mask = 0usize;
                for factor in term.split('*') {
                    let factor = factor.trim();
                    let idx: usize = factor
                        .strip_prefix('u')
                        .and_then(|d| d.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("bad monomial `{term}`")))?;
                    if idx == 0 || idx > *m as usize {
                        return Err(Error::Parse(format!("u{idx} out of range")));
                    }
                    mask |= 1 << (idx - 1);
                }
                coords[mask] ^= 1;
            }
            ring.element_from_coords(coords)
        }
        RingKind::Composite { .. } => {
            if let Some(inner) = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
                let parts: Vec<&str> = inner.split('|').collect();
                let rings = ring.component_rings();
                if parts.len() != rings.len() {
                    return Err(Error::Parse(format!(
                        "expected {} components in `{text}`",
                        rings.len()
                    )));
                }
                let elems = parts
                    .iter()
                    .zip(rings)
                    .map(|(t, r)| element_from_text(r, t))
                    .collect::<Result<Vec<_>>>()?;
                ring.crt_compose_elements(&elems)
            } else {
                let v: i64 = text
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element `{text}`")))?;
                Ok(ring.from_integer(v))
            }
        }
    }
}

/// Ascending coefficients of `c_k*w^k + ... + c_0` modulo `q`.
fn parse_w_poly(text: &str, q: u64) -> Result<Vec<u64>> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut coeffs: Vec<u64> = Vec::new();
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in cleaned.chars().enumerate() {
        if (ch == '+' || ch == '-') && i != 0 {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if ch == '-' && i == 0 {
            neg = true;
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));
    for (neg, term) in terms {
        let (coeff_str, pow) = match term.split_once('w') {
            None => (term.as_str(), 0usize),
            Some((c, rest)) => {
                let pow = if let Some(e) = rest.strip_prefix('^') {
                    e.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad exponent `{term}`")))?
                } else if rest.is_empty() {
                    1
                } else {
                    return Err(Error::Parse(format!("bad term `{term}`")));
                };
                (c.trim_end_matches('*'), pow)
            }
        };
        let c: u64 = if coeff_str.is_empty() {
            1
        } else {
            coeff_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient `{coeff_str}`")))?
        };
        let c = if neg { (q - c % q) % q } else { c % q };
        if coeffs.len() <= pow {
            coeffs.resize(pow + 1, 0);
        }
        coeffs[pow] = (coeffs[pow] + c) % q;
    }
    Ok(coeffs)
}

pub fn element_to_json(e: &RingElement) -> Value {
    match e.ring().kind() {
        RingKind::Chain { m: 1, .. } => json!(e.coords()[0]),
        RingKind::Chain { .. } | RingKind::LocalAlgebra { .. } => json!(e.coords()),
        RingKind::Composite { .. } => {
            let parts = e.ring().crt_split_element(e).unwrap();
            Value::Array(parts.iter().map(element_to_json).collect())
        }
    }
}

pub fn element_from_json(ring: &Ring, v: &Value) -> Result<RingElement> {
    match (ring.kind(), v) {
        (_, Value::Number(n)) => {
            let i = n
                .as_i64()
                .ok_or_else(|| Error::Parse(format!("bad element {v}")))?;
            Ok(ring.from_integer(i))
        }
        (_, Value::String(s)) => element_from_text(ring, s),
        (RingKind::Composite { .. }, Value::Array(items)) => {
            let rings = ring.component_rings();
            if items.len() != rings.len() {
                return Err(Error::Parse(format!(
                    "expected {} components, got {}",
                    rings.len(),
                    items.len()
                )));
            }
            let parts = items
                .iter()
                .zip(rings)
                .map(|(item, r)| element_from_json(r, item))
                .collect::<Result<Vec<_>>>()?;
            ring.crt_compose_elements(&parts)
        }
        (_, Value::Array(items)) => {
            let coords = items
                .iter()
                .map(|item| {
                    item.as_u64()
                        .ok_or_else(|| Error::Parse(format!("bad coordinate {item}")))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            ring.element_from_coords(coords)
        }
        _ => Err(Error::Parse(format!("bad element {v}"))),
    }
}

// ---------------------------------------------------------------------------
// vectors and matrices
// ---------------------------------------------------------------------------

pub fn vector_to_text(v: &[RingElement]) -> String {
    v.iter()
        .map(element_to_text)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn vector_from_text(ring: &Ring, text: &str) -> Result<Vec<RingElement>> {
    text.split(',')
        .map(|t| element_from_text(ring, t))
        .collect()
}

pub fn vector_to_json(v: &[RingElement]) -> Value {
    Value::Array(v.iter().map(element_to_json).collect())
}

pub fn vector_from_json(ring: &Ring, v: &Value) -> Result<Vec<RingElement>> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Parse("vector must be a JSON array".into()))?;
    items.iter().map(|i| element_from_json(ring, i)).collect()
}

pub fn matrix_to_text(m: &RingMatrix) -> String {
    m.rows_iter()
        .map(vector_to_text)
        .collect::<Vec<_>>()
        .join(";")
}

pub fn matrix_from_text(ring: &Ring, text: &str) -> Result<RingMatrix> {
    let rows = text
        .split(';')
        .map(|r| vector_from_text(ring, r))
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    let w = rows[0].len();
    if rows.iter().any(|r| r.len() != w) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    Ok(RingMatrix::from_rows(ring, rows))
}

pub fn matrix_to_json(m: &RingMatrix) -> Value {
    Value::Array(m.rows_iter().map(vector_to_json).collect())
}

pub fn matrix_from_json(ring: &Ring, v: &Value) -> Result<RingMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be a JSON array of rows".into()))?;
    let rows = rows
        .iter()
        .map(|r| vector_from_json(ring, r))
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    let w = rows[0].len();
    if rows.iter().any(|r| r.len() != w) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    Ok(RingMatrix::from_rows(ring, rows))
}

// ---------------------------------------------------------------------------
// polynomials
// ---------------------------------------------------------------------------

pub fn poly_to_text(f: &RingPoly) -> String {
    let coeffs = f.coeffs();
    if coeffs.is_empty() {
        return "0".into();
    }
    let mut terms: Vec<String> = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let ct = element_to_text(c);
        let ct_wrapped = if ct.contains('+') || ct.contains('|') {
            format!("({ct})")
        } else {
            ct.clone()
        };
        let t = match i {
            0 => ct_wrapped,
            _ => {
                let xpart = if i == 1 { "X".into() } else { format!("X^{i}") };
                if ct == "1" {
                    xpart
                } else {
                    format!("{ct_wrapped}*{xpart}")
                }
            }
        };
        terms.push(t);
    }
    terms.join("+")
}

impl fmt::Display for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&poly_to_text(self))
    }
}

pub fn poly_from_text(ring: &Ring, text: &str) -> Result<RingPoly> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // split into signed terms at top parenthesis level
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in cleaned.chars().enumerate() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 && i != 0 => {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            }
            '-' if depth == 0 && i == 0 => neg = true,
            _ => cur.push(ch),
        }
    }
    terms.push((neg, cur));

    let mut coeffs: Vec<RingElement> = Vec::new();
    let bump = |pow: usize, elem: RingElement, coeffs: &mut Vec<RingElement>| {
        if coeffs.len() <= pow {
            coeffs.resize(pow + 1, ring.zero());
        }
        coeffs[pow] = &coeffs[pow] + &elem;
    };
    for (neg, term) in terms {
        if term.is_empty() {
            return Err(Error::Parse(format!("bad polynomial `{text}`")));
        }
        let (coeff_str, pow) = match term.rfind('X') {
            None => (term.as_str(), 0usize),
            Some(pos) => {
                let rest = &term[pos + 1..];
                let pow = if let Some(e) = rest.strip_prefix('^') {
                    e.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad exponent `{term}`")))?
                } else if rest.is_empty() {
                    1
                } else {
                    return Err(Error::Parse(format!("bad term `{term}`")));
                };
                (term[..pos].trim_end_matches('*'), pow)
            }
        };
        let coeff_str = coeff_str
            .strip_prefix('(')
            .and_then(|c| c.strip_suffix(')'))
            .unwrap_or(coeff_str);
        let elem = if coeff_str.is_empty() {
            ring.one()
        } else {
            element_from_text(ring, coeff_str)?
        };
        let elem = if neg { -&elem } else { elem };
        bump(pow, elem, &mut coeffs);
    }
    Ok(RingPoly::from_coeffs(ring, coeffs))
}

pub fn poly_to_json(f: &RingPoly) -> Value {
    Value::Array(f.coeffs().iter().map(element_to_json).collect())
}

pub fn poly_from_json(ring: &Ring, v: &Value) -> Result<RingPoly> {
    if let Value::String(s) = v {
        return poly_from_text(ring, s);
    }
    let coeffs = vector_from_json(ring, v)?;
    Ok(RingPoly::from_coeffs(ring, coeffs))
}

// ---------------------------------------------------------------------------
// codes and reports
// ---------------------------------------------------------------------------

pub fn code_to_json(code: &LinearCode) -> Value {
    json!({
        "ring": code.ring().spec_string(),
        "n": code.length(),
        "generators": matrix_to_json(code.generators()),
        "rank": code.rank(),
        "free": code.is_free(),
        "cardinality": code.cardinality().to_string(),
    })
}

pub fn code_from_json(v: &Value) -> Result<LinearCode> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("code must be a JSON object".into()))?;
    let ring_spec = obj
        .get("ring")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("code is missing its `ring`".into()))?;
    let ring = Ring::parse(ring_spec)?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("code is missing `n`".into()))? as usize;
    let gens = obj
        .get("generators")
        .ok_or_else(|| Error::Parse("code is missing `generators`".into()))?;
    let gens = matrix_from_json(&ring, gens)?;
    let code = LinearCode::from_generators(&ring, n, gens)?;
    if let Some(card) = obj.get("cardinality").and_then(Value::as_str) {
        let claimed: BigUint = card
            .parse()
            .map_err(|_| Error::Parse(format!("bad cardinality `{card}`")))?;
        if &claimed != code.cardinality() {
            return Err(Error::Parse(format!(
                "cardinality mismatch: claimed {claimed}, actual {}",
                code.cardinality()
            )));
        }
    }
    Ok(code)
}

pub fn distance_report_to_json(r: &DistanceReport) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "metric".into(),
        json!(match r.metric {
            WeightKind::Lee => "lee",
            WeightKind::Hamming => "hamming",
        }),
    );
    match &r.status {
        DistanceStatus::Exact(d) => {
            obj.insert("status".into(), json!("exact"));
            obj.insert("value".into(), json!(d));
        }
        DistanceStatus::Bounds { lower, upper } => {
            obj.insert("status".into(), json!("bounds"));
            obj.insert("value".into(), json!([lower, upper]));
        }
    }
    obj.insert(
        "witness".into(),
        match &r.witness {
            Some(w) => vector_to_json(w),
            None => Value::Null,
        },
    );
    obj.insert(
        "strategy".into(),
        json!(match r.strategy {
            SearchStrategy::FullEnumeration => "full_enumeration",
            SearchStrategy::BoundedWeightSearch => "bounded_weight_search",
        }),
    );
    obj.insert("examined".into(), json!(r.examined.to_string()));
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_text_roundtrip() {
        let gr = Ring::galois(4, 2).unwrap();
        let e = gr.element_from_coords(vec![2, 3]).unwrap();
        assert_eq!(element_to_text(&e), "3*w+2");
        assert_eq!(element_from_text(&gr, "3*w+2").unwrap(), e);
        assert_eq!(element_from_text(&gr, "3w+2").unwrap(), e); // lenient form

        let r2 = Ring::local_algebra(2).unwrap();
        let a = r2.element_from_coords(vec![1, 1, 0, 1]).unwrap();
        assert_eq!(element_to_text(&a), "1+u1+u1*u2");
        assert_eq!(element_from_text(&r2, "1+u1+u1*u2").unwrap(), a);

        let z15 = Ring::zk(15).unwrap();
        let x = z15.from_integer(9);
        assert_eq!(element_to_text(&x), "(0|4)");
        assert_eq!(element_from_text(&z15, "(0|4)").unwrap(), x);
        assert_eq!(element_from_text(&z15, "9").unwrap(), x);
    }

    #[test]
    fn poly_text_examples() {
        let z4 = Ring::zk(4).unwrap();
        let f = poly_from_text(&z4, "X^3+2*X^2+X+3").unwrap();
        assert_eq!(poly_to_text(&f), "X^3+2*X^2+X+3");
        let g = poly_from_text(&z4, "X-1").unwrap();
        assert_eq!(poly_to_text(&g), "X+3");

        let gr = Ring::galois(4, 2).unwrap();
        let h = poly_from_text(&gr, "X^2+(3*w+2)*X+1").unwrap();
        assert_eq!(poly_to_text(&h), "X^2+(3*w+2)*X+1");
    }

    #[test]
    fn matrix_text_roundtrip() {
        let z4 = Ring::zk(4).unwrap();
        let m = matrix_from_text(&z4, "1,0,2;0,1,3").unwrap();
        assert_eq!(matrix_to_text(&m), "1,0,2;0,1,3");
        assert_eq!(m.rows(), 2);
        assert_eq!(m.cols(), 3);
    }
}
