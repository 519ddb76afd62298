//! Strict JSON encoding of values, maps, moves, polynomials and
//! certificates.
//!
//! Readers reject unknown fields and report the path of the first offending
//! element. Writers produce sorted keys and rationals in lowest terms as
//! `"p/q"`, so equal objects always serialize to the same bytes.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{Map, Number, Value as Json};

use crate::factor::{Arrow, Verdict, ZigzagCert};
use crate::matrix::IntMatrix;
use crate::monomaps::{ElementaryMove, MonoMap};
use crate::perron::{ExponentVector, PerronExpansion};
use crate::uniformize::{MonomialForm, Polynomial};
use crate::values::{is_squarefree, SurdBasis, Value, MAX_RADICAND};

/// A malformed document, with the path of the offending element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for JsonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{} at {}", self.message, self.path)
        }
    }
}

impl std::error::Error for JsonError {}

pub type JsonResult<T> = std::result::Result<T, JsonError>;

fn fail<T>(path: &str, message: impl Into<String>) -> JsonResult<T> {
    Err(JsonError {
        path: path.to_string(),
        message: message.into(),
    })
}

fn child(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn index(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

/// Parses a complete document.
pub fn parse_document(bytes: &[u8]) -> JsonResult<Json> {
    serde_json::from_slice(bytes).or_else(|e| fail("", format!("invalid JSON: {e}")))
}

/// Pretty-printed document with a trailing newline.
pub fn to_pretty_string(doc: &Json) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializing a JSON tree cannot fail");
    s.push('\n');
    s
}

/// The object at `path`, checked to have exactly the listed fields.
pub fn object<'a>(j: &'a Json, path: &str, fields: &[&str]) -> JsonResult<&'a Map<String, Json>> {
    let Json::Object(map) = j else {
        return fail(path, "expected an object");
    };
    if let Some(k) = map.keys().find(|k| !fields.contains(&k.as_str())) {
        return fail(path, format!("unknown field `{k}`"));
    }
    if let Some(k) = fields.iter().find(|k| !map.contains_key(**k)) {
        return fail(path, format!("missing field `{k}`"));
    }
    Ok(map)
}

fn array<'a>(j: &'a Json, path: &str) -> JsonResult<&'a Vec<Json>> {
    match j {
        Json::Array(a) => Ok(a),
        _ => fail(path, "expected an array"),
    }
}

fn integer(j: &Json, path: &str) -> JsonResult<BigInt> {
    let Json::Number(n) = j else {
        return fail(path, "expected an integer");
    };
    let text = n.to_string();
    if text.contains(['.', 'e', 'E']) {
        return fail(path, "expected an integer");
    }
    text.parse().or_else(|_| fail(path, "expected an integer"))
}

fn count(j: &Json, path: &str) -> JsonResult<usize> {
    let k = integer(j, path)?;
    if k.is_negative() {
        return fail(path, "expected a nonnegative integer");
    }
    k.to_usize().map_or_else(|| fail(path, "integer too large"), Ok)
}

/// A 1-based index, returned 0-based.
fn one_based(j: &Json, path: &str) -> JsonResult<usize> {
    match count(j, path)? {
        0 => fail(path, "indices are 1-based"),
        k => Ok(k - 1),
    }
}

fn int_json(k: &BigInt) -> Json {
    Json::Number(k.to_string().parse::<Number>().expect("decimal integers are valid JSON numbers"))
}

fn usize_json(k: usize) -> Json {
    Json::Number(k.into())
}

// ---- rationals and values ----

/// Reads `"p/q"` with `q > 0`.
pub fn parse_rational(j: &Json, path: &str) -> JsonResult<BigRational> {
    let Json::String(s) = j else {
        return fail(path, "expected a rational string \"p/q\"");
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let Some((p, q)) = s.split_once('/') else {
        return fail(path, "expected a rational string \"p/q\"");
    };
    let p_digits = p.strip_prefix('-').unwrap_or(p);
    if !digits(p_digits) || !digits(q) {
        return fail(path, "expected a rational string \"p/q\"");
    }
    let p: BigInt = p.parse().or_else(|_| fail(path, "bad numerator"))?;
    let q: BigInt = q.parse().or_else(|_| fail(path, "bad denominator"))?;
    if q.is_zero() {
        return fail(path, "zero denominator");
    }
    Ok(BigRational::new(p, q))
}

pub fn rational_to_json(q: &BigRational) -> Json {
    Json::String(format!("{}/{}", q.numer(), q.denom()))
}

fn parse_basis(j: &Json, path: &str) -> JsonResult<Arc<SurdBasis>> {
    let raw = array(j, path)?;
    if raw.is_empty() {
        return fail(path, "empty basis");
    }
    let mut radicands = Vec::with_capacity(raw.len());
    for (i, r) in raw.iter().enumerate() {
        let p = index(path, i);
        let d = integer(r, &p)?;
        let d = match d.to_u64() {
            Some(d) if (1..=MAX_RADICAND).contains(&d) => d,
            _ => return fail(&p, format!("radicand out of range 1..={MAX_RADICAND}")),
        };
        if !is_squarefree(d) {
            return fail(&p, "radicand not squarefree");
        }
        if radicands.last().is_some_and(|&prev| prev >= d) {
            return fail(&p, "radicands must be distinct and ascending");
        }
        radicands.push(d);
    }
    SurdBasis::new(radicands).or_else(|e| fail(path, e.to_string()))
}

fn parse_coeffs(basis: &Arc<SurdBasis>, j: &Json, path: &str) -> JsonResult<Value> {
    let raw = array(j, path)?;
    if raw.len() != basis.len() {
        return fail(path, "coefficient count differs from basis size");
    }
    let coeffs = raw
        .iter()
        .enumerate()
        .map(|(i, c)| parse_rational(c, &index(path, i)))
        .collect::<JsonResult<Vec<_>>>()?;
    Value::new(basis.clone(), coeffs).or_else(|e| fail(path, e.to_string()))
}

pub fn parse_value(j: &Json, path: &str) -> JsonResult<Value> {
    let obj = object(j, path, &["basis", "coeffs"])?;
    let basis = parse_basis(&obj["basis"], &child(path, "basis"))?;
    parse_coeffs(&basis, &obj["coeffs"], &child(path, "coeffs"))
}

pub fn value_to_json(v: &Value) -> Json {
    let mut m = Map::new();
    m.insert(
        "basis".into(),
        Json::Array(v.basis().radicands().iter().map(|&d| Json::Number(d.into())).collect()),
    );
    m.insert("coeffs".into(), Json::Array(v.coeffs().iter().map(rational_to_json).collect()));
    Json::Object(m)
}

/// A nonempty list of values over one common basis.
///
/// Accepts either an array of values or the shared-basis form
/// `{"basis": [...], "values": [[coeffs...], ...]}`.
pub fn parse_weights(j: &Json, path: &str) -> JsonResult<Vec<Value>> {
    if j.is_object() {
        let obj = object(j, path, &["basis", "values"])?;
        let basis = parse_basis(&obj["basis"], &child(path, "basis"))?;
        let vp = child(path, "values");
        let raw = array(&obj["values"], &vp)?;
        if raw.is_empty() {
            return fail(&vp, "expected at least one value");
        }
        return raw
            .iter()
            .enumerate()
            .map(|(i, c)| parse_coeffs(&basis, c, &index(&vp, i)))
            .collect();
    }
    let raw = array(j, path)?;
    if raw.is_empty() {
        return fail(path, "expected at least one value");
    }
    let values = raw
        .iter()
        .enumerate()
        .map(|(i, v)| parse_value(v, &index(path, i)))
        .collect::<JsonResult<Vec<_>>>()?;
    if let Some(i) = values.iter().position(|v| !v.same_basis(&values[0])) {
        return fail(&index(path, i), "incompatible value bases");
    }
    Ok(values)
}

pub fn weights_to_json(values: &[Value]) -> Json {
    Json::Array(values.iter().map(value_to_json).collect())
}

// ---- matrices and maps ----

fn parse_rows(j: &Json, path: &str, rows: usize, cols: usize) -> JsonResult<IntMatrix> {
    let raw = array(j, path)?;
    if raw.len() != rows {
        return fail(path, format!("expected {rows} rows"));
    }
    let mut data = Vec::with_capacity(rows);
    for (i, row) in raw.iter().enumerate() {
        let p = index(path, i);
        let row = array(row, &p)?;
        if row.len() != cols {
            return fail(&p, format!("expected {cols} entries"));
        }
        data.push(
            row.iter()
                .enumerate()
                .map(|(k, e)| integer(e, &index(&p, k)))
                .collect::<JsonResult<Vec<_>>>()?,
        );
    }
    IntMatrix::from_rows(data).or_else(|e| fail(path, e.to_string()))
}

pub fn matrix_to_json(m: &IntMatrix) -> Json {
    Json::Array(
        (0..m.rows())
            .map(|i| Json::Array(m.row(i).iter().map(int_json).collect()))
            .collect(),
    )
}

pub fn parse_monomap(j: &Json, path: &str) -> JsonResult<MonoMap> {
    let obj = object(j, path, &["n", "rows"])?;
    let n = count(&obj["n"], &child(path, "n"))?;
    if n == 0 {
        return fail(&child(path, "n"), "dimension must be positive");
    }
    let rows = array(&obj["rows"], &child(path, "rows"))?;
    if rows.len() != n {
        return fail(&child(path, "rows"), format!("expected {n} rows"));
    }
    let m = parse_rows(&obj["rows"], &child(path, "rows"), n, n)?;
    MonoMap::new(m).or_else(|e| fail(path, e.to_string()))
}

pub fn monomap_to_json(m: &MonoMap) -> Json {
    let mut o = Map::new();
    o.insert("n".into(), usize_json(m.n()));
    o.insert("rows".into(), matrix_to_json(m.matrix()));
    Json::Object(o)
}

// ---- moves ----

pub fn parse_move(j: &Json, path: &str) -> JsonResult<ElementaryMove> {
    let Json::Object(raw) = j else {
        return fail(path, "expected an object");
    };
    let kind = match raw.get("kind") {
        Some(Json::String(k)) => k.as_str(),
        Some(_) => return fail(&child(path, "kind"), "expected a string"),
        None => return fail(path, "missing field `kind`"),
    };
    match kind {
        "blowup" | "imt" => {
            let obj = object(j, path, &["kind", "r", "s"])?;
            let r = one_based(&obj["r"], &child(path, "r"))?;
            let s = one_based(&obj["s"], &child(path, "s"))?;
            Ok(if kind == "blowup" {
                ElementaryMove::Blowup { r, s }
            } else {
                ElementaryMove::Imt { r, s }
            })
        }
        "relabel" => {
            let obj = object(j, path, &["kind", "perm"])?;
            let p = child(path, "perm");
            let perm = array(&obj["perm"], &p)?
                .iter()
                .enumerate()
                .map(|(i, k)| one_based(k, &index(&p, i)))
                .collect::<JsonResult<Vec<_>>>()?;
            Ok(ElementaryMove::Relabel { perm })
        }
        other => fail(&child(path, "kind"), format!("unknown move kind `{other}`")),
    }
}

pub fn move_to_json(mv: &ElementaryMove) -> Json {
    let mut o = Map::new();
    match mv {
        ElementaryMove::Blowup { r, s } | ElementaryMove::Imt { r, s } => {
            let kind = if matches!(mv, ElementaryMove::Blowup { .. }) { "blowup" } else { "imt" };
            o.insert("kind".into(), Json::String(kind.into()));
            o.insert("r".into(), usize_json(r + 1));
            o.insert("s".into(), usize_json(s + 1));
        }
        ElementaryMove::Relabel { perm } => {
            o.insert("kind".into(), Json::String("relabel".into()));
            o.insert("perm".into(), Json::Array(perm.iter().map(|k| usize_json(k + 1)).collect()));
        }
    }
    Json::Object(o)
}

pub fn parse_moves(j: &Json, path: &str) -> JsonResult<Vec<ElementaryMove>> {
    array(j, path)?
        .iter()
        .enumerate()
        .map(|(i, m)| parse_move(m, &index(path, i)))
        .collect()
}

pub fn moves_to_json(moves: &[ElementaryMove]) -> Json {
    Json::Array(moves.iter().map(move_to_json).collect())
}

// ---- polynomials ----

fn exponent_to_json(e: &ExponentVector) -> Json {
    Json::Array(e.iter().map(int_json).collect())
}

pub fn parse_polynomial(j: &Json, path: &str) -> JsonResult<Polynomial> {
    let obj = object(j, path, &["n", "terms"])?;
    let n = count(&obj["n"], &child(path, "n"))?;
    if n == 0 {
        return fail(&child(path, "n"), "dimension must be positive");
    }
    let tp = child(path, "terms");
    let mut terms = Vec::new();
    for (i, t) in array(&obj["terms"], &tp)?.iter().enumerate() {
        let p = index(&tp, i);
        let term = object(t, &p, &["exp", "coef"])?;
        let ep = child(&p, "exp");
        let raw = array(&term["exp"], &ep)?;
        if raw.len() != n {
            return fail(&ep, format!("expected {n} exponents"));
        }
        let exp = raw
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let ek = index(&ep, k);
                let v = integer(e, &ek)?;
                if v.is_negative() {
                    return fail(&ek, "negative exponent");
                }
                Ok(v)
            })
            .collect::<JsonResult<Vec<_>>>()?;
        let coef = parse_rational(&term["coef"], &child(&p, "coef"))?;
        terms.push((ExponentVector(exp), coef));
    }
    Polynomial::from_terms(n, terms).or_else(|e| fail(path, e.to_string()))
}

pub fn polynomial_to_json(f: &Polynomial) -> Json {
    let terms = f
        .terms()
        .iter()
        .map(|(e, c)| {
            let mut t = Map::new();
            t.insert("exp".into(), exponent_to_json(e));
            t.insert("coef".into(), rational_to_json(c));
            Json::Object(t)
        })
        .collect();
    let mut o = Map::new();
    o.insert("n".into(), usize_json(f.n()));
    o.insert("terms".into(), Json::Array(terms));
    Json::Object(o)
}

// ---- results ----

pub fn parse_cert(j: &Json, path: &str) -> JsonResult<ZigzagCert> {
    let obj = object(j, path, &["n", "input", "weights", "nodes", "arrows"])?;
    let n = count(&obj["n"], &child(path, "n"))?;
    let input = parse_monomap(&obj["input"], &child(path, "input"))?;
    let weights = parse_weights(&obj["weights"], &child(path, "weights"))?;
    let np = child(path, "nodes");
    let nodes = array(&obj["nodes"], &np)?
        .iter()
        .enumerate()
        .map(|(i, m)| parse_monomap(m, &index(&np, i)))
        .collect::<JsonResult<Vec<_>>>()?;
    let ap = child(path, "arrows");
    let arrows = array(&obj["arrows"], &ap)?
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let p = index(&ap, i);
            let a = object(a, &p, &["left", "right"])?;
            Ok(Arrow {
                left: parse_moves(&a["left"], &child(&p, "left"))?,
                right: parse_moves(&a["right"], &child(&p, "right"))?,
            })
        })
        .collect::<JsonResult<Vec<_>>>()?;
    Ok(ZigzagCert {
        n,
        input,
        weights,
        nodes,
        arrows,
    })
}

pub fn cert_to_json(cert: &ZigzagCert) -> Json {
    let arrows = cert
        .arrows
        .iter()
        .map(|a| {
            let mut o = Map::new();
            o.insert("left".into(), moves_to_json(&a.left));
            o.insert("right".into(), moves_to_json(&a.right));
            Json::Object(o)
        })
        .collect();
    let mut o = Map::new();
    o.insert("n".into(), usize_json(cert.n));
    o.insert("input".into(), monomap_to_json(&cert.input));
    o.insert("weights".into(), weights_to_json(&cert.weights));
    o.insert("nodes".into(), Json::Array(cert.nodes.iter().map(monomap_to_json).collect()));
    o.insert("arrows".into(), Json::Array(arrows));
    Json::Object(o)
}

pub fn verdict_to_json(v: &Verdict) -> Json {
    let mut o = Map::new();
    match v {
        Verdict::Accept => {
            o.insert("accepted".into(), Json::Bool(true));
        }
        Verdict::Reject { reason, location } => {
            o.insert("accepted".into(), Json::Bool(false));
            o.insert("reason".into(), Json::String(reason.clone()));
            o.insert("location".into(), Json::String(location.clone()));
        }
    }
    Json::Object(o)
}

/// `{"A", "det", "tau_h", "digits"}` for an accumulated run.
pub fn expansion_to_json(run: &PerronExpansion) -> Json {
    let a = run.matrix();
    let det = a.det().expect("accumulated matrices are square");
    let mut o = Map::new();
    o.insert("A".into(), matrix_to_json(a));
    o.insert("det".into(), int_json(&det));
    o.insert("tau_h".into(), weights_to_json(run.tau()));
    o.insert(
        "digits".into(),
        Json::Array(
            run.digits()
                .iter()
                .map(|d| Json::Array(d.iter().map(int_json).collect()))
                .collect(),
        ),
    );
    Json::Object(o)
}

/// `{"A", "tau_h", "monomial", "unit"}`.
pub fn monomial_form_to_json(m: &MonomialForm) -> Json {
    let mut o = Map::new();
    o.insert("A".into(), matrix_to_json(&m.transform));
    o.insert("steps".into(), usize_json(m.transform.h));
    o.insert("tau_h".into(), weights_to_json(&m.tau));
    o.insert("monomial".into(), exponent_to_json(&m.monomial));
    o.insert("unit".into(), polynomial_to_json(&m.unit));
    Json::Object(o)
}
