//! Wire formats. Every top-level document carries `"schema": "padwave/1"`.
//!
//! Rationals are strings "num/den" ("num" when den = 1); cyclotomic numbers are
//! {"order": n, "coeffs": [...]} with φ(n) power-basis coefficients, emitted in the
//! smallest order that holds the value.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::cyclotomic::{euler_phi, CycMatrix, CycNumber};
use crate::error::{Error, Result};
use crate::moments::{Mode, MomentProfile, VanishingOrder};
use crate::mra::{FilterSeq, TrigPoly};
use crate::padic::{Ball, Prime, Rat};
use crate::stepfn::{Piece, StepFunction};

pub const SCHEMA: &str = "padwave/1";

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

/// Wrap an object body as a top-level document.
pub fn document(kind: &str, body: Value) -> Value {
    let mut m = match body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    m.insert("schema".into(), Value::String(SCHEMA.into()));
    m.insert("kind".into(), Value::String(kind.into()));
    Value::Object(m)
}

/// Accepts documents with the current schema tag, or bare objects without one.
pub fn check_schema(v: &Value) -> Result<()> {
    match v.get("schema") {
        None => Ok(()),
        Some(Value::String(s)) if s == SCHEMA => Ok(()),
        Some(other) => Err(bad(format!("unsupported schema {}", other))),
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n.trim()).map_err(|_| bad(format!("bad rational {:?}", s)))?;
    let d = BigInt::from_str(d.trim()).map_err(|_| bad(format!("bad rational {:?}", s)))?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if d.is_negative() {
        return Err(bad(format!("negative denominator in {:?}", s)));
    }
    Ok(Rat::new(n, d))
}

fn rat_field(v: &Value, key: &str) -> Result<Rat> {
    match v.get(key) {
        Some(Value::String(s)) => parse_rat(s),
        Some(Value::Number(n)) if n.is_i64() => Ok(Rat::from_integer(BigInt::from(n.as_i64().unwrap()))),
        _ => Err(bad(format!("missing rational field {:?}", key))),
    }
}

fn int_field(v: &Value, key: &str) -> Result<i64> {
    v.get(key)
        .and_then(Value::as_i64)
        .ok_or_else(|| bad(format!("missing integer field {:?}", key)))
}

fn prime_field(v: &Value) -> Result<Prime> {
    let p = int_field(v, "p")?;
    let p = u64::try_from(p).map_err(|_| Error::NotPrime(0))?;
    Prime::new(p)
}

pub fn cyc_json(c: &CycNumber) -> Value {
    let s = c.simplified();
    let mut coeffs = s.coeffs();
    coeffs.resize(euler_phi(s.order()), Rat::zero());
    json!({
        "order": s.order(),
        "coeffs": coeffs.iter().map(rat_str).collect::<Vec<_>>(),
    })
}

/// Also accepts a bare rational string.
pub fn parse_cyc(v: &Value) -> Result<CycNumber> {
    if let Value::String(s) = v {
        return Ok(CycNumber::from_rat(&parse_rat(s)?));
    }
    let order = v
        .get("order")
        .and_then(Value::as_u64)
        .filter(|n| *n >= 1)
        .ok_or_else(|| bad("cyclotomic number needs a positive \"order\""))?;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("cyclotomic number needs \"coeffs\""))?;
    let coeffs = coeffs
        .iter()
        .map(|c| match c {
            Value::String(s) => parse_rat(s),
            Value::Number(n) if n.is_i64() => Ok(Rat::from_integer(BigInt::from(n.as_i64().unwrap()))),
            _ => Err(bad("coefficient must be a rational string")),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CycNumber::from_coeffs(order, &coeffs))
}

pub fn ball_json(b: &Ball) -> Value {
    json!({ "center": rat_str(b.center()), "radiusExp": b.radius_exp() })
}

pub fn parse_ball(v: &Value, p: Prime) -> Result<Ball> {
    Ok(Ball::new(&rat_field(v, "center")?, int_field(v, "radiusExp")?, p))
}

/// Emits the disjoint normal form.
pub fn stepfn_json(f: &StepFunction) -> Value {
    let pieces: Vec<Value> = f
        .canonical()
        .pieces()
        .iter()
        .map(|pc| {
            json!({
                "ball": ball_json(&pc.ball),
                "freq": rat_str(&pc.freq),
                "coeff": cyc_json(&pc.coeff),
            })
        })
        .collect();
    json!({ "p": f.p().get(), "pieces": pieces })
}

pub fn parse_stepfn(v: &Value) -> Result<StepFunction> {
    check_schema(v)?;
    let p = prime_field(v)?;
    let pieces = v
        .get("pieces")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("step function needs \"pieces\""))?;
    let pieces = pieces
        .iter()
        .map(|pc| {
            let ball = parse_ball(pc.get("ball").ok_or_else(|| bad("piece needs \"ball\""))?, p)?;
            let freq = match pc.get("freq") {
                None => Rat::zero(),
                Some(_) => rat_field(pc, "freq")?,
            };
            let coeff = parse_cyc(pc.get("coeff").ok_or_else(|| bad("piece needs \"coeff\""))?)?;
            Ok(Piece::new(ball, freq, coeff))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StepFunction::from_pieces(p, pieces))
}

pub fn mask_json(h: &FilterSeq) -> Value {
    let entries: Map<String, Value> = h.points().iter().map(|(a, v)| (rat_str(a), cyc_json(v))).collect();
    json!({ "p": h.p().get(), "N": h.level(), "entries": entries })
}

pub fn parse_mask(v: &Value) -> Result<FilterSeq> {
    check_schema(v)?;
    let p = prime_field(v)?;
    let n = u32::try_from(int_field(v, "N")?).map_err(|_| bad("N must be non-negative"))?;
    if n > 12 {
        return Err(bad("N is too large"));
    }
    let entries = v
        .get("entries")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("mask needs \"entries\""))?;
    let mut h = FilterSeq::zero(p, n);
    let scale = Rat::from_integer(p.pow_int(n + 1));
    for (key, val) in entries {
        let k = parse_rat(key)? * &scale;
        if !k.is_integer() || k.is_negative() || k >= scale {
            return Err(bad(format!("mask index {} is not k/p^(N+1) in [0, 1)", key)));
        }
        let k = u64::try_from(k.to_integer()).expect("k < p^(N+1)");
        h.set(k, &h.get(k) + &parse_cyc(val)?);
    }
    Ok(h)
}

fn cyc_map(m: &BTreeMap<i64, CycNumber>) -> Value {
    Value::Object(m.iter().map(|(g, c)| (g.to_string(), cyc_json(c))).collect())
}

pub fn profile_json(pr: &MomentProfile) -> Value {
    json!({
        "p": pr.p().get(),
        "zeroMass": cyc_json(pr.zero_mass()),
        "shells": cyc_map(pr.shells()),
        "tails": cyc_map(pr.tails()),
    })
}

pub fn order_json(mode: Mode, order: VanishingOrder) -> Value {
    json!({ "mode": mode.to_string(), "order": order.to_string() })
}

/// {"p", "terms": {frequency: coefficient}}
pub fn trig_json(t: &TrigPoly) -> Value {
    let terms: Map<String, Value> = t.terms().iter().map(|(a, c)| (rat_str(a), cyc_json(c))).collect();
    json!({ "p": t.p().get(), "terms": terms })
}

pub fn matrix_json(m: &CycMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array((0..m.cols()).map(|j| cyc_json(m.get(i, j))).collect()))
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": rows })
}

/// {"entries": [[cyc, ...], ...]}, or a bare array of rows.
pub fn parse_matrix(v: &Value) -> Result<CycMatrix> {
    let rows = v
        .get("entries")
        .unwrap_or(v)
        .as_array()
        .ok_or_else(|| bad("matrix needs an array of rows"))?;
    let r = rows.len();
    let c = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
    let mut entries = Vec::with_capacity(r * c);
    for row in rows {
        let row = row.as_array().ok_or_else(|| bad("matrix row must be an array"))?;
        if row.len() != c {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        for e in row {
            entries.push(parse_cyc(e)?);
        }
    }
    CycMatrix::new(r, c, entries)
}

/// Keys "a,b" with non-negative integer parts.
pub fn parse_index_pair(key: &str) -> Result<(u64, u64)> {
    let (a, b) = key
        .split_once(',')
        .ok_or_else(|| bad(format!("expected \"a,b\", got {:?}", key)))?;
    let a = a.trim().parse().map_err(|_| bad(format!("bad index {:?}", key)))?;
    let b = b.trim().parse().map_err(|_| bad(format!("bad index {:?}", key)))?;
    Ok((a, b))
}
