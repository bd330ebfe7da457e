//! Canonical JSON form of a presentation.
//!
//! Object keys are sorted and every integer is written as a decimal
//! string. Generator indices are 0-based. Example for the dihedral group
//! of order 8:
//!
//! ```json
//! {
//!   "comm_tails": { "1,0": [["2", "1"]] },
//!   "definitions": [{"kind": "none"}, {"kind": "none"}, {"kind": "commutator", "of": ["1", "0"]}],
//!   "n": "3",
//!   "power_tails": {},
//!   "rel_orders": ["2", "2", "2"],
//!   "weights": ["1", "1", "2"]
//! }
//! ```
//!
//! An optional `images` object maps presentation generators to exponent
//! vectors.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{Definition, ExponentVector, PcPresentation, PcpBuilder, PcpError, SparseWord};

/// A presentation together with optional generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcpDocument {
    pub pcp: PcPresentation,
    pub images: Option<BTreeMap<String, ExponentVector>>,
}

fn num(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn word_value(w: &SparseWord) -> Value {
    Value::Array(w.iter().map(|&(g, e)| json!([num(g), num(e)])).collect())
}

pub fn vector_value(v: &ExponentVector) -> Value {
    Value::Array(v.0.iter().map(num).collect())
}

pub fn to_value(pcp: &PcPresentation, images: Option<&BTreeMap<String, ExponentVector>>) -> Value {
    let mut obj = Map::new();
    obj.insert("n".into(), num(pcp.n()));
    obj.insert("weights".into(), Value::Array(pcp.weights().iter().map(num).collect()));
    obj.insert("rel_orders".into(), Value::Array(pcp.rel_orders().iter().map(num).collect()));
    let powers: Map<String, Value> = pcp
        .power_relations()
        .iter()
        .map(|(i, w)| (i.to_string(), word_value(w)))
        .collect();
    obj.insert("power_tails".into(), Value::Object(powers));
    let comms: Map<String, Value> = pcp
        .commutator_relations()
        .iter()
        .map(|((j, i), w)| (format!("{j},{i}"), word_value(w)))
        .collect();
    obj.insert("comm_tails".into(), Value::Object(comms));
    let defs = pcp
        .definitions()
        .iter()
        .map(|d| match *d {
            Definition::None => json!({"kind": "none"}),
            Definition::Power(i) => json!({"kind": "power", "of": [num(i)]}),
            Definition::Commutator(j, i) => json!({"kind": "commutator", "of": [num(j), num(i)]}),
        })
        .collect();
    obj.insert("definitions".into(), Value::Array(defs));
    if let Some(images) = images {
        let m: Map<String, Value> = images.iter().map(|(k, v)| (k.clone(), vector_value(v))).collect();
        obj.insert("images".into(), Value::Object(m));
    }
    Value::Object(obj)
}

pub fn to_canonical_json(pcp: &PcPresentation, images: Option<&BTreeMap<String, ExponentVector>>) -> String {
    serde_json::to_string_pretty(&to_value(pcp, images)).expect("json values serialize")
}

fn invalid(msg: impl Into<String>) -> PcpError {
    PcpError::Invalid(msg.into())
}

fn parse_int<T: std::str::FromStr>(v: &Value, what: &str) -> Result<T, PcpError> {
    v.as_str()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| invalid(format!("{what}: expected an integer string, got {v}")))
}

fn parse_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, PcpError> {
    v.as_array().ok_or_else(|| invalid(format!("{what}: expected an array")))
}

fn parse_word(v: &Value, what: &str) -> Result<SparseWord, PcpError> {
    parse_array(v, what)?
        .iter()
        .map(|pair| {
            let p = parse_array(pair, what)?;
            if p.len() != 2 {
                return Err(invalid(format!("{what}: expected [generator, exponent]")));
            }
            Ok((parse_int(&p[0], what)?, parse_int(&p[1], what)?))
        })
        .collect()
}

pub fn parse_vector(v: &Value, what: &str) -> Result<ExponentVector, PcpError> {
    Ok(ExponentVector(
        parse_array(v, what)?
            .iter()
            .map(|x| parse_int(x, what))
            .collect::<Result<_, _>>()?,
    ))
}

pub fn from_value(v: &Value) -> Result<PcpDocument, PcpError> {
    let obj = v.as_object().ok_or_else(|| invalid("expected a JSON object"))?;
    let field = |k: &str| obj.get(k).ok_or_else(|| invalid(format!("missing field `{k}`")));
    let n: usize = parse_int(field("n")?, "n")?;
    let weights: Vec<u32> = parse_array(field("weights")?, "weights")?
        .iter()
        .map(|x| parse_int(x, "weights"))
        .collect::<Result<_, _>>()?;
    let rel_orders: Vec<i64> = parse_array(field("rel_orders")?, "rel_orders")?
        .iter()
        .map(|x| parse_int(x, "rel_orders"))
        .collect::<Result<_, _>>()?;
    if weights.len() != n || rel_orders.len() != n {
        return Err(invalid("weights and rel_orders must have n entries"));
    }
    let mut b = PcpBuilder::new(weights, rel_orders);
    let powers = field("power_tails")?
        .as_object()
        .ok_or_else(|| invalid("power_tails: expected an object"))?;
    for (k, w) in powers {
        let i: usize = k.parse().map_err(|_| invalid(format!("power_tails: bad key `{k}`")))?;
        if i >= n {
            return Err(PcpError::IndexOutOfRange { index: i, n });
        }
        b.power(i, parse_word(w, "power_tails")?);
    }
    let comms = field("comm_tails")?
        .as_object()
        .ok_or_else(|| invalid("comm_tails: expected an object"))?;
    for (k, w) in comms {
        let (j, i) = k
            .split_once(',')
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
            .ok_or_else(|| invalid(format!("comm_tails: bad key `{k}`")))?;
        if j >= n {
            return Err(PcpError::IndexOutOfRange { index: j, n });
        }
        b.commutator(j, i, parse_word(w, "comm_tails")?);
    }
    let defs = parse_array(field("definitions")?, "definitions")?;
    if defs.len() != n {
        return Err(invalid("definitions must have n entries"));
    }
    for (k, d) in defs.iter().enumerate() {
        let kind = d.get("kind").and_then(Value::as_str).unwrap_or("");
        let of = || -> Result<Vec<usize>, PcpError> {
            parse_array(d.get("of").unwrap_or(&Value::Null), "definitions")?
                .iter()
                .map(|x| parse_int(x, "definitions"))
                .collect()
        };
        let def = match kind {
            "none" => Definition::None,
            "power" => match of()?.as_slice() {
                [i] => Definition::Power(*i),
                _ => return Err(invalid("power definition takes one index")),
            },
            "commutator" => match of()?.as_slice() {
                [j, i] => Definition::Commutator(*j, *i),
                _ => return Err(invalid("commutator definition takes two indices")),
            },
            other => return Err(invalid(format!("unknown definition kind `{other}`"))),
        };
        b.define(k, def);
    }
    let pcp = b.build()?;
    let images = match obj.get("images") {
        None => None,
        Some(m) => {
            let m = m.as_object().ok_or_else(|| invalid("images: expected an object"))?;
            let mut out = BTreeMap::new();
            for (k, v) in m {
                let vec = parse_vector(v, "images")?;
                if vec.len() != n {
                    return Err(PcpError::Length {
                        expected: n,
                        found: vec.len(),
                    });
                }
                out.insert(k.clone(), vec);
            }
            Some(out)
        }
    };
    Ok(PcpDocument { pcp, images })
}

pub fn from_json(text: &str) -> Result<PcpDocument, PcpError> {
    let v: Value = serde_json::from_str(text).map_err(|e| invalid(format!("malformed JSON: {e}")))?;
    from_value(&v)
}
