//! JSON encoding of structures:
//!
//! ```json
//! {"signature": {"E": 2}, "universe": 2, "relations": {"E": [[0, 1]]}, "point": 0}
//! ```
//!
//! `point` is optional; relations absent from `relations` are empty. Tuples are
//! written in lexicographic order so that serialisation is canonical.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

use super::{Signature, Structure};

fn parse_err(position: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        position: position.into(),
        message: message.into(),
    }
}

fn as_index(v: &Value, position: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| parse_err(position, "expected a non-negative integer"))
}

/// Parses the JSON encoding. Errors carry a JSON-path style position, or a
/// line/column for syntax errors.
pub fn parse_structure(bytes: &[u8]) -> Result<Structure> {
    let value: Value = serde_json::from_slice(bytes)
        .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    structure_from_value(&value)
}

/// Builds a structure from an already parsed JSON value.
pub fn structure_from_value(value: &Value) -> Result<Structure> {
    let obj = value.as_object().ok_or_else(|| parse_err("$", "expected an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "signature" | "universe" | "relations" | "point") {
            return Err(parse_err(format!("$.{key}"), "unknown field"));
        }
    }
    let sig_obj = obj
        .get("signature")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("$.signature", "expected an object of arities"))?;
    let mut rels = Vec::new();
    for (name, arity) in sig_obj {
        let a = as_index(arity, &format!("$.signature.{name}"))?;
        rels.push((name.clone(), a as usize));
    }
    let sig = Signature::new(rels)?;
    let universe = obj
        .get("universe")
        .ok_or_else(|| parse_err("$.universe", "missing"))
        .and_then(|v| as_index(v, "$.universe"))? as usize;
    let mut s = Structure::new(sig.clone(), universe);
    if let Some(relations) = obj.get("relations") {
        let relations = relations
            .as_object()
            .ok_or_else(|| parse_err("$.relations", "expected an object"))?;
        for (name, tuples) in relations {
            let pos = format!("$.relations.{name}");
            let r = sig
                .index_of(name)
                .ok_or_else(|| parse_err(&pos, format!("relation `{name}` is not in the signature")))?;
            let tuples = tuples
                .as_array()
                .ok_or_else(|| parse_err(&pos, "expected an array of tuples"))?;
            for (i, t) in tuples.iter().enumerate() {
                let tpos = format!("{pos}[{i}]");
                let elems = t.as_array().ok_or_else(|| parse_err(&tpos, "expected an array"))?;
                let mut tuple = Vec::with_capacity(elems.len());
                for (j, e) in elems.iter().enumerate() {
                    tuple.push(as_index(e, &format!("{tpos}[{j}]"))? as u32);
                }
                s.insert(r, tuple).map_err(|e| parse_err(&tpos, e.to_string()))?;
            }
        }
    }
    if let Some(p) = obj.get("point") {
        if !p.is_null() {
            let p = as_index(p, "$.point")? as u32;
            s = s.with_point(Some(p)).map_err(|e| parse_err("$.point", e.to_string()))?;
        }
    }
    Ok(s)
}

/// The JSON value of a structure (keys and tuples in canonical order).
pub fn structure_to_value(s: &Structure) -> Value {
    let sig = s.signature();
    let mut sig_obj = Map::new();
    let mut rel_obj = Map::new();
    for (r, (name, arity)) in sig.relations().iter().enumerate() {
        sig_obj.insert(name.clone(), json!(arity));
        let tuples: Vec<Value> = s.tuples(r).iter().map(|t| json!(t)).collect();
        rel_obj.insert(name.clone(), Value::Array(tuples));
    }
    let mut obj = Map::new();
    obj.insert("signature".into(), Value::Object(sig_obj));
    obj.insert("universe".into(), json!(s.size()));
    obj.insert("relations".into(), Value::Object(rel_obj));
    if let Some(p) = s.point() {
        obj.insert("point".into(), json!(p));
    }
    Value::Object(obj)
}

/// Canonical compact JSON bytes.
pub fn serialize_structure(s: &Structure) -> Vec<u8> {
    serde_json::to_vec(&structure_to_value(s)).expect("structure values serialise")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{enumerate_pointed, EnumerateOptions};

    #[test]
    fn minimal_document() {
        let s = parse_structure(br#"{"signature":{"E":2},"universe":2,"relations":{"E":[[0,1]]}}"#).unwrap();
        assert_eq!(s, Structure::digraph(2, &[(0, 1)]).unwrap());
    }

    #[test]
    fn range_error_has_position() {
        let err = parse_structure(br#"{"signature":{"E":2},"universe":2,"relations":{"E":[[0,2]]}}"#).unwrap_err();
        match err {
            Error::Parse { position, message } => {
                assert_eq!(position, "$.relations.E[0]");
                assert!(message.contains("out of range"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn arity_and_syntax_errors() {
        let err = parse_structure(br#"{"signature":{"E":2},"universe":2,"relations":{"E":[[0]]}}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = parse_structure(b"{\"signature\":").unwrap_err();
        match err {
            Error::Parse { position, .. } => assert!(position.starts_with("line 1")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn round_trip_on_enumerated_structures() {
        let sig = Signature::new([("E", 2), ("P", 1)]).unwrap();
        for s in enumerate_pointed(&sig, &EnumerateOptions::new(2)).unwrap() {
            let bytes = serialize_structure(&s);
            let back = parse_structure(&bytes).unwrap();
            assert_eq!(back, s);
            assert_eq!(serialize_structure(&back), bytes);
        }
    }
}
