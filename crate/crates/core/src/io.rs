//! JSON encoding of fans, morphisms and exact integers.
//!
//! Integers are written as JSON numbers when they fit in 64 bits and as
//! decimal strings otherwise. On input both forms are accepted; floats are
//! rejected.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::fan::{make_morphism, Fan, FanError, MorphismError, ToricMorphism};
use crate::intlin::IntMatrix;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
    #[error("invalid fan: {0}")]
    Fan(#[from] FanError),
    #[error("invalid morphism: {0}")]
    Morphism(#[from] MorphismError),
}

fn schema(msg: impl Into<String>) -> IoError {
    IoError::Schema(msg.into())
}

pub fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn vec_value(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

pub fn matrix_value(m: &IntMatrix) -> Value {
    Value::Array(m.row_vectors().iter().map(|r| vec_value(r)).collect())
}

pub fn parse_int(v: &Value) -> Result<BigInt, IoError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(schema(format!("{n} is not an integer")))
            }
        }
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| schema(format!("{s:?} is not an integer"))),
        other => Err(schema(format!("expected integer, found {other}"))),
    }
}

pub fn parse_int_vec(v: &Value) -> Result<Vec<BigInt>, IoError> {
    v.as_array()
        .ok_or_else(|| schema(format!("expected array, found {v}")))?
        .iter()
        .map(parse_int)
        .collect()
}

fn parse_usize(v: &Value) -> Result<usize, IoError> {
    v.as_u64()
        .and_then(|u| usize::try_from(u).ok())
        .ok_or_else(|| schema(format!("expected nonnegative index, found {v}")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, IoError> {
    obj.get(key)
        .ok_or_else(|| schema(format!("missing field {key:?}")))
}

pub fn fan_from_json(v: &Value) -> Result<Fan, IoError> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema("fan must be a JSON object"))?;
    let rank = parse_usize(field(obj, "rank")?)?;
    let rays: Vec<Vec<BigInt>> = field(obj, "rays")?
        .as_array()
        .ok_or_else(|| schema("\"rays\" must be an array"))?
        .iter()
        .map(parse_int_vec)
        .collect::<Result<_, _>>()?;
    let cones: Vec<Vec<usize>> = field(obj, "max_cones")?
        .as_array()
        .ok_or_else(|| schema("\"max_cones\" must be an array"))?
        .iter()
        .map(|c| {
            c.as_array()
                .ok_or_else(|| schema("each cone must be an array"))?
                .iter()
                .map(parse_usize)
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(other) => return Err(schema(format!("\"name\" must be a string, found {other}"))),
    };
    Ok(Fan::new(rank, rays, cones, name)?)
}

pub fn fan_to_json(f: &Fan) -> Value {
    let mut obj = Map::new();
    obj.insert("rank".into(), Value::from(f.rank()));
    obj.insert(
        "rays".into(),
        Value::Array(f.rays().iter().map(|r| vec_value(r)).collect()),
    );
    obj.insert(
        "max_cones".into(),
        Value::Array(
            f.max_cones()
                .iter()
                .map(|c| json!(c.generators()))
                .collect(),
        ),
    );
    if let Some(name) = f.name() {
        obj.insert("name".into(), Value::String(name.to_string()));
    }
    Value::Object(obj)
}

fn read_json(path: &Path) -> Result<Value, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_fan(path: &Path) -> Result<Fan, IoError> {
    fan_from_json(&read_json(path)?)
}

/// `source` and `target` may be inline fan objects or paths, resolved
/// relative to `base_dir` when given.
pub fn morphism_from_json(v: &Value, base_dir: Option<&Path>) -> Result<ToricMorphism, IoError> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema("morphism must be a JSON object"))?;
    let load = |key: &str| -> Result<Fan, IoError> {
        match field(obj, key)? {
            Value::String(p) => {
                let p = Path::new(p);
                let full = match base_dir {
                    Some(dir) if p.is_relative() => dir.join(p),
                    _ => p.to_path_buf(),
                };
                read_fan(&full)
            }
            inline @ Value::Object(_) => fan_from_json(inline),
            other => Err(schema(format!(
                "{key:?} must be a path or fan object, found {other}"
            ))),
        }
    };
    let source = load("source")?;
    let target = load("target")?;
    let rows: Vec<Vec<BigInt>> = field(obj, "matrix")?
        .as_array()
        .ok_or_else(|| schema("\"matrix\" must be an array of rows"))?
        .iter()
        .map(parse_int_vec)
        .collect::<Result<_, _>>()?;
    if rows.len() != target.rank() {
        return Err(schema(format!(
            "matrix has {} rows, target rank is {}",
            rows.len(),
            target.rank()
        )));
    }
    let matrix = IntMatrix::from_rows(source.rank(), &rows)
        .map_err(|_| schema(format!("matrix rows must have length {}", source.rank())))?;
    Ok(make_morphism(source, target, matrix)?)
}

pub fn read_morphism(path: &Path) -> Result<ToricMorphism, IoError> {
    morphism_from_json(&read_json(path)?, path.parent())
}

/// Morphism with `source` and `target` given as the supplied values,
/// typically file names or inline fans.
pub fn morphism_to_json(m: &ToricMorphism, source: Value, target: Value) -> Value {
    json!({ "matrix": matrix_value(m.matrix()), "source": source, "target": target })
}

pub fn morphism_to_json_inline(m: &ToricMorphism) -> Value {
    morphism_to_json(m, fan_to_json(m.source()), fan_to_json(m.target()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::examples::*;

    #[test]
    fn integer_policy() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(int_value(&big), Value::String(big.to_string()));
        assert_eq!(int_value(&BigInt::from(-7)), json!(-7));
        assert_eq!(parse_int(&Value::String(big.to_string())).unwrap(), big);
        assert!(parse_int(&json!(1.5)).is_err());
        assert!(parse_int(&json!(true)).is_err());
    }

    #[test]
    fn fan_round_trip() {
        let f = hirzebruch(2);
        let v = fan_to_json(&f);
        let g = fan_from_json(&v).unwrap();
        assert_eq!(f, g);
        assert_eq!(fan_to_json(&g), v);
    }

    #[test]
    fn inline_morphism() {
        let m = hirzebruch_projection(1);
        let v = morphism_to_json_inline(&m);
        assert_eq!(morphism_from_json(&v, None).unwrap(), m);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fan_from_json(&json!({"rank": 1, "rays": [[1.0]], "max_cones": [[0]]})).is_err());
        assert!(fan_from_json(&json!({"rank": 1, "rays": [[2]], "max_cones": [[0]]})).is_err());
        assert!(fan_from_json(&json!({"rays": [[1]], "max_cones": [[0]]})).is_err());
        let bad =
            json!({"matrix": [[1, 0]], "source": fan_to_json(&p1()), "target": fan_to_json(&p1())});
        assert!(morphism_from_json(&bad, None).is_err());
    }
}
