//! JSON interchange format for multilinear maps.
//!
//! ```json
//! {
//!   "field": "complex",
//!   "k": 1,
//!   "factors": [{"dim": 2, "p": 2}],
//!   "codomain": {"dim": 2, "p": "inf"},
//!   "coefficients": [[1, 0], [0, 1], [0, 0], [2, -1]]
//! }
//! ```
//!
//! Coefficients are flat and row-major over `[j, i_1, ..., i_k]`. Real files
//! hold plain numbers, complex files `[re, im]` pairs (a plain number is read
//! as a real entry). Floats are written in shortest round-trip form, so a
//! save/load cycle is bit-exact.

use std::path::Path;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::multilinear::MultilinearMap;
use crate::spaces::{Exponent, Field, SpaceSpec, C64};

#[derive(Debug, Error)]
pub enum MapFileError {
    #[error("cannot access {path}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Schema { field: String, message: String },
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> MapFileError {
    MapFileError::Schema { field: field.into(), message: message.into() }
}

fn field_of<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, MapFileError> {
    obj.get(key).ok_or_else(|| schema(path, "missing"))
}

fn positive_int(v: &Value, path: &str) -> Result<usize, MapFileError> {
    match v.as_u64() {
        Some(n) if n > 0 => Ok(n as usize),
        _ => Err(schema(path, format!("expected a positive integer, found {v}"))),
    }
}

fn parse_space(v: &Value, field: Field, path: &str) -> Result<SpaceSpec, MapFileError> {
    let obj = v.as_object().ok_or_else(|| schema(path, "expected an object with \"dim\" and \"p\""))?;
    let dim = positive_int(field_of(obj, "dim", &format!("{path}.dim"))?, &format!("{path}.dim"))?;
    let p_path = format!("{path}.p");
    let p = match field_of(obj, "p", &p_path)? {
        Value::String(s) if s == "inf" => Exponent::Infinity,
        Value::Number(n) => {
            let p = n.as_f64().ok_or_else(|| schema(&p_path, "not representable as f64"))?;
            Exponent::new(p).map_err(|e| schema(&p_path, e.to_string()))?
        }
        other => return Err(schema(&p_path, format!("expected a number >= 1 or \"inf\", found {other}"))),
    };
    SpaceSpec::new(dim, p, field).map_err(|e| schema(path, e.to_string()))
}

fn finite(v: &Value, path: &str) -> Result<f64, MapFileError> {
    match v.as_f64() {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(schema(path, format!("expected a finite number, found {v}"))),
    }
}

fn parse_coefficient(v: &Value, field: Field, path: &str) -> Result<C64, MapFileError> {
    match (v, field) {
        (Value::Number(_), _) => Ok(C64::new(finite(v, path)?, 0.0)),
        (Value::Array(pair), Field::Complex) if pair.len() == 2 => {
            Ok(C64::new(finite(&pair[0], &format!("{path}[0]"))?, finite(&pair[1], &format!("{path}[1]"))?))
        }
        (_, Field::Complex) => Err(schema(path, format!("expected [re, im] or a number, found {v}"))),
        (_, Field::Real) => Err(schema(path, format!("expected a number in a real map, found {v}"))),
    }
}

/// Parses the JSON text of a map file.
pub fn parse_map(text: &str) -> Result<MultilinearMap, MapFileError> {
    let root: Value = serde_json::from_str(text).map_err(|e| MapFileError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = root.as_object().ok_or_else(|| schema("(root)", "expected a JSON object"))?;
    let field = match field_of(obj, "field", "field")? {
        Value::String(s) if s == "real" => Field::Real,
        Value::String(s) if s == "complex" => Field::Complex,
        other => return Err(schema("field", format!("expected \"real\" or \"complex\", found {other}"))),
    };
    let k = positive_int(field_of(obj, "k", "k")?, "k")?;
    let factors_v = field_of(obj, "factors", "factors")?
        .as_array()
        .ok_or_else(|| schema("factors", "expected an array"))?;
    if factors_v.len() != k {
        return Err(schema("factors", format!("expected {k} entries (k), found {}", factors_v.len())));
    }
    let factors = factors_v
        .iter()
        .enumerate()
        .map(|(i, f)| parse_space(f, field, &format!("factors[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let codomain = parse_space(field_of(obj, "codomain", "codomain")?, field, "codomain")?;
    let coeffs_v = field_of(obj, "coefficients", "coefficients")?
        .as_array()
        .ok_or_else(|| schema("coefficients", "expected an array"))?;
    let expected = codomain.dim * factors.iter().map(|s| s.dim).product::<usize>();
    if coeffs_v.len() != expected {
        return Err(schema(
            "coefficients",
            format!("expected {expected} entries for shape {}x{:?}, found {}", codomain.dim, factors.iter().map(|s| s.dim).collect::<Vec<_>>(), coeffs_v.len()),
        ));
    }
    let coeffs = coeffs_v
        .iter()
        .enumerate()
        .map(|(i, c)| parse_coefficient(c, field, &format!("coefficients[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    MultilinearMap::new(codomain, factors, coeffs).map_err(|e| schema("(map)", e.to_string()))
}

fn space_json(s: &SpaceSpec) -> Value {
    json!({ "dim": s.dim, "p": s.p })
}

pub fn map_to_value(map: &MultilinearMap) -> Value {
    let coefficients: Vec<Value> = map
        .coeffs()
        .iter()
        .map(|z| match map.field() {
            Field::Real => json!(z.re),
            Field::Complex => json!([z.re, z.im]),
        })
        .collect();
    json!({
        "field": map.field(),
        "k": map.k(),
        "factors": map.factors().iter().map(space_json).collect::<Vec<_>>(),
        "codomain": space_json(map.codomain()),
        "coefficients": coefficients,
    })
}

pub fn map_to_json(map: &MultilinearMap) -> String {
    serde_json::to_string_pretty(&map_to_value(map)).expect("maps serialize")
}

pub fn load_map(path: impl AsRef<Path>) -> Result<MultilinearMap, MapFileError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| MapFileError::Io { path: path.display().to_string(), source })?;
    parse_map(&text)
}

pub fn save_map(map: &MultilinearMap, path: impl AsRef<Path>) -> Result<(), MapFileError> {
    let path = path.as_ref();
    std::fs::write(path, map_to_json(map) + "\n")
        .map_err(|source| MapFileError::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::{random_map, random_map_on};
    use proptest::prelude::*;

    #[test]
    fn complex_example_parses() {
        let text = r#"{"field": "complex", "k": 1, "factors": [{"dim": 2, "p": 2}],
            "codomain": {"dim": 2, "p": "inf"}, "coefficients": [[1, 0], [0, 1], [0, 0], [2, -1]]}"#;
        let m = parse_map(text).unwrap();
        assert_eq!(m.codomain().p, Exponent::Infinity);
        assert_eq!(m.coeffs()[3], C64::new(2.0, -1.0));
    }

    #[test]
    fn count_mismatch_reports_expected_and_actual() {
        let text = r#"{"field": "real", "k": 1, "factors": [{"dim": 2, "p": 2}],
            "codomain": {"dim": 2, "p": 2}, "coefficients": [1, 2, 3]}"#;
        let err = parse_map(text).unwrap_err().to_string();
        assert!(err.starts_with("coefficients:"), "{err}");
        assert!(err.contains("expected 4") && err.contains("found 3"), "{err}");
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad_p = r#"{"field": "real", "k": 1, "factors": [{"dim": 2, "p": 0.5}],
            "codomain": {"dim": 2, "p": 2}, "coefficients": [1, 2, 3, 4]}"#;
        assert!(parse_map(bad_p).unwrap_err().to_string().starts_with("factors[0].p:"));
        let bad_field = r#"{"field": "quaternion"}"#;
        assert!(parse_map(bad_field).unwrap_err().to_string().starts_with("field:"));
        let bad_entry = r#"{"field": "real", "k": 1, "factors": [{"dim": 1, "p": 2}],
            "codomain": {"dim": 1, "p": 2}, "coefficients": [[1, 2]]}"#;
        assert!(parse_map(bad_entry).unwrap_err().to_string().starts_with("coefficients[0]:"));
        assert!(matches!(parse_map("{"), Err(MapFileError::Syntax { .. })));
        let wrong_k = r#"{"field": "real", "k": 2, "factors": [{"dim": 1, "p": 2}]}"#;
        assert!(parse_map(wrong_k).unwrap_err().to_string().contains("expected 2 entries"));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let m = random_map(2, &[3, 2], Field::Complex, 9).unwrap();
        save_map(&m, &path).unwrap();
        assert_eq!(load_map(&path).unwrap(), m);
        assert!(matches!(load_map(dir.path().join("missing.json")), Err(MapFileError::Io { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn round_trip_is_bit_exact(seed in any::<u64>(), complex in any::<bool>(), p in prop_oneof![Just(1.0), Just(1.5), Just(2.0), Just(3.0), Just(f64::INFINITY)]) {
            let field = if complex { Field::Complex } else { Field::Real };
            let sp = |n| SpaceSpec::new(n, Exponent::new(p).unwrap(), field).unwrap();
            let m = random_map_on(sp(2), vec![sp(3), sp(2)], seed).unwrap();
            let back = parse_map(&map_to_json(&m)).unwrap();
            prop_assert_eq!(back.coeffs().len(), m.coeffs().len());
            for (a, b) in back.coeffs().iter().zip(m.coeffs()) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
            prop_assert_eq!(back, m);
        }
    }
}
