//! Conversions between exact scalars/matrices and `serde_json::Value`.
//!
//! Rationals serialize as bare integers when the denominator is 1 (and the
//! numerator fits in an i64), otherwise as strings `"p/q"`. Parsing accepts
//! integer JSON numbers and both string forms; floats are rejected since
//! they cannot round-trip exactly.

use num_traits::{One, ToPrimitive};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::linalg::{rat_from_str, rat_to_string, Int, MatQ, Rat};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("{0}")]
    Invalid(String),
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::Syntax(e.to_string())
    }
}

pub fn invalid(msg: impl Into<String>) -> ParseError {
    ParseError::Invalid(msg.into())
}

pub fn parse_text(text: &str) -> Result<Value, ParseError> {
    Ok(serde_json::from_str(text)?)
}

pub fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, ParseError> {
    v.as_object().ok_or_else(|| invalid(format!("{what}: expected a JSON object")))
}

pub fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a [Value], ParseError> {
    v.as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| invalid(format!("{what}: expected a JSON array")))
}

pub fn field<'a>(m: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value, ParseError> {
    m.get(key).ok_or_else(|| invalid(format!("{what}: missing field \"{key}\"")))
}

pub fn as_usize(v: &Value, what: &str) -> Result<usize, ParseError> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| invalid(format!("{what}: expected a nonnegative integer")))
}

pub fn as_int(v: &Value, what: &str) -> Result<Int, ParseError> {
    v.as_i64()
        .map(Int::from)
        .ok_or_else(|| invalid(format!("{what}: expected an integer")))
}

pub fn int_vec(v: &Value, what: &str) -> Result<Vec<Int>, ParseError> {
    as_array(v, what)?.iter().map(|e| as_int(e, what)).collect()
}

pub fn rat_from_value(v: &Value, what: &str) -> Result<Rat, ParseError> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| invalid(format!("{what}: non-integer number {n}; write rationals as \"p/q\" strings")))?;
            Ok(Rat::from_integer(Int::from(i)))
        }
        Value::String(s) => {
            rat_from_str(s).map_err(|e| invalid(format!("{what}: {e}")))
        }
        _ => Err(invalid(format!("{what}: expected a number or a \"p/q\" string"))),
    }
}

pub fn rat_to_value(r: &Rat) -> Value {
    if r.denom().is_one() {
        if let Some(i) = r.numer().to_i64() {
            return Value::from(i);
        }
    }
    Value::String(rat_to_string(r))
}

pub fn int_to_value(i: &Int) -> Value {
    match i.to_i64() {
        Some(n) => Value::from(n),
        None => Value::String(i.to_string()),
    }
}

pub fn cone_to_value(c: &crate::cone::Cone) -> Value {
    Value::Array(c.rays().iter().map(|&r| Value::from(r)).collect())
}

/// Parses a row-major rational matrix. The column count of an empty matrix
/// cannot be read off `[]`, so the caller supplies the expected shape and we
/// verify against it.
pub fn matq_from_value(v: &Value, rows: usize, cols: usize, what: &str) -> Result<MatQ, ParseError> {
    let outer = as_array(v, what)?;
    if outer.len() != rows {
        return Err(invalid(format!("{what}: expected {rows} rows, found {}", outer.len())));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in outer.iter().enumerate() {
        let row = as_array(row, what)?;
        if row.len() != cols {
            return Err(invalid(format!(
                "{what}: row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for e in row {
            entries.push(rat_from_value(e, what)?);
        }
    }
    Ok(MatQ::from_entries(rows, cols, entries))
}

pub fn matq_to_value(m: &MatQ) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array((0..m.cols()).map(|j| rat_to_value(&m[(i, j)])).collect()))
        .collect();
    Value::Array(rows)
}

/// Serializes with one key per line and stable key order, then a trailing
/// newline; used by every command that prints JSON so output bytes are
/// reproducible.
pub fn to_pretty_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialization of plain values cannot fail");
    s.push('\n');
    s
}
