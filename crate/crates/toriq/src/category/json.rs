//! Reading and writing representations as JSON.
//!
//! The document shape is
//!
//! ```json
//! {
//!   "index_base": 0,
//!   "spaces": { "[]": 1, "[0]": 2 },
//!   "u": { "[]->[0]": [[0], [1]] },
//!   "v": { "[0]->[]": [[2, 3]] },
//!   "loops": { "[2]": [[[1]]] }
//! }
//! ```
//!
//! Cone labels are the bracketed ray lists used everywhere else; map keys
//! name the arrow they sit on, so u goes from the smaller face to the
//! larger and v the other way around. Matrix shapes are dictated by the
//! `spaces` entries of the two endpoint faces, which therefore must both
//! be present. Missing `u`, `v`, or `loops` sections mean "none".

use std::collections::BTreeMap;

use serde_json::{Map, Value};

use super::Representation;
use crate::cone::{Cone, RayId};
use crate::json::{
    as_array, as_object, as_usize, field, invalid, matq_from_value, matq_to_value, ParseError,
};
use crate::linalg::MatQ;

pub fn rep_from_value(v: &Value) -> Result<Representation, ParseError> {
    let obj = as_object(v, "representation")?;
    if let Some(base) = obj.get("index_base") {
        if base.as_u64() != Some(0) {
            return Err(invalid("only index_base 0 is supported"));
        }
    }

    let mut spaces = BTreeMap::new();
    for (key, val) in as_object(field(obj, "spaces", "representation")?, "spaces")? {
        let cone = parse_cone_label(key)?;
        let d = as_usize(val, &format!("spaces[{key}]"))?;
        if spaces.insert(cone, d).is_some() {
            return Err(invalid(format!("duplicate space entry for {key}")));
        }
    }

    let mut umaps = BTreeMap::new();
    if let Some(section) = obj.get("u") {
        for (key, val) in as_object(section, "u")? {
            let (from, to) = parse_arrow_key(key)?;
            let p = single_added_ray(&from, &to).ok_or_else(|| {
                invalid(format!(
                    "u key {key:?} must go from a face to that face plus one ray"
                ))
            })?;
            let m = arrow_matrix(&spaces, &to, &from, val, key)?;
            if umaps.insert((from, p), m).is_some() {
                return Err(invalid(format!("duplicate u entry for {key}")));
            }
        }
    }

    let mut vmaps = BTreeMap::new();
    if let Some(section) = obj.get("v") {
        for (key, val) in as_object(section, "v")? {
            let (from, to) = parse_arrow_key(key)?;
            let p = single_added_ray(&to, &from).ok_or_else(|| {
                invalid(format!(
                    "v key {key:?} must go from a face to that face minus one ray \
                     (v maps go from the larger face to the smaller)"
                ))
            })?;
            let m = arrow_matrix(&spaces, &to, &from, val, key)?;
            if vmaps.insert((to, p), m).is_some() {
                return Err(invalid(format!("duplicate v entry for {key}")));
            }
        }
    }

    let mut loops = BTreeMap::new();
    if let Some(section) = obj.get("loops") {
        for (key, val) in as_object(section, "loops")? {
            let cone = parse_cone_label(key)?;
            let d = *spaces
                .get(&cone)
                .ok_or_else(|| invalid(format!("loops at {key} but no space there")))?;
            let list = as_array(val, &format!("loops[{key}]"))?;
            let mats = list
                .iter()
                .enumerate()
                .map(|(i, m)| matq_from_value(m, d, d, &format!("loops[{key}][{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            if loops.insert(cone, mats).is_some() {
                return Err(invalid(format!("duplicate loops entry for {key}")));
            }
        }
    }

    Ok(Representation::new(spaces, umaps, vmaps, loops))
}

pub fn rep_to_value(rep: &Representation) -> Value {
    let mut obj = Map::new();
    obj.insert("index_base".into(), Value::from(0));

    let spaces: Map<String, Value> = rep
        .spaces()
        .iter()
        .map(|(cone, &d)| (cone.to_string(), Value::from(d)))
        .collect();
    obj.insert("spaces".into(), Value::Object(spaces));

    let u: Map<String, Value> = rep
        .umaps()
        .iter()
        .map(|((cone, p), m)| {
            (format!("{}->{}", cone, cone.with_ray(*p)), matq_to_value(m))
        })
        .collect();
    obj.insert("u".into(), Value::Object(u));

    let v: Map<String, Value> = rep
        .vmaps()
        .iter()
        .map(|((cone, p), m)| {
            (format!("{}->{}", cone.with_ray(*p), cone), matq_to_value(m))
        })
        .collect();
    obj.insert("v".into(), Value::Object(v));

    let loops: Map<String, Value> = rep
        .loops()
        .iter()
        .map(|(cone, mats)| {
            (
                cone.to_string(),
                Value::Array(mats.iter().map(matq_to_value).collect()),
            )
        })
        .collect();
    obj.insert("loops".into(), Value::Object(loops));

    Value::Object(obj)
}

fn parse_cone_label(key: &str) -> Result<Cone, ParseError> {
    key.parse::<Cone>()
        .map_err(|e| invalid(format!("bad face label {key:?}: {e}")))
}

fn parse_arrow_key(key: &str) -> Result<(Cone, Cone), ParseError> {
    let (from, to) = key
        .split_once("->")
        .ok_or_else(|| invalid(format!("map key {key:?} is not of the form \"A->B\"")))?;
    Ok((parse_cone_label(from)?, parse_cone_label(to)?))
}

/// The ray that `bigger` adds to `smaller`, when it adds exactly one.
fn single_added_ray(smaller: &Cone, bigger: &Cone) -> Option<RayId> {
    if !smaller.is_subset_of(bigger) {
        return None;
    }
    let diff = bigger.minus(smaller);
    match diff.rays() {
        [p] => Some(*p),
        _ => None,
    }
}

/// Parses a map value whose shape is fixed by the endpoint spaces.
fn arrow_matrix(
    spaces: &BTreeMap<Cone, usize>,
    to: &Cone,
    from: &Cone,
    val: &Value,
    key: &str,
) -> Result<MatQ, ParseError> {
    let rows = *spaces
        .get(to)
        .ok_or_else(|| invalid(format!("map {key} targets {to}, which has no space")))?;
    let cols = *spaces
        .get(from)
        .ok_or_else(|| invalid(format!("map {key} leaves {from}, which has no space")))?;
    matq_from_value(val, rows, cols, key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin_fan;
    use crate::category::constant_object;
    use crate::json::parse_text;
    use crate::linalg::rat;

    fn parsed(text: &str) -> Result<Representation, ParseError> {
        rep_from_value(&parse_text(text).unwrap())
    }

    #[test]
    fn representations_round_trip() {
        let fan = builtin_fan("fan1").unwrap();
        for d in 0..3 {
            let rep = constant_object(&fan, d);
            let value = rep_to_value(&rep);
            assert_eq!(rep_from_value(&value).unwrap(), rep);
        }
    }

    #[test]
    fn keys_carry_the_arrow_direction() {
        let rep = parsed(
            r#"{
                "index_base": 0,
                "spaces": {"[]": 1, "[0]": 1, "[2]": 1},
                "u": {"[]->[0]": [[2]]},
                "v": {"[0]->[]": [["-5/6"]]},
                "loops": {"[2]": [[[3]]]}
            }"#,
        )
        .unwrap();
        let empty = Cone::empty();
        assert_eq!(rep.u(&empty, 0).unwrap()[(0, 0)], rat(2, 1));
        assert_eq!(rep.v(&empty, 0).unwrap()[(0, 0)], rat(-5, 6));
        let loop_cone = Cone::new(vec![2]);
        assert_eq!(rep.loop_map(&loop_cone, 1).unwrap()[(0, 0)], rat(3, 1));
        assert_eq!(rep.space(&loop_cone), Some(1));
    }

    #[test]
    fn zero_dimensional_spaces_serialize_as_empty_matrices() {
        let rep = parsed(
            r#"{
                "spaces": {"[]": 0, "[0]": 2},
                "u": {"[]->[0]": [[], []]},
                "v": {"[0]->[]": []}
            }"#,
        )
        .unwrap();
        assert_eq!(rep.u(&Cone::empty(), 0).unwrap().rows(), 2);
        assert_eq!(rep.v(&Cone::empty(), 0).unwrap().rows(), 0);
        let value = rep_to_value(&rep);
        assert_eq!(rep_from_value(&value).unwrap(), rep);
    }

    #[test]
    fn rejects_malformed_documents() {
        let cases = [
            // u key skips two levels
            r#"{"spaces": {"[]": 1, "[0,1]": 1}, "u": {"[]->[0,1]": [[1]]}}"#,
            // v written in the u direction
            r#"{"spaces": {"[]": 1, "[0]": 1}, "v": {"[]->[0]": [[1]]}}"#,
            // map endpoint without a space
            r#"{"spaces": {"[]": 1}, "u": {"[]->[0]": [[1]]}}"#,
            // matrix height disagrees with the target space
            r#"{"spaces": {"[]": 1, "[0]": 2}, "u": {"[]->[0]": [[1]]}}"#,
            // floating point entry
            r#"{"spaces": {"[]": 1, "[0]": 1}, "u": {"[]->[0]": [[1.5]]}}"#,
            // loops at a face with no space
            r#"{"spaces": {"[]": 1}, "loops": {"[0]": [[[1]]]}}"#,
            // unsupported index base
            r#"{"index_base": 1, "spaces": {}}"#,
            // no key arrow
            r#"{"spaces": {"[]": 1}, "u": {"[]": [[1]]}}"#,
            // key that is not a face label
            r#"{"spaces": {"nope": 1}}"#,
            // spaces missing entirely
            r#"{"u": {}}"#,
        ];
        for text in cases {
            assert!(parsed(text).is_err(), "accepted: {text}");
        }
    }
}
