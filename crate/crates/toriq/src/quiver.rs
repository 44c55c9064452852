//! The quiver attached to a fan: one vertex per face, one loop per missing
//! chart direction, and an opposite pair of arrows across every
//! codimension-one incidence.

use serde_json::{Map, Value};

use crate::cone::{Cone, RayId};
use crate::fan::Fan;
use crate::json::{self, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverVertex {
    pub cone: Cone,
    pub loops: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrowKind {
    U,
    V,
}

impl ArrowKind {
    fn label(self) -> &'static str {
        match self {
            ArrowKind::U => "u",
            ArrowKind::V => "v",
        }
    }
}

/// One arrow of the quiver. Arrows are identified by the smaller face and
/// the added ray: the u-arrow runs from I to I∪{p}, the v-arrow back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub from: Cone,
    pub to: Cone,
    pub ray: RayId,
    pub kind: ArrowKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<QuiverVertex>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Vertices in (cardinality, lexicographic) order; arrow pairs in the
    /// same order of their base face, u before v.
    pub fn from_fan(fan: &Fan) -> Quiver {
        let vertices = fan
            .cones()
            .map(|c| QuiverVertex { cone: c.clone(), loops: fan.loop_count(c) })
            .collect();
        let mut arrows = Vec::new();
        for (cone, ray) in fan.codim1_pairs() {
            let bigger = cone.with_ray(ray);
            arrows.push(Arrow {
                from: cone.clone(),
                to: bigger.clone(),
                ray,
                kind: ArrowKind::U,
            });
            arrows.push(Arrow { from: bigger, to: cone, ray, kind: ArrowKind::V });
        }
        Quiver { vertices, arrows }
    }

    pub fn vertices(&self) -> &[QuiverVertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_pair_count(&self) -> usize {
        self.arrows.len() / 2
    }

    pub fn loops_at(&self, cone: &Cone) -> Option<usize> {
        self.vertices.iter().find(|v| &v.cone == cone).map(|v| v.loops)
    }

    /// DOT digraph: all vertices first, then loop self-edges labeled M1…,
    /// then the arrow pairs labeled u and v. Byte-deterministic.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quiver {\n");
        for v in &self.vertices {
            out.push_str(&format!("  \"{}\";\n", v.cone));
        }
        for v in &self.vertices {
            for i in 1..=v.loops {
                out.push_str(&format!("  \"{0}\" -> \"{0}\" [label=\"M{1}\"];\n", v.cone, i));
            }
        }
        for a in &self.arrows {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                a.from,
                a.to,
                a.kind.label()
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("index_base".into(), Value::from(0));
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|v| {
                let mut entry = Map::new();
                entry.insert("cone".into(), cone_value(&v.cone));
                entry.insert("loops".into(), Value::from(v.loops));
                Value::Object(entry)
            })
            .collect();
        m.insert("vertices".into(), Value::Array(vertices));
        let arrows: Vec<Value> = self
            .arrows
            .iter()
            .map(|a| {
                let mut entry = Map::new();
                entry.insert("from".into(), cone_value(&a.from));
                entry.insert("to".into(), cone_value(&a.to));
                entry.insert("ray".into(), Value::from(a.ray));
                entry.insert("kind".into(), Value::from(a.kind.label()));
                Value::Object(entry)
            })
            .collect();
        m.insert("arrows".into(), Value::Array(arrows));
        Value::Object(m)
    }

    pub fn from_value(v: &Value) -> Result<Quiver, ParseError> {
        let obj = json::as_object(v, "quiver")?;
        if let Some(base) = obj.get("index_base") {
            if base.as_u64() != Some(0) {
                return Err(json::invalid("quiver: index_base must be 0"));
            }
        }
        let vertices = json::as_array(json::field(obj, "vertices", "quiver")?, "quiver vertices")?
            .iter()
            .map(|entry| {
                let entry = json::as_object(entry, "quiver vertex")?;
                let cone = cone_from(json::field(entry, "cone", "quiver vertex")?)?;
                let loops =
                    json::as_usize(json::field(entry, "loops", "quiver vertex")?, "vertex loops")?;
                Ok(QuiverVertex { cone, loops })
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        let arrows = json::as_array(json::field(obj, "arrows", "quiver")?, "quiver arrows")?
            .iter()
            .map(|entry| {
                let entry = json::as_object(entry, "quiver arrow")?;
                let from = cone_from(json::field(entry, "from", "quiver arrow")?)?;
                let to = cone_from(json::field(entry, "to", "quiver arrow")?)?;
                let ray = json::as_usize(json::field(entry, "ray", "quiver arrow")?, "arrow ray")?;
                let kind = match json::field(entry, "kind", "quiver arrow")?.as_str() {
                    Some("u") => ArrowKind::U,
                    Some("v") => ArrowKind::V,
                    _ => return Err(json::invalid("quiver arrow: kind must be \"u\" or \"v\"")),
                };
                Ok(Arrow { from, to, ray, kind })
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        Ok(Quiver { vertices, arrows })
    }
}

fn cone_value(c: &Cone) -> Value {
    Value::Array(c.rays().iter().map(|&r| Value::from(r)).collect())
}

fn cone_from(v: &Value) -> Result<Cone, ParseError> {
    crate::fan::cone_from_value(v, "cone")
}
