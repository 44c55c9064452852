//! The monodromy relations a fan imposes, in symbolic form, and their
//! evaluation on a representation.
//!
//! For a face J, a ray p with J∪{p} a face, and a maximal-cardinality chart
//! K ⊇ J avoiding p, the monodromy across (J, p) is forced to equal a
//! product of the other chart monodromies and the loops at J, with the
//! coordinates of ray p in the chart basis as exponents. `relations`
//! extracts every such word; `check_iv` verifies them all.

use std::fmt;

use num_traits::{One, Zero};
use serde_json::{Map, Value};

use super::report::{ConditionReport, Failure};
use super::{monodromy, Representation};
use crate::cone::{Cone, RayId};
use crate::fan::Fan;
use crate::linalg::{Int, LinalgError, MatQ};

/// A factor on the right-hand side of a relation: either the monodromy
/// across (J, q) for a chart ray q, or the i-th loop at J. Loop indices are
/// 1-based, matching all printed output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    Monodromy(RayId),
    Loop(usize),
}

impl Generator {
    /// Rendering used in relation lines and failure messages, with the
    /// vertex spelled inline: `M[0,1|2]` or `L[0,1|1]`; the empty face
    /// renders as `M[|2]`.
    pub fn label(&self, j_cone: &Cone) -> String {
        let j = inline(j_cone);
        match self {
            Generator::Monodromy(q) => format!("M[{j}|{q}]"),
            Generator::Loop(i) => format!("L[{j}|{i}]"),
        }
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        match self {
            Generator::Monodromy(q) => {
                m.insert("kind".into(), Value::from("monodromy"));
                m.insert("ray".into(), Value::from(*q));
            }
            Generator::Loop(i) => {
                m.insert("kind".into(), Value::from("loop"));
                m.insert("loop".into(), Value::from(*i));
            }
        }
        Value::Object(m)
    }
}

fn inline(c: &Cone) -> String {
    c.rays().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// One relation `M[J|p] = Π generator^exponent`, all factors endomorphisms
/// of the space at J. Exponents are nonzero; factors keep the chart order
/// (monodromies of the chart rays outside J first, then loops).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationWord {
    pub j_cone: Cone,
    pub p: RayId,
    pub chart: Cone,
    pub rhs: Vec<(Generator, Int)>,
}

impl fmt::Display for RelationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M[{}|{}] = ", inline(&self.j_cone), self.p)?;
        if self.rhs.is_empty() {
            return write!(f, "Id");
        }
        for (i, (gen, exp)) in self.rhs.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{}", gen.label(&self.j_cone))?;
            if !exp.is_one() {
                write!(f, "^{exp}")?;
            }
        }
        Ok(())
    }
}

/// Every relation the fan imposes, one per (J, p, chart) triple, in
/// canonical order: J by (cardinality, lexicographic), then p, then chart.
pub fn relations(fan: &Fan) -> Vec<RelationWord> {
    let mut words = Vec::new();
    for (j_cone, p) in fan.codim1_pairs() {
        for view in fan.chart_views(&j_cone, p) {
            let mut rhs = Vec::new();
            for pos in view.j..view.l {
                let exp = view.coords[pos].clone();
                if !exp.is_zero() {
                    rhs.push((Generator::Monodromy(view.ordered_rays[pos]), exp));
                }
            }
            for pos in view.l..fan.dim() {
                let exp = view.coords[pos].clone();
                if !exp.is_zero() {
                    rhs.push((Generator::Loop(pos - view.l + 1), exp));
                }
            }
            words.push(RelationWord { j_cone: j_cone.clone(), p, chart: view.chart, rhs });
        }
    }
    words
}

/// Evaluation failed because a factor that must be inverted is singular.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("generator {} is singular", generator.label(cone))]
pub struct SingularFactor {
    pub cone: Cone,
    pub generator: Generator,
}

/// The matrix a generator stands for on a given representation. Panics if
/// the representation lacks the generator, which the shape check rules out.
pub fn generator_matrix(rep: &Representation, j_cone: &Cone, generator: &Generator) -> MatQ {
    match generator {
        Generator::Monodromy(q) => monodromy(rep, j_cone, *q),
        Generator::Loop(i) => rep
            .loop_map(j_cone, *i)
            .unwrap_or_else(|| panic!("representation has no loop {i} at {j_cone}"))
            .clone(),
    }
}

/// Multiplies the word out, leftmost factor outermost; negative exponents
/// invert exactly. An empty right-hand side gives the identity on the space
/// at J.
pub fn evaluate_word(rep: &Representation, word: &RelationWord) -> Result<MatQ, SingularFactor> {
    let d = rep.dim(&word.j_cone);
    let mut acc = MatQ::identity(d);
    for (gen, exp) in &word.rhs {
        let base = generator_matrix(rep, &word.j_cone, gen);
        let factor = base.pow(exp).map_err(|e| {
            debug_assert_eq!(e, LinalgError::Singular);
            SingularFactor { cone: word.j_cone.clone(), generator: gen.clone() }
        })?;
        acc = &acc * &factor;
    }
    Ok(acc)
}

/// Condition (iv): every relation word must evaluate to the monodromy on
/// its left-hand side. A singular right-hand-side generator is reported as
/// its own failure (it already violates condition (i) or (ii)) instead of
/// producing a spurious mismatch.
pub fn check_iv(fan: &Fan, rep: &Representation) -> ConditionReport {
    let mut failures = Vec::new();
    'words: for word in relations(fan) {
        for (gen, _) in &word.rhs {
            let m = generator_matrix(rep, &word.j_cone, gen);
            if m.inverse().is_err() {
                failures.push(Failure::SingularGenerator {
                    cone: word.j_cone.clone(),
                    ray: word.p,
                    chart: word.chart.clone(),
                    generator: gen.clone(),
                });
                continue 'words;
            }
        }
        let lhs = monodromy(rep, &word.j_cone, word.p);
        let rhs = evaluate_word(rep, &word).expect("generators checked invertible above");
        if lhs != rhs {
            failures.push(Failure::RelationBroken {
                cone: word.j_cone.clone(),
                ray: word.p,
                chart: word.chart.clone(),
                lhs,
                rhs,
            });
        }
    }
    ConditionReport::from_failures(failures)
}
