//! Failure reporting for the membership checks.
//!
//! Every check returns a [`ConditionReport`]; a representation belongs to
//! the category exactly when the aggregate report from `check_all` carries
//! no failures. Failures name their condition, the place it broke, and the
//! offending matrices, so a report is actionable without re-running
//! anything.

use std::fmt;

use serde_json::{Map, Value};

use super::relations::Generator;
use crate::cone::{Cone, RayId};
use crate::json;
use crate::linalg::MatQ;

/// Which membership condition a failure belongs to. `Shape` marks input
/// that does not fit the quiver at all; the numbered conditions follow the
/// defining list for the category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    Shape,
    I,
    II,
    III,
    IV,
}

impl Condition {
    pub fn tag(self) -> &'static str {
        match self {
            Condition::Shape => "shape",
            Condition::I => "i",
            Condition::II => "ii",
            Condition::III => "iii",
            Condition::IV => "iv",
        }
    }
}

/// The three commuting-square identities checked per quadruple, in the
/// order they are always listed: compositions of two u's, of two v's, and
/// the mixed one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareIdentity {
    UU,
    VV,
    UV,
}

impl SquareIdentity {
    pub fn tag(self) -> &'static str {
        match self {
            SquareIdentity::UU => "uu",
            SquareIdentity::VV => "vv",
            SquareIdentity::UV => "uv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// The representation does not match the quiver (missing or extra
    /// spaces, maps, or loop matrices, or wrongly sized matrices).
    Shape { detail: String },
    /// Condition (i): the `index`-th loop at `cone` is singular. Loop
    /// indices are 1-based in all output.
    LoopSingular { cone: Cone, index: usize },
    /// Condition (ii): the monodromy v·u + Id across the arrow pair
    /// (cone, ray) is singular.
    MonodromySingular { cone: Cone, ray: RayId, monodromy: MatQ },
    /// Condition (iii): one of the three square identities fails on the
    /// quadruple (cone, cone∪p, cone∪q, cone∪{p,q}).
    SquareBroken {
        cone: Cone,
        p: RayId,
        q: RayId,
        identity: SquareIdentity,
        lhs: MatQ,
        rhs: MatQ,
    },
    /// Condition (iv) could not even be evaluated: a right-hand-side
    /// generator of the relation at (cone, ray, chart) is singular, which
    /// is already a condition (i)/(ii) defect at that generator.
    SingularGenerator { cone: Cone, ray: RayId, chart: Cone, generator: Generator },
    /// Condition (iv): the monodromy across (cone, ray) differs from the
    /// product prescribed by the chart.
    RelationBroken { cone: Cone, ray: RayId, chart: Cone, lhs: MatQ, rhs: MatQ },
}

impl Failure {
    pub fn condition(&self) -> Condition {
        match self {
            Failure::Shape { .. } => Condition::Shape,
            Failure::LoopSingular { .. } => Condition::I,
            Failure::MonodromySingular { .. } => Condition::II,
            Failure::SquareBroken { .. } => Condition::III,
            Failure::SingularGenerator { .. } | Failure::RelationBroken { .. } => Condition::IV,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("condition".into(), Value::from(self.condition().tag()));
        match self {
            Failure::Shape { detail } => {
                m.insert("detail".into(), Value::from(detail.as_str()));
            }
            Failure::LoopSingular { cone, index } => {
                m.insert("cone".into(), json::cone_to_value(cone));
                m.insert("loop".into(), Value::from(*index));
            }
            Failure::MonodromySingular { cone, ray, monodromy } => {
                m.insert("cone".into(), json::cone_to_value(cone));
                m.insert("ray".into(), Value::from(*ray));
                m.insert("monodromy".into(), json::matq_to_value(monodromy));
            }
            Failure::SquareBroken { cone, p, q, identity, lhs, rhs } => {
                m.insert("cone".into(), json::cone_to_value(cone));
                m.insert("p".into(), Value::from(*p));
                m.insert("q".into(), Value::from(*q));
                m.insert("identity".into(), Value::from(identity.tag()));
                m.insert("lhs".into(), json::matq_to_value(lhs));
                m.insert("rhs".into(), json::matq_to_value(rhs));
            }
            Failure::SingularGenerator { cone, ray, chart, generator } => {
                m.insert("cone".into(), json::cone_to_value(cone));
                m.insert("ray".into(), Value::from(*ray));
                m.insert("chart".into(), json::cone_to_value(chart));
                m.insert("generator".into(), generator.to_value());
            }
            Failure::RelationBroken { cone, ray, chart, lhs, rhs } => {
                m.insert("cone".into(), json::cone_to_value(cone));
                m.insert("ray".into(), Value::from(*ray));
                m.insert("chart".into(), json::cone_to_value(chart));
                m.insert("lhs".into(), json::matq_to_value(lhs));
                m.insert("rhs".into(), json::matq_to_value(rhs));
            }
        }
        Value::Object(m)
    }
}

fn brief(m: &MatQ) -> String {
    serde_json::to_string(&json::matq_to_value(m)).expect("matrix serialization cannot fail")
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Shape { detail } => write!(f, "(shape) {detail}"),
            Failure::LoopSingular { cone, index } => {
                write!(f, "(i) at {cone}, loop {index}")
            }
            Failure::MonodromySingular { cone, ray, monodromy } => {
                write!(f, "(ii) at ({cone}, {ray}): monodromy {} is singular", brief(monodromy))
            }
            Failure::SquareBroken { cone, p, q, identity, lhs, rhs } => {
                write!(
                    f,
                    "(iii) at ({cone}, p={p}, q={q}): identity {} broken: {} != {}",
                    identity.tag(),
                    brief(lhs),
                    brief(rhs)
                )
            }
            Failure::SingularGenerator { cone, ray, chart, generator } => {
                write!(
                    f,
                    "(iv) at ({cone}, {ray}, K={chart}): generator {} is singular",
                    generator.label(cone)
                )
            }
            Failure::RelationBroken { cone, ray, chart, lhs, rhs } => {
                write!(
                    f,
                    "(iv) at ({cone}, {ray}, K={chart}): {} != {}",
                    brief(lhs),
                    brief(rhs)
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConditionReport {
    failures: Vec<Failure>,
}

impl ConditionReport {
    pub fn pass() -> Self {
        ConditionReport { failures: Vec::new() }
    }

    pub fn from_failures(failures: Vec<Failure>) -> Self {
        ConditionReport { failures }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failures(&self) -> &[Failure] {
        &self.failures
    }

    pub fn into_failures(self) -> Vec<Failure> {
        self.failures
    }

    /// True iff some failure belongs to the given condition.
    pub fn failed_condition(&self, c: Condition) -> bool {
        self.failures.iter().any(|f| f.condition() == c)
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("passed".into(), Value::from(self.passed()));
        m.insert(
            "failures".into(),
            Value::Array(self.failures.iter().map(Failure::to_value).collect()),
        );
        Value::Object(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn face(rays: &[RayId]) -> Cone {
        Cone::new(rays.to_vec())
    }

    fn scalar(num: i64, den: i64) -> MatQ {
        MatQ::from_entries(1, 1, vec![rat(num, den)])
    }

    #[test]
    fn failure_lines_name_condition_and_location() {
        let cases: Vec<(Failure, &str)> = vec![
            (
                Failure::Shape { detail: "missing space for face [0]".into() },
                "(shape) missing space for face [0]",
            ),
            (
                Failure::LoopSingular { cone: face(&[2]), index: 1 },
                "(i) at [2], loop 1",
            ),
            (
                Failure::MonodromySingular {
                    cone: Cone::empty(),
                    ray: 0,
                    monodromy: MatQ::zeros(1, 1),
                },
                "(ii) at ([], 0): monodromy [[0]] is singular",
            ),
            (
                Failure::SquareBroken {
                    cone: Cone::empty(),
                    p: 0,
                    q: 1,
                    identity: SquareIdentity::UU,
                    lhs: scalar(1, 1),
                    rhs: scalar(2, 1),
                },
                "(iii) at ([], p=0, q=1): identity uu broken: [[1]] != [[2]]",
            ),
            (
                Failure::SingularGenerator {
                    cone: Cone::empty(),
                    ray: 2,
                    chart: face(&[0, 1]),
                    generator: Generator::Monodromy(0),
                },
                "(iv) at ([], 2, K=[0,1]): generator M[|0] is singular",
            ),
            (
                Failure::RelationBroken {
                    cone: Cone::empty(),
                    ray: 2,
                    chart: face(&[0, 1]),
                    lhs: scalar(6, 1),
                    rhs: scalar(1, 6),
                },
                "(iv) at ([], 2, K=[0,1]): [[6]] != [[\"1/6\"]]",
            ),
        ];
        let expected_conditions = [
            Condition::Shape,
            Condition::I,
            Condition::II,
            Condition::III,
            Condition::IV,
            Condition::IV,
        ];
        for ((failure, line), condition) in cases.iter().zip(expected_conditions) {
            assert_eq!(failure.to_string(), *line);
            assert_eq!(failure.condition(), condition);
        }
    }

    #[test]
    fn reports_aggregate_and_serialize() {
        let report = ConditionReport::pass();
        assert!(report.passed());
        assert_eq!(report.to_value().to_string(), r#"{"passed":true,"failures":[]}"#);

        let report = ConditionReport::from_failures(vec![Failure::LoopSingular {
            cone: face(&[2]),
            index: 1,
        }]);
        assert!(!report.passed());
        assert!(report.failed_condition(Condition::I));
        assert!(!report.failed_condition(Condition::II));
        assert_eq!(
            report.to_value().to_string(),
            r#"{"passed":false,"failures":[{"condition":"i","cone":[2],"loop":1}]}"#
        );
    }

    #[test]
    fn structured_failures_carry_their_witnesses() {
        let failure = Failure::RelationBroken {
            cone: Cone::empty(),
            ray: 2,
            chart: face(&[0, 1]),
            lhs: scalar(6, 1),
            rhs: scalar(1, 6),
        };
        assert_eq!(
            failure.to_value().to_string(),
            r#"{"condition":"iv","cone":[],"ray":2,"chart":[0,1],"lhs":[[6]],"rhs":[["1/6"]]}"#
        );
    }
}
