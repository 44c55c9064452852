//! Regular fans: validation, the face family, and per-chart basis data.
//!
//! A fan is given by its ambient rank, the primitive generators of its rays,
//! and the index sets of its maximal cones; the full face family is the
//! downward closure of the latter. Loading verifies primitivity, smoothness
//! of every cone, and the fan axiom (two cones meet in the cone on their
//! shared rays), all in exact arithmetic.

mod axiom;

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::cone::{Cone, RayId};
use crate::json::{self, ParseError};
use crate::linalg::{Int, MatQ, MatZ, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("ray {index} has {found} coordinates, expected {expected}")]
    RayDimension { index: RayId, found: usize, expected: usize },
    #[error("ray {index} is not primitive (coordinate gcd {gcd})")]
    NonPrimitiveRay { index: RayId, gcd: Int },
    #[error("rays {first} and {second} are the same vector")]
    DuplicateRay { first: RayId, second: RayId },
    #[error("cone {cone} references ray {ray}, but only {count} rays are defined")]
    UnknownRayIndex { cone: Cone, ray: RayId, count: usize },
    #[error("cone {cone} is not smooth: ray lattice has invariant factors [{}]", join_ints(.diagonal))]
    NonSmoothCone { cone: Cone, diagonal: Vec<Int> },
    #[error("cones {a} and {b} intersect outside their common face {}", Cone::intersect(.a, .b))]
    FanAxiomViolation { a: Cone, b: Cone },
}

fn join_ints(v: &[Int]) -> String {
    v.iter().map(Int::to_string).collect::<Vec<_>>().join(", ")
}

/// A Z-basis of the ambient lattice whose leading columns are the rays of a
/// maximal cone, in increasing ray-index order.
#[derive(Debug, Clone)]
pub struct ChartBasis {
    cone: Cone,
    basis: MatZ,
    ray_positions: BTreeMap<RayId, usize>,
}

impl ChartBasis {
    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    /// The full basis as an n×n unimodular matrix; basis vectors are the
    /// columns.
    pub fn basis(&self) -> &MatZ {
        &self.basis
    }

    pub fn ray_position(&self, r: RayId) -> Option<usize> {
        self.ray_positions.get(&r).copied()
    }
}

/// The chart data entering one monodromy relation: for a face J, a ray p
/// outside J, and a maximal cone K ⊇ J avoiding p, the basis of the ambient
/// lattice reordered as (rays of J, rays of K∖J, completion vectors) together
/// with the coordinates of ray p in that basis.
#[derive(Debug, Clone)]
pub struct ChartView {
    pub j_cone: Cone,
    pub p: RayId,
    pub chart: Cone,
    /// Rays of J in increasing index order, then rays of K∖J likewise;
    /// `ordered_basis` starts with exactly these columns.
    pub ordered_rays: Vec<RayId>,
    pub ordered_basis: MatZ,
    /// |J|
    pub j: usize,
    /// |K|
    pub l: usize,
    /// Coordinates of ray p in `ordered_basis`; integral because the basis
    /// is unimodular.
    pub coords: Vec<Int>,
}

#[derive(Debug, Clone)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<Int>>,
    cones: BTreeSet<Cone>,
    maximal: Vec<Cone>,
    charts: BTreeMap<Cone, ChartBasis>,
    trusted: bool,
}

impl Fan {
    /// Validates and indexes a fan. `trust_fan` skips the interior-overlap
    /// half of the fan-axiom check (the ray-containment half always runs);
    /// see [`Fan::is_trusted`].
    pub fn load(
        dim: usize,
        rays: Vec<Vec<Int>>,
        max_cones: Vec<Cone>,
        trust_fan: bool,
    ) -> Result<Fan, FanError> {
        for (index, ray) in rays.iter().enumerate() {
            if ray.len() != dim {
                return Err(FanError::RayDimension { index, found: ray.len(), expected: dim });
            }
            let gcd = ray.iter().fold(Int::zero(), |acc, c| acc.gcd(c));
            if !gcd.is_one() {
                return Err(FanError::NonPrimitiveRay { index, gcd });
            }
        }
        for second in 1..rays.len() {
            if let Some(first) = (0..second).find(|&f| rays[f] == rays[second]) {
                return Err(FanError::DuplicateRay { first, second });
            }
        }
        for cone in &max_cones {
            if let Some(&ray) = cone.rays().iter().find(|&&r| r >= rays.len()) {
                return Err(FanError::UnknownRayIndex { cone: cone.clone(), ray, count: rays.len() });
            }
        }

        let mut cones: BTreeSet<Cone> = BTreeSet::new();
        cones.insert(Cone::empty());
        for cone in &max_cones {
            cones.extend(cone.subsets());
        }
        let maximal: Vec<Cone> = cones
            .iter()
            .filter(|c| !cones.iter().any(|other| *c != other && c.is_subset_of(other)))
            .cloned()
            .collect();

        // Smoothness of the maximal cones covers every face: a subfamily of
        // a partial basis is again a partial basis.
        for cone in &maximal {
            let diagonal = snf_diagonal(dim, &rays, cone);
            if !all_ones_of_len(&diagonal, cone.len()) {
                return Err(FanError::NonSmoothCone { cone: cone.clone(), diagonal });
            }
        }

        // Likewise the fan axiom on maximal pairs covers every pair: any
        // point of cone(I) ∩ cone(J) lies in the intersection of enclosing
        // maximal cones, and unique expansions pin its support down to I∩J.
        for (ai, a) in maximal.iter().enumerate() {
            for b in &maximal[ai + 1..] {
                if !pair_respects_axiom(dim, &rays, a, b, trust_fan) {
                    return Err(FanError::FanAxiomViolation { a: a.clone(), b: b.clone() });
                }
            }
        }

        let charts = maximal
            .iter()
            .map(|k| (k.clone(), build_chart_basis(dim, &rays, k)))
            .collect();

        Ok(Fan { dim, rays, cones, maximal, charts, trusted: trust_fan })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn ray(&self, r: RayId) -> &[Int] {
        &self.rays[r]
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    /// Whether the interior-overlap half of the fan axiom was skipped at
    /// load time.
    pub fn is_trusted(&self) -> bool {
        self.trusted
    }

    /// All faces, ascending in (cardinality, lexicographic) order.
    pub fn cones(&self) -> impl Iterator<Item = &Cone> {
        self.cones.iter()
    }

    pub fn cone_count(&self) -> usize {
        self.cones.len()
    }

    pub fn contains_cone(&self, cone: &Cone) -> bool {
        self.cones.contains(cone)
    }

    /// The ⊆-maximal faces, in canonical order.
    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal
    }

    /// The largest cardinality of a maximal cone containing `cone`.
    pub fn l_of(&self, cone: &Cone) -> usize {
        assert!(self.cones.contains(cone), "l_of: {cone} is not a face of the fan");
        self.maximal
            .iter()
            .filter(|k| cone.is_subset_of(k))
            .map(Cone::len)
            .max()
            .expect("every face lies in some maximal cone")
    }

    /// Number of loops at the vertex of `cone` in the associated quiver.
    pub fn loop_count(&self, cone: &Cone) -> usize {
        self.dim - self.l_of(cone)
    }

    /// All pairs (I, p) with both I and I∪{p} faces of the fan, in canonical
    /// order; these index the arrow pairs of the quiver.
    pub fn codim1_pairs(&self) -> Vec<(Cone, RayId)> {
        let mut pairs = Vec::new();
        for cone in &self.cones {
            for p in 0..self.rays.len() {
                if !cone.contains(p) && self.cones.contains(&cone.with_ray(p)) {
                    pairs.push((cone.clone(), p));
                }
            }
        }
        pairs
    }

    pub fn chart_basis(&self, k: &Cone) -> Option<&ChartBasis> {
        self.charts.get(k)
    }

    /// True iff the rays of `cone` extend to a Z-basis of the ambient
    /// lattice, decided by the invariant factors of the ray matrix.
    pub fn is_smooth_cone(&self, cone: &Cone) -> Result<bool, FanError> {
        if let Some(&ray) = cone.rays().iter().find(|&&r| r >= self.rays.len()) {
            return Err(FanError::UnknownRayIndex {
                cone: cone.clone(),
                ray,
                count: self.rays.len(),
            });
        }
        let diagonal = snf_diagonal(self.dim, &self.rays, cone);
        Ok(all_ones_of_len(&diagonal, cone.len()))
    }

    /// Exact test of cone(a) ∩ cone(b) = cone(a∩b). Always runs both halves
    /// of the check, regardless of how the fan was loaded.
    pub fn check_fan_axiom(&self, a: &Cone, b: &Cone) -> bool {
        pair_respects_axiom(self.dim, &self.rays, a, b, false)
    }

    /// One view per maximal cone K of cardinality `l_of(j_cone)` with
    /// J ⊆ K and p ∉ K; empty when no such chart exists.
    pub fn chart_views(&self, j_cone: &Cone, p: RayId) -> Vec<ChartView> {
        assert!(self.cones.contains(j_cone), "chart_views: {j_cone} is not a face");
        assert!(!j_cone.contains(p), "chart_views: ray {p} already lies in {j_cone}");
        assert!(
            self.cones.contains(&j_cone.with_ray(p)),
            "chart_views: {j_cone} plus ray {p} is not a face"
        );
        let l = self.l_of(j_cone);
        self.maximal
            .iter()
            .filter(|k| k.len() == l && j_cone.is_subset_of(k) && !k.contains(p))
            .map(|k| self.view_for(j_cone, p, k))
            .collect()
    }

    fn view_for(&self, j_cone: &Cone, p: RayId, k: &Cone) -> ChartView {
        let n = self.dim;
        let chart = self.charts.get(k).expect("view chart is maximal");
        let mut ordered_rays: Vec<RayId> = j_cone.rays().to_vec();
        ordered_rays.extend(k.minus(j_cone).rays());
        let mut cols: Vec<Vec<Int>> = ordered_rays.iter().map(|&r| self.rays[r].clone()).collect();
        for c in k.len()..n {
            cols.push(chart.basis.col(c));
        }
        let ordered_basis = MatZ::from_cols(n, &cols);
        let inv = ordered_basis.inverse_unimodular().expect("chart basis is unimodular");
        let target = MatZ::from_cols(n, &[self.rays[p].clone()]);
        let coords_col = &inv * &target;
        let coords = coords_col.col(0);
        ChartView {
            j_cone: j_cone.clone(),
            p,
            chart: k.clone(),
            ordered_rays,
            ordered_basis,
            j: j_cone.len(),
            l: k.len(),
            coords,
        }
    }

    /// Canonical serialization, parseable by [`fan_from_value`].
    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("index_base".into(), Value::from(0));
        m.insert("dim".into(), Value::from(self.dim));
        m.insert(
            "rays".into(),
            Value::Array(
                self.rays
                    .iter()
                    .map(|ray| Value::Array(ray.iter().map(json::int_to_value).collect()))
                    .collect(),
            ),
        );
        m.insert(
            "max_cones".into(),
            Value::Array(self.maximal.iter().map(cone_to_value).collect()),
        );
        Value::Object(m)
    }

    /// Summary of the loaded fan: faces with their loop counts, the chart
    /// bases, and whether the axiom check ran in full.
    pub fn info_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("index_base".into(), Value::from(0));
        m.insert("dim".into(), Value::from(self.dim));
        m.insert(
            "rays".into(),
            Value::Array(
                self.rays
                    .iter()
                    .map(|ray| Value::Array(ray.iter().map(json::int_to_value).collect()))
                    .collect(),
            ),
        );
        let cones: Vec<Value> = self
            .cones
            .iter()
            .map(|c| {
                let mut entry = Map::new();
                entry.insert("cone".into(), cone_to_value(c));
                entry.insert("l".into(), Value::from(self.l_of(c)));
                entry.insert("loops".into(), Value::from(self.loop_count(c)));
                Value::Object(entry)
            })
            .collect();
        m.insert("cones".into(), Value::Array(cones));
        m.insert(
            "max_cones".into(),
            Value::Array(self.maximal.iter().map(cone_to_value).collect()),
        );
        let mut bases = Map::new();
        for k in &self.maximal {
            let chart = &self.charts[k];
            let columns: Vec<Value> = (0..self.dim)
                .map(|c| Value::Array(chart.basis.col(c).iter().map(json::int_to_value).collect()))
                .collect();
            bases.insert(k.to_string(), Value::Array(columns));
        }
        m.insert("chart_bases".into(), Value::Object(bases));
        m.insert(
            "fan_axiom_check".into(),
            Value::from(if self.trusted { "rays-only" } else { "full" }),
        );
        Value::Object(m)
    }
}

fn cone_to_value(c: &Cone) -> Value {
    Value::Array(c.rays().iter().map(|&r| Value::from(r)).collect())
}

/// The raw ingredients of a fan as read from a file: ambient dimension,
/// ray generators, and maximal cones.
pub type FanData = (usize, Vec<Vec<Int>>, Vec<Cone>);

/// Parses the fan interchange format `{"dim": n, "rays": [[int,..],..],
/// "max_cones": [[ray indices],..]}`. Ray indices are 0-based; an optional
/// `index_base` field must be 0 if present.
pub fn fan_from_value(v: &Value) -> Result<FanData, ParseError> {
    let obj = json::as_object(v, "fan")?;
    if let Some(base) = obj.get("index_base") {
        if base.as_u64() != Some(0) {
            return Err(json::invalid("fan: index_base must be 0"));
        }
    }
    let dim = json::as_usize(json::field(obj, "dim", "fan")?, "fan dim")?;
    let rays = json::as_array(json::field(obj, "rays", "fan")?, "fan rays")?
        .iter()
        .enumerate()
        .map(|(i, ray)| json::int_vec(ray, &format!("ray {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    let max_cones = json::as_array(json::field(obj, "max_cones", "fan")?, "fan max_cones")?
        .iter()
        .enumerate()
        .map(|(i, c)| cone_from_value(c, &format!("max_cones[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((dim, rays, max_cones))
}

/// Parses a cone as an array of ray indices; order is irrelevant, repeats
/// are rejected.
pub fn cone_from_value(v: &Value, what: &str) -> Result<Cone, ParseError> {
    let arr = json::as_array(v, what)?;
    let mut indices = Vec::with_capacity(arr.len());
    for e in arr {
        indices.push(json::as_usize(e, what)?);
    }
    let mut sorted = indices.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(json::invalid(format!("{what}: repeated ray index")));
    }
    Ok(Cone::new(indices))
}

/// Invariant factors of the dim × |cone| matrix of the cone's rays.
fn snf_diagonal(dim: usize, rays: &[Vec<Int>], cone: &Cone) -> Vec<Int> {
    let cols: Vec<Vec<Int>> = cone.rays().iter().map(|&r| rays[r].clone()).collect();
    let mat = MatZ::from_cols(dim, &cols);
    let snf = mat.snf();
    (0..dim.min(cone.len())).map(|i| snf.s[(i, i)].clone()).collect()
}

fn all_ones_of_len(diagonal: &[Int], want: usize) -> bool {
    diagonal.len() == want && diagonal.iter().all(Int::is_one)
}

/// Both halves of the intersection check for one pair of smooth cones:
/// (a) no ray of either cone lies in the other without being shared, and
/// unless `rays_only`, (b) no interior witness point exists either.
fn pair_respects_axiom(dim: usize, rays: &[Vec<Int>], a: &Cone, b: &Cone, rays_only: bool) -> bool {
    let a_extra = a.minus(b);
    let b_extra = b.minus(a);
    let gens_a = ray_matrix_q(dim, rays, a);
    let gens_b = ray_matrix_q(dim, rays, b);
    for &r in a_extra.rays() {
        if axiom::vector_in_cone(&ray_q(rays, r), &gens_b) {
            return false;
        }
    }
    for &r in b_extra.rays() {
        if axiom::vector_in_cone(&ray_q(rays, r), &gens_a) {
            return false;
        }
    }
    if rays_only {
        return true;
    }
    let mut cols = MatQ::zeros(dim, a.len() + b.len());
    let mut extra = Vec::with_capacity(a.len() + b.len());
    for (j, &r) in a.rays().iter().enumerate() {
        for i in 0..dim {
            cols[(i, j)] = Rat::from_integer(rays[r][i].clone());
        }
        extra.push(!b.contains(r));
    }
    for (j, &r) in b.rays().iter().enumerate() {
        for i in 0..dim {
            cols[(i, a.len() + j)] = -Rat::from_integer(rays[r][i].clone());
        }
        extra.push(!a.contains(r));
    }
    !axiom::overlap_outside_common_face(&cols, &extra)
}

fn ray_q(rays: &[Vec<Int>], r: RayId) -> Vec<Rat> {
    rays[r].iter().map(|c| Rat::from_integer(c.clone())).collect()
}

fn ray_matrix_q(dim: usize, rays: &[Vec<Int>], cone: &Cone) -> MatQ {
    let mut m = MatQ::zeros(dim, cone.len());
    for (j, &r) in cone.rays().iter().enumerate() {
        for i in 0..dim {
            m[(i, j)] = Rat::from_integer(rays[r][i].clone());
        }
    }
    m
}

/// Completes the rays of a maximal cone to a Z-basis. Row-reducing the ray
/// matrix R to Hermite form gives a unimodular u with u·R = [I; 0] (the
/// identity block certifies smoothness), so the columns of u⁻¹ start with
/// the rays themselves and the remaining columns complete the basis.
fn build_chart_basis(dim: usize, rays: &[Vec<Int>], k: &Cone) -> ChartBasis {
    let cols: Vec<Vec<Int>> = k.rays().iter().map(|&r| rays[r].clone()).collect();
    let mat = MatZ::from_cols(dim, &cols);
    let (h, u) = mat.hnf();
    for c in 0..k.len() {
        for r in 0..dim {
            let expected = if r == c { Int::one() } else { Int::zero() };
            assert_eq!(h[(r, c)], expected, "chart basis requested for a non-smooth cone");
        }
    }
    let basis = u.inverse_unimodular().expect("Hermite transform is unimodular");
    let ray_positions = k.rays().iter().enumerate().map(|(pos, &r)| (r, pos)).collect();
    ChartBasis { cone: k.clone(), basis, ray_positions }
}
