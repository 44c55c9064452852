//! Representations of the fan's quiver over the rationals and the
//! membership conditions they must satisfy.
//!
//! A representation assigns a space E_I to every face, a map pair
//! u: E_I → E_{I∪p}, v: E_{I∪p} → E_I to every codimension-one incidence,
//! and invertible endomorphisms (loops) for every missing chart direction.
//! Membership requires:
//!
//!   (i)   every loop is invertible;
//!   (ii)  every monodromy M = v·u + Id is invertible;
//!   (iii) parallel composites around each square I, I∪p, I∪q, I∪{p,q}
//!         agree (two u-paths, two v-paths, and the mixed identity);
//!   (iv)  each monodromy factors through the chart coordinates, see
//!         [`relations`].
//!
//! `check_all` runs the shape check and then all four conditions;
//! representations and reports are plain data throughout.

mod json;
mod relations;
mod report;

use std::collections::BTreeMap;

use num_traits::Zero;

pub use json::{rep_from_value, rep_to_value};
pub use relations::{
    check_iv, evaluate_word, generator_matrix, relations, Generator, RelationWord, SingularFactor,
};
pub use report::{Condition, ConditionReport, Failure, SquareIdentity};

use crate::cone::{Cone, RayId};
use crate::fan::Fan;
use crate::linalg::MatQ;

/// A quiver representation: data only, no validity assumptions. Whether it
/// fits a given fan's quiver is the job of [`shape_failures`]; whether it
/// belongs to the category is the job of [`check_all`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    spaces: BTreeMap<Cone, usize>,
    umaps: BTreeMap<(Cone, RayId), MatQ>,
    vmaps: BTreeMap<(Cone, RayId), MatQ>,
    loops: BTreeMap<Cone, Vec<MatQ>>,
}

impl Representation {
    /// Assembles a representation from raw parts. Empty loop lists are
    /// dropped so that "no entry" and "no loops" compare equal.
    pub fn new(
        spaces: BTreeMap<Cone, usize>,
        umaps: BTreeMap<(Cone, RayId), MatQ>,
        vmaps: BTreeMap<(Cone, RayId), MatQ>,
        mut loops: BTreeMap<Cone, Vec<MatQ>>,
    ) -> Representation {
        loops.retain(|_, v| !v.is_empty());
        Representation { spaces, umaps, vmaps, loops }
    }

    pub fn space(&self, cone: &Cone) -> Option<usize> {
        self.spaces.get(cone).copied()
    }

    /// Dimension at a face the representation is known to cover.
    pub fn dim(&self, cone: &Cone) -> usize {
        self.space(cone).unwrap_or_else(|| panic!("representation has no space at {cone}"))
    }

    pub fn u(&self, cone: &Cone, p: RayId) -> Option<&MatQ> {
        self.umaps.get(&(cone.clone(), p))
    }

    pub fn v(&self, cone: &Cone, p: RayId) -> Option<&MatQ> {
        self.vmaps.get(&(cone.clone(), p))
    }

    pub fn loops_at(&self, cone: &Cone) -> &[MatQ] {
        self.loops.get(cone).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The `index`-th loop at a face, 1-based.
    pub fn loop_map(&self, cone: &Cone, index: usize) -> Option<&MatQ> {
        index.checked_sub(1).and_then(|i| self.loops_at(cone).get(i))
    }

    pub fn spaces(&self) -> &BTreeMap<Cone, usize> {
        &self.spaces
    }

    pub fn umaps(&self) -> &BTreeMap<(Cone, RayId), MatQ> {
        &self.umaps
    }

    pub fn vmaps(&self) -> &BTreeMap<(Cone, RayId), MatQ> {
        &self.vmaps
    }

    pub fn loops(&self) -> &BTreeMap<Cone, Vec<MatQ>> {
        &self.loops
    }
}

/// The monodromy v·u + Id across the arrow pair (cone, p), an endomorphism
/// of the space at `cone`. Panics if the maps are absent or mis-shaped;
/// run the shape check first on untrusted data.
pub fn monodromy(rep: &Representation, cone: &Cone, p: RayId) -> MatQ {
    let u = rep.u(cone, p).unwrap_or_else(|| panic!("no u map at ({cone}, {p})"));
    let v = rep.v(cone, p).unwrap_or_else(|| panic!("no v map at ({cone}, {p})"));
    let d = rep.dim(cone);
    &(v * u) + &MatQ::identity(d)
}

/// Everything about `rep` that fails to fit the quiver of `fan`: missing or
/// extra spaces, maps, and loops, and wrongly sized matrices. Empty means
/// the condition checks can run without panicking.
pub fn shape_failures(fan: &Fan, rep: &Representation) -> Vec<Failure> {
    let mut out = Vec::new();
    let shape = |detail: String| Failure::Shape { detail };

    for cone in fan.cones() {
        if rep.space(cone).is_none() {
            out.push(shape(format!("missing space for face {cone}")));
        }
    }
    for cone in rep.spaces.keys() {
        if !fan.contains_cone(cone) {
            out.push(shape(format!("space {cone} is not a face of the fan")));
        }
    }

    let pairs = fan.codim1_pairs();
    for (cone, p) in &pairs {
        let bigger = cone.with_ray(*p);
        let (d_small, d_big) = (rep.space(cone), rep.space(&bigger));
        match rep.u(cone, *p) {
            None => out.push(shape(format!("missing u map for arrow {cone}->{bigger}"))),
            Some(m) => {
                if let (Some(ds), Some(db)) = (d_small, d_big) {
                    if (m.rows(), m.cols()) != (db, ds) {
                        out.push(shape(format!(
                            "u[{cone}->{bigger}] has shape {}x{}, expected {db}x{ds}",
                            m.rows(),
                            m.cols()
                        )));
                    }
                }
            }
        }
        match rep.v(cone, *p) {
            None => out.push(shape(format!("missing v map for arrow {bigger}->{cone}"))),
            Some(m) => {
                if let (Some(ds), Some(db)) = (d_small, d_big) {
                    if (m.rows(), m.cols()) != (ds, db) {
                        out.push(shape(format!(
                            "v[{bigger}->{cone}] has shape {}x{}, expected {ds}x{db}",
                            m.rows(),
                            m.cols()
                        )));
                    }
                }
            }
        }
    }
    let pair_set: std::collections::BTreeSet<&(Cone, RayId)> = pairs.iter().collect();
    for key in rep.umaps.keys() {
        if !pair_set.contains(key) {
            let (cone, p) = key;
            out.push(shape(format!("u map at ({cone}, {p}) does not match any arrow")));
        }
    }
    for key in rep.vmaps.keys() {
        if !pair_set.contains(key) {
            let (cone, p) = key;
            out.push(shape(format!("v map at ({cone}, {p}) does not match any arrow")));
        }
    }

    for cone in fan.cones() {
        let want = fan.loop_count(cone);
        let found = rep.loops_at(cone);
        if found.len() != want {
            out.push(shape(format!(
                "face {cone} needs {want} loop matrices, found {}",
                found.len()
            )));
        }
        if let Some(d) = rep.space(cone) {
            for (i, m) in found.iter().enumerate() {
                if (m.rows(), m.cols()) != (d, d) {
                    out.push(shape(format!(
                        "loop {} at {cone} has shape {}x{}, expected {d}x{d}",
                        i + 1,
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
    }
    for cone in rep.loops.keys() {
        if !fan.contains_cone(cone) {
            out.push(shape(format!("loops at {cone}, which is not a face of the fan")));
        }
    }
    out
}

/// Condition (i): every loop endomorphism is invertible.
pub fn check_i(rep: &Representation) -> ConditionReport {
    let mut failures = Vec::new();
    for (cone, loops) in &rep.loops {
        for (i, m) in loops.iter().enumerate() {
            if m.inverse().is_err() {
                failures.push(Failure::LoopSingular { cone: cone.clone(), index: i + 1 });
            }
        }
    }
    ConditionReport::from_failures(failures)
}

/// Condition (ii): every monodromy v·u + Id is invertible.
pub fn check_ii(rep: &Representation) -> ConditionReport {
    let mut failures = Vec::new();
    for (cone, p) in rep.umaps.keys() {
        let m = monodromy(rep, cone, *p);
        if m.inverse().is_err() {
            failures.push(Failure::MonodromySingular {
                cone: cone.clone(),
                ray: *p,
                monodromy: m,
            });
        }
    }
    ConditionReport::from_failures(failures)
}

/// Condition (iii): for every square of faces I ⊂ I∪p, I∪q ⊂ I∪{p,q} the
/// two u-composites agree, the two v-composites agree, and pulling back
/// through one side equals pushing forward through the other:
///
///   u(I∪p,q)·u(I,p) = u(I∪q,p)·u(I,q)
///   v(I,p)·v(I∪p,q) = v(I,q)·v(I∪q,p)
///   v(I∪p,q)·u(I∪q,p) = u(I,p)·v(I,q)
///
/// Each identity is the unique composable reading of the defining list.
/// Squares with any face or map missing are skipped (the shape check
/// reports those).
pub fn check_iii(rep: &Representation) -> ConditionReport {
    let mut failures = Vec::new();
    let mut rays_at: BTreeMap<&Cone, Vec<RayId>> = BTreeMap::new();
    for (cone, p) in rep.umaps.keys() {
        rays_at.entry(cone).or_default().push(*p);
    }
    for (cone, rays) in &rays_at {
        for (pi, &p) in rays.iter().enumerate() {
            for &q in &rays[pi + 1..] {
                let with_p = cone.with_ray(p);
                let with_q = cone.with_ray(q);
                let parts = (
                    rep.u(cone, p),
                    rep.u(cone, q),
                    rep.u(&with_p, q),
                    rep.u(&with_q, p),
                    rep.v(cone, p),
                    rep.v(cone, q),
                    rep.v(&with_p, q),
                    rep.v(&with_q, p),
                );
                let (
                    Some(u_p),
                    Some(u_q),
                    Some(u_pq),
                    Some(u_qp),
                    Some(v_p),
                    Some(v_q),
                    Some(v_pq),
                    Some(v_qp),
                ) = parts
                else {
                    continue;
                };
                let checks = [
                    (SquareIdentity::UU, u_pq * u_p, u_qp * u_q),
                    (SquareIdentity::VV, v_p * v_pq, v_q * v_qp),
                    (SquareIdentity::UV, v_pq * u_qp, u_p * v_q),
                ];
                for (identity, lhs, rhs) in checks {
                    if lhs != rhs {
                        failures.push(Failure::SquareBroken {
                            cone: (*cone).clone(),
                            p,
                            q,
                            identity,
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
    }
    ConditionReport::from_failures(failures)
}

/// Shape check, then conditions (i) through (iv). When the shape is wrong
/// the report carries only the shape failures, because the conditions are
/// not evaluable on mis-shaped data.
pub fn check_all(fan: &Fan, rep: &Representation) -> ConditionReport {
    let shape = shape_failures(fan, rep);
    if !shape.is_empty() {
        return ConditionReport::from_failures(shape);
    }
    let mut failures = check_i(rep).into_failures();
    failures.extend(check_ii(rep).into_failures());
    failures.extend(check_iii(rep).into_failures());
    failures.extend(check_iv(fan, rep).into_failures());
    ConditionReport::from_failures(failures)
}

/// The representation with the d-dimensional space everywhere, zero u and v
/// maps, and identity loops. It satisfies every condition: monodromies are
/// identities and every relation word evaluates to the identity.
pub fn constant_object(fan: &Fan, d: usize) -> Representation {
    let spaces = fan.cones().map(|c| (c.clone(), d)).collect();
    let mut umaps = BTreeMap::new();
    let mut vmaps = BTreeMap::new();
    for (cone, p) in fan.codim1_pairs() {
        umaps.insert((cone.clone(), p), MatQ::zeros(d, d));
        vmaps.insert((cone, p), MatQ::zeros(d, d));
    }
    let loops = fan
        .cones()
        .map(|c| (c.clone(), vec![MatQ::identity(d); fan.loop_count(c)]))
        .collect();
    Representation::new(spaces, umaps, vmaps, loops)
}

/// A candidate morphism: one map per face, from the space of the source
/// representation to the space of the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub maps: BTreeMap<Cone, MatQ>,
}

/// True iff `m` commutes with every u, v, and loop of the two
/// representations. Maps that do not even typecheck make it not a
/// morphism, so mismatched shapes return false rather than erroring.
pub fn is_morphism(source: &Representation, target: &Representation, m: &Morphism) -> bool {
    if source.spaces.keys().ne(m.maps.keys()) || target.spaces.keys().ne(m.maps.keys()) {
        return false;
    }
    for (cone, phi) in &m.maps {
        if (phi.rows(), phi.cols()) != (target.dim(cone), source.dim(cone)) {
            return false;
        }
    }
    if source.umaps.keys().ne(target.umaps.keys())
        || source.vmaps.keys().ne(target.vmaps.keys())
    {
        return false;
    }
    for ((cone, p), u_a) in &source.umaps {
        let bigger = cone.with_ray(*p);
        let u_b = &target.umaps[&(cone.clone(), *p)];
        if &m.maps[&bigger] * u_a != u_b * &m.maps[cone] {
            return false;
        }
    }
    for ((cone, p), v_a) in &source.vmaps {
        let bigger = cone.with_ray(*p);
        let v_b = &target.vmaps[&(cone.clone(), *p)];
        if &m.maps[cone] * v_a != v_b * &m.maps[&bigger] {
            return false;
        }
    }
    for (cone, loops_a) in &source.loops {
        let loops_b = target.loops_at(cone);
        if loops_a.len() != loops_b.len() {
            return false;
        }
        let phi = &m.maps[cone];
        for (la, lb) in loops_a.iter().zip(loops_b) {
            if phi * la != lb * phi {
                return false;
            }
        }
    }
    true
}

/// Dimension and basis of the space of morphisms from `a` to `b`, computed
/// as the exact kernel of the full commutation system. Both representations
/// must live on the same quiver (same key sets everywhere).
pub fn hom_dim(a: &Representation, b: &Representation) -> (usize, Vec<Morphism>) {
    assert!(
        a.spaces.keys().eq(b.spaces.keys())
            && a.umaps.keys().eq(b.umaps.keys())
            && a.vmaps.keys().eq(b.vmaps.keys()),
        "hom_dim requires representations over the same quiver"
    );

    // Unknowns: the entries of each vertex map φ_I (shape d_b × d_a),
    // flattened row-major, vertices in canonical order.
    let mut offset = BTreeMap::new();
    let mut total = 0usize;
    for (cone, &da) in &a.spaces {
        offset.insert(cone.clone(), total);
        total += da * b.dim(cone);
    }
    let var = |cone: &Cone, r: usize, c: usize| offset[cone] + r * a.dim(cone) + c;

    let mut rows: Vec<Vec<crate::linalg::Rat>> = Vec::new();
    let push_zero_rows = |n: usize, rows: &mut Vec<Vec<crate::linalg::Rat>>| {
        for _ in 0..n {
            rows.push(vec![crate::linalg::Rat::zero(); total]);
        }
    };

    // φ_{I∪p}·u_a = u_b·φ_I, entry (r, c) for r < d_b(I∪p), c < d_a(I).
    for ((cone, p), u_a) in &a.umaps {
        let bigger = cone.with_ray(*p);
        let u_b = &b.umaps[&(cone.clone(), *p)];
        let base = rows.len();
        push_zero_rows(b.dim(&bigger) * a.dim(cone), &mut rows);
        for r in 0..b.dim(&bigger) {
            for c in 0..a.dim(cone) {
                let row = &mut rows[base + r * a.dim(cone) + c];
                for k in 0..a.dim(&bigger) {
                    row[var(&bigger, r, k)] += u_a[(k, c)].clone();
                }
                for k in 0..b.dim(cone) {
                    row[var(cone, k, c)] -= u_b[(r, k)].clone();
                }
            }
        }
    }
    // φ_I·v_a = v_b·φ_{I∪p}, entry (r, c) for r < d_b(I), c < d_a(I∪p).
    for ((cone, p), v_a) in &a.vmaps {
        let bigger = cone.with_ray(*p);
        let v_b = &b.vmaps[&(cone.clone(), *p)];
        let base = rows.len();
        push_zero_rows(b.dim(cone) * a.dim(&bigger), &mut rows);
        for r in 0..b.dim(cone) {
            for c in 0..a.dim(&bigger) {
                let row = &mut rows[base + r * a.dim(&bigger) + c];
                for k in 0..a.dim(cone) {
                    row[var(cone, r, k)] += v_a[(k, c)].clone();
                }
                for k in 0..b.dim(&bigger) {
                    row[var(&bigger, k, c)] -= v_b[(r, k)].clone();
                }
            }
        }
    }
    // φ_I·m_a = m_b·φ_I per loop.
    for (cone, loops_a) in &a.loops {
        let loops_b = b.loops_at(cone);
        assert_eq!(loops_a.len(), loops_b.len(), "loop counts must agree at {cone}");
        for (m_a, m_b) in loops_a.iter().zip(loops_b) {
            let base = rows.len();
            push_zero_rows(b.dim(cone) * a.dim(cone), &mut rows);
            for r in 0..b.dim(cone) {
                for c in 0..a.dim(cone) {
                    let row = &mut rows[base + r * a.dim(cone) + c];
                    for k in 0..a.dim(cone) {
                        row[var(cone, r, k)] += m_a[(k, c)].clone();
                    }
                    for k in 0..b.dim(cone) {
                        row[var(cone, k, c)] -= m_b[(r, k)].clone();
                    }
                }
            }
        }
    }

    let system = MatQ::from_entries(rows.len(), total, rows.into_iter().flatten().collect());
    let kernel = system.nullspace();
    let basis = kernel
        .basis
        .iter()
        .map(|vec| {
            let maps = a
                .spaces
                .iter()
                .map(|(cone, &da)| {
                    let db = b.dim(cone);
                    let mut phi = MatQ::zeros(db, da);
                    for r in 0..db {
                        for c in 0..da {
                            phi[(r, c)] = vec[(var(cone, r, c), 0)].clone();
                        }
                    }
                    (cone.clone(), phi)
                })
                .collect();
            Morphism { maps }
        })
        .collect::<Vec<_>>();
    debug_assert!(basis.iter().all(|m| is_morphism(a, b, m)));
    (kernel.dim, basis)
}
