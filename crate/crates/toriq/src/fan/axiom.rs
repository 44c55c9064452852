//! Exact feasibility tests behind the pairwise cone-intersection check.
//!
//! Two cones of a fan must meet exactly in the cone on their shared rays.
//! Rather than compute the intersection, we test for a witness point that
//! lies in both cones but not in the common face: such a point has, in its
//! (unique) generator expansions, positive total weight on the non-shared
//! rays, so after scaling it solves
//!
//!   A_I·λ = A_J·μ,   λ ≥ 0,  μ ≥ 0,   Σ_{i ∈ I∖J} λ_i + Σ_{j ∈ J∖I} μ_j = 1.
//!
//! Conversely any solution of this system is such a witness. Feasibility is
//! decided exactly: Gaussian elimination removes the equalities, then
//! Fourier-Motzkin elimination projects out the remaining variables. The
//! sizes involved (at most 2·dim variables) keep the combinatorial blowup
//! irrelevant.

use num_traits::{One, Signed, Zero};

use crate::linalg::{MatQ, Rat};

/// One affine inequality `coeffs · y + constant ≥ 0`.
type Ineq = (Vec<Rat>, Rat);

/// Does `v` lie in the cone nonnegatively spanned by the columns of `gens`?
///
/// The columns must be linearly independent (true for the rays of a smooth
/// simplicial cone), so the coefficient vector is unique when it exists.
pub fn vector_in_cone(v: &[Rat], gens: &MatQ) -> bool {
    let n = gens.rows();
    let m = gens.cols();
    debug_assert_eq!(v.len(), n);
    let mut aug = MatQ::zeros(n, m + 1);
    for i in 0..n {
        for j in 0..m {
            aug[(i, j)] = gens[(i, j)].clone();
        }
        aug[(i, m)] = v[i].clone();
    }
    let pivots = aug.rref_in_place();
    if pivots.contains(&m) {
        return false;
    }
    debug_assert_eq!(pivots.len(), m, "cone generators must be linearly independent");
    (0..pivots.len()).all(|r| !aug[(r, m)].is_negative())
}

/// Feasibility of the witness system described in the module docs.
///
/// `cols` is the dim × (|I|+|J|) matrix holding the rays of I followed by
/// the *negated* rays of J (so its kernel encodes A_I·λ = A_J·μ); `extra`
/// marks the variables belonging to I∖J and J∖I. Returns true iff the two
/// cones share a point outside the cone on their common rays.
pub fn overlap_outside_common_face(cols: &MatQ, extra: &[bool]) -> bool {
    let n = cols.rows();
    let m = cols.cols();
    debug_assert_eq!(extra.len(), m);
    let mut aug = MatQ::zeros(n + 1, m + 1);
    for i in 0..n {
        for j in 0..m {
            aug[(i, j)] = cols[(i, j)].clone();
        }
    }
    for (j, &e) in extra.iter().enumerate() {
        if e {
            aug[(n, j)] = Rat::one();
        }
    }
    aug[(n, m)] = Rat::one();
    let pivots = aug.rref_in_place();
    if pivots.contains(&m) {
        // The equalities alone are contradictory; in particular the extra
        // weights are forced to 0, so no witness exists.
        return false;
    }
    // Substitute the pivot variables away; each variable's nonnegativity
    // becomes an affine inequality in the free variables.
    let free: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
    let mut ineqs: Vec<Ineq> = Vec::with_capacity(m);
    for t in 0..m {
        if let Some(r) = pivots.iter().position(|&p| p == t) {
            let coeffs = free.iter().map(|&f| -aug[(r, f)].clone()).collect();
            ineqs.push((coeffs, aug[(r, m)].clone()));
        } else {
            let fi = free.iter().position(|&f| f == t).expect("t is free");
            let mut coeffs = vec![Rat::zero(); free.len()];
            coeffs[fi] = Rat::one();
            ineqs.push((coeffs, Rat::zero()));
        }
    }
    affine_system_feasible(ineqs, free.len())
}

/// Fourier-Motzkin elimination: does `coeffs · y + constant ≥ 0` (one row
/// per inequality) admit a real solution? Variables are eliminated from the
/// last to the first; each round combines every lower bound with every
/// upper bound on the eliminated variable.
fn affine_system_feasible(mut ineqs: Vec<Ineq>, mut nvars: usize) -> bool {
    while nvars > 0 {
        let v = nvars - 1;
        let mut lower: Vec<Ineq> = Vec::new(); // positive coefficient on y_v
        let mut upper: Vec<Ineq> = Vec::new(); // negative coefficient on y_v
        let mut rest: Vec<Ineq> = Vec::new();
        for (mut c, d) in ineqs {
            let coeff = c[v].clone();
            c.truncate(v);
            if coeff.is_zero() {
                rest.push((c, d));
            } else if coeff.is_positive() {
                // a·y_v + rest ≥ 0, normalize to y_v ≥ -rest/a
                let inv = coeff.recip();
                lower.push(scale((c, d), &inv));
            } else {
                // -b·y_v + rest ≥ 0, normalize to y_v ≤ rest/b
                let inv = -coeff.recip();
                upper.push(scale((c, d), &inv));
            }
        }
        for (lc, ld) in &lower {
            for (uc, ud) in &upper {
                // -lower_bound ≤ y_v ≤ upper_bound collapses to
                // upper_bound + lower_bound_rest ≥ 0.
                let c = lc.iter().zip(uc).map(|(a, b)| a + b).collect();
                rest.push((c, ld + ud));
            }
        }
        ineqs = rest;
        nvars = v;
    }
    ineqs.iter().all(|(_, d)| !d.is_negative())
}

fn scale((c, d): Ineq, f: &Rat) -> Ineq {
    (c.into_iter().map(|x| x * f).collect(), d * f)
}
