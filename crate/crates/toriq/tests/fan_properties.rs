//! Structural properties of fan loading that only show up across the
//! public API: relabeling invariance, the smoothness gate against a
//! brute-force determinant oracle, and serialization round trips.

use num_integer::Integer as _;
use num_traits::Signed;
use toriq::builtin::{builtin_fan, roster};
use toriq::category::relations;
use toriq::fan::{fan_from_value, FanError};
use toriq::json::{parse_text, to_pretty_string};
use toriq::linalg::{int, Int};
use toriq::{Cone, Fan, Quiver};

fn cone(rays: &[usize]) -> Cone {
    Cone::new(rays.to_vec())
}

/// Applies a permutation to ray indices: ray i of the new fan is ray
/// perm[i] of the old one.
fn permuted(fan: &Fan, perm: &[usize]) -> Fan {
    let rays: Vec<Vec<Int>> = perm.iter().map(|&old| fan.ray(old).to_vec()).collect();
    let inverse: Vec<usize> = {
        let mut inv = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        inv
    };
    let max_cones = fan
        .maximal_cones()
        .iter()
        .map(|c| c.rays().iter().map(|&r| inverse[r]).collect::<Cone>())
        .collect();
    Fan::load(fan.dim(), rays, max_cones, false).expect("permuted fan stays valid")
}

/// Word shapes that survive relabeling: for every relation, the size of J
/// and the sorted exponent list.
fn relation_signature(fan: &Fan) -> Vec<(usize, Vec<Int>)> {
    let mut sig: Vec<(usize, Vec<Int>)> = relations(fan)
        .iter()
        .map(|w| {
            let mut exps: Vec<Int> = w.rhs.iter().map(|(_, e)| e.clone()).collect();
            exps.sort();
            (w.j_cone.len(), exps)
        })
        .collect();
    sig.sort();
    sig
}

#[test]
fn relabeling_rays_changes_nothing_structural() {
    let perms: [&[usize]; 3] = [&[2, 0, 1], &[1, 2, 0], &[2, 1, 0]];
    for name in ["p2", "fan1"] {
        let original = builtin_fan(name).unwrap();
        for perm in perms {
            let relabeled = permuted(&original, perm);
            assert_eq!(original.cone_count(), relabeled.cone_count(), "{name} {perm:?}");

            let (qa, qb) = (Quiver::from_fan(&original), Quiver::from_fan(&relabeled));
            assert_eq!(qa.vertex_count(), qb.vertex_count());
            assert_eq!(qa.arrow_pair_count(), qb.arrow_pair_count());

            let mut loops_a: Vec<usize> =
                original.cones().map(|c| original.loop_count(c)).collect();
            let mut loops_b: Vec<usize> =
                relabeled.cones().map(|c| relabeled.loop_count(c)).collect();
            loops_a.sort_unstable();
            loops_b.sort_unstable();
            assert_eq!(loops_a, loops_b);

            assert_eq!(relation_signature(&original), relation_signature(&relabeled));
        }
    }
}

fn primitive_plane_vectors() -> Vec<Vec<Int>> {
    let mut out = Vec::new();
    for x in -3i64..=3 {
        for y in -3i64..=3 {
            if (x, y) == (0, 0) {
                continue;
            }
            if x.gcd(&y) == 1 {
                out.push(vec![int(x), int(y)]);
            }
        }
    }
    out
}

#[test]
fn two_dimensional_smoothness_matches_the_determinant() {
    let vectors = primitive_plane_vectors();
    for a in &vectors {
        for b in &vectors {
            if a == b {
                continue;
            }
            let det = (&a[0] * &b[1] - &a[1] * &b[0]).abs();
            let loaded = Fan::load(
                2,
                vec![a.clone(), b.clone()],
                vec![cone(&[0, 1])],
                false,
            );
            match loaded {
                Ok(fan) => {
                    assert_eq!(det, int(1), "accepted cone({a:?}, {b:?})");
                    assert!(fan.is_smooth_cone(&cone(&[0, 1])).unwrap());
                }
                Err(FanError::NonSmoothCone { diagonal, .. }) => {
                    assert_ne!(det, int(1), "rejected cone({a:?}, {b:?})");
                    let product: Int = diagonal.iter().product();
                    assert_eq!(product, det, "witness must multiply to |det|");
                }
                Err(other) => panic!("unexpected rejection of cone({a:?}, {b:?}): {other}"),
            }
        }
    }
}

#[test]
fn fan_json_round_trips_for_every_builtin() {
    for name in roster() {
        let fan = builtin_fan(name).unwrap();
        let text = to_pretty_string(&fan.to_value());
        let (dim, rays, max_cones) = fan_from_value(&parse_text(&text).unwrap()).unwrap();
        let reloaded = Fan::load(dim, rays, max_cones, false).unwrap();
        assert_eq!(to_pretty_string(&reloaded.to_value()), text, "{name}");
        assert_eq!(reloaded.cone_count(), fan.cone_count(), "{name}");
    }
}

#[test]
fn rays_outside_every_cone_are_tolerated() {
    // Third ray unused by any maximal cone: still a valid input, and the
    // quiver simply never mentions it.
    let fan = Fan::load(
        2,
        vec![
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(-1), int(-1)],
        ],
        vec![cone(&[0, 1])],
        false,
    )
    .unwrap();
    assert_eq!(fan.cone_count(), 4);
    let quiver = Quiver::from_fan(&fan);
    assert_eq!(quiver.vertex_count(), 4);
    assert!(quiver.loops_at(&cone(&[2])).is_none());
}

#[test]
fn loading_is_independent_of_maximal_cone_order() {
    let rays = || {
        vec![
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(-1), int(-1)],
        ]
    };
    let a = Fan::load(2, rays(), vec![cone(&[0, 1]), cone(&[2])], false).unwrap();
    let b = Fan::load(2, rays(), vec![cone(&[2]), cone(&[0, 1])], false).unwrap();
    assert_eq!(to_pretty_string(&a.to_value()), to_pretty_string(&b.to_value()));
    assert_eq!(to_pretty_string(&a.info_value()), to_pretty_string(&b.info_value()));
}
