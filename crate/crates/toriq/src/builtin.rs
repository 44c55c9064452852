//! Named example fans shipped with the tool.
//!
//! Accepted names:
//!   - `cn:<n>` the affine fan on the standard basis of Z^n (single
//!     maximal cone), 1 ≤ n ≤ 10
//!   - `cstar:<l>,<n>` the l standard basis rays inside Z^n, 0 ≤ l ≤ n ≤ 10
//!   - `p1` the complete fan on the line: rays 1 and -1
//!   - `p2` the complete fan of the projective plane
//!   - `fan1` rays e1, e2, -e1-e2 with maximal cones {0,1} and {2}

use crate::cone::Cone;
use crate::fan::Fan;
use crate::linalg::Int;

const MAX_N: usize = 10;

/// Builds the fan for a documented name; `None` if the name is unknown or
/// its parameters are out of range.
pub fn builtin_fan(name: &str) -> Option<Fan> {
    let fan = match name {
        "p1" => load(1, &[&[1], &[-1]], &[&[0], &[1]]),
        "p2" => load(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[0, 2], &[1, 2]]),
        "fan1" => load(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[2]]),
        _ => {
            if let Some(n) = name.strip_prefix("cn:") {
                let n: usize = n.parse().ok().filter(|n| (1..=MAX_N).contains(n))?;
                standard_rays(n, n)
            } else {
                let rest = name.strip_prefix("cstar:")?;
                let (l, n) = rest.split_once(',')?;
                let l: usize = l.parse().ok()?;
                let n: usize = n.parse().ok().filter(|&n| l <= n && n <= MAX_N)?;
                standard_rays(l, n)
            }
        }
    };
    Some(fan)
}

/// A representative list of valid names, used by tests and documentation.
pub fn roster() -> Vec<&'static str> {
    vec![
        "p1",
        "p2",
        "fan1",
        "cn:1",
        "cn:2",
        "cn:3",
        "cstar:0,1",
        "cstar:1,2",
        "cstar:1,3",
        "cstar:2,3",
    ]
}

/// First `l` standard basis vectors of Z^n spanning one maximal cone; the
/// fan of the toric variety C^l x (C*)^(n-l).
fn standard_rays(l: usize, n: usize) -> Fan {
    let rays: Vec<Vec<Int>> = (0..l)
        .map(|i| (0..n).map(|j| Int::from(u8::from(i == j))).collect())
        .collect();
    let max_cones = if l == 0 { vec![] } else { vec![Cone::new((0..l).collect())] };
    Fan::load(n, rays, max_cones, false).expect("built-in fan data is valid")
}

fn load(dim: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Fan {
    let rays = rays.iter().map(|r| r.iter().map(|&c| Int::from(c)).collect()).collect();
    let cones = max_cones.iter().map(|c| Cone::new(c.to_vec())).collect();
    Fan::load(dim, rays, cones, false).expect("built-in fan data is valid")
}
