//! Cone index sets.
//!
//! A cone of a simplicial fan is identified by the set of indices of the rays
//! that span it. The empty set names the apex cone {0}.

use std::fmt;
use std::str::FromStr;

/// Index of a ray in a fan's ray list. 0-based everywhere.
pub type RayId = usize;

/// A set of ray indices, kept sorted and duplicate-free.
///
/// Ordering is by cardinality first, then lexicographic, which is the
/// canonical vertex order used by every export.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Cone(Vec<RayId>);

impl Cone {
    pub fn empty() -> Self {
        Cone(Vec::new())
    }

    /// Builds a cone from arbitrary indices; sorts and deduplicates.
    pub fn new(mut rays: Vec<RayId>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Cone(rays)
    }

    /// Builds a cone from a slice already known to be strictly increasing.
    /// Returns None if it is not.
    pub fn from_sorted(rays: Vec<RayId>) -> Option<Self> {
        if rays.windows(2).all(|w| w[0] < w[1]) {
            Some(Cone(rays))
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, ray: RayId) -> bool {
        self.0.binary_search(&ray).is_ok()
    }

    pub fn rays(&self) -> &[RayId] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = RayId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset_of(&self, other: &Cone) -> bool {
        self.0.iter().all(|&r| other.contains(r))
    }

    /// The cone with one extra ray.
    pub fn with_ray(&self, ray: RayId) -> Cone {
        let mut rays = self.0.clone();
        match rays.binary_search(&ray) {
            Ok(_) => {}
            Err(pos) => rays.insert(pos, ray),
        }
        Cone(rays)
    }

    /// The cone with one ray removed.
    pub fn without_ray(&self, ray: RayId) -> Cone {
        Cone(self.0.iter().copied().filter(|&r| r != ray).collect())
    }

    /// Set difference self \ other, preserving order.
    pub fn minus(&self, other: &Cone) -> Cone {
        Cone(self.0.iter().copied().filter(|&r| !other.contains(r)).collect())
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        Cone(self.0.iter().copied().filter(|&r| other.contains(r)).collect())
    }

    /// All subsets, used for downward closure. Cardinality is small (at most
    /// the ambient dimension), so 2^|I| enumeration is fine.
    pub fn subsets(&self) -> Vec<Cone> {
        let n = self.0.len();
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0u64..(1u64 << n) {
            let rays = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect();
            out.push(Cone(rays));
        }
        out
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Cone {
    /// Renders as a JSON-style index list, e.g. `[]`, `[0,2]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, r) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error from parsing a cone key such as `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid cone key {0:?}: expected a strictly increasing JSON list of ray indices")]
pub struct ConeParseError(pub String);

impl FromStr for Cone {
    type Err = ConeParseError;

    /// Parses the `[0,1]` key form. Indices must be strictly increasing.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rays: Vec<RayId> =
            serde_json::from_str(s).map_err(|_| ConeParseError(s.to_string()))?;
        Cone::from_sorted(rays).ok_or_else(|| ConeParseError(s.to_string()))
    }
}

impl FromIterator<RayId> for Cone {
    fn from_iter<T: IntoIterator<Item = RayId>>(iter: T) -> Self {
        Cone::new(iter.into_iter().collect())
    }
}
