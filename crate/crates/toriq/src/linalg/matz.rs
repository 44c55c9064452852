use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matq::MatQ;
use super::{xgcd, Int, LinalgError, Rat};

/// Dense row-major matrix over the integers, arbitrary precision.
#[derive(Clone, PartialEq, Eq)]
pub struct MatZ {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

/// Smith normal form `s` of a matrix together with the unimodular
/// transforms that produce it: `u * a * v = s`.
pub struct Snf {
    pub s: MatZ,
    pub u: MatZ,
    pub v: MatZ,
}

impl MatZ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatZ { rows, cols, entries: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Int>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        MatZ { rows, cols, entries }
    }

    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&v| Int::from(v)));
        }
        MatZ { rows: r, cols: c, entries }
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_cols(dim: usize, cols: &[Vec<Int>]) -> Self {
        let mut m = Self::zeros(dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), dim, "column of wrong length");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_matq(&self) -> MatQ {
        let entries = self.entries.iter().map(|v| Rat::from_integer(v.clone())).collect();
        MatQ::from_entries(self.rows, self.cols, entries)
    }

    pub fn det(&self) -> Int {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let d = self.to_matq().det();
        debug_assert!(d.is_integer());
        d.to_integer()
    }

    /// Inverse of a matrix with determinant ±1. The inverse of such a matrix
    /// is again integral, so the rational inverse is converted back.
    pub fn inverse_unimodular(&self) -> Result<MatZ, LinalgError> {
        let inv = self.to_matq().inverse()?;
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for e in inv.entries() {
            if !e.is_integer() {
                return Err(LinalgError::Singular);
            }
            entries.push(e.to_integer());
        }
        Ok(MatZ::from_entries(self.rows, self.cols, entries))
    }

    /// Row-style Hermite normal form. Returns `(h, u)` with `u * self = h`,
    /// `u` unimodular, pivots positive and strictly right-stepping, and every
    /// entry above a pivot reduced into `[0, pivot)`.
    pub fn hnf(&self) -> (MatZ, MatZ) {
        let mut h = self.clone();
        let mut u = MatZ::identity(self.rows);
        let mut r = 0;
        for col in 0..h.cols {
            if r == h.rows {
                break;
            }
            let Some(p) = (r..h.rows).find(|&i| !h[(i, col)].is_zero()) else {
                continue;
            };
            h.swap_rows(p, r);
            u.swap_rows(p, r);
            for i in r + 1..h.rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let a = h[(r, col)].clone();
                let b = h[(i, col)].clone();
                if (&b % &a).is_zero() {
                    let q = &b / &a;
                    h.sub_scaled_row(i, r, &q);
                    u.sub_scaled_row(i, r, &q);
                } else {
                    // Replace rows (r, i) by an unimodular combination that
                    // leaves gcd(a, b) in position (r, col) and 0 below it.
                    let (g, x, y) = xgcd(&a, &b);
                    let (c, d) = (-(&b / &g), &a / &g);
                    h.combine_rows(r, i, &x, &y, &c, &d);
                    u.combine_rows(r, i, &x, &y, &c, &d);
                }
            }
            if h[(r, col)].is_negative() {
                h.negate_row(r);
                u.negate_row(r);
            }
            let pivot = h[(r, col)].clone();
            for i in 0..r {
                let q = h[(i, col)].div_floor(&pivot);
                if !q.is_zero() {
                    h.sub_scaled_row(i, r, &q);
                    u.sub_scaled_row(i, r, &q);
                }
            }
            r += 1;
        }
        (h, u)
    }

    /// Smith normal form with transforms: `u * self * v = s`, diagonal
    /// nonnegative with each entry dividing the next.
    pub fn snf(&self) -> Snf {
        let mut s = self.clone();
        let mut u = MatZ::identity(self.rows);
        let mut v = MatZ::identity(self.cols);
        let n = self.rows.min(self.cols);
        let mut t = 0;
        while t < n {
            // Move some nonzero entry of the remaining block to (t, t).
            let Some((pi, pj)) = s.find_nonzero_from(t) else {
                break;
            };
            s.swap_rows(pi, t);
            u.swap_rows(pi, t);
            s.swap_cols(pj, t);
            v.swap_cols(pj, t);
            loop {
                let mut dirty = false;
                for i in t + 1..s.rows {
                    if s[(i, t)].is_zero() {
                        continue;
                    }
                    dirty = true;
                    let a = s[(t, t)].clone();
                    let b = s[(i, t)].clone();
                    if (&b % &a).is_zero() {
                        let q = &b / &a;
                        s.sub_scaled_row(i, t, &q);
                        u.sub_scaled_row(i, t, &q);
                    } else {
                        let (g, x, y) = xgcd(&a, &b);
                        let (c, d) = (-(&b / &g), &a / &g);
                        s.combine_rows(t, i, &x, &y, &c, &d);
                        u.combine_rows(t, i, &x, &y, &c, &d);
                    }
                }
                for j in t + 1..s.cols {
                    if s[(t, j)].is_zero() {
                        continue;
                    }
                    dirty = true;
                    let a = s[(t, t)].clone();
                    let b = s[(t, j)].clone();
                    if (&b % &a).is_zero() {
                        let q = &b / &a;
                        s.sub_scaled_col(j, t, &q);
                        v.sub_scaled_col(j, t, &q);
                    } else {
                        let (g, x, y) = xgcd(&a, &b);
                        let (c, d) = (-(&b / &g), &a / &g);
                        s.combine_cols(t, j, &x, &y, &c, &d);
                        v.combine_cols(t, j, &x, &y, &c, &d);
                    }
                }
                if !dirty {
                    break;
                }
            }
            // Repair the divisibility chain: if the pivot misses a factor of
            // some later entry, fold that row in and redo the block.
            let pivot = s[(t, t)].clone();
            let offender = (t + 1..s.rows)
                .flat_map(|i| (t + 1..s.cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&s[(i, j)] % &pivot).is_zero());
            if let Some((i, _)) = offender {
                let one = Int::one();
                s.add_scaled_row(t, i, &one);
                u.add_scaled_row(t, i, &one);
                continue;
            }
            if s[(t, t)].is_negative() {
                s.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        Snf { s, u, v }
    }

    fn find_nonzero_from(&self, t: usize) -> Option<(usize, usize)> {
        for i in t..self.rows {
            for j in t..self.cols {
                if !self[(i, j)].is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            let v = -self.entries[idx].clone();
            self.entries[idx] = v;
        }
    }

    /// row r -= q * row src
    fn sub_scaled_row(&mut self, r: usize, src: usize, q: &Int) {
        for j in 0..self.cols {
            let v = &self.entries[src * self.cols + j] * q;
            self.entries[r * self.cols + j] -= v;
        }
    }

    /// row r += q * row src
    fn add_scaled_row(&mut self, r: usize, src: usize, q: &Int) {
        for j in 0..self.cols {
            let v = &self.entries[src * self.cols + j] * q;
            self.entries[r * self.cols + j] += v;
        }
    }

    /// col c -= q * col src
    fn sub_scaled_col(&mut self, c: usize, src: usize, q: &Int) {
        for i in 0..self.rows {
            let v = &self.entries[i * self.cols + src] * q;
            self.entries[i * self.cols + c] -= v;
        }
    }

    /// Replaces rows (a, b) by (x*a + y*b, c*a + d*b); the caller guarantees
    /// x*d - y*c = ±1 so the operation is unimodular.
    fn combine_rows(&mut self, a: usize, b: usize, x: &Int, y: &Int, c: &Int, d: &Int) {
        for j in 0..self.cols {
            let va = self.entries[a * self.cols + j].clone();
            let vb = self.entries[b * self.cols + j].clone();
            self.entries[a * self.cols + j] = x * &va + y * &vb;
            self.entries[b * self.cols + j] = c * &va + d * &vb;
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, x: &Int, y: &Int, c: &Int, d: &Int) {
        for i in 0..self.rows {
            let va = self.entries[i * self.cols + a].clone();
            let vb = self.entries[i * self.cols + b].clone();
            self.entries[i * self.cols + a] = x * &va + y * &vb;
            self.entries[i * self.cols + b] = c * &va + d * &vb;
        }
    }
}

impl std::ops::Index<(usize, usize)> for MatZ {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatZ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &MatZ {
    type Output = MatZ;
    fn mul(self, rhs: &MatZ) -> MatZ {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = MatZ::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a * &rhs[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }
}

impl fmt::Debug for MatZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatZ {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}


#[cfg(test)]
mod prop_tests {
    use num_traits::{Signed, Zero};
    use proptest::prelude::*;

    use super::*;
    use crate::linalg::int;

    fn small_matz() -> impl Strategy<Value = MatZ> {
        (0usize..=4, 0usize..=4).prop_flat_map(|(rows, cols)| {
            proptest::collection::vec(-9i64..=9, rows * cols).prop_map(move |raw| {
                MatZ::from_entries(rows, cols, raw.into_iter().map(Int::from).collect())
            })
        })
    }

    fn is_unimodular(m: &MatZ) -> bool {
        m.is_square() && m.det().abs() == int(1)
    }

    /// Row echelon with positive pivots, entries above each pivot reduced
    /// into [0, pivot), and zero rows at the bottom.
    fn assert_hnf_form(h: &MatZ) {
        let mut prev_col: Option<usize> = None;
        let mut seen_zero_row = false;
        for r in 0..h.rows() {
            let pivot_col = (0..h.cols()).find(|&c| !h[(r, c)].is_zero());
            match pivot_col {
                None => seen_zero_row = true,
                Some(c) => {
                    assert!(!seen_zero_row, "nonzero row below a zero row");
                    assert!(prev_col.is_none_or(|p| c > p), "pivots must move right");
                    assert!(h[(r, c)].is_positive(), "pivot must be positive");
                    for above in 0..r {
                        assert!(
                            !h[(above, c)].is_negative() && h[(above, c)] < h[(r, c)],
                            "entry above pivot must lie in [0, pivot)"
                        );
                    }
                    prev_col = Some(c);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn hnf_reconstructs_through_a_unimodular_transform(m in small_matz()) {
            let (h, u) = m.hnf();
            prop_assert!(is_unimodular(&u));
            prop_assert_eq!(&u * &m, h.clone());
            assert_hnf_form(&h);
        }

        #[test]
        fn snf_diagonal_is_a_divisibility_chain(m in small_matz()) {
            let snf = m.snf();
            prop_assert!(is_unimodular(&snf.u));
            prop_assert!(is_unimodular(&snf.v));
            prop_assert_eq!(&(&snf.u * &m) * &snf.v, snf.s.clone());
            let k = snf.s.rows().min(snf.s.cols());
            for r in 0..snf.s.rows() {
                for c in 0..snf.s.cols() {
                    if r != c {
                        prop_assert!(snf.s[(r, c)].is_zero());
                    }
                }
            }
            for i in 0..k {
                prop_assert!(!snf.s[(i, i)].is_negative());
                if i + 1 < k && !snf.s[(i, i)].is_zero() {
                    prop_assert!((&snf.s[(i + 1, i + 1)] % &snf.s[(i, i)]).is_zero());
                }
            }
            // zero entries only after the last nonzero one
            let mut seen_zero = false;
            for i in 0..k {
                if snf.s[(i, i)].is_zero() {
                    seen_zero = true;
                } else {
                    prop_assert!(!seen_zero);
                }
            }
        }

        #[test]
        fn unimodular_inverse_round_trips(m in small_matz()) {
            if is_unimodular(&m) {
                let inv = m.inverse_unimodular().unwrap();
                prop_assert_eq!(&m * &inv, MatZ::identity(m.rows()));
                prop_assert_eq!(&inv * &m, MatZ::identity(m.rows()));
            }
        }
    }
}
