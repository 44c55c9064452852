use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{Int, LinalgError, Rat};

/// Dense row-major matrix over the rationals. Exact everywhere.
#[derive(Clone, PartialEq, Eq)]
pub struct MatQ {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

/// Exact kernel of a matrix: its dimension and a basis of column vectors.
pub struct Nullspace {
    pub dim: usize,
    pub basis: Vec<MatQ>,
}

impl MatQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatQ { rows, cols, entries: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rat>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        MatQ { rows, cols, entries }
    }

    /// Convenience constructor from i64 rows, mostly for tests.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&v| Rat::from_integer(Int::from(v))));
        }
        MatQ { rows: r, cols: c, entries }
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

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> MatQ {
        let mut t = MatQ::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn col(&self, j: usize) -> MatQ {
        let entries = (0..self.rows).map(|i| self[(i, j)].clone()).collect();
        MatQ { rows: self.rows, cols: 1, entries }
    }

    /// Gauss-Jordan inverse. Pivot selection takes the first nonzero entry in
    /// the column; over exact rationals there is nothing to gain from
    /// magnitude pivoting.
    pub fn inverse(&self) -> Result<MatQ, LinalgError> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = MatQ::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !work[(r, col)].is_zero())
                .ok_or(LinalgError::Singular)?;
            if pivot != col {
                work.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = work[(col, col)].clone();
            work.scale_row(col, &p.recip());
            inv.scale_row(col, &p.recip());
            for r in 0..n {
                if r != col && !work[(r, col)].is_zero() {
                    let f = work[(r, col)].clone();
                    work.sub_scaled_row(r, col, &f);
                    inv.sub_scaled_row(r, col, &f);
                }
            }
        }
        Ok(inv)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(p, row);
            let lead = self[(row, col)].clone();
            self.scale_row(row, &lead.recip());
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let f = self[(r, col)].clone();
                    self.sub_scaled_row(r, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Exact kernel basis. For each non-pivot column f the basis holds the
    /// vector with 1 at f and minus the reduced coefficients at the pivots.
    pub fn nullspace(&self) -> Nullspace {
        let mut work = self.clone();
        let pivots = work.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = MatQ::zeros(self.cols, 1);
            v[(f, 0)] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[(p, 0)] = -work[(r, f)].clone();
            }
            basis.push(v);
        }
        Nullspace { dim: free.len(), basis }
    }

    /// Determinant by elimination; sign tracked through row swaps.
    pub fn det(&self) -> Rat {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut work = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !work[(r, col)].is_zero()) else {
                return Rat::zero();
            };
            if p != col {
                work.swap_rows(p, col);
                det = -det;
            }
            let lead = work[(col, col)].clone();
            det *= lead.clone();
            for r in col + 1..n {
                if !work[(r, col)].is_zero() {
                    let f = &work[(r, col)] / &lead;
                    work.sub_scaled_row(r, col, &f);
                }
            }
        }
        det
    }

    /// Integer power; negative exponents go through the exact inverse.
    pub fn pow(&self, e: &Int) -> Result<MatQ, LinalgError> {
        assert!(self.is_square(), "power of a non-square matrix");
        let base = if e.is_negative() { self.inverse()? } else { self.clone() };
        let mut result = MatQ::identity(self.rows);
        let mut sq = base;
        let mut k = e.abs();
        let two = Int::from(2);
        while !k.is_zero() {
            if num_integer::Integer::is_odd(&k) {
                result = &result * &sq;
            }
            k /= &two;
            if !k.is_zero() {
                sq = &sq * &sq;
            }
        }
        Ok(result)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, f: &Rat) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            if !self.entries[idx].is_zero() {
                self.entries[idx] *= f.clone();
            }
        }
    }

    /// row r -= f * row src
    fn sub_scaled_row(&mut self, r: usize, src: usize, f: &Rat) {
        for j in 0..self.cols {
            let v = &self.entries[src * self.cols + j] * f;
            self.entries[r * self.cols + j] -= v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for MatQ {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatQ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &MatQ {
    type Output = MatQ;
    fn mul(self, rhs: &MatQ) -> MatQ {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = MatQ::zeros(self.rows, rhs.cols);
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

impl Add for &MatQ {
    type Output = MatQ;
    fn add(self, rhs: &MatQ) -> MatQ {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch in sum");
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        MatQ { rows: self.rows, cols: self.cols, entries }
    }
}

impl Sub for &MatQ {
    type Output = MatQ;
    fn sub(self, rhs: &MatQ) -> MatQ {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch in difference");
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect();
        MatQ { rows: self.rows, cols: self.cols, entries }
    }
}

impl Neg for &MatQ {
    type Output = MatQ;
    fn neg(self) -> MatQ {
        let entries = self.entries.iter().map(|a| -a.clone()).collect();
        MatQ { rows: self.rows, cols: self.cols, entries }
    }
}

impl fmt::Debug for MatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatQ {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", super::rat_to_string(&self[(i, j)]))?;
            }
        }
        write!(f, "]")
    }
}


#[cfg(test)]
mod prop_tests {
    use num_traits::Zero;
    use proptest::prelude::*;

    use super::*;
    use crate::linalg::rat;

    fn small_matq() -> impl Strategy<Value = MatQ> {
        (0usize..=4, 0usize..=4).prop_flat_map(|(rows, cols)| {
            proptest::collection::vec((-9i64..=9, 1i64..=4), rows * cols).prop_map(
                move |raw| {
                    let entries = raw.into_iter().map(|(n, d)| rat(n, d)).collect();
                    MatQ::from_entries(rows, cols, entries)
                },
            )
        })
    }

    fn small_square() -> impl Strategy<Value = MatQ> {
        (0usize..=4).prop_flat_map(|n| {
            proptest::collection::vec((-9i64..=9, 1i64..=4), n * n).prop_map(move |raw| {
                let entries = raw.into_iter().map(|(num, den)| rat(num, den)).collect();
                MatQ::from_entries(n, n, entries)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_and_nullity_split_the_columns(m in small_matq()) {
            let null = m.nullspace();
            prop_assert_eq!(m.rank() + null.dim, m.cols());
            prop_assert_eq!(null.basis.len(), null.dim);
            for vec in &null.basis {
                prop_assert_eq!(vec.rows(), m.cols());
                prop_assert_eq!(vec.cols(), 1);
                prop_assert!((&m * vec).is_zero());
                prop_assert!(!vec.is_zero());
            }
        }

        #[test]
        fn inverse_exists_exactly_for_nonzero_determinant(m in small_square()) {
            match m.inverse() {
                Ok(inv) => {
                    prop_assert!(!m.det().is_zero());
                    prop_assert_eq!(&m * &inv, MatQ::identity(m.rows()));
                    prop_assert_eq!(&inv * &m, MatQ::identity(m.rows()));
                }
                Err(LinalgError::Singular) => prop_assert!(m.det().is_zero()),
                Err(other) => prop_assert!(false, "unexpected error {other:?}"),
            }
        }

        #[test]
        fn powers_multiply_out(m in small_square()) {
            prop_assert_eq!(m.pow(&Int::zero()).unwrap(), MatQ::identity(m.rows()));
            prop_assert_eq!(m.pow(&Int::from(3)).unwrap(), &(&m * &m) * &m);
            if let Ok(inv) = m.inverse() {
                prop_assert_eq!(m.pow(&Int::from(-2)).unwrap(), &inv * &inv);
            }
        }

        #[test]
        fn transpose_is_an_involution(m in small_matq()) {
            prop_assert_eq!(m.transpose().transpose(), m.clone());
            prop_assert_eq!(m.transpose().rank(), m.rank());
        }
    }
}
