//! Dense linear algebra over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::intmat::IntMatrix;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: QMatrix,
    pub pivots: Vec<usize>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        QMatrix { rows, cols, entries }
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self::from_fn(rows, cols, |i, j| BigRational::from_integer(BigInt::from(data[i * cols + j])))
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| BigRational::from_integer(m[(i, j)].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scaled(&self, k: &BigRational) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e * k).collect() }
    }

    pub fn add(&self, other: &QMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sum");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> Self {
        self.add(&other.scaled(&-BigRational::one()))
    }

    pub fn kronecker(&self, other: &QMatrix) -> QMatrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        QMatrix::from_fn(r, c, |i, j| {
            &self[(i / other.rows, j / other.cols)] * &other[(i % other.rows, j % other.cols)]
        })
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        QMatrix { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows);
        QMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigRational>]) -> QMatrix {
        QMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = BigRational::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self[(i, j)].is_zero() {
                        acc += &self[(i, j)] * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(r, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let Echelon { matrix, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -matrix[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&QMatrix::from_columns(self.rows, &[b.to_vec()]));
        let Echelon { matrix, pivots } = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = matrix[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let Echelon { matrix, pivots } = self.hstack(&QMatrix::identity(n)).echelon();
        if pivots.len() < n || pivots[n.saturating_sub(1)..].iter().any(|&p| p >= n) {
            return None;
        }
        Some(QMatrix::from_fn(n, n, |i, j| matrix[(i, n + j)].clone()))
    }

    /// Coefficients `c_0, ..., c_n` of `det(x I - self)`, ascending.
    pub fn characteristic_polynomial(&self) -> Vec<BigRational> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut m = QMatrix::zeros(n, n);
        for k in 1..=n {
            m = &(self * &m) + &QMatrix::identity(n).scaled(&coeffs[n + 1 - k]);
            let am = self * &m;
            let tr: BigRational = (0..n).map(|i| am[(i, i)].clone()).sum();
            coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
        }
        coeffs
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

pub type SparseVec = BTreeMap<usize, BigRational>;

/// Incremental row echelon basis of sparse vectors, each stored with a
/// leading coefficient of one.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the remainder is zero iff `v` is in the span.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        v.retain(|_, c| !c.is_zero());
        let mut from = 0;
        while let Some((&lead, _)) = v.range(from..).next() {
            match self.rows.get(&lead) {
                Some(row) => {
                    let f = v[&lead].clone();
                    for (k, c) in row {
                        let e = v.entry(*k).or_insert_with(BigRational::zero);
                        *e -= c * &f;
                        if e.is_zero() {
                            v.remove(k);
                        }
                    }
                }
                None => from = lead + 1,
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((&lead, c)) = r.iter().next() else { return false };
        let inv = c.recip();
        let row = r.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        self.rows.insert(lead, row);
        true
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}

pub fn sparse_rank(vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = SparseEchelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

impl Index<(usize, usize)> for QMatrix {
    type Output = BigRational;

    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;

    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    if !rhs[(k, j)].is_zero() {
                        out[(i, j)] += a * &rhs[(k, j)];
                    }
                }
            }
        }
        out
    }
}

impl std::ops::Add for &QMatrix {
    type Output = QMatrix;

    fn add(self, rhs: &QMatrix) -> QMatrix {
        QMatrix::add(self, rhs)
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn rank_and_kernel() {
        let m = QMatrix::from_i64(2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(m.rank(), 1);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert!(m.apply(&v).iter().all(Zero::is_zero));
        }
    }

    proptest::proptest! {
        #[test]
        fn sparse_rank_matches_dense(rows in 1usize..6, cols in 1usize..6, data in proptest::collection::vec(-2i64..=2, 36)) {
            let m = QMatrix::from_i64(rows, cols, &data[..rows * cols]);
            let vecs = (0..rows).map(|i| {
                (0..cols).filter(|&j| !m[(i, j)].is_zero()).map(|j| (j, m[(i, j)].clone())).collect::<SparseVec>()
            });
            proptest::prop_assert_eq!(sparse_rank(vecs), m.rank());
        }
    }

    #[test]
    fn sparse_membership() {
        let mut e = SparseEchelon::new();
        assert!(e.insert([(0, q(1)), (2, q(1))].into_iter().collect()));
        assert!(e.insert([(1, q(2)), (2, q(-1))].into_iter().collect()));
        assert!(e.contains([(0, q(2)), (1, q(2)), (2, q(1))].into_iter().collect()));
        assert!(!e.contains([(2, q(1))].into_iter().collect()));
        assert!(!e.insert(SparseVec::new()));
    }

    #[test]
    fn solve_and_inverse() {
        let m = QMatrix::from_i64(2, 2, &[2, 1, 1, 1]);
        assert_eq!(m.solve(&[q(3), q(2)]), Some(vec![q(1), q(1)]));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, QMatrix::identity(2));
        let singular = QMatrix::from_i64(2, 2, &[1, 2, 2, 4]);
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&[q(1), q(0)]).is_none());
    }

    #[test]
    fn characteristic_polynomial_of_companion() {
        // companion of x^2 - 3x + 2
        let m = QMatrix::from_i64(2, 2, &[0, -2, 1, 3]);
        assert_eq!(m.characteristic_polynomial(), vec![q(2), q(-3), q(1)]);
        assert_eq!(QMatrix::zeros(0, 0).characteristic_polynomial(), vec![q(1)]);
    }
}
