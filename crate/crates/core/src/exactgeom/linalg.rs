//! Dense exact rational linear algebra: rank, kernel, solving, determinants.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rational = BigRational;
pub type QVector = Vec<Rational>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

pub fn zero_vec(len: usize) -> QVector {
    vec![Rational::zero(); len]
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Int::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Scale a rational vector to a primitive integer vector: common denominator
/// cleared, divided by the gcd of the entries. The zero vector maps to zeros.
/// The direction (sign) is preserved.
pub fn to_primitive(v: &[Rational]) -> Vec<Int> {
    let mut denom_lcm = Int::one();
    for x in v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let mut ints: Vec<Int> = v
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    make_primitive(&mut ints);
    ints
}

/// Divide an integer vector by the gcd of its entries (no sign change).
pub fn make_primitive(v: &mut [Int]) {
    let mut g = Int::zero();
    for x in v.iter() {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in v.iter_mut() {
        *x = &*x / &g;
    }
}

pub fn int_vec_to_rational(v: &[Int]) -> QVector {
    v.iter()
        .map(|x| Rational::from_integer(x.clone()))
        .collect()
}

/// Lexicographic comparison of integer vectors entry by entry.
pub fn lex_cmp_int(a: &[Int], b: &[Int]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            ord => return ord,
        }
    }
    a.len().cmp(&b.len())
}

pub fn lex_cmp(a: &[Rational], b: &[Rational]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            ord => return ord,
        }
    }
    a.len().cmp(&b.len())
}

/// Dense rational matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<QVector>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "row length {} differs from {}",
                    r.len(),
                    ncols
                )));
            }
            data.extend(r);
        }
        Ok(QMatrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| rat_int(x)))
            .collect();
        QMatrix {
            rows: rows.len(),
            cols: rows.first().map_or(0, Vec::len),
            data,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> QVector {
        self.row(i).to_vec()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn select_rows(&self, idx: &[usize]) -> QMatrix {
        let data = idx
            .iter()
            .flat_map(|&i| self.row(i).iter().cloned())
            .collect();
        QMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelonize().len()
    }

    /// In-place forward elimination; returns the pivot columns.
    fn echelonize(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in (r + 1)..self.rows {
                if !self.get(i, c).is_zero() {
                    let f = self.get(i, c) / self.get(r, c);
                    for j in c..self.cols {
                        let v = self.get(i, j) - &f * self.get(r, j);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form; returns pivot columns. Rows of zeros are dropped.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.echelonize();
        // back substitution
        for (r, &c) in pivots.iter().enumerate().rev() {
            let inv = self::Rational::one() / m.get(r, c);
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..r {
                if !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j) - &f * m.get(r, j);
                        m.set(i, j, v);
                    }
                }
            }
        }
        let rank = pivots.len();
        m.rows = rank;
        m.data.truncate(rank * m.cols);
        (m, pivots)
    }

    /// Basis of the right kernel {x : M x = 0}, in the standard free-column
    /// parametrization of the RREF. Deterministic.
    pub fn kernel_basis(&self) -> Vec<QVector> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let piv_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if piv_set.contains(&free) {
                continue;
            }
            let mut v = zero_vec(self.cols);
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve M x = b. Returns a particular solution (free variables zero),
    /// or None if the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<QVector> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::new(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the rhs column
        }
        let mut x = zero_vec(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    /// Determinant of a square matrix by fraction-free elimination on the
    /// rational entries.
    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det *= m.get(c, c);
            for i in (c + 1)..m.rows {
                if !m.get(i, c).is_zero() {
                    let f = m.get(i, c) / m.get(c, c);
                    for j in c..m.cols {
                        let v = m.get(i, j) - &f * m.get(c, j);
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }
}

/// Affine dimension of a point set (rows of `points`).
pub fn affine_dim(points: &QMatrix) -> usize {
    if points.nrows() <= 1 {
        return 0;
    }
    let mut diffs = QMatrix::new(points.nrows() - 1, points.ncols());
    for i in 1..points.nrows() {
        for j in 0..points.ncols() {
            diffs.set(i - 1, j, points.get(i, j) - points.get(0, j));
        }
    }
    diffs.rank()
}

/// Affine dimension of a subset of the rows.
pub fn affine_dim_of(points: &QMatrix, idx: &[usize]) -> usize {
    affine_dim(&points.select_rows(idx))
}
