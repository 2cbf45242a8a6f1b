use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

pub type IntegerVector = Vec<BigInt>;
pub type RationalVector = Vec<BigRational>;

/// Dense row-major matrix over an exact ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntegerMatrix = Matrix<BigInt>;
pub type RationalMatrix = Matrix<BigRational>;

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        Matrix { rows, cols, data }
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

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> impl Iterator<Item = &[T]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix { rows: rows.len(), cols, data: rows.iter().flatten().cloned().collect() }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(len: usize, columns: &[Vec<T>]) -> Self {
        let mut data = Vec::with_capacity(len * columns.len());
        for i in 0..len {
            for c in columns {
                data.push(c[i].clone());
            }
        }
        Matrix { rows: len, cols: columns.len(), data }
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.row_vecs().map(<[T]>::to_vec).collect()
    }

    /// Sub-block `[r0, r1) x [c0, c1)`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            data.extend_from_slice(&self.row(i)[c0..c1]);
        }
        Matrix { rows: r1 - r0, cols: c1 - c0, data }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.rows, cols: cols.len(), data }
    }

    pub fn stack(&self, below: &Self) -> Self {
        assert_eq!(self.cols, below.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Matrix { rows: self.rows + below.rows, cols: self.cols, data }
    }
}

impl<T: Clone + Num> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        self.row_vecs().map(|row| dot(row, v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "dimension mismatch in vector-matrix product");
        let mut out = vec![T::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = o.clone() + vi.clone() * self[(i, j)].clone();
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|e| e.clone() * s.clone())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Elementary row operation `row[dst] += factor * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &T) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self[(src, j)].clone();
            if !v.is_zero() {
                self[(dst, j)] = self[(dst, j)].clone() + factor.clone() * v;
            }
        }
    }

    /// Elementary column operation `col[dst] += factor * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &T) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self[(i, src)].clone();
            if !v.is_zero() {
                self[(i, dst)] = self[(i, dst)].clone() + factor.clone() * v;
            }
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = T::zero() - self[(i, j)].clone();
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

pub fn dot<T: Clone + Num>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            acc + x.clone() * y.clone()
        }
    })
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
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
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntegerMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        if rows.is_empty() {
            return Matrix::zeros(0, 0);
        }
        Matrix::from_rows(&rows)
    }

    pub fn to_rational(&self) -> RationalMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    pub fn determinant(&self) -> BigInt {
        let d = self.to_rational().determinant();
        debug_assert!(d.is_integer());
        d.to_integer()
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    /// Inverse of a unimodular matrix, `None` when the inverse is not integral.
    pub fn inverse(&self) -> Option<IntegerMatrix> {
        let inv = self.to_rational().inverse()?;
        to_integer_matrix(&inv)
    }
}

impl RationalMatrix {
    /// Exact determinant by fraction-tracking elimination.
    pub fn determinant(&self) -> BigRational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for r in c + 1..n {
                if !m[(r, c)].is_zero() {
                    let f = -(m[(r, c)].clone() / &pivot);
                    m.add_row_multiple(r, c, &f);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RationalMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = RationalMatrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !m[(r, c)].is_zero())?;
            m.swap_rows(p, c);
            inv.swap_rows(p, c);
            let scale = m[(c, c)].recip();
            for j in 0..n {
                m[(c, j)] = m[(c, j)].clone() * &scale;
                inv[(c, j)] = inv[(c, j)].clone() * &scale;
            }
            for r in 0..n {
                if r != c && !m[(r, c)].is_zero() {
                    let f = -m[(r, c)].clone();
                    m.add_row_multiple(r, c, &f);
                    inv.add_row_multiple(r, c, &f);
                }
            }
        }
        Some(inv)
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(BigRational::is_integer)
    }
}

pub fn to_integer_matrix(m: &RationalMatrix) -> Option<IntegerMatrix> {
    m.is_integral().then(|| m.map(BigRational::to_integer))
}

pub fn to_rational_vector(v: &[BigInt]) -> RationalVector {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

pub fn to_integer_vector(v: &[BigRational]) -> Option<IntegerVector> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

pub fn int_vec(v: &[i64]) -> IntegerVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(numer.into(), denom.into())
}

pub fn rat_vec(v: &[(i64, i64)]) -> RationalVector {
    v.iter().map(|&(p, q)| rat(p, q)).collect()
}

/// Least common multiple of the denominators of a collection of rationals.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Representative of `x` modulo 1 in `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = IntegerMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let b = IntegerMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), IntegerMatrix::from_i64(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), IntegerMatrix::from_i64(&[&[1, 3], &[2, 4]]));
        assert_eq!(a.determinant(), BigInt::from(-2));
    }

    #[test]
    fn unimodular_inverse_is_integral() {
        let a = IntegerMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(IntegerMatrix::from_i64(&[&[2, 0], &[0, 1]]).inverse().is_none());
    }

    #[test]
    fn frac_reduces_into_unit_interval() {
        assert_eq!(frac(&rat(-1, 2)), rat(1, 2));
        assert_eq!(frac(&rat(7, 3)), rat(1, 3));
        assert_eq!(frac(&rat(2, 1)), rat(0, 1));
    }
}
