use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::IntPolynomial;
use super::ratfunc::RationalFunction;
use crate::error::{Error, Result};

/// Integral domain that fraction-free elimination runs over.
pub trait RingElem: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Quotient of an exact division. Panics if the division leaves a
    /// remainder, which would mean an elimination invariant was broken.
    fn div_exact(&self, other: &Self) -> Self;
    fn gcd(&self, other: &Self) -> Self;

    fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(other);
        self.div_exact(&g).mul(other)
    }
}

impl RingElem for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div_exact(&self, other: &Self) -> Self {
        let (q, r) = self.div_rem(other);
        assert!(Zero::is_zero(&r), "inexact integer division");
        q
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
}

impl RingElem for IntPolynomial {
    fn zero() -> Self {
        IntPolynomial::zero()
    }
    fn one() -> Self {
        IntPolynomial::one()
    }
    fn is_zero(&self) -> bool {
        IntPolynomial::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        IntPolynomial::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        IntPolynomial::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        IntPolynomial::mul(self, other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        IntPolynomial::div_exact(self, other).expect("inexact polynomial division")
    }
    fn gcd(&self, other: &Self) -> Self {
        self.gcd_z(other)
    }
}

/// Field of fractions over a [`RingElem`]: the entry type of [`ExactMatrix`].
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    type Ring: RingElem;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, other: &Self) -> Result<Self>;
    /// `(numerator, denominator)` over the ring.
    fn split(&self) -> (Self::Ring, Self::Ring);
    fn from_ratio(numer: &Self::Ring, denom: &Self::Ring) -> Self;
}

impl Field for BigRational {
    type Ring = BigInt;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, other: &Self) -> Result<Self> {
        if Zero::is_zero(other) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self / other)
        }
    }
    fn split(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }
    fn from_ratio(numer: &BigInt, denom: &BigInt) -> Self {
        BigRational::new(numer.clone(), denom.clone())
    }
}

impl Field for RationalFunction {
    type Ring = IntPolynomial;

    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RationalFunction::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RationalFunction::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RationalFunction::mul(self, other)
    }
    fn neg(&self) -> Self {
        RationalFunction::neg(self)
    }
    fn div(&self, other: &Self) -> Result<Self> {
        RationalFunction::div(self, other)
    }
    fn split(&self) -> (IntPolynomial, IntPolynomial) {
        (self.numer().clone(), self.denom().clone())
    }
    fn from_ratio(numer: &IntPolynomial, denom: &IntPolynomial) -> Self {
        RationalFunction::new(numer.clone(), denom.clone()).expect("nonzero denominator")
    }
}

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct ExactMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> ExactMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::SizeMismatch("ragged rows".into()));
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> ExactMatrix<U> {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<ExactMatrix<U>> {
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::SizeMismatch("matrix-vector product".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect())
    }

    fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    /// Reduced row echelon form over the field, with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = T::one().div(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Solve `self * X = rhs` for square invertible `self` by fraction-free
    /// (Bareiss) elimination over the underlying ring.
    ///
    /// Each row of `[self | rhs]` is first scaled by the lcm of its
    /// denominators, so all intermediate values stay in the ring and every
    /// division performed is exact.
    pub fn exact_solve(&self, rhs: &Self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::SizeMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if rhs.rows != self.rows {
            return Err(Error::SizeMismatch("right-hand side rows".into()));
        }
        let n = self.rows;
        let m = rhs.cols;
        let width = n + m;
        let mut aug: Vec<Vec<T::Ring>> = (0..n)
            .map(|i| {
                let fracs: Vec<(T::Ring, T::Ring)> = self
                    .row(i)
                    .iter()
                    .chain(rhs.row(i))
                    .map(Field::split)
                    .collect();
                let l = fracs
                    .iter()
                    .fold(<T::Ring as RingElem>::one(), |acc, (_, d)| acc.lcm(d));
                fracs
                    .into_iter()
                    .map(|(num, den)| num.mul(&l.div_exact(&den)))
                    .collect()
            })
            .collect();

        let mut prev = <T::Ring as RingElem>::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !aug[i][k].is_zero()) else {
                return Err(Error::Singular {
                    rank: self.rank(),
                    size: n,
                });
            };
            aug.swap(k, p);
            let (head, tail) = aug.split_at_mut(k + 1);
            let pivot_row = &head[k];
            let pivot = &pivot_row[k];
            for row in tail.iter_mut() {
                let lead = row[k].clone();
                for j in k + 1..width {
                    let v = pivot.mul(&row[j]);
                    let v = if lead.is_zero() || pivot_row[j].is_zero() {
                        v
                    } else {
                        v.sub(&lead.mul(&pivot_row[j]))
                    };
                    row[j] = v.div_exact(&prev);
                }
                row[k] = <T::Ring as RingElem>::zero();
            }
            prev = pivot.clone();
        }
        let det = prev;

        // U y = det * c, solved column by column; y is integral.
        let mut out = Self::zeros(n, m);
        for c in 0..m {
            let mut y: Vec<T::Ring> = vec![<T::Ring as RingElem>::zero(); n];
            for i in (0..n).rev() {
                let mut acc = det.mul(&aug[i][n + c]);
                for j in i + 1..n {
                    if !aug[i][j].is_zero() && !y[j].is_zero() {
                        acc = acc.sub(&aug[i][j].mul(&y[j]));
                    }
                }
                y[i] = acc.div_exact(&aug[i][i]);
            }
            for (i, yi) in y.iter().enumerate() {
                out.set(i, c, T::from_ratio(yi, &det));
            }
        }
        Ok(out)
    }

    /// Exact inverse by fraction-free elimination.
    pub fn exact_inverse(&self) -> Result<Self> {
        self.exact_solve(&Self::identity(self.rows))
    }

    /// Inverse by plain Gauss-Jordan elimination over the field.
    ///
    /// Slower than [`exact_inverse`](Self::exact_inverse) on polynomial
    /// entries; kept as an independent reference path.
    pub fn inverse_naive(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::SizeMismatch("non-square".into()));
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular {
                rank: self.rank(),
                size: n,
            });
        }
        Ok(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Rank factorization `self = C * F` with `C` the pivot columns and `F`
    /// the nonzero rows of the reduced echelon form.
    pub fn rank_factorization(&self) -> (Self, Self) {
        let (r, pivots) = self.rref();
        let rank = pivots.len();
        let f = r.select_rows(&(0..rank).collect::<Vec<_>>());
        let c = self.select_cols(&pivots);
        (c, f)
    }

    fn pseudo_inverse_unchecked(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zeros(self.cols, self.rows));
        }
        let (c, f) = self.rank_factorization();
        let ft = f.transpose();
        let ct = c.transpose();
        let ffti = f.mul(&ft)?.exact_inverse()?;
        let ctci = ct.mul(&c)?.exact_inverse()?;
        ft.mul(&ffti)?.mul(&ctci)?.mul(&ct)
    }

    /// Checks the four Penrose identities exactly.
    pub fn is_pseudo_inverse_of(&self, m: &Self) -> Result<bool> {
        let mw = m.mul(self)?;
        let wm = self.mul(m)?;
        Ok(mw.mul(m)? == *m
            && wm.mul(self)? == *self
            && mw.transpose() == mw
            && wm.transpose() == wm)
    }

    /// Group (Drazin index-1) inverse: the unique `W` with `MWM = M`,
    /// `WMW = W` and `MW = WM`. Exists when `rank(M^2) = rank(M)`.
    ///
    /// Computed as `C (F C)^-2 F` from the rank factorization.
    pub fn group_inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::SizeMismatch("group inverse needs a square matrix".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let (c, f) = self.rank_factorization();
        let fc_inv = f.mul(&c)?.exact_inverse()?;
        let w = c.mul(&fc_inv)?.mul(&fc_inv)?.mul(&f)?;
        let mw = self.mul(&w)?;
        if mw.mul(self)? != *self || w.mul(self)?.mul(&w)? != w || mw != w.mul(self)? {
            return Err(Error::Singular {
                rank: c.cols,
                size: self.rows,
            });
        }
        Ok(w)
    }
}

impl ExactMatrix<BigRational> {
    /// Moore-Penrose pseudo-inverse of a symmetric rational matrix, from an
    /// exact rank factorization `M = C F`:
    /// `W = F^T (F F^T)^-1 (C^T C)^-1 C^T`.
    ///
    /// The four Penrose identities are checked exactly before returning.
    pub fn exact_pseudo_inverse(&self) -> Result<Self> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let w = self.pseudo_inverse_unchecked()?;
        debug_assert!(w.is_pseudo_inverse_of(self)?);
        if !w.is_pseudo_inverse_of(self)? {
            return Err(Error::Singular {
                rank: self.rank(),
                size: self.rows,
            });
        }
        Ok(w)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
                .collect(),
        )
        .expect("rectangular")
    }
}

impl ExactMatrix<RationalFunction> {
    /// Specialize every entry at the integer `n0`.
    pub fn evaluate_at(&self, n0: i64) -> Result<ExactMatrix<BigRational>> {
        self.try_map(|f| f.evaluate_at(n0))
    }

    pub fn evaluate_rational(&self, x: &BigRational) -> Result<ExactMatrix<BigRational>> {
        self.try_map(|f| f.evaluate_rational(x))
    }
}

impl<T: fmt::Display> fmt::Display for ExactMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<T: fmt::Display> fmt::Debug for ExactMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix {}x{}\n{}", self.rows, self.cols, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(IntPolynomial::from_i64s(n), IntPolynomial::from_i64s(d)).unwrap()
    }

    fn n_pow(d: usize) -> RationalFunction {
        RationalFunction::n_pow(d)
    }

    #[test]
    fn symbolic_two_by_two_inverse() {
        let m = ExactMatrix::from_rows(vec![vec![n_pow(2), n_pow(1)], vec![n_pow(1), n_pow(2)]])
            .unwrap();
        let inv = m.exact_inverse().unwrap();
        // cofactor formula: [[n^2, -n], [-n, n^2]] / (n^2 (n^2 - 1))
        let det = rf(&[0, 0, -1, 0, 1], &[1]);
        let expect = ExactMatrix::from_rows(vec![
            vec![n_pow(2).div(&det).unwrap(), n_pow(1).neg().div(&det).unwrap()],
            vec![n_pow(1).neg().div(&det).unwrap(), n_pow(2).div(&det).unwrap()],
        ])
        .unwrap();
        assert_eq!(inv, expect);
        assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(2));
        assert_eq!(inv, m.inverse_naive().unwrap());
    }

    #[test]
    fn identity_and_scalar() {
        let id = ExactMatrix::<RationalFunction>::identity(3);
        assert_eq!(id.exact_inverse().unwrap(), id);
        let m = ExactMatrix::from_rows(vec![vec![RationalFunction::n()]]).unwrap();
        assert_eq!(
            m.exact_inverse().unwrap(),
            ExactMatrix::from_rows(vec![vec![rf(&[1], &[0, 1])]]).unwrap()
        );
    }

    #[test]
    fn singular_reports_rank() {
        let m = ExactMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(
            m.exact_inverse(),
            Err(Error::Singular { rank: 2, size: 3 })
        );
    }

    #[test]
    fn needs_row_swap() {
        let m = ExactMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.exact_inverse().unwrap(), m);
    }

    #[test]
    fn rank_one_pseudo_inverse() {
        let m = ExactMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        let w = m.exact_pseudo_inverse().unwrap();
        let expect = ExactMatrix::from_rows(vec![vec![q(1, 4), q(1, 4)], vec![q(1, 4), q(1, 4)]])
            .unwrap();
        assert_eq!(w, expect);
        assert!(w.is_pseudo_inverse_of(&m).unwrap());
    }

    #[test]
    fn pseudo_inverse_edge_cases() {
        let z = ExactMatrix::<BigRational>::zeros(3, 3);
        assert_eq!(z.exact_pseudo_inverse().unwrap(), z);
        let m = ExactMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.exact_pseudo_inverse().unwrap(), m.exact_inverse().unwrap());
        let ns = ExactMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(ns.exact_pseudo_inverse(), Err(Error::NotSymmetric));
    }

    #[test]
    fn group_inverse_of_diagonalizable() {
        // diag(2, 0) conjugated by [[1,1],[0,1]]
        let m = ExactMatrix::from_i64_rows(&[&[2, -2], &[0, 0]]);
        let w = m.group_inverse().unwrap();
        assert_eq!(m.mul(&w).unwrap().mul(&m).unwrap(), m);
        assert_eq!(m.mul(&w).unwrap(), w.mul(&m).unwrap());
        // nilpotent part has no group inverse
        let nil = ExactMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]);
        assert!(nil.group_inverse().is_err());
    }

    #[test]
    fn rational_entries_are_cleared() {
        let m = ExactMatrix::from_rows(vec![
            vec![q(1, 2), q(1, 3)],
            vec![q(1, 3), q(1, 4)],
        ])
        .unwrap();
        let inv = m.exact_inverse().unwrap();
        assert_eq!(inv, m.inverse_naive().unwrap());
        assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(2));
    }
}
