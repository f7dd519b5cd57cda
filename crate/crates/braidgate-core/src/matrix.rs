//! Dense matrices over the crate's exact scalars.
//!
//! `Matrix<Cyclotomic>` is the workhorse: equality, rank, determinant, and
//! inverse are all decidable there, so monodromy and the compiler can be
//! certified exactly. `Matrix<ExactComplex>` carries analytic targets and
//! metric computations; it deliberately has no equality.

use crate::complex::ExactComplex;
use crate::cyclotomic::Cyclotomic;
use crate::error::Error;
use crate::rational::Rational;
use crate::real::RegularReal;
use alloc::vec;
use alloc::vec::Vec;

/// Scalar interface needed for generic matrix arithmetic.
pub trait Entry: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Complex conjugation (identity on genuinely real scalars).
    fn conj(&self) -> Self;
}

impl Entry for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::zero(1)
    }
    fn one() -> Self {
        Cyclotomic::one(1)
    }
    fn add(&self, other: &Self) -> Self {
        Cyclotomic::add(self, other)
    }
    fn neg(&self) -> Self {
        Cyclotomic::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        Cyclotomic::mul(self, other)
    }
    fn conj(&self) -> Self {
        Cyclotomic::conj(self)
    }
}

impl Entry for ExactComplex {
    fn zero() -> Self {
        ExactComplex::zero()
    }
    fn one() -> Self {
        ExactComplex::one()
    }
    fn add(&self, other: &Self) -> Self {
        ExactComplex::add(self, other)
    }
    fn neg(&self) -> Self {
        ExactComplex::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        ExactComplex::mul(self, other)
    }
    fn conj(&self) -> Self {
        ExactComplex::conj(self)
    }
}

/// Row-major dense matrix. Zero-dimensional matrices are legal (they show
/// up as the monodromy of an empty fiber) and behave as the unique map
/// between zero-dimensional spaces.
#[derive(Clone, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Entry> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Matrix<T>, Error> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { left: (rows, cols), right: (data.len(), 1) });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Matrix<T> {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(dim: usize) -> Matrix<T> {
        let mut m = Self::zero(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = T::one();
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

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Matrix<T>) -> Result<Matrix<T>, Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let data =
            self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Matrix<T>) -> Result<Matrix<T>, Error> {
        self.add(&other.map(|v| v.neg()))
    }

    pub fn mul(&self, other: &Matrix<T>) -> Result<Matrix<T>, Error> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    let t = a.mul(other.get(k, j));
                    let cur = out.get(i, j).add(&t);
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &T) -> Matrix<T> {
        self.map(|v| v.mul(s))
    }

    pub fn transpose(&self) -> Matrix<T> {
        let mut out = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix<T> {
        self.transpose().map(|v| v.conj())
    }

    pub fn trace(&self) -> Result<T, Error> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (self.cols, self.rows),
            });
        }
        let mut t = T::zero();
        for i in 0..self.rows {
            t = t.add(self.get(i, i));
        }
        Ok(t)
    }

    /// `sum_ij a_ij conj(a_ij)`; a real scalar in the entry type.
    pub fn frobenius_sq(&self) -> T {
        let mut t = T::zero();
        for a in &self.data {
            t = t.add(&a.mul(&a.conj()));
        }
        t
    }
}

impl PartialEq for Matrix<Cyclotomic> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Eq for Matrix<Cyclotomic> {}

impl Matrix<Cyclotomic> {
    pub fn from_rationals(rows: usize, cols: usize, data: &[Rational]) -> Result<Self, Error> {
        Matrix::new(rows, cols, data.iter().map(|r| Cyclotomic::from_rational(r.clone())).collect())
    }

    /// Per-entry embedding into the complex numbers.
    pub fn to_complex(&self) -> Matrix<ExactComplex> {
        self.map(|c| c.to_complex())
    }

    pub fn det_2x2(&self) -> Result<Cyclotomic, Error> {
        if self.rows != 2 || self.cols != 2 {
            return Err(Error::DimensionMismatch { left: (self.rows, self.cols), right: (2, 2) });
        }
        Ok(self.get(0, 0).mul(self.get(1, 1)).sub(&self.get(0, 1).mul(self.get(1, 0))))
    }

    pub fn inverse_2x2(&self) -> Result<Self, Error> {
        let det = self.det_2x2()?;
        let inv_det = det.inv()?;
        let data = vec![
            self.get(1, 1).mul(&inv_det),
            self.get(0, 1).neg().mul(&inv_det),
            self.get(1, 0).neg().mul(&inv_det),
            self.get(0, 0).mul(&inv_det),
        ];
        Matrix::new(2, 2, data)
    }

    /// Determinant by fraction-free-ish Gaussian elimination (exact field
    /// ops, so ordinary elimination is already exact).
    pub fn det(&self) -> Result<Cyclotomic, Error> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (self.cols, self.rows),
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Cyclotomic::one(1);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.get(r, col).is_zero());
            let Some(p) = pivot else {
                return Ok(Cyclotomic::zero(1));
            };
            if p != col {
                for j in 0..n {
                    let a = m.get(col, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(col, j, b);
                    m.set(p, j, a);
                }
                det = det.neg();
            }
            let piv = m.get(col, col).clone();
            det = det.mul(&piv);
            let piv_inv = piv.inv()?;
            for r in col + 1..n {
                let factor = m.get(r, col).mul(&piv_inv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = m.get(r, j).sub(&factor.mul(m.get(col, j)));
                    m.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut rank = 0usize;
        for col in 0..cols {
            let pivot = (rank..rows).find(|&r| !m.get(r, col).is_zero());
            let Some(p) = pivot else { continue };
            if p != rank {
                for j in 0..cols {
                    let a = m.get(rank, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(rank, j, b);
                    m.set(p, j, a);
                }
            }
            let piv_inv = m.get(rank, col).inv().expect("pivot is nonzero");
            for r in rank + 1..rows {
                let factor = m.get(r, col).mul(&piv_inv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..cols {
                    let v = m.get(r, j).sub(&factor.mul(m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Gauss-Jordan inverse; `DivisionByZero` on singular input.
    pub fn inverse(&self) -> Result<Self, Error> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (self.cols, self.rows),
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.get(r, col).is_zero());
            let Some(p) = pivot else {
                return Err(Error::DivisionByZero);
            };
            if p != col {
                for j in 0..n {
                    let a = m.get(col, j).clone();
                    m.set(col, j, m.get(p, j).clone());
                    m.set(p, j, a);
                    let a = inv.get(col, j).clone();
                    inv.set(col, j, inv.get(p, j).clone());
                    inv.set(p, j, a);
                }
            }
            let piv_inv = m.get(col, col).inv()?;
            for j in 0..n {
                m.set(col, j, m.get(col, j).mul(&piv_inv));
                inv.set(col, j, inv.get(col, j).mul(&piv_inv));
            }
            for r in 0..n {
                if r == col || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in 0..n {
                    let v = m.get(r, j).sub(&factor.mul(m.get(col, j)));
                    m.set(r, j, v);
                    let v = inv.get(r, j).sub(&factor.mul(inv.get(col, j)));
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Solves `A x = b` for square invertible `A` (column vector `b`).
    pub fn solve(&self, b: &Matrix<Cyclotomic>) -> Result<Matrix<Cyclotomic>, Error> {
        self.inverse()?.mul(b)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }
}

impl Matrix<ExactComplex> {
    /// Frobenius norm squared as a certified real.
    pub fn frobenius_sq_real(&self) -> RegularReal {
        self.frobenius_sq().re().clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn cy(r: i64, q: i64) -> Cyclotomic {
        Cyclotomic::from_rational(rat(r, q))
    }

    #[test]
    fn product_and_identity() {
        let a = Matrix::new(2, 2, vec![cy(1, 1), cy(2, 1), cy(3, 1), cy(4, 1)]).unwrap();
        let id = Matrix::<Cyclotomic>::identity(2);
        assert_eq!(a.mul(&id).unwrap(), a);
        let b = Matrix::new(2, 2, vec![cy(0, 1), cy(1, 1), cy(1, 1), cy(0, 1)]).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab, Matrix::new(2, 2, vec![cy(2, 1), cy(1, 1), cy(4, 1), cy(3, 1)]).unwrap());
    }

    #[test]
    fn inverse_round_trips() {
        let z = Cyclotomic::zeta_pow(8, 1);
        let a = Matrix::new(
            2,
            2,
            vec![Cyclotomic::one(8), z.clone(), Cyclotomic::zero(8), Cyclotomic::one(8).add(&z)],
        )
        .unwrap();
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert_eq!(a.inverse_2x2().unwrap(), inv);
        let singular =
            Matrix::new(2, 2, vec![cy(1, 1), cy(2, 1), cy(2, 1), cy(4, 1)]).unwrap();
        assert!(singular.inverse().is_err());
        assert!(singular.det().unwrap().is_zero());
        assert_eq!(singular.rank(), 1);
    }

    #[test]
    fn adjoint_conjugates() {
        let z = Cyclotomic::zeta_pow(4, 1); // i
        let a = Matrix::new(1, 2, vec![z.clone(), Cyclotomic::one(4)]).unwrap();
        let adj = a.adjoint();
        assert_eq!(adj.rows(), 2);
        assert_eq!(*adj.get(0, 0), Cyclotomic::zeta_pow(4, -1));
    }

    #[test]
    fn frobenius_of_identity_is_dimension() {
        let id = Matrix::<Cyclotomic>::identity(5);
        assert_eq!(id.frobenius_sq().as_rational().unwrap(), rat(5, 1));
    }

    #[test]
    fn zero_dimensional_matrices_compose() {
        let e = Matrix::<Cyclotomic>::identity(0);
        assert!(e.is_identity());
        assert_eq!(e.mul(&e).unwrap().rows(), 0);
    }
}
