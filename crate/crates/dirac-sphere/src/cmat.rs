//! Dense matrices over the Gaussian rationals.
//!
//! Small exact matrices for Dirac blocks and identity checking; conversion
//! to `nalgebra` complex matrices happens only at the eigensolver boundary.

use std::ops::{Index, IndexMut};

use nalgebra::{Complex, DMatrix};
use num::{One, Zero};

use crate::exact::{cre, rat_to_f64, CRat, Rat};

/// Square or rectangular matrix with exact complex-rational entries, stored
/// row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<CRat>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![CRat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = CRat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CRat) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Real rational matrix lifted to complex entries.
    pub fn from_real(rows: &[Vec<Rat>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        CMat::from_fn(r, c, |i, j| cre(rows[i][j].clone()))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b.clone();
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b.clone();
        }
        out
    }

    pub fn scale(&self, c: &CRat) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.clone() * c.clone();
        }
        out
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a.clone() * b.clone();
                        out[(i, j)] += prod;
                    }
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Adds `c·I` in place; the matrix must be square.
    pub fn add_scalar_diag(&self, c: &CRat) -> CMat {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] += c.clone();
        }
        out
    }

    pub fn trace(&self) -> CRat {
        assert!(self.is_square());
        let mut t = CRat::zero();
        for i in 0..self.rows {
            t += self[(i, i)].clone();
        }
        t
    }

    /// Nearest floating-point matrix, for the eigensolver boundary.
    pub fn to_complex_f64(&self) -> DMatrix<Complex<f64>> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| {
            Complex::new(rat_to_f64(&self[(i, j)].re), rat_to_f64(&self[(i, j)].im))
        })
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = CRat;
    fn index(&self, (i, j): (usize, usize)) -> &CRat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut CRat {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ci, cim, int, rat};

    #[test]
    fn product_and_adjoint() {
        // [[0, i], [-i, 0]] squares to the identity and is self-adjoint.
        let mut m = CMat::zeros(2, 2);
        m[(0, 1)] = ci();
        m[(1, 0)] = -ci();
        assert_eq!(m.mul(&m), CMat::identity(2));
        assert_eq!(m.adjoint(), m);
    }

    #[test]
    fn scalar_diagonal_shift() {
        let m = CMat::zeros(3, 3).add_scalar_diag(&cim(rat(1, 2)));
        assert_eq!(m.trace(), cim(rat(3, 2)));
        assert_eq!(m.sub(&m), CMat::zeros(3, 3));
        assert!(!m.is_zero());
        assert_eq!(m.scale(&cre(int(2)))[(0, 0)], cim(int(1)));
    }

    #[test]
    fn real_lift_and_transpose() {
        let rows = vec![vec![int(1), int(2)], vec![int(3), int(4)]];
        let m = CMat::from_real(&rows);
        assert_eq!(m.transpose()[(0, 1)], cre(int(3)));
        assert_eq!(m.adjoint(), m.transpose());
    }
}
