//! Dense complex matrices and vectors over a precision-family scalar.
//!
//! Storage is column-major; dimensions are fixed at construction. Matrix-
//! vector products dominate the workloads here, so columns are kept
//! contiguous.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{c, cabs, cnorm_sqr, czero, RealScalar, C};

#[derive(Clone, PartialEq)]
pub struct DenseMatrix<R: RealScalar> {
    rows: usize,
    cols: usize,
    /// column-major: entry (i, j) at `data[j * rows + i]`
    data: Vec<C<R>>,
}

impl<R: RealScalar> DenseMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![czero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<R>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Row-major literal, convenient in tests.
    pub fn from_rows(rows: &[&[C<R>]]) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn diagonal(entries: &[C<R>]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = entries[i];
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

    pub fn col(&self, j: usize) -> &[C<R>] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [C<R>] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_vector(&self, j: usize) -> DenseVector<R> {
        DenseVector::from_slice(self.col(j))
    }

    pub fn set_col(&mut self, j: usize, v: &DenseVector<R>) {
        assert_eq!(v.len(), self.rows);
        self.col_mut(j).copy_from_slice(v.as_slice());
    }

    /// First `cols` columns as a new matrix.
    pub fn leading_cols(&self, cols: usize) -> DenseMatrix<R> {
        assert!(cols <= self.cols);
        DenseMatrix {
            rows: self.rows,
            cols,
            data: self.data[..cols * self.rows].to_vec(),
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> DenseMatrix<R> {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn transpose(&self) -> DenseMatrix<R> {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> DenseMatrix<R> {
        let mut m = self.clone();
        for z in &mut m.data {
            *z = z.conj();
        }
        m
    }

    pub fn adjoint(&self) -> DenseMatrix<R> {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C<R>) -> DenseMatrix<R> {
        let mut m = self.clone();
        for z in &mut m.data {
            *z = *z * s;
        }
        m
    }

    pub fn add(&self, other: &DenseMatrix<R>) -> DenseMatrix<R> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (z, w) in m.data.iter_mut().zip(&other.data) {
            *z = *z + *w;
        }
        m
    }

    pub fn sub(&self, other: &DenseMatrix<R>) -> DenseMatrix<R> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (z, w) in m.data.iter_mut().zip(&other.data) {
            *z = *z - *w;
        }
        m
    }

    pub fn matvec(&self, x: &DenseVector<R>) -> DenseVector<R> {
        assert_eq!(self.cols, x.len());
        let mut y = vec![czero(); self.rows];
        for j in 0..self.cols {
            let xj = x[j];
            if xj.is_zero() {
                continue;
            }
            for (yi, aij) in y.iter_mut().zip(self.col(j)) {
                *yi = *yi + *aij * xj;
            }
        }
        DenseVector { data: y }
    }

    /// A * conj(x): the antilinear action of the matrix.
    pub fn matvec_conj(&self, x: &DenseVector<R>) -> DenseVector<R> {
        self.matvec(&x.conj())
    }

    pub fn matmul(&self, other: &DenseMatrix<R>) -> DenseMatrix<R> {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            for k in 0..self.cols {
                let bkj = other[(k, j)];
                if bkj.is_zero() {
                    continue;
                }
                let col_k = self.col(k);
                let out_j = out.col_mut(j);
                for i in 0..self.rows {
                    out_j[i] = out_j[i] + col_k[i] * bkj;
                }
            }
        }
        out
    }

    pub fn fro_norm(&self) -> R {
        let mut s = R::zero();
        for z in &self.data {
            s = s + cnorm_sqr(*z);
        }
        s.sqrt()
    }

    /// Frobenius norm of `A - A^T`.
    pub fn symmetry_defect(&self) -> R {
        assert!(self.is_square());
        let mut s = R::zero();
        for j in 0..self.cols {
            for i in 0..self.rows {
                let d = self[(i, j)] - self[(j, i)];
                s = s + cnorm_sqr(d);
            }
        }
        s.sqrt()
    }

    /// Entrywise demotion to `f64` precision.
    pub fn demote(&self) -> DenseMatrix<f64> {
        DenseMatrix::from_fn(self.rows, self.cols, |i, j| {
            num_complex::Complex::new(self[(i, j)].re.to_f64(), self[(i, j)].im.to_f64())
        })
    }

    /// Entrywise promotion from `f64` precision (exact).
    pub fn promote(m: &DenseMatrix<f64>) -> DenseMatrix<R> {
        DenseMatrix::from_fn(m.rows, m.cols, |i, j| c(m[(i, j)].re, m[(i, j)].im))
    }
}

impl<R: RealScalar> std::ops::Index<(usize, usize)> for DenseMatrix<R> {
    type Output = C<R>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl<R: RealScalar> std::ops::IndexMut<(usize, usize)> for DenseMatrix<R> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

impl<R: RealScalar> std::fmt::Debug for DenseMatrix<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for j in 0..self.cols.min(8) {
                let z = self[(i, j)];
                write!(f, "{:+.3e}{:+.3e}i ", z.re.to_f64(), z.im.to_f64())?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, PartialEq)]
pub struct DenseVector<R: RealScalar> {
    data: Vec<C<R>>,
}

impl<R: RealScalar> DenseVector<R> {
    pub fn zeros(n: usize) -> Self {
        DenseVector {
            data: vec![czero(); n],
        }
    }

    pub fn from_slice(s: &[C<R>]) -> Self {
        DenseVector { data: s.to_vec() }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> C<R>) -> Self {
        DenseVector {
            data: (0..n).map(|i| f(i)).collect(),
        }
    }

    pub fn ones(n: usize) -> Self {
        DenseVector {
            data: vec![c(1.0, 0.0); n],
        }
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v[k] = c(1.0, 0.0);
        v
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[C<R>] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, C<R>> {
        self.data.iter()
    }

    pub fn conj(&self) -> DenseVector<R> {
        DenseVector {
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C<R>) -> DenseVector<R> {
        DenseVector {
            data: self.data.iter().map(|z| *z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: R) -> DenseVector<R> {
        self.scale(num_complex::Complex::new(s, R::zero()))
    }

    pub fn add(&self, other: &DenseVector<R>) -> DenseVector<R> {
        assert_eq!(self.len(), other.len());
        DenseVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &DenseVector<R>) -> DenseVector<R> {
        assert_eq!(self.len(), other.len());
        DenseVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }

    /// self <- self - s * other
    pub fn sub_scaled(&mut self, s: C<R>, other: &DenseVector<R>) {
        assert_eq!(self.len(), other.len());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = *a - s * *b;
        }
    }

    /// <self, other> = sum_i self_i * conj(other_i), linear in the first slot.
    pub fn inner(&self, other: &DenseVector<R>) -> C<R> {
        assert_eq!(self.len(), other.len());
        let mut s = czero();
        for (a, b) in self.data.iter().zip(&other.data) {
            s = s + *a * b.conj();
        }
        s
    }

    pub fn norm(&self) -> R {
        let mut s = R::zero();
        for z in &self.data {
            s = s + cnorm_sqr(*z);
        }
        s.sqrt()
    }

    pub fn max_abs(&self) -> R {
        let mut m = R::zero();
        for z in &self.data {
            m = m.max(cabs(*z));
        }
        m
    }

    pub fn demote(&self) -> DenseVector<f64> {
        DenseVector::from_fn(self.len(), |i| {
            num_complex::Complex::new(self[i].re.to_f64(), self[i].im.to_f64())
        })
    }

    pub fn promote(v: &DenseVector<f64>) -> DenseVector<R> {
        DenseVector::from_fn(v.len(), |i| c(v[i].re, v[i].im))
    }
}

impl<R: RealScalar> std::ops::Index<usize> for DenseVector<R> {
    type Output = C<R>;
    #[inline]
    fn index(&self, i: usize) -> &C<R> {
        &self.data[i]
    }
}

impl<R: RealScalar> std::ops::IndexMut<usize> for DenseVector<R> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut C<R> {
        &mut self.data[i]
    }
}

impl<R: RealScalar> std::fmt::Debug for DenseVector<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DenseVector[")?;
        for z in self.data.iter().take(12) {
            write!(f, "{:+.3e}{:+.3e}i ", z.re.to_f64(), z.im.to_f64())?;
        }
        write!(f, "]")
    }
}

/// kappa*z + M*conj(z): one application of the R-linear operator.
pub fn apply_antilinear<R: RealScalar>(
    kappa: C<R>,
    m: &DenseMatrix<R>,
    z: &DenseVector<R>,
) -> Result<DenseVector<R>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "operator matrix is {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.rows() != z.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{} but vector has length {}",
            m.rows(),
            m.cols(),
            z.len()
        )));
    }
    let mut out = m.matvec_conj(z);
    if !kappa.is_zero() {
        for i in 0..out.len() {
            out[i] = out[i] + kappa * z[i];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn apply_antilinear_hand_case() {
        // kappa=2, M=[[0,1],[1,0]], z=(i,0) -> (2i, -i)
        let m = DenseMatrix::from_rows(&[
            &[c::<f64>(0.0, 0.0), c(1.0, 0.0)],
            &[c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        let z = DenseVector::from_slice(&[c(0.0, 1.0), c(0.0, 0.0)]);
        let out = apply_antilinear(c(2.0, 0.0), &m, &z).unwrap();
        assert!((out[0] - c(0.0, 2.0)).norm() < 1e-15);
        assert!((out[1] - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn apply_antilinear_identity_case() {
        // kappa=0, M=I: result is conj(z)
        let m = DenseMatrix::<f64>::identity(3);
        let z = DenseVector::from_slice(&[c(1.0, 2.0), c(-3.0, 0.5), c(0.0, -1.0)]);
        let out = apply_antilinear(c(0.0, 0.0), &m, &z).unwrap();
        for i in 0..3 {
            assert_eq!(out[i], z[i].conj());
        }
    }

    #[test]
    fn apply_antilinear_matches_naive_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 5;
        let m = DenseMatrix::<f64>::from_fn(n, n, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let z = DenseVector::from_fn(n, |_| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let kappa = Complex64::new(0.7, -0.3);
        let out = apply_antilinear(kappa, &m, &z).unwrap();
        // naive entrywise oracle
        for i in 0..n {
            let mut s = kappa * z[i];
            for j in 0..n {
                s += m[(i, j)] * z[j].conj();
            }
            assert!((out[i] - s).norm() < 1e-14 * s.norm().max(1.0));
        }
    }

    #[test]
    fn apply_antilinear_dimension_errors() {
        let m = DenseMatrix::<f64>::zeros(3, 2);
        let z = DenseVector::zeros(2);
        assert!(apply_antilinear(c(0.0, 0.0), &m, &z).is_err());
        let m = DenseMatrix::<f64>::zeros(3, 3);
        assert!(apply_antilinear(c(0.0, 0.0), &m, &z).is_err());
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = DenseMatrix::from_rows(&[
            &[c::<f64>(1.0, 1.0), c(2.0, 0.0)],
            &[c(0.0, -1.0), c(1.0, 0.0)],
        ]);
        let aa = a.adjoint().matmul(&a);
        // A*A is Hermitian
        assert!((aa[(0, 1)] - aa[(1, 0)].conj()).norm() < 1e-15);
        assert!(aa[(0, 0)].im.abs() < 1e-15);
    }

    #[test]
    fn fro_norm_simple() {
        let a = DenseMatrix::from_rows(&[&[c::<f64>(3.0, 0.0), c(0.0, 4.0)]]);
        assert!((a.fro_norm() - 5.0).abs() < 1e-15);
    }
}
