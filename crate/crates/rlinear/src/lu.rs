//! Complex LU factorization with partial pivoting: linear solves, inverses
//! and determinants for the desk-scale dense matrices used by the
//! coneigenvalue machinery.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::mat::{DenseMatrix, DenseVector};
use crate::scalar::{cabs, cone, czero, RealScalar, C};

pub struct Lu<R: RealScalar> {
    lu: DenseMatrix<R>,
    piv: Vec<usize>,
    swaps: usize,
    singular: bool,
}

impl<R: RealScalar> Lu<R> {
    pub fn new(a: &DenseMatrix<R>) -> Result<Lu<R>> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "LU of a {}x{} matrix",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut singular = false;
        let scale = a.fro_norm().max(R::eps());

        for k in 0..n {
            let mut p = k;
            let mut best = cabs(lu[(k, k)]);
            for i in k + 1..n {
                let v = cabs(lu[(i, k)]);
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                piv.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            if cabs(pivot) <= R::from_f64(n as f64) * R::eps() * scale {
                singular = true;
                continue;
            }
            for i in k + 1..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                if m.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let lkj = lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - m * lkj;
                }
            }
        }
        Ok(Lu {
            lu,
            piv,
            swaps,
            singular,
        })
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, b: &DenseVector<R>) -> Result<DenseVector<R>> {
        if self.singular {
            return Err(Error::Singular);
        }
        let n = self.lu.rows();
        if b.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "rhs length {} for order {}",
                b.len(),
                n
            )));
        }
        let mut y = DenseVector::from_fn(n, |i| b[self.piv[i]]);
        for k in 0..n {
            for i in k + 1..n {
                let m = self.lu[(i, k)];
                let yk = y[k];
                y[i] = y[i] - m * yk;
            }
        }
        for k in (0..n).rev() {
            let mut s = y[k];
            for j in k + 1..n {
                s = s - self.lu[(k, j)] * y[j];
            }
            y[k] = s / self.lu[(k, k)];
        }
        Ok(y)
    }

    pub fn det(&self) -> C<R> {
        if self.singular {
            return czero();
        }
        let n = self.lu.rows();
        let mut d = if self.swaps % 2 == 0 { cone() } else { -cone() };
        for k in 0..n {
            d = d * self.lu[(k, k)];
        }
        d
    }

    pub fn inverse(&self) -> Result<DenseMatrix<R>> {
        let n = self.lu.rows();
        let mut inv = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let x = self.solve(&DenseVector::unit(n, j))?;
            inv.set_col(j, &x);
        }
        Ok(inv)
    }
}

/// Solve A x = b through a fresh factorization.
pub fn solve_dense<R: RealScalar>(a: &DenseMatrix<R>, b: &DenseVector<R>) -> Result<DenseVector<R>> {
    Lu::new(a)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solve_diagonal() {
        let a = DenseMatrix::diagonal(&[c::<f64>(2.0, 0.0), c(0.0, 4.0)]);
        let b = DenseVector::from_slice(&[c(2.0, 2.0), c(4.0, 0.0)]);
        let x = solve_dense(&a, &b).unwrap();
        assert!((x[0] - c(1.0, 1.0)).norm() < 1e-15);
        assert!((x[1] - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn inverse_and_det_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 6;
        let a = DenseMatrix::<f64>::from_fn(n, n, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let lu = Lu::new(&a).unwrap();
        let inv = lu.inverse().unwrap();
        let prod = a.matmul(&inv);
        let err = prod.sub(&DenseMatrix::identity(n)).fro_norm();
        assert!(err < 1e-12, "inverse defect {err:e}");
        // det(A) * det(A^-1) = 1
        let d1 = lu.det();
        let d2 = Lu::new(&inv).unwrap().det();
        assert!((d1 * d2 - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn singular_detected() {
        let a = DenseMatrix::from_rows(&[
            &[c::<f64>(1.0, 0.0), c(2.0, 0.0)],
            &[c(2.0, 0.0), c(4.0, 0.0)],
        ]);
        let lu = Lu::new(&a).unwrap();
        assert!(lu.is_singular());
        assert!(lu.solve(&DenseVector::ones(2)).is_err());
    }
}
