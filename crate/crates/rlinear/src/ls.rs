//! Real least squares by Householder QR.
//!
//! The R-linear projected problems are solved by realification, so the inner
//! solver works on real matrices over the active precision scalar. The
//! factorization is rebuilt from scratch on every call; for the larger
//! realified systems the reflector applications run in parallel across
//! columns when the `parallel` feature is enabled.

use crate::error::{Error, Result};
use crate::par::maybe_par_chunks_mut;
use crate::scalar::RealScalar;

/// Column-major real matrix.
#[derive(Clone, Debug)]
pub struct RealMatrix<R: RealScalar> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: RealScalar> RealMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealMatrix {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> &[R] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [R] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }
}

impl<R: RealScalar> std::ops::Index<(usize, usize)> for RealMatrix<R> {
    type Output = R;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[j * self.rows + i]
    }
}

impl<R: RealScalar> std::ops::IndexMut<(usize, usize)> for RealMatrix<R> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[j * self.rows + i]
    }
}

/// Solution of an overdetermined least-squares problem.
#[derive(Clone, Debug)]
pub struct LsSolution<R: RealScalar> {
    pub x: Vec<R>,
    /// Norm of `b - A x`, read off the transformed right-hand side.
    pub residual_norm: R,
}

/// argmin_x ||A x - b||_2 for a full-column-rank A with rows >= cols.
///
/// Errors with [`Error::RankDeficient`] when the smallest diagonal of the
/// triangular factor falls below `cols * eps * largest`.
pub fn solve_real_ls<R: RealScalar>(a: &RealMatrix<R>, b: &[R]) -> Result<LsSolution<R>> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{} but rhs has length {}",
            m,
            n,
            b.len()
        )));
    }
    if m < n {
        return Err(Error::DimensionMismatch(format!(
            "underdetermined system {}x{}",
            m, n
        )));
    }
    let mut qr = a.clone();
    let mut rhs = b.to_vec();

    for k in 0..n {
        // Householder reflector for column k below the diagonal
        let mut alpha = R::zero();
        for i in k..m {
            let v = qr[(i, k)];
            alpha = alpha + v * v;
        }
        let alpha = alpha.sqrt();
        if alpha.is_zero() {
            continue; // column already zero; rank check below will reject
        }
        let akk = qr[(k, k)];
        let alpha = if akk > R::zero() { -alpha } else { alpha };
        // v = x - alpha e_k, normalized so v_k = 1
        let vk = akk - alpha;
        qr[(k, k)] = alpha;
        for i in k + 1..m {
            let t = qr[(i, k)] / vk;
            qr[(i, k)] = t;
        }
        // beta = -vk / alpha ( = 2 / v^T v with this scaling)
        let beta = -vk / alpha;

        // apply I - beta v v^T to remaining columns and to rhs
        let rows = m;
        let (head, tail) = qr.data.split_at_mut((k + 1) * rows);
        let vcol = &head[k * rows..(k + 1) * rows];
        maybe_par_chunks_mut(tail, rows, |col| {
            let mut dot = col[k];
            for i in k + 1..rows {
                dot = dot + vcol[i] * col[i];
            }
            let s = beta * dot;
            col[k] = col[k] - s;
            for i in k + 1..rows {
                col[i] = col[i] - s * vcol[i];
            }
        });
        let mut dot = rhs[k];
        for i in k + 1..m {
            dot = dot + vcol[i] * rhs[i];
        }
        let s = beta * dot;
        rhs[k] = rhs[k] - s;
        for i in k + 1..m {
            rhs[i] = rhs[i] - s * vcol[i];
        }
    }

    // rank check on the diagonal of R
    let mut largest = R::zero();
    let mut smallest = R::zero();
    for k in 0..n {
        let d = qr[(k, k)].abs();
        largest = largest.max(d);
        smallest = if k == 0 { d } else { smallest.min(d) };
    }
    if n > 0 && smallest <= R::from_f64(n as f64) * R::eps() * largest {
        return Err(Error::RankDeficient);
    }

    // back substitution
    let mut x = vec![R::zero(); n];
    for k in (0..n).rev() {
        let mut s = rhs[k];
        for j in k + 1..n {
            s = s - qr[(k, j)] * x[j];
        }
        x[k] = s / qr[(k, k)];
    }

    let mut res = R::zero();
    for item in rhs.iter().take(m).skip(n) {
        res = res + *item * *item;
    }
    Ok(LsSolution {
        x,
        residual_norm: res.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_system() {
        let a = RealMatrix::<f64>::identity(3);
        let sol = solve_real_ls(&a, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(sol.x, vec![1.0, 2.0, 3.0]);
        assert!(sol.residual_norm < 1e-15);
    }

    #[test]
    fn mean_of_two() {
        let a = RealMatrix::<f64>::from_fn(2, 1, |_, _| 1.0);
        let sol = solve_real_ls(&a, &[0.0, 2.0]).unwrap();
        assert!((sol.x[0] - 1.0).abs() < 1e-15);
        assert!((sol.residual_norm - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn normal_equations_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = RealMatrix::<f64>::from_fn(8, 3, |_, _| rng.random::<f64>() - 0.5);
        let b: Vec<f64> = (0..8).map(|_| rng.random::<f64>() - 0.5).collect();
        let sol = solve_real_ls(&a, &b).unwrap();
        // A^T (A x - b) = 0 to 1e-12
        for j in 0..3 {
            let mut s = 0.0;
            for i in 0..8 {
                let mut axi = 0.0;
                for k in 0..3 {
                    axi += a[(i, k)] * sol.x[k];
                }
                s += a[(i, j)] * (axi - b[i]);
            }
            assert!(s.abs() < 1e-12, "normal equation defect {s:e}");
        }
    }

    #[test]
    fn row_permutation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = RealMatrix::<f64>::from_fn(6, 2, |_, _| rng.random::<f64>() - 0.5);
        let b: Vec<f64> = (0..6).map(|_| rng.random::<f64>() - 0.5).collect();
        let perm = [3usize, 0, 5, 1, 4, 2];
        let ap = RealMatrix::from_fn(6, 2, |i, j| a[(perm[i], j)]);
        let bp: Vec<f64> = perm.iter().map(|&i| b[i]).collect();
        let s1 = solve_real_ls(&a, &b).unwrap();
        let s2 = solve_real_ls(&ap, &bp).unwrap();
        for j in 0..2 {
            assert!((s1.x[j] - s2.x[j]).abs() < 1e-13);
        }
        assert!((s1.residual_norm - s2.residual_norm).abs() < 1e-13);
    }

    #[test]
    fn rank_deficient_rejected() {
        // second column is a multiple of the first
        let a = RealMatrix::<f64>::from_fn(4, 2, |i, j| (i as f64 + 1.0) * (j as f64 + 1.0));
        let err = solve_real_ls(&a, &[1.0, 0.0, 0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::RankDeficient));
    }

    #[test]
    fn dd_precision_ls() {
        use crate::scalar::Dd;
        let a = RealMatrix::<Dd>::from_fn(3, 2, |i, j| {
            Dd::from_f64([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]][i][j])
        });
        let b = [Dd::from_f64(1.0), Dd::from_f64(1.0), Dd::from_f64(1.0)];
        let sol = solve_real_ls(&a, &b).unwrap();
        // exact solution x = (-1, 1)
        assert!((sol.x[0].to_f64() + 1.0).abs() < 1e-28);
        assert!((sol.x[1].to_f64() - 1.0).abs() < 1e-28);
    }
}
