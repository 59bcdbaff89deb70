//! The R-linear Arnoldi process and the complex symmetric Lanczos
//! three-term recurrence.
//!
//! The Krylov subspace of the operator `z -> kappa z + M conj(z)` is
//! `span{b, M conj(b), M conj(M) b, ...}` and does not depend on `kappa`, so
//! both factorizations take only the matrix and the starting vector. The
//! candidate vector at step `j` is `M conj(q_j)`; subdiagonal entries are the
//! normalization constants and therefore real and nonnegative.


use crate::eig::singular_values;
use crate::error::{Error, Result};
use crate::lu::Lu;
use crate::mat::{DenseMatrix, DenseVector};
use crate::scalar::{cr, czero, RealScalar, C};

/// Relative symmetry tolerance for [`cs_lanczos`].
pub fn sym_tol<R: RealScalar>() -> R {
    R::from_f64(1e-12)
}

/// Orthonormal basis plus projected Hessenberg matrix.
///
/// `h` is stored `(steps+1) x steps`; when the process broke down the last
/// row is zero and `q` has only `steps` columns, otherwise `q` has
/// `steps + 1` columns.
pub struct KrylovFactorization<R: RealScalar> {
    pub q: DenseMatrix<R>,
    pub h: DenseMatrix<R>,
    pub steps: usize,
    /// 1-based step at which the candidate direction vanished.
    pub breakdown_step: Option<usize>,
}

/// Complex symmetric Jacobi matrix: complex diagonal, positive off-diagonal.
#[derive(Clone, Debug)]
pub struct JacobiMatrix<R: RealScalar> {
    pub alphas: Vec<C<R>>,
    pub betas: Vec<R>,
}

impl<R: RealScalar> JacobiMatrix<R> {
    pub fn order(&self) -> usize {
        self.alphas.len()
    }

    /// Dense `k x k` complex symmetric tridiagonal.
    pub fn to_dense(&self) -> DenseMatrix<R> {
        let k = self.order();
        let mut m = DenseMatrix::zeros(k, k);
        for i in 0..k {
            m[(i, i)] = self.alphas[i];
            if i + 1 < k {
                m[(i + 1, i)] = cr(self.betas[i]);
                m[(i, i + 1)] = cr(self.betas[i]);
            }
        }
        m
    }
}

/// Result of the complex symmetric Lanczos process.
pub struct LanczosFactorization<R: RealScalar> {
    pub jacobi: JacobiMatrix<R>,
    pub q: DenseMatrix<R>,
    /// Norm of the first discarded candidate: the `(m+1, m)` entry of the
    /// projected matrix. Zero after breakdown.
    pub next_beta: R,
    pub breakdown_step: Option<usize>,
}

impl<R: RealScalar> LanczosFactorization<R> {
    /// The `(j+1) x j` projected tridiagonal block used at solver step `j`.
    pub fn projected(&self, j: usize) -> DenseMatrix<R> {
        assert!(j >= 1 && j <= self.jacobi.order());
        let mut h = DenseMatrix::zeros(j + 1, j);
        for i in 0..j {
            h[(i, i)] = self.jacobi.alphas[i];
            let beta = if i < self.jacobi.betas.len() {
                self.jacobi.betas[i]
            } else {
                self.next_beta
            };
            h[(i + 1, i)] = cr(beta);
            if i + 1 < j {
                h[(i, i + 1)] = cr(beta);
            }
        }
        h
    }
}

fn orthogonalize<R: RealScalar>(
    w: &mut DenseVector<R>,
    basis: &[DenseVector<R>],
    coeffs: &mut [C<R>],
    second_pass: bool,
) {
    for (i, q) in basis.iter().enumerate() {
        let h = w.inner(q);
        w.sub_scaled(h, q);
        coeffs[i] = coeffs[i] + h;
    }
    if second_pass {
        for (i, q) in basis.iter().enumerate() {
            let h = w.inner(q);
            w.sub_scaled(h, q);
            coeffs[i] = coeffs[i] + h;
        }
    }
}

/// R-linear Arnoldi: orthonormal basis of the Krylov subspace of
/// `z -> M conj(z)` and the projected upper Hessenberg matrix satisfying
/// `M conj(Q_m) = Q H`.
pub fn rlinear_arnoldi<R: RealScalar>(
    m: &DenseMatrix<R>,
    b: &DenseVector<R>,
    steps: usize,
    reorth: bool,
) -> Result<KrylovFactorization<R>> {
    let n = m.rows();
    if !m.is_square() || b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator {}x{}, starting vector length {}",
            m.rows(),
            m.cols(),
            b.len()
        )));
    }
    if steps > n {
        return Err(Error::TooManySteps { m: steps, n });
    }
    let bnorm = b.norm();
    if bnorm.is_zero() {
        return Err(Error::ZeroRhs);
    }
    let breakdown = R::breakdown_tol() * m.fro_norm().max(R::eps());

    let mut basis: Vec<DenseVector<R>> = vec![b.scale_real(R::one() / bnorm)];
    let mut h = DenseMatrix::<R>::zeros(steps + 1, steps);
    let mut breakdown_step = None;
    let mut done = 0;

    for j in 0..steps {
        let mut w = m.matvec_conj(&basis[j]);
        let mut coeffs = vec![czero(); basis.len()];
        orthogonalize(&mut w, &basis, &mut coeffs, reorth);
        for (i, hij) in coeffs.iter().enumerate() {
            h[(i, j)] = *hij;
        }
        done = j + 1;
        let norm = w.norm();
        if norm <= breakdown {
            breakdown_step = Some(j + 1);
            break;
        }
        h[(j + 1, j)] = cr(norm);
        basis.push(w.scale_real(R::one() / norm));
    }

    let mut q = DenseMatrix::zeros(n, basis.len());
    for (j, v) in basis.iter().enumerate() {
        q.set_col(j, v);
    }
    Ok(KrylovFactorization {
        q,
        h: h.submatrix(0, 0, done + 1, done),
        steps: done,
        breakdown_step,
    })
}

/// Complex symmetric Lanczos: for `M^T = M` the projected matrix is
/// tridiagonal and the basis satisfies the three-term recurrence
/// `beta_j q_{j+1} = M conj(q_j) - alpha_j q_j - beta_{j-1} q_{j-1}`.
///
/// The starting vector is normalized internally. With `reorth` the candidate
/// is reorthogonalized against the whole basis (two modified Gram-Schmidt
/// passes); without it the plain three-term recurrence runs, which mirrors
/// the finite-precision behaviour of the classical symmetric Lanczos method.
pub fn cs_lanczos<R: RealScalar>(
    m: &DenseMatrix<R>,
    b: &DenseVector<R>,
    steps: usize,
    reorth: bool,
) -> Result<LanczosFactorization<R>> {
    let n = m.rows();
    if !m.is_square() || b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator {}x{}, starting vector length {}",
            m.rows(),
            m.cols(),
            b.len()
        )));
    }
    if steps > n {
        return Err(Error::TooManySteps { m: steps, n });
    }
    let mnorm = m.fro_norm();
    let defect = m.symmetry_defect();
    if defect > sym_tol::<R>() * mnorm.max(R::eps()) {
        return Err(Error::NotSymmetric(defect.to_f64()));
    }
    let bnorm = b.norm();
    if bnorm.is_zero() {
        return Err(Error::ZeroRhs);
    }
    let breakdown = R::breakdown_tol() * mnorm.max(R::eps());

    let mut basis: Vec<DenseVector<R>> = vec![b.scale_real(R::one() / bnorm)];
    let mut alphas: Vec<C<R>> = Vec::with_capacity(steps);
    let mut betas: Vec<R> = Vec::new();
    let mut next_beta = R::zero();
    let mut breakdown_step = None;

    for j in 0..steps {
        let mut w = m.matvec_conj(&basis[j]);
        let alpha = w.inner(&basis[j]);
        w.sub_scaled(alpha, &basis[j]);
        if j > 0 {
            w.sub_scaled(cr(betas[j - 1]), &basis[j - 1]);
        }
        alphas.push(alpha);
        if reorth {
            // two extra passes over the full basis; the recurrence
            // coefficients stay those of the three-term formula
            let mut extra = vec![czero(); basis.len()];
            orthogonalize(&mut w, &basis, &mut extra, true);
        }
        let norm = w.norm();
        if norm <= breakdown {
            breakdown_step = Some(j + 1);
            next_beta = R::zero();
            break;
        }
        if j + 1 == steps {
            next_beta = norm;
            break;
        }
        betas.push(norm);
        basis.push(w.scale_real(R::one() / norm));
    }

    let mut q = DenseMatrix::zeros(n, basis.len());
    for (j, v) in basis.iter().enumerate() {
        q.set_col(j, v);
    }
    Ok(LanczosFactorization {
        jacobi: JacobiMatrix { alphas, betas },
        q,
        next_beta,
        breakdown_step,
    })
}

/// Per-step gap (sine of the largest principal angle) between
/// `X^{-1} K_j(M; b)` and `K_j(N; c)` with `N = X^{-1} M conj(X)` and
/// `c = X^{-1} b`. The two spaces coincide for invertible `X`.
pub fn krylov_similarity_check<R: RealScalar>(
    m: &DenseMatrix<R>,
    b: &DenseVector<R>,
    x: &DenseMatrix<R>,
    steps: usize,
) -> Result<Vec<R>> {
    let lu = Lu::new(x)?;
    if lu.is_singular() {
        return Err(Error::Singular);
    }
    let xinv = lu.inverse()?;
    let n_mat = xinv.matmul(m).matmul(&x.conj());
    let c_vec = lu.solve(b)?;

    // monomial Krylov vectors for both operators
    let mut k1 = vec![b.clone()];
    let mut k2 = vec![c_vec.clone()];
    for _ in 1..steps {
        k1.push(m.matvec_conj(k1.last().unwrap()));
        k2.push(n_mat.matvec_conj(k2.last().unwrap()));
    }
    let mapped: Vec<DenseVector<R>> = k1.iter().map(|v| lu.solve(v)).collect::<Result<_>>()?;

    let mut gaps = Vec::with_capacity(steps);
    for j in 1..=steps {
        let b1 = orthonormal_basis(&mapped[..j]);
        let b2 = orthonormal_basis(&k2[..j]);
        if b1.cols() != b2.cols() {
            gaps.push(R::one());
            continue;
        }
        // residual of projecting B2 onto span(B1)
        let proj = b1.matmul(&b1.adjoint().matmul(&b2));
        let resid = b2.sub(&proj);
        let sv = singular_values(&resid)?;
        gaps.push(sv[sv.len() - 1].min(R::one()));
    }
    Ok(gaps)
}

/// Orthonormalize a set of vectors by two passes of modified Gram-Schmidt,
/// dropping numerically dependent directions.
fn orthonormal_basis<R: RealScalar>(vs: &[DenseVector<R>]) -> DenseMatrix<R> {
    let n = vs[0].len();
    let mut basis: Vec<DenseVector<R>> = Vec::new();
    for v in vs {
        let scale = v.norm();
        let mut w = v.clone();
        let mut coeffs = vec![czero(); basis.len()];
        orthogonalize(&mut w, &basis, &mut coeffs, true);
        let norm = w.norm();
        if norm > R::from_f64(1e-12) * scale.max(R::eps()) {
            basis.push(w.scale_real(R::one() / norm));
        }
    }
    let mut q = DenseMatrix::zeros(n, basis.len());
    for (j, v) in basis.iter().enumerate() {
        q.set_col(j, v);
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, cabs};
    use num_complex::Complex64;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_complex_matrix(n: usize, seed: u64) -> DenseMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DenseMatrix::from_fn(n, n, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    fn random_vector(n: usize, seed: u64) -> DenseVector<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DenseVector::from_fn(n, |_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    fn symmetrize(a: &DenseMatrix<f64>) -> DenseMatrix<f64> {
        a.add(&a.transpose()).scale(c(0.5, 0.0))
    }

    #[test]
    fn arnoldi_invariant_subspace_breakdown() {
        // real diagonal, b = e1: Krylov space is one-dimensional
        let m = DenseMatrix::diagonal(&[c::<f64>(2.0, 0.0), c(5.0, 0.0)]);
        let f = rlinear_arnoldi(&m, &DenseVector::unit(2, 0), 2, true).unwrap();
        assert_eq!(f.breakdown_step, Some(1));
        assert_eq!(f.steps, 1);
        assert_eq!(f.q.cols(), 1);
        assert!((f.h[(0, 0)] - c(2.0, 0.0)).norm() < 1e-15);
        assert!(f.h[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn arnoldi_permutation_action() {
        let m = DenseMatrix::from_rows(&[
            &[c::<f64>(0.0, 0.0), c(1.0, 0.0)],
            &[c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        let f = rlinear_arnoldi(&m, &DenseVector::unit(2, 0), 2, true).unwrap();
        assert_eq!(f.breakdown_step, Some(2));
        assert_eq!(f.q.cols(), 2);
        let expect = [[0.0, 1.0], [1.0, 0.0], [0.0, 0.0]];
        for (i, row) in expect.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert!(
                    (f.h[(i, j)] - Complex64::new(*want, 0.0)).norm() < 1e-15,
                    "H[{i},{j}]"
                );
            }
        }
    }

    #[test]
    fn arnoldi_relation_random() {
        let n = 12;
        let steps = 8;
        let m = random_complex_matrix(n, 100);
        let b = random_vector(n, 101);
        let f = rlinear_arnoldi(&m, &b, steps, true).unwrap();
        assert!(f.breakdown_step.is_none());
        // M conj(Q_m) = Q H
        let qm = f.q.leading_cols(steps);
        let lhs = m.matmul(&qm.conj());
        let rhs = f.q.matmul(&f.h);
        let err = lhs.sub(&rhs).fro_norm();
        assert!(err <= 1e-12 * m.fro_norm(), "relation defect {err:e}");
        // orthogonality
        let qtq = f.q.adjoint().matmul(&f.q);
        let defect = qtq.sub(&DenseMatrix::identity(f.q.cols())).fro_norm();
        assert!(defect < 1e-12, "orthogonality defect {defect:e}");
        // subdiagonal real and nonnegative
        for j in 0..steps {
            assert!(f.h[(j + 1, j)].im == 0.0 && f.h[(j + 1, j)].re >= 0.0);
        }
    }

    #[test]
    fn arnoldi_spans_monomial_krylov_vectors() {
        let n = 10;
        let m = random_complex_matrix(n, 7);
        let b = random_vector(n, 8);
        let f = rlinear_arnoldi(&m, &b, 5, true).unwrap();
        let mut kvec = b.clone();
        for j in 1..=5 {
            // project the monomial vector on the first j basis columns
            let qj = f.q.leading_cols(j);
            let proj = qj.matvec(&qj.adjoint().matvec(&kvec));
            let resid = kvec.sub(&proj).norm();
            assert!(
                resid <= 1e-10 * kvec.norm(),
                "step {j}: monomial vector escapes the basis by {resid:e}"
            );
            kvec = m.matvec_conj(&kvec);
        }
    }

    #[test]
    fn arnoldi_rejects_bad_inputs() {
        let m = random_complex_matrix(3, 1);
        assert!(matches!(
            rlinear_arnoldi(&m, &DenseVector::zeros(3), 2, true),
            Err(Error::ZeroRhs)
        ));
        assert!(matches!(
            rlinear_arnoldi(&m, &DenseVector::ones(3), 4, true),
            Err(Error::TooManySteps { .. })
        ));
    }

    #[test]
    fn lanczos_two_by_two_hand_case() {
        // M = diag(1,2), b = (1,1)/sqrt(2): alpha = (1.5, 1.5), beta = 0.5
        let m = DenseMatrix::diagonal(&[c::<f64>(1.0, 0.0), c(2.0, 0.0)]);
        let b = DenseVector::from_slice(&[c(1.0, 0.0), c(1.0, 0.0)]);
        let f = cs_lanczos(&m, &b, 2, true).unwrap();
        assert!((f.jacobi.alphas[0] - c(1.5, 0.0)).norm() < 1e-14);
        assert!((f.jacobi.betas[0] - 0.5).abs() < 1e-14);
        assert!((f.jacobi.alphas[1] - c(1.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn lanczos_one_by_one() {
        let lam = c::<f64>(0.3, -0.8);
        let m = DenseMatrix::diagonal(&[lam]);
        let f = cs_lanczos(&m, &DenseVector::ones(1), 1, true).unwrap();
        assert!((f.jacobi.alphas[0] - lam).norm() < 1e-15);
        assert!(f.jacobi.betas.is_empty());
    }

    #[test]
    fn lanczos_matches_arnoldi_on_symmetric_input() {
        let n = 10;
        let m = symmetrize(&random_complex_matrix(n, 21));
        let b = random_vector(n, 22);
        let steps = n - 1;
        let arn = rlinear_arnoldi(&m, &b, steps, true).unwrap();
        let lan = cs_lanczos(&m, &b, steps, true).unwrap();
        assert!(arn.breakdown_step.is_none());
        assert!(lan.breakdown_step.is_none());
        for j in 0..steps {
            assert!(
                (lan.jacobi.alphas[j] - arn.h[(j, j)]).norm() < 1e-10,
                "alpha {j}"
            );
        }
        for j in 0..steps - 1 {
            assert!(
                (lan.jacobi.betas[j] - arn.h[(j + 1, j)].re).abs() < 1e-10,
                "beta {j}"
            );
        }
        assert!((lan.next_beta - arn.h[(steps, steps - 1)].re).abs() < 1e-10);
        // off-tridiagonal part of H is negligible
        for j in 0..steps {
            for i in 0..j.saturating_sub(1) {
                assert!(arn.h[(i, j)].norm() < 1e-10, "H[{i},{j}] not tridiagonal");
            }
        }
        // exhausting the space is reported as breakdown at step n
        let full = rlinear_arnoldi(&m, &b, n, true).unwrap();
        assert_eq!(full.breakdown_step, Some(n));
    }

    #[test]
    fn lanczos_rejects_nonsymmetric() {
        let m = random_complex_matrix(4, 3);
        let b = random_vector(4, 4);
        assert!(matches!(
            cs_lanczos(&m, &b, 3, true),
            Err(Error::NotSymmetric(_))
        ));
    }

    #[test]
    fn similarity_check_identity_and_unitary() {
        let n = 8;
        let m = random_complex_matrix(n, 31);
        let b = random_vector(n, 32);
        let gaps = krylov_similarity_check(&m, &b, &DenseMatrix::identity(n), 5).unwrap();
        for g in &gaps {
            assert!(*g < 1e-12);
        }
        // unitary X: the Arnoldi basis of an unrelated random problem
        let f =
            rlinear_arnoldi(&random_complex_matrix(n, 33), &random_vector(n, 34), n - 1, true)
                .unwrap();
        let x = f.q.leading_cols(n);
        let gaps = krylov_similarity_check(&m, &b, &x, 5).unwrap();
        for g in &gaps {
            assert!(*g < 1e-10, "unitary similarity gap {g:e}");
        }
    }

    #[test]
    fn similarity_check_diagonal_scaling() {
        let n = 3;
        let m = random_complex_matrix(n, 41);
        let b = random_vector(n, 42);
        let x = DenseMatrix::diagonal(&[c(1.0, 0.0), c(10.0, 0.0), c(100.0, 0.0)]);
        let gaps = krylov_similarity_check(&m, &b, &x, 3).unwrap();
        for g in &gaps {
            assert!(*g < 1e-8, "scaled similarity gap {g:e}");
        }
    }

    #[test]
    fn similarity_rejects_singular_x() {
        let m = random_complex_matrix(3, 51);
        let b = random_vector(3, 52);
        let x = DenseMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(krylov_similarity_check(&m, &b, &x, 2).is_err());
    }

    #[test]
    fn coneigenpair_circle_property() {
        // if M conj(z) = lambda z then M conj(e^{i phi} z) = e^{-2i phi} lambda (e^{i phi} z)
        let d = c::<f64>(1.3, 0.7);
        let m = DenseMatrix::diagonal(&[d, c(-0.2, 0.1)]);
        let z = DenseVector::unit(2, 0);
        let lambda = d;
        for phi in [0.3f64, 1.2, 2.9] {
            let rot = c(phi.cos(), phi.sin());
            let zr = z.scale(rot);
            let lhs = m.matvec_conj(&zr);
            let scale = c::<f64>((2.0 * phi).cos(), -(2.0 * phi).sin()) * lambda;
            let rhs = zr.scale(scale);
            assert!(lhs.sub(&rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn lanczos_without_reorth_matches_at_small_depth() {
        let n = 8;
        let m = symmetrize(&random_complex_matrix(n, 55));
        let b = random_vector(n, 56);
        let plain = cs_lanczos(&m, &b, 4, false).unwrap();
        let full = cs_lanczos(&m, &b, 4, true).unwrap();
        for j in 0..4 {
            assert!(cabs(plain.jacobi.alphas[j] - full.jacobi.alphas[j]) < 1e-8);
        }
    }
}
