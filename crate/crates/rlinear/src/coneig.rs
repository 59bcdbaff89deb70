//! Consimilarity decompositions.
//!
//! A matrix is contriangularizable iff the eigenvalues of `M conj(M)` are all
//! real and nonnegative; their square roots are the coneigenvalue moduli
//! (the radii of the spectrum circles of the antilinear operator). The
//! con-Schur form `M = U R U^T` is computed by deflating one coneigenvector
//! at a time; with distinct diagonal moduli the triangular factor splits
//! further into `R = T Lambda conj(T^{-1})`, giving a condiagonalization
//! `M = X Lambda conj(X^{-1})` with `X = U T`.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::eig::{cond2, eig_dense, eig_vector};
use crate::error::{Error, Result};
use crate::lu::Lu;
use crate::mat::{DenseMatrix, DenseVector};
use crate::scalar::{c, cabs, cone, cr, csqrt, czero, unit_phase, RealScalar, C};

/// Relative gap below which coneigenvalue moduli count as degenerate.
pub fn gap_tol<R: RealScalar>() -> R {
    R::from_f64(1e-8)
}

/// Unitary contriangularization `M = U R U^T` with real nonnegative
/// ascending diagonal of `R`.
pub struct ConSchur<R: RealScalar> {
    pub u: DenseMatrix<R>,
    pub r: DenseMatrix<R>,
}

/// Condiagonalization `M = X Lambda conj(X^{-1})`.
pub struct ConDiagonalization<R: RealScalar> {
    pub x: DenseMatrix<R>,
    /// Coneigenvalue moduli, ascending.
    pub lambda: Vec<R>,
    pub cond_x: R,
}

/// Spectrum data transported to the diagonal picture: the nodes
/// `sigma(D^{-1} Lambda conj(D))` with their weights `r_k^2`.
pub struct TransportedNodes<R: RealScalar> {
    pub nodes: Vec<C<R>>,
    pub weights: Vec<R>,
    pub cond_x: R,
}

fn mconj<R: RealScalar>(m: &DenseMatrix<R>) -> DenseMatrix<R> {
    m.matmul(&m.conj())
}

/// Eigenvalues of `M conj(M)` when real and nonnegative within tolerance.
fn checked_squared_moduli<R: RealScalar>(m: &DenseMatrix<R>) -> Result<Vec<R>> {
    let a = mconj(m);
    let scale = a.fro_norm().max(R::eps());
    let tol = R::from_f64(1e-10) * scale;
    let eigs = eig_dense(&a)?;
    let mut out = Vec::with_capacity(eigs.len());
    for e in eigs {
        if e.im.abs() > tol || e.re < -tol {
            return Err(Error::NotContriangularizable(format!(
                "eigenvalue {:?} of M conj(M) is not real nonnegative",
                crate::scalar::demote(e)
            )));
        }
        out.push(e.re.max(R::zero()));
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// Coneigenvalue moduli, ascending: square roots of the eigenvalues of
/// `M conj(M)`. Errors when the matrix is not contriangularizable.
pub fn coneigenvalue_moduli<R: RealScalar>(m: &DenseMatrix<R>) -> Result<Vec<R>> {
    Ok(checked_squared_moduli(m)?
        .into_iter()
        .map(|x| x.sqrt())
        .collect())
}

/// True iff the eigenvalues of `M conj(M)` are real nonnegative within
/// tolerance and their square roots are pairwise separated by more than
/// `rel_gap_tol` relative to the largest modulus. This sufficient condition
/// holds almost surely on the condiagonalizable set and is the predicate
/// used for the Monte Carlo counting.
pub fn is_condiagonalizable<R: RealScalar>(m: &DenseMatrix<R>, rel_gap_tol: R) -> bool {
    let sq = match checked_squared_moduli(m) {
        Ok(v) => v,
        Err(_) => return false,
    };
    let moduli: Vec<R> = sq.into_iter().map(|x| x.sqrt()).collect();
    let largest = moduli.last().copied().unwrap_or_else(R::zero);
    if largest.is_zero() {
        return moduli.len() <= 1;
    }
    for w in moduli.windows(2) {
        if (w[1] - w[0]) <= rel_gap_tol * largest {
            return false;
        }
    }
    true
}

/// Unitary matrix with first column `v` (unit), by a Householder reflector
/// composed with a phase.
fn unitary_with_first_column<R: RealScalar>(v: &DenseVector<R>) -> DenseMatrix<R> {
    let n = v.len();
    let a = v[0];
    let theta = unit_phase(a, R::eps());
    // w = v - e^{i theta} e_1; reflection maps e^{i theta} e_1 to v
    let mut w = v.clone();
    w[0] = w[0] - theta;
    let wnorm = w.norm();
    let mut p = DenseMatrix::<R>::identity(n);
    if wnorm > R::from_f64(1e-14) {
        let beta = R::from_f64(2.0) / (wnorm * wnorm);
        for j in 0..n {
            let mut dot = czero();
            for i in 0..n {
                dot = dot + w[i].conj() * p[(i, j)];
            }
            let f = dot.scale(beta);
            for i in 0..n {
                p[(i, j)] = p[(i, j)] - w[i] * f;
            }
        }
    }
    // fold in the phase on the first column
    for i in 0..n {
        p[(i, 0)] = p[(i, 0)] * theta;
    }
    p
}

fn con_schur_with_seed<R: RealScalar>(m: &DenseMatrix<R>, seed: u64) -> Result<ConSchur<R>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "con-Schur of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let scale = m.fro_norm().max(R::eps());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut u = DenseMatrix::<R>::identity(n);
    let mut work = m.clone();

    for k in 0..n {
        let size = n - k;
        let block = work.submatrix(k, k, size, size);
        let sq = checked_squared_moduli(&block)?;
        let sigma2 = sq[0];
        let sigma = sigma2.sqrt();

        // coneigenvector of the block: eigenvector of B conj(B) with the
        // phase rotated so that B conj(v) = sigma v, sigma >= 0
        let v = if size == 1 {
            DenseVector::ones(1)
        } else {
            let a = mconj(&block);
            eig_vector(&a, cr(sigma2), rng.random::<u64>())?
        };
        let w = block.matvec_conj(&v);
        let mu = w.inner(&v);
        let mut resid = w.clone();
        resid.sub_scaled(mu, &v);
        if resid.norm() > R::from_f64(1e-7) * scale.max(cabs(mu)) {
            return Err(Error::DeflationFailed(format!(
                "coneigenvector residual {:e} at modulus {:e}; clustered coneigenvalues",
                resid.norm().to_f64(),
                sigma.to_f64()
            )));
        }
        let s = csqrt(unit_phase(mu, R::from_f64(1e-14) * scale));
        let v = v.scale(s);

        // embed the deflating unitary and transform the whole matrix so the
        // frozen upper rows keep receiving their right-side updates
        let p = unitary_with_first_column(&v);
        let mut pfull = DenseMatrix::<R>::identity(n);
        for j in 0..size {
            for i in 0..size {
                pfull[(k + i, k + j)] = p[(i, j)];
            }
        }
        work = pfull.adjoint().matmul(&work.matmul(&pfull.conj()));
        u = u.matmul(&pfull);
        // clean the deflated column
        work[(k, k)] = cr(sigma);
        for i in k + 1..n {
            work[(i, k)] = czero();
        }
    }

    let mut r = DenseMatrix::<R>::zeros(n, n);
    for j in 0..n {
        for i in 0..=j {
            r[(i, j)] = work[(i, j)];
        }
    }
    Ok(ConSchur { u, r })
}

/// Con-Schur factorization `M = U R U^T` with the diagonal of `R` real,
/// nonnegative and ascending. Deterministic; see [`con_schur_seeded`] for
/// randomized internal starts.
pub fn con_schur<R: RealScalar>(m: &DenseMatrix<R>) -> Result<ConSchur<R>> {
    con_schur_with_seed(m, 0x5eed)
}

/// Con-Schur with seeded randomized inverse-iteration starts. Different
/// seeds exercise the sign freedom of the factorization.
pub fn con_schur_seeded<R: RealScalar>(m: &DenseMatrix<R>, seed: u64) -> Result<ConSchur<R>> {
    con_schur_with_seed(m, seed)
}

/// Factor an upper triangular `R` with distinct real nonnegative ascending
/// diagonal as `R = T Lambda conj(T^{-1})` with unit upper triangular `T`.
pub(crate) fn upper_condiag_factor<R: RealScalar>(r: &DenseMatrix<R>) -> Result<DenseMatrix<R>> {
    let n = r.rows();
    let mut t = DenseMatrix::<R>::identity(n);
    for k in 1..n {
        let lam_k = r[(k, k)].re;
        for i in (0..k).rev() {
            let mut csum: C<R> = czero();
            for j in i + 1..=k {
                csum = csum + r[(i, j)] * t[(j, k)].conj();
            }
            // solve r_ii conj(t) - lam_k t = -csum
            let rii = r[(i, i)].re;
            let u = csum.re / (lam_k - rii);
            let v = csum.im / (lam_k + rii);
            t[(i, k)] = C::<R>::new(u, v);
        }
    }
    Ok(t)
}

/// Condiagonalization `M = X Lambda conj(X^{-1})`; requires distinct
/// coneigenvalue moduli (relative gap above [`gap_tol`]).
pub fn con_diagonalize<R: RealScalar>(m: &DenseMatrix<R>) -> Result<ConDiagonalization<R>> {
    let cs = con_schur(m)?;
    let n = m.rows();
    let lambda: Vec<R> = (0..n).map(|k| cs.r[(k, k)].re).collect();
    let largest = lambda.last().copied().unwrap_or_else(R::zero);
    for w in lambda.windows(2) {
        if (w[1] - w[0]) <= gap_tol::<R>() * largest.max(R::eps()) {
            return Err(Error::DegenerateConeigenvalues(
                w[0].to_f64(),
                w[1].to_f64(),
            ));
        }
    }
    let t = upper_condiag_factor(&cs.r)?;
    let x = cs.u.matmul(&t);
    let cond_x = cond2(&x)?;
    Ok(ConDiagonalization { x, lambda, cond_x })
}

/// Unitary diagonal `D` with `D^{-1} v` real nonnegative: `d_j = v_j / |v_j|`
/// (1 for zero entries). Returned as the diagonal entries.
pub fn phase_diag<R: RealScalar>(v: &DenseVector<R>) -> Vec<C<R>> {
    (0..v.len())
        .map(|j| {
            let z = v[j];
            if cabs(z).is_zero() {
                cone()
            } else {
                unit_phase(z, R::zero())
            }
        })
        .collect()
}

/// Nodes and weights of the polynomial approximation problem: computes
/// `X, Lambda`, the phase diagonal `D` of `X^{-1} b`, and returns the
/// diagonal of `D^{-1} Lambda conj(D)` (each modulus rotated by
/// `e^{-2 i theta_j}`) with the weights `r_j^2`, `r = D^{-1} X^{-1} b`.
pub fn transported_nodes<R: RealScalar>(
    m: &DenseMatrix<R>,
    b: &DenseVector<R>,
) -> Result<TransportedNodes<R>> {
    let n = m.rows();
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}x{} with rhs length {}",
            m.rows(),
            m.cols(),
            b.len()
        )));
    }
    // a diagonal matrix condiagonalizes explicitly (X a phase diagonal,
    // unitary), with no distinct-moduli requirement
    let mut off = R::zero();
    for j in 0..m.cols() {
        for i in 0..n {
            if i != j {
                off = off.max(cabs(m[(i, j)]));
            }
        }
    }
    if off <= R::from_f64(1e-14) * m.fro_norm().max(R::eps()) {
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for j in 0..n {
            let djj = m[(j, j)];
            let x_phase = csqrt(unit_phase(djj, R::eps()));
            // X^{-1} b = conj(phase) b, then the phase diagonal of that
            let xb = x_phase.conj() * b[j];
            let d = if cabs(xb).is_zero() {
                cone()
            } else {
                unit_phase(xb, R::zero())
            };
            nodes.push(cr(cabs(djj)) * d.conj() / d);
            let r = cabs(xb);
            weights.push(r * r);
        }
        return Ok(TransportedNodes {
            nodes,
            weights,
            cond_x: R::one(),
        });
    }

    let cd = con_diagonalize(m)?;
    let xinv_b = Lu::new(&cd.x)?.solve(b)?;
    let d = phase_diag(&xinv_b);
    let mut nodes = Vec::with_capacity(d.len());
    let mut weights = Vec::with_capacity(d.len());
    for j in 0..d.len() {
        nodes.push(cr(cd.lambda[j]) * d[j].conj() / d[j]);
        let r = cabs(xinv_b[j]);
        weights.push(r * r);
    }
    Ok(TransportedNodes {
        nodes,
        weights,
        cond_x: cd.cond_x,
    })
}

/// For isometries with `U U^T = V V^T`, the connecting factor `R = U^* V`
/// is a real orthogonal matrix with `V = U R`.
pub fn isometry_phase_factor<R: RealScalar>(
    u: &DenseMatrix<R>,
    v: &DenseMatrix<R>,
) -> Result<DenseMatrix<R>> {
    if u.rows() != v.rows() || u.cols() != v.cols() {
        return Err(Error::DimensionMismatch(format!(
            "isometries {}x{} and {}x{}",
            u.rows(),
            u.cols(),
            v.rows(),
            v.cols()
        )));
    }
    let uut = u.matmul(&u.transpose());
    let vvt = v.matmul(&v.transpose());
    let defect = uut.sub(&vvt).fro_norm();
    if defect > R::from_f64(1e-10) * uut.fro_norm().max(R::one()) {
        return Err(Error::InvalidArgument(format!(
            "U U^T != V V^T (defect {:e})",
            defect.to_f64()
        )));
    }
    let r = u.adjoint().matmul(v);
    // contract: real orthogonal and V = U R
    let mut imag = R::zero();
    for j in 0..r.cols() {
        for i in 0..r.rows() {
            imag = imag.max(r[(i, j)].im.abs());
        }
    }
    let orth = r.transpose().matmul(&r).sub(&DenseMatrix::identity(r.cols())).fro_norm();
    let recon = v.sub(&u.matmul(&r)).fro_norm();
    if imag > R::from_f64(1e-8) || orth > R::from_f64(1e-8) || recon > R::from_f64(1e-8) {
        return Err(Error::InvalidArgument(format!(
            "connecting factor is not real orthogonal (imag {:e}, orth {:e}, recon {:e})",
            imag.to_f64(),
            orth.to_f64(),
            recon.to_f64()
        )));
    }
    Ok(r)
}

/// Random unitary matrix (Gram-Schmidt of a seeded Gaussian-ish matrix).
pub fn random_unitary<R: RealScalar>(n: usize, seed: u64) -> DenseMatrix<R> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<DenseVector<R>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut w = DenseVector::<R>::from_fn(n, |_| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        for q in &cols {
            let h = w.inner(q);
            w.sub_scaled(h, q);
        }
        for q in &cols {
            let h = w.inner(q);
            w.sub_scaled(h, q);
        }
        let norm = w.norm();
        if norm > R::from_f64(1e-6) {
            cols.push(w.scale_real(R::one() / norm));
        }
    }
    let mut u = DenseMatrix::zeros(n, n);
    for (j, v) in cols.iter().enumerate() {
        u.set_col(j, v);
    }
    u
}

/// Synthesize a condiagonalizable matrix `M = X Lambda conj(X^{-1})` with
/// moduli spread over [1, 2] and `cond(X)` close to the requested target.
/// Returns the matrix and the ground-truth moduli (ascending).
pub fn synthesize_condiagonalizable<R: RealScalar>(
    n: usize,
    cond_target: f64,
    seed: u64,
) -> Result<(DenseMatrix<R>, Vec<R>)> {
    let u1 = random_unitary::<R>(n, seed.wrapping_mul(2654435761).wrapping_add(1));
    let u2 = random_unitary::<R>(n, seed.wrapping_mul(2246822519).wrapping_add(2));
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    // singular values of X log-spaced between 1 and cond_target
    let mut sx = DenseMatrix::<R>::zeros(n, n);
    for k in 0..n {
        let t = if n > 1 { k as f64 / (n - 1) as f64 } else { 0.0 };
        sx[(k, k)] = c(cond_target.powf(t), 0.0);
    }
    let x = u1.matmul(&sx).matmul(&u2);
    // distinct moduli in [1, 2] with a safe gap, slightly jittered
    let mut lambda: Vec<R> = (0..n)
        .map(|k| {
            let base = 1.0 + k as f64 / n as f64;
            let jitter = 0.2 * (rng.random::<f64>() - 0.5) / n as f64;
            R::from_f64(base + jitter)
        })
        .collect();
    lambda.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lam = DenseMatrix::diagonal(&lambda.iter().map(|l| cr(*l)).collect::<Vec<_>>());
    let xinv = Lu::new(&x)?.inverse()?;
    let m = x.matmul(&lam).matmul(&xinv.conj());
    Ok((m, lambda))
}
