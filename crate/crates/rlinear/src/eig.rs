//! Dense complex eigensolver: Householder reduction to upper Hessenberg form
//! followed by single-shift QR iteration with Wilkinson shifts and deflation.
//! Eigenvectors come from inverse iteration on the shifted matrix.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lu::Lu;
use crate::mat::{DenseMatrix, DenseVector};
use crate::scalar::{c, cabs, cone, cr, csqrt, czero, RealScalar, C};

/// Eigenvalues of the 2x2 matrix [[a, b], [cc, d]].
pub(crate) fn eig2x2<R: RealScalar>(a: C<R>, b: C<R>, cc: C<R>, d: C<R>) -> (C<R>, C<R>) {
    let half = R::from_f64(0.5);
    let mid = (a + d).scale(half);
    let delta = (a - d).scale(half);
    let disc = csqrt(delta * delta + b * cc);
    (mid + disc, mid - disc)
}

/// Complex Givens rotation: returns (c, s, r) with
/// [c s; -conj(s) c] [a; b] = [r; 0], c real.
fn givens<R: RealScalar>(a: C<R>, b: C<R>) -> (R, C<R>, C<R>) {
    let na = cabs(a);
    let nb = cabs(b);
    if nb.is_zero() {
        return (R::one(), czero(), a);
    }
    if na.is_zero() {
        let s = b.conj().scale(R::one() / nb);
        return (R::zero(), s, cr(nb));
    }
    let rr = (na * na + nb * nb).sqrt();
    let sign_a = a.scale(R::one() / na);
    let cos = na / rr;
    let s = (sign_a * b.conj()).scale(R::one() / rr);
    let r = sign_a.scale(rr);
    (cos, s, r)
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg<R: RealScalar>(a: &mut DenseMatrix<R>) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        // reflector zeroing column k below row k+1
        let mut norm2 = R::zero();
        for i in k + 1..n {
            let z = a[(i, k)];
            norm2 = norm2 + z.re * z.re + z.im * z.im;
        }
        let norm = norm2.sqrt();
        if norm.is_zero() {
            continue;
        }
        let x1 = a[(k + 1, k)];
        let sign = if cabs(x1).is_zero() {
            cone()
        } else {
            x1.scale(R::one() / cabs(x1))
        };
        let alpha = -(sign.scale(norm));
        // u = x - alpha e_1
        let mut u: Vec<C<R>> = (k + 1..n).map(|i| a[(i, k)]).collect();
        u[0] = u[0] - alpha;
        let mut unorm2 = R::zero();
        for z in &u {
            unorm2 = unorm2 + z.re * z.re + z.im * z.im;
        }
        if unorm2.is_zero() {
            continue;
        }
        let beta = R::from_f64(2.0) / unorm2;

        // left: rows k+1..n of columns k..n
        for j in k..n {
            let mut dot = czero();
            for (off, ui) in u.iter().enumerate() {
                dot = dot + ui.conj() * a[(k + 1 + off, j)];
            }
            let f = dot.scale(beta);
            for (off, ui) in u.iter().enumerate() {
                a[(k + 1 + off, j)] = a[(k + 1 + off, j)] - *ui * f;
            }
        }
        // right: columns k+1..n of all rows
        for i in 0..n {
            let mut dot = czero();
            for (off, ui) in u.iter().enumerate() {
                dot = dot + a[(i, k + 1 + off)] * *ui;
            }
            let f = dot.scale(beta);
            for (off, ui) in u.iter().enumerate() {
                a[(i, k + 1 + off)] = a[(i, k + 1 + off)] - f * ui.conj();
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = czero();
        }
    }
}

/// One explicit single-shift QR sweep on the active block [lo, hi].
fn qr_sweep<R: RealScalar>(h: &mut DenseMatrix<R>, lo: usize, hi: usize, shift: C<R>) {
    for k in lo..=hi {
        h[(k, k)] = h[(k, k)] - shift;
    }
    let mut rots: Vec<(R, C<R>)> = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (cos, s, r) = givens(h[(k, k)], h[(k + 1, k)]);
        h[(k, k)] = r;
        h[(k + 1, k)] = czero();
        for j in k + 1..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x.scale(cos) + s * y;
            h[(k + 1, j)] = y.scale(cos) - s.conj() * x;
        }
        rots.push((cos, s));
    }
    for (idx, (cos, s)) in rots.iter().enumerate() {
        let k = lo + idx;
        let last = (k + 1).min(hi);
        for i in lo..=last {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x.scale(*cos) + y * s.conj();
            h[(i, k + 1)] = y.scale(*cos) - x * *s;
        }
    }
    for k in lo..=hi {
        h[(k, k)] = h[(k, k)] + shift;
    }
}

/// All eigenvalues of a square complex matrix, with multiplicity.
///
/// Intended for desk scale (n up to a few hundred). Errors when the QR
/// iteration has not isolated every eigenvalue after `30 n` sweeps.
pub fn eig_dense<R: RealScalar>(a: &DenseMatrix<R>) -> Result<Vec<C<R>>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenvalues of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if n == 1 {
        return Ok(vec![a[(0, 0)]]);
    }
    if n == 2 {
        let (l1, l2) = eig2x2(a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
        return Ok(vec![l1, l2]);
    }

    let mut h = a.clone();
    hessenberg(&mut h);
    let scale = h.fro_norm().max(R::eps());
    let mut eigs: Vec<C<R>> = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut sweeps_total = 0usize;
    let mut sweeps_block = 0usize;
    let cap = 30 * n;

    loop {
        // deflate negligible subdiagonals
        let mut lo = hi;
        while lo > 0 {
            let sub = cabs(h[(lo, lo - 1)]);
            let local = cabs(h[(lo - 1, lo - 1)]) + cabs(h[(lo, lo)]);
            let tol = if local.is_zero() {
                R::eps() * scale
            } else {
                R::eps() * local
            };
            if sub <= tol {
                h[(lo, lo - 1)] = czero();
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            eigs.push(h[(hi, hi)]);
            if hi == 0 {
                break;
            }
            hi -= 1;
            sweeps_block = 0;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eig2x2(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            eigs.push(l1);
            eigs.push(l2);
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            sweeps_block = 0;
            continue;
        }

        if sweeps_total >= cap {
            return Err(Error::EigenNoConvergence { block: hi - lo + 1 });
        }

        let shift = if sweeps_block > 0 && sweeps_block % 10 == 0 {
            // exceptional shift to break possible cycles
            h[(hi, hi)] + cr(R::from_f64(0.75) * cabs(h[(hi, hi - 1)]))
        } else {
            let (l1, l2) = eig2x2(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            );
            // Wilkinson: the eigenvalue of the trailing 2x2 closer to h[hi,hi]
            if cabs(l1 - h[(hi, hi)]) < cabs(l2 - h[(hi, hi)]) {
                l1
            } else {
                l2
            }
        };
        qr_sweep(&mut h, lo, hi, shift);
        sweeps_total += 1;
        sweeps_block += 1;
    }
    Ok(eigs)
}

/// Unit eigenvector for a computed eigenvalue, by inverse iteration.
pub fn eig_vector<R: RealScalar>(
    a: &DenseMatrix<R>,
    lambda: C<R>,
    seed: u64,
) -> Result<DenseVector<R>> {
    let n = a.rows();
    let scale = a.fro_norm().max(R::eps());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = DenseVector::from_fn(n, |_| {
        c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let nv = v.norm();
    v = v.scale_real(R::one() / nv);

    let mut offset = R::from_f64(32.0) * R::eps() * scale;
    for _attempt in 0..4 {
        let shifted = lambda + cr(offset);
        let mut b = a.clone();
        for i in 0..n {
            b[(i, i)] = b[(i, i)] - shifted;
        }
        match Lu::new(&b) {
            Ok(lu) if !lu.is_singular() => {
                let mut w = v.clone();
                for _ in 0..4 {
                    w = lu.solve(&w)?;
                    let nw = w.norm();
                    if nw.is_zero() {
                        break;
                    }
                    w = w.scale_real(R::one() / nw);
                }
                let av = a.matvec(&w);
                let mu = av.inner(&w);
                let mut res = av.clone();
                res.sub_scaled(mu, &w);
                if res.norm() <= R::from_f64(1e3 * n as f64) * R::eps() * scale {
                    return Ok(w);
                }
                v = w;
            }
            _ => {}
        }
        offset = offset * R::from_f64(64.0);
    }
    Err(Error::DeflationFailed(format!(
        "inverse iteration did not produce an eigenvector for lambda = {:?}",
        crate::scalar::demote(lambda)
    )))
}

/// Singular values, ascending, via the eigenvalues of A* A.
pub fn singular_values<R: RealScalar>(a: &DenseMatrix<R>) -> Result<Vec<R>> {
    let ata = a.adjoint().matmul(a);
    let mut vals: Vec<R> = eig_dense(&ata)?
        .into_iter()
        .map(|z| z.re.max(R::zero()).sqrt())
        .collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(vals)
}

/// Two-norm condition number.
pub fn cond2<R: RealScalar>(a: &DenseMatrix<R>) -> Result<R> {
    let sv = singular_values(a)?;
    let smin = sv[0];
    let smax = sv[sv.len() - 1];
    if smin.is_zero() {
        return Err(Error::Singular);
    }
    Ok(smax / smin)
}

/// Roots of a real polynomial `coeffs[0] + coeffs[1] x + ...` via the
/// companion matrix. Leading coefficients below `1e-14 * max|coeff|` are
/// trimmed first.
pub fn real_poly_roots<R: RealScalar>(coeffs: &[R]) -> Result<Vec<C<R>>> {
    let mut maxc = R::zero();
    for &x in coeffs {
        maxc = maxc.max(x.abs());
    }
    if maxc.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let tol = R::from_f64(1e-14) * maxc;
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].abs() <= tol {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    let mut comp = DenseMatrix::<R>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = cone();
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = cr(-coeffs[i] / lead);
    }
    eig_dense(&comp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use num_complex::Complex64;

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v
    }

    #[test]
    fn diagonal_eigenvalues() {
        let a = DenseMatrix::diagonal(&[c::<f64>(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let e = sorted_re(eig_dense(&a).unwrap());
        for (k, want) in [1.0, 2.0, 3.0].iter().enumerate() {
            assert!((e[k] - Complex64::new(*want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn nilpotent_eigenvalues() {
        let a = DenseMatrix::from_rows(&[
            &[c::<f64>(0.0, 0.0), c(1.0, 0.0)],
            &[c(0.0, 0.0), c(0.0, 0.0)],
        ]);
        let e = eig_dense(&a).unwrap();
        assert!(e[0].norm() < 1e-15 && e[1].norm() < 1e-15);
    }

    #[test]
    fn trace_and_det_oracle() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 10;
        let a = DenseMatrix::<f64>::from_fn(n, n, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let eigs = eig_dense(&a).unwrap();
        let mut tr = Complex64::new(0.0, 0.0);
        for i in 0..n {
            tr += a[(i, i)];
        }
        let sum: Complex64 = eigs.iter().sum();
        let norm = a.fro_norm();
        assert!((sum - tr).norm() < 1e-10 * norm, "trace defect");
        // product of eigenvalues = det via LU oracle
        let det = Lu::new(&a).unwrap().det();
        let mut prod = Complex64::new(1.0, 0.0);
        for e in &eigs {
            prod *= e;
        }
        assert!(
            (prod - det).norm() < 1e-8 * det.norm(),
            "det defect: {prod} vs {det}"
        );
    }

    #[test]
    fn permutation_similarity_invariance() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 7;
        let a = DenseMatrix::<f64>::from_fn(n, n, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let perm = [2usize, 0, 4, 6, 1, 5, 3];
        let pap = DenseMatrix::from_fn(n, n, |i, j| a[(perm[i], perm[j])]);
        let mut e1 = eig_dense(&a).unwrap();
        let mut e2 = eig_dense(&pap).unwrap();
        let key = |z: &Complex64| (z.re, z.im);
        e1.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        e2.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        let norm = a.fro_norm();
        for (x, y) in e1.iter().zip(&e2) {
            assert!((x - y).norm() < 1e-10 * norm);
        }
    }

    #[test]
    fn eigenvector_by_inverse_iteration() {
        let a = DenseMatrix::from_rows(&[
            &[c::<f64>(2.0, 0.0), c(1.0, 0.0)],
            &[c(0.0, 0.0), c(-1.0, 0.0)],
        ]);
        let v = eig_vector(&a, c(2.0, 0.0), 1).unwrap();
        let av = a.matvec(&v);
        let mut res = av.clone();
        res.sub_scaled(c(2.0, 0.0), &v);
        assert!(res.norm() < 1e-12);
    }

    #[test]
    fn singular_values_of_diagonal() {
        let a = DenseMatrix::diagonal(&[c::<f64>(0.0, 3.0), c(-1.0, 0.0)]);
        let sv = singular_values(&a).unwrap();
        assert!((sv[0] - 1.0).abs() < 1e-12);
        assert!((sv[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn poly_roots_quadratic() {
        // (x-1)(x-4) = 4 - 5x + x^2
        let roots = real_poly_roots(&[4.0f64, -5.0, 1.0]).unwrap();
        let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] - 1.0).abs() < 1e-10);
        assert!((re[1] - 4.0).abs() < 1e-10);
        for z in &roots {
            assert!(z.im.abs() < 1e-10);
        }
    }

    #[test]
    fn dd_eigenvalues_of_small_matrix() {
        use crate::scalar::Dd;
        let a = DenseMatrix::<Dd>::from_rows(&[
            &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            &[c(0.0, 1.0), c(2.0, 0.0), c(1.0, 0.0)],
            &[c(0.0, 0.0), c(0.5, 0.0), c(3.0, 0.0)],
        ]);
        let eigs = eig_dense(&a).unwrap();
        let mut tr = crate::scalar::czero::<Dd>();
        for i in 0..3 {
            tr = tr + a[(i, i)];
        }
        let mut sum = crate::scalar::czero::<Dd>();
        for e in &eigs {
            sum = sum + *e;
        }
        assert!(cabs(sum - tr).to_f64() < 1e-28);
    }
}
