//! Convergence bounds: the discrete min-max polynomial problem
//! `E_j = min_{p} max_{lambda in nodes} |kappa p(lambda) + lambda conj(p(lambda)) - 1|`
//! over the degree-`(j-1)` polyanalytic class, solved by Lawson's
//! iteratively reweighted least squares, and the per-step bound
//! `B_j = cond(X) * E_j * ||b||` assembled from the transported spectrum.

use crate::coneig::transported_nodes;
use crate::error::{Error, Result};
use crate::krylov::sym_tol;
use crate::ls::{solve_real_ls, RealMatrix};
use crate::mat::{DenseMatrix, DenseVector};
use crate::par::maybe_par_map;
use crate::polyspace::{interpolate_r2, NodeSystem, R2Polynomial};
use crate::scalar::{cabs, czero, RealScalar, C};

/// Relative spread at which the Lawson iteration is declared converged.
pub fn lawson_tol<R: RealScalar>() -> R {
    R::from_f64(1e-8)
}

const LAWSON_CAP: usize = 500;
const WEIGHT_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug)]
pub struct LawsonResult<R: RealScalar> {
    /// Max-norm of the residual of the returned polynomial: an upper bound
    /// for (and at convergence the value of) the min-max problem.
    pub e: R,
    pub p: R2Polynomial<R>,
    /// Final Lawson weights (a probability vector over the nodes).
    pub weights: Vec<R>,
    /// Primal-dual gap ratio `(max - weighted rms)/max` of the returned
    /// iterate; bounds the distance of `e` from the true minimum.
    pub spread: R,
    pub converged: bool,
    pub iterations: usize,
}

/// Monomial ladder values `1, l, |l|^2, l |l|^2, ...` at one point.
fn ladder_values<R: RealScalar>(lambda: C<R>, count: usize) -> Vec<C<R>> {
    let x = cabs(lambda) * cabs(lambda);
    let mut out = Vec::with_capacity(count);
    let mut radial = R::one();
    for i in 0..count {
        if i % 2 == 0 {
            out.push(C::<R>::new(radial, R::zero()));
        } else {
            out.push(lambda.scale(radial));
            radial = radial * x;
        }
    }
    out
}

/// Residuals `kappa p(l_k) + l_k conj(p(l_k)) - 1` for coefficient vector c.
fn residuals<R: RealScalar>(
    nodes: &[C<R>],
    ladders: &[Vec<C<R>>],
    kappa: C<R>,
    coeffs: &[C<R>],
) -> Vec<C<R>> {
    nodes
        .iter()
        .zip(ladders)
        .map(|(lambda, lad)| {
            let mut p = czero();
            for (ci, mi) in coeffs.iter().zip(lad) {
                p = p + *ci * *mi;
            }
            kappa * p + *lambda * p.conj() - C::<R>::new(R::one(), R::zero())
        })
        .collect()
}

/// Exact per-node solve of `kappa t + lambda conj(t) = 1`; fails when
/// `|kappa| = |lambda|` (singular realification).
fn node_target<R: RealScalar>(kappa: C<R>, lambda: C<R>) -> Option<C<R>> {
    let det = cabs(kappa) * cabs(kappa) - cabs(lambda) * cabs(lambda);
    let scale = cabs(kappa).max(cabs(lambda)).max(R::eps());
    if det.abs() <= R::from_f64(1e-13) * scale * scale {
        return None;
    }
    // realified 2x2: [Re(k+l), -Im(k-l); Im(k+l), Re(k-l)] [u; v] = [1; 0]
    let a = kappa + lambda;
    let d = kappa - lambda;
    let u = d.re / det;
    let v = -a.im / det;
    // check: the closed form follows from Cramer on the system above
    let t = C::<R>::new(u, v);
    let resid = kappa * t + lambda * t.conj() - C::<R>::new(R::one(), R::zero());
    if cabs(resid) <= R::from_f64(1e-10) {
        Some(t)
    } else {
        None
    }
}

/// Interpolation regime: enough coefficients to zero the residual at every
/// node. Returns the interpolating polynomial when each per-node target is
/// solvable and the nodes form a valid system.
fn try_interpolation_regime<R: RealScalar>(
    nodes: &[C<R>],
    kappa: C<R>,
    degree_index: usize,
) -> Option<LawsonResult<R>> {
    if degree_index + 1 < nodes.len() {
        return None;
    }
    let targets: Option<Vec<C<R>>> = nodes.iter().map(|l| node_target(kappa, *l)).collect();
    let targets = targets?;
    let ns = NodeSystem::new(nodes.to_vec(), vec![R::one(); nodes.len()]).ok()?;
    let p = interpolate_r2(&ns, &targets).ok()?;
    // pad into the requested class
    let mut coeffs = p.coeffs().to_vec();
    coeffs.resize(degree_index + 1, czero());
    let p = R2Polynomial::new(coeffs);
    let ladders: Vec<Vec<C<R>>> = nodes
        .iter()
        .map(|l| ladder_values(*l, degree_index + 1))
        .collect();
    let res = residuals(nodes, &ladders, kappa, p.coeffs());
    let e = res.iter().fold(R::zero(), |acc, r| acc.max(cabs(*r)));
    if e > R::from_f64(1e-8) {
        return None;
    }
    let n = nodes.len();
    Some(LawsonResult {
        e,
        p,
        weights: vec![R::one() / R::from_f64(n as f64); n],
        spread: R::zero(),
        converged: true,
        iterations: 0,
    })
}

/// Discrete Chebyshev problem by Lawson iteration: weighted least squares
/// with the multiplicative weight update `w_k <- w_k |res_k|`, renormalized,
/// until the spread `(max - weighted rms)/max` falls below [`lawson_tol`].
/// Returns best-so-far with `converged = false` at the iteration cap.
pub fn lawson_minmax<R: RealScalar>(
    nodes: &[C<R>],
    kappa: C<R>,
    degree_index: usize,
) -> Result<LawsonResult<R>> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("empty node set".into()));
    }
    // the max over the node set ignores multiplicity; duplicates would only
    // make the least-squares matrix rank deficient
    let scale = nodes.iter().fold(R::zero(), |a, z| a.max(cabs(*z))).max(R::one());
    let mut nodes_dedup: Vec<C<R>> = Vec::with_capacity(nodes.len());
    for z in nodes {
        if nodes_dedup
            .iter()
            .all(|w| cabs(*w - *z) > R::from_f64(1e-12) * scale)
        {
            nodes_dedup.push(*z);
        }
    }
    let nodes = &nodes_dedup[..];
    let n = nodes.len();
    if let Some(hit) = try_interpolation_regime(nodes, kappa, degree_index) {
        return Ok(hit);
    }

    let dim = degree_index + 1;
    let ladders: Vec<Vec<C<R>>> = nodes.iter().map(|l| ladder_values(*l, dim)).collect();
    let mut weights = vec![R::one() / R::from_f64(n as f64); n];
    let floor = R::from_f64(WEIGHT_FLOOR);
    let mut best: Option<(R, Vec<C<R>>, Vec<R>, R)> = None;
    let mut iterations = 0;

    for iter in 0..LAWSON_CAP {
        iterations = iter + 1;
        // weighted realified least squares
        let mut a = RealMatrix::<R>::zeros(2 * n, 2 * dim);
        let mut rhs = vec![R::zero(); 2 * n];
        for (k, lad) in ladders.iter().enumerate() {
            let s = weights[k].sqrt();
            let lambda = nodes[k];
            for (i, mi) in lad.iter().enumerate() {
                // d res / d Re(c_i) and d res / d Im(c_i)
                let cu = kappa * *mi + lambda * mi.conj();
                let cv_raw = kappa * *mi - lambda * mi.conj();
                let cv = C::<R>::new(-cv_raw.im, cv_raw.re);
                a[(k, i)] = cu.re * s;
                a[(n + k, i)] = cu.im * s;
                a[(k, dim + i)] = cv.re * s;
                a[(n + k, dim + i)] = cv.im * s;
            }
            rhs[k] = s;
        }
        let sol = match solve_real_ls(&a, &rhs) {
            Ok(s) => s,
            Err(e) => {
                if let Some((e_best, c_best, w_best, spread)) = best {
                    return Ok(LawsonResult {
                        e: e_best,
                        p: R2Polynomial::new(c_best),
                        weights: w_best,
                        spread,
                        converged: false,
                        iterations,
                    });
                }
                return Err(e);
            }
        };
        let coeffs: Vec<C<R>> = (0..dim)
            .map(|i| C::<R>::new(sol.x[i], sol.x[dim + i]))
            .collect();
        let res = residuals(nodes, &ladders, kappa, &coeffs);
        let mut emax = R::zero();
        let mut wrms = R::zero();
        for (r, w) in res.iter().zip(&weights) {
            let m = cabs(*r);
            emax = emax.max(m);
            wrms = wrms + *w * m * m;
        }
        let wrms = wrms.sqrt();
        let spread = if emax.is_zero() {
            R::zero()
        } else {
            (emax - wrms) / emax
        };
        if best.as_ref().map(|(e, _, _, _)| emax < *e).unwrap_or(true) {
            best = Some((emax, coeffs, weights.clone(), spread));
        }
        if emax <= R::from_f64(1e-14) || (emax - wrms) <= lawson_tol::<R>() * emax {
            let (e, c, w, spread) = best.unwrap();
            return Ok(LawsonResult {
                e,
                p: R2Polynomial::new(c),
                weights: w,
                spread,
                converged: true,
                iterations,
            });
        }
        // multiplicative update with a floor against node dropout
        let mut total = R::zero();
        for (w, r) in weights.iter_mut().zip(&res) {
            *w = (*w * cabs(*r)).max(floor);
            total = total + *w;
        }
        for w in weights.iter_mut() {
            *w = *w / total;
        }
    }
    let (e, c, w, spread) = best.expect("at least one Lawson iteration ran");
    Ok(LawsonResult {
        e,
        p: R2Polynomial::new(c),
        weights: w,
        spread,
        converged: false,
        iterations,
    })
}

/// Per-step bound values for a condiagonalizable system.
#[derive(Clone, Debug)]
pub struct BoundTrace<R: RealScalar> {
    /// Raw min-max values `E_j`, `j = 1..=steps`.
    pub e: Vec<R>,
    /// `B_j = cond(X) * E_j * ||b||`.
    pub b: Vec<R>,
    pub converged: Vec<bool>,
    pub cond_x: R,
}

/// Computes the transported nodes of `(M, b)` and the min-max values
/// `E_j` for `j = 1..=steps`. For complex symmetric `M` the transport is
/// unitary and `cond(X) = 1` is used exactly. Per-step solves are
/// independent and run in parallel when the `parallel` feature is on.
pub fn gmres_bound_trace<R: RealScalar>(
    m: &DenseMatrix<R>,
    b: &DenseVector<R>,
    kappa: C<R>,
    steps: usize,
) -> Result<BoundTrace<R>> {
    let tn = transported_nodes(m, b)?;
    let symmetric = m.symmetry_defect() <= sym_tol::<R>() * m.fro_norm().max(R::eps());
    let cond_x = if symmetric { R::one() } else { tn.cond_x };
    let bnorm = b.norm();

    let results: Vec<Result<LawsonResult<R>>> = maybe_par_map(
        (1..=steps).collect::<Vec<_>>(),
        |j| lawson_minmax(&tn.nodes, kappa, j - 1),
    );
    let mut e = Vec::with_capacity(steps);
    let mut bv = Vec::with_capacity(steps);
    let mut conv = Vec::with_capacity(steps);
    for r in results {
        let r = r?;
        e.push(r.e);
        bv.push(cond_x * r.e * bnorm);
        conv.push(r.converged);
    }
    Ok(BoundTrace {
        e,
        b: bv,
        converged: conv,
        cond_x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coneig::synthesize_condiagonalizable;
    use crate::scalar::c;
    use crate::solver::{csym, rgmres};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_real_nodes_constant_polynomial() {
        // nodes {1, 2}, kappa = 0, constant p: equalize |a-1| and |2a-1|
        // at conj(a) = 2/3, E = 1/3
        let nodes = [c::<f64>(1.0, 0.0), c(2.0, 0.0)];
        let r = lawson_minmax(&nodes, c(0.0, 0.0), 0).unwrap();
        assert!(r.converged);
        assert!((r.e - 1.0 / 3.0).abs() < 1e-7, "E = {}", r.e);
        // weights stay a probability vector
        let sum: f64 = r.weights.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(r.weights.iter().all(|w| *w >= 0.0));
    }

    #[test]
    fn single_node_is_interpolation() {
        let nodes = [c::<f64>(0.7, -1.1)];
        let r = lawson_minmax(&nodes, c(0.0, 0.0), 0).unwrap();
        assert!(r.converged);
        assert!(r.e < 1e-12, "E = {:e}", r.e);
        // p = conj(1/lambda)
        let want = (c::<f64>(1.0, 0.0) / nodes[0]).conj();
        assert!((r.p.coeffs()[0] - want).norm() < 1e-10);
    }

    #[test]
    fn matches_grid_search_at_tiny_degree() {
        // spiral-ish nodes, constant polynomial: compare against a dense
        // 2-D grid search over the complex coefficient
        let nodes: Vec<_> = (0..5)
            .map(|k| {
                let r = 1.0 + k as f64 / 4.0;
                let a = 0.8 * k as f64;
                c::<f64>(r * a.cos(), r * a.sin())
            })
            .collect();
        let got = lawson_minmax(&nodes, c(0.0, 0.0), 0).unwrap();
        let mut best = f64::INFINITY;
        let steps = 400;
        for i in 0..=steps {
            for j in 0..=steps {
                let a = c::<f64>(
                    -1.2 + 2.4 * i as f64 / steps as f64,
                    -1.2 + 2.4 * j as f64 / steps as f64,
                );
                let mut worst = 0.0f64;
                for l in &nodes {
                    let v = (*l * a.conj() - c(1.0, 0.0)).norm();
                    worst = worst.max(v);
                }
                best = best.min(worst);
            }
        }
        // both sit above the true minimum: the grid by its resolution, the
        // Lawson value by its convergence tolerance
        assert!(
            (got.e - best).abs() <= 2e-2,
            "lawson {} vs grid {}",
            got.e,
            best
        );
    }

    #[test]
    fn interpolation_regime_is_exact_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let nodes: Vec<_> = (0..4)
            .map(|k| {
                let r = 0.9 + 0.4 * k as f64;
                let a = 2.3 * rng.random::<f64>();
                c::<f64>(r * a.cos(), r * a.sin())
            })
            .collect();
        let r = lawson_minmax(&nodes, c(0.0, 0.0), 4).unwrap();
        assert!(r.converged);
        assert!(r.e < 1e-9, "interpolation regime E = {:e}", r.e);
    }

    #[test]
    fn e_values_decrease_with_degree() {
        let nodes: Vec<_> = (0..6)
            .map(|k| {
                let r = 1.0 + 0.3 * k as f64;
                let a = 1.1 * k as f64;
                c::<f64>(r * a.cos(), r * a.sin())
            })
            .collect();
        let mut prev = f64::INFINITY;
        for d in 0..6 {
            let r = lawson_minmax(&nodes, c(1.0, 0.0), d).unwrap();
            assert!(
                r.e <= prev + 1e-9,
                "E at degree {d} = {} above previous {prev}",
                r.e
            );
            prev = r.e;
        }
    }

    #[test]
    fn bound_dominates_solver_residual() {
        // Theorem-style inequality on synthesized condiagonalizable systems
        for (seed, kappa) in [(1u64, c::<f64>(0.0, 0.0)), (2, c(1.0, 0.0)), (3, c(1.0, 1.0))] {
            let (m, _) = synthesize_condiagonalizable::<f64>(8, 40.0, seed).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let b = DenseVector::from_fn(8, |_| {
                c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let trace = gmres_bound_trace(&m, &b, kappa, 8).unwrap();
            let rep = rgmres(kappa, &m, &b, 1e-16, 8).unwrap();
            for j in 1..rep.trace.residual_norms.len().min(9) {
                let resid = rep.trace.residual_norms[j];
                let bound = trace.b[j - 1];
                assert!(
                    resid <= bound + 1e-8 * rep.trace.rhs_norm,
                    "seed {seed} step {j}: residual {resid:e} above bound {bound:e}"
                );
            }
        }
    }

    #[test]
    fn identity_system_first_bound_is_zero() {
        let m = DenseMatrix::<f64>::identity(4);
        let b = DenseVector::from_fn(4, |i| c(1.0 + i as f64, 0.0));
        let trace = gmres_bound_trace(&m, &b, c(0.0, 0.0), 2).unwrap();
        assert!(trace.b[0] < 1e-8, "B_1 = {:e}", trace.b[0]);
    }

    #[test]
    fn lawson_weights_certify_sharpness_on_diagonal_systems() {
        // the min-max equals the CSYM residual when the right-hand side
        // carries the optimal (Lawson) weights: max_w min_p = min_p max_w
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 6;
        let diag: Vec<_> = (0..n)
            .map(|k| {
                let r = 1.0 + 9.0 * k as f64 / (n - 1) as f64;
                let a = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                c::<f64>(r * a.cos(), r * a.sin())
            })
            .collect();
        let m = DenseMatrix::diagonal(&diag);
        for j in [2usize, 3] {
            let lw = lawson_minmax(&diag, c(0.0, 0.0), j - 1).unwrap();
            // rhs carrying the Lawson weights: the step-j residual is the
            // weighted least-squares dual value, which sits within the
            // reported primal-dual gap of the min-max value
            let b = DenseVector::from_fn(n, |k| c(lw.weights[k].sqrt(), 0.0));
            let rep = csym(&m, &b, 1e-15, n).unwrap();
            let resid = rep.trace.residual_norms[j] / rep.trace.rhs_norm;
            assert!(
                resid <= lw.e * (1.0 + 1e-9) + 1e-12,
                "step {j}: dual {resid:e} above primal {:e}",
                lw.e
            );
            assert!(
                lw.e - resid <= (lw.spread + 1e-6) * lw.e,
                "step {j}: gap {:e} beyond reported spread {:e}",
                lw.e - resid,
                lw.spread
            );
        }
    }
}
