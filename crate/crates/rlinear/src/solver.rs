//! Minimal-residual solvers for `kappa z + M conj(z) = b`.
//!
//! At step `j` the iterate minimizes the residual over the Krylov subspace
//! `K_j`. Writing `z = Q_j y` and using the Arnoldi relation reduces the step
//! to a small least-squares problem in `y` that is R-linear because of the
//! conjugation; it is solved exactly by realification into a real
//! `2(j+1) x 2j` least-squares solve, rebuilt from scratch every iteration.
//!
//! The starting guess is always zero, so the 0th trace entry is `||b||`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::krylov::{cs_lanczos, rlinear_arnoldi};
use crate::ls::{solve_real_ls, RealMatrix};
use crate::mat::{apply_antilinear, DenseMatrix, DenseVector};
use crate::scalar::{czero, RealScalar, C};

/// Per-iteration residual norms, absolute, starting with `||b||`.
#[derive(Clone, Debug)]
pub struct ResidualTrace<R: RealScalar> {
    pub residual_norms: Vec<R>,
    pub rhs_norm: R,
}

impl<R: RealScalar> ResidualTrace<R> {
    pub fn relative(&self) -> Vec<R> {
        self.residual_norms
            .iter()
            .map(|r| *r / self.rhs_norm)
            .collect()
    }

    /// Number of iterations recorded (trace length minus the 0th entry).
    pub fn iterations(&self) -> usize {
        self.residual_norms.len().saturating_sub(1)
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport<R: RealScalar> {
    pub solution: DenseVector<R>,
    pub trace: ResidualTrace<R>,
    pub iterations: usize,
    pub converged: bool,
}

/// Solve the realified projected problem
/// `min_y || kappa Itilde y + H conj(y) - beta e_1 ||` and return the
/// minimizer together with the residual norm.
fn solve_projected<R: RealScalar>(
    kappa: C<R>,
    h: &DenseMatrix<R>,
    beta: R,
) -> Result<(Vec<C<R>>, R)> {
    let rows = h.rows();
    let cols = h.cols();
    let mut a = RealMatrix::<R>::zeros(2 * rows, 2 * cols);
    for k in 0..cols {
        for i in 0..rows {
            let mut cu = h[(i, k)];
            if i == k {
                cu = cu + kappa;
            }
            // column of u_k = Re(y_k)
            a[(i, k)] = cu.re;
            a[(rows + i, k)] = cu.im;
            // column of v_k = Im(y_k): i*(kappa e_k - h_k)
            let mut cv = -h[(i, k)];
            if i == k {
                cv = cv + kappa;
            }
            let cv = C::<R>::new(-cv.im, cv.re);
            a[(i, cols + k)] = cv.re;
            a[(rows + i, cols + k)] = cv.im;
        }
    }
    let mut rhs = vec![R::zero(); 2 * rows];
    rhs[0] = beta;
    let sol = solve_real_ls(&a, &rhs)?;
    let y: Vec<C<R>> = (0..cols)
        .map(|k| C::<R>::new(sol.x[k], sol.x[cols + k]))
        .collect();
    Ok((y, sol.residual_norm))
}

fn assemble_solution<R: RealScalar>(q: &DenseMatrix<R>, y: &[C<R>]) -> DenseVector<R> {
    let mut z = DenseVector::zeros(q.rows());
    for (k, yk) in y.iter().enumerate() {
        if yk.is_zero() {
            continue;
        }
        let col = q.col(k);
        for i in 0..q.rows() {
            z[i] = z[i] + col[i] * *yk;
        }
    }
    z
}

/// R-linear GMRES for `kappa z + M conj(z) = b` with zero starting guess.
///
/// Terminates when the relative residual drops to `tol` or after `maxit`
/// steps (clamped to the dimension). On Krylov breakdown the exact solution
/// lies in the current invariant subspace; the solver finishes the projected
/// solve there and reports convergence.
pub fn rgmres<R: RealScalar>(
    kappa: C<R>,
    m: &DenseMatrix<R>,
    b: &DenseVector<R>,
    tol: R,
    maxit: usize,
) -> Result<SolveReport<R>> {
    let n = m.rows();
    let maxit = maxit.min(n);
    let fact = rlinear_arnoldi(m, b, maxit, true)?;
    let beta = b.norm();
    let mut trace = vec![beta];
    let mut best: Option<(Vec<C<R>>, usize)> = None;
    let mut converged = false;

    for j in 1..=fact.steps {
        let rows = (j + 1).min(fact.q.cols());
        let h = fact.h.submatrix(0, 0, rows, j);
        let (y, resid) = solve_projected(kappa, &h, beta)?;
        trace.push(resid);
        best = Some((y, j));
        if resid <= tol * beta {
            converged = true;
            break;
        }
    }
    if fact.breakdown_step.is_some() && !converged && best.as_ref().map(|(_, j)| *j) == Some(fact.steps) {
        // invariant subspace reached: the projected solve is exact
        converged = true;
    }

    let (solution, iterations) = match best {
        Some((y, j)) => (assemble_solution(&fact.q.leading_cols(j), &y), j),
        None => (DenseVector::zeros(n), 0),
    };
    Ok(SolveReport {
        solution,
        trace: ResidualTrace {
            residual_norms: trace,
            rhs_norm: beta,
        },
        iterations,
        converged,
    })
}

/// CSYM: the `kappa = 0`, `M^T = M` case of R-linear GMRES, driven by the
/// complex symmetric Lanczos tridiagonalization instead of full Arnoldi.
pub fn csym<R: RealScalar>(
    m: &DenseMatrix<R>,
    b: &DenseVector<R>,
    tol: R,
    maxit: usize,
) -> Result<SolveReport<R>> {
    let n = m.rows();
    let maxit = maxit.min(n);
    let fact = cs_lanczos(m, b, maxit, true)?;
    let beta = b.norm();
    let mut trace = vec![beta];
    let mut best: Option<(Vec<C<R>>, usize)> = None;
    let mut converged = false;
    let steps = fact.jacobi.order();

    for j in 1..=steps {
        let h = fact.projected(j);
        let (y, resid) = solve_projected(czero(), &h, beta)?;
        trace.push(resid);
        best = Some((y, j));
        if resid <= tol * beta {
            converged = true;
            break;
        }
    }
    if fact.breakdown_step.is_some() && !converged && best.as_ref().map(|(_, j)| *j) == Some(steps) {
        converged = true;
    }

    let (solution, iterations) = match best {
        Some((y, j)) => (assemble_solution(&fact.q.leading_cols(j), &y), j),
        None => (DenseVector::zeros(n), 0),
    };
    Ok(SolveReport {
        solution,
        trace: ResidualTrace {
            residual_norms: trace,
            rhs_norm: beta,
        },
        iterations,
        converged,
    })
}

/// Reference minimum: builds the monomial Krylov basis explicitly and solves
/// the full realified least-squares problem over it. Test oracle; `j` is
/// clamped to the dimension (the subspace stops growing there).
pub fn brute_force_minresidual<R: RealScalar>(
    kappa: C<R>,
    m: &DenseMatrix<R>,
    b: &DenseVector<R>,
    j: usize,
) -> Result<R> {
    let n = m.rows();
    if b.norm().is_zero() {
        return Err(Error::ZeroRhs);
    }
    let j = j.min(n).max(1);

    // monomial Krylov vectors, normalized for conditioning
    let mut basis: Vec<DenseVector<R>> = Vec::with_capacity(j);
    let mut k = b.clone();
    for _ in 0..j {
        let norm = k.norm();
        if norm.is_zero() {
            break;
        }
        let unit = k.scale_real(R::one() / norm);
        basis.push(unit.clone());
        k = m.matvec_conj(&unit);
    }
    let jj = basis.len();

    // condition estimate of the realified basis
    let mut bm = DenseMatrix::zeros(n, jj);
    for (idx, v) in basis.iter().enumerate() {
        bm.set_col(idx, v);
    }
    let sv = crate::eig::singular_values(&bm)?;
    let smin = sv[0];
    let smax = sv[sv.len() - 1];
    if smin <= R::zero() || smax / smin > R::from_f64(1e12) {
        return Err(Error::IllConditionedBasis(if smin <= R::zero() {
            f64::INFINITY
        } else {
            (smax / smin).to_f64()
        }));
    }

    // columns: operator applied to v and to i v for each basis vector
    let mut a = RealMatrix::<R>::zeros(2 * n, 2 * jj);
    for (idx, v) in basis.iter().enumerate() {
        let av = apply_antilinear(kappa, m, v)?;
        let iv = v.scale(C::<R>::new(R::zero(), R::one()));
        let aiv = apply_antilinear(kappa, m, &iv)?;
        for i in 0..n {
            a[(i, idx)] = av[i].re;
            a[(n + i, idx)] = av[i].im;
            a[(i, jj + idx)] = aiv[i].re;
            a[(n + i, jj + idx)] = aiv[i].im;
        }
    }
    let mut rhs = vec![R::zero(); 2 * n];
    for i in 0..n {
        rhs[i] = b[i].re;
        rhs[n + i] = b[i].im;
    }
    match solve_real_ls(&a, &rhs) {
        Ok(sol) => Ok(sol.residual_norm),
        Err(Error::RankDeficient) => Err(Error::IllConditionedBasis(f64::INFINITY)),
        Err(e) => Err(e),
    }
}
