//! Diagonal spiral-spectrum experiment suite.
//!
//! Every experiment solves `D conj(x) = r` by CSYM, where `D` is diagonal
//! with entries `d_jj = R_j e^{2 pi i phi_j}`, the radii `R_j` interpolate
//! linearly from 1 to 10 and `r` is the all-ones vector. The five families
//! differ in the angle rule; random quantities draw from a fixed seeded
//! stream so runs are reproducible bit for bit.
//!
//! The diagonal is generated in the working precision: angles are assembled
//! with scalar arithmetic (not rounded through `f64`), which is what makes
//! the clean-versus-roundtrip comparison of the first family meaningful in
//! double-double runs.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mat::{DenseMatrix, DenseVector};
use crate::par::maybe_par_map;
use crate::scalar::{cr, RealScalar, C};
use crate::solver::{csym, SolveReport};

/// Configuration shared by all experiment families.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n: usize,
    pub seed: u64,
    /// Relative residual target; the precision default when `None`.
    pub tol: Option<f64>,
    /// Iteration cap; the dimension when `None`.
    pub maxit: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 100,
            seed: 1,
            tol: None,
            maxit: None,
        }
    }
}

/// One solved instance: the diagonal, a label for plots and the solver
/// report.
pub struct ExampleRun<R: RealScalar> {
    pub label: String,
    pub diag: Vec<C<R>>,
    pub report: SolveReport<R>,
}

/// Uniform draw on [0, 1) refined past `f64` granularity so that
/// double-double runs receive full-precision angles.
fn uniform_refined<R: RealScalar>(rng: &mut ChaCha8Rng) -> R {
    let hi: f64 = rng.random();
    let lo: f64 = rng.random();
    R::from_f64(hi) + R::from_f64(lo) * R::from_f64(2f64.powi(-53))
}

/// `d_jj = R_j e^{2 pi i phi_j}` with linearly interpolated radii.
pub fn spiral_diagonal<R: RealScalar>(phis: &[R]) -> Vec<C<R>> {
    let n = phis.len();
    let denom = R::from_f64((n - 1) as f64);
    phis.iter()
        .enumerate()
        .map(|(idx, phi)| {
            let radius = R::one() + R::from_f64(9.0) * R::from_f64(idx as f64) / denom;
            let (s, c) = (R::tau() * *phi).sin_cos();
            C::<R>::new(radius * c, radius * s)
        })
        .collect()
}

/// Linear angle interpolation from 0 to `end` over `n` points.
fn linear_sweep<R: RealScalar>(n: usize, end: f64) -> Vec<R> {
    let denom = R::from_f64((n - 1) as f64);
    (0..n)
        .map(|j| R::from_f64(end) * R::from_f64(j as f64) / denom)
        .collect()
}

fn solve_diagonal<R: RealScalar>(
    label: String,
    diag: Vec<C<R>>,
    cfg: &ExperimentConfig,
) -> Result<ExampleRun<R>> {
    let n = diag.len();
    let m = DenseMatrix::diagonal(&diag);
    let b = DenseVector::from_fn(n, |_| cr(R::one()));
    let tol = cfg.tol.map(R::from_f64).unwrap_or_else(R::default_solve_tol);
    let maxit = cfg.maxit.unwrap_or(n);
    let report = csym(&m, &b, tol, maxit)?;
    Ok(ExampleRun {
        label,
        diag,
        report,
    })
}

/// Run one experiment family (1 through 5); returns one solved run per
/// parameter set. Independent runs execute in parallel when the `parallel`
/// feature is on.
pub fn run_example<R: RealScalar>(k: usize, cfg: &ExperimentConfig) -> Result<Vec<ExampleRun<R>>> {
    if cfg.n < 2 {
        return Err(Error::InvalidArgument("experiments need n >= 2".into()));
    }
    let n = cfg.n;
    match k {
        1 => {
            // constant angle 1/10; the second run pushes the diagonal
            // through f64 and back before solving
            let phi = R::one() / R::from_f64(10.0);
            let phis = vec![phi; n];
            let diag = spiral_diagonal(&phis);
            let roundtrip: Vec<C<R>> = diag
                .iter()
                .map(|z| C::<R>::new(R::from_f64(z.re.to_f64()), R::from_f64(z.im.to_f64())))
                .collect();
            let jobs = vec![
                ("clean".to_string(), diag),
                ("roundtrip".to_string(), roundtrip),
            ];
            collect_runs(jobs, cfg)
        }
        2 => {
            let jobs = (1..=5)
                .map(|big_n| {
                    (
                        format!("N={big_n}"),
                        spiral_diagonal(&linear_sweep::<R>(n, big_n as f64)),
                    )
                })
                .collect();
            collect_runs(jobs, cfg)
        }
        3 | 4 => {
            // base sweep 0..1 plus a uniform [0, 1e-10] perturbation on a
            // prefix (family 3) or suffix (family 4)
            let base = linear_sweep::<R>(n, 1.0);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let rho: Vec<R> = (0..n)
                .map(|_| uniform_refined::<R>(&mut rng) * R::from_f64(1e-10))
                .collect();
            let sizes = [n / 4, n / 2, 3 * n / 4, n];
            let jobs = sizes
                .iter()
                .map(|&count| {
                    let phis: Vec<R> = base
                        .iter()
                        .zip(&rho)
                        .enumerate()
                        .map(|(j, (phi, r))| {
                            let perturb = if k == 3 { j < count } else { j >= n - count };
                            if perturb {
                                *phi + *r
                            } else {
                                *phi
                            }
                        })
                        .collect();
                    let name = if k == 3 { "k" } else { "K" };
                    (format!("{name}={count}"), spiral_diagonal(&phis))
                })
                .collect();
            collect_runs(jobs, cfg)
        }
        5 => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let random: Vec<R> = (0..n).map(|_| uniform_refined::<R>(&mut rng)).collect();
            // two spirals: odd positions sweep 0..1, even positions 0..2
            let sweep1 = linear_sweep::<R>(n, 1.0);
            let sweep2 = linear_sweep::<R>(n, 2.0);
            let two_spiral: Vec<R> = (0..n)
                .map(|j| if j % 2 == 0 { sweep1[j] } else { sweep2[j] })
                .collect();
            let jobs = vec![
                ("random".to_string(), spiral_diagonal(&random)),
                ("two-spiral".to_string(), spiral_diagonal(&two_spiral)),
            ];
            collect_runs(jobs, cfg)
        }
        _ => Err(Error::InvalidArgument(format!(
            "unknown example {k}; valid families are 1..=5"
        ))),
    }
}

fn collect_runs<R: RealScalar>(
    jobs: Vec<(String, Vec<C<R>>)>,
    cfg: &ExperimentConfig,
) -> Result<Vec<ExampleRun<R>>> {
    maybe_par_map(jobs, |(label, diag)| solve_diagonal(label, diag, cfg))
        .into_iter()
        .collect()
}

/// Per-step progress ratios `res[t-1]/res[t]` of a residual trace.
pub fn progress_ratios<R: RealScalar>(residuals: &[R]) -> Vec<f64> {
    residuals
        .windows(2)
        .map(|w| (w[0].to_f64() / w[1].to_f64()).max(1e-300))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cabs, Dd};

    fn cfg(n: usize) -> ExperimentConfig {
        ExperimentConfig {
            n,
            seed: 1,
            tol: None,
            maxit: None,
        }
    }

    #[test]
    fn diagonal_radii_interpolate_one_to_ten() {
        let runs = run_example::<f64>(1, &cfg(50)).unwrap();
        let d = &runs[0].diag;
        assert!((cabs(d[0]) - 1.0).abs() < 1e-12);
        assert!((cabs(d[49]) - 10.0).abs() < 1e-12);
        // constant angle: all entries share the phase of e^{2 pi i / 10}
        let phase0 = d[0] / cabs(d[0]);
        for z in d {
            let p = *z / cabs(*z);
            assert!((p - phase0).norm() < 1e-12);
        }
    }

    #[test]
    fn example_two_traces_are_monotone() {
        let runs = run_example::<f64>(2, &cfg(40)).unwrap();
        assert_eq!(runs.len(), 5);
        for run in &runs {
            let t = &run.report.trace.residual_norms;
            for w in t.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12), "{}", run.label);
            }
        }
    }

    #[test]
    fn example_runs_are_deterministic() {
        let a = run_example::<f64>(5, &cfg(24)).unwrap();
        let b = run_example::<f64>(5, &cfg(24)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.label, y.label);
            for (p, q) in x.diag.iter().zip(&y.diag) {
                assert_eq!(p, q);
            }
            assert_eq!(
                x.report.trace.residual_norms.len(),
                y.report.trace.residual_norms.len()
            );
            for (p, q) in x
                .report
                .trace
                .residual_norms
                .iter()
                .zip(&y.report.trace.residual_norms)
            {
                assert_eq!(p, q);
            }
        }
    }

    #[test]
    fn example_one_roundtrip_diverges_from_clean_in_dd() {
        let runs = run_example::<Dd>(1, &cfg(30)).unwrap();
        let clean = &runs[0].report.trace;
        let rt = &runs[1].report.trace;
        // identical start: the first few steps agree to roundoff
        for j in 0..5.min(clean.residual_norms.len()).min(rt.residual_norms.len()) {
            let a = clean.residual_norms[j].to_f64();
            let b = rt.residual_norms[j].to_f64();
            assert!((a - b).abs() <= 1e-12 * a.max(1e-30), "step {j}: {a:e} vs {b:e}");
        }
        // afterwards the perturbed input can only do worse
        let len = clean.residual_norms.len().min(rt.residual_norms.len());
        for j in 0..len {
            let a = clean.residual_norms[j].to_f64();
            let b = rt.residual_norms[j].to_f64();
            assert!(b >= a * (1.0 - 1e-9), "roundtrip beat clean at step {j}");
        }
    }

    #[test]
    fn invalid_family_is_rejected() {
        assert!(run_example::<f64>(0, &cfg(10)).is_err());
        assert!(run_example::<f64>(6, &cfg(10)).is_err());
        assert!(run_example::<f64>(1, &cfg(1)).is_err());
    }
}
