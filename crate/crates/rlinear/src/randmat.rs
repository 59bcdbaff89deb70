//! Monte Carlo estimation of the probability that a Ginibre random matrix
//! is condiagonalizable.
//!
//! Trials are deterministic functions of `(seed, trial index)`: each trial
//! draws its matrix from its own counter-based substream, so the estimate is
//! independent of execution order and the parallel and sequential paths
//! produce identical counts.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::coneig::is_condiagonalizable;
use crate::mat::DenseMatrix;
use crate::par::maybe_par_map;
use crate::scalar::c;

/// Relative modulus gap used by the condiagonalizability predicate.
const PREDICATE_GAP: f64 = 1e-8;

/// Trials per work item when running in parallel.
const BATCH: u64 = 256;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GinibreKind {
    /// Independent standard normal real and imaginary parts per entry.
    Complex,
    /// Independent standard normal real entries.
    Real,
}

impl GinibreKind {
    pub fn label(self) -> &'static str {
        match self {
            GinibreKind::Complex => "complex",
            GinibreKind::Real => "real",
        }
    }
}

/// Monte Carlo estimate with its binomial standard error and the predicted
/// probability `2^{-n(n-1)/2}` (complex) or `2^{-n(n-1)/4}` (real).
#[derive(Clone, Debug)]
pub struct McEstimate {
    pub n: usize,
    pub kind: GinibreKind,
    pub samples: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub stderr: f64,
    pub expected: f64,
}

/// Marsaglia polar method: two independent standard normals.
fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let u = 2.0 * rng.random::<f64>() - 1.0;
        let v = 2.0 * rng.random::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let f = (-2.0 * s.ln() / s).sqrt();
            return (u * f, v * f);
        }
    }
}

/// The substream generator for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Draw one Ginibre matrix from the given generator.
pub fn sample_ginibre(n: usize, kind: GinibreKind, rng: &mut ChaCha8Rng) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(n, n, |_, _| match kind {
        GinibreKind::Complex => {
            let (re, im) = normal_pair(rng);
            c(re, im)
        }
        GinibreKind::Real => {
            let (re, _) = normal_pair(rng);
            c(re, 0.0)
        }
    })
}

pub fn expected_probability(n: usize, kind: GinibreKind) -> f64 {
    let pairs = (n * (n - 1)) as f64;
    match kind {
        GinibreKind::Complex => 2f64.powf(-pairs / 2.0),
        GinibreKind::Real => 2f64.powf(-pairs / 4.0),
    }
}

fn run_trial(n: usize, kind: GinibreKind, seed: u64, trial: u64) -> bool {
    let mut rng = trial_rng(seed, trial);
    let m = sample_ginibre(n, kind, &mut rng);
    is_condiagonalizable(&m, PREDICATE_GAP)
}

/// Sequential reference path (also used by the benchmarks).
pub fn count_hits_seq(n: usize, kind: GinibreKind, samples: u64, seed: u64) -> u64 {
    (0..samples)
        .filter(|trial| run_trial(n, kind, seed, *trial))
        .count() as u64
}

/// Hit count over all trials; parallel over trial batches when the
/// `parallel` feature is enabled. Identical to [`count_hits_seq`].
pub fn count_hits(n: usize, kind: GinibreKind, samples: u64, seed: u64) -> u64 {
    let batches: Vec<(u64, u64)> = (0..samples.div_ceil(BATCH))
        .map(|b| (b * BATCH, ((b + 1) * BATCH).min(samples)))
        .collect();
    maybe_par_map(batches, |(lo, hi)| {
        (lo..hi).filter(|t| run_trial(n, kind, seed, *t)).count() as u64
    })
    .into_iter()
    .sum()
}

/// Estimate the condiagonalizability probability of the `n x n` Ginibre
/// ensemble from `samples` independent trials.
pub fn estimate_condiag_probability(
    n: usize,
    kind: GinibreKind,
    samples: u64,
    seed: u64,
) -> McEstimate {
    assert!(n >= 1 && samples >= 1);
    let hits = count_hits(n, kind, samples, seed);
    let p_hat = hits as f64 / samples as f64;
    McEstimate {
        n,
        kind,
        samples,
        hits,
        p_hat,
        stderr: (p_hat * (1.0 - p_hat) / samples as f64).sqrt(),
        expected: expected_probability(n, kind),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coneig::random_unitary;
    use crate::scalar::cabs;

    #[test]
    fn sampling_statistics_sane() {
        let mut rng = trial_rng(7, 0);
        let m = sample_ginibre(1000, GinibreKind::Complex, &mut rng);
        let total = 1_000_000.0;
        let mut mean_re = 0.0;
        let mut mean_sq = 0.0;
        for j in 0..1000 {
            for i in 0..1000 {
                mean_re += m[(i, j)].re;
                mean_sq += m[(i, j)].norm_sqr();
            }
        }
        mean_re /= total;
        mean_sq /= total;
        assert!(mean_re.abs() < 4.0 / total.sqrt(), "mean {mean_re}");
        // |entry|^2 has mean 2 and variance 4
        assert!((mean_sq - 2.0).abs() < 3.0 * 2.0 / total.sqrt(), "mean square {mean_sq}");
    }

    #[test]
    fn fixed_seed_reproduces_bitwise() {
        let mut r1 = trial_rng(42, 3);
        let mut r2 = trial_rng(42, 3);
        let a = sample_ginibre(6, GinibreKind::Complex, &mut r1);
        let b = sample_ginibre(6, GinibreKind::Complex, &mut r2);
        for j in 0..6 {
            for i in 0..6 {
                assert_eq!(a[(i, j)], b[(i, j)]);
            }
        }
    }

    #[test]
    fn parallel_and_sequential_counts_agree() {
        let seq = count_hits_seq(2, GinibreKind::Complex, 600, 11);
        let par = count_hits(2, GinibreKind::Complex, 600, 11);
        assert_eq!(seq, par);
    }

    #[test]
    fn one_by_one_is_always_condiagonalizable() {
        let est = estimate_condiag_probability(1, GinibreKind::Complex, 500, 1);
        assert_eq!(est.hits, 500);
        assert_eq!(est.p_hat, 1.0);
        assert_eq!(est.expected, 1.0);
    }

    #[test]
    fn two_by_two_complex_matches_theory() {
        let est = estimate_condiag_probability(2, GinibreKind::Complex, 10_000, 5);
        assert!((est.expected - 0.5).abs() < 1e-15);
        assert!(
            (est.p_hat - est.expected).abs() <= 3.0 * est.stderr,
            "p_hat {} vs 0.5 (3 sigma = {})",
            est.p_hat,
            3.0 * est.stderr
        );
    }

    #[test]
    fn two_by_two_real_matches_theory() {
        let est = estimate_condiag_probability(2, GinibreKind::Real, 10_000, 6);
        let want = 2f64.powf(-0.5);
        assert!((est.expected - want).abs() < 1e-15);
        assert!(
            (est.p_hat - want).abs() <= 3.0 * est.stderr,
            "p_hat {} vs {want}",
            est.p_hat
        );
    }

    #[test]
    fn verdict_invariant_under_unitary_congruence() {
        for seed in 0..20u64 {
            let mut rng = trial_rng(900, seed);
            let m = sample_ginibre(3, GinibreKind::Complex, &mut rng);
            let u = random_unitary::<f64>(3, 3000 + seed);
            let congruent = u.matmul(&m).matmul(&u.transpose());
            let v1 = is_condiagonalizable(&m, PREDICATE_GAP);
            let v2 = is_condiagonalizable(&congruent, PREDICATE_GAP);
            // skip the measure-zero tolerance boundary: moduli gaps close
            // to the predicate threshold may flip under roundoff
            let moduli = crate::coneig::coneigenvalue_moduli(&m);
            if let Ok(mods) = moduli {
                let top = mods.last().copied().unwrap_or(1.0);
                let near_boundary = mods
                    .windows(2)
                    .any(|w| ((w[1] - w[0]) / top - PREDICATE_GAP).abs() < 1e-2 * top);
                if near_boundary {
                    continue;
                }
            }
            assert_eq!(v1, v2, "seed {seed}: verdict changed under congruence");
        }
    }

    #[test]
    fn normals_have_unit_scale() {
        let mut rng = trial_rng(1, 0);
        let mut s = 0.0;
        let n = 20000;
        for _ in 0..n {
            let (a, b) = normal_pair(&mut rng);
            s += a * a + b * b;
        }
        let var = s / (2 * n) as f64;
        assert!((var - 1.0).abs() < 0.03, "sample variance {var}");
    }

    #[test]
    fn ginibre_matrices_are_far_from_symmetric() {
        // sanity that the complex ensemble is not accidentally structured
        let mut rng = trial_rng(17, 4);
        let m = sample_ginibre(8, GinibreKind::Complex, &mut rng);
        assert!(m.symmetry_defect() > 1e-2 * m.fro_norm());
        let mut max_entry: f64 = 0.0;
        for j in 0..8 {
            for i in 0..8 {
                max_entry = max_entry.max(cabs(m[(i, j)]));
            }
        }
        assert!(max_entry < 10.0);
    }
}
