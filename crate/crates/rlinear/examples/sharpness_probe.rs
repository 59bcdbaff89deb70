use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rlinear::bound::gmres_bound_trace;
use rlinear::mat::{DenseMatrix, DenseVector};
use rlinear::solver::csym;

fn main() {
    let n = 12;
    let mut worst: f64 = 0.0;
    let mut best_mid: f64 = f64::INFINITY;
    for seed in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let diag: Vec<Complex64> = (0..n)
            .map(|k| {
                let r = 1.0 + 9.0 * k as f64 / (n - 1) as f64 + 0.1 * rng.random::<f64>();
                let a = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                Complex64::new(r * a.cos(), r * a.sin())
            })
            .collect();
        let m = DenseMatrix::diagonal(&diag);
        let b = DenseVector::from_fn(n, |_| Complex64::new(0.2 + rng.random::<f64>(), 0.0));
        let rep = csym(&m, &b, 1e-15, n).unwrap();
        let bound = gmres_bound_trace(&m, &b, Complex64::new(0.0, 0.0), n).unwrap();
        for j in 1..rep.trace.residual_norms.len() {
            let r = rep.trace.residual_norms[j];
            let bj = bound.b[j - 1];
            if r < 1e-12 && bj < 1e-12 {
                continue;
            }
            let rel = (bj - r).abs() / r.max(1e-300);
            worst = worst.max(rel);
            best_mid = best_mid.min(rel);
            if seed == 0 {
                println!("seed 0 step {j:2}: residual {r:.6e}  bound {bj:.6e}  rel gap {rel:.3e}  conv {}", bound.converged[j-1]);
            }
        }
    }
    println!("over 5 systems: min rel gap {best_mid:.3e}, max rel gap {worst:.3e}");
}
