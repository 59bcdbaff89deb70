use rlinear::experiments::{progress_ratios, run_example, ExperimentConfig};
use rlinear::scalar::Dd;
use std::time::Instant;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[v.len() / 2]
}

fn main() {
    let cfg = ExperimentConfig { n: 100, seed: 1, tol: Some(1e-8), maxit: None };
    let t0 = Instant::now();
    let runs = run_example::<Dd>(2, &cfg).unwrap();
    println!("example 2 (dd, n=100, tol 1e-8) in {:?}", t0.elapsed());
    for r in &runs {
        let rel = r.report.trace.relative();
        let iters = rel.iter().position(|x| x.to_f64() <= 1e-8);
        println!("  {}: iterations to 1e-8 = {:?} (converged {})", r.label, iters, r.report.converged);
    }

    let cfg5 = ExperimentConfig { n: 100, seed: 1, tol: Some(1e-10), maxit: None };
    let t0 = Instant::now();
    let runs = run_example::<Dd>(5, &cfg5).unwrap();
    println!("example 5 (dd) in {:?}", t0.elapsed());
    for r in &runs {
        let rel: Vec<f64> = r.report.trace.relative().iter().map(|x| x.to_f64()).collect();
        let conv_end = rel.iter().position(|x| *x <= 1e-10).unwrap_or(rel.len() - 1);
        let ratios = progress_ratios(&r.report.trace.residual_norms[..=conv_end]);
        let odd: Vec<f64> = ratios.iter().enumerate().filter(|(i, _)| i % 2 == 0).map(|(_, r)| *r).collect();
        let even: Vec<f64> = ratios.iter().enumerate().filter(|(i, _)| i % 2 == 1).map(|(_, r)| *r).collect();
        // step t = index+1: odd steps are even indices
        println!("  {}: median odd-step ratio {:.3}, median even-step ratio {:.3}, steps {}", r.label, median(odd), median(even), ratios.len());
    }

    let t0 = Instant::now();
    let runs = run_example::<Dd>(1, &ExperimentConfig { n: 100, seed: 1, tol: Some(1e-24), maxit: None }).unwrap();
    println!("example 1 (dd) in {:?}", t0.elapsed());
    for r in &runs {
        let rel: Vec<f64> = r.report.trace.relative().iter().map(|x| x.to_f64()).collect();
        let conv_end = rel.iter().position(|x| *x <= 1e-24).unwrap_or(rel.len() - 1);
        // linear fit of log10 residuals over the converging segment
        let ys: Vec<f64> = rel[..=conv_end].iter().map(|x| x.log10()).collect();
        let n = ys.len() as f64;
        let xm = (ys.len() as f64 - 1.0) / 2.0;
        let ym: f64 = ys.iter().sum::<f64>() / n;
        let mut sxy = 0.0; let mut sxx = 0.0; let mut syy = 0.0;
        for (i, y) in ys.iter().enumerate() {
            let dx = i as f64 - xm; let dy = y - ym;
            sxy += dx * dy; sxx += dx * dx; syy += dy * dy;
        }
        let r2 = sxy * sxy / (sxx * syy);
        println!("  {}: steps {}, last rel {:.2e}, R^2 of log-linear fit {:.4}", r.label, conv_end, rel[conv_end], r2);
    }
}
