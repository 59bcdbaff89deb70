use rlinear::experiments::{run_example, ExperimentConfig};
use rlinear::scalar::Dd;

fn main() {
    for n in [100usize, 200] {
        let cfg = ExperimentConfig { n, seed: 1, tol: Some(1e-24), maxit: None };
        let runs = run_example::<Dd>(5, &cfg).unwrap();
        let r = &runs[0]; // random set
        let rel: Vec<f64> = r.report.trace.relative().iter().map(|x| x.to_f64()).collect();
        println!("n={n} random-angle: trace len {}", rel.len());
        print!("log10 rel: ");
        for (i, x) in rel.iter().enumerate().step_by(5) {
            print!("{}:{:.2} ", i, x.log10());
        }
        println!();
        let ratios: Vec<f64> = rel.windows(2).map(|w| w[0] / w[1]).collect();
        print!("ratios 1..41: ");
        for r in ratios.iter().take(40) {
            print!("{:.2} ", r);
        }
        println!();
        print!("ratios 41..81: ");
        for r in ratios.iter().skip(40).take(40) {
            print!("{:.2} ", r);
        }
        println!();
    }
}
