use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rlinear::bound::lawson_minmax;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = 6;
    let diag: Vec<Complex64> = (0..n)
        .map(|k| {
            let r = 1.0 + 9.0 * k as f64 / (n - 1) as f64;
            let a = 2.0 * std::f64::consts::PI * rng.random::<f64>();
            Complex64::new(r * a.cos(), r * a.sin())
        })
        .collect();
    for d in 0..6 {
        let lw = lawson_minmax(&diag, Complex64::new(0.0, 0.0), d).unwrap();
        println!(
            "degree {}: E = {:.6e}, converged = {}, iterations = {}",
            d, lw.e, lw.converged, lw.iterations
        );
    }
}
