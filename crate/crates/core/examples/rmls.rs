//! Riemannian moving least squares on the sphere: how the support radius
//! trades accuracy against the number of samples averaged per query.
//!
//!     cargo run --release --example rmls

use mtsm::bench::{halton2d, sphere_test_function, uniform_grid};
use mtsm::geometry::Manifold;
use mtsm::mean::MeanOptions;
use mtsm::models::{rmls_eval, rmls_weights, RmlsConfig};
use mtsm::samples::SampleSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = Manifold::sphere(2);
    let inputs: Vec<Vec<f64>> = halton2d(200).iter().map(|p| vec![2.0 * p[0] - 1.0, 2.0 * p[1] - 1.0]).collect();
    let outputs = inputs.iter().map(|x| sphere_test_function(x)).collect();
    let samples = SampleSet::new(m.clone(), inputs, outputs)?;
    let probes = uniform_grid(25, &[-0.9, -0.9], &[0.9, 0.9]);
    let default = RmlsConfig::default_for(&samples).support_radius;
    println!("{:>8} {:>10} {:>10} {:>10}", "delta", "neighbors", "max err", "failures");
    for factor in [0.6, 1.0, 1.5, 2.5] {
        let cfg = RmlsConfig::new(factor * default)?;
        let mut worst = 0.0f64;
        let mut used = 0usize;
        let mut failures = 0;
        for x in &probes {
            used += rmls_weights(&samples, x, &cfg).iter().filter(|w| **w > 0.0).count();
            match rmls_eval(&samples, x, &cfg, &MeanOptions::default()) {
                Ok(y) => worst = worst.max(m.dist(&y, &sphere_test_function(x))?),
                Err(_) => failures += 1,
            }
        }
        println!(
            "{:>8.4} {:>10.1} {:>10.2e} {:>10}",
            cfg.support_radius,
            used as f64 / probes.len() as f64,
            worst,
            failures
        );
    }
    Ok(())
}
