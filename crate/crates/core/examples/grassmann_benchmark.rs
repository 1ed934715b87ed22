//! A curve of 3-planes in R^10 approximated from uniform samples with the RBF
//! and piecewise linear backends.
//!
//!     cargo run --release --example grassmann_benchmark

use mtsm::bench::{run_benchmark, BenchmarkConfig, Experiment};
use mtsm::interp::BackendSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for backend in [BackendSpec::Rbf { shape: None }, BackendSpec::PiecewiseLinear1d] {
        let mut cfg = BenchmarkConfig::new(Experiment::Grassmann);
        cfg.backend = backend.clone();
        let report = run_benchmark(&cfg)?;
        println!("backend {}", backend.name());
        for r in &report.rows {
            match &r.stats {
                Some(s) => println!(
                    "  {:<5} N {:>3}  R {:>2}  max_rel {:.3e}  geomean {:.3e}",
                    r.method.name(),
                    r.train_size,
                    r.r,
                    s.max_rel_err,
                    s.geomean_rel_err
                ),
                None => println!("  {:<5} N {:>3}  failed: {}", r.method.name(), r.train_size, r.message),
            }
        }
    }
    Ok(())
}
