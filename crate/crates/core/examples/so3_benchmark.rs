//! SO(3) benchmark: a 7×7 Chebyshev training grid on [−0.5,0.5]²,
//! tested on a 20×20 uniform grid.
//!
//!     cargo run --release --example so3_benchmark [out.csv]

use mtsm::bench::{run_benchmark, BenchmarkConfig, Experiment};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = BenchmarkConfig::new(Experiment::So3);
    cfg.out = std::env::args().nth(1).map(Into::into);
    let report = run_benchmark(&cfg)?;
    println!("{:<6} {:>5} {:>3} {:>12} {:>12} {:>9} {:>9}", "method", "N", "R", "max_rel", "geomean", "offline", "online");
    for r in &report.rows {
        match &r.stats {
            Some(s) => println!(
                "{:<6} {:>5} {:>3} {:>12.3e} {:>12.3e} {:>8.3}s {:>8.3}s",
                r.method.name(),
                r.train_size,
                r.r,
                s.max_rel_err,
                s.geomean_rel_err,
                r.offline_s,
                r.online_s
            ),
            None => println!("{:<6} {:>5} failed: {}", r.method.name(), r.train_size, r.message),
        }
    }
    Ok(())
}
