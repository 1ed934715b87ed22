//! SPD(3) benchmark: STSM, MTSM and RMLS on growing Halton training sets,
//! tested on a 50×50 grid over [−1,1]².
//!
//!     cargo run --release --example spd_benchmark [out.csv]

use mtsm::bench::{run_benchmark, BenchmarkConfig, Experiment};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = BenchmarkConfig::new(Experiment::Spd);
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
