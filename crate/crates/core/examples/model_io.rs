//! Fits a model on SO(3) samples, writes it to disk, reads it back and
//! confirms the reloaded model gives bit-identical predictions.
//!
//!     cargo run --example model_io

use mtsm::bench::{sample_set, BenchmarkConfig, Experiment};
use mtsm::models::{io, mtsm_fit, MtsmConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = BenchmarkConfig::new(Experiment::So3);
    let samples = sample_set(&cfg, cfg.train.inputs(0, &cfg.domain))?;
    let fit = mtsm_fit(&samples, &MtsmConfig::new(&samples.manifold, 5, cfg.backend.clone()))?;

    let path = std::env::temp_dir().join("mtsm_so3_model.txt");
    io::save_model(&fit.model, &path)?;
    let text = std::fs::read_to_string(&path)?;
    println!("{} ({} bytes, {} anchors)", path.display(), text.len(), fit.model.r());
    for line in text.lines().take(4) {
        println!("  {line}");
    }

    let loaded = io::load_model(&path)?;
    let probes = mtsm::bench::uniform_grid(5, &cfg.domain.lo, &cfg.domain.hi);
    let identical = probes
        .iter()
        .all(|x| matches!((fit.model.eval(x), loaded.eval(x)), (Ok(a), Ok(b)) if a == b));
    println!("reloaded model identical on {} probes: {identical}", probes.len());

    let tampered = text.replacen("cutoff_c", "cutoff_c ", 1);
    match io::model_from_str(&tampered) {
        Err(e) => println!("tampered file rejected: {e}"),
        Ok(_) => println!("tampered file accepted"),
    }
    Ok(())
}
