//! Adaptive choice of the number of anchors on SPD(3) benchmark samples for a
//! range of curvature bounds, with the volume packing bound for comparison.
//!
//!     cargo run --release --example anchor_selection

use mtsm::bench::{sample_set, BenchmarkConfig, Experiment, TrainSpec};
use mtsm::clustering::{gromov_upper_bound, select_anchors, AnchorSelectionConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = BenchmarkConfig::new(Experiment::Spd);
    cfg.train = TrainSpec::Halton(vec![200]);
    let samples = sample_set(&cfg, cfg.train.inputs(0, &cfg.domain))?;
    let m = &samples.manifold;
    println!("{:>6} {:>5} {:>3} {:>8} {:>8} {:>10} {:>12}", "L", "R_min", "R", "d*", "ddiam", "max radius", "packing <=");
    for l in [-0.5, -1.0, -4.0, -9.0, -16.0] {
        let mut a = AnchorSelectionConfig::for_manifold(m, 12);
        a.curvature_lower = l;
        let sel = select_anchors(m, samples.outputs(), &a)?;
        let r_max = sel.clustering.radii.iter().copied().fold(0.0, f64::max);
        let bound = gromov_upper_bound(m.intrinsic_dim(), l, sel.ddiam, r_max)?;
        println!(
            "{l:>6.1} {:>5} {:>3} {:>8.4} {:>8.4} {:>10.4} {:>12.3e}",
            sel.r_min,
            sel.r(),
            sel.d_star,
            sel.ddiam,
            r_max,
            bound
        );
    }
    Ok(())
}
