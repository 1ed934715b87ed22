//! Three tangent-space patches on the unit sphere: fits a model with anchors
//! on the equator, prints the blending weights along a path and the error
//! against the exact map, and checks the well-posedness assumptions.
//!
//! Pass a directory to also write `samples.csv` and `model.txt` for the CLI.
//!
//!     cargo run --example sphere_patches [dir]

use nalgebra::DMatrix;

use mtsm::bench::{save_samples, sphere_test_function, uniform_grid};
use mtsm::geometry::{Manifold, Point};
use mtsm::interp::BackendSpec;
use mtsm::models::{io, mtsm_fit_with_anchors, validate_wellposedness, MtsmConfig};
use mtsm::samples::SampleSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = Manifold::sphere(2);
    let inputs = uniform_grid(20, &[-1.0, -1.0], &[1.0, 1.0]);
    let outputs = inputs.iter().map(|x| sphere_test_function(x)).collect();
    let samples = SampleSet::new(m.clone(), inputs, outputs)?;
    let anchors = [-0.8f64, 0.0, 0.8]
        .iter()
        .map(|a| Point(DMatrix::from_column_slice(3, 1, &[a.cos(), a.sin(), 0.0])))
        .collect();
    let cfg = MtsmConfig::new(&m, 3, BackendSpec::Rbf { shape: None });
    let fit = mtsm_fit_with_anchors(&samples, anchors, &cfg)?;
    let model = &fit.model;
    for (j, s) in model.submodels.iter().enumerate() {
        println!("patch {j}: sigma {:.3}, tau {:.3}, {} samples", s.sigma, s.tau, fit.reports[j].fitted.len());
    }

    println!("{:>6} {:>24} {:>10}", "x1", "weights", "error");
    for k in 0..=10 {
        let x = [-1.0 + 0.2 * k as f64, 0.3];
        let t = model.trace(&x)?;
        let w: Vec<String> = t.weights.weights.iter().map(|w| format!("{w:.3}")).collect();
        let err = m.dist(&sphere_test_function(&x), &model.eval(&x)?)?;
        println!("{:>6.2} {:>24} {:>10.2e}", x[0], w.join(" "), err);
    }

    let r = validate_wellposedness(model, &samples);
    println!(
        "uncovered {}, max training eps {:.2e} (threshold {:.3}), partition residual {:.1e}: {}",
        r.uncovered.len(),
        r.max_epsilon,
        r.epsilon_threshold,
        r.partition_residual,
        if r.all_ok() { "well posed" } else { "assumptions not met" }
    );

    if let Some(dir) = std::env::args().nth(1) {
        let dir = std::path::Path::new(&dir);
        save_samples(&samples, dir.join("samples.csv"))?;
        io::save_model(model, dir.join("model.txt"))?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}
