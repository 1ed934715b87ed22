//! Weighted Fréchet mean of five SPD matrices, compared with the arithmetic
//! mean and the log-Euclidean shortcut.
//!
//!     cargo run --example frechet_mean

use mtsm::geometry::Manifold;
use mtsm::linalg::{sym_apply, sym_eigenvalues};
use mtsm::mean::{frechet_mean, MeanOptions, SimplexWeights};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = Manifold::spd(3);
    let pts: Vec<_> = (0..5).map(|k| m.random_point(40 + k)).collect();
    let w = SimplexWeights::normalized(&[1.0, 2.0, 3.0, 2.0, 1.0])?;
    let sol = frechet_mean(&m, &pts, &w, &MeanOptions::default())?;
    println!("iterations {}, gradient norm {:.2e}", sol.iterations, sol.grad_norm);
    for (k, f) in sol.objective_history.iter().enumerate() {
        println!("  iter {k:>2}  objective {f:.12}");
    }

    let mut arith = nalgebra::DMatrix::zeros(3, 3);
    let mut log_avg = nalgebra::DMatrix::zeros(3, 3);
    for (p, wi) in pts.iter().zip(w.values()) {
        arith += &p.0 * *wi;
        log_avg += sym_apply(&p.0, f64::ln) * *wi;
    }
    let log_euclid = mtsm::geometry::Point(sym_apply(&log_avg, f64::exp));
    let arith = mtsm::geometry::Point(arith);
    println!("eigenvalues of the mean     {:?}", sym_eigenvalues(&sol.point.0).as_slice());
    println!("distance to arithmetic mean {:.4}", m.dist(&sol.point, &arith)?);
    println!("distance to log-Euclidean   {:.4}", m.dist(&sol.point, &log_euclid)?);
    Ok(())
}
