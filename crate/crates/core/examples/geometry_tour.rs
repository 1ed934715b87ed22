//! Exponential and logarithm maps on each supported manifold: a random point,
//! a tangent step of length 0.7, and the distances and roundtrip errors.
//!
//!     cargo run --example geometry_tour

use mtsm::geometry::Manifold;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let manifolds = [
        Manifold::euclidean(3),
        Manifold::sphere(2),
        Manifold::spd(3),
        Manifold::special_orthogonal(3),
        Manifold::grassmann(6, 2),
    ];
    println!("{:<14} {:>4} {:>9} {:>8} {:>9} {:>10}", "manifold", "dim", "inj", "dist", "roundtrip", "frame");
    for m in &manifolds {
        let p = m.random_point(11);
        let v = m.random_tangent(&p, 0.7, 12)?;
        let q = m.exp(&p, &v)?;
        let back = m.log(&p, &q)?;
        let frame = m.tangent_frame(&p)?;
        // coordinates in an orthonormal frame preserve the Riemannian norm
        let coords = frame.flatten(&v);
        let coord_norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        println!(
            "{:<14} {:>4} {:>9.4} {:>8.4} {:>9.1e} {:>10.1e}",
            m.kind.to_string(),
            m.intrinsic_dim(),
            m.inj_estimate,
            m.dist(&p, &q)?,
            (&back.0 - &v.0).norm(),
            (coord_norm - 0.7).abs()
        );
    }
    Ok(())
}
