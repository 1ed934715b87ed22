//! Reference functions `f : Ω → 𝓜` used by the experiments.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::geometry::{Manifold, Point};
use crate::linalg::{expm, orthonormalize_columns};

/// `2I + |cos(2x₂) + 0.6| e^{−x₁²−x₂²} M(x)` on 3×3 SPD matrices.
pub fn spd_test_function(x: &[f64]) -> Point {
    let (x1, x2) = (x[0], x[1]);
    let s = ((2.0 * x2).cos() + 0.6).abs() * (-x1 * x1 - x2 * x2).exp();
    let m = DMatrix::from_row_slice(
        3,
        3,
        &[
            10.0 + 2.0 * (5.0 * x2).sin(),
            x2,
            x1 * x2,
            x2,
            10.0,
            x2 * x2,
            x1 * x2,
            x2 * x2,
            10.0,
        ],
    );
    Point(DMatrix::identity(3, 3) * 2.0 + m * s)
}

/// Skew-symmetric generator of the rotation benchmark.
pub fn so3_generator(x: &[f64]) -> DMatrix<f64> {
    let (x1, x2) = (x[0], x[1]);
    let a = x1 * x1 + 0.5 * x2;
    let b = (4.0 * std::f64::consts::PI * (x1 * x1 + x2 * x2)).sin();
    let c = x1 + x2 * x2;
    DMatrix::from_row_slice(3, 3, &[0.0, a, b, -a, 0.0, c, -b, -c, 0.0])
}

pub fn so3_test_function(x: &[f64]) -> Point {
    Point(expm(&so3_generator(x)))
}

pub const SPHERE_FREQ: [f64; 2] = [1.2, 0.6];

/// A latitude/longitude chart of the unit sphere: `(cos a·cos b, sin a·cos b, sin b)`
/// with `a = 1.2 x₁`, `b = 0.6 x₂`.
pub fn sphere_test_function(x: &[f64]) -> Point {
    let a = SPHERE_FREQ[0] * x[0];
    let b = SPHERE_FREQ[1] * x[1];
    Point(DMatrix::from_column_slice(3, 1, &[a.cos() * b.cos(), a.sin() * b.cos(), b.sin()]))
}

/// A curve of 3-planes in ℝ¹⁰: the first three columns of `exp(tA) Q₀` for a
/// fixed orthogonal `Q₀` and skew `A`.
#[derive(Clone, Debug)]
pub struct GrassmannCurve {
    pub q0: DMatrix<f64>,
    pub generator: DMatrix<f64>,
    pub r: usize,
}

impl GrassmannCurve {
    pub fn new(n: usize, r: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gauss = |rows, cols| DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(&mut rng));
        let q0 = orthonormalize_columns(&gauss(n, n));
        let g: DMatrix<f64> = gauss(n, n);
        let skew = (&g - g.transpose()) * 0.5;
        let norm = skew.norm();
        GrassmannCurve {
            q0,
            generator: skew * (2.0 / norm),
            r,
        }
    }

    pub fn manifold(&self) -> Manifold {
        Manifold::grassmann(self.q0.nrows(), self.r)
    }

    pub fn eval(&self, x: &[f64]) -> Point {
        let q = expm(&(&self.generator * x[0])) * &self.q0;
        Point(q.columns(0, self.r).into_owned())
    }
}

impl Default for GrassmannCurve {
    fn default() -> Self {
        GrassmannCurve::new(10, 3, 7)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigenvalues;

    #[test]
    fn spd_at_origin() {
        let p = spd_test_function(&[0.0, 0.0]);
        assert!((p.0.clone() - DMatrix::identity(3, 3) * 18.0).abs().max() < 1e-14);
    }

    #[test]
    fn spd_is_symmetric_with_eigenvalues_above_two() {
        let m = Manifold::spd(3);
        for i in 0..50 {
            for j in 0..50 {
                let x = [-1.0 + 2.0 * i as f64 / 49.0, -1.0 + 2.0 * j as f64 / 49.0];
                let p = spd_test_function(&x);
                assert_eq!(p.0, p.0.transpose());
                assert!(sym_eigenvalues(&p.0)[0] > 2.0 - 1e-9);
                m.validate_point(&p, 1e-10).unwrap();
            }
        }
    }

    #[test]
    fn so3_is_a_rotation() {
        assert_eq!(so3_test_function(&[0.0, 0.0]).0, DMatrix::identity(3, 3));
        let h = so3_generator(&[0.1, 0.2]);
        assert_eq!(&h + h.transpose(), DMatrix::zeros(3, 3));
        let q = so3_test_function(&[0.1, 0.2]).0;
        assert!((q.transpose() * &q - DMatrix::identity(3, 3)).norm() <= 1e-12);
        assert!((q.determinant() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn curves_land_on_their_manifolds() {
        let s = Manifold::sphere(2);
        s.validate_point(&sphere_test_function(&[0.3, -0.8]), 1e-12).unwrap();
        let g = GrassmannCurve::default();
        g.manifold().validate_point(&g.eval(&[0.7]), 1e-10).unwrap();
    }
}
