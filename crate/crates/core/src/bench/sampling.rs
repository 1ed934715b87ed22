//! Deterministic point sets: Halton sequences and tensor grids.

/// Radical inverse of `i` in the given base.
pub fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    out
}

/// The first `count` points of the 2-D Halton sequence (bases 2 and 3),
/// starting at index 1.
pub fn halton2d(count: usize) -> Vec<[f64; 2]> {
    (1..=count as u64)
        .map(|i| [radical_inverse(i, 2), radical_inverse(i, 3)])
        .collect()
}

/// Halton points mapped from `[0,1]²` to `[−1,1]²` by `x ↦ 2x − 1`.
pub fn halton2d_centered(count: usize) -> Vec<Vec<f64>> {
    halton2d(count)
        .into_iter()
        .map(|p| vec![2.0 * p[0] - 1.0, 2.0 * p[1] - 1.0])
        .collect()
}

/// Chebyshev points of the second kind on `[a, b]`, ascending.
pub fn chebyshev_points(k: usize, a: f64, b: f64) -> Vec<f64> {
    if k == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..k)
        .map(|j| {
            let t = -(std::f64::consts::PI * j as f64 / (k - 1) as f64).cos();
            0.5 * (a + b) + 0.5 * (b - a) * t
        })
        .map(|v| v.clamp(a, b))
        .collect()
}

/// `k` equally spaced points on `[a, b]` including both endpoints.
pub fn uniform_points(k: usize, a: f64, b: f64) -> Vec<f64> {
    if k == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..k)
        .map(|j| if j == k - 1 { b } else { a + (b - a) * j as f64 / (k - 1) as f64 })
        .collect()
}

/// Full tensor product of the axes, last axis fastest.
pub fn tensor_grid(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for ax in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                ax.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect();
    }
    out
}

pub fn chebyshev_grid(k: usize, lo: &[f64], hi: &[f64]) -> Vec<Vec<f64>> {
    let axes: Vec<Vec<f64>> = lo.iter().zip(hi).map(|(a, b)| chebyshev_points(k, *a, *b)).collect();
    tensor_grid(&axes)
}

pub fn uniform_grid(k: usize, lo: &[f64], hi: &[f64]) -> Vec<Vec<f64>> {
    let axes: Vec<Vec<f64>> = lo.iter().zip(hi).map(|(a, b)| uniform_points(k, *a, *b)).collect();
    tensor_grid(&axes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_first_points() {
        let h = halton2d(3);
        assert_eq!(h[0], [0.5, 1.0 / 3.0]);
        assert_eq!(h[1], [0.25, 2.0 / 3.0]);
        assert!(halton2d(500).iter().all(|p| p.iter().all(|v| (0.0..1.0).contains(v))));
    }

    #[test]
    fn chebyshev_small_cases() {
        assert_eq!(chebyshev_points(2, -1.0, 1.0), vec![-1.0, 1.0]);
        let c3 = chebyshev_points(3, -1.0, 1.0);
        assert_eq!(c3[0], -1.0);
        assert!(c3[1].abs() < 1e-16);
        assert_eq!(c3[2], 1.0);
        assert_eq!(chebyshev_points(1, 0.0, 2.0), vec![1.0]);
    }

    #[test]
    fn uniform_grids() {
        assert_eq!(uniform_points(3, 0.0, 1.0), vec![0.0, 0.5, 1.0]);
        assert_eq!(uniform_points(2, -1.0, 1.0), vec![-1.0, 1.0]);
        let g = uniform_grid(50, &[-1.0, -1.0], &[1.0, 1.0]);
        assert_eq!(g.len(), 2500);
        assert_eq!(g[1], vec![-1.0, -1.0 + 2.0 / 49.0]);
    }
}
