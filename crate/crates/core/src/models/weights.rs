//! Compactly supported weight kernels and the smooth partition of unity.

/// Wendland kernel `(1 − d)₊⁴ (4d + 1)`.
pub fn wendland(d: f64) -> f64 {
    if d >= 1.0 {
        return 0.0;
    }
    let t = 1.0 - d;
    let t2 = t * t;
    t2 * t2 * (4.0 * d + 1.0)
}

/// Smooth cutoff with plateau `h = 1` on `dsq ≤ c·σ²` and support `dsq < σ²`.
///
/// Between the two radii `h = 1 / (1 + exp(1/(σ² − d) − 1/(d − cσ²)))`, which is
/// the ratio of the two `e^{-1/t}` bump terms rewritten to avoid underflow.
pub fn cutoff_h(dsq: f64, sigma_sq: f64, c: f64) -> f64 {
    let inner = c * sigma_sq;
    if dsq <= inner {
        return 1.0;
    }
    if dsq >= sigma_sq {
        return 0.0;
    }
    let a = 1.0 / (sigma_sq - dsq);
    let b = 1.0 / (dsq - inner);
    1.0 / (1.0 + (a - b).exp())
}

/// Normalized cutoff weights and the active set `{j : φ_j > 0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionWeights {
    pub weights: Vec<f64>,
    pub active: Vec<usize>,
}

/// `dsq[j] = None` marks a submodel whose interpolant was queried outside its
/// domain; it gets weight zero.
pub fn partition_weights(dsq: &[Option<f64>], sigmas: &[f64], c: f64) -> PartitionWeights {
    let raw: Vec<f64> = dsq
        .iter()
        .zip(sigmas)
        .map(|(d, s)| d.map_or(0.0, |d| cutoff_h(d, s * s, c)))
        .collect();
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return PartitionWeights {
            weights: vec![0.0; raw.len()],
            active: Vec::new(),
        };
    }
    let weights: Vec<f64> = raw.iter().map(|h| h / total).collect();
    let active = weights
        .iter()
        .enumerate()
        .filter(|(_, w)| **w > 0.0)
        .map(|(j, _)| j)
        .collect();
    PartitionWeights { weights, active }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wendland_values() {
        assert_eq!(wendland(0.0), 1.0);
        assert_eq!(wendland(1.0), 0.0);
        assert_eq!(wendland(2.0), 0.0);
        assert!((wendland(0.5) - 0.1875).abs() < 1e-15);
    }

    #[test]
    fn cutoff_plateau_support_midpoint() {
        assert_eq!(cutoff_h(0.0, 2.0, 0.25), 1.0);
        assert_eq!(cutoff_h(0.5, 2.0, 0.25), 1.0);
        assert_eq!(cutoff_h(2.0, 2.0, 0.25), 0.0);
        assert!((cutoff_h(0.75, 1.0, 0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partition_examples() {
        let w = partition_weights(&[Some(0.1)], &[1.0], 0.25);
        assert_eq!(w.weights, vec![1.0]);
        assert_eq!(w.active, vec![0]);
        let w = partition_weights(&[Some(0.5), Some(0.5)], &[1.0, 1.0], 0.25);
        assert_eq!(w.weights, vec![0.5, 0.5]);
        let w = partition_weights(&[Some(0.2), Some(1.0)], &[1.0, 1.0], 0.25);
        assert_eq!(w.weights, vec![1.0, 0.0]);
        assert_eq!(w.active, vec![0]);
        let w = partition_weights(&[None, Some(2.0)], &[1.0, 1.0], 0.25);
        assert!(w.active.is_empty());
    }
}
