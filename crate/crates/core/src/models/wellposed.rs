//! Diagnostics for the assumptions under which the blended model is well defined
//! and obeys the `5ε` error bound.

use std::f64::consts::PI;

use crate::samples::SampleSet;

use super::multi::MtsmModel;
use super::single::{coord_norm, pull_back};

#[derive(Clone, Debug)]
pub struct SubmodelDiagnostics {
    pub sigma: f64,
    pub tau: f64,
    /// Number of samples with a defined `Log` inside the τ-ball.
    pub fitting_set: usize,
    /// Fitting-set indices where `‖ĝ_j(xᵢ)‖ > τ_j`.
    pub range_violations: Vec<usize>,
    /// `max ‖ĝ_j(xᵢ) − Log_{p*_j} yᵢ‖` over the fitting set.
    pub epsilon: f64,
}

#[derive(Clone, Debug)]
pub struct WellposednessReport {
    /// Samples not inside any ball `B_{σ_j}(p*_j)`.
    pub uncovered: Vec<usize>,
    pub submodels: Vec<SubmodelDiagnostics>,
    /// `min{inj, π/(2√K)} / 10`.
    pub epsilon_threshold: f64,
    pub max_epsilon: f64,
    pub partition_residual: f64,
    pub probes: usize,
    pub probes_without_support: usize,
}

impl WellposednessReport {
    pub fn cover_ok(&self) -> bool {
        self.uncovered.is_empty()
    }

    pub fn range_ok(&self) -> bool {
        self.submodels.iter().all(|s| s.range_violations.is_empty())
    }

    pub fn epsilon_ok(&self) -> bool {
        self.max_epsilon < self.epsilon_threshold
    }

    pub fn all_ok(&self) -> bool {
        self.cover_ok() && self.range_ok() && self.epsilon_ok() && self.partition_residual <= 1e-12
    }
}

fn probe_grid(lo: &[f64], hi: &[f64], budget: usize) -> Vec<Vec<f64>> {
    let n = lo.len();
    let k = ((budget as f64).powf(1.0 / n as f64).floor() as usize).max(2);
    let total = k.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut x = vec![0.0; n];
            for d in (0..n).rev() {
                let t = (idx % k) as f64 / (k - 1) as f64;
                idx /= k;
                x[d] = lo[d] + t * (hi[d] - lo[d]);
            }
            x
        })
        .collect()
}

/// Checks cover, range, training accuracy and the partition of unity. Never
/// changes the model.
pub fn validate_wellposedness(model: &MtsmModel, samples: &SampleSet) -> WellposednessReport {
    let m = &model.manifold;
    let mut covered = vec![false; samples.len()];
    let mut subs = Vec::with_capacity(model.r());
    for sub in &model.submodels {
        let pulled = pull_back(m, &sub.anchor, &sub.frame, samples.outputs());
        let mut fitting_set = 0;
        let mut range_violations = Vec::new();
        let mut epsilon = 0.0f64;
        for (i, c) in pulled.iter().enumerate() {
            let Some(c) = c else { continue };
            let r = coord_norm(c);
            if r <= sub.sigma || model.r() == 1 {
                covered[i] = true;
            }
            if r > sub.tau {
                continue;
            }
            fitting_set += 1;
            match sub.eval_coords(&samples.inputs()[i]) {
                Ok((g, _)) => {
                    if coord_norm(&g) > sub.tau {
                        range_violations.push(i);
                    }
                    let diff: Vec<f64> = g.iter().zip(c).map(|(a, b)| a - b).collect();
                    epsilon = epsilon.max(coord_norm(&diff));
                }
                Err(_) => range_violations.push(i),
            }
        }
        subs.push(SubmodelDiagnostics {
            sigma: sub.sigma,
            tau: sub.tau,
            fitting_set,
            range_violations,
            epsilon,
        });
    }
    let uncovered = (0..samples.len()).filter(|&i| !covered[i]).collect();

    let inj = if m.inj_estimate > 0.0 { m.inj_estimate } else { f64::INFINITY };
    let k = m.curvature_upper;
    let curv = if k > 0.0 { PI / (2.0 * k.sqrt()) } else { f64::INFINITY };
    let epsilon_threshold = 0.1 * inj.min(curv);
    let max_epsilon = subs.iter().map(|s| s.epsilon).fold(0.0, f64::max);

    let bbox = samples.bounding_box();
    let probes = probe_grid(&bbox.lo, &bbox.hi, 4096);
    let mut partition_residual = 0.0f64;
    let mut probes_without_support = 0;
    for x in &probes {
        match model.trace(x) {
            Ok(t) if !t.weights.active.is_empty() => {
                let s: f64 = t.weights.weights.iter().sum();
                partition_residual = partition_residual.max((s - 1.0).abs());
            }
            _ => probes_without_support += 1,
        }
    }
    WellposednessReport {
        uncovered,
        submodels: subs,
        epsilon_threshold,
        max_epsilon,
        partition_residual,
        probes: probes.len(),
        probes_without_support,
    }
}
