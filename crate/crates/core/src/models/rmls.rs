//! Riemannian moving least squares (weighted-mean variant).

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::interp::mean_nearest_neighbor_spacing;
use crate::mean::{frechet_mean, MeanOptions, SimplexWeights};
use crate::samples::SampleSet;

use super::weights::wendland;

/// Multiple of the mean nearest-neighbour spacing used as the default support radius.
pub const DEFAULT_SUPPORT_FACTOR: f64 = 2.5;

#[derive(Clone, Debug, PartialEq)]
pub struct RmlsConfig {
    pub support_radius: f64,
}

impl RmlsConfig {
    pub fn new(support_radius: f64) -> Result<Self> {
        if !(support_radius > 0.0) {
            return Err(Error::InvalidArgument("support radius must be positive".into()));
        }
        Ok(RmlsConfig { support_radius })
    }

    pub fn default_for(samples: &SampleSet) -> Self {
        RmlsConfig {
            support_radius: DEFAULT_SUPPORT_FACTOR * mean_nearest_neighbor_spacing(samples.inputs()),
        }
    }
}

/// Wendland weight of every sample at `x`.
pub fn rmls_weights(samples: &SampleSet, x: &[f64], cfg: &RmlsConfig) -> Vec<f64> {
    samples
        .inputs()
        .iter()
        .map(|xi| {
            let d = xi.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            wendland(d / cfg.support_radius)
        })
        .collect()
}

/// Weighted Fréchet mean of the outputs with positive weight at `x`.
pub fn rmls_eval(samples: &SampleSet, x: &[f64], cfg: &RmlsConfig, mean_opts: &MeanOptions) -> Result<Point> {
    if x.len() != samples.input_dim() {
        return Err(crate::error::mismatch(samples.input_dim(), x.len()));
    }
    let w = rmls_weights(samples, x, cfg);
    let (pts, ws): (Vec<Point>, Vec<f64>) = samples
        .outputs()
        .iter()
        .zip(&w)
        .filter(|(_, w)| **w > 0.0)
        .map(|(p, w)| (p.clone(), *w))
        .unzip();
    if pts.is_empty() {
        return Err(Error::OutsideSupport(x.to_vec()));
    }
    let weights = SimplexWeights::normalized(&ws)?;
    Ok(frechet_mean(&samples.manifold, &pts, &weights, mean_opts)?.point)
}
