//! Multiple tangent spaces model: an offline fit of one STSM per anchor and an
//! online blend of their predictions by a weighted Fréchet mean.

use crate::clustering::{select_anchors, AnchorSelection, AnchorSelectionConfig, Clustering};
use crate::error::{Error, Result};
use crate::geometry::{Manifold, Point};
use crate::interp::{BackendSpec, DomainBox};
use crate::mean::{frechet_mean, MeanOptions, SimplexWeights};
use crate::samples::SampleSet;

use super::single::{coord_norm, pull_back, AnchorSubmodel, SIGMA_FLOOR};
use super::weights::{partition_weights, PartitionWeights};

pub const DEFAULT_CUTOFF_C: f64 = 0.25;
pub const DEFAULT_TAU_FACTOR: f64 = 1.5;

#[derive(Clone, Debug)]
pub struct MtsmConfig {
    pub anchors: AnchorSelectionConfig,
    pub backend: BackendSpec,
    pub cutoff_c: f64,
    /// τ_j = min(inj, tau_factor · cluster radius).
    pub tau_factor: f64,
    pub mean_opts: MeanOptions,
    /// Domain box for the RBF backend; defaults to the bounding box of all inputs.
    pub domain: Option<DomainBox>,
}

impl MtsmConfig {
    pub fn new(manifold: &Manifold, r_max: usize, backend: BackendSpec) -> Self {
        MtsmConfig {
            anchors: AnchorSelectionConfig::for_manifold(manifold, r_max),
            backend,
            cutoff_c: DEFAULT_CUTOFF_C,
            tau_factor: DEFAULT_TAU_FACTOR,
            mean_opts: MeanOptions::default(),
            domain: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MtsmModel {
    pub manifold: Manifold,
    pub submodels: Vec<AnchorSubmodel>,
    pub cutoff_c: f64,
    pub mean_opts: MeanOptions,
}

/// Per-submodel bookkeeping from the offline stage.
#[derive(Clone, Debug)]
pub struct SubmodelReport {
    /// Samples whose `Log` at the anchor is undefined or longer than τ.
    pub excluded: Vec<usize>,
    /// Samples the interpolant was trained on.
    pub fitted: Vec<usize>,
    /// Set when a grid backend had to be trained on every sample with a
    /// defined `Log` because the τ-ball subset was not a tensor grid.
    pub grid_fallback: bool,
}

#[derive(Clone, Debug)]
pub struct MtsmFit {
    pub model: MtsmModel,
    pub selection: Option<AnchorSelection>,
    pub reports: Vec<SubmodelReport>,
}

/// Everything the online stage computes at one query.
#[derive(Clone, Debug)]
pub struct MtsmTrace {
    pub coords: Vec<Vec<f64>>,
    pub out_of_domain: Vec<bool>,
    pub weights: PartitionWeights,
}

impl MtsmModel {
    pub fn new(manifold: Manifold, submodels: Vec<AnchorSubmodel>, cutoff_c: f64, mean_opts: MeanOptions) -> Result<Self> {
        if submodels.is_empty() {
            return Err(Error::InvalidArgument("a model needs at least one submodel".into()));
        }
        if !(cutoff_c > 0.0 && cutoff_c < 1.0) {
            return Err(Error::InvalidArgument(format!("cutoff c must lie in (0,1), got {cutoff_c}")));
        }
        Ok(MtsmModel {
            manifold,
            submodels,
            cutoff_c,
            mean_opts,
        })
    }

    pub fn r(&self) -> usize {
        self.submodels.len()
    }

    pub fn input_dim(&self) -> usize {
        self.submodels[0].ghat.input_dim
    }

    /// Evaluates every `ĝ_j(x)` and the resulting partition of unity. A single
    /// submodel always gets weight one.
    pub fn trace(&self, x: &[f64]) -> Result<MtsmTrace> {
        let mut coords = Vec::with_capacity(self.r());
        let mut out_of_domain = Vec::with_capacity(self.r());
        for sub in &self.submodels {
            let (c, ood) = sub.eval_coords(x)?;
            coords.push(c);
            out_of_domain.push(ood);
        }
        let weights = if self.r() == 1 {
            PartitionWeights {
                weights: vec![1.0],
                active: vec![0],
            }
        } else {
            let dsq: Vec<Option<f64>> = coords
                .iter()
                .zip(&out_of_domain)
                .map(|(c, ood)| (!ood).then(|| c.iter().map(|v| v * v).sum()))
                .collect();
            let sigmas: Vec<f64> = self.submodels.iter().map(|s| s.sigma).collect();
            partition_weights(&dsq, &sigmas, self.cutoff_c)
        };
        Ok(MtsmTrace {
            coords,
            out_of_domain,
            weights,
        })
    }

    pub fn eval(&self, x: &[f64]) -> Result<Point> {
        let t = self.trace(x)?;
        match t.weights.active.as_slice() {
            [] => Err(Error::EmptyActiveSet(x.to_vec())),
            [j] => self.submodels[*j].push_forward(&self.manifold, &t.coords[*j]),
            active => {
                let qs: Vec<Point> = active
                    .iter()
                    .map(|&j| self.submodels[j].push_forward(&self.manifold, &t.coords[j]))
                    .collect::<Result<_>>()?;
                let raw: Vec<f64> = active.iter().map(|&j| t.weights.weights[j]).collect();
                let w = SimplexWeights::normalized(&raw)?;
                Ok(frechet_mean(&self.manifold, &qs, &w, &self.mean_opts)?.point)
            }
        }
    }
}

/// Fits one submodel per cluster center.
///
/// Each interpolant is trained on every sample whose `Log` at the anchor
/// exists with norm at most `τ_j = min(inj, tau_factor · r_j)`, where `r_j` is
/// the cluster radius; `σ_j` is the largest tangent norm in that set.
pub fn fit_submodels(
    samples: &SampleSet,
    clustering: &Clustering,
    cfg: &MtsmConfig,
) -> Result<(Vec<AnchorSubmodel>, Vec<SubmodelReport>)> {
    let m = &samples.manifold;
    let inj = if m.inj_estimate > 0.0 { m.inj_estimate } else { f64::INFINITY };
    let grid_backend = !matches!(cfg.backend, BackendSpec::Rbf { .. });
    let mut subs = Vec::with_capacity(clustering.len());
    let mut reports = Vec::with_capacity(clustering.len());
    for (j, anchor) in clustering.centers.iter().enumerate() {
        let frame = m.tangent_frame(anchor)?;
        let pulled = pull_back(m, anchor, &frame, samples.outputs());
        let radius = clustering.radii[j].max(SIGMA_FLOOR);
        let tau = (cfg.tau_factor * radius).min(inj);
        let mut fitted = Vec::new();
        let mut excluded = Vec::new();
        let mut sigma = 0.0f64;
        for (i, c) in pulled.iter().enumerate() {
            match c {
                Some(c) if coord_norm(c) <= tau => {
                    sigma = sigma.max(coord_norm(c));
                    fitted.push(i);
                }
                _ => excluded.push(i),
            }
        }
        if fitted.is_empty() {
            return Err(Error::InvalidArgument(format!("cluster {j} has an empty fitting set")));
        }
        let sigma = sigma.max(SIGMA_FLOOR);
        let tau = tau.max(sigma);
        let subset = |idx: &[usize]| -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
            idx.iter()
                .map(|&i| (samples.inputs()[i].clone(), pulled[i].clone().expect("log defined")))
                .unzip()
        };
        let (xs, cs) = subset(&fitted);
        let first = AnchorSubmodel::fit_subset(
            anchor.clone(),
            frame.clone(),
            xs,
            cs,
            sigma,
            tau,
            &cfg.backend,
            cfg.domain.clone(),
        );
        let (sub, grid_fallback, fitted, excluded) = match first {
            Ok(sub) => (sub, false, fitted, excluded),
            Err(_) if grid_backend => {
                let defined: Vec<usize> = (0..pulled.len()).filter(|&i| pulled[i].is_some()).collect();
                let undefined: Vec<usize> = (0..pulled.len()).filter(|&i| pulled[i].is_none()).collect();
                let (xs, cs) = subset(&defined);
                let sub = AnchorSubmodel::fit_subset(
                    anchor.clone(),
                    frame,
                    xs,
                    cs,
                    sigma,
                    tau,
                    &cfg.backend,
                    cfg.domain.clone(),
                )?;
                log::info!("submodel {j}: tau-ball subset is not a tensor grid, trained on all {} samples", defined.len());
                (sub, true, defined, undefined)
            }
            Err(e) => return Err(e),
        };
        subs.push(sub);
        reports.push(SubmodelReport {
            excluded,
            fitted,
            grid_fallback,
        });
    }
    Ok((subs, reports))
}

/// Offline stage: adaptive anchor selection followed by one submodel per anchor.
pub fn mtsm_fit(samples: &SampleSet, cfg: &MtsmConfig) -> Result<MtsmFit> {
    let selection = select_anchors(&samples.manifold, samples.outputs(), &cfg.anchors)?;
    let (subs, reports) = fit_submodels(samples, &selection.clustering, cfg)?;
    let model = MtsmModel::new(samples.manifold.clone(), subs, cfg.cutoff_c, cfg.mean_opts.clone())?;
    Ok(MtsmFit {
        model,
        selection: Some(selection),
        reports,
    })
}

/// Offline stage with the anchors given instead of selected.
pub fn mtsm_fit_with_anchors(samples: &SampleSet, anchors: Vec<Point>, cfg: &MtsmConfig) -> Result<MtsmFit> {
    let clustering = Clustering::from_centers(&samples.manifold, samples.outputs(), anchors)?;
    let (subs, reports) = fit_submodels(samples, &clustering, cfg)?;
    let model = MtsmModel::new(samples.manifold.clone(), subs, cfg.cutoff_c, cfg.mean_opts.clone())?;
    Ok(MtsmFit {
        model,
        selection: None,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::single::{stsm_fit, AnchorChoice};
    use nalgebra::DMatrix;

    fn sphere_pt(theta: f64, phi: f64) -> Point {
        Point(DMatrix::from_column_slice(
            3,
            1,
            &[phi.cos() * theta.cos(), phi.cos() * theta.sin(), phi.sin()],
        ))
    }

    fn sphere_samples() -> SampleSet {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..9 {
            for j in 0..9 {
                let (a, b) = (-1.0 + i as f64 / 4.0, -1.0 + j as f64 / 4.0);
                xs.push(vec![a, b]);
                ys.push(sphere_pt(1.2 * a, 0.6 * b));
            }
        }
        SampleSet::new(Manifold::sphere(2), xs, ys).unwrap()
    }

    #[test]
    fn single_submodel_matches_stsm() {
        let s = sphere_samples();
        let mut cfg = MtsmConfig::new(&s.manifold, 1, BackendSpec::Rbf { shape: None });
        cfg.anchors.curvature_lower = 0.0;
        cfg.anchors.inj_estimate = 0.0;
        let fit = mtsm_fit(&s, &cfg).unwrap();
        assert_eq!(fit.model.r(), 1);
        let anchor = fit.model.submodels[0].anchor.clone();
        let stsm = stsm_fit(&s, &AnchorChoice::Given(anchor), &BackendSpec::Rbf { shape: None }, None).unwrap();
        for x in [[0.1, 0.2], [-0.9, 0.95], [0.33, -0.71]] {
            let a = fit.model.eval(&x).unwrap();
            let b = stsm.eval(&s.manifold, &x).unwrap();
            assert!((a.0 - b.0).abs().max() < 1e-12);
        }
    }

    #[test]
    fn multi_patch_interpolates_training_data() {
        let s = sphere_samples();
        let anchors = vec![sphere_pt(-0.8, 0.0), sphere_pt(0.0, 0.0), sphere_pt(0.8, 0.0)];
        let cfg = MtsmConfig::new(&s.manifold, 3, BackendSpec::Multilinear);
        let fit = mtsm_fit_with_anchors(&s, anchors, &cfg).unwrap();
        assert_eq!(fit.model.r(), 3);
        for (x, y) in s.inputs().iter().zip(s.outputs()) {
            let p = fit.model.eval(x).unwrap();
            assert!(s.manifold.dist(&p, y).unwrap() < 1e-7);
        }
    }

    #[test]
    fn empty_active_set_is_an_error() {
        let s = sphere_samples();
        let anchors = vec![sphere_pt(-0.8, 0.0), sphere_pt(0.8, 0.0)];
        let cfg = MtsmConfig::new(&s.manifold, 2, BackendSpec::Multilinear);
        let mut fit = mtsm_fit_with_anchors(&s, anchors, &cfg).unwrap();
        for sub in &mut fit.model.submodels {
            sub.sigma = 1e-3;
        }
        assert!(matches!(fit.model.eval(&[0.0, 0.9]), Err(Error::EmptyActiveSet(_))));
    }
}
