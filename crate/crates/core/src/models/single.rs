//! Single tangent space model: pull back by `Log`, interpolate, push forward by `Exp`.

use crate::error::{Error, Result};
use crate::geometry::{Manifold, Point, Tangent, TangentFrame};
use crate::interp::{self, BackendSpec, DomainBox, TrainingTable, VectorInterpolant};
use crate::mean::{frechet_mean, MeanOptions, SimplexWeights};
use crate::samples::SampleSet;

/// Lower bound on a submodel's data radius, so that the cutoff has a plateau.
pub const SIGMA_FLOOR: f64 = 1e-8;

/// Relative slack between σ and the default τ of a standalone STSM.
pub const TAU_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct AnchorSubmodel {
    pub anchor: Point,
    /// Data radius: the largest tangent norm among the fitted samples.
    pub sigma: f64,
    /// Radius of the tangent ball the interpolant is expected to stay in.
    pub tau: f64,
    pub ghat: VectorInterpolant,
    pub frame: TangentFrame,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnchorChoice {
    Frechet,
    /// A sample output picked by a seeded RNG.
    RandomSample(u64),
    Given(Point),
}

/// Tangent coordinates of every output at `anchor`, or the indices where `Log` fails.
pub(crate) fn pull_back(
    manifold: &Manifold,
    anchor: &Point,
    frame: &TangentFrame,
    outputs: &[Point],
) -> Vec<Option<Vec<f64>>> {
    outputs
        .iter()
        .map(|y| manifold.log(anchor, y).ok().map(|v| frame.flatten(&v)))
        .collect()
}

pub(crate) fn coord_norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

impl AnchorSubmodel {
    /// Fits `ĝ` on the given subset of samples.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn fit_subset(
        anchor: Point,
        frame: TangentFrame,
        inputs: Vec<Vec<f64>>,
        coords: Vec<Vec<f64>>,
        sigma: f64,
        tau: f64,
        backend: &BackendSpec,
        domain: Option<DomainBox>,
    ) -> Result<Self> {
        let table = TrainingTable::new(inputs, coords)?;
        let ghat = interp::fit(&table, backend, domain)?;
        Ok(AnchorSubmodel {
            anchor,
            sigma,
            tau,
            ghat,
            frame,
        })
    }

    /// `ĝ(x)` in frame coordinates and the out-of-domain flag.
    pub fn eval_coords(&self, x: &[f64]) -> Result<(Vec<f64>, bool)> {
        let e = self.ghat.eval(x)?;
        Ok((e.value, e.out_of_domain))
    }

    /// Maps frame coordinates to the manifold through the anchor.
    pub fn push_forward(&self, manifold: &Manifold, coords: &[f64]) -> Result<Point> {
        let v: Tangent = self.frame.unflatten(coords);
        let v = manifold.project(&self.anchor, &v.0)?;
        manifold.exp(&self.anchor, &v)
    }

    /// `Exp_{p*}(ĝ(x))`; queries outside the domain are clamped.
    pub fn eval(&self, manifold: &Manifold, x: &[f64]) -> Result<Point> {
        let (c, _) = self.eval_coords(x)?;
        self.push_forward(manifold, &c)
    }
}

fn resolve_anchor(samples: &SampleSet, choice: &AnchorChoice, mean_opts: &MeanOptions) -> Result<Point> {
    let m = &samples.manifold;
    match choice {
        AnchorChoice::Given(p) => {
            m.validate_point(p, crate::samples::POINT_TOL)?;
            Ok(p.clone())
        }
        AnchorChoice::RandomSample(seed) => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
            Ok(samples.outputs()[rng.random_range(0..samples.len())].clone())
        }
        AnchorChoice::Frechet => {
            let w = SimplexWeights::uniform(samples.len());
            Ok(frechet_mean(m, samples.outputs(), &w, mean_opts)?.point)
        }
    }
}

/// Fits a single tangent space model on all samples.
///
/// Every output must have a well-defined `Log` at the anchor; otherwise the
/// offending indices are reported.
pub fn stsm_fit(
    samples: &SampleSet,
    anchor: &AnchorChoice,
    backend: &BackendSpec,
    domain: Option<DomainBox>,
) -> Result<AnchorSubmodel> {
    let m = &samples.manifold;
    let anchor = resolve_anchor(samples, anchor, &MeanOptions::default())?;
    let frame = m.tangent_frame(&anchor)?;
    let pulled = pull_back(m, &anchor, &frame, samples.outputs());
    let bad: Vec<usize> = pulled
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_none())
        .map(|(i, _)| i)
        .collect();
    if !bad.is_empty() {
        return Err(Error::SamplesOutsideDomain { indices: bad });
    }
    let coords: Vec<Vec<f64>> = pulled.into_iter().map(Option::unwrap).collect();
    let sigma = coords.iter().map(|c| coord_norm(c)).fold(0.0, f64::max).max(SIGMA_FLOOR);
    let mut tau = sigma * (1.0 + TAU_SLACK);
    if m.inj_estimate.is_finite() && m.inj_estimate > 0.0 {
        tau = tau.min(m.inj_estimate).max(sigma);
    }
    AnchorSubmodel::fit_subset(
        anchor,
        frame,
        samples.inputs().to_vec(),
        coords,
        sigma,
        tau,
        backend,
        domain,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn identical_outputs_give_constant_model() {
        let m = Manifold::sphere(2);
        let p = Point(DMatrix::from_column_slice(3, 1, &[0.0, 0.0, 1.0]));
        let s = SampleSet::new(m.clone(), vec![vec![0.0], vec![1.0], vec![2.0]], vec![p.clone(); 3]).unwrap();
        let sub = stsm_fit(&s, &AnchorChoice::Frechet, &BackendSpec::PiecewiseLinear1d, None).unwrap();
        assert_eq!(sub.sigma, SIGMA_FLOOR);
        for x in [0.0, 0.7, 1.9] {
            assert!(m.dist(&sub.eval(&m, &[x]).unwrap(), &p).unwrap() < 1e-15);
        }
    }

    #[test]
    fn euclidean_affine_on_grid_is_exact() {
        let m = Manifold::euclidean(2);
        let f = |x: f64, y: f64| [1.0 + 2.0 * x - y, 0.5 * x + 3.0 * y];
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..4 {
            for j in 0..3 {
                let (x, y) = (i as f64 / 3.0, j as f64 / 2.0);
                xs.push(vec![x, y]);
                ys.push(Point(DMatrix::from_column_slice(2, 1, &f(x, y))));
            }
        }
        let s = SampleSet::new(m.clone(), xs, ys).unwrap();
        let sub = stsm_fit(&s, &AnchorChoice::RandomSample(3), &BackendSpec::Multilinear, None).unwrap();
        for (x, y) in [(0.1, 0.2), (0.9, 0.95), (0.5, 0.5)] {
            let p = sub.eval(&m, &[x, y]).unwrap();
            let t = f(x, y);
            assert!((p.0[0] - t[0]).abs() < 1e-10 && (p.0[1] - t[1]).abs() < 1e-10);
        }
    }

    #[test]
    fn sphere_geodesic_piecewise_linear_exact_at_knots() {
        let m = Manifold::sphere(2);
        let p = Point(DMatrix::from_column_slice(3, 1, &[1.0, 0.0, 0.0]));
        let v = m.project(&p, &DMatrix::from_column_slice(3, 1, &[0.0, 0.6, 0.8])).unwrap();
        let ts: Vec<f64> = (0..7).map(|k| -1.0 + k as f64 / 3.0).collect();
        let ys: Vec<Point> = ts.iter().map(|t| m.exp(&p, &v.scale(*t)).unwrap()).collect();
        let s = SampleSet::new(m.clone(), ts.iter().map(|t| vec![*t]).collect(), ys.clone()).unwrap();
        let sub = stsm_fit(&s, &AnchorChoice::Given(p), &BackendSpec::PiecewiseLinear1d, None).unwrap();
        for (t, y) in ts.iter().zip(&ys) {
            assert!(m.dist(&sub.eval(&m, &[*t]).unwrap(), y).unwrap() < 1e-8);
        }
    }

    #[test]
    fn antipodal_sample_is_reported() {
        let m = Manifold::sphere(2);
        let p = Point(DMatrix::from_column_slice(3, 1, &[1.0, 0.0, 0.0]));
        let q = Point(DMatrix::from_column_slice(3, 1, &[-1.0, 0.0, 0.0]));
        let s = SampleSet::new(m, vec![vec![0.0], vec![1.0]], vec![p.clone(), q]).unwrap();
        let r = stsm_fit(&s, &AnchorChoice::Given(p), &BackendSpec::PiecewiseLinear1d, None);
        assert!(matches!(r, Err(Error::SamplesOutsideDomain { indices }) if indices == vec![1]));
    }
}
