//! Weighted Fréchet (Karcher) mean by Riemannian gradient descent.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{Manifold, Point, Tangent};

/// Weights on the standard simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty weight vector".into()));
        }
        if values.iter().any(|w| !(0.0..=1.0).contains(w)) {
            return Err(Error::InvalidArgument("weights must lie in [0, 1]".into()));
        }
        let s: f64 = values.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("weights sum to {s}, not 1")));
        }
        Ok(SimplexWeights(values))
    }

    /// Normalizes non-negative raw weights onto the simplex.
    pub fn normalized(raw: &[f64]) -> Result<Self> {
        let s: f64 = raw.iter().sum();
        if raw.iter().any(|w| *w < 0.0 || !w.is_finite()) || s <= 0.0 {
            return Err(Error::InvalidArgument("raw weights must be non-negative with positive sum".into()));
        }
        Ok(SimplexWeights(raw.iter().map(|w| w / s).collect()))
    }

    pub fn uniform(n: usize) -> Self {
        SimplexWeights(vec![1.0 / n as f64; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepRule {
    /// Unit step: the classical Karcher fixed-point iteration.
    Fixed,
    /// Armijo backtracking from a unit step with `c1 = 1e-4`, halving.
    Backtracking,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeanInit {
    FirstPoint,
    WeightedArgmax,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanOptions {
    pub grad_tol: f64,
    pub max_iters: usize,
    pub step_rule: StepRule,
    pub init: MeanInit,
}

impl Default for MeanOptions {
    fn default() -> Self {
        MeanOptions {
            grad_tol: 1e-10,
            max_iters: 200,
            step_rule: StepRule::Backtracking,
            init: MeanInit::WeightedArgmax,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MeanSolution {
    pub point: Point,
    pub iterations: usize,
    pub grad_norm: f64,
    /// Objective value at every accepted iterate, starting with the initial point.
    pub objective_history: Vec<f64>,
}

const ARMIJO_C1: f64 = 1e-4;

struct Linearization {
    grad: Tangent,
    grad_norm: f64,
    objective: f64,
}

fn linearize(
    manifold: &Manifold,
    p: &Point,
    points: &[&Point],
    weights: &[f64],
) -> Result<Linearization> {
    let mut grad = manifold.zero_tangent().0;
    let mut objective = 0.0;
    for (y, w) in points.iter().zip(weights) {
        let v = manifold
            .log(p, y)
            .map_err(|e| Error::NotCommonDomain(e.to_string()))?;
        let n = manifold.norm(p, &v)?;
        objective += w * n * n;
        grad += &v.0 * *w;
    }
    let grad = Tangent(grad);
    let grad_norm = manifold.norm(p, &grad)?;
    Ok(Linearization {
        grad,
        grad_norm,
        objective,
    })
}

/// Minimizes `Σ wᵢ dist(p, yᵢ)²` over the manifold.
///
/// The descent direction is `Σ wᵢ Log_p(yᵢ)`, the negative Riemannian gradient
/// of half the objective. Points with zero weight never enter the iteration.
pub fn frechet_mean(
    manifold: &Manifold,
    points: &[Point],
    weights: &SimplexWeights,
    opts: &MeanOptions,
) -> Result<MeanSolution> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("Frechet mean of zero points".into()));
    }
    if points.len() != weights.len() {
        return Err(Error::InvalidArgument(format!(
            "{} points but {} weights",
            points.len(),
            weights.len()
        )));
    }
    if !(opts.grad_tol > 0.0) || opts.max_iters == 0 {
        return Err(Error::InvalidArgument("grad_tol must be > 0 and max_iters >= 1".into()));
    }
    let (pts, ws): (Vec<&Point>, Vec<f64>) = points
        .iter()
        .zip(weights.values())
        .filter(|(_, w)| **w > 0.0)
        .map(|(p, w)| (p, *w))
        .unzip();

    let start = match opts.init {
        MeanInit::FirstPoint => 0,
        MeanInit::WeightedArgmax => {
            let mut best = 0;
            for (i, w) in ws.iter().enumerate() {
                if *w > ws[best] {
                    best = i;
                }
            }
            best
        }
    };
    let mut p = pts[start].clone();
    if pts.iter().all(|y| y.0 == p.0) {
        return Ok(MeanSolution {
            point: p,
            iterations: 0,
            grad_norm: 0.0,
            objective_history: vec![0.0],
        });
    }
    let mut lin = linearize(manifold, &p, &pts, &ws)?;
    let mut history = vec![lin.objective];

    for iter in 0..opts.max_iters {
        if lin.grad_norm <= opts.grad_tol {
            return Ok(MeanSolution {
                point: p,
                iterations: iter,
                grad_norm: lin.grad_norm,
                objective_history: history,
            });
        }
        let (next_p, next_lin) = match opts.step_rule {
            StepRule::Fixed => {
                let q = manifold.exp(&p, &lin.grad)?;
                let l = linearize(manifold, &q, &pts, &ws)?;
                (q, l)
            }
            StepRule::Backtracking => {
                let mut eta = 1.0;
                // dist² carries rounding of order ε·dist, hence the √f term
                let slack = 64.0 * f64::EPSILON * (lin.objective.abs() + lin.objective.abs().sqrt());
                loop {
                    let q = manifold.exp(&p, &lin.grad.scale(eta))?;
                    let cand = linearize(manifold, &q, &pts, &ws);
                    let accept = match &cand {
                        Ok(l) => {
                            l.objective
                                <= lin.objective - ARMIJO_C1 * eta * lin.grad_norm * lin.grad_norm + slack
                        }
                        Err(_) => false,
                    };
                    if accept || eta < 1e-12 {
                        break (q, cand?);
                    }
                    eta *= 0.5;
                }
            }
        };
        p = next_p;
        lin = next_lin;
        history.push(lin.objective);
    }
    if lin.grad_norm <= opts.grad_tol {
        return Ok(MeanSolution {
            point: p,
            iterations: opts.max_iters,
            grad_norm: lin.grad_norm,
            objective_history: history,
        });
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iters,
        grad_norm: lin.grad_norm,
        last_iterate: p.0,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessReport {
    pub ok: bool,
    pub max_dist: f64,
    /// `½ · min{inj, π/√K}`.
    pub radius_bound: f64,
    /// `radius_bound - max_dist`; negative when the check fails.
    pub slack: f64,
}

/// Checks whether all points lie in a ball around `center` small enough for
/// the weighted mean to be globally unique.
pub fn uniqueness_radius_ok(
    manifold: &Manifold,
    points: &[Point],
    center: &Point,
    curvature_upper: f64,
    inj: f64,
) -> Result<UniquenessReport> {
    let conj = if curvature_upper > 0.0 {
        PI / curvature_upper.sqrt()
    } else {
        f64::INFINITY
    };
    let radius_bound = 0.5 * inj.min(conj);
    let mut max_dist: f64 = 0.0;
    for y in points {
        max_dist = max_dist.max(manifold.dist(center, y)?);
    }
    let ok = max_dist.is_finite() && max_dist <= radius_bound;
    Ok(UniquenessReport {
        ok,
        max_dist,
        radius_bound,
        slack: radius_bound - max_dist,
    })
}
