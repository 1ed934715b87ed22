//! Riemannian k-means, the covering statistic `d*_R`, and adaptive anchor
//! selection.

use std::f64::consts::PI;

use log::{debug, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Manifold, Point};
use crate::mean::{frechet_mean, MeanOptions, SimplexWeights};

/// A hard clustering of sample outputs.
#[derive(Clone, Debug)]
pub struct Clustering {
    pub centers: Vec<Point>,
    /// `assignment[i]` is the center index of sample `i`.
    pub assignment: Vec<usize>,
    /// Largest `‖Log_{center} y‖` over the members of each cluster.
    pub radii: Vec<f64>,
    /// Within-cluster sum of squared distances.
    pub objective: f64,
}

impl Clustering {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Assigns every point to its nearest given center (ties to the lower index).
    pub fn from_centers(manifold: &Manifold, points: &[Point], centers: Vec<Point>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::InvalidArgument("at least one center is required".into()));
        }
        let near = assign(manifold, &centers, points)?;
        let assignment: Vec<usize> = near.iter().map(|(j, _)| *j).collect();
        let objective = near.iter().map(|(_, d)| d * d).sum();
        let radii = radii(manifold, &centers, points, &assignment)?;
        Ok(Clustering {
            centers,
            assignment,
            radii,
            objective,
        })
    }

    pub fn members(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(move |(_, a)| **a == j)
            .map(|(i, _)| i)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KmeansOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub mean_opts: MeanOptions,
}

impl Default for KmeansOptions {
    fn default() -> Self {
        KmeansOptions {
            restarts: 5,
            max_iters: 100,
            seed: 0,
            mean_opts: MeanOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnchorSelectionConfig {
    pub r_max: usize,
    /// Injectivity radius estimate; `0` means unknown.
    pub inj_estimate: f64,
    /// Lower sectional curvature bound, `<= 0`.
    pub curvature_lower: f64,
    pub kmeans: KmeansOptions,
}

impl AnchorSelectionConfig {
    /// Configuration taking `M` and `L` from the manifold descriptor.
    pub fn for_manifold(manifold: &Manifold, r_max: usize) -> Self {
        AnchorSelectionConfig {
            r_max,
            inj_estimate: manifold.inj_estimate,
            curvature_lower: manifold.curvature_lower,
            kmeans: KmeansOptions::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.r_max < 1 {
            return Err(Error::InvalidArgument("R_max must be >= 1".into()));
        }
        if self.curvature_lower > 0.0 || self.curvature_lower.is_nan() {
            return Err(Error::InvalidArgument("curvature lower bound must be <= 0".into()));
        }
        if !(self.inj_estimate >= 0.0) {
            return Err(Error::InvalidArgument("injectivity estimate must be >= 0".into()));
        }
        Ok(())
    }
}

/// Largest finite nonzero pairwise distance; `0` if there is none.
pub fn ddiam(manifold: &Manifold, points: &[Point]) -> Result<f64> {
    let rows: Vec<f64> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let mut best: f64 = 0.0;
            for j in (i + 1)..points.len() {
                let d = manifold.dist(&points[i], &points[j])?;
                if d > 0.0 && d.is_finite() {
                    best = best.max(d);
                }
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().fold(0.0, f64::max))
}

/// `‖Log_c y‖` if `y` lies strictly inside the injectivity estimate of the
/// manifold and the log is computable, `+∞` otherwise.
fn covered_radius(manifold: &Manifold, c: &Point, y: &Point) -> Result<f64> {
    let inj = manifold.inj_estimate;
    if inj > 0.0 && inj.is_finite() && manifold.dist(c, y)? >= inj {
        return Ok(f64::INFINITY);
    }
    match manifold.log(c, y) {
        Ok(v) => manifold.norm(c, &v),
        Err(Error::DimensionMismatch { expected, got }) => Err(Error::DimensionMismatch { expected, got }),
        Err(_) => Ok(f64::INFINITY),
    }
}

/// `max_i min_j ‖Log_{c_j} y_i‖` with the `+∞` convention for samples outside
/// the injectivity domain of a center.
pub fn coverage_stat_d_star(manifold: &Manifold, points: &[Point], centers: &[Point]) -> Result<f64> {
    if centers.is_empty() {
        return Err(Error::InvalidArgument("at least one center is required".into()));
    }
    let per_point: Vec<f64> = points
        .par_iter()
        .map(|y| {
            let mut best = f64::INFINITY;
            for c in centers {
                best = best.min(covered_radius(manifold, c, y)?);
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;
    Ok(per_point.into_iter().fold(0.0, f64::max))
}

fn nearest(manifold: &Manifold, centers: &[Point], y: &Point) -> Result<(usize, f64)> {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centers.iter().enumerate() {
        let d = manifold.dist(c, y)?;
        if d < best.1 {
            best = (j, d);
        }
    }
    Ok(best)
}

fn assign(manifold: &Manifold, centers: &[Point], points: &[Point]) -> Result<Vec<(usize, f64)>> {
    points.par_iter().map(|y| nearest(manifold, centers, y)).collect()
}

/// k-means++ seeding with geodesic distances.
fn seed_centers(manifold: &Manifold, points: &[Point], r: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let n = points.len();
    let mut chosen = vec![rng.random_range(0..n)];
    let mut d2: Vec<f64> = points
        .iter()
        .map(|y| manifold.dist(&points[chosen[0]], y).map(|d| d * d))
        .collect::<Result<_>>()?;
    while chosen.len() < r {
        let finite_max = d2.iter().copied().filter(|d| d.is_finite()).fold(0.0, f64::max);
        let w: Vec<f64> = d2
            .iter()
            .map(|d| if d.is_finite() { *d } else { 4.0 * finite_max.max(1.0) })
            .collect();
        let total: f64 = w.iter().sum();
        let next = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, wi) in w.iter().enumerate() {
                if u < *wi {
                    pick = i;
                    break;
                }
                u -= wi;
            }
            pick
        } else {
            (0..n).find(|i| !chosen.contains(i)).expect("r <= n")
        };
        let next = if chosen.contains(&next) {
            (0..n).find(|i| !chosen.contains(i)).expect("r <= n")
        } else {
            next
        };
        chosen.push(next);
        for (i, y) in points.iter().enumerate() {
            let d = manifold.dist(&points[next], y)?;
            d2[i] = d2[i].min(d * d);
        }
    }
    Ok(chosen)
}

fn radii(manifold: &Manifold, centers: &[Point], points: &[Point], assignment: &[usize]) -> Result<Vec<f64>> {
    let mut out = vec![0.0f64; centers.len()];
    for (y, &a) in points.iter().zip(assignment) {
        let r = match manifold.log(&centers[a], y) {
            Ok(v) => manifold.norm(&centers[a], &v)?,
            Err(_) => f64::INFINITY,
        };
        out[a] = out[a].max(r);
    }
    Ok(out)
}

/// One seeded Lloyd run. Returns the clustering and the objective after every
/// center update.
pub(crate) fn kmeans_single_run(
    manifold: &Manifold,
    points: &[Point],
    r: usize,
    opts: &KmeansOptions,
    seed: u64,
) -> Result<(Clustering, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers: Vec<Point> = seed_centers(manifold, points, r, &mut rng)?
        .into_iter()
        .map(|i| points[i].clone())
        .collect();
    let mut history = Vec::new();
    let mut prev: Option<Vec<usize>> = None;
    let mut nearest_d = assign(manifold, &centers, points)?;
    for _ in 0..opts.max_iters {
        let mut assignment: Vec<usize> = nearest_d.iter().map(|(j, _)| *j).collect();
        // empty cluster: move its center to the sample farthest from its own center
        loop {
            let mut counts = vec![0usize; r];
            for &a in &assignment {
                counts[a] += 1;
            }
            let Some(empty) = counts.iter().position(|&c| c == 0) else {
                break;
            };
            let far = nearest_d
                .iter()
                .enumerate()
                .filter(|(i, _)| counts[assignment[*i]] > 1)
                .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1).then(b.0.cmp(&a.0)))
                .map(|(i, _)| i)
                .ok_or_else(|| Error::Numerical("cannot reseed empty cluster".into()))?;
            debug!("k-means: reseeding empty cluster {empty} at sample {far}");
            centers[empty] = points[far].clone();
            nearest_d = assign(manifold, &centers, points)?;
            assignment = nearest_d.iter().map(|(j, _)| *j).collect();
        }
        if prev.as_ref() == Some(&assignment) {
            break;
        }
        centers = (0..r)
            .into_par_iter()
            .map(|j| {
                let members: Vec<Point> = assignment
                    .iter()
                    .zip(points)
                    .filter(|(a, _)| **a == j)
                    .map(|(_, y)| y.clone())
                    .collect();
                let w = SimplexWeights::uniform(members.len());
                frechet_mean(manifold, &members, &w, &opts.mean_opts).map(|s| s.point)
            })
            .collect::<Result<_>>()?;
        let obj: f64 = points
            .iter()
            .zip(&assignment)
            .map(|(y, &a)| manifold.dist(&centers[a], y).map(|d| d * d))
            .sum::<Result<f64>>()?;
        history.push(obj);
        prev = Some(assignment);
        nearest_d = assign(manifold, &centers, points)?;
    }
    let assignment: Vec<usize> = nearest_d.iter().map(|(j, _)| *j).collect();
    let objective = nearest_d.iter().map(|(_, d)| d * d).sum();
    let radii = radii(manifold, &centers, points, &assignment)?;
    Ok((
        Clustering {
            centers,
            assignment,
            radii,
            objective,
        },
        history,
    ))
}

/// Hard k-means with geodesic distances and Fréchet-mean centers. The best of
/// `opts.restarts` seeded runs (lowest objective, ties to the earliest run) is
/// returned.
pub fn riemannian_kmeans(manifold: &Manifold, points: &[Point], r: usize, opts: &KmeansOptions) -> Result<Clustering> {
    if r < 1 || r > points.len() {
        return Err(Error::InvalidArgument(format!(
            "k-means needs 1 <= R <= N, got R = {r}, N = {}",
            points.len()
        )));
    }
    let runs: Vec<Clustering> = (0..opts.restarts.max(1) as u64)
        .into_par_iter()
        .map(|k| {
            let seed = opts.seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            kmeans_single_run(manifold, points, r, opts, seed).map(|(c, _)| c)
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (k, c) in runs.iter().enumerate() {
        if c.objective < runs[best].objective {
            best = k;
        }
    }
    Ok(runs.into_iter().nth(best).expect("at least one run"))
}

/// Initial cluster count `⌊½ · ddiam · max{M⁻¹, √|L|/π}⌋`, with `M⁻¹ := 0`
/// when `M` is zero (unknown) or infinite.
pub fn initial_anchor_count(ddiam: f64, inj_estimate: f64, curvature_lower: f64) -> usize {
    let inv_m = if inj_estimate > 0.0 && inj_estimate.is_finite() {
        1.0 / inj_estimate
    } else {
        0.0
    };
    let rate = inv_m.max(curvature_lower.abs().sqrt() / PI);
    (0.5 * ddiam * rate).floor() as usize
}

/// Covering threshold `π/√|L|`, infinite for `L = 0`.
pub fn covering_threshold(curvature_lower: f64) -> f64 {
    if curvature_lower < 0.0 {
        PI / curvature_lower.abs().sqrt()
    } else {
        f64::INFINITY
    }
}

#[derive(Clone, Debug)]
pub struct AnchorSelection {
    pub clustering: Clustering,
    pub r_min: usize,
    pub d_star: f64,
    pub ddiam: f64,
    /// `ddiam / (2 max σ_j)`, the packing lower bound on R for equal radii.
    pub sandwich_lower: f64,
}

impl AnchorSelection {
    pub fn r(&self) -> usize {
        self.clustering.len()
    }
}

/// Scans `R = R_min, …, R_max` and returns the first k-means clustering whose
/// covering statistic is finite and below `π/√|L|`.
pub fn select_anchors(manifold: &Manifold, points: &[Point], cfg: &AnchorSelectionConfig) -> Result<AnchorSelection> {
    cfg.validate()?;
    if points.is_empty() {
        return Err(Error::NoSamples);
    }
    if cfg.r_max > points.len() {
        return Err(Error::InvalidArgument(format!(
            "R_max = {} exceeds the number of samples {}",
            cfg.r_max,
            points.len()
        )));
    }
    let dd = ddiam(manifold, points)?;
    let mut r_min = initial_anchor_count(dd, cfg.inj_estimate, cfg.curvature_lower).max(1);
    if r_min > cfg.r_max {
        r_min = 1;
    }
    let threshold = covering_threshold(cfg.curvature_lower);
    for r in r_min..=cfg.r_max {
        let clustering = riemannian_kmeans(manifold, points, r, &cfg.kmeans)?;
        let d_star = coverage_stat_d_star(manifold, points, &clustering.centers)?;
        debug!("anchor selection: R = {r}, d* = {d_star}, threshold = {threshold}");
        if d_star.is_finite() && d_star < threshold {
            let max_radius = clustering.radii.iter().copied().fold(0.0, f64::max);
            let sandwich_lower = if max_radius > 0.0 { dd / (2.0 * max_radius) } else { 0.0 };
            if sandwich_lower > r as f64 {
                warn!("anchor selection: R = {r} is below the packing lower bound {sandwich_lower:.3}");
            }
            return Ok(AnchorSelection {
                clustering,
                r_min,
                d_star,
                ddiam: dd,
                sandwich_lower,
            });
        }
    }
    Err(Error::AnchorSelectionFailed {
        r_min,
        r_max: cfg.r_max,
    })
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Volume (up to the dimension constant) of a geodesic ball of radius `r` in
/// the `n`-dimensional model space of constant curvature `L <= 0`.
pub fn model_ball_volume(n: usize, curvature: f64, r: f64) -> f64 {
    if curvature == 0.0 {
        return r.powi(n as i32) / n as f64;
    }
    let k = curvature.abs().sqrt();
    let f = move |t: f64| ((k * t).sinh() / k).powi(n as i32 - 1);
    let scale = f(r) * r;
    adaptive_simpson(&f, 0.0, r, 1e-13 * scale.max(f64::MIN_POSITIVE))
}

/// Packing bound `Vol(B_big) / Vol(B_small)` in the model space `M_L`.
pub fn gromov_upper_bound(intrinsic_dim: usize, curvature_lower: f64, big_radius: f64, small_radius: f64) -> Result<f64> {
    if !(big_radius > 0.0 && small_radius > 0.0) || !big_radius.is_finite() || !small_radius.is_finite() {
        return Err(Error::InvalidArgument("radii must be positive and finite".into()));
    }
    if curvature_lower > 0.0 || intrinsic_dim == 0 {
        return Err(Error::InvalidArgument("need L <= 0 and a positive dimension".into()));
    }
    if big_radius == small_radius {
        return Ok(1.0);
    }
    if curvature_lower == 0.0 {
        return Ok((big_radius / small_radius).powi(intrinsic_dim as i32));
    }
    Ok(model_ball_volume(intrinsic_dim, curvature_lower, big_radius)
        / model_ball_volume(intrinsic_dim, curvature_lower, small_radius))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn line(xs: &[f64]) -> Vec<Point> {
        xs.iter().map(|x| Point(DMatrix::from_element(1, 1, *x))).collect()
    }

    fn col(v: &[f64]) -> Point {
        Point(DMatrix::from_column_slice(v.len(), 1, v))
    }

    #[test]
    fn ddiam_examples() {
        let m = Manifold::euclidean(1);
        assert_eq!(ddiam(&m, &line(&[2.0, 2.0, 2.0])).unwrap(), 0.0);
        assert_eq!(ddiam(&m, &line(&[0.0, 1.0, 3.0])).unwrap(), 3.0);
        let s = Manifold::sphere(2);
        let pts = vec![col(&[1.0, 0.0, 0.0]), col(&[-1.0, 0.0, 0.0]), col(&[0.0, 1.0, 0.0])];
        assert!((ddiam(&s, &pts).unwrap() - PI).abs() < 1e-15);
    }

    #[test]
    fn d_star_examples() {
        let m = Manifold::euclidean(1);
        let pts = line(&[0.0, 1.0, 2.0]);
        assert_eq!(coverage_stat_d_star(&m, &pts, &pts).unwrap(), 0.0);
        assert_eq!(coverage_stat_d_star(&m, &pts, &line(&[0.0, 2.0])).unwrap(), 1.0);
        let s = Manifold::sphere(2);
        let pts = vec![col(&[1.0, 0.0, 0.0]), col(&[-1.0, 0.0, 0.0])];
        assert_eq!(coverage_stat_d_star(&s, &pts, &pts[..1]).unwrap(), f64::INFINITY);
    }

    #[test]
    fn kmeans_splits_two_groups() {
        let m = Manifold::euclidean(1);
        let pts = line(&[0.0, 0.1, 10.0, 10.1]);
        let c = riemannian_kmeans(&m, &pts, 2, &KmeansOptions::default()).unwrap();
        let mut centers: Vec<f64> = c.centers.iter().map(|p| p.0[(0, 0)]).collect();
        centers.sort_by(f64::total_cmp);
        assert!((centers[0] - 0.05).abs() < 1e-12 && (centers[1] - 10.05).abs() < 1e-12);

        // brute force over 2-partitions of the line
        let xs = [0.0, 0.1, 10.0, 10.1];
        let mut best = f64::INFINITY;
        for mask in 1u32..15 {
            let (a, b): (Vec<f64>, Vec<f64>) = (0..4).map(|i| (mask >> i) & 1 == 1).zip(xs).fold(
                (vec![], vec![]),
                |(mut a, mut b), (s, x)| {
                    if s { a.push(x) } else { b.push(x) }
                    (a, b)
                },
            );
            let ss = |v: &[f64]| {
                let mu = v.iter().sum::<f64>() / v.len() as f64;
                v.iter().map(|x| (x - mu).powi(2)).sum::<f64>()
            };
            best = best.min(ss(&a) + ss(&b));
        }
        assert!((c.objective - best).abs() < 1e-12);
    }

    #[test]
    fn kmeans_r_equals_n() {
        let m = Manifold::euclidean(1);
        let pts = line(&[0.0, 0.3, 1.0, 5.0]);
        let c = riemannian_kmeans(&m, &pts, 4, &KmeansOptions::default()).unwrap();
        assert_eq!(c.objective, 0.0);
        let mut a = c.assignment.clone();
        a.sort();
        a.dedup();
        assert_eq!(a.len(), 4);
    }

    #[test]
    fn kmeans_single_cluster_on_sphere_is_midpoint() {
        let s = Manifold::sphere(2);
        let pts = vec![col(&[1.0, 0.0, 0.0]), col(&[0.0, 1.0, 0.0])];
        let c = riemannian_kmeans(&s, &pts, 1, &KmeansOptions::default()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(s.dist(&c.centers[0], &col(&[h, h, 0.0])).unwrap() < 1e-10);
    }

    #[test]
    fn kmeans_objective_non_increasing_and_assignment_optimal() {
        let s = Manifold::sphere(2);
        let pts: Vec<Point> = (0..60).map(|k| s.random_point(k)).collect();
        let opts = KmeansOptions::default();
        let (c, hist) = kmeans_single_run(&s, &pts, 4, &opts, 7).unwrap();
        for w in hist.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        for (i, y) in pts.iter().enumerate() {
            let (j, _) = nearest(&s, &c.centers, y).unwrap();
            assert_eq!(j, c.assignment[i]);
        }
        let again = riemannian_kmeans(&s, &pts, 4, &opts).unwrap();
        let twice = riemannian_kmeans(&s, &pts, 4, &opts).unwrap();
        assert_eq!(again.assignment, twice.assignment);
    }

    #[test]
    fn initial_count_formula() {
        assert_eq!(initial_anchor_count(10.0, 2.0, -1.0), 2);
        assert_eq!(initial_anchor_count(10.0, 0.0, 0.0), 0);
        assert_eq!(initial_anchor_count(10.0, f64::INFINITY, -4.0), 3);
    }

    #[test]
    fn select_anchors_on_identical_samples() {
        let m = Manifold::sphere(2);
        let p = m.random_point(3);
        let pts = vec![p.clone(); 5];
        let cfg = AnchorSelectionConfig::for_manifold(&m, 2);
        let sel = select_anchors(&m, &pts, &cfg).unwrap();
        assert_eq!(sel.r(), 1);
        assert_eq!(sel.d_star, 0.0);
    }

    #[test]
    fn select_anchors_fails_when_nothing_covers() {
        let m = Manifold::euclidean(1);
        let pts = line(&[0.0, 1.0, 20.0, 21.0]);
        let cfg = AnchorSelectionConfig {
            r_max: 1,
            inj_estimate: 0.0,
            curvature_lower: -1.0,
            kmeans: KmeansOptions::default(),
        };
        assert!(matches!(
            select_anchors(&m, &pts, &cfg),
            Err(Error::AnchorSelectionFailed { .. })
        ));
        let cfg = AnchorSelectionConfig { r_max: 2, ..cfg };
        let sel = select_anchors(&m, &pts, &cfg).unwrap();
        assert_eq!(sel.r(), 2);
        assert!((sel.d_star - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gromov_closed_forms() {
        assert_eq!(gromov_upper_bound(2, 0.0, 4.0, 1.0).unwrap(), 16.0);
        assert_eq!(gromov_upper_bound(5, -2.0, 1.5, 1.5).unwrap(), 1.0);
        let want = (2f64.cosh() - 1.0) / (1f64.cosh() - 1.0);
        let got = gromov_upper_bound(2, -1.0, 2.0, 1.0).unwrap();
        assert!((got - want).abs() < 1e-8 * want, "{got} vs {want}");
        assert!(gromov_upper_bound(2, 0.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn gromov_is_monotone() {
        let base = gromov_upper_bound(3, -1.0, 2.0, 0.5).unwrap();
        assert!(gromov_upper_bound(3, -1.0, 2.5, 0.5).unwrap() > base);
        assert!(gromov_upper_bound(3, -1.0, 2.0, 0.4).unwrap() > base);
        assert!(base >= 1.0);
    }
}
