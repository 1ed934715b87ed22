//! Manifold descriptors and the exp/log/distance kernels.
//!
//! Points and tangent vectors are stored in ambient coordinates:
//!
//! | kind                  | point                         | tangent at `p`                 |
//! |-----------------------|-------------------------------|--------------------------------|
//! | `Euclidean(m)`        | `m × 1`                       | `m × 1`                        |
//! | `Sphere(m)`           | unit vector, `(m+1) × 1`      | `v` with `pᵀv = 0`             |
//! | `Spd(n)`              | symmetric positive definite   | symmetric `n × n`              |
//! | `SpecialOrthogonal(n)`| `QᵀQ = I`, `det Q = 1`        | `Q Ω` with `Ω` skew            |
//! | `Grassmann(n, r)`     | orthonormal `n × r` basis     | horizontal `X` with `PᵀX = 0`  |
//!
//! The SPD factor uses the affine-invariant metric with the Cholesky factor as
//! the square root. All other kinds use the ambient Frobenius inner product.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, SVD};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{mismatch, Error, Result};
use crate::linalg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ManifoldKind {
    Euclidean(usize),
    Sphere(usize),
    Spd(usize),
    SpecialOrthogonal(usize),
    Grassmann(usize, usize),
}

impl ManifoldKind {
    pub fn intrinsic_dim(&self) -> usize {
        match *self {
            ManifoldKind::Euclidean(m) | ManifoldKind::Sphere(m) => m,
            ManifoldKind::Spd(n) => n * (n + 1) / 2,
            ManifoldKind::SpecialOrthogonal(n) => n * (n - 1) / 2,
            ManifoldKind::Grassmann(n, r) => r * (n - r),
        }
    }

    /// Shape `(rows, cols)` of the ambient coordinate matrix.
    pub fn ambient_shape(&self) -> (usize, usize) {
        match *self {
            ManifoldKind::Euclidean(m) => (m, 1),
            ManifoldKind::Sphere(m) => (m + 1, 1),
            ManifoldKind::Spd(n) | ManifoldKind::SpecialOrthogonal(n) => (n, n),
            ManifoldKind::Grassmann(n, r) => (n, r),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        let (r, c) = self.ambient_shape();
        r * c
    }

    pub fn name(&self) -> &'static str {
        match self {
            ManifoldKind::Euclidean(_) => "euclidean",
            ManifoldKind::Sphere(_) => "sphere",
            ManifoldKind::Spd(_) => "spd",
            ManifoldKind::SpecialOrthogonal(_) => "so",
            ManifoldKind::Grassmann(..) => "grassmann",
        }
    }

    /// Dimension parameters joined by `:` (`"3"`, `"10:3"`).
    pub fn params(&self) -> String {
        match *self {
            ManifoldKind::Euclidean(m) | ManifoldKind::Sphere(m) => m.to_string(),
            ManifoldKind::Spd(n) | ManifoldKind::SpecialOrthogonal(n) => n.to_string(),
            ManifoldKind::Grassmann(n, r) => format!("{n}:{r}"),
        }
    }

    pub fn from_parts(name: &str, params: &str) -> Result<Self> {
        let nums: Vec<usize> = params
            .split(':')
            .map(|s| s.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidArgument(format!("bad manifold parameters `{params}`")))?;
        let one = |k: fn(usize) -> ManifoldKind| match nums.as_slice() {
            [m] if *m >= 1 => Ok(k(*m)),
            _ => Err(Error::InvalidArgument(format!("`{name}` takes one positive dimension"))),
        };
        match name.trim() {
            "euclidean" => one(ManifoldKind::Euclidean),
            "sphere" => one(ManifoldKind::Sphere),
            "spd" => one(ManifoldKind::Spd),
            "so" | "special_orthogonal" => match nums.as_slice() {
                [n] if *n >= 2 => Ok(ManifoldKind::SpecialOrthogonal(*n)),
                _ => Err(Error::InvalidArgument("`so` takes n >= 2".into())),
            },
            "grassmann" => match nums.as_slice() {
                [n, r] if *r >= 1 && r < n => Ok(ManifoldKind::Grassmann(*n, *r)),
                _ => Err(Error::InvalidArgument("`grassmann` takes n:r with 1 <= r < n".into())),
            },
            other => Err(Error::InvalidArgument(format!("unknown manifold kind `{other}`"))),
        }
    }

    /// Parses `kind:params`, e.g. `spd:3` or `grassmann:10:3`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, params) = spec
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("expected kind:params, got `{spec}`")))?;
        Self::from_parts(name, params)
    }
}

impl fmt::Display for ManifoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name(), self.params())
    }
}

/// A point in ambient coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(pub DMatrix<f64>);

/// A tangent vector in ambient coordinates. The base point is implicit: every
/// operation taking a tangent vector also takes the point it is anchored at.
#[derive(Clone, Debug, PartialEq)]
pub struct Tangent(pub DMatrix<f64>);

impl Point {
    pub fn coords(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// Row-major flattened coordinates.
    pub fn to_row_major(&self) -> Vec<f64> {
        let m = &self.0;
        let mut out = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.push(m[(i, j)]);
            }
        }
        out
    }

    pub fn from_row_major(rows: usize, cols: usize, data: &[f64]) -> Self {
        Point(DMatrix::from_row_slice(rows, cols, data))
    }
}

impl Tangent {
    pub fn coords(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn scale(&self, s: f64) -> Tangent {
        Tangent(&self.0 * s)
    }
}

/// A manifold together with the curvature bounds and injectivity-radius
/// estimate used by anchor selection and the well-posedness checks.
///
/// `inj_estimate == f64::INFINITY` means "no cut locus" and `0.0` means
/// "unknown".
#[derive(Clone, Debug, PartialEq)]
pub struct Manifold {
    pub kind: ManifoldKind,
    pub curvature_lower: f64,
    pub curvature_upper: f64,
    pub inj_estimate: f64,
}

/// Relative threshold under which a projected canonical direction is
/// considered dependent when building a tangent frame.
const FRAME_DEPENDENCE_TOL: f64 = 1e-6;

impl Manifold {
    pub fn new(kind: ManifoldKind) -> Self {
        let (l, k, m) = match kind {
            ManifoldKind::Euclidean(_) => (0.0, 0.0, f64::INFINITY),
            ManifoldKind::Sphere(_) => (0.0, 1.0, PI),
            ManifoldKind::Spd(_) => (-0.5, 0.0, f64::INFINITY),
            // conservative estimates, see README
            ManifoldKind::SpecialOrthogonal(_) | ManifoldKind::Grassmann(..) => (0.0, 1.0, PI / 2.0),
        };
        Manifold {
            kind,
            curvature_lower: l,
            curvature_upper: k,
            inj_estimate: m,
        }
    }

    pub fn euclidean(m: usize) -> Self {
        Self::new(ManifoldKind::Euclidean(m))
    }
    pub fn sphere(m: usize) -> Self {
        Self::new(ManifoldKind::Sphere(m))
    }
    pub fn spd(n: usize) -> Self {
        Self::new(ManifoldKind::Spd(n))
    }
    pub fn special_orthogonal(n: usize) -> Self {
        Self::new(ManifoldKind::SpecialOrthogonal(n))
    }
    pub fn grassmann(n: usize, r: usize) -> Self {
        Self::new(ManifoldKind::Grassmann(n, r))
    }

    pub fn with_curvature_lower(mut self, l: f64) -> Self {
        assert!(l <= 0.0, "curvature lower bound must be <= 0");
        self.curvature_lower = l;
        self
    }

    pub fn with_curvature_upper(mut self, k: f64) -> Self {
        assert!(k >= 0.0, "curvature upper bound must be >= 0");
        self.curvature_upper = k;
        self
    }

    pub fn with_inj_estimate(mut self, m: f64) -> Self {
        assert!(m >= 0.0, "injectivity estimate must be >= 0");
        self.inj_estimate = m;
        self
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.kind.intrinsic_dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.kind.ambient_dim()
    }

    fn check_shape(&self, m: &DMatrix<f64>) -> Result<()> {
        let (r, c) = self.kind.ambient_shape();
        if m.nrows() != r || m.ncols() != c {
            return Err(mismatch(
                format!("{r}x{c} for {}", self.kind),
                format!("{}x{}", m.nrows(), m.ncols()),
            ));
        }
        Ok(())
    }

    /// Checks the point invariants of this kind at tolerance `tol`.
    pub fn validate_point(&self, p: &Point, tol: f64) -> Result<()> {
        self.check_shape(&p.0)?;
        let m = &p.0;
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        match self.kind {
            ManifoldKind::Euclidean(_) => Ok(()),
            ManifoldKind::Sphere(_) => {
                let dev = (m.norm() - 1.0).abs();
                if dev > tol {
                    return Err(Error::InvalidPoint(format!("sphere point has |norm - 1| = {dev:e}")));
                }
                Ok(())
            }
            ManifoldKind::Spd(_) => {
                let scale = m.amax().max(1.0);
                let asym = (m - m.transpose()).amax();
                if asym > tol * scale {
                    return Err(Error::InvalidPoint(format!("SPD point asymmetric by {asym:e}")));
                }
                let eig_min = linalg::sym_eigenvalues(m)[0];
                if eig_min <= 0.0 {
                    return Err(Error::InvalidPoint(format!("SPD point has eigenvalue {eig_min:e}")));
                }
                Ok(())
            }
            ManifoldKind::SpecialOrthogonal(n) => {
                let dev = (m.transpose() * m - DMatrix::identity(n, n)).norm();
                if dev > tol {
                    return Err(Error::InvalidPoint(format!("QᵀQ deviates from I by {dev:e}")));
                }
                if m.determinant() <= 0.0 {
                    return Err(Error::InvalidPoint("rotation has non-positive determinant".into()));
                }
                Ok(())
            }
            ManifoldKind::Grassmann(_, r) => {
                let dev = (m.transpose() * m - DMatrix::identity(r, r)).norm();
                if dev > tol {
                    return Err(Error::InvalidPoint(format!("QᵀQ deviates from I by {dev:e}")));
                }
                Ok(())
            }
        }
    }

    pub fn zero_tangent(&self) -> Tangent {
        let (r, c) = self.kind.ambient_shape();
        Tangent(DMatrix::zeros(r, c))
    }

    fn cholesky(&self, p: &Point) -> Result<DMatrix<f64>> {
        p.0.clone()
            .cholesky()
            .map(|c| c.l())
            .ok_or_else(|| Error::InvalidPoint("SPD point is not positive definite".into()))
    }

    /// `L⁻¹ A L⁻ᵀ` for lower-triangular `L`.
    fn whiten(l: &DMatrix<f64>, a: &DMatrix<f64>) -> DMatrix<f64> {
        let x = l.solve_lower_triangular(a).expect("Cholesky factor is nonsingular");
        let y = l
            .solve_lower_triangular(&x.transpose())
            .expect("Cholesky factor is nonsingular");
        linalg::sym(&y)
    }

    pub fn exp(&self, p: &Point, v: &Tangent) -> Result<Point> {
        self.check_shape(&p.0)?;
        self.check_shape(&v.0)?;
        if v.0.iter().all(|&x| x == 0.0) {
            return Ok(p.clone());
        }
        let out = match self.kind {
            ManifoldKind::Euclidean(_) => &p.0 + &v.0,
            ManifoldKind::Sphere(_) => {
                let theta = v.0.norm();
                let q = &p.0 * theta.cos() + &v.0 * (theta.sin() / theta);
                let n = q.norm();
                q / n
            }
            ManifoldKind::Spd(_) => {
                let l = self.cholesky(p)?;
                let w = Self::whiten(&l, &v.0);
                let e = linalg::sym_apply(&w, f64::exp);
                linalg::sym(&(&l * e * l.transpose()))
            }
            ManifoldKind::SpecialOrthogonal(n) => {
                let omega = linalg::skew(&(p.0.transpose() * &v.0));
                let e = if n == 3 {
                    linalg::rodrigues_exp(&omega)
                } else {
                    linalg::expm(&omega)
                };
                &p.0 * e
            }
            ManifoldKind::Grassmann(..) => {
                let svd = SVD::new(v.0.clone(), true, true);
                let u = svd.u.expect("requested U");
                let vt = svd.v_t.expect("requested Vᵀ");
                let cos = DMatrix::from_diagonal(&svd.singular_values.map(f64::cos));
                let sin = DMatrix::from_diagonal(&svd.singular_values.map(f64::sin));
                &p.0 * vt.transpose() * cos * &vt + u * sin * &vt
            }
        };
        Ok(Point(out))
    }

    pub fn log(&self, p: &Point, q: &Point) -> Result<Tangent> {
        self.check_shape(&p.0)?;
        self.check_shape(&q.0)?;
        if p.0 == q.0 {
            return Ok(self.zero_tangent());
        }
        let out = match self.kind {
            ManifoldKind::Euclidean(_) => &q.0 - &p.0,
            ManifoldKind::Sphere(_) => {
                let d = p.0.dot(&q.0);
                let w = &q.0 - &p.0 * d;
                let s = w.norm();
                if s <= 1e-14 {
                    if d < 0.0 {
                        return Err(Error::LogUndefined("antipodal points on the sphere".into()));
                    }
                    return Ok(self.zero_tangent());
                }
                let theta = sphere_angle(&p.0, &q.0);
                w * (theta / s)
            }
            ManifoldKind::Spd(_) => {
                let l = self.cholesky(p)?;
                self.cholesky(q)?;
                let w = Self::whiten(&l, &q.0);
                let lw = linalg::sym_apply(&w, f64::ln);
                linalg::sym(&(&l * lw * l.transpose()))
            }
            ManifoldKind::SpecialOrthogonal(n) => {
                let r = p.0.transpose() * &q.0;
                let omega = if n == 3 {
                    linalg::rodrigues_log(&r)?
                } else {
                    let lg = linalg::logm(&r).map_err(|e| Error::LogUndefined(e.to_string()))?;
                    let lg = linalg::skew(&lg);
                    if (linalg::expm(&lg) - &r).norm() > 1e-8 {
                        return Err(Error::LogUndefined("rotation outside the principal log domain".into()));
                    }
                    lg
                };
                &p.0 * omega
            }
            ManifoldKind::Grassmann(..) => {
                let m = p.0.transpose() * &q.0;
                let sv = m.singular_values();
                let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
                if smin < 1e-12 {
                    return Err(Error::LogUndefined(
                        "subspaces contain orthogonal directions (PᵀQ singular)".into(),
                    ));
                }
                let m_inv = m.clone().try_inverse().ok_or_else(|| {
                    Error::LogUndefined("subspaces contain orthogonal directions (PᵀQ singular)".into())
                })?;
                let l = (&q.0 - &p.0 * &m) * m_inv;
                let svd = SVD::new(l, true, true);
                let u = svd.u.expect("requested U");
                let vt = svd.v_t.expect("requested Vᵀ");
                let at = DMatrix::from_diagonal(&svd.singular_values.map(f64::atan));
                let delta = u * at * vt;
                // remove the rounding-level vertical component
                &delta - &p.0 * (p.0.transpose() * &delta)
            }
        };
        Ok(Tangent(out))
    }

    /// Geodesic distance. Returns `f64::INFINITY` when no distance is computable.
    pub fn dist(&self, p: &Point, q: &Point) -> Result<f64> {
        self.check_shape(&p.0)?;
        self.check_shape(&q.0)?;
        if p.0 == q.0 {
            return Ok(0.0);
        }
        let d = match self.kind {
            ManifoldKind::Euclidean(_) => (&q.0 - &p.0).norm(),
            ManifoldKind::Sphere(_) => sphere_angle(&p.0, &q.0),
            ManifoldKind::Spd(_) => {
                let (Ok(l), Ok(_)) = (self.cholesky(p), self.cholesky(q)) else {
                    return Ok(f64::INFINITY);
                };
                let w = Self::whiten(&l, &q.0);
                let ev = linalg::sym_eigenvalues(&w);
                if ev[0] <= 0.0 {
                    return Ok(f64::INFINITY);
                }
                ev.iter().map(|x| x.ln().powi(2)).sum::<f64>().sqrt()
            }
            ManifoldKind::SpecialOrthogonal(_) => match self.log(p, q) {
                Ok(v) => v.0.norm(),
                Err(_) => f64::INFINITY,
            },
            ManifoldKind::Grassmann(..) => {
                let mut c: Vec<f64> = (p.0.transpose() * &q.0).singular_values().iter().copied().collect();
                let resid = &q.0 - &p.0 * (p.0.transpose() * &q.0);
                let mut s: Vec<f64> = resid.singular_values().iter().copied().collect();
                c.sort_by(|a, b| b.total_cmp(a));
                s.sort_by(|a, b| a.total_cmp(b));
                c.iter()
                    .zip(&s)
                    .map(|(c, s)| s.atan2(*c).powi(2))
                    .sum::<f64>()
                    .sqrt()
            }
        };
        Ok(if d.is_nan() { f64::INFINITY } else { d })
    }

    pub fn inner(&self, p: &Point, u: &Tangent, v: &Tangent) -> Result<f64> {
        self.check_shape(&p.0)?;
        self.check_shape(&u.0)?;
        self.check_shape(&v.0)?;
        Ok(match self.kind {
            ManifoldKind::Spd(_) => {
                let l = self.cholesky(p)?;
                Self::whiten(&l, &u.0).dot(&Self::whiten(&l, &v.0))
            }
            _ => u.0.dot(&v.0),
        })
    }

    pub fn norm(&self, p: &Point, v: &Tangent) -> Result<f64> {
        Ok(self.inner(p, v, v)?.max(0.0).sqrt())
    }

    /// Orthogonal projection of an ambient matrix onto the tangent space at `p`.
    pub fn project(&self, p: &Point, w: &DMatrix<f64>) -> Result<Tangent> {
        self.check_shape(&p.0)?;
        self.check_shape(w)?;
        Ok(Tangent(match self.kind {
            ManifoldKind::Euclidean(_) => w.clone(),
            ManifoldKind::Sphere(_) => w - &p.0 * p.0.dot(w),
            ManifoldKind::Spd(_) => linalg::sym(w),
            ManifoldKind::SpecialOrthogonal(_) => &p.0 * linalg::skew(&(p.0.transpose() * w)),
            ManifoldKind::Grassmann(..) => w - &p.0 * (p.0.transpose() * w),
        }))
    }

    /// Residual of the tangency condition, zero for exact tangent vectors.
    pub fn tangency_residual(&self, p: &Point, v: &Tangent) -> f64 {
        match self.kind {
            ManifoldKind::Euclidean(_) => 0.0,
            ManifoldKind::Sphere(_) => p.0.dot(&v.0).abs(),
            ManifoldKind::Spd(_) => (&v.0 - v.0.transpose()).norm(),
            ManifoldKind::SpecialOrthogonal(_) => {
                let a = p.0.transpose() * &v.0;
                (&a + a.transpose()).norm()
            }
            ManifoldKind::Grassmann(..) => {
                let a = v.0.transpose() * &p.0;
                (&a + a.transpose()).norm() + (p.0.transpose() * &v.0).norm()
            }
        }
    }

    pub fn random_point(&self, seed: u64) -> Point {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, c) = self.kind.ambient_shape();
        let g = gaussian(&mut rng, r, c);
        Point(match self.kind {
            ManifoldKind::Euclidean(_) => g,
            ManifoldKind::Sphere(_) => {
                let n = g.norm();
                g / n
            }
            ManifoldKind::Spd(_) => linalg::sym_apply(&(linalg::sym(&g) * 0.5), f64::exp),
            ManifoldKind::SpecialOrthogonal(_) => {
                let mut q = linalg::orthonormalize_columns(&g);
                if q.determinant() < 0.0 {
                    q.column_mut(0).neg_mut();
                }
                q
            }
            ManifoldKind::Grassmann(..) => linalg::orthonormalize_columns(&g),
        })
    }

    /// A random tangent vector at `p` with Riemannian norm `norm`.
    pub fn random_tangent(&self, p: &Point, norm: f64, seed: u64) -> Result<Tangent> {
        if norm == 0.0 {
            return Ok(self.zero_tangent());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, c) = self.kind.ambient_shape();
        loop {
            let v = self.project(p, &gaussian(&mut rng, r, c))?;
            let n = self.norm(p, &v)?;
            if n > 1e-8 {
                return Ok(v.scale(norm / n));
            }
        }
    }

    /// Orthonormal basis of the tangent space at `p` under the Riemannian
    /// metric. Built by Gram–Schmidt over the projected canonical ambient basis
    /// in row-major order, so the result depends only on `p`.
    pub fn tangent_frame(&self, p: &Point) -> Result<TangentFrame> {
        self.check_shape(&p.0)?;
        let (r, c) = self.kind.ambient_shape();
        let dim = self.intrinsic_dim();
        let mut basis: Vec<Tangent> = Vec::with_capacity(dim);
        'outer: for i in 0..r {
            for j in 0..c {
                if basis.len() == dim {
                    break 'outer;
                }
                let mut e = DMatrix::zeros(r, c);
                e[(i, j)] = 1.0;
                let mut v = self.project(p, &e)?;
                let n0 = self.norm(p, &v)?;
                if n0 == 0.0 {
                    continue;
                }
                for _ in 0..2 {
                    for b in &basis {
                        let coef = self.inner(p, b, &v)?;
                        v = Tangent(&v.0 - &b.0 * coef);
                    }
                }
                let n = self.norm(p, &v)?;
                if n > FRAME_DEPENDENCE_TOL * n0 {
                    basis.push(v.scale(1.0 / n));
                }
            }
        }
        if basis.len() != dim {
            return Err(Error::Numerical(format!(
                "tangent frame has {} vectors, expected {dim}",
                basis.len()
            )));
        }
        let dual = match self.kind {
            ManifoldKind::Spd(_) => {
                let p_inv = p.0.clone().try_inverse().ok_or_else(|| {
                    Error::InvalidPoint("SPD point is singular".into())
                })?;
                basis.iter().map(|b| &p_inv * &b.0 * &p_inv).collect()
            }
            _ => basis.iter().map(|b| b.0.clone()).collect(),
        };
        Ok(TangentFrame { basis, dual })
    }
}

/// Great-circle angle, symmetric in its arguments.
fn sphere_angle(p: &DMatrix<f64>, q: &DMatrix<f64>) -> f64 {
    2.0 * (p - q).norm().atan2((p + q).norm())
}

fn gaussian(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| StandardNormal.sample(rng))
}

/// Orthonormal basis of one tangent space, used to flatten tangent vectors to
/// coordinate vectors (and back) without changing norms.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentFrame {
    pub basis: Vec<Tangent>,
    /// Riesz representers: `coord_k(v) = ⟨dual_k, v⟩_F`.
    pub dual: Vec<DMatrix<f64>>,
}

impl TangentFrame {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn flatten(&self, v: &Tangent) -> Vec<f64> {
        self.dual.iter().map(|d| d.dot(&v.0)).collect()
    }

    pub fn unflatten(&self, coords: &[f64]) -> Tangent {
        debug_assert_eq!(coords.len(), self.basis.len());
        let mut out = DMatrix::zeros(self.basis[0].0.nrows(), self.basis[0].0.ncols());
        for (c, b) in coords.iter().zip(&self.basis) {
            out += &b.0 * *c;
        }
        Tangent(out)
    }

    /// Rebuilds the dual basis for a frame read back from storage.
    pub fn from_basis(manifold: &Manifold, p: &Point, basis: Vec<Tangent>) -> Result<Self> {
        let dual = match manifold.kind {
            ManifoldKind::Spd(_) => {
                let p_inv = p
                    .0
                    .clone()
                    .try_inverse()
                    .ok_or_else(|| Error::InvalidPoint("SPD point is singular".into()))?;
                basis.iter().map(|b| &p_inv * &b.0 * &p_inv).collect()
            }
            _ => basis.iter().map(|b| b.0.clone()).collect(),
        };
        Ok(TangentFrame { basis, dual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_2};

    fn diag(v: &[f64]) -> Point {
        Point(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(v)))
    }

    fn e(k: usize) -> Point {
        let mut v = DMatrix::zeros(3, 1);
        v[(k, 0)] = 1.0;
        Point(v)
    }

    fn all() -> Vec<Manifold> {
        vec![
            Manifold::euclidean(3),
            Manifold::sphere(2),
            Manifold::spd(3),
            Manifold::special_orthogonal(3),
            Manifold::special_orthogonal(4),
            Manifold::grassmann(6, 2),
        ]
    }

    #[test]
    fn intrinsic_dims() {
        assert_eq!(ManifoldKind::Spd(3).intrinsic_dim(), 6);
        assert_eq!(ManifoldKind::SpecialOrthogonal(3).intrinsic_dim(), 3);
        assert_eq!(ManifoldKind::Grassmann(10, 3).intrinsic_dim(), 21);
        assert_eq!(ManifoldKind::Sphere(2).intrinsic_dim(), 2);
    }

    #[test]
    fn parse_kinds() {
        assert_eq!(ManifoldKind::parse("spd:3").unwrap(), ManifoldKind::Spd(3));
        assert_eq!(ManifoldKind::parse("grassmann:10:3").unwrap(), ManifoldKind::Grassmann(10, 3));
        assert!(ManifoldKind::parse("grassmann:3:3").is_err());
        assert!(ManifoldKind::parse("torus:2").is_err());
        let k = ManifoldKind::SpecialOrthogonal(3);
        assert_eq!(ManifoldKind::parse(&k.to_string()).unwrap(), k);
    }

    #[test]
    fn spd_exp_at_identity() {
        let m = Manifold::spd(3);
        let q = m.exp(&diag(&[1.0, 1.0, 1.0]), &Tangent(diag(&[1.0, 0.0, 0.0]).0)).unwrap();
        assert!((&q.0 - diag(&[E, 1.0, 1.0]).0).norm() < 1e-14);
    }

    #[test]
    fn spd_log_and_dist_at_identity() {
        let m = Manifold::spd(3);
        let id = diag(&[1.0, 1.0, 1.0]);
        let v = m.log(&id, &diag(&[E, 1.0, 1.0])).unwrap();
        assert!((&v.0 - diag(&[1.0, 0.0, 0.0]).0).norm() < 1e-14);
        let d = m.dist(&id, &diag(&[E * E, 1.0, 1.0])).unwrap();
        assert!((d - 2.0).abs() < 1e-14);
    }

    #[test]
    fn spd_inner_at_identity() {
        let m = Manifold::spd(2);
        let id = Point(DMatrix::identity(2, 2));
        let t = Tangent(DMatrix::identity(2, 2));
        assert!((m.inner(&id, &t, &t).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sphere_exp_log_dist() {
        let m = Manifold::sphere(2);
        let v = Tangent(&e(1).0 * FRAC_PI_2);
        let q = m.exp(&e(0), &v).unwrap();
        assert!((&q.0 - &e(1).0).norm() < 1e-15);
        let l = m.log(&e(0), &e(1)).unwrap();
        assert!((&l.0 - &v.0).norm() < 1e-15);
        let anti = Point(-&e(0).0);
        assert!((m.dist(&e(0), &anti).unwrap() - PI).abs() < 1e-15);
        assert!(matches!(m.log(&e(0), &anti), Err(Error::LogUndefined(_))));
    }

    #[test]
    fn euclidean_inner_orthogonal() {
        let m = Manifold::euclidean(2);
        let p = Point(DMatrix::zeros(2, 1));
        let u = Tangent(DMatrix::from_column_slice(2, 1, &[1.0, 0.0]));
        let v = Tangent(DMatrix::from_column_slice(2, 1, &[0.0, 1.0]));
        assert_eq!(m.inner(&p, &u, &v).unwrap(), 0.0);
    }

    #[test]
    fn projections() {
        let s = Manifold::sphere(2);
        let t = s.project(&e(0), &e(0).0).unwrap();
        assert!(t.0.norm() < 1e-15);
        let spd = Manifold::spd(3);
        let w = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]);
        let t = spd.project(&spd.random_point(1), &w).unwrap();
        assert_eq!(t.0, (&w + w.transpose()) * 0.5);
    }

    #[test]
    fn projection_idempotent_and_linear() {
        for m in all() {
            let p = m.random_point(3);
            let v = m.random_tangent(&p, 0.7, 4).unwrap();
            let pv = m.project(&p, &v.0).unwrap();
            assert!((&pv.0 - &v.0).norm() < 1e-12, "{:?}", m.kind);
            let (r, c) = m.kind.ambient_shape();
            let a = DMatrix::from_fn(r, c, |i, j| (i * 7 + j) as f64 * 0.1);
            let b = DMatrix::from_fn(r, c, |i, j| ((i + 2 * j) as f64).sin());
            let lhs = m.project(&p, &(&a * 2.0 - &b * 3.0)).unwrap().0;
            let rhs = m.project(&p, &a).unwrap().0 * 2.0 - m.project(&p, &b).unwrap().0 * 3.0;
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn random_points_satisfy_invariants() {
        for m in all() {
            for seed in 0..10 {
                let p = m.random_point(seed);
                m.validate_point(&p, 1e-10).unwrap();
                let v = m.random_tangent(&p, 0.3, seed).unwrap();
                assert!((m.norm(&p, &v).unwrap() - 0.3).abs() < 1e-12);
                assert!(m.tangency_residual(&p, &v) < 1e-12);
                assert_eq!(m.random_tangent(&p, 0.0, seed).unwrap(), m.zero_tangent());
            }
            assert_eq!(m.random_point(5), m.random_point(5));
        }
    }

    #[test]
    fn zero_tangent_and_identical_points() {
        for m in all() {
            let p = m.random_point(11);
            assert_eq!(m.exp(&p, &m.zero_tangent()).unwrap(), p);
            assert_eq!(m.log(&p, &p).unwrap(), m.zero_tangent());
            assert_eq!(m.dist(&p, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn roundtrip_and_radial_isometry() {
        for m in all() {
            let radius = (0.5 * m.inj_estimate).min(1.0);
            for seed in 0..25 {
                let p = m.random_point(seed);
                let v = m.random_tangent(&p, radius * ((seed % 5) as f64 + 1.0) / 5.0, seed + 100).unwrap();
                let q = m.exp(&p, &v).unwrap();
                m.validate_point(&q, 1e-10).unwrap();
                let w = m.log(&p, &q).unwrap();
                assert!((&w.0 - &v.0).norm() < 1e-8, "{:?} seed {seed}", m.kind);
                let d = m.dist(&p, &q).unwrap();
                assert!((d - m.norm(&p, &v).unwrap()).abs() < 1e-8, "{:?}", m.kind);
                assert!((d - m.dist(&q, &p).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tangent_frames_are_orthonormal() {
        for m in all() {
            let p = m.random_point(8);
            let f = m.tangent_frame(&p).unwrap();
            assert_eq!(f.dim(), m.intrinsic_dim());
            for (i, a) in f.basis.iter().enumerate() {
                for (j, b) in f.basis.iter().enumerate() {
                    let g = m.inner(&p, a, b).unwrap();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g - want).abs() < 1e-10);
                }
            }
            let v = m.random_tangent(&p, 0.4, 9).unwrap();
            let back = f.unflatten(&f.flatten(&v));
            assert!((&back.0 - &v.0).norm() < 1e-12);
            let c = f.flatten(&v);
            let n: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((n - 0.4).abs() < 1e-12);
        }
    }

    #[test]
    fn grassmann_representative_independence() {
        let m = Manifold::grassmann(6, 2);
        let q = m.random_point(1);
        let rot = Manifold::special_orthogonal(2).random_point(2);
        let qr = Point(&q.0 * &rot.0);
        assert!(m.dist(&q, &qr).unwrap() <= 1e-10);
        let p = m.random_point(3);
        let a = m.log(&p, &q).unwrap();
        let b = m.log(&p, &qr).unwrap();
        assert!((&a.0 - &b.0).norm() < 1e-10);
    }

    #[test]
    fn grassmann_singular_log_is_undefined() {
        let m = Manifold::grassmann(4, 1);
        let p = Point(DMatrix::from_column_slice(4, 1, &[1.0, 0.0, 0.0, 0.0]));
        let q = Point(DMatrix::from_column_slice(4, 1, &[0.0, 1.0, 0.0, 0.0]));
        assert!(matches!(m.log(&p, &q), Err(Error::LogUndefined(_))));
        assert!((m.dist(&p, &q).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let m = Manifold::spd(3);
        let p = Point(DMatrix::identity(2, 2));
        assert!(matches!(m.dist(&p, &p), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn spd_exp_rejects_indefinite_base() {
        let m = Manifold::spd(2);
        let p = Point(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]));
        let v = Tangent(DMatrix::identity(2, 2));
        assert!(matches!(m.exp(&p, &v), Err(Error::InvalidPoint(_))));
    }
}
