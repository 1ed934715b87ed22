//! Vector-valued interpolation backends for the tangent-space pullbacks.
//!
//! All backends are linear in the outputs: one kernel system or one grid is
//! shared by every output component.

use nalgebra::{DMatrix, SVD};

use crate::error::{mismatch, Error, Result};

/// Condition number above which the multiquadric system is rejected.
pub const MAX_KERNEL_CONDITION: f64 = 1e14;

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingTable {
    inputs: Vec<Vec<f64>>,
    outputs: Vec<Vec<f64>>,
}

impl TrainingTable {
    pub fn new(inputs: Vec<Vec<f64>>, outputs: Vec<Vec<f64>>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::NoSamples);
        }
        if inputs.len() != outputs.len() {
            return Err(mismatch(format!("{} outputs", inputs.len()), outputs.len()));
        }
        let n = inputs[0].len();
        let m = outputs[0].len();
        for (i, (x, y)) in inputs.iter().zip(&outputs).enumerate() {
            if x.len() != n {
                return Err(Error::Data {
                    row: i,
                    message: format!("input has {} coordinates, expected {n}", x.len()),
                });
            }
            if y.len() != m {
                return Err(Error::Data {
                    row: i,
                    message: format!("output has {} components, expected {m}", y.len()),
                });
            }
            if x.iter().chain(y).any(|v| !v.is_finite()) {
                return Err(Error::Data {
                    row: i,
                    message: "non-finite value".into(),
                });
            }
        }
        let mut order: Vec<usize> = (0..inputs.len()).collect();
        order.sort_by(|&a, &b| cmp_lex(&inputs[a], &inputs[b]));
        for w in order.windows(2) {
            if inputs[w[0]] == inputs[w[1]] {
                return Err(Error::Data {
                    row: w[0].max(w[1]),
                    message: format!("duplicate input (also at row {})", w[0].min(w[1])),
                });
            }
        }
        Ok(TrainingTable { inputs, outputs })
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.inputs[0].len()
    }

    pub fn output_dim(&self) -> usize {
        self.outputs[0].len()
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Vec<f64>] {
        &self.outputs
    }
}

fn cmp_lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Axis-aligned box on which an interpolant is defined.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl DomainBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(a, b)| !(a <= b)) {
            return Err(Error::InvalidArgument("domain box needs lo <= hi per axis".into()));
        }
        Ok(DomainBox { lo, hi })
    }

    pub fn bounding(points: &[Vec<f64>]) -> Self {
        let n = points[0].len();
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        for p in points {
            for d in 0..n {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        DomainBox { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| *a <= *v && *v <= *b)
    }

    /// Clamps `x` into the box; the flag is set when clamping was needed.
    pub fn clamp(&self, x: &[f64]) -> (Vec<f64>, bool) {
        let mut out = Vec::with_capacity(x.len());
        let mut flagged = false;
        for (v, (a, b)) in x.iter().zip(self.lo.iter().zip(&self.hi)) {
            let c = v.clamp(*a, *b);
            flagged |= c != *v;
            out.push(c);
        }
        (out, flagged)
    }
}

/// Which backend to fit, with its hyperparameters.
#[derive(Clone, Debug, PartialEq)]
pub enum BackendSpec {
    /// Multiquadric RBF; `shape: None` selects the mean nearest-neighbour spacing.
    Rbf { shape: Option<f64> },
    Multilinear,
    PiecewiseLinear1d,
}

impl BackendSpec {
    pub fn name(&self) -> &'static str {
        match self {
            BackendSpec::Rbf { .. } => "rbf",
            BackendSpec::Multilinear => "multilinear",
            BackendSpec::PiecewiseLinear1d => "piecewise_linear_1d",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RbfModel {
    pub shape: f64,
    pub nodes: Vec<Vec<f64>>,
    /// `N × output_dim` coefficient matrix.
    pub coeffs: DMatrix<f64>,
}

/// Tensor grid with output vectors stored in row-major order (last axis fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct GridModel {
    pub axes: Vec<Vec<f64>>,
    pub values: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Backend {
    Rbf(RbfModel),
    Multilinear(GridModel),
    PiecewiseLinear1d(GridModel),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorInterpolant {
    pub backend: Backend,
    pub input_dim: usize,
    pub output_dim: usize,
    pub domain: DomainBox,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Vec<f64>,
    /// Set when the query was clamped into the domain box.
    pub out_of_domain: bool,
}

#[inline]
fn multiquadric(r2: f64, shape: f64) -> f64 {
    (r2 + shape * shape).sqrt()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Mean distance from each input to its nearest neighbour.
pub fn mean_nearest_neighbor_spacing(points: &[Vec<f64>]) -> f64 {
    if points.len() < 2 {
        return 1.0;
    }
    let total: f64 = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            points
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, q)| sq_dist(p, q))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .sum();
    total / points.len() as f64
}

/// Multiquadric RBF interpolation `φ(r) = √(r² + ε²)` of every output component.
pub fn fit_rbf(table: &TrainingTable, shape: f64, domain: Option<DomainBox>) -> Result<VectorInterpolant> {
    if !(shape > 0.0) || !shape.is_finite() {
        return Err(Error::InvalidArgument("RBF shape parameter must be positive".into()));
    }
    let nodes = table.inputs().to_vec();
    let n = nodes.len();
    let m = table.output_dim();
    let a = DMatrix::from_fn(n, n, |i, j| multiquadric(sq_dist(&nodes[i], &nodes[j]), shape));
    let y = DMatrix::from_fn(n, m, |i, k| table.outputs()[i][k]);
    let svd = SVD::new(a.clone(), true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= MAX_KERNEL_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let mut c = svd.solve(&y, 0.0).map_err(|e| Error::Numerical(e.to_string()))?;
    // one step of iterative refinement
    let resid = &y - &a * &c;
    c += svd.solve(&resid, 0.0).map_err(|e| Error::Numerical(e.to_string()))?;
    let domain = match domain {
        Some(d) if d.dim() == table.input_dim() => d,
        Some(d) => return Err(mismatch(table.input_dim(), d.dim())),
        None => DomainBox::bounding(&nodes),
    };
    Ok(VectorInterpolant {
        backend: Backend::Rbf(RbfModel { shape, nodes, coeffs: c }),
        input_dim: table.input_dim(),
        output_dim: m,
        domain,
    })
}

fn check_axes(axes: &[Vec<f64>]) -> Result<usize> {
    if axes.is_empty() {
        return Err(Error::InvalidArgument("grid needs at least one axis".into()));
    }
    let mut count = 1usize;
    for (d, ax) in axes.iter().enumerate() {
        if ax.is_empty() || ax.windows(2).any(|w| !(w[0] < w[1])) || ax.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("axis {d} knots must be finite and strictly increasing")));
        }
        count *= ax.len();
    }
    Ok(count)
}

fn grid_from_parts(axes: Vec<Vec<f64>>, values: Vec<Vec<f64>>) -> Result<(GridModel, usize, DomainBox)> {
    let count = check_axes(&axes)?;
    if values.len() != count {
        return Err(mismatch(format!("{count} grid values"), values.len()));
    }
    let m = values[0].len();
    if values.iter().any(|v| v.len() != m) {
        return Err(Error::InvalidArgument("grid values must share one output dimension".into()));
    }
    let domain = DomainBox {
        lo: axes.iter().map(|a| a[0]).collect(),
        hi: axes.iter().map(|a| *a.last().unwrap()).collect(),
    };
    Ok((GridModel { axes, values }, m, domain))
}

/// Component-wise multilinear interpolation on a tensor grid. `values` is in
/// row-major order over the axes (last axis fastest).
pub fn fit_multilinear_grid(axes: Vec<Vec<f64>>, values: Vec<Vec<f64>>) -> Result<VectorInterpolant> {
    let n = axes.len();
    let (grid, m, domain) = grid_from_parts(axes, values)?;
    Ok(VectorInterpolant {
        backend: Backend::Multilinear(grid),
        input_dim: n,
        output_dim: m,
        domain,
    })
}

/// Grid axes and node values in row-major order.
pub type GridParts = (Vec<Vec<f64>>, Vec<Vec<f64>>);

/// Reorders a scattered table that happens to be a full tensor grid.
pub fn grid_from_table(table: &TrainingTable) -> Result<GridParts> {
    let n = table.input_dim();
    let mut axes: Vec<Vec<f64>> = vec![Vec::new(); n];
    for x in table.inputs() {
        for d in 0..n {
            axes[d].push(x[d]);
        }
    }
    for ax in &mut axes {
        ax.sort_by(f64::total_cmp);
        ax.dedup();
    }
    let count: usize = axes.iter().map(Vec::len).product();
    if count != table.len() {
        return Err(Error::InvalidArgument(format!(
            "inputs do not form a full tensor grid ({} samples, {count} grid nodes)",
            table.len()
        )));
    }
    let mut slots: Vec<Option<Vec<f64>>> = vec![None; count];
    for (x, y) in table.inputs().iter().zip(table.outputs()) {
        let mut idx = 0;
        for d in 0..n {
            let k = axes[d]
                .binary_search_by(|v| v.total_cmp(&x[d]))
                .expect("coordinate taken from the table");
            idx = idx * axes[d].len() + k;
        }
        slots[idx] = Some(y.clone());
    }
    let values = slots
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidArgument("inputs do not form a full tensor grid".into()))?;
    Ok((axes, values))
}

/// Piecewise-linear interpolation in one input dimension over scattered knots.
pub fn fit_piecewise_linear_1d(table: &TrainingTable) -> Result<VectorInterpolant> {
    if table.input_dim() != 1 {
        return Err(mismatch("1 input dimension", table.input_dim()));
    }
    let (axes, values) = grid_from_table(table)?;
    let (grid, m, domain) = grid_from_parts(axes, values)?;
    Ok(VectorInterpolant {
        backend: Backend::PiecewiseLinear1d(grid),
        input_dim: 1,
        output_dim: m,
        domain,
    })
}

/// Fits the requested backend to a table.
pub fn fit(table: &TrainingTable, spec: &BackendSpec, domain: Option<DomainBox>) -> Result<VectorInterpolant> {
    match spec {
        BackendSpec::Rbf { shape } => {
            let eps = shape.unwrap_or_else(|| mean_nearest_neighbor_spacing(table.inputs()));
            fit_rbf(table, eps, domain)
        }
        BackendSpec::Multilinear => {
            let (axes, values) = grid_from_table(table)?;
            fit_multilinear_grid(axes, values)
        }
        BackendSpec::PiecewiseLinear1d => fit_piecewise_linear_1d(table),
    }
}

fn eval_grid(grid: &GridModel, x: &[f64], m: usize) -> Vec<f64> {
    let n = grid.axes.len();
    // per-axis lower index and fractional weight
    let mut cell = Vec::with_capacity(n);
    for (d, ax) in grid.axes.iter().enumerate() {
        if ax.len() == 1 {
            cell.push((0usize, 0.0f64, 1usize));
            continue;
        }
        let v = x[d];
        let i = match ax.binary_search_by(|k| k.total_cmp(&v)) {
            Ok(i) => i.min(ax.len() - 2),
            Err(i) => i.saturating_sub(1).min(ax.len() - 2),
        };
        let t = (v - ax[i]) / (ax[i + 1] - ax[i]);
        cell.push((i, t, 2));
    }
    let strides: Vec<usize> = {
        let mut s = vec![1usize; n];
        for d in (0..n.saturating_sub(1)).rev() {
            s[d] = s[d + 1] * grid.axes[d + 1].len();
        }
        s
    };
    let mut out = vec![0.0; m];
    let corners = cell.iter().map(|c| c.2).product::<usize>();
    for corner in 0..corners {
        let mut w = 1.0;
        let mut idx = 0;
        let mut rem = corner;
        for d in 0..n {
            let (i, t, span) = cell[d];
            let bit = rem % span;
            rem /= span;
            w *= if span == 1 { 1.0 } else if bit == 1 { t } else { 1.0 - t };
            idx += (i + bit) * strides[d];
        }
        if w != 0.0 {
            for (o, v) in out.iter_mut().zip(&grid.values[idx]) {
                *o += w * v;
            }
        }
    }
    out
}

impl VectorInterpolant {
    pub fn eval(&self, x: &[f64]) -> Result<Evaluation> {
        if x.len() != self.input_dim {
            return Err(mismatch(self.input_dim, x.len()));
        }
        let (xc, out_of_domain) = self.domain.clamp(x);
        let value = match &self.backend {
            Backend::Rbf(rbf) => {
                let mut out = vec![0.0; self.output_dim];
                for (i, node) in rbf.nodes.iter().enumerate() {
                    let phi = multiquadric(sq_dist(&xc, node), rbf.shape);
                    for (k, o) in out.iter_mut().enumerate() {
                        *o += phi * rbf.coeffs[(i, k)];
                    }
                }
                out
            }
            Backend::Multilinear(g) | Backend::PiecewiseLinear1d(g) => eval_grid(g, &xc, self.output_dim),
        };
        Ok(Evaluation { value, out_of_domain })
    }

    pub fn backend_name(&self) -> &'static str {
        match self.backend {
            Backend::Rbf(_) => "rbf",
            Backend::Multilinear(_) => "multilinear",
            Backend::PiecewiseLinear1d(_) => "piecewise_linear_1d",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(xs: Vec<Vec<f64>>, ys: Vec<Vec<f64>>) -> TrainingTable {
        TrainingTable::new(xs, ys).unwrap()
    }

    #[test]
    fn duplicates_rejected() {
        let r = TrainingTable::new(vec![vec![0.0], vec![1.0], vec![0.0]], vec![vec![1.0]; 3]);
        assert!(matches!(r, Err(Error::Data { row: 2, .. })));
        assert!(matches!(TrainingTable::new(vec![], vec![]), Err(Error::NoSamples)));
    }

    #[test]
    fn rbf_single_sample() {
        let t = table(vec![vec![0.3, -0.2]], vec![vec![1.5, -2.0]]);
        let g = fit_rbf(&t, 0.7, None).unwrap();
        let e = g.eval(&[0.3, -0.2]).unwrap();
        assert!((e.value[0] - 1.5).abs() < 1e-14 && (e.value[1] + 2.0).abs() < 1e-14);
    }

    #[test]
    fn rbf_two_nodes() {
        let t = table(vec![vec![0.0], vec![1.0]], vec![vec![0.0], vec![1.0]]);
        let g = fit_rbf(&t, 1.0, None).unwrap();
        assert!(g.eval(&[0.0]).unwrap().value[0].abs() < 1e-10);
        assert!((g.eval(&[1.0]).unwrap().value[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rbf_ill_conditioned_is_rejected() {
        let xs: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64 * 0.025]).collect();
        let ys: Vec<Vec<f64>> = xs.iter().map(|x| vec![x[0].sin()]).collect();
        let r = fit_rbf(&table(xs, ys), 50.0, None);
        assert!(matches!(r, Err(Error::IllConditioned { .. })));
    }

    #[test]
    fn multilinear_midpoint() {
        let g = fit_multilinear_grid(vec![vec![0.0, 1.0]], vec![vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(g.eval(&[0.5]).unwrap().value, vec![0.5]);
        assert_eq!(g.eval(&[1.0]).unwrap().value, vec![1.0]);
    }

    #[test]
    fn multilinear_reproduces_affine() {
        let f = |x: f64, y: f64| 2.0 * x + 3.0 * y - 1.0;
        let ax = vec![-1.0, 0.2, 1.0];
        let ay = vec![0.0, 0.5, 2.0];
        let mut vals = Vec::new();
        for &x in &ax {
            for &y in &ay {
                vals.push(vec![f(x, y)]);
            }
        }
        let g = fit_multilinear_grid(vec![ax, ay], vals).unwrap();
        for i in 0..=20 {
            for j in 0..=20 {
                let x = -1.0 + 2.0 * i as f64 / 20.0;
                let y = 2.0 * j as f64 / 20.0;
                let e = g.eval(&[x, y]).unwrap();
                assert!(!e.out_of_domain);
                assert!((e.value[0] - f(x, y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn out_of_domain_is_clamped_and_flagged() {
        let g = fit_multilinear_grid(vec![vec![0.0, 1.0]], vec![vec![0.0], vec![2.0]]).unwrap();
        let e = g.eval(&[3.0]).unwrap();
        assert!(e.out_of_domain);
        assert_eq!(e.value, vec![2.0]);
        assert!(g.eval(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn grid_detection_from_scattered_rows() {
        let xs = vec![vec![1.0, 0.0], vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
        let ys: Vec<Vec<f64>> = xs.iter().map(|x| vec![x[0] + 10.0 * x[1]]).collect();
        let g = fit(&table(xs.clone(), ys), &BackendSpec::Multilinear, None).unwrap();
        assert!((g.eval(&[0.5, 0.5]).unwrap().value[0] - 5.5).abs() < 1e-15);
        let t = table(xs[..3].to_vec(), vec![vec![0.0]; 3]);
        assert!(fit(&t, &BackendSpec::Multilinear, None).is_err());
    }

    #[test]
    fn piecewise_linear_scattered_knots() {
        let t = table(vec![vec![2.0], vec![0.0], vec![1.0]], vec![vec![4.0], vec![0.0], vec![1.0]]);
        let g = fit_piecewise_linear_1d(&t).unwrap();
        assert_eq!(g.eval(&[1.5]).unwrap().value, vec![2.5]);
        assert_eq!(g.eval(&[0.0]).unwrap().value, vec![0.0]);
    }

    #[test]
    fn default_shape_is_mean_spacing() {
        let pts = vec![vec![0.0], vec![1.0], vec![3.0]];
        assert!((mean_nearest_neighbor_spacing(&pts) - 4.0 / 3.0).abs() < 1e-15);
    }
}
