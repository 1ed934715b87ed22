//! Experiment drivers: build training and test sets, fit each method, time the
//! offline and online stages, and report relative errors.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Manifold, Point};
use crate::interp::{BackendSpec, DomainBox};
use crate::mean::MeanOptions;
use crate::models::{mtsm_fit, rmls_eval, stsm_fit, AnchorChoice, MtsmConfig, RmlsConfig};
use crate::samples::SampleSet;

use super::functions::{so3_test_function, spd_test_function, sphere_test_function, GrassmannCurve};
use super::metrics::{rel_err_max, ErrorStats};
use super::sampling::{chebyshev_grid, halton2d_centered, uniform_grid};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Spd,
    So3,
    Sphere,
    Grassmann,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Spd => "spd",
            Experiment::So3 => "so3",
            Experiment::Sphere => "sphere",
            Experiment::Grassmann => "grassmann",
        }
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spd" => Ok(Experiment::Spd),
            "so3" => Ok(Experiment::So3),
            "sphere" => Ok(Experiment::Sphere),
            "grassmann" => Ok(Experiment::Grassmann),
            o => Err(Error::InvalidArgument(format!("unknown experiment `{o}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Stsm,
    Mtsm,
    Rmls,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Stsm => "stsm",
            Method::Mtsm => "mtsm",
            Method::Rmls => "rmls",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stsm" => Ok(Method::Stsm),
            "mtsm" => Ok(Method::Mtsm),
            "rmls" => Ok(Method::Rmls),
            o => Err(Error::InvalidArgument(format!("unknown method `{o}`"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How training inputs are laid out.
#[derive(Clone, Debug, PartialEq)]
pub enum TrainSpec {
    /// Halton point counts (2-D inputs only).
    Halton(Vec<usize>),
    /// Chebyshev points per axis.
    Chebyshev(Vec<usize>),
    /// Uniform points per axis.
    Uniform(Vec<usize>),
}

impl TrainSpec {
    pub fn variants(&self) -> usize {
        match self {
            TrainSpec::Halton(v) | TrainSpec::Chebyshev(v) | TrainSpec::Uniform(v) => v.len(),
        }
    }

    /// Training inputs of the `k`-th variant.
    pub fn inputs(&self, k: usize, domain: &DomainBox) -> Vec<Vec<f64>> {
        match self {
            TrainSpec::Halton(v) => {
                let unit = halton2d_centered(v[k]);
                unit.into_iter()
                    .map(|p| {
                        p.iter()
                            .enumerate()
                            .map(|(d, t)| domain.lo[d] + 0.5 * (t + 1.0) * (domain.hi[d] - domain.lo[d]))
                            .collect()
                    })
                    .collect()
            }
            TrainSpec::Chebyshev(v) => chebyshev_grid(v[k], &domain.lo, &domain.hi),
            TrainSpec::Uniform(v) => uniform_grid(v[k], &domain.lo, &domain.hi),
        }
    }
}

/// Training sizes `⌊50 · 1.5^k⌋` for `k = 0..=5`.
pub fn spd_train_sizes() -> Vec<usize> {
    (0..=5).map(|k| (50.0 * 1.5f64.powi(k)).floor() as usize).collect()
}

#[derive(Clone, Debug)]
pub struct BenchmarkConfig {
    pub experiment: Experiment,
    pub train: TrainSpec,
    /// Uniform test points per axis.
    pub test_grid: usize,
    pub domain: DomainBox,
    pub methods: Vec<Method>,
    pub backend: BackendSpec,
    pub seed: u64,
    pub curvature_lower: f64,
    pub inj_estimate: f64,
    pub r_max: usize,
    pub cutoff_c: f64,
    /// RMLS support radius; `None` uses the default for each training set.
    pub rmls_radius: Option<f64>,
    pub out: Option<PathBuf>,
}

impl BenchmarkConfig {
    pub fn new(experiment: Experiment) -> Self {
        let square = |h: f64| DomainBox::new(vec![-h, -h], vec![h, h]).expect("valid box");
        let manifold = target_manifold(experiment);
        let (train, test_grid, domain, lower) = match experiment {
            Experiment::Spd => (TrainSpec::Halton(spd_train_sizes()), 50, square(1.0), -4.0),
            Experiment::So3 => (TrainSpec::Chebyshev(vec![7]), 20, square(0.5), -1.0),
            Experiment::Sphere => (TrainSpec::Halton(vec![50, 100, 200]), 30, square(1.0), -1.0),
            Experiment::Grassmann => (
                TrainSpec::Uniform(vec![9, 17, 33]),
                200,
                DomainBox::new(vec![-1.0], vec![1.0]).expect("valid box"),
                manifold.curvature_lower,
            ),
        };
        BenchmarkConfig {
            experiment,
            train,
            test_grid,
            domain,
            methods: vec![Method::Stsm, Method::Mtsm, Method::Rmls],
            backend: BackendSpec::Rbf { shape: None },
            seed: 0,
            curvature_lower: lower,
            inj_estimate: manifold.inj_estimate,
            r_max: 10,
            cutoff_c: crate::models::multi::DEFAULT_CUTOFF_C,
            rmls_radius: None,
            out: None,
        }
    }

    pub fn manifold(&self) -> Manifold {
        target_manifold(self.experiment)
            .with_curvature_lower(self.curvature_lower)
            .with_inj_estimate(self.inj_estimate)
    }

    fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::InvalidArgument("method list is empty".into()));
        }
        if self.train.variants() == 0 || self.test_grid == 0 {
            return Err(Error::InvalidArgument("training and test sets must be nonempty".into()));
        }
        if self.domain.dim() != input_dim(self.experiment) {
            return Err(crate::error::mismatch(input_dim(self.experiment), self.domain.dim()));
        }
        if matches!(self.train, TrainSpec::Halton(_)) && self.domain.dim() != 2 {
            return Err(Error::InvalidArgument("Halton training sets are 2-D".into()));
        }
        if !(self.cutoff_c > 0.0 && self.cutoff_c < 1.0) {
            return Err(Error::InvalidArgument("cutoff c must lie in (0,1)".into()));
        }
        Ok(())
    }
}

fn target_manifold(e: Experiment) -> Manifold {
    match e {
        Experiment::Spd => Manifold::spd(3),
        Experiment::So3 => Manifold::special_orthogonal(3),
        Experiment::Sphere => Manifold::sphere(2),
        Experiment::Grassmann => GrassmannCurve::default().manifold(),
    }
}

fn input_dim(e: Experiment) -> usize {
    match e {
        Experiment::Grassmann => 1,
        _ => 2,
    }
}

pub type ReferenceFn = Box<dyn Fn(&[f64]) -> Point + Send + Sync>;

/// Evaluates the experiment's reference function.
pub fn reference_function(e: Experiment) -> ReferenceFn {
    match e {
        Experiment::Spd => Box::new(spd_test_function),
        Experiment::So3 => Box::new(so3_test_function),
        Experiment::Sphere => Box::new(sphere_test_function),
        Experiment::Grassmann => {
            let c = GrassmannCurve::default();
            Box::new(move |x| c.eval(x))
        }
    }
}

/// Samples the reference function at the given inputs.
pub fn sample_set(cfg: &BenchmarkConfig, inputs: Vec<Vec<f64>>) -> Result<SampleSet> {
    let f = reference_function(cfg.experiment);
    let outputs = inputs.iter().map(|x| f(x)).collect();
    Ok(SampleSet::new(cfg.manifold(), inputs, outputs)?.with_note(format!("{} benchmark", cfg.experiment.name())))
}

#[derive(Clone, Debug)]
pub struct ReportRow {
    pub experiment: String,
    pub method: Method,
    pub train_size: usize,
    /// Number of anchors (1 for STSM, 0 for RMLS which has none).
    pub r: usize,
    pub stats: Option<ErrorStats>,
    pub offline_s: f64,
    pub online_s: f64,
    pub ok: bool,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct BenchmarkReport {
    pub rows: Vec<ReportRow>,
}

impl BenchmarkReport {
    pub fn row(&self, method: Method, train_size: usize) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.method == method && r.train_size == train_size)
    }

    pub fn all_failed(&self) -> bool {
        self.rows.iter().all(|r| !r.ok)
    }

    pub fn write_csv(&self, path: &std::path::Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record([
            "experiment",
            "method",
            "train_size",
            "R",
            "max_rel_err",
            "geomean_rel_err",
            "offline_s",
            "online_s",
            "status",
            "message",
        ])?;
        for r in &self.rows {
            let (mx, gm) = r
                .stats
                .as_ref()
                .map_or((String::new(), String::new()), |s| (format!("{:.6e}", s.max_rel_err), format!("{:.6e}", s.geomean_rel_err)));
            w.write_record([
                r.experiment.clone(),
                r.method.to_string(),
                r.train_size.to_string(),
                r.r.to_string(),
                mx,
                gm,
                format!("{:.6}", r.offline_s),
                format!("{:.6}", r.online_s),
                if r.ok { "ok".into() } else { "failed".into() },
                r.message.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

type Predictor = Box<dyn Fn(&[f64]) -> Result<Point> + Send + Sync>;

fn build(method: Method, cfg: &BenchmarkConfig, train: &SampleSet) -> Result<(Predictor, usize)> {
    let m = train.manifold.clone();
    match method {
        Method::Stsm => {
            let anchor = stsm_fit(train, &AnchorChoice::Frechet, &cfg.backend, Some(cfg.domain.clone()))
                .or_else(|_| stsm_fit(train, &AnchorChoice::RandomSample(cfg.seed), &cfg.backend, Some(cfg.domain.clone())))?;
            Ok((Box::new(move |x| anchor.eval(&m, x)), 1))
        }
        Method::Mtsm => {
            let mut mc = MtsmConfig::new(&m, cfg.r_max.min(train.len()), cfg.backend.clone());
            mc.cutoff_c = cfg.cutoff_c;
            mc.anchors.kmeans.seed = cfg.seed;
            mc.domain = Some(cfg.domain.clone());
            let fit = mtsm_fit(train, &mc)?;
            let r = fit.model.r();
            let model = fit.model;
            Ok((Box::new(move |x| model.eval(x)), r))
        }
        Method::Rmls => {
            let rc = match cfg.rmls_radius {
                Some(d) => RmlsConfig::new(d)?,
                None => RmlsConfig::default_for(train),
            };
            let samples = train.clone();
            let opts = MeanOptions::default();
            Ok((Box::new(move |x| rmls_eval(&samples, x, &rc, &opts)), 0))
        }
    }
}

fn run_one(method: Method, cfg: &BenchmarkConfig, train: &SampleSet, test_x: &[Vec<f64>], truth: &[Point]) -> ReportRow {
    let mut row = ReportRow {
        experiment: cfg.experiment.name().into(),
        method,
        train_size: train.len(),
        r: 0,
        stats: None,
        offline_s: 0.0,
        online_s: 0.0,
        ok: false,
        message: String::new(),
    };
    let t0 = Instant::now();
    let built = build(method, cfg, train);
    row.offline_s = t0.elapsed().as_secs_f64();
    let (predict, r) = match built {
        Ok(b) => b,
        Err(e) => {
            row.message = e.to_string();
            return row;
        }
    };
    row.r = r;
    let t1 = Instant::now();
    let preds: Vec<Result<Point>> = test_x.par_iter().map(|x| predict(x)).collect();
    row.online_s = t1.elapsed().as_secs_f64();
    let first_err = preds.iter().find_map(|p| p.as_ref().err()).map(|e| e.to_string());
    let preds: Vec<Option<Point>> = preds.into_iter().map(|p| p.ok()).collect();
    match rel_err_max(&train.manifold, truth, &preds) {
        Ok(stats) => {
            row.ok = stats.evaluated > 0;
            if stats.failed > 0 {
                row.message = format!(
                    "{} of {} test points failed; first: {}",
                    stats.failed,
                    truth.len(),
                    first_err.unwrap_or_default()
                );
            }
            row.stats = Some(stats);
        }
        Err(e) => row.message = e.to_string(),
    }
    row
}

/// Runs every method on every training set. Method failures become rows with
/// `status = failed`; only configuration errors abort the run.
pub fn run_benchmark(cfg: &BenchmarkConfig) -> Result<BenchmarkReport> {
    cfg.validate()?;
    let test_x = uniform_grid(cfg.test_grid, &cfg.domain.lo, &cfg.domain.hi);
    let test = sample_set(cfg, test_x.clone())?;
    let mut report = BenchmarkReport::default();
    for k in 0..cfg.train.variants() {
        let train = sample_set(cfg, cfg.train.inputs(k, &cfg.domain))?;
        for &method in &cfg.methods {
            let row = run_one(method, cfg, &train, &test_x, test.outputs());
            log::info!(
                "{} {} N={} R={} max={:?} offline={:.3}s online={:.3}s {}",
                row.experiment,
                row.method,
                row.train_size,
                row.r,
                row.stats.as_ref().map(|s| s.max_rel_err),
                row.offline_s,
                row.online_s,
                row.message
            );
            report.rows.push(row);
        }
    }
    if let Some(path) = &cfg.out {
        report.write_csv(path)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spd_sizes() {
        assert_eq!(spd_train_sizes(), vec![50, 75, 112, 168, 253, 379]);
    }

    #[test]
    fn small_sphere_run_is_deterministic() {
        let mut cfg = BenchmarkConfig::new(Experiment::Sphere);
        cfg.train = TrainSpec::Halton(vec![40]);
        cfg.test_grid = 6;
        let a = run_benchmark(&cfg).unwrap();
        let b = run_benchmark(&cfg).unwrap();
        assert_eq!(a.rows.len(), 3);
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert!(x.ok, "{}: {}", x.method, x.message);
            assert_eq!(x.stats, y.stats);
            assert_eq!(x.r, y.r);
        }
    }

    #[test]
    fn empty_method_list_is_a_config_error() {
        let mut cfg = BenchmarkConfig::new(Experiment::So3);
        cfg.methods.clear();
        assert!(run_benchmark(&cfg).is_err());
    }
}
