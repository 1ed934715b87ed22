//! Command-line front end: benchmarks, fitting, evaluation and diagnostics.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mtsm::bench::{self, BenchmarkConfig, Experiment, Method, TrainSpec};
use mtsm::error::Error;
use mtsm::geometry::ManifoldKind;
use mtsm::interp::BackendSpec;
use mtsm::models::{self, MtsmConfig};

#[derive(Parser)]
#[command(name = "mtsm", version, about = "Approximation of manifold-valued functions with multiple tangent spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Rbf,
    Multilinear,
}

#[derive(clap::Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "rbf")]
    backend: BackendArg,
    /// Multiquadric shape parameter (default: mean nearest-neighbour spacing).
    #[arg(long)]
    shape: Option<f64>,
    /// Lower sectional curvature bound L.
    #[arg(long = "L", allow_negative_numbers = true)]
    l: Option<f64>,
    /// Injectivity radius estimate M (0 = unknown).
    #[arg(long = "M")]
    m: Option<f64>,
    #[arg(long, default_value_t = 10)]
    rmax: usize,
    /// Plateau fraction c of the cutoff.
    #[arg(long, default_value_t = 0.25)]
    c: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ModelArgs {
    fn backend(&self) -> BackendSpec {
        match self.backend {
            BackendArg::Rbf => BackendSpec::Rbf { shape: self.shape },
            BackendArg::Multilinear => BackendSpec::Multilinear,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark experiment and write a CSV report.
    Bench {
        #[arg(value_parser = ["spd", "so3", "sphere", "grassmann"])]
        experiment: String,
        /// Training set sizes (Halton counts or points per axis).
        #[arg(long, value_delimiter = ',')]
        train_sizes: Option<Vec<usize>>,
        /// Chebyshev training grid with k points per axis.
        #[arg(long, conflicts_with = "train_sizes")]
        train_grid: Option<usize>,
        /// Uniform test grid with k points per axis.
        #[arg(long)]
        test_grid: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "stsm,mtsm,rmls")]
        methods: Vec<String>,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a model to a samples CSV and save it.
    Fit {
        #[arg(long)]
        samples: PathBuf,
        /// Expected manifold, e.g. `spd:3` or `grassmann:10:3`.
        #[arg(long)]
        manifold: String,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a saved model at the inputs of a CSV file.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        inputs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report the well-posedness diagnostics of a model on its samples.
    Validate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        samples: PathBuf,
    },
}

enum Failure {
    Config(String),
    Data(String),
    Method(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidArgument(_) | Error::DimensionMismatch { .. } => Failure::Config(msg),
            Error::InvalidPoint(_)
            | Error::Version(_)
            | Error::Checksum
            | Error::Malformed(_)
            | Error::Data { .. }
            | Error::NoSamples
            | Error::Io(_)
            | Error::Csv(_) => Failure::Data(msg),
            _ => Failure::Method(msg),
        }
    }
}

fn run_bench(
    experiment: &str,
    train_sizes: Option<Vec<usize>>,
    train_grid: Option<usize>,
    test_grid: Option<usize>,
    methods: &[String],
    model: &ModelArgs,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let experiment: Experiment = experiment.parse()?;
    let mut cfg = BenchmarkConfig::new(experiment);
    if let Some(sizes) = train_sizes {
        cfg.train = match cfg.train {
            TrainSpec::Halton(_) => TrainSpec::Halton(sizes),
            TrainSpec::Chebyshev(_) => TrainSpec::Chebyshev(sizes),
            TrainSpec::Uniform(_) => TrainSpec::Uniform(sizes),
        };
    }
    if let Some(k) = train_grid {
        cfg.train = TrainSpec::Chebyshev(vec![k]);
    }
    if let Some(k) = test_grid {
        cfg.test_grid = k;
    }
    cfg.methods = methods.iter().map(|m| m.parse::<Method>()).collect::<Result<_, _>>()?;
    cfg.backend = model.backend();
    cfg.seed = model.seed;
    cfg.r_max = model.rmax;
    cfg.cutoff_c = model.c;
    if let Some(l) = model.l {
        cfg.curvature_lower = l;
    }
    if let Some(m) = model.m {
        cfg.inj_estimate = m;
    }
    cfg.out = out;
    let report = bench::run_benchmark(&cfg)?;
    println!("method  train     R   max_rel_err  geomean_rel  offline_s  online_s  status");
    for r in &report.rows {
        let (mx, gm) = r
            .stats
            .as_ref()
            .map_or((f64::NAN, f64::NAN), |s| (s.max_rel_err, s.geomean_rel_err));
        println!(
            "{:<6} {:>6} {:>5} {:>12.4e} {:>12.4e} {:>10.4} {:>9.4}  {}{}",
            r.method.name(),
            r.train_size,
            r.r,
            mx,
            gm,
            r.offline_s,
            r.online_s,
            if r.ok { "ok" } else { "failed" },
            if r.message.is_empty() { String::new() } else { format!(": {}", r.message) }
        );
    }
    if report.all_failed() {
        return Err(Failure::Method("every method failed".into()));
    }
    Ok(())
}

fn run_fit(samples: &PathBuf, manifold: &str, model: &ModelArgs, out: &PathBuf) -> Result<(), Failure> {
    let kind = ManifoldKind::parse(manifold)?;
    let mut set = bench::load_samples(samples)?;
    if set.manifold.kind != kind {
        return Err(Failure::Config(format!(
            "samples are on {} but --manifold is {kind}",
            set.manifold.kind
        )));
    }
    if let Some(l) = model.l {
        set.manifold = set.manifold.clone().with_curvature_lower(l);
    }
    if let Some(m) = model.m {
        set.manifold = set.manifold.clone().with_inj_estimate(m);
    }
    let mut cfg = MtsmConfig::new(&set.manifold, model.rmax.min(set.len()), model.backend());
    cfg.cutoff_c = model.c;
    cfg.anchors.kmeans.seed = model.seed;
    let fit = models::mtsm_fit(&set, &cfg)?;
    models::io::save_model(&fit.model, out)?;
    println!("fitted {} anchor(s) on {} samples", fit.model.r(), set.len());
    for (j, (sub, rep)) in fit.model.submodels.iter().zip(&fit.reports).enumerate() {
        println!(
            "  anchor {j}: sigma {:.4e}  tau {:.4e}  fitted {}  excluded {}{}",
            sub.sigma,
            sub.tau,
            rep.fitted.len(),
            rep.excluded.len(),
            if rep.grid_fallback { "  (grid fallback)" } else { "" }
        );
    }
    Ok(())
}

fn run_eval(model: &PathBuf, inputs: &PathBuf, out: &PathBuf) -> Result<(), Failure> {
    let m = models::io::load_model(model)?;
    let xs = bench::load_inputs(inputs)?;
    if let Some(bad) = xs.iter().position(|x| x.len() != m.input_dim()) {
        return Err(Failure::Data(format!(
            "input row {bad} has {} coordinates, model expects {}",
            xs[bad].len(),
            m.input_dim()
        )));
    }
    let preds = xs
        .iter()
        .map(|x| m.eval(x))
        .collect::<Result<Vec<_>, _>>()?;
    bench::write_points(out, &m.manifold.kind, &xs, &preds)?;
    println!("wrote {} predictions", preds.len());
    Ok(())
}

fn run_validate(model: &PathBuf, samples: &PathBuf) -> Result<(), Failure> {
    let m = models::io::load_model(model)?;
    let s = bench::load_samples(samples)?;
    if s.manifold.kind != m.manifold.kind {
        return Err(Failure::Config("model and samples live on different manifolds".into()));
    }
    let r = models::validate_wellposedness(&m, &s);
    println!("cover (A1): {} uncovered sample(s)", r.uncovered.len());
    for (j, d) in r.submodels.iter().enumerate() {
        println!(
            "  anchor {j}: sigma {:.4e}  tau {:.4e}  fitting set {}  range violations {}  eps {:.3e}",
            d.sigma,
            d.tau,
            d.fitting_set,
            d.range_violations.len(),
            d.epsilon
        );
    }
    println!(
        "training eps (A3): max {:.3e} vs threshold {:.3e} -> {}",
        r.max_epsilon,
        r.epsilon_threshold,
        if r.epsilon_ok() { "ok" } else { "violated" }
    );
    println!(
        "partition of unity (A4): residual {:.3e} on {} probes ({} outside support)",
        r.partition_residual, r.probes, r.probes_without_support
    );
    println!("overall: {}", if r.all_ok() { "ok" } else { "assumptions not met" });
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bench {
            experiment,
            train_sizes,
            train_grid,
            test_grid,
            methods,
            model,
            out,
        } => run_bench(
            experiment,
            train_sizes.clone(),
            *train_grid,
            *test_grid,
            methods,
            model,
            out.clone(),
        ),
        Command::Fit {
            samples,
            manifold,
            model,
            out,
        } => run_fit(samples, manifold, model, out),
        Command::Eval { model, inputs, out } => run_eval(model, inputs, out),
        Command::Validate { model, samples } => run_validate(model, samples),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Method(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(4)
        }
    }
}
