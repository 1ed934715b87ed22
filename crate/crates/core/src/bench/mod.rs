//! Benchmark harness: reference functions, point sets, error metrics,
//! experiment drivers and CSV persistence.

pub mod data;
pub mod functions;
pub mod metrics;
pub mod runner;
pub mod sampling;

pub use data::{load_inputs, load_samples, save_samples, write_points};
pub use functions::{so3_test_function, spd_test_function, sphere_test_function, GrassmannCurve};
pub use metrics::{rel_err_max, ErrorStats};
pub use runner::{reference_function, run_benchmark, sample_set, BenchmarkConfig, BenchmarkReport, Experiment, Method, ReportRow, TrainSpec};
pub use sampling::{chebyshev_grid, halton2d, uniform_grid};
