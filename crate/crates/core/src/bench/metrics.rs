//! Relative error statistics on a test set.

use crate::error::Result;
use crate::geometry::{Manifold, Point};

/// Floor applied to exact-zero pointwise errors inside the geometric mean.
pub const GEOMEAN_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorStats {
    /// `max dist(f(x), f̂(x)) / ‖f(x)‖_F` over the evaluated test points.
    pub max_rel_err: f64,
    pub geomean_rel_err: f64,
    pub evaluated: usize,
    /// Test points whose prediction failed; they do not enter the statistics.
    pub failed: usize,
}

/// Pointwise `dist(f(x), f̂(x)) / ‖f(x)‖_F`; `None` predictions stay `None`.
pub fn relative_errors(manifold: &Manifold, truth: &[Point], pred: &[Option<Point>]) -> Result<Vec<Option<f64>>> {
    truth
        .iter()
        .zip(pred)
        .map(|(t, p)| match p {
            Some(p) => Ok(Some(manifold.dist(t, p)? / t.0.norm())),
            None => Ok(None),
        })
        .collect()
}

pub fn error_stats(errors: &[Option<f64>]) -> ErrorStats {
    let ok: Vec<f64> = errors.iter().flatten().copied().collect();
    let failed = errors.len() - ok.len();
    if ok.is_empty() {
        return ErrorStats {
            max_rel_err: f64::NAN,
            geomean_rel_err: f64::NAN,
            evaluated: 0,
            failed,
        };
    }
    let max_rel_err = ok.iter().copied().fold(0.0, f64::max);
    let log_mean = ok.iter().map(|e| e.max(GEOMEAN_FLOOR).ln()).sum::<f64>() / ok.len() as f64;
    ErrorStats {
        max_rel_err,
        geomean_rel_err: log_mean.exp(),
        evaluated: ok.len(),
        failed,
    }
}

/// Maximum and geometric-mean relative error of predictions against the truth.
pub fn rel_err_max(manifold: &Manifold, truth: &[Point], pred: &[Option<Point>]) -> Result<ErrorStats> {
    Ok(error_stats(&relative_errors(manifold, truth, pred)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn pt(v: f64) -> Point {
        Point(DMatrix::from_element(1, 1, v))
    }

    #[test]
    fn exact_predictions_have_zero_error() {
        let m = Manifold::euclidean(1);
        let s = rel_err_max(&m, &[pt(1.0), pt(2.0)], &[Some(pt(1.0)), Some(pt(2.0))]).unwrap();
        assert_eq!(s.max_rel_err, 0.0);
        assert!((s.geomean_rel_err / GEOMEAN_FLOOR - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_point_ratio() {
        let m = Manifold::euclidean(1);
        let s = rel_err_max(&m, &[pt(5.0)], &[Some(pt(5.5))]).unwrap();
        assert!((s.max_rel_err - 0.1).abs() < 1e-15);
    }

    #[test]
    fn max_and_geomean() {
        let s = error_stats(&[Some(0.1), Some(0.001), None]);
        assert_eq!(s.max_rel_err, 0.1);
        assert!((s.geomean_rel_err - 0.01).abs() < 1e-15);
        assert_eq!(s.failed, 1);
    }
}
