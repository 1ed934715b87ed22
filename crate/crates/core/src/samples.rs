//! Input/output sample pairs `(xᵢ, yᵢ) ∈ ℝⁿ × 𝓜`.

use crate::error::{Error, Result};
use crate::geometry::{Manifold, Point};
use crate::interp::DomainBox;

/// Tolerance used when validating sample outputs against the manifold.
pub const POINT_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SampleSet {
    pub manifold: Manifold,
    inputs: Vec<Vec<f64>>,
    outputs: Vec<Point>,
    pub note: String,
}

impl SampleSet {
    /// Validates dimensions, finiteness and the manifold invariants of every output.
    pub fn new(manifold: Manifold, inputs: Vec<Vec<f64>>, outputs: Vec<Point>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::NoSamples);
        }
        if inputs.len() != outputs.len() {
            return Err(Error::InvalidArgument(format!(
                "{} inputs but {} outputs",
                inputs.len(),
                outputs.len()
            )));
        }
        let n = inputs[0].len();
        if n == 0 {
            return Err(Error::InvalidArgument("inputs must have at least one coordinate".into()));
        }
        for (row, (x, y)) in inputs.iter().zip(&outputs).enumerate() {
            if x.len() != n {
                return Err(Error::Data {
                    row,
                    message: format!("input has {} coordinates, expected {n}", x.len()),
                });
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::Data { row, message: "non-finite input".into() });
            }
            manifold
                .validate_point(y, POINT_TOL)
                .map_err(|e| Error::Data { row, message: e.to_string() })?;
        }
        Ok(SampleSet {
            manifold,
            inputs,
            outputs,
            note: String::new(),
        })
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
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

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Point] {
        &self.outputs
    }

    pub fn bounding_box(&self) -> DomainBox {
        DomainBox::bounding(&self.inputs)
    }
}
