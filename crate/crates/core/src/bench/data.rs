//! CSV persistence for sample sets and query inputs.
//!
//! A samples file starts with the record `n,m,kind,params` (for example
//! `2,9,spd,3`), followed by one row `x_1..x_n,y_1..y_m` per sample with `y`
//! flattened row-major.

use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Manifold, ManifoldKind, Point};
use crate::samples::SampleSet;

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    Ok(csv::WriterBuilder::new().flexible(true).has_headers(false).from_path(path)?)
}

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    Ok(csv::ReaderBuilder::new()
        .flexible(true)
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)?)
}

/// Writes inputs and points in the samples format.
pub fn write_points(path: impl AsRef<Path>, kind: &ManifoldKind, inputs: &[Vec<f64>], outputs: &[Point]) -> Result<()> {
    let mut w = writer(path.as_ref())?;
    let n = inputs.first().map_or(0, Vec::len);
    w.write_record([n.to_string(), kind.ambient_dim().to_string(), kind.name().into(), kind.params()])?;
    for (x, y) in inputs.iter().zip(outputs) {
        let row: Vec<String> = x.iter().copied().chain(y.to_row_major()).map(real).collect();
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_samples(samples: &SampleSet, path: impl AsRef<Path>) -> Result<()> {
    write_points(path, &samples.manifold.kind, samples.inputs(), samples.outputs())
}

fn parse_row(rec: &csv::StringRecord, row: usize) -> Result<Vec<f64>> {
    rec.iter()
        .map(|t| {
            t.parse::<f64>().map_err(|_| Error::Data {
                row,
                message: format!("`{t}` is not a number"),
            })
        })
        .collect()
}

/// Reads a samples file. Outputs are validated on the manifold with default
/// curvature bounds; failures carry the 0-based sample index.
pub fn load_samples(path: impl AsRef<Path>) -> Result<SampleSet> {
    let mut r = reader(path.as_ref())?;
    let mut records = r.records();
    let header = match records.next() {
        None => return Err(Error::NoSamples),
        Some(h) => h?,
    };
    if header.len() != 4 {
        return Err(Error::Malformed("samples header must be `n,m,kind,params`".into()));
    }
    let n: usize = header[0]
        .parse()
        .map_err(|_| Error::Malformed(format!("bad input dimension `{}`", &header[0])))?;
    let m: usize = header[1]
        .parse()
        .map_err(|_| Error::Malformed(format!("bad output dimension `{}`", &header[1])))?;
    let kind = ManifoldKind::from_parts(&header[2], &header[3])?;
    if kind.ambient_dim() != m {
        return Err(crate::error::mismatch(format!("{} output columns for {kind}", kind.ambient_dim()), m));
    }
    let (rows, cols) = kind.ambient_shape();
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for (row, rec) in records.enumerate() {
        let rec = rec?;
        if rec.len() != n + m {
            return Err(Error::Data {
                row,
                message: format!("expected {} fields, found {}", n + m, rec.len()),
            });
        }
        let v = parse_row(&rec, row)?;
        inputs.push(v[..n].to_vec());
        outputs.push(Point::from_row_major(rows, cols, &v[n..]));
    }
    SampleSet::new(Manifold::new(kind), inputs, outputs)
}

/// Reads query inputs: one point per row; a non-numeric first row is a header.
pub fn load_inputs(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let mut r = reader(path.as_ref())?;
    let mut out = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        match parse_row(&rec, row) {
            Ok(v) => out.push(v),
            Err(_) if row == 0 => continue,
            Err(e) => return Err(e),
        }
    }
    if out.is_empty() {
        return Err(Error::NoSamples);
    }
    Ok(out)
}
