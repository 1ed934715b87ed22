//! Versioned plain-text model files with a trailing SHA-256 checksum.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{Manifold, ManifoldKind, Point, Tangent, TangentFrame};
use crate::interp::{Backend, DomainBox, GridModel, RbfModel, VectorInterpolant};
use crate::mean::{MeanInit, MeanOptions, StepRule};

use super::multi::MtsmModel;
use super::single::AnchorSubmodel;

pub const FORMAT_MAGIC: &str = "MTSM-MODEL";
pub const FORMAT_VERSION: &str = "v1";

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_line(out: &mut String, key: &str, vals: impl IntoIterator<Item = f64>) {
    out.push_str(key);
    for v in vals {
        out.push(' ');
        out.push_str(&real(v));
    }
    out.push('\n');
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    Point(m.clone()).to_row_major()
}

/// Serializes a model to the text format.
pub fn model_to_string(model: &MtsmModel) -> String {
    let mut s = String::new();
    let kind = &model.manifold.kind;
    let _ = writeln!(s, "{FORMAT_MAGIC} {FORMAT_VERSION} {} {}", kind.name(), kind.params());
    let m = &model.manifold;
    push_line(&mut s, "curvature", [m.curvature_lower, m.curvature_upper, m.inj_estimate]);
    push_line(&mut s, "cutoff_c", [model.cutoff_c]);
    let o = &model.mean_opts;
    let step = match o.step_rule {
        StepRule::Fixed => "fixed",
        StepRule::Backtracking => "backtracking",
    };
    let init = match o.init {
        MeanInit::FirstPoint => "first_point",
        MeanInit::WeightedArgmax => "weighted_argmax",
    };
    let _ = writeln!(s, "mean {} {} {step} {init}", real(o.grad_tol), o.max_iters);
    let _ = writeln!(s, "submodels {}", model.r());
    for sub in &model.submodels {
        let (r, c) = sub.anchor.0.shape();
        let _ = writeln!(s, "submodel {r} {c}");
        push_line(&mut s, "anchor", sub.anchor.to_row_major());
        push_line(&mut s, "sigma", [sub.sigma]);
        push_line(&mut s, "tau", [sub.tau]);
        let _ = writeln!(s, "frame {}", sub.frame.dim());
        for b in &sub.frame.basis {
            push_line(&mut s, "basis", row_major(&b.0));
        }
        let g = &sub.ghat;
        match &g.backend {
            Backend::Rbf(rbf) => {
                let _ = writeln!(
                    s,
                    "backend rbf {} {} {} {}",
                    g.input_dim,
                    g.output_dim,
                    rbf.nodes.len(),
                    real(rbf.shape)
                );
                push_line(&mut s, "domain_lo", g.domain.lo.iter().copied());
                push_line(&mut s, "domain_hi", g.domain.hi.iter().copied());
                for (i, node) in rbf.nodes.iter().enumerate() {
                    let vals = node.iter().copied().chain((0..g.output_dim).map(|k| rbf.coeffs[(i, k)]));
                    push_line(&mut s, "node", vals);
                }
            }
            Backend::Multilinear(grid) | Backend::PiecewiseLinear1d(grid) => {
                let _ = writeln!(
                    s,
                    "backend {} {} {} {}",
                    g.backend_name(),
                    g.input_dim,
                    g.output_dim,
                    grid.values.len()
                );
                for ax in &grid.axes {
                    let _ = write!(s, "axis {}", ax.len());
                    for v in ax {
                        let _ = write!(s, " {}", real(*v));
                    }
                    s.push('\n');
                }
                for v in &grid.values {
                    push_line(&mut s, "value", v.iter().copied());
                }
            }
        }
    }
    s.push_str("end\n");
    let digest = Sha256::digest(s.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    let _ = writeln!(s, "checksum sha256 {hex}");
    s
}

pub fn save_model(model: &MtsmModel, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, model_to_string(model))?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<MtsmModel> {
    model_from_str(&std::fs::read_to_string(path)?)
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next(&mut self, key: &str) -> Result<(usize, Vec<&'a str>)> {
        let (no, line) = self
            .iter
            .next()
            .ok_or_else(|| Error::Malformed(format!("unexpected end of file, expected `{key}`")))?;
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some(k) if k == key => Ok((no + 1, toks.collect())),
            other => Err(Error::Malformed(format!(
                "line {}: expected `{key}`, found `{}`",
                no + 1,
                other.unwrap_or("")
            ))),
        }
    }

    fn reals(&mut self, key: &str, count: Option<usize>) -> Result<Vec<f64>> {
        let (no, toks) = self.next(key)?;
        let vals = toks
            .iter()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Malformed(format!("line {no}: {e}")))?;
        if let Some(n) = count {
            if vals.len() != n {
                return Err(Error::Malformed(format!("line {no}: expected {n} values, found {}", vals.len())));
            }
        }
        Ok(vals)
    }

    fn real(&mut self, key: &str) -> Result<f64> {
        Ok(self.reals(key, Some(1))?[0])
    }
}

fn int(tok: Option<&&str>, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::Malformed(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::Malformed(format!("invalid {what}")))
}

/// Parses the text format, checking version and checksum before anything else.
pub fn model_from_str(text: &str) -> Result<MtsmModel> {
    let header = text
        .lines()
        .next()
        .filter(|l| !l.trim().is_empty())
        .ok_or_else(|| Error::Malformed("empty model file".into()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.first() != Some(&FORMAT_MAGIC) || head.len() != 4 {
        return Err(Error::Malformed("missing model header".into()));
    }
    if head[1] != FORMAT_VERSION {
        return Err(Error::Version(head[1].to_string()));
    }
    let cut = text
        .rfind("checksum sha256 ")
        .ok_or_else(|| Error::Malformed("missing checksum line".into()))?;
    let (body, tail) = text.split_at(cut);
    let expected = tail.trim_start_matches("checksum sha256 ").trim();
    let actual: String = Sha256::digest(body.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    if expected != actual {
        return Err(Error::Checksum);
    }

    let kind = ManifoldKind::from_parts(head[2], head[3])?;
    let mut lines = Lines {
        iter: body.lines().enumerate(),
    };
    lines.iter.next();
    let curv = lines.reals("curvature", Some(3))?;
    let manifold = Manifold::new(kind)
        .with_curvature_lower(curv[0])
        .with_curvature_upper(curv[1])
        .with_inj_estimate(curv[2]);
    let cutoff_c = lines.real("cutoff_c")?;
    let (no, t) = lines.next("mean")?;
    if t.len() != 4 {
        return Err(Error::Malformed(format!("line {no}: mean options need 4 fields")));
    }
    let mean_opts = MeanOptions {
        grad_tol: t[0].parse().map_err(|_| Error::Malformed(format!("line {no}: grad_tol")))?,
        max_iters: int(t.get(1), "max_iters")?,
        step_rule: match t[2] {
            "fixed" => StepRule::Fixed,
            "backtracking" => StepRule::Backtracking,
            o => return Err(Error::Malformed(format!("line {no}: unknown step rule `{o}`"))),
        },
        init: match t[3] {
            "first_point" => MeanInit::FirstPoint,
            "weighted_argmax" => MeanInit::WeightedArgmax,
            o => return Err(Error::Malformed(format!("line {no}: unknown init `{o}`"))),
        },
    };
    let (_, t) = lines.next("submodels")?;
    let r = int(t.first(), "submodel count")?;
    let mut subs = Vec::with_capacity(r);
    for _ in 0..r {
        let (_, t) = lines.next("submodel")?;
        let rows = int(t.first(), "rows")?;
        let cols = int(t.get(1), "cols")?;
        let anchor = Point::from_row_major(rows, cols, &lines.reals("anchor", Some(rows * cols))?);
        let sigma = lines.real("sigma")?;
        let tau = lines.real("tau")?;
        let (_, t) = lines.next("frame")?;
        let dim = int(t.first(), "frame dimension")?;
        let basis = (0..dim)
            .map(|_| {
                let v = lines.reals("basis", Some(rows * cols))?;
                Ok(Tangent(DMatrix::from_row_slice(rows, cols, &v)))
            })
            .collect::<Result<Vec<_>>>()?;
        let frame = TangentFrame::from_basis(&manifold, &anchor, basis)?;
        let (no, t) = lines.next("backend")?;
        let input_dim = int(t.get(1), "input dimension")?;
        let output_dim = int(t.get(2), "output dimension")?;
        let count = int(t.get(3), "node count")?;
        let ghat = match t.first().copied() {
            Some("rbf") => {
                let shape: f64 = t
                    .get(4)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| Error::Malformed(format!("line {no}: shape parameter")))?;
                let lo = lines.reals("domain_lo", Some(input_dim))?;
                let hi = lines.reals("domain_hi", Some(input_dim))?;
                let mut nodes = Vec::with_capacity(count);
                let mut coeffs = DMatrix::zeros(count, output_dim);
                for i in 0..count {
                    let v = lines.reals("node", Some(input_dim + output_dim))?;
                    nodes.push(v[..input_dim].to_vec());
                    for k in 0..output_dim {
                        coeffs[(i, k)] = v[input_dim + k];
                    }
                }
                VectorInterpolant {
                    backend: Backend::Rbf(RbfModel { shape, nodes, coeffs }),
                    input_dim,
                    output_dim,
                    domain: DomainBox::new(lo, hi)?,
                }
            }
            Some(name @ ("multilinear" | "piecewise_linear_1d")) => {
                let mut axes = Vec::with_capacity(input_dim);
                for _ in 0..input_dim {
                    let v = lines.reals("axis", None)?;
                    if v.is_empty() || v[0] as usize != v.len() - 1 {
                        return Err(Error::Malformed("axis length does not match its knots".into()));
                    }
                    axes.push(v[1..].to_vec());
                }
                let values = (0..count)
                    .map(|_| lines.reals("value", Some(output_dim)))
                    .collect::<Result<Vec<_>>>()?;
                let mut g = crate::interp::fit_multilinear_grid(axes, values)?;
                if name == "piecewise_linear_1d" {
                    if let Backend::Multilinear(grid) = g.backend {
                        g.backend = Backend::PiecewiseLinear1d(GridModel { ..grid });
                    }
                }
                g
            }
            other => {
                return Err(Error::Malformed(format!("line {no}: unknown backend `{}`", other.unwrap_or(""))));
            }
        };
        subs.push(AnchorSubmodel {
            anchor,
            sigma,
            tau,
            ghat,
            frame,
        });
    }
    lines.next("end")?;
    MtsmModel::new(manifold, subs, cutoff_c, mean_opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::BackendSpec;
    use crate::models::single::{stsm_fit, AnchorChoice};
    use crate::samples::SampleSet;

    fn small_model(backend: BackendSpec) -> MtsmModel {
        let m = Manifold::spd(2);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..4 {
            for j in 0..3 {
                let (a, b) = (i as f64 / 3.0, j as f64 / 2.0);
                xs.push(vec![a, b]);
                ys.push(Point(DMatrix::from_row_slice(2, 2, &[2.0 + a, 0.3 * b, 0.3 * b, 1.0 + a * b])));
            }
        }
        let s = SampleSet::new(m.clone(), xs, ys).unwrap();
        let sub = stsm_fit(&s, &AnchorChoice::Frechet, &backend, None).unwrap();
        MtsmModel::new(m, vec![sub], 0.25, MeanOptions::default()).unwrap()
    }

    #[test]
    fn roundtrip_evaluates_identically() {
        for backend in [BackendSpec::Rbf { shape: None }, BackendSpec::Multilinear] {
            let model = small_model(backend);
            let back = model_from_str(&model_to_string(&model)).unwrap();
            assert_eq!(back, model);
            for x in [[0.1, 0.2], [0.9, 0.7]] {
                let a = model.eval(&x).unwrap();
                let b = back.eval(&x).unwrap();
                assert!((a.0 - b.0).abs().max() <= 1e-12);
            }
        }
    }

    #[test]
    fn version_checksum_and_empty_errors() {
        let text = model_to_string(&small_model(BackendSpec::Multilinear));
        let v2 = text.replacen("MTSM-MODEL v1", "MTSM-MODEL v9", 1);
        assert!(matches!(model_from_str(&v2), Err(Error::Version(v)) if v == "v9"));
        let tampered = text.replacen("cutoff_c 2.5", "cutoff_c 3.5", 1);
        assert!(matches!(model_from_str(&tampered), Err(Error::Checksum)));
        assert!(matches!(model_from_str(""), Err(Error::Malformed(_))));
    }
}
