use std::path::Path;
use std::process::Command;

use mtsm::bench::{save_samples, sphere_test_function, uniform_grid};
use mtsm::geometry::Manifold;
use mtsm::samples::SampleSet;

fn mtsm(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mtsm")).args(args).output().expect("run mtsm");
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap_or(-1), text)
}

fn write_sphere_samples(path: &Path) {
    let xs = uniform_grid(12, &[-1.0, -1.0], &[1.0, 1.0]);
    let ys = xs.iter().map(|x| sphere_test_function(x)).collect();
    save_samples(&SampleSet::new(Manifold::sphere(2), xs, ys).unwrap(), path).unwrap();
}

#[test]
fn fit_eval_validate() {
    let dir = tempfile::tempdir().unwrap();
    let (samples, model, inputs, preds) =
        (dir.path().join("s.csv"), dir.path().join("m.txt"), dir.path().join("q.csv"), dir.path().join("p.csv"));
    write_sphere_samples(&samples);
    std::fs::write(&inputs, "x1,x2\n0.1,0.2\n-0.4,0.5\n").unwrap();
    let s = samples.to_str().unwrap();
    let m = model.to_str().unwrap();

    let (code, text) = mtsm(&["fit", "--samples", s, "--manifold", "sphere:2", "--rmax", "4", "--out", m]);
    assert_eq!(code, 0, "{text}");
    let (code, text) = mtsm(&["eval", "--model", m, "--inputs", inputs.to_str().unwrap(), "--out", preds.to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    let written = std::fs::read_to_string(&preds).unwrap();
    let rows: Vec<Vec<f64>> =
        written.lines().skip(1).map(|l| l.split(',').map(|t| t.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        let truth = sphere_test_function(&r[..2]);
        let err: f64 = r[2..].iter().zip(truth.0.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        assert!(err < 1e-3, "prediction error {err}");
    }
    let (code, text) = mtsm(&["validate", "--model", m, "--samples", s]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("overall"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("s.csv");
    write_sphere_samples(&samples);
    let s = samples.to_str().unwrap();
    let m = dir.path().join("m.txt");
    let m = m.to_str().unwrap();

    assert_eq!(mtsm(&["bench", "torus"]).0, 2);
    assert_eq!(mtsm(&["fit", "--samples", s, "--manifold", "spd:3", "--out", m]).0, 2);
    assert_eq!(mtsm(&["fit", "--samples", "/nonexistent.csv", "--manifold", "sphere:2", "--out", m]).0, 3);

    assert_eq!(mtsm(&["fit", "--samples", s, "--manifold", "sphere:2", "--out", m]).0, 0);
    let text = std::fs::read_to_string(m).unwrap().replacen("sigma", "sigma 1", 1);
    std::fs::write(m, text).unwrap();
    assert_eq!(mtsm(&["validate", "--model", m, "--samples", s]).0, 3);
}

#[test]
fn bench_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let (code, text) = mtsm(&["bench", "grassmann", "--train-sizes", "9", "--test-grid", "20", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 4, "{csv}");
}
