use std::collections::HashMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn dirac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

struct Csv {
    meta: Value,
    columns: HashMap<String, Vec<f64>>,
}

fn csv(out: &Output) -> Csv {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let (first, rest) = text.split_once('\n').unwrap();
    let meta = serde_json::from_str(first.strip_prefix("# meta: ").expect("meta line")).unwrap();
    let mut rdr = csv::Reader::from_reader(rest.as_bytes());
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    let mut columns: HashMap<String, Vec<f64>> = headers.iter().map(|h| (h.clone(), Vec::new())).collect();
    for rec in rdr.records() {
        for (h, v) in headers.iter().zip(rec.unwrap().iter()) {
            columns.get_mut(h).unwrap().push(v.parse().unwrap());
        }
    }
    Csv { meta, columns }
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("dirac-cli-{}-{name}", std::process::id()))
}

#[test]
fn spectrum_rows_and_degeneracy() {
    let v = json(&dirac(&["spectrum", "--Z", "1", "--n-max", "2"]));
    assert_eq!(v["n"], serde_json::json!([1, 2, 2]));
    assert_eq!(v["kappa"], serde_json::json!([1, 1, 2]));
    let za = v["meta"]["zalpha"].as_f64().unwrap();
    let eps = floats(&v["epsilon"]);
    assert!((eps[2] - (1.0 - za * za / 4.0).sqrt()).abs() < 1e-15);
    let deg: i64 = v["degeneracy"].as_array().unwrap()[1..].iter().map(|x| x.as_i64().unwrap()).sum();
    assert_eq!(deg, 8);
    for t in v["meta"]["totals"].as_array().unwrap() {
        let n = t["n"].as_i64().unwrap();
        assert_eq!(t["states"].as_i64().unwrap(), 2 * n * n);
    }
}

#[test]
fn spectrum_csv_has_header_and_fixed_digits() {
    let out = dirac(&["spectrum", "--n-max", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# meta: {"));
    assert_eq!(lines[1], "n,kappa,j,epsilon,binding,delta_j,degeneracy");
    let eps = lines[2].split(',').nth(3).unwrap();
    let mantissa = eps.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17);
}

#[test]
fn exit_codes() {
    assert_eq!(dirac(&["spectrum", "--Z", "1", "--alpha", "1.5"]).status.code(), Some(2));
    assert_eq!(dirac(&["spectrum", "--n-max", "21"]).status.code(), Some(2));
    assert_eq!(
        dirac(&["state", "--n", "1", "--kappa", "1", "--sigma", "-", "--point", "1:1:0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        dirac(&["field", "--n", "2", "--kappa", "1", "--case", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        dirac(&["spectrum", "--out", "/nonexistent-dir/spectrum.json"]).status.code(),
        Some(3)
    );
}

#[test]
fn output_is_deterministic() {
    let args = [
        "field", "--n", "2", "--kappa", "1", "--sigma", "-", "--theta", "0.4", "--phi", "-1.1", "--grid", "6:5:4",
    ];
    let a = dirac(&args);
    let b = dirac(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let j1 = dirac(&["state", "--n", "3", "--kappa", "2", "--two-mj", "-3", "--case", "bel", "--point", "2:1:0.5"]);
    let j2 = dirac(&["state", "--n", "3", "--kappa", "2", "--two-mj", "-3", "--case", "bel", "--point", "2:1:0.5"]);
    assert_eq!(j1.stdout, j2.stdout);
}

#[test]
fn writes_to_file() {
    let path = tmp("state.json");
    let out = dirac(&[
        "state", "--n", "1", "--kappa", "1", "--point", "1:0.3:0", "--point", "2:2:1", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["meta"]["n_r"], 0);
    assert_eq!(floats(&v["r"]), vec![1.0, 2.0]);
    // 1s density from the printed spinor components
    let w = floats(&v["w"]);
    let comp = |k: &str| floats(&v[k])[0];
    let sum: f64 = ["re1", "im1", "re2", "im2", "re3", "im3", "re4", "im4"].iter().map(|k| comp(k).powi(2)).sum();
    assert!((sum - w[0]).abs() < 1e-15 * w[0].max(1.0));
}

#[test]
fn darwin_2p_half_is_spherical() {
    let f = csv(&dirac(&["field", "--n", "2", "--kappa", "1", "--sigma", "-", "--case", "darwin", "--grid", "8:6:5"]));
    let (r, w) = (&f.columns["r"], &f.columns["w"]);
    let per_shell = 6 * 5;
    for shell in 0..8 {
        let ws = &w[shell * per_shell..(shell + 1) * per_shell];
        assert!(r[shell * per_shell..(shell + 1) * per_shell].iter().all(|&x| x == r[shell * per_shell]));
        let (lo, hi) = ws.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
        assert!((hi - lo) <= 1e-12 * hi, "shell {shell}: {lo} {hi}");
    }
    assert!(f.meta["grid"]["mirror_asymmetry"].as_f64().unwrap() < 1e-12);
}

#[test]
fn slice_mode_covers_the_plane() {
    let f = csv(&dirac(&[
        "field", "--n", "2", "--kappa", "1", "--case", "jl", "--slice", "--slice-n", "20", "--spherical",
    ]));
    assert_eq!(f.columns["z"].len(), 400);
    assert!(f.columns["rho"].iter().all(|x| x.abs() <= 12.0));
    assert!(f.columns["rho"].iter().any(|&x| x < 0.0));
    for k in 0..400 {
        let s = ["sx", "sy", "sz"].map(|c| f.columns[c][k]);
        let t = ["sr", "stheta", "sphi"].map(|c| f.columns[c][k]);
        let n1 = s.iter().map(|x| x * x).sum::<f64>();
        let n2 = t.iter().map(|x| x * x).sum::<f64>();
        assert!((n1 - 1.0).abs() < 1e-12 && (n2 - 1.0).abs() < 1e-12);
    }
    assert_eq!(f.meta["slice"]["points"], 20);
}

#[test]
fn invariant_families_give_different_densities() {
    let grid = ["--grid", "24:16:8"];
    let run = |case: &str| {
        let mut args = vec!["field", "--n", "2", "--kappa", "1", "--case", case];
        args.extend(grid);
        csv(&dirac(&args))
    };
    let (d, jl, bel) = (run("darwin"), run("jl"), run("bel"));
    let dist = |a: &Csv, b: &Csv| {
        let wt = &a.columns["weight"];
        let (mut num, mut den) = (0.0, 0.0);
        for k in 0..wt.len() {
            num += wt[k] * (a.columns["w"][k] - b.columns["w"][k]).powi(2);
            den += wt[k] * a.columns["w"][k].powi(2);
        }
        (num / den).sqrt()
    };
    assert!(dist(&d, &jl) > 1e-3);
    assert!(dist(&d, &bel) > 1e-3);
    assert!(dist(&jl, &bel) > 1e-3);
    let mirror = |f: &Csv| f.meta["grid"]["mirror_asymmetry"].as_f64().unwrap();
    assert!(mirror(&d) < 1e-12);
    assert!(mirror(&jl) > 1e-3);
    // the BEL combination of the two j = 1/2 Darwin states stays mirror-symmetric
    assert!(mirror(&bel) < 1e-12);
}

#[test]
fn verify_default_passes() {
    let path = tmp("verify.json");
    let out = dirac(&["verify", "--out", path.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.status.code(), Some(0), "{v:#}");
    assert_eq!(v["pass"], true);
    let names: Vec<&str> = v["suites"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["normalization", "spectrum", "operators", "anticommutators", "observables", "oracle"]);
}

#[test]
fn verify_detects_corrupted_beta() {
    let out = dirac(&["verify", "--suite", "normalization", "--beta-scale", "1.01"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
    let first = &v["suites"][0]["checks"][0];
    assert!((first["value"].as_f64().unwrap() - 0.0201).abs() < 1e-10);
}

#[test]
fn oracle_matches_closed_form() {
    let v = json(&dirac(&["oracle", "--Z", "80"]));
    assert!(v["meta"]["max_delta"].as_f64().unwrap() <= 1e-8);
    assert_eq!(v["n_r"].as_array().unwrap().len(), 8);
}
