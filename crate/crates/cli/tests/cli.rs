use std::process::{Command, Output};

use serde_json::Value;

fn quon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn field(v: &Value, key: &str) -> f64 {
    v[key].to_string().parse().unwrap()
}

/// Significant digits in a formatted `d.ddd…e±x` number.
fn mantissa_digits(s: &str) -> usize {
    let mantissa = s.trim_start_matches('-').split(['e', 'E']).next().unwrap();
    mantissa.chars().filter(char::is_ascii_digit).count()
}

#[test]
fn spectrum_table() {
    let o = quon(&["spectrum", "--q", "0.5", "--dim", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(r.headers().unwrap(), vec!["n", "eps"]);
    let rows: Vec<(usize, f64)> = r
        .records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[0].parse().unwrap(), rec[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows, vec![(0, 0.0), (1, 1.0), (2, 1.5), (3, 1.75)]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("qmutator_residual="));
}

#[test]
fn numbers_have_seventeen_digits() {
    let o = quon(&["spectrum", "--q", "0.3", "--dim", "5"]);
    for line in stdout(&o).lines().skip(1) {
        assert_eq!(mantissa_digits(line.split(',').nth(1).unwrap()), 17, "{line}");
    }
    let o = quon(&["cs", "nonlinear", "--q", "0.5", "--z-re", "0.3", "--z-im", "0.1"]);
    let v = json(&o);
    assert_eq!(mantissa_digits(&v["product"].to_string()), 17);
    assert_eq!(mantissa_digits(&v["z"]["re"].to_string()), 17);
}

#[test]
fn nonlinear_coherent_state_summary() {
    let o = quon(&["cs", "nonlinear", "--q", "0.5", "--z-re", "1", "--z-im", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    for key in ["z", "q", "M", "norm", "eigen_residual", "dx", "dp", "product", "product_closed_form"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!((field(&v, "product") - 0.25).abs() <= 1e-10);
    assert_eq!(field(&v, "product_closed_form"), 0.25);
    assert!(field(&v, "eigen_residual") <= 1e-8);
}

#[test]
fn gk_state_summary() {
    let o = quon(&["cs", "gk", "--q", "0.5", "--J", "1.2", "--gamma", "0.4", "--rho0", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((field(&v, "action_expectation") - 1.2).abs() <= 1e-8);
    assert!(field(&v, "stability_residual") <= 1e-12);
    assert!(field(&v, "bgamma_residual") <= 1e-8);
    // 0.9 R = 1.8 at q = 0.5.
    let o = quon(&["cs", "gk", "--q", "0.5", "--J", "1.9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn intertwine_summary() {
    let o = quon(&["intertwine", "--q", "0.5", "--dim", "32", "--l", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(field(&v, "closed_form_residual") <= 1e-10);
    assert_eq!(v["spectral_inclusion"], Value::Bool(true));
    let missing: Vec<f64> = v["missing_eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.to_string().parse().unwrap())
        .collect();
    assert_eq!(missing, vec![0.0, 1.0]);
    for key in ["eq55b", "eq56", "eq57"] {
        assert!(field(&v["identity_residuals"], key) <= 1e-10, "{key}");
    }
    let o = quon(&["intertwine", "--q", "0", "--dim", "16", "--l", "1"]);
    assert_eq!(json(&o)["identity_residuals"]["eq55b"], Value::Null);
    let o = quon(&["intertwine", "--q", "-0.5", "--dim", "16", "--l", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn moments_outputs() {
    let dir = std::env::temp_dir().join(format!("quon-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let summary = dir.join("summary.json");
    let o = quon(&["moments", "--q", "0.5", "--m", "3", "--summary", summary.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(r.headers().unwrap(), vec!["i", "node", "weight"]);
    assert_eq!(r.records().count(), 3);
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(s["passed"], Value::Bool(true));
    assert!(field(&s, "resolution_deviation") <= 1e-6);
    std::fs::remove_dir_all(&dir).unwrap();

    let o = quon(&["moments", "--q", "0.7", "--m", "4", "--family", "gk", "--rho0", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 4);
    assert_eq!(v["summary"]["family"], Value::String("gk".into()));

    assert_eq!(quon(&["moments", "--q", "0.5", "--m", "9"]).status.code(), Some(2));
    assert_eq!(quon(&["moments", "--q", "0.5", "--m", "3", "--m-proj", "3"]).status.code(), Some(2));
}

#[test]
fn wave_csv() {
    let o = quon(&["wave", "--q", "0.5", "--n", "1", "--grid-min", "-2", "--grid-max", "2", "--points", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,re,im,abs2"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    for r in &rows {
        assert!((r[1] * r[1] + r[2] * r[2] - r[3]).abs() <= 1e-15);
    }
    assert_eq!(quon(&["wave", "--q", "1", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let o = quon(&["verify", "--q", "1", "--dim", "32"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| !l.starts_with("FAIL")));
    assert_eq!(quon(&["verify", "--q", "0.5", "--dim", "24"]).status.code(), Some(0));
    assert_eq!(quon(&["verify", "--q", "1.5", "--dim", "8"]).status.code(), Some(2));
}

#[test]
fn invalid_parameters_exit_2() {
    let o = quon(&["cs", "nonlinear", "--q", "0.5", "--z-re", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("0.999/(1-q)"));
    assert_eq!(quon(&["spectrum", "--q", "0.5", "--dim", "1"]).status.code(), Some(2));
    assert_eq!(quon(&["spectrum"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["cs", "gk", "--q", "0.3", "--J", "0.8", "--gamma", "1.1"],
        vec!["moments", "--q", "0.4", "--m", "5", "--format", "json"],
        vec!["wave", "--q", "0.6", "--n", "3"],
    ] {
        assert_eq!(quon(&args).stdout, quon(&args).stdout);
    }
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("quon-out-{}.csv", std::process::id()));
    let o = quon(&["spectrum", "--q", "0.5", "--dim", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,eps\n"));
    std::fs::remove_file(&path).unwrap();
}
