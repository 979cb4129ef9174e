use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclofun"))
        .args(args)
        .env_remove("CYCLOFUN_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn coeff(series: &Value, degree: usize) -> f64 {
    series["coeffs"][degree][0].as_f64().unwrap()
}

#[test]
fn decompose_exp_order_two_gives_cosh_and_sinh() {
    let o = run(&["decompose", "--builtin", "exp", "--n", "2", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let comps = v.as_array().unwrap();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0]["label"], "h_0");
    assert_eq!(coeff(&comps[0], 2), 0.5);
    assert_eq!(coeff(&comps[0], 3), 0.0);
    assert_eq!(coeff(&comps[1], 3), 1.0 / 6.0);
}

#[test]
fn decompose_alpha_zero_gives_monomials() {
    let o = run(&["decompose", "--builtin", "exp", "--n", "3", "--alpha", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    for (s, want) in [1.0, 1.0, 0.5].into_iter().enumerate() {
        let comp = &v[s];
        let nonzero: Vec<usize> = (0..comp["coeffs"].as_array().unwrap().len())
            .filter(|&d| coeff(comp, d) != 0.0)
            .collect();
        assert_eq!(nonzero, vec![s]);
        assert_eq!(coeff(comp, s), want);
    }
}

#[test]
fn decompose_reads_series_files() {
    let dir = std::env::temp_dir().join(format!("cyclofun-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("laurent.json");
    std::fs::write(
        &good,
        r#"{"min_deg": -1, "coeffs": [[1, 0], [0, 0], [1, 0]]}"#,
    )
    .unwrap();
    let o = run(&["decompose", "--input", good.to_str().unwrap(), "--n", "2"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&o);
    assert_eq!(v[1]["min_deg"], -1);
    assert_eq!(v[1]["coeffs"][0][0], 1.0);
    assert_eq!(v[1]["coeffs"][2][0], 1.0);

    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"min_deg\": 0, \"coeffs\": [[1, 0],").unwrap();
    let o = run(&["decompose", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed"));
    assert!(o.stdout.is_empty());
}

#[test]
fn decompose_expq_needs_q() {
    assert_eq!(
        run(&["decompose", "--builtin", "expq"]).status.code(),
        Some(2)
    );
    let o = run(&["decompose", "--builtin", "expq", "--q", "0.5", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    // 1/2_q! with 2_q = 1.5
    assert!((coeff(&v[0], 2) - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn eval_values_and_domain_guard() {
    let o = run(&["eval", "--n", "2", "--alpha", "1", "--s", "0", "--z", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let parts: Vec<f64> = text
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert!((parts[0] - 1f64.cosh()).abs() < 1e-12);
    assert_eq!(parts[1], 0.0);

    let o = run(&["eval", "--n", "3", "--alpha", "1", "--s", "0", "--z", "0"]);
    assert_eq!(stdout(&o), "1.0000000000000000e0 0.0000000000000000e0\n");

    let o = run(&["eval", "--n", "3", "--z", "10"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("domain"));
}

#[test]
fn eval_json_reports_cross_check() {
    let o = run(&[
        "eval", "--n", "3", "--s", "1", "--z", "0.3+0.4i", "--method", "closed", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["method"], "closed");
    assert!(v["cross_check_residual"].as_f64().unwrap() < 1e-11);
    assert_eq!(v["z"][1], 0.4);
}

#[test]
fn complex_arguments_in_all_forms() {
    let forms = ["0.3+0.4i", "0.3,0.4"];
    let outs: Vec<String> = forms
        .iter()
        .map(|z| stdout(&run(&["eval", "--n", "2", "--alpha", "-1", "--z", z])))
        .collect();
    assert_eq!(outs[0], outs[1]);
    let o = run(&["eval", "--n", "2", "--alpha", "-1+0i", "--z", "0.4i"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["eval", "--z", "abc"]).status.code(), Some(2));
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let args = [
        "verify", "--suite", "all", "--n", "3", "--alpha", "1", "--seed", "7",
    ];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let reports = json(&a);
    let reports = reports.as_array().unwrap();
    assert!((35..=60).contains(&reports.len()), "{}", reports.len());
    assert!(reports.iter().all(|r| r["pass"] == true));
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    // field order is fixed in the raw output
    let text = stdout(&a);
    let first = &text[..text.find("\n  },").unwrap()];
    let pos: Vec<usize> = [
        "\"identity\"",
        "\"params\"",
        "\"residual\"",
        "\"tolerance\"",
        "\"pass\"",
    ]
    .iter()
    .map(|k| first.find(k).unwrap())
    .collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{pos:?}");
}

#[test]
fn unattainable_tolerance_fails() {
    let o = run(&[
        "verify", "--suite", "demoivre", "--n", "3", "--alpha", "1+0i", "--tol", "1e-30",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let via_env = Command::new(env!("CARGO_BIN_EXE_cyclofun"))
        .args(["verify", "--suite", "demoivre"])
        .env("CYCLOFUN_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(via_env.status.code(), Some(1));
    assert_eq!(run(&["verify", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn circulant_suite_reports_geometric_determinant() {
    let o = run(&["verify", "--suite", "circulant", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let reports = json(&o);
    let geo = reports
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["identity"] == "geometric_determinant")
        .expect("geometric determinant report");
    let direct = geo["params"]["direct"][0].as_f64().unwrap();
    assert!((direct - 1.027_749_229_188_078).abs() < 1e-9);
    let lower = reports
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["identity"] == "non_exp_group_law_breaks")
        .unwrap();
    assert_eq!(lower["bound"], "lower");
}

#[test]
fn verify_csv_columns() {
    let o = run(&["verify", "--suite", "qpsi", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "identity,n,alpha_re,alpha_im,residual,pass"
    );
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first.len(), 6);
    assert_eq!(first[5], "true");
}

#[test]
fn det_examples() {
    let o = run(&[
        "det",
        "--component",
        "1",
        "--component",
        "0",
        "--component",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "spectral 1.0000000000000000e0 0.0000000000000000e0\n\
         direct 1.0000000000000000e0 0.0000000000000000e0\n\
         discrepancy 0.0000000000000000e0\n"
    );
    for (builtin, z, want) in [
        ("exp", "0.7", 1.0),
        ("geometric", "0.3", 1.0 / (1.0 - 0.027)),
    ] {
        let o = run(&[
            "det",
            "--builtin",
            builtin,
            "--n",
            "3",
            "--z",
            z,
            "--format",
            "json",
        ]);
        assert_eq!(o.status.code(), Some(0));
        let v = json(&o);
        for key in ["spectral", "direct"] {
            assert!((v[key][0].as_f64().unwrap() - want).abs() < 1e-9, "{key}");
        }
        assert!(v["discrepancy"].as_f64().unwrap() < 1e-12);
    }
    assert_eq!(run(&["det", "--component", "x"]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("cyclofun-out-{}.json", std::process::id()));
    let o = run(&[
        "verify",
        "--suite",
        "circulant",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v.as_array().unwrap().len() > 5);
    std::fs::remove_file(path).ok();
}
