use std::io::Write;

use zitterlab::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("zitterlab").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn roots_at_rest_prints_two_rows() {
    let (code, out, _) = call(&["roots"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "re,im,residual");
    assert_eq!(lines.len(), 3, "{out}");
    let re: Vec<f64> = lines[1..].iter().map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(re[0], 0.0);
    assert!((re[1] - 1.7932821329007607).abs() < 1e-12);
}

#[test]
fn roots_accepts_negative_region() {
    let (code, out, _) = call(&["roots", "--beta", "0.5", "--region", "-2,3,-1,1"]);
    assert_eq!(code, 0);
    assert!(out.lines().count() >= 3);
    // The equation depends on β through 1 − β²; only β in [0, 1) is taken.
    let (code, _, _) = call(&["roots", "--beta", "-0.5"]);
    assert_eq!(code, 1);
}

#[test]
fn help_and_usage_errors() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("simulate") && out.contains("report"));
    let (code, _, err) = call(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    let (code, _, _) = call(&["roots", "--region", "1,2,3"]);
    assert_eq!(code, 2);
}

#[test]
fn superluminal_beta_is_an_error() {
    let (code, _, err) = call(&["roots", "--beta", "1.0"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn series_verify_all_pass() {
    let (code, out, _) = call(&["series-verify"]);
    assert_eq!(code, 0);
    assert!(out.lines().count() > 30);
    assert!(out.lines().all(|l| l.starts_with("PASS ")), "{out}");
}

#[test]
fn report_filter_and_json_shape() {
    let (code, out, _) = call(&["report", "--only", "eq28"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 1);
    let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(v["check_id"], "eq28_uniform_invariance");
    assert_eq!(v["pass"], true);
    for key in ["paper_ref", "expected", "measured", "tolerance"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn constants_file_changes_physical_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.txt");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# larger dumbbell").unwrap();
    writeln!(f, "d_override = 1e-15").unwrap();
    drop(f);
    let p = path.to_str().unwrap();
    let (code, out, _) = call(&["--constants", p, "report", "--only", "model_dumbbell"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["pass"], false);
    assert!((v["measured"].as_f64().unwrap() - 5e-16).abs() < 1e-30);

    // The same file through the environment. Only this test sets it.
    std::env::set_var(zitterlab::model::CONSTANTS_ENV, p);
    let (_, env_out, _) = call(&["report", "--only", "model_dumbbell"]);
    std::env::remove_var(zitterlab::model::CONSTANTS_ENV);
    assert_eq!(env_out, out);

    std::fs::write(&path, "alpha = fast\n").unwrap();
    let (code, _, err) = call(&["--constants", p, "potential"]);
    assert_eq!(code, 1);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn potential_json_and_duffing_csv() {
    let (code, out, _) = call(&["potential", "--beta", "0.6", "--betadot", "0.1", "--series", "5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let u = v["U"].as_f64().unwrap();
    let q = v["Q"].as_f64().unwrap();
    let g = v["gamma"].as_f64().unwrap();
    assert!((u - (g + q)).abs() < 1e-12);
    assert_eq!(v["partial_sums"].as_array().unwrap().len(), 5);

    let (code, out, _) = call(&["potential", "--duffing", "--samples", "5", "--range", "-1,1"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,Qc,force");
    assert_eq!(lines.len(), 6);
}

#[test]
fn render_writes_identical_ppm() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.ppm");
    let b = dir.path().join("b.ppm");
    for p in [&a, &b] {
        let (code, _, _) = call(&["render", "--size", "40x80", "--out", p.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    let bytes = std::fs::read(&a).unwrap();
    assert!(bytes.starts_with(b"P6\n40 80\n255\n"));
    assert_eq!(bytes.len(), "P6\n40 80\n255\n".len() + 40 * 80 * 3);
    assert_eq!(bytes, std::fs::read(&b).unwrap());
}

#[test]
fn simulate_truncated_csv() {
    let (code, out, _) = call(&["simulate", "--integrator", "truncated", "--tend", "1", "--dt", "0.01"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,x,beta,beta_dot,residual");
    assert_eq!(lines.len(), 102);
    assert!(lines[1].ends_with(','));
}

#[test]
fn simulate_uniform_and_report_records() {
    let (code, out, _) = call(&["simulate", "--seed", "uniform", "--beta", "0.5", "--amp", "0", "--tend", "3", "--report"]);
    assert_eq!(code, 0);
    let records: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records[0]["record"], "run");
    assert_eq!(records[0]["status"], "completed");
    let kinds: Vec<&str> = records.iter().map(|r| r["record"].as_str().unwrap()).collect();
    for k in ["growth_rate", "saturation_amplitude", "peak_frequencies", "max_residual"] {
        assert!(kinds.contains(&k), "{kinds:?}");
    }
}

#[test]
fn simulate_breakdown_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let (code, _, err) =
        call(&["simulate", "--seed", "mode_kick", "--tend", "8", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("output stops at"), "{err}");
    let text = std::fs::read_to_string(&path).unwrap();
    let last_t: f64 = text.lines().last().unwrap().split(',').next().unwrap().parse().unwrap();
    assert!(last_t > 3.0 && last_t < 8.0, "{last_t}");
}

#[test]
fn simulate_from_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("h.csv");
    let mut s = String::from("t,x,beta,beta_dot\n");
    for i in 0..=3000 {
        let t = -3.0 + i as f64 * 1e-3;
        s += &format!("{t},{},0.3,0\n", 0.3 * t);
    }
    std::fs::write(&table, s).unwrap();
    let (code, out, err) = call(&["simulate", "--seed", "table", "--table", table.to_str().unwrap(), "--tend", "2"]);
    assert_eq!(code, 0, "{err}");
    let last: Vec<f64> = out.lines().last().unwrap().split(',').take(3).map(|v| v.parse().unwrap()).collect();
    assert!((last[0] - 2.0).abs() < 1e-9);
    // Rounding in the tabulated t and x grows under propagation.
    assert!((last[2] - 0.3).abs() < 1e-8);

    let (code, _, err) = call(&["simulate", "--seed", "table", "--tend", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("--table"));
}
