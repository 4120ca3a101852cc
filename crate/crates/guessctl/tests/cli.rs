use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn guessctl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_guessctl"))
        .args(args)
        .output()
        .expect("guessctl runs")
}

fn stdout(args: &[&str]) -> String {
    let out = guessctl(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    guessctl(args).status.code().unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn analyze_reports_all_sources() {
    let report: Value =
        serde_json::from_str(&stdout(&["analyze", "--p", "0.8,0.2", "--epsilon", "0.1"])).unwrap();
    let src = &report["sources"];
    let get = |kind: &str, key: &str| src[kind][key].as_f64().unwrap();
    assert_eq!(get("uniform_typical", "e_G"), 0.585370571);
    assert_eq!(get("conditioned", "e_G"), 0.570338719);
    assert_eq!(get("unconditioned", "e_G"), 0.587786665);
    assert_eq!(get("conditioned", "g"), -0.400402424);
    assert_eq!(report["h_plus"].as_f64().unwrap(), 0.382308389);
    assert_eq!(report["clamped_to_log_m"], Value::Bool(false));
    assert!(report["regime_indicator_A"].as_f64().unwrap() > 0.0);
}

#[test]
fn analyze_uniform_source_is_clamped() {
    let report: Value =
        serde_json::from_str(&stdout(&["analyze", "--p", "0.5,0.5", "--epsilon", "0.05"])).unwrap();
    assert_eq!(report["clamped_to_log_m"], Value::Bool(true));
    for kind in ["unconditioned", "conditioned", "uniform_typical"] {
        let e_g = report["sources"][kind]["e_G"].as_f64().unwrap();
        assert!((e_g - std::f64::consts::LN_2).abs() < 1e-9);
    }
}

#[test]
fn analyze_csv_flattens_keys() {
    let csv = stdout(&[
        "analyze",
        "--p",
        "0.8,0.2",
        "--epsilon",
        "0.1",
        "--format",
        "csv",
    ]);
    assert!(csv.starts_with("key,value\n"));
    assert!(csv.contains("\nsources.uniform_typical.g,-0.585370571\n"));
    assert!(csv.contains("\nl_minus.0,0.727865248\n"));
}

#[test]
fn inadmissible_epsilon_exits_1_with_interval() {
    let out = guessctl(&["analyze", "--p", "0.8,0.2", "--epsilon", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("epsilon inadmissible"), "{err}");
    assert!(err.contains("(0, 0.27725887"), "{err}");
}

#[test]
fn validation_failures_exit_1() {
    assert_eq!(code(&["analyze", "--p", "0.8,0.3", "--epsilon", "0.1"]), 1);
    assert_eq!(code(&["analyze", "--p", "0.8,0.2", "--epsilon", "-0.1"]), 1);
    assert_eq!(code(&["analyze", "--p", "0.8,0.2"]), 1);
    assert_eq!(
        code(&[
            "fig2",
            "--p",
            "0.8,0.2",
            "--epsilon",
            "0.1",
            "--x-points",
            "1"
        ]),
        1
    );
    assert_eq!(code(&["no-such-command"]), 1);
    assert_eq!(
        code(&["census", "--p", "0.8,0.2", "--epsilon", "0.1", "--k", "0"]),
        1
    );
}

#[test]
fn probabilities_are_renormalised_within_tolerance() {
    let a = stdout(&["analyze", "--p", "0.8,0.2000005", "--epsilon", "0.1"]);
    let b = stdout(&["analyze", "--p", "0.8,0.2", "--epsilon", "0.1"]);
    let h = |s: &str| {
        serde_json::from_str::<Value>(s).unwrap()["entropy"]
            .as_f64()
            .unwrap()
    };
    assert!((h(&a) - h(&b)).abs() < 1e-6);
}

#[test]
fn resource_guards_exit_2() {
    assert_eq!(
        code(&[
            "census",
            "--p",
            "0.6,0.3,0.1",
            "--epsilon",
            "0.1",
            "--k",
            "100000"
        ]),
        2
    );
    assert_eq!(
        code(&[
            "census",
            "--p",
            "0.8,0.2",
            "--epsilon",
            "0.1",
            "--k",
            "50",
            "--max-types",
            "10"
        ]),
        2
    );
    assert_eq!(
        code(&[
            "exact-compare",
            "--p",
            "0.8,0.2",
            "--k",
            "10,12",
            "--crosscheck",
            "--max-words",
            "1024"
        ]),
        2
    );
}

#[test]
fn fig1_default_grid() {
    let csv = stdout(&["fig1", "--epsilon", "0.1"]);
    let rows = rows(&csv);
    assert_eq!(rows.len(), 19);
    assert_eq!(rows[0][0], "0.525000000");
    assert_eq!(rows[18][0], "0.975000000");
    let at_08 = rows.iter().find(|r| r[0] == "0.800000000").unwrap();
    assert_eq!(
        &at_08[1..4],
        ["0.0849681477", "0.0150318523", "-0.00241609363"]
    );
    for r in &rows {
        if r[5] == "true" {
            let (top, middle, bottom) = (num(&r[1]), num(&r[2]), num(&r[3]));
            assert!(top >= middle && middle >= bottom && middle > 0.0, "{r:?}");
        } else {
            assert!(r[1..5].iter().all(|f| f.is_empty()));
        }
    }
}

#[test]
fn fig1_explicit_grid_and_json() {
    let out: Value = serde_json::from_str(&stdout(&[
        "fig1",
        "--epsilon",
        "0.1",
        "--p0-grid",
        "0.7,0.8",
        "--format",
        "json",
    ]))
    .unwrap();
    let rows = out["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["middle"].as_f64().unwrap(), 0.0150318523);
}

#[test]
fn fig2_default_x_grid() {
    let csv = stdout(&["fig2", "--p", "0.8,0.2", "--epsilon", "0.1"]);
    let rows = rows(&csv);
    assert_eq!(rows.len(), 400);
    assert_eq!(
        rows[0][1..],
        ["-0.223143551", "-0.400402424", "-0.585370571"]
    );
    assert_eq!(rows[399][0], "0.693147181");
    assert_eq!(rows[399][3], "inf");
    assert!(csv.contains("# gamma_uniform_typical=0.585370571\n"));
    // Uniform curve is flat until h(l-) and infinite beyond.
    for r in &rows {
        let x = num(&r[0]);
        if x <= 0.585370571 {
            assert_eq!(r[3], "-0.585370571");
        } else {
            assert_eq!(r[3], "inf");
        }
    }
}

#[test]
fn fig2_unconditioned_vanishes_at_entropy() {
    let csv = stdout(&[
        "fig2",
        "--p",
        "0.8,0.2",
        "--epsilon",
        "0.1",
        "--x-points",
        "2",
        "--format",
        "json",
    ]);
    let out: Value = serde_json::from_str(&csv).unwrap();
    assert_eq!(out["rows"].as_array().unwrap().len(), 2);
    assert_eq!(
        out["sources"]["conditioned"]["gamma"].as_f64().unwrap(),
        0.382308389
    );
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["fig1", "--epsilon", "0.1"][..],
        &["fig2", "--p", "0.6,0.3,0.1", "--epsilon", "0.1"][..],
        &["analyze", "--p", "0.6,0.3,0.1", "--epsilon", "0.1"][..],
        &["exact-compare", "--p", "0.8,0.2", "--k", "4,8"][..],
        &[
            "census",
            "--p",
            "0.8,0.2",
            "--epsilon",
            "0.1",
            "--k",
            "5,10",
            "--format",
            "json",
        ][..],
    ] {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.csv");
    let printed = stdout(&["fig1", "--epsilon", "0.1"]);
    let out = guessctl(&["fig1", "--epsilon", "0.1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap(), printed);
}

#[test]
fn exact_compare_unconditioned_trend() {
    let out = guessctl(&[
        "exact-compare",
        "--p",
        "0.8,0.2",
        "--k",
        "4,8,16",
        "--alpha",
        "1",
        "--crosscheck",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.contains("# trend scgf(1): pass\n"));
    assert!(csv.contains("# word-by-word crosscheck agrees at k=4;8;16\n"));
    let gaps: Vec<f64> = rows(&csv)
        .iter()
        .filter(|r| r[0] == "scgf")
        .map(|r| num(&r[5]))
        .collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2]);
}

#[test]
fn exact_compare_uniform_single_k() {
    let csv = stdout(&[
        "exact-compare",
        "--kind",
        "uniform-typical",
        "--p",
        "0.8,0.2",
        "--epsilon",
        "0.1",
        "--k",
        "5",
    ]);
    let r = rows(&csv);
    let scgf = r.iter().find(|r| r[0] == "scgf").unwrap();
    assert_eq!(scgf[3], "0.219722458");
    assert_eq!(scgf[4], "0.585370571");
    assert!(csv.contains("# trend scgf(1): insufficient\n"));
}

#[test]
fn exact_compare_fair_coin_gap_bound() {
    let csv = stdout(&["exact-compare", "--p", "0.5,0.5", "--k", "3,7,12"]);
    for r in rows(&csv).iter().filter(|r| r[0] == "scgf") {
        let k = num(&r[2]);
        assert!(num(&r[5]) <= 2f64.ln() / k);
    }
}

#[test]
fn exact_compare_trend_failure_exits_3() {
    let out = guessctl(&[
        "exact-compare",
        "--kind",
        "conditioned",
        "--p",
        "0.8,0.2",
        "--epsilon",
        "0.1",
        "--k",
        "6,10,14",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.contains("# trend g: fail\n"));
}

#[test]
fn exact_compare_flags_empty_typical_sets() {
    let out = guessctl(&[
        "exact-compare",
        "--kind",
        "we",
        "--p",
        "0.8,0.2",
        "--epsilon",
        "0.1",
        "--k",
        "2,50,200",
    ]);
    let csv = String::from_utf8(out.stdout).unwrap();
    let r = rows(&csv);
    let empty: Vec<_> = r.iter().filter(|r| r[6] == "empty_typical_set").collect();
    assert_eq!(empty.len(), 5);
    assert!(empty.iter().all(|r| r[2] == "2" && r[3].is_empty()));
}

#[test]
fn census_reports_smallest_nonempty_k() {
    let csv = stdout(&[
        "census",
        "--p",
        "0.8,0.2",
        "--epsilon",
        "0.1",
        "--k",
        "2,5,10",
    ]);
    assert!(csv.contains("# empty typical set at k=2; smallest nonempty k is 4\n"));
    let r = rows(&csv);
    assert_eq!(r[1][2], "5");
    assert_eq!(r[1][5], "0.409600000");
    assert_eq!(r[2][2], "45");
    assert_eq!(r[2][4], "0.380666249");
}

#[test]
fn census_json_lists_types() {
    let out: Value = serde_json::from_str(&stdout(&[
        "census",
        "--p",
        "0.8,0.2",
        "--epsilon",
        "0.1",
        "--k",
        "10",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(out["rows"][0]["types"], serde_json::json!([[8, 2]]));
    assert_eq!(out["rows"][0]["cardinality"], "45");
}
