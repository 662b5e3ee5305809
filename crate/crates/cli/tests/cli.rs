use std::process::{Command, Output};

use serde_json::Value;

const PI_3: &str = "1.0471975512";
const PI_2: &str = "1.5707963268";

fn lgwork(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgwork"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = lgwork(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn stdout(args: &[&str]) -> String {
    let out = lgwork(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn eval_second_moment_at_sixty_degrees() {
    let v = json(&[
        "eval",
        "--scheme",
        "tpm",
        "--k",
        "2",
        "--theta10",
        PI_3,
        "--theta21",
        PI_3,
        "--epsilon",
        "1",
        "--beta",
        "1",
    ]);
    assert!((v["value"].as_f64().unwrap() + 0.25).abs() < 1e-9);
    assert_eq!(v["violated"], true);
}

#[test]
fn eval_mh_imaginary_part_vanishes() {
    let v = json(&[
        "eval",
        "--scheme",
        "mh",
        "--lambda",
        PI_2,
        "--theta10",
        PI_2,
        "--theta21",
        PI_2,
        "--epsilon",
        "1",
        "--beta",
        "5",
    ]);
    assert!(v["value"]["im"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(v["im_violated"], false);
}

#[test]
fn eval_identity_first_moment() {
    let v = json(&[
        "eval",
        "--scheme",
        "tpm",
        "--k",
        "1",
        "--theta10",
        "0",
        "--theta21",
        "0",
        "--beta",
        "2",
    ]);
    assert_eq!(v["value"].as_f64().unwrap(), 0.0);
    assert_eq!(v["violated"], false);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["eval", "--k", "2", "--theta10", "4"],
        vec!["eval", "--k", "0"],
        vec!["eval", "--k", "2", "--beta", "-1"],
        vec!["eval"],
        vec!["eval", "--k", "2", "--scheme", "xyz"],
        vec!["maximize", "--objective", "bogus"],
        vec!["maximize", "--objective", "min-m-even", "--k", "3"],
        vec!["sweep", "--k", "2", "--theta10-range", "0:1:1"],
        vec!["sweep", "--k", "2", "--theta10-range", "0:1"],
        vec!["eval", "--k", "2", "--format", "csv"],
    ] {
        let out = lgwork(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unwritable_output_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("rows.csv");
    let out = lgwork(&[
        "sweep",
        "--k",
        "2",
        "--theta10-range",
        "0:1:2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_writes_file_with_expected_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let out = lgwork(&[
        "sweep",
        "--lambda",
        "1.0",
        "--theta10-range",
        "0:3.141592653589793:2",
        "--theta21-range",
        "0:3.141592653589793:2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("epsilon,beta,theta10,theta21,lambda,re,im,"));
}

#[test]
fn sweep_contains_three_halves_at_sixty_degrees() {
    let text = stdout(&[
        "sweep",
        "--lambda",
        "3.141592653589793",
        "--theta10-range",
        "0:3.141592653589793:4",
        "--theta21-range",
        "0:3.141592653589793:4",
    ]);
    let row = text
        .lines()
        .skip(1)
        .find(|l| {
            let f: Vec<f64> = l.split(',').take(4).map(|x| x.parse().unwrap()).collect();
            (f[2] - std::f64::consts::FRAC_PI_3).abs() < 1e-12
                && (f[3] - std::f64::consts::FRAC_PI_3).abs() < 1e-12
        })
        .unwrap();
    let re: f64 = row.split(',').nth(5).unwrap().parse().unwrap();
    assert!((re - 1.5).abs() < 1e-12);
}

#[test]
fn sweep_rows_match_eval() {
    let text = stdout(&[
        "sweep",
        "--scheme",
        "fcs",
        "--k",
        "3",
        "--theta10-range",
        "0.1:3:3",
        "--theta21-range",
        "0.2:2.5:3",
        "--beta-eps-range",
        "0:20:3",
        "--epsilon",
        "1.7",
    ]);
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let v = json(&[
            "eval",
            "--scheme",
            "fcs",
            "--k",
            "3",
            "--epsilon",
            f[0],
            "--beta",
            f[1],
            "--theta10",
            f[2],
            "--theta21",
            f[3],
        ]);
        let swept: f64 = f[5].parse().unwrap();
        assert!((v["value"].as_f64().unwrap() - swept).abs() < 1e-12);
    }
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec![
            "sweep",
            "--lambda-eps-range",
            "0:6:7",
            "--theta10-range",
            "0:3:5",
            "--scheme",
            "mh",
        ],
        vec![
            "charfn",
            "--scheme",
            "fcs",
            "--theta10",
            "0.4",
            "--theta21",
            "1.2",
            "--points",
            "9",
        ],
        vec![
            "oracle",
            "--theta10",
            PI_3,
            "--theta21",
            PI_3,
            "--beta",
            "0",
        ],
    ] {
        assert_eq!(lgwork(&args).stdout, lgwork(&args).stdout, "{args:?}");
    }
}

#[test]
fn maximize_examples() {
    let v = json(&[
        "maximize",
        "--objective",
        "min-m-even",
        "--k",
        "2",
        "--scheme",
        "tpm",
    ]);
    assert!((v["value"].as_f64().unwrap() + 0.25).abs() < 1e-6);
    assert!((v["point"]["theta10"].as_f64().unwrap() - std::f64::consts::FRAC_PI_3).abs() < 1e-4);
    assert!(v["value"].as_f64().unwrap() <= v["grid_value"].as_f64().unwrap());

    let half_tanh = 0.5 * 2.5f64.tanh();
    let v = json(&[
        "maximize",
        "--objective",
        "max-abs-im-l",
        "--lambda",
        PI_2,
        "--beta",
        "5",
    ]);
    assert!((v["value"].as_f64().unwrap() - half_tanh).abs() < 1e-6);

    let v = json(&[
        "maximize",
        "--objective",
        "max-abs-im-l",
        "--lambda",
        "3.141592653589793",
        "--beta",
        "5",
        "--scheme",
        "fcs",
    ]);
    assert!((v["value"].as_f64().unwrap() - 2.5f64.tanh()).abs() < 1e-6);
}

#[test]
fn oracle_examples() {
    let v = json(&["oracle", "--theta10", "0", "--theta21", "0"]);
    assert_eq!(v["feasibility"]["verdict"], "Feasible");

    let v = json(&[
        "oracle",
        "--theta10",
        PI_3,
        "--theta21",
        PI_3,
        "--beta",
        "0",
    ]);
    assert_eq!(v["feasibility"]["verdict"], "Infeasible");
    assert!(v["feasibility"]["phase1_objective"].as_f64().unwrap() > 1e-3);

    let v = json(&[
        "oracle",
        "--scheme",
        "mh",
        "--theta10",
        PI_2,
        "--theta21",
        "0.7853981634",
        "--beta",
        "5",
    ]);
    assert!(["01", "12", "02"]
        .iter()
        .any(|iv| v["negativity"][iv] == true));

    let v = json(&[
        "oracle",
        "--scheme",
        "fcs",
        "--theta10",
        "0.8",
        "--theta21",
        "0.9",
        "--beta",
        "2",
    ]);
    assert!(v["fcs_half_quantum_weight"]["12"].as_f64().unwrap().abs() > 1e-3);
}

#[test]
fn protocol_file_with_axes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(
        &path,
        r#"{"epsilon": 1.0, "beta": 1.0, "a0": [0, 0, 1], "a1": [0.5, 0.8660254037844386, 0], "a2": [0, 1, 0]}"#,
    )
    .unwrap();
    let v = json(&["eval", "--k", "2", "--protocol", path.to_str().unwrap()]);
    assert_eq!(v["params"]["axes"].as_array().unwrap().len(), 3);

    std::fs::write(&path, r#"{"epsilon": 1.0, "beta": 1.0, "theta10": 1.0}"#).unwrap();
    assert_eq!(
        lgwork(&["eval", "--k", "2", "--protocol", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn charfn_csv_layout() {
    let text = stdout(&[
        "charfn",
        "--interval",
        "12",
        "--lambda-min",
        "-1",
        "--lambda-max",
        "1",
        "--points",
        "3",
    ]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,re,im,scheme,interval");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("-1.0000000000000000e0,"));
    assert!(lines[2].ends_with(",tpm,12"));
}
