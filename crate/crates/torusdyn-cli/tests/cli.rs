//! End-to-end checks of the binary: worked-example outputs, byte
//! reproducibility, and the exit-code contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_torusdyn"))
}

fn write_config(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

const CONES_EXAMPLE: &str = r#"{
  "functional_set": {
    "dim": 3,
    "functionals": [
      ["0", "0", "1"],
      ["0", "0", "-1"],
      ["-1", "-1", "0"],
      ["1", "-1", "0"],
      ["0", "1", "0"]
    ]
  },
  "schedule": [
    {"constant": "0"},
    {"diverges": true},
    {"constant": "-1"},
    {"constant": "-1"},
    {"constant": "-1"}
  ]
}"#;

const RATIO_EXAMPLE: &str = r#"{
  "functional_set": {
    "dim": 3,
    "functionals": [
      ["0", "0", "1"],
      ["0", "0", "-1"],
      ["-1", "-1", "0"],
      ["1", "-1", "0"],
      ["0", "1", "0"]
    ]
  },
  "schedule": [
    {"constant": "0"},
    {"diverges": true},
    {"constant": "-1"},
    {"constant": "-1"},
    {"constant": "-1"}
  ],
  "offsets_bounded": {"0": "0", "2": "-1", "3": "-1", "4": "-1"},
  "schedule_inf": {"1": {"base": "0", "slope": "1"}},
  "omega": {"rule": "sqrt", "denom": 1000},
  "n_list": [100, 1000, 10000]
}"#;

#[test]
fn cones_decompose_reproduces_the_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "cones.json", CONES_EXAMPLE);
    let out = run(&["cones", "decompose", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["phi_inf"], serde_json::json!([1]));
    assert_eq!(v["result"]["phi_1"], serde_json::json!([0]));
    assert_eq!(v["result"]["phi_0"], serde_json::json!([2, 3, 4]));
    assert_eq!(
        v["result"]["w_basis"],
        serde_json::json!([["0/1", "0/1", "1/1"]])
    );
    // the envelope embeds the resolved config
    assert_eq!(v["config"]["functional_set"]["dim"], 3);
}

#[test]
fn poly_ratio_csv_matches_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "ratio.json", RATIO_EXAMPLE);
    let out = run(&[
        "poly",
        "ratio",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,omega,vol_split,vol_full,ratio");
    assert!(lines[1].starts_with("100,10/1,320/1,400/1,8.0"));
    assert!(lines[2].starts_with("1000,31623/1000,468377/125,4000/1,9.36753"));
    assert!(lines[3].starts_with("10000,100/1,39200/1,40000/1,9.79"));
    assert!(text.ends_with('\n'));
    assert!(!text.contains('\r'), "LF line endings only");
}

#[test]
fn count_sp_is_byte_reproducible() {
    let args = [
        "count", "sp", "--N", "1", "--d", "1", "--R", "128", "--seed", "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "identical bytes for identical config");
}

#[test]
fn ballratio_is_stable_across_thread_counts() {
    let base = [
        "count",
        "ballratio",
        "--N",
        "2",
        "--d",
        "1,2",
        "--R",
        "1000",
        "--epsilon",
        "0.1",
        "--samples",
        "200000",
        "--seed",
        "11",
    ];
    let mut one = base.to_vec();
    one.extend(["--threads", "1"]);
    let mut eight = base.to_vec();
    eight.extend(["--threads", "8"]);
    let a = run(&one);
    let b = run(&eight);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn monte_carlo_without_seed_is_a_schema_violation() {
    let out = run(&[
        "count",
        "ballratio",
        "--N",
        "2",
        "--d",
        "1,2",
        "--R",
        "1000",
        "--epsilon",
        "0.1",
        "--samples",
        "200000",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_config_is_a_schema_violation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "bad.json", "{\"polytope\": 5}");
    let out = run(&["poly", "volume", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unbounded_polytope_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "halfline.json",
        r#"{"polytope": {"dim": 1, "constraints": [[["1"], "0"]]}}"#,
    );
    let out = run(&["poly", "volume", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn containment_violation_exits_four() {
    // raising by a negative omega pushes the split outside the full
    // polytope, which the experiment must refuse
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "bad_ratio.json",
        &RATIO_EXAMPLE.replace(
            r#"{"rule": "sqrt", "denom": 1000}"#,
            r#"{"rule": "const", "value": "-5"}"#,
        ),
    );
    let out = run(&["poly", "ratio", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn csv_rejected_where_not_tabular() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "cones.json", CONES_EXAMPLE);
    let out = run(&[
        "cones",
        "decompose",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn svp_and_mahler_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "svp.json", r#"{"matrix": [[2.0, 0.0], [0.0, 0.5]]}"#);
    let out = run(&["lattice", "svp", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["min_sq"], "1/4");

    let cfg = write_config(
        &dir,
        "mahler.json",
        r#"{"matrix": [[2.0, 0.0], [0.0, 0.5]], "eta": 0.6}"#,
    );
    let out = run(&["lattice", "mahler", "--config", cfg.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["member"], false);

    let cfg = write_config(
        &dir,
        "omega.json",
        r#"{"rank": 1, "epsilon": 1.0, "blocks": [
            {"character": [1], "matrix": [[1.0]]},
            {"character": [-1], "matrix": [[1.0]]}
        ]}"#,
    );
    let out = run(&["lattice", "omega", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // identity blocks at epsilon 1: constraints t >= 0 and -t >= 0
    assert_eq!(
        v["result"]["constraints"],
        serde_json::json!([[["1/1"], "0/1"], [["-1/1"], "0/1"]])
    );
}

#[test]
fn output_file_writing_works() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("result.json");
    let out = run(&[
        "count",
        "constants",
        "--N",
        "1",
        "--d",
        "1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    // C2 = 1 at N = 1, d = 1; C1 = 6/pi; both at 12-digit accuracy
    let c2: f64 = v["result"]["C2"].as_str().unwrap().parse().unwrap();
    assert!((c2 - 1.0).abs() < 1e-12);
    let c1: f64 = v["result"]["C1"].as_str().unwrap().parse().unwrap();
    assert!((c1 - 6.0 / std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(v["result"]["jacobian"], "2");
}

#[test]
fn weights_commands_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "wedge.json",
        r#"{"a": {"rank": 1, "weights": [[[1], 1], [[-1], 1]]}}"#,
    );
    let out = run(&["weights", "wedge", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // powers 0..2 of the rank-one standard system: {0 x2, 1, -1}
    assert_eq!(
        v["result"]["weights"],
        serde_json::json!([[[-1], 1], [[0], 2], [[1], 1]])
    );

    let cfg = write_config(
        &dir,
        "ext.json",
        r#"{"a": {"rank": 2, "weights": [[[1, 0], 1], [[0, 1], 1], [[0, -1], 1], [[-1, 0], 1]]}, "k": 2}"#,
    );
    let out = run(&["weights", "ext", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["weights"][2], serde_json::json!([[0, 0], 2]));
}

#[test]
fn dyn_osc_and_wrap_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "osc.json",
        r#"{"bump": {"x0": 0.0, "x1": 1.0, "p": 2, "q": 1}, "m": 1, "n_list": [0, 10, 1000]}"#,
    );
    let out = run(&[
        "dyn",
        "osc",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let abs: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert!(
        (abs[0] - 1.0 / 12.0).abs() < 1e-8,
        "n = 0 gives the plain mass"
    );
    assert!(abs[2] < abs[1], "decay in n");

    let cfg = write_config(
        &dir,
        "wrap.json",
        r#"{"n_list": [0, 10000], "window": [0.0, 1.0], "num_points": 4000,
            "modes": [{"m": 1, "bump": {"x0": 0.0, "x1": 1.0, "p": 2, "q": 1}}]}"#,
    );
    let out = run(&[
        "dyn",
        "wrap",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let d: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(d[1] < d[0], "wrapping faster equidistributes better");
}

#[test]
fn dyn_shear_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "shear.json",
        r#"{"n": 2, "v": [1.0], "lambda": 1.0, "k_list": [100, 1000, 10000]}"#,
    );
    let out = run(&[
        "dyn",
        "shear",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let devs: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(devs[0] > devs[1] && devs[1] > devs[2]);
    assert!(devs[2] < 1e-3);
}
