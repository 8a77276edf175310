use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cwkb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cwkb"))
        .args(args)
        .output()
        .expect("cwkb runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn column(csv_text: &str, name: &str) -> Vec<String> {
    let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
    let idx = rdr
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == name)
        .expect("column present");
    rdr.records().map(|r| r.unwrap()[idx].to_string()).collect()
}

fn floats(csv_text: &str, name: &str) -> Vec<f64> {
    column(csv_text, name)
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

fn assert_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol * w.abs(), "{g} vs {w}");
    }
}

#[test]
fn well_levels_alpha_one() {
    let out = cwkb(&["well", "--alpha", "1", "--L", "1", "--n-max", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_close(
        &floats(&text, "closed_form"),
        &[4.934802, 19.739209, 44.413220],
        1e-6,
    );
    assert!(floats(&text, "rel_wkb_closed").iter().all(|&r| r <= 1e-9));
    assert!(floats(&text, "rel_oracle_closed")
        .iter()
        .all(|&r| r <= 1e-5));
}

#[test]
fn well_ground_state_alpha_half() {
    let out = cwkb(&["well", "--alpha", "0.5", "--L", "1", "--n-max", "1"]);
    assert!(out.status.success());
    assert_close(&floats(&stdout(&out), "wkb_solver"), &[1.233700], 1e-6);
}

#[test]
fn oscillator_levels() {
    let out = cwkb(&[
        "oscillator",
        "--alpha",
        "1",
        "--omega",
        "2",
        "--lambda",
        "2",
        "--n-max",
        "2",
    ]);
    assert!(out.status.success());
    assert_close(
        &floats(&stdout(&out), "closed_form"),
        &[0.866025, 2.598076, 4.330127],
        1e-6,
    );

    let out = cwkb(&[
        "oscillator",
        "--lambda",
        "0",
        "--alpha",
        "1",
        "--omega",
        "1",
        "--n-max",
        "2",
    ]);
    assert_close(&floats(&stdout(&out), "wkb_solver"), &[0.5, 1.5, 2.5], 1e-9);
}

#[test]
fn overdamped_oscillator_is_a_config_error() {
    let out = cwkb(&[
        "oscillator",
        "--alpha",
        "1",
        "--omega",
        "1",
        "--lambda",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("underdamped"));
}

#[test]
fn decay_rows_agree_and_stay_in_unit_interval() {
    let out = cwkb(&[
        "decay", "--z", "90", "--energy", "5", "--r1", "8", "--format", "json",
    ]);
    assert!(out.status.success());
    let rows: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let t = row["transmission"].as_f64().unwrap();
        assert!(t > 0.0 && t <= 1.0);
    }
    let quad = rows.iter().find(|r| r["method"] == "quadrature").unwrap();
    assert!(quad["rel_to_closed"].as_f64().unwrap() <= 1e-6);
    let thin = rows.iter().find(|r| r["method"] == "thin-barrier").unwrap();
    let expected = 1.986 * 90.0 / 5f64.sqrt() - 1.485 * (8.0f64 * 90.0).sqrt();
    assert!((thin["gamma"].as_f64().unwrap() - expected).abs() <= 1e-9 * expected);
}

#[test]
fn decay_above_barrier_is_rejected() {
    let out = cwkb(&["decay", "--z", "2", "--energy", "50", "--r1", "8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_alpha_is_a_config_error() {
    assert_eq!(cwkb(&["well", "--alpha", "1.5"]).status.code(), Some(2));
    assert_eq!(cwkb(&["well", "--alpha", "0"]).status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        &["well", "--alpha", "0.75", "--n-max", "4"][..],
        &[
            "oscillator",
            "--alpha",
            "0.5",
            "--omega",
            "2",
            "--lambda",
            "1",
            "--format",
            "json",
        ],
        &[
            "decay", "--alpha", "0.8", "--z", "82", "--energy", "6", "--r1", "7",
        ],
    ] {
        let (a, b) = (cwkb(args), cwkb(args));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn csv_and_json_carry_the_same_fields() {
    let csv_out = stdout(&cwkb(&["well", "--n-max", "2"]));
    let header: Vec<String> = csv_out
        .lines()
        .next()
        .unwrap()
        .split(',')
        .map(String::from)
        .collect();
    let rows: Vec<Value> =
        serde_json::from_slice(&cwkb(&["well", "--n-max", "2", "--format", "json"]).stdout)
            .unwrap();
    let keys: Vec<String> = rows[0].as_object().unwrap().keys().cloned().collect();
    assert_eq!(header, keys);
}

#[test]
fn dump_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let args = [
        "oscillator",
        "--alpha",
        "0.5",
        "--omega",
        "2",
        "--lambda",
        "1",
        "--n-max",
        "3",
    ];
    let direct = cwkb(&args);
    let mut dump_args = args.to_vec();
    dump_args.push("--dump-config");
    let dumped = cwkb(&dump_args);
    assert!(dumped.status.success());
    std::fs::write(&path, &dumped.stdout).unwrap();

    let path_str = path.to_str().unwrap();
    let replay = cwkb(&["--config", path_str]);
    assert!(replay.status.success());
    assert_eq!(replay.stdout, direct.stdout);
    let redump = cwkb(&["--config", path_str, "--dump-config"]);
    assert_eq!(redump.stdout, dumped.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("levels.csv");
    let out = cwkb(&["well", "--n-max", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read(&path).unwrap(),
        cwkb(&["well", "--n-max", "2"]).stdout
    );
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn inner_potential_table() {
    let dir = tempfile::tempdir().unwrap();
    let flat = write(dir.path(), "flat.csv", "x,v\n0,0\n0.5,0\n1,0\n");
    let out = cwkb(&["well", "--n-max", "2", "--inner-potential", &flat]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(column(&text, "closed_form").iter().all(String::is_empty));
    assert_close(&floats(&text, "wkb_solver"), &[4.934802, 19.739209], 1e-6);

    let bad = write(dir.path(), "bad.csv", "0,0\n0.5,oops\n1,0\n");
    let out = cwkb(&["well", "--inner-potential", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn wavefunction_peaks() {
    let out = cwkb(&["wavefunction", "--n", "1", "--alpha", "1", "--points", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let (xs, ps) = (floats(&text, "x"), floats(&text, "psi_sq"));
    let peak = ps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    assert_eq!(xs[peak], 0.5);

    let out = cwkb(&[
        "wavefunction",
        "--n",
        "1",
        "--alpha",
        "0.5",
        "--points",
        "101",
    ]);
    let text = stdout(&out);
    let (xs, ps) = (floats(&text, "x"), floats(&text, "psi_sq"));
    let peak = ps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    assert!((xs[peak] - 0.25).abs() < 1e-12);
}

#[test]
fn wavefunction_weighted_norm() {
    let alpha = 0.5;
    let out = cwkb(&[
        "wavefunction",
        "--n",
        "2",
        "--alpha",
        "0.5",
        "--points",
        "10000",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let (xs, ps) = (floats(&text, "x"), floats(&text, "psi_sq"));
    let weighted: Vec<f64> = xs
        .iter()
        .zip(&ps)
        .map(|(&x, &p)| {
            if x > 0.0 {
                p * x.powf(alpha - 1.0)
            } else {
                0.0
            }
        })
        .collect();
    let norm: f64 = xs
        .windows(2)
        .zip(weighted.windows(2))
        .map(|(x, w)| 0.5 * (x[1] - x[0]) * (w[0] + w[1]))
        .sum();
    assert!((norm - 1.0).abs() <= 1e-3, "{norm}");
}

#[test]
fn oscillator_wavefunction_flags_turning_points() {
    let out = cwkb(&[
        "wavefunction",
        "--potential",
        "oscillator",
        "--omega",
        "1",
        "--n",
        "1",
        "--points",
        "301",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let valid = column(&text, "valid");
    let region = column(&text, "region");
    assert!(valid.iter().any(|v| v == "false"));
    assert!(region.iter().any(|r| r == "forbidden"));
    assert!(floats(&text, "x").iter().all(|x| x.is_finite()));
}

#[test]
fn validate_reports_and_detects_perturbation() {
    let out = cwkb(&["validate", "core"]);
    assert_eq!(out.status.code(), Some(0));
    let passed = column(&stdout(&out), "passed");
    assert!(passed.len() >= 10 && passed.iter().all(|p| p == "true"));

    let out = cwkb(&["validate", "wkb", "--perturb-closed-form", "1e-3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_subcommand_is_a_config_error() {
    assert_eq!(cwkb(&[]).status.code(), Some(2));
}
