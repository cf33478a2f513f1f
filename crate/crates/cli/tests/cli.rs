use std::f64::consts::FRAC_PI_4;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

use leapfrog_core::{classify_configuration, PhysicalState, VerdictKind};

fn leapfrog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leapfrog"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_error(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    v["error"].clone()
}

const PHYSICAL: [&str; 14] = [
    "--gamma1", "1", "--gamma2", "1", "--alpha", "0.1", "--r1", "0.8", "--z1", "0", "--r2", "1.0", "--z2", "0.2",
];

#[test]
fn classify_physical_matches_library() {
    let mut args = vec!["classify"];
    args.extend(PHYSICAL);
    let doc = stdout_json(&leapfrog(&args));

    let lib = classify_configuration(1.0, 1.0, PhysicalState::new(0.8, 0.0, 1.0, 0.2), 0.1).unwrap();
    assert_eq!(doc["kind"], lib.verdict.kind.as_str());
    assert_eq!(doc["kind"], VerdictKind::Leapfrog.as_str());
    assert_eq!(doc["hamiltonian"].as_f64().unwrap(), lib.verdict.hamiltonian);
    assert_eq!(doc["threshold"].as_f64().unwrap(), lib.verdict.threshold);

    let setup = lib.setup.unwrap();
    assert_eq!(doc["model"]["regime"], "same");
    assert_eq!(doc["model"]["d"].as_f64().unwrap(), setup.params.d());
    assert_eq!(doc["model"]["theta0"].as_f64().unwrap(), setup.reduced0.theta);
    assert_eq!(doc["canonical"]["swapped"], false);
    assert!(doc["equilibria"]["theta_star"].is_f64());
}

#[test]
fn classify_key_order_is_fixed() {
    let out = leapfrog(&["classify", "--beta", "1", "--alpha", "0.1", "--theta", "0.7"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys = [
        "\"kind\"",
        "\"hamiltonian\"",
        "\"threshold\"",
        "\"detail\"",
        "\"equilibria\"",
        "\"model\"",
        "\"canonical\"",
    ];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn equilibria_same_sign_beta_one() {
    let doc = stdout_json(&leapfrog(&[
        "equilibria",
        "--regime",
        "same",
        "--beta",
        "1",
        "--alpha",
        "0.1",
        "--d",
        "1",
    ]));
    let get = |k: &str| doc[k].as_f64().unwrap();
    assert_eq!(get("theta_beta"), FRAC_PI_4);
    assert!((get("theta_star") - 0.5087).abs() < 1e-3);
    assert!((get("theta_star2") - 1.0621).abs() < 1e-3);
    assert!((get("theta_star") + get("theta_star2") - 2.0 * FRAC_PI_4).abs() < 1e-10);
    assert!(doc["h_star"].is_f64());
}

#[test]
fn equilibria_opposite_sign_reports_threshold() {
    let doc = stdout_json(&leapfrog(&["equilibria", "--gamma", "16", "--alpha", "0.1"]));
    assert_eq!(doc["model"]["regime"], "opposite");
    assert!((doc["theta_bar"].as_f64().unwrap() - 0.22242).abs() < 1e-4);
    assert!((doc["g_threshold"].as_f64().unwrap() - 24.438).abs() < 1e-2);
}

#[test]
fn alpha_beyond_scope_exits_two() {
    let out = leapfrog(&["classify", "--alpha", "0.4", "--beta", "1", "--theta", "0.7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert_eq!(stderr_error(&out)["kind"], "OutOfTheoremScope");
}

#[test]
fn validation_failures_exit_two() {
    let cases: [(&[&str], &str); 6] = [
        (
            &[
                "classify", "--alpha", "0.1", "--beta", "1", "--theta", "0.7", "--gamma1", "1",
            ],
            "Usage",
        ),
        (
            &["classify", "--alpha", "0.1", "--gamma1", "1", "--gamma2", "1"],
            "Usage",
        ),
        (&["classify", "--alpha", "0.1", "--beta", "1"], "Usage"),
        (
            &["classify", "--alpha", "0.1", "--beta", "1", "--theta", "2"],
            "DomainViolation",
        ),
        (
            &[
                "classify",
                "--alpha",
                "0.1",
                "--beta",
                "1",
                "--theta",
                "0.7853981633974483",
            ],
            "SingularPoint",
        ),
        (&["portrait", "--alpha", "0.1", "--beta", "1", "--grid", "1x5"], "Usage"),
    ];
    for (args, kind) in cases {
        let out = leapfrog(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr_error(&out)["kind"], kind, "{args:?}");
    }
    let bad_flag = leapfrog(&[
        "simulate", "--alpha", "0.1", "--beta", "1", "--theta", "0.7", "--t-end", "soon",
    ]);
    assert_eq!(bad_flag.status.code(), Some(2));
    assert_eq!(stderr_error(&bad_flag)["kind"], "Usage");
}

#[test]
fn overlapping_physical_input_exits_two() {
    let out = leapfrog(&[
        "classify", "--gamma1", "1", "--gamma2", "1", "--alpha", "0.1", "--r1", "1", "--z1", "0", "--r2", "1", "--z2",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_error(&out)["kind"], "OverlappingFilaments");
}

#[test]
fn infeasible_opposite_pair_cannot_leapfrog() {
    let out = leapfrog(&[
        "classify", "--gamma1", "-1", "--gamma2", "2", "--alpha", "0.1", "--r1", "1", "--z1", "0", "--r2", "0.3",
        "--z2", "0",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["kind"], "LeapfrogImpossible");
    assert!(doc["hamiltonian"].is_null());
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let runs = [
        vec![
            "simulate", "--beta", "1", "--alpha", "0.1", "--theta", "0.7", "--w", "0.1", "--t-end", "5",
        ],
        vec!["portrait", "--beta", "2", "--alpha", "0.1", "--grid", "31x17"],
        vec!["classify", "--gamma", "16", "--alpha", "0.1", "--theta", "0.3"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let a = dir.path().join(format!("{i}a"));
        let b = dir.path().join(format!("{i}b"));
        for path in [&a, &b] {
            let mut full = args.clone();
            full.extend(["--output", path.to_str().unwrap()]);
            assert!(leapfrog(&full).status.success(), "{full:?}");
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{args:?}");
    }
}

#[test]
fn json_reports_round_trip() {
    let runs: [&[&str]; 5] = [
        &[
            "classify", "--beta", "2", "--alpha", "0.1", "--theta", "0.6", "--w", "0.1",
        ],
        &["equilibria", "--gamma", "2", "--alpha", "0.1"],
        &[
            "pdecheck", "--beta", "1", "--alpha", "0.1", "--theta", "0.7", "--w", "0.3", "--n", "64",
        ],
        &[
            "portrait", "--beta", "1", "--alpha", "0.1", "--grid", "5x5", "--format", "json",
        ],
        &[
            "parallel", "--gamma1", "1", "--gamma2", "-1", "--alpha", "0.1", "--x1", "0", "--y1", "1", "--x2", "0",
            "--y2", "-1", "--t-end", "1", "--format", "json",
        ],
    ];
    for args in runs {
        let out = leapfrog(args);
        assert!(out.status.success(), "{args:?}");
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(again.as_bytes(), &out.stdout[..], "{args:?}");
    }
}

#[test]
fn simulate_csv_layout() {
    let out = leapfrog(&[
        "simulate", "--beta", "1", "--alpha", "0.1", "--theta", "0.7", "--t-end", "2",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,theta,W,R1,R2,z1,z2,H,drift"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!(rows.len() > 2 && rows.iter().all(|r| r.len() == 9));
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows.last().unwrap()[0], 2.0);
    for r in &rows {
        assert!((r[2] - (r[5] - r[6])).abs() < 1e-9);
        assert!((r[3] * r[3] + r[4] * r[4] - 1.0).abs() < 1e-9);
        assert!(r[8] < 1e-9);
    }
}

#[test]
fn simulate_early_stop_flushes_partial_output() {
    let out = leapfrog(&[
        "simulate", "--beta", "1", "--alpha", "0.1", "--theta", "0.7", "--rtol", "1e-18", "--atol", "1e-300",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("t,theta,W,R1,R2,z1,z2,H,drift\n0.0,0.7,"));
    let err = stderr_error(&out);
    assert_eq!(err["termination"], "StepSizeUnderflow");
    assert!(err["t"].is_f64());
}

#[test]
fn portrait_writes_grid_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("grid.csv");
    let out = leapfrog(&[
        "portrait",
        "--beta",
        "1",
        "--alpha",
        "0.1",
        "--grid",
        "21x11",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,W,value,verdict"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 21 * 11);
    let masked = rows.iter().filter(|r| r.ends_with(",,")).count();
    assert_eq!(masked, 1);

    let meta: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("grid.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["n_theta"], 21);
    assert_eq!(meta["n_w"], 11);
    assert_eq!(meta["counts"]["masked"], 1);
    let leap = meta["counts"]["leapfrog"].as_u64().unwrap();
    assert!(leap > 0);
    assert_eq!(rows.iter().filter(|r| r.ends_with(",Leapfrog")).count() as u64, leap);
    assert!((meta["threshold"].as_f64().unwrap() + 2.13816).abs() < 1e-4);
}

#[test]
fn portrait_out_of_scope_marks_every_cell() {
    let out = leapfrog(&[
        "portrait", "--beta", "1", "--alpha", "0.4", "--grid", "4x4", "--format", "json",
    ]);
    let doc = stdout_json(&out);
    assert!(doc["threshold"].is_null());
    assert_eq!(doc["counts"]["out_of_theorem_scope"], 16);
}

#[test]
fn parallel_rotation_closes_after_one_period() {
    let out = leapfrog(&[
        "parallel", "--gamma1", "1", "--gamma2", "1", "--alpha", "0.1", "--x1", "1", "--y1", "0", "--x2", "-1", "--y2",
        "0", "--format", "json",
    ]);
    let doc = stdout_json(&out);
    let period = doc["period"].as_f64().unwrap();
    assert!((period - 251.327_412_287_183_45).abs() < 1e-9);
    assert_eq!(doc["t_end"].as_f64().unwrap(), period);
    assert!(doc["max_error"].as_f64().unwrap() < 1e-6);
    assert!(doc["max_drift"].as_f64().unwrap() < 1e-8);
    let rows = doc["rows"].as_array().unwrap();
    let last = rows.last().unwrap().as_array().unwrap();
    assert!((last[1].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn pdecheck_spectral_beats_fourth_order() {
    let run = |stencil: &str| {
        let doc = stdout_json(&leapfrog(&[
            "pdecheck",
            "--beta",
            "2",
            "--alpha",
            "0.1",
            "--theta",
            "0.5",
            "--w",
            "0.2",
            "--n",
            "128",
            "--stencil",
            stencil,
        ]));
        doc["max_error"].as_f64().unwrap()
    };
    let (fourth, spectral) = (run("fourth"), run("spectral"));
    assert!(fourth < 1e-5);
    assert!(spectral < fourth);
}

#[test]
fn csv_format_rejected_for_reports() {
    let out = leapfrog(&["equilibria", "--beta", "1", "--alpha", "0.1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}
