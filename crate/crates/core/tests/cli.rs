use std::process::{Command, Output};

use serde_json::Value;

fn fockgauge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockgauge"))
        .args(args)
        .env_remove("FOCKGAUGE_MAX_CUTOFF")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const COHERENT: &str = r#"{"kind":"coherent","alpha":{"re":1,"im":0},"eps_tail":1e-14}"#;

#[test]
fn gauge_on_coherent_state_saturates() {
    let out = fockgauge(&["gauge", "--spec", COHERENT]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["g1"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert_eq!(v["tight"]["applicable"], true);
}

#[test]
fn fock_moments() {
    let out = fockgauge(&["moments", "--spec", r#"{"kind":"fock","n":2}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["mean_n"].as_f64(), Some(2.0));
    assert_eq!(v["var_n"].as_f64(), Some(0.0));
}

#[test]
fn sweep_example_passes() {
    let out = fockgauge(&[
        "sweep",
        "--config",
        r#"{"n_pure":100,"n_mixed":10,"cutoff":16,"rank":4,"seed":42}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["states"], 110);
    for (_, tally) in v["inequalities"].as_object().unwrap() {
        assert_eq!(tally["violations"], 0);
    }
}

#[test]
fn sweep_violation_exits_1() {
    let out = fockgauge(&[
        "sweep",
        "--config",
        r#"{"n_pure":20,"n_mixed":0,"cutoff":8,"rank":1,"seed":1,"tolerances":{"covariance_floor":-1e6}}"#,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("covariance_floor"));
}

#[test]
fn moments_round_trip_through_gauge() {
    for spec in [
        COHERENT,
        r#"{"kind":"squeezed_coherent","alpha":{"re":0.3,"im":-1.1},"r":0.7,"phi_s":1.2}"#,
        r#"{"kind":"crescent","alpha":{"re":1.5,"im":0.5},"M":2}"#,
        r#"{"kind":"random_mixed","cutoff":10,"rank":3,"seed":9}"#,
    ] {
        let moments = fockgauge(&["moments", "--spec", spec]);
        assert_eq!(moments.status.code(), Some(0));
        let text = String::from_utf8(moments.stdout).unwrap();
        let via_moments = fockgauge(&["gauge", "--moments", text.trim()]);
        let via_spec = fockgauge(&["gauge", "--spec", spec]);
        assert_eq!(via_moments.status.code(), Some(0));
        assert_eq!(via_moments.stdout, via_spec.stdout, "{spec}");
    }
}

#[test]
fn arguments_can_come_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    std::fs::write(&path, COHERENT).unwrap();
    let arg = format!("@{}", path.display());
    let from_file = fockgauge(&["moments", "--spec", &arg]);
    let inline = fockgauge(&["moments", "--spec", COHERENT]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, inline.stdout);
}

#[test]
fn state_metadata_and_amplitudes() {
    let out = fockgauge(&["state", "--spec", COHERENT, "--dump-amplitudes"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let cutoff = v["cutoff"].as_u64().unwrap() as usize;
    assert_eq!(v["amplitudes"].as_array().unwrap().len(), cutoff + 1);
    assert!((v["amplitudes"][0]["re"].as_f64().unwrap() - (-0.5f64).exp()).abs() < 1e-15);
    assert!(v["tail_mass"].as_f64().unwrap() < 1e-20);
    assert_eq!(v["truncation_warning"], false);
}

#[test]
fn schema_and_usage_errors_exit_2() {
    for args in [
        vec!["moments", "--spec", r#"{"kind":"coherent"}"#],
        vec!["moments", "--spec", r#"{"kind":"fock","n":1,"alpha":{"re":1,"im":0}}"#],
        vec!["moments", "--spec", r#"{"kind":"warp","n":1}"#],
        vec!["moments", "--spec", "{not json"],
        vec!["moments", "--spec", r#"{"kind":"fock","n":1}"#, "--bogus"],
        vec!["figure", "--which", "fig3", "--resolution", "8", "--out", "/dev/null"],
        vec!["figure", "--which", "fig7", "--resolution", "16", "--out", "/dev/null"],
        vec!["calibrate", "extra"],
        vec![],
    ] {
        let out = fockgauge(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn max_cutoff_environment_override() {
    let spec = r#"{"kind":"coherent","alpha":{"re":3,"im":0}}"#;
    let run = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_fockgauge"))
            .args(["moments", "--spec", spec])
            .env("FOCKGAUGE_MAX_CUTOFF", value)
            .output()
            .unwrap()
    };
    let tight = run("10");
    assert_eq!(tight.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&tight.stderr).contains("cutoff"));
    assert_eq!(run("200").status.code(), Some(0));
    assert_eq!(run("lots").status.code(), Some(2));
}

#[test]
fn figure_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    for (which, header) in [
        ("fig2", "var_a_abs,cov_ada,bound_eq11,bound_eq13"),
        ("fig3", "re_var_a,im_var_a,hyperboloid,cone"),
        ("fig4", "gamma_re,gamma_im,cov_ada,var_n,bound,rel_gap"),
    ] {
        let path = dir.path().join(format!("{which}.csv"));
        let out = fockgauge(&["figure", "--which", which, "--resolution", "16", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{which}");
        let csv = std::fs::read_to_string(&path).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(header));
        let rows = lines.count();
        let v = json(&out);
        assert_eq!(v["rows"].as_u64(), Some(rows as u64));
        assert_eq!(v["rel_gap"].is_object(), which == "fig4");
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = fockgauge(&["calibrate"]);
    let b = fockgauge(&["calibrate"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let tags: Vec<&str> = v["printed_vs_derived"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["tag"].as_str().unwrap())
        .collect();
    assert_eq!(tags, ["eq8", "eq11", "eq13"]);
}
