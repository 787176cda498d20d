use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use locuslab_core::config::Configuration;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_locuslab"));
    c.env_remove("LOCUSLAB_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn generated(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    stdout(&o)
}

fn a2(dir: &Path) -> PathBuf {
    write(
        dir,
        "a2.json",
        &generated(&["generate", "coxeter-a", "--n", "2", "--m", "1"]),
    )
}

#[test]
fn verify_a2_passes() {
    let dir = tempfile::tempdir().unwrap();
    let f = a2(dir.path());
    let o = run(&["verify", "--in", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["kind"], "locus");
    assert_eq!(v["pass"], true);
    assert_eq!(v["items"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_perturbed_reports_failing_equations() {
    let dir = tempfile::tempdir().unwrap();
    let src = generated(&["generate", "coxeter-a", "--n", "2", "--m", "1"]);
    // the last mirror (1, 0, -1) becomes (1, 0, -2)
    let at = src.rfind("\"-1\"").unwrap();
    let bad = format!("{}\"-2\"{}", &src[..at], &src[at + 4..]);
    let f = write(dir.path(), "perturbed.json", &bad);
    let o = run(&["verify", "--in", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["pass"], false);
    let failing: Vec<(u64, u64)> = v["items"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|it| it["residual"] != "0")
        .map(|it| {
            (
                it["hyperplane"].as_u64().unwrap(),
                it["j"].as_u64().unwrap(),
            )
        })
        .collect();
    assert!(failing.contains(&(2, 1)), "{failing:?}");

    let o = run(&["verify", "--in", f.to_str().unwrap(), "--format", "text"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("hyperplane 2 j=1"));
}

#[test]
fn verify_via_planes_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "b2.json",
        &generated(&[
            "generate",
            "coxeter-i2",
            "--p",
            "4",
            "--m1",
            "1",
            "--m2",
            "2",
        ]),
    );
    let o = run(&["verify", "--via-2d", "--in", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["via_2d"]["agrees"], true);
}

#[test]
fn psi_checks_pass_on_a2() {
    let dir = tempfile::tempdir().unwrap();
    let f = a2(dir.path());
    let o = run(&[
        "psi",
        "--in",
        f.to_str().unwrap(),
        "--check",
        "symmetry,eigen,axioms,bispectral",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["M"], 3);
    for check in ["symmetry", "eigen", "axioms", "bispectral"] {
        assert_eq!(v["checks"][check], true, "{check}");
    }
}

#[test]
fn psi_on_a_non_locus_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{"dimension": 2, "tower": [], "hyperplanes": [
        {"normal": ["1", "0"], "offset": "0", "multiplicity": 1},
        {"normal": ["1", "1"], "offset": "0", "multiplicity": 1}]}"#;
    let f = write(dir.path(), "two.json", doc);
    let o = run(&["psi", "--in", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["terminates"], false);
}

#[test]
fn generate_is_deterministic_and_round_trips() {
    for args in [
        &["generate", "coxeter-a", "--n", "3", "--m", "2"][..],
        &["generate", "deformed-c", "--n", "1", "--m", "1", "--l", "2"][..],
        &[
            "generate",
            "coxeter-i2",
            "--p",
            "6",
            "--m1",
            "1",
            "--m2",
            "3",
        ][..],
    ] {
        let a = generated(args);
        assert_eq!(a, generated(args));
        assert_eq!(Configuration::from_json(&a).unwrap().to_json(), a);
    }
}

#[test]
fn deformed_a_document() {
    let v: Value = serde_json::from_str(&generated(&[
        "generate",
        "deformed-a",
        "--n",
        "2",
        "--m",
        "2",
    ]))
    .unwrap();
    assert_eq!(v["dimension"], 3);
    assert_eq!(v["tower"], serde_json::json!([2]));
    let mut got: Vec<(Vec<String>, u64)> = v["hyperplanes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| {
            let n = h["normal"]
                .as_array()
                .unwrap()
                .iter()
                .map(|s| s.as_str().unwrap().to_string())
                .collect();
            (n, h["multiplicity"].as_u64().unwrap())
        })
        .collect();
    got.sort();
    let s = |xs: [&str; 3]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let mut expected = vec![
        (s(["1", "-1", "0"]), 2),
        (s(["1", "0", "-r2"]), 1),
        (s(["0", "1", "-r2"]), 1),
    ];
    expected.sort();
    assert_eq!(got, expected);
}

#[test]
fn dihedral_with_two_orbits() {
    let v: Value = serde_json::from_str(&generated(&[
        "generate",
        "coxeter-i2",
        "--p",
        "4",
        "--m1",
        "1",
        "--m2",
        "2",
    ]))
    .unwrap();
    let mults: Vec<u64> = v["hyperplanes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| h["multiplicity"].as_u64().unwrap())
        .collect();
    assert_eq!(mults.len(), 4);
    assert_eq!(mults.iter().filter(|&&m| m == 1).count(), 2);
    assert_eq!(mults.iter().filter(|&&m| m == 2).count(), 2);
}

#[test]
fn projectivise_a_one_dimensional_locus() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write(
        dir.path(),
        "am.json",
        &generated(&["generate", "adler-moser-points", "--tau", "8"]),
    );
    let o = run(&["generate", "projectivise", "--in", pts.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let c = Configuration::from_json(&stdout(&o)).unwrap();
    assert_eq!(c.dimension(), 3);
    assert_eq!(c.len(), 3);
    assert!(c.is_linear());
    let proj = write(dir.path(), "proj.json", &stdout(&o));
    let o = run(&["verify", "--in", proj.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn input_errors_exit_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad_scalar = write(
        dir.path(),
        "bad.json",
        "{\"dimension\": 2, \"tower\": [],\n \"hyperplanes\": [{\"normal\": [\"1\", \"2*q\"], \"offset\": \"0\", \"multiplicity\": 1}]}",
    );
    let o = run(&["verify", "--in", bad_scalar.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column"), "{}", stderr(&o));

    let truncated = write(
        dir.path(),
        "cut.json",
        "{\"dimension\": 2,\n \"hyperplanes\": [",
    );
    let o = run(&["verify", "--in", truncated.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column"), "{}", stderr(&o));

    let o = run(&["generate", "e8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown generator"));

    let o = run(&["generate", "deformed-c", "--n", "2", "--m", "1", "--l", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_environment_overrides_flag() {
    let dir = tempfile::tempdir().unwrap();
    let f = a2(dir.path());
    let args = [
        "verify",
        "--in",
        f.to_str().unwrap(),
        "--mode",
        "probabilistic",
        "--seed",
        "5",
    ];
    let v = json(&run(&args));
    assert_eq!(v["seed"], 5);
    assert!(v["watermark"].is_string());
    let o = bin()
        .args(args)
        .env("LOCUSLAB_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(json(&o)["seed"], 77);
    let o = bin().args(args).env("LOCUSLAB_SEED", "x").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exact_reports_carry_no_watermark() {
    let dir = tempfile::tempdir().unwrap();
    let f = a2(dir.path());
    let v = json(&run(&["verify", "--in", f.to_str().unwrap()]));
    assert_eq!(v["mode"], "exact");
    assert!(v.get("watermark").is_none());
}

#[test]
fn integrals_for_a2_cubic() {
    let dir = tempfile::tempdir().unwrap();
    let f = a2(dir.path());
    let o = run(&["integrals", "--in", f.to_str().unwrap(), "--f", "p3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["order"], 3);
    assert_eq!(v["eigen"], true);
    assert_eq!(v["commutator_zero"], true);
    assert_eq!(v["quasi_invariant"], true);
    assert!(v["surviving_monomial"].is_null());
}

#[test]
fn hadamard_certificate_for_a2() {
    let dir = tempfile::tempdir().unwrap();
    let f = a2(dir.path());
    let o = run(&["hadamard", "--in", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["M"], 3);
    assert_eq!(v["minimal_N"], 9);
    assert_eq!(v["terminates"], true);
    assert_eq!(v["chain_verified"], true);
}

#[test]
fn onedim_adler_moser_and_xi() {
    let v = json(&run(&["onedim", "adler-moser", "--tau", "1"]));
    assert_eq!(v["potential"], "(6*z^4 - 12*z)/(z^6 + 2*z^3 + 1)");
    assert_eq!(v["poles"].as_array().unwrap().len(), 3);
    assert_eq!(v["pass"], true);

    let v = json(&run(&["onedim", "adler-moser", "--m", "3", "--c", "0,0"]));
    assert_eq!(v["potential"], "12/(z^2)");

    let o = run(&["onedim", "adler-moser", "--m", "3", "--c", "0"]);
    assert_eq!(o.status.code(), Some(2));

    let v = json(&run(&["onedim", "xi", "--m", "2", "--xi", "0,0"]));
    assert_eq!(v["potential"], "6/(z^2)");
    assert_eq!(v["pass"], true);
}

#[test]
fn onedim_berest_lutsenko() {
    let o = run(&["onedim", "berest-lutsenko", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let angles: Vec<f64> = v["lines"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["angle"][0].as_f64().unwrap())
        .collect();
    let q = std::f64::consts::FRAC_PI_4;
    assert_eq!(angles.len(), 2);
    assert!((angles[0] - q).abs() < 1e-15 && (angles[1] - 3.0 * q).abs() < 1e-15);

    let o = run(&[
        "onedim",
        "berest-lutsenko",
        "--k",
        "1,2",
        "--theta",
        "0,pi/2",
    ]);
    let v = json(&o);
    assert_eq!(v["lines"].as_array().unwrap().len(), 1);
    assert_eq!(v["lines"][0]["multiplicity"], 2);

    let o = run(&["onedim", "berest-lutsenko", "--k", "1,2", "--unit", "1,i"]);
    assert_eq!(json(&o)["lines"][0]["multiplicity"], 2);

    let o = run(&["onedim", "berest-lutsenko", "--k", "2,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_rerenders_saved_output() {
    let dir = tempfile::tempdir().unwrap();
    let f = a2(dir.path());
    let saved = dir.path().join("saved.json");
    let o = run(&[
        "verify",
        "--in",
        f.to_str().unwrap(),
        "--out",
        saved.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let direct = stdout(&run(&[
        "verify",
        "--in",
        f.to_str().unwrap(),
        "--format",
        "text",
    ]));
    let o = run(&["report", "--in", saved.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), direct);

    let failing = write(
        dir.path(),
        "fail.json",
        r#"{"kind": "xi", "m": 1, "xi": ["0"], "a": ["-1/(z)"], "potential": "2/(z^2)", "psi": "", "pass": false}"#,
    );
    let o = run(&["report", "--in", failing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    let unknown = write(dir.path(), "unknown.json", r#"{"kind": "nope"}"#);
    assert_eq!(
        run(&["report", "--in", unknown.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
