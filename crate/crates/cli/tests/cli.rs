use std::path::Path;
use std::process::{Command, Output};

fn hq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hq"))
        .args(args)
        .env_remove("HQ_THREADS")
        .output()
        .expect("run hq")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema(name: &str) -> serde_json::Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn assert_valid(schema_file: &str, json: &str) {
    let instance: serde_json::Value = serde_json::from_str(json).expect("valid JSON");
    let validator = jsonschema::validator_for(&schema(schema_file)).expect("schema compiles");
    let errors: Vec<String> = validator
        .iter_errors(&instance)
        .map(|e| e.to_string())
        .collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:?}");
}

#[test]
fn degeneracy_csv_header_and_rows() {
    let o = hq(&["degeneracy", "--n-max", "4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.split("\r\n").filter(|l| !l.is_empty()).collect();
    assert_eq!(lines[0], "n,sum,error");
    assert_eq!(lines.len(), 6);
    assert!(lines[3].starts_with("2,"));
}

#[test]
fn degeneracy_tolerance_breach_exits_two() {
    // a zero tolerance cannot hold once rounding enters the sums
    let o = hq(&["degeneracy", "--n-max", "10", "--tol", "0"]);
    assert_eq!(code(&o), 2);
    assert!(!o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["degeneracy", "--tol", "abc"][..],
        &["verify-all", "--tol", "abc"],
        &["verify-all", "--profile", "medium"],
        &["radial", "--kr", "10,1"],
        &["radial", "--kr", "1,,2"],
        &["energy", "--radial-mode", "exact"],
        &["energy", "--radius", "-1"],
        &["angmom", "--polarization", "elliptic"],
        &["angmom", "--khat", "0,0,0"],
        &["angmom", "--kr", "0"],
        &["bogus"],
        &[],
    ] {
        let o = hq(args);
        assert_eq!(
            code(&o),
            1,
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&hq(&["--help"])), 0);
    assert_eq!(code(&hq(&["--version"])), 0);
    assert_eq!(code(&hq(&["energy", "--help"])), 0);
}

#[test]
fn radial_csv_layout() {
    let o = hq(&["radial", "--n-max", "2", "--kr", "1e2,1e3"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("n,kR,closed,asymptotic,rel_dev\r\n"));
    assert_eq!(text.matches("\r\n").count(), 7);
}

#[test]
fn energy_json_matches_schema() {
    let o = hq(&[
        "energy",
        "--n",
        "3",
        "--omega",
        "2",
        "--k0",
        "1,10,100",
        "--radial-mode",
        "closed",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_valid("beta_report.schema.json", &text);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["radial_mode"], "closed");
    assert_eq!(v["k0_values"].as_array().unwrap().len(), 3);
}

#[test]
fn energy_csv_layout() {
    let o = hq(&["energy", "--format", "csv", "--k0", "1,2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.split("\r\n").filter(|l| !l.is_empty()).collect();
    assert_eq!(lines[0], "n,omega,k0,energy,beta_hat,radial_mode");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].ends_with(",asymptotic"));
}

#[test]
fn angmom_json_matches_schema() {
    let o = hq(&[
        "angmom",
        "--n",
        "2",
        "--kr",
        "5",
        "--polarization",
        "circular-",
        "--khat",
        "1,1,0",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_valid("angmom_report.schema.json", &text);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["helicity"], -1);
    assert_eq!(v["samples"].as_array().unwrap().len(), 9);
}

#[test]
fn spin_csv_layout() {
    let o = hq(&["angmom", "--format", "csv", "--samples", "4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("t,Jx,Jy,Jz,|J|\r\n"));
    assert_eq!(text.matches("\r\n").count(), 6);
}

#[test]
fn tables_match_schema() {
    let o = hq(&["degeneracy", "--n-max", "3", "--format", "json"]);
    assert_valid("degeneracy_table.schema.json", &stdout(&o));
    let o = hq(&["radial", "--n-max", "1", "--format", "json"]);
    assert_valid("deviation_table.schema.json", &stdout(&o));
}

#[test]
fn verify_quick_text_and_json() {
    let o = hq(&["verify-all", "--profile", "quick"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    assert!(lines[..10].iter().all(|l| l.starts_with("PASS [")));

    let o = hq(&["verify-all", "--profile", "quick", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_valid("verify_summary.schema.json", &stdout(&o));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(
        &cfg,
        "# energy run\nn = 2\nomega = 3\nk0 = 5\nvolume = 2\nformat = json\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();

    let v: serde_json::Value =
        serde_json::from_str(&stdout(&hq(&["--config", cfg, "energy"]))).unwrap();
    assert_eq!(v["n"], 2);
    assert_eq!(v["omega"], 3.0);
    let beta_v2 = v["beta"].as_f64().unwrap();

    let v: serde_json::Value = serde_json::from_str(&stdout(&hq(&[
        "--config", cfg, "energy", "--n", "4", "--volume", "1",
    ])))
    .unwrap();
    assert_eq!(v["n"], 4);
    assert_eq!(v["omega"], 3.0);
    assert!((v["beta"].as_f64().unwrap() * 2.0 - beta_v2).abs() < 1e-15);

    std::fs::write(dir.path().join("bad.conf"), "colour = red\n").unwrap();
    let bad = dir.path().join("bad.conf");
    assert_eq!(code(&hq(&["--config", bad.to_str().unwrap(), "energy"])), 1);
    assert_eq!(
        code(&hq(&["--config", "/nonexistent/hq.conf", "energy"])),
        1
    );
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dev.csv");
    let o = hq(&["radial", "--n-max", "1", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read(&path).unwrap(),
        hq(&["radial", "--n-max", "1"]).stdout
    );
}

#[test]
fn si_units_change_beta() {
    let nat: serde_json::Value = serde_json::from_str(&stdout(&hq(&["energy"]))).unwrap();
    let si: serde_json::Value = serde_json::from_str(&stdout(&hq(&[
        "--si", "energy", "--omega", "1e9", "--k0", "1",
    ])))
    .unwrap();
    let (b_nat, b_si) = (nat["beta"].as_f64().unwrap(), si["beta"].as_f64().unwrap());
    let ratio = b_si / b_nat;
    let expected = hq_eps_over_c();
    assert!(
        (ratio / expected - 1.0).abs() < 1e-12,
        "{ratio} vs {expected}"
    );
}

// beta scales as epsilon0 / c
fn hq_eps_over_c() -> f64 {
    8.8541878128e-12 / 299_792_458.0
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_hq"))
            .args(["verify-all", "--profile", "quick"])
            .env("HQ_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(code(&run("zero")), 1);
    assert_eq!(code(&run("0")), 1);
}
