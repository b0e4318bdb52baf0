use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn eczcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eczcs")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const TABLE4_TEXT: &str = "\
++++--+-+-++-++--+++++-+
++++--+-+-+++--++-----+-

+-+++++--++---+-+-++----
+-+++++--++-++-+-+--++++
";

#[test]
fn pairing_reproduces_the_two_set_table() {
    let o = eczcs(&["construct", "theorem2", "--seed", "table3", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), TABLE4_TEXT);
}

#[test]
fn pairing_json_reports_width_and_verdicts() {
    let o = eczcs(&["construct", "theorem2", "--seed", "table3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["Z"], 9);
    assert_eq!(v["verdict"]["passed"], true);
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "t4.txt", TABLE4_TEXT);
    assert_eq!(eczcs(&["verify", &f, "--class", "eczcs", "--Z", "9"]).status.code(), Some(0));

    let o = eczcs(&["verify", &f, "--class", "eczcs", "--Z", "10"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let hit = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .any(|x| x["indices"] == serde_json::json!([0, 0]) && x["shift"] == 10 && x["magnitude"] == 8.0);
    assert!(hit, "{v}");

    let bad = write(dir.path(), "bad.txt", "++x+\n");
    assert_eq!(eczcs(&["verify", &bad, "--class", "zccs", "--Z", "1"]).status.code(), Some(2));
    assert_eq!(eczcs(&["verify", "no-such-file", "--class", "ccc"]).status.code(), Some(2));
}

#[test]
fn verify_zcz_class_flattens_the_family() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "t4.txt", TABLE4_TEXT);
    assert_eq!(eczcs(&["verify", &f, "--class", "zcz", "--Z", "9"]).status.code(), Some(0));
}

#[test]
fn profile_set_sum_lists_the_front_zone() {
    let o = eczcs(&["profile", "table4", "--pairing", "set", "--from", "0", "--to", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let mags: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().to_string())
        .collect();
    let want: Vec<String> = ["48", "0", "0", "0", "0", "0", "0", "0", "0", "0", "8"].map(String::from).into();
    assert_eq!(mags, want);
}

#[test]
fn train_layout_and_rejections() {
    let o = eczcs(&["train", "table4", "--nt", "4", "--na", "2", "--lambda", "9", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"]["passed"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    // antenna 2 is silent over the first segment
    assert!(v["rows"][2].as_array().unwrap()[..24].iter().all(|e| e.is_null()));

    let csv = eczcs(&["train", "table5", "--nt", "8", "--na", "3"]);
    assert_eq!(stdout(&csv).lines().filter(|l| !l.starts_with('#')).count(), 8);

    // two-set family cannot feed three active antennas
    assert_eq!(eczcs(&["train", "table4", "--nt", "8", "--na", "3"]).status.code(), Some(2));
}

#[test]
fn unknown_preset_is_an_input_error() {
    assert_eq!(eczcs(&["construct", "theorem3", "--preset", "nope"]).status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic_and_writes_a_manifest() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "sim.json",
        r#"{"training":"table4","nt":4,"na":2,"ebn0_db":[8,16],"lambdas":[9,11],"trials":200,"seed":3}"#,
    );
    let out = dir.path().join("mse.csv").display().to_string();
    let a = eczcs(&["simulate", &cfg, "--out", &out]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let first = std::fs::read_to_string(&out).unwrap();
    assert_eq!(eczcs(&["simulate", &cfg, "--out", &out]).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
    assert_eq!(first.lines().filter(|l| !l.starts_with('#')).count(), 5);

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{out}.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);

    let other = eczcs(&["simulate", &cfg, "--seed", "4"]);
    assert_ne!(stdout(&other), first);
}
