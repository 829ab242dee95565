use std::path::Path;
use std::process::{Command, Output};

use zerone::renorm;

fn zerone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerone")).args(args).output().expect("run zerone")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn entropy_of_uniform_bit() {
    let dir = tempfile::tempdir().unwrap();
    let dist = write(dir.path(), "u2.json", r#"{"alphabet":["0","1"],"probs":[0.5,0.5]}"#);
    let o = zerone(&["info", "entropy", "--dist", &dist]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entropy"], 1.0);
}

#[test]
fn dynamics_csv_matches_library() {
    let o = zerone(&["renorm", "dynamics", "--rule", "majority", "--p0", "0.6", "--n", "6", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,value"));
    let orbit = renorm::iterate_dynamics(&renorm::majority_rule(), 0.6, 6).unwrap();
    for (i, line) in lines.enumerate() {
        let (n, value) = line.split_once(',').unwrap();
        assert_eq!(n.parse::<usize>().unwrap(), i);
        assert!((value.parse::<f64>().unwrap() - orbit[i]).abs() < 1e-11);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(zerone(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(zerone(&["renorm", "dynamics", "--p0", "0.6"]).status.code(), Some(64));
    assert_eq!(zerone(&["renorm", "dynamics", "--p0", "1.5", "--n", "3"]).status.code(), Some(2));
    assert_eq!(zerone(&["--help"]).status.code(), Some(0));
    let budget = Command::new(env!("CARGO_BIN_EXE_zerone"))
        .args(["renorm", "mc", "--p", "0.7", "--depth", "5", "--from", "3", "--samples", "10"])
        .env("ZERONE_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(budget.status.code(), Some(3));
}

#[test]
fn failures_leave_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("orbit.csv");
    let o = zerone(&["renorm", "dynamics", "--p0=-1", "--n", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn manifest_hash_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut hashes = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let out = dir.path().join(name);
        let o = zerone(&[
            "graph", "estimate", "--level", "1,2", "--p", "0.5", "--property", "connected",
            "--samples", "500", "--seed", "9", "--format", "csv", "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let manifest: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join(format!("{name}.manifest.json"))).unwrap()).unwrap();
        assert_eq!(manifest["seed"], 9);
        assert!(manifest["timestamp_unix"].is_u64());
        hashes.push((manifest["output_sha256"].clone(), std::fs::read(&out).unwrap()));
    }
    assert_eq!(hashes[0], hashes[1]);
}

#[test]
fn manifest_records_input_hashes() {
    let dir = tempfile::tempdir().unwrap();
    let joint = write(
        dir.path(),
        "copy.json",
        r#"{"coords":[["0","1"],["0","1"]],"probs":[{"key":[0,0],"p":0.5},{"key":[1,1],"p":0.5}]}"#,
    );
    let out = dir.path().join("sd.json");
    let o = zerone(&["info", "supdep", "--joint", &joint, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["sup_dependence"], 0.25);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sd.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["inputs"][&joint].as_str().unwrap().len(), 64);
}

#[test]
fn symmetry_commands() {
    let dir = tempfile::tempdir().unwrap();
    let event = write(dir.path(), "maj.json", r#"{"window":[-1,0,1],"alphabet":["0","1"],"bits":"e8"}"#);
    let map = write(dir.path(), "swap.json", r#"{"kind":"finitary","table":{"-1":1,"1":-1}}"#);
    let o = zerone(&["sym", "check", "--event", &event, "--map", &map]);
    assert!(stdout(&o).contains("\"symmetric\": true"));
    let o = zerone(&["sym", "check", "--event", &event, "--shift", "1", "--format", "csv"]);
    assert_eq!(stdout(&o), "symmetric\nfalse\n");
    let o = zerone(&["sym", "find-disjoint", "--shift", "1,-1", "--j", "-1,0,1", "--format", "csv"]);
    assert_eq!(stdout(&o), "j,image\n-1,2\n0,3\n1,4\n");
}
