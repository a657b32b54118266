use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gainforge(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gainforge"))
        .current_dir(dir)
        .arg("--no-timings")
        .args(args)
        .env_remove("GAINFORGE_SEED")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn wheel_demo_reports_gate_failure_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = gainforge(dir.path(), &["demo", "wheel", "--k", "3", "--out-dir", "."]);
    assert_eq!(out.status.code(), Some(0));
    let demo = report(&out);
    assert_eq!(
        demo["result"]["cycle_test"]["outcome"],
        "GateFailedOddTorsion"
    );
    assert_eq!(demo["result"]["balance"]["balanced"], false);

    let ct = gainforge(
        dir.path(),
        &["cycle-test", "wheel_k3.json", "wheel_k3_walks.json"],
    );
    assert_eq!(ct.status.code(), Some(0));
    assert_eq!(report(&ct)["result"], demo["result"]["cycle_test"]);

    let bal = gainforge(dir.path(), &["balance", "wheel_k3.json"]);
    assert_eq!(report(&bal)["result"], demo["result"]["balance"]);
}

#[test]
fn complex_demos_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 4] = [
        (&["demo", "hex", "--rings", "2"], "hex_r2.json"),
        (
            &["demo", "hex", "--rings", "1", "--hole"],
            "hex_r1_hole.json",
        ),
        (&["demo", "ridge-star"], "ridge_star_3d.json"),
        (&["demo", "two-cell", "--dim", "3"], "two_cell_3d.json"),
    ];
    for (args, file) in cases {
        let mut args = args.to_vec();
        args.extend(["--out-dir", "."]);
        let demo = report(&gainforge(dir.path(), &args));
        let rec = report(&gainforge(dir.path(), &["reciprocal", file]));
        assert_eq!(rec["result"], demo["result"]["reciprocal"], "{file}");
        let lift = report(&gainforge(dir.path(), &["lift", file]));
        assert_eq!(lift["result"], demo["result"]["lift"], "{file}");
    }
}

#[test]
fn lift_on_hex_patch_has_dimension_four() {
    let dir = tempfile::tempdir().unwrap();
    gainforge(
        dir.path(),
        &["demo", "hex", "--rings", "2", "--out-dir", "."],
    );
    let out = gainforge(dir.path(), &["lift", "hex_r2.json", "--obj", "hex.obj"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["dimension"], 4);
    assert_eq!(r["artifacts"][0], "hex.obj");
    let obj = std::fs::read_to_string(dir.path().join("hex.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 19);
}

#[test]
fn hole_reports_gate_failure_with_status_one() {
    let dir = tempfile::tempdir().unwrap();
    gainforge(
        dir.path(),
        &["demo", "hex", "--rings", "2", "--hole", "--out-dir", "."],
    );
    let out = gainforge(dir.path(), &["reciprocal", "hex_r2_hole.json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["result"]["status"], "failed");
    assert_eq!(r["result"]["generation_gate"]["dual_passes"], false);
    assert!(r["result"].get("reciprocal").is_none());
}

#[test]
fn identity_gains_are_balanced() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("g.json"),
        r#"{"group": "Z^2 * Z_4", "vertices": ["a", "b", "c"], "edges": [
            {"id": "x", "tail": "a", "head": "b", "gain": [0, 0, 0]},
            {"id": "y", "tail": "b", "head": "c", "gain": [0, 0, 0]},
            {"id": "z", "tail": "c", "head": "a", "gain": [0, 0, 0]}]}"#,
    )
    .unwrap();
    let out = gainforge(dir.path(), &["balance", "g.json", "--assert-balanced"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["balanced"], true);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    gainforge(dir.path(), &["demo", "wheel", "--k", "2", "--out-dir", "."]);
    let out = gainforge(
        dir.path(),
        &["balance", "wheel_k2.json", "--assert-balanced"],
    );
    assert_eq!(out.status.code(), Some(1));

    std::fs::write(dir.path().join("broken.json"), "{ not json").unwrap();
    let out = gainforge(dir.path(), &["balance", "broken.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed JSON"));

    std::fs::write(
        dir.path().join("dangling.json"),
        r#"{"group": "Z", "vertices": ["a"], "edges": [{"id": "loose", "tail": "a", "head": "b", "gain": [1]}]}"#,
    )
    .unwrap();
    let out = gainforge(dir.path(), &["balance", "dangling.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"loose\""));

    let out = gainforge(dir.path(), &["gates", "--group", "Z_"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    gainforge(
        dir.path(),
        &["demo", "hex", "--rings", "1", "--out-dir", "."],
    );
    for args in [
        &["reciprocal", "hex_r1.json"][..],
        &["lift", "hex_r1.json"],
        &["demo", "wheel", "--k", "4"],
        &["fuzz", "--trials", "20"],
    ] {
        let a = gainforge(dir.path(), args);
        let b = gainforge(dir.path(), args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn fuzz_honours_seed_variable() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gainforge"))
        .current_dir(dir.path())
        .args(["--no-timings", "fuzz", "--trials", "10"])
        .env("GAINFORGE_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["seed"], 77);
    assert_eq!(r["result"]["balanced_by_theorem"], 10);
}

#[test]
fn states_translation_from_seed() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("g.json"),
        r#"{"group": "Q^2", "vertices": ["v0", "v1"], "edges": [
            {"id": "e", "tail": "v0", "head": "v1", "gain": ["1/2", 3]}]}"#,
    )
    .unwrap();
    let out = gainforge(
        dir.path(),
        &[
            "states",
            "g.json",
            "--action",
            "translation",
            "--root",
            "v0",
            "--seed",
            "0,0",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["state"]["v1"], serde_json::json!(["1/2", "3"]));
}
