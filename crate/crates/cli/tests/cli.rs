use std::path::Path;
use std::process::{Command, Output};

use resonate::solver::{solve_gravity_scale, solve_three_wave, SideConvention};
use resonate::{Dispersion, SpectralDomain};
use serde_json::Value;

fn resonate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resonate"))
        .args(args)
        .env_remove("RESONATE_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn manifest(out: &Path) -> Value {
    let p = format!("{}.manifest.json", out.display());
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn solve_writes_records_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.jsonl");
    let o = resonate(&[
        "solve",
        "--disp",
        "gravity4",
        "--kind",
        "scale",
        "--D",
        "1000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let data = std::fs::read_to_string(&out).unwrap();
    let lib = solve_gravity_scale(&SpectralDomain::full(1000), SideConvention::Distinct);
    assert_eq!(data.lines().count() as u64, lib.len());
    for line in data.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["kind"], "scale");
    }
    let m = manifest(&out);
    assert_eq!(m["counts"]["scale"], lib.len());
    for key in [
        "D", "Dn", "disp", "mode", "sides", "bits", "threads", "stripes", "kind", "format",
    ] {
        assert!(m["params"].get(key).is_some(), "manifest lacks {key}");
    }
    let art = &m["artifacts"][0];
    assert_eq!(art["bytes"], data.len());
    assert_eq!(art["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let o = resonate(&[
            "solve",
            "--D",
            "6",
            "--mode",
            "no-axes",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        (
            std::fs::read(&out).unwrap(),
            manifest(&out)["artifacts"][0]["sha256"].clone(),
        )
    };
    let (a, da) = run("a.jsonl", "1");
    let (b, db) = run("b.jsonl", "1");
    let (c, _) = run("c.jsonl", "3");
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(da, db);
}

#[test]
fn count_prints_the_library_total() {
    let o = resonate(&["count", "--disp", "planetary3", "--D", "1000"]);
    assert!(o.status.success());
    let lib = solve_three_wave(
        &Dispersion::planetary3(),
        &SpectralDomain::full(1000),
        SideConvention::Distinct,
    )
    .unwrap();
    assert_eq!(stdout(&o).trim(), lib.len().to_string());

    let o = resonate(&["count", "--D", "8", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("disp,D,mode,total,scale,angle,runtime_ms")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..3], &["gravity4", "8", "full-square"]);
    let (t, s, a): (u64, u64, u64) = (
        row[3].parse().unwrap(),
        row[4].parse().unwrap(),
        row[5].parse().unwrap(),
    );
    assert_eq!(t, s + a);
}

#[test]
fn exit_codes() {
    let o = resonate(&["oracle", "--disp", "gravity4", "--D", "20"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("D <= 16"));
    assert!(o.stdout.is_empty());

    assert_eq!(
        resonate(&["solve", "--disp", "gravity5", "--D", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        resonate(&["solve", "--D", "3", "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(resonate(&["solve"]).status.code(), Some(2));
    assert_eq!(resonate(&["frobnicate"]).status.code(), Some(2));
    // resource guards
    assert_eq!(
        resonate(&["solve", "--kind", "angle", "--D", "100"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(resonate(&["omega-d", "--D", "400"]).status.code(), Some(3));
    assert_eq!(
        resonate(&["count", "--D", "300", "--memory-mb", "0"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# test run\nD = 5\nmode = no-axes\nbits = 320\n").unwrap();
    let out = dir.path().join("o.jsonl");
    let o = resonate(&[
        "solve",
        "--config",
        cfg.to_str().unwrap(),
        "--D",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&out);
    assert_eq!(m["params"]["D"], "3");
    assert_eq!(m["params"]["mode"], "no-axes");
    assert_eq!(m["params"]["bits"], "320");
    assert_eq!(m["params"]["sides"], "distinct");

    std::fs::write(&cfg, "D: 5\n").unwrap();
    assert_eq!(
        resonate(&["solve", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn threads_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.txt");
    let o = Command::new(env!("CARGO_BIN_EXE_resonate"))
        .args(["count", "--D", "4", "--out", out.to_str().unwrap()])
        .env("RESONATE_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(manifest(&out)["params"]["threads"], "2");
}

#[test]
fn classify_and_participation() {
    let o = resonate(&["classify", "--lhs", "-1,-1;1,1", "--rhs", "-1,1;1,-1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["kind"], "angle");
    let o = resonate(&["classify", "--lhs", "1,0;1,2", "--rhs", "2,0;0,2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = resonate(&["participation", "--D", "1", "--k", "1,0"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(
        (v["scale"].as_u64(), v["angle"].as_u64()),
        (Some(0), Some(3))
    );
    assert_eq!(
        resonate(&["participation", "--D", "1", "--k", "5,0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn detuning_commands() {
    let o = resonate(&["omega-d", "--D", "2"]);
    let reports: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(reports.len(), 2);
    assert!(reports[0]["omega_d"]
        .as_str()
        .unwrap()
        .starts_with("2.763065"));
    assert_eq!(
        (&reports[0]["mode"], &reports[1]["mode"]),
        (&Value::from("unconstrained"), &Value::from("conserving"))
    );
    let o = resonate(&["omega-d", "--D", "2", "--over", "conserving"]);
    assert_eq!(stdout(&o).lines().count(), 1);
    assert_eq!(
        resonate(&["omega-d", "--D", "2", "--over", "sideways"])
            .status
            .code(),
        Some(2)
    );

    let o = resonate(&[
        "quasi",
        "--D",
        "1",
        "--width",
        "0.4",
        "--sides",
        "allow-repeats",
    ]);
    assert_eq!(stdout(&o).lines().count(), 8);
    assert!(stdout(&o).lines().all(|l| serde_json::from_str::<Value>(l)
        .unwrap()
        .get("detuning")
        .is_some()));
    assert_eq!(resonate(&["quasi", "--D", "1"]).status.code(), Some(2));

    let o = resonate(&["profile", "--D", "3"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 20);
    assert!(rows
        .iter()
        .filter(|r| r["below_omega_d"] == true)
        .all(|r| r["plateau"] == true));
}

#[test]
fn clusters_and_systems() {
    let o = resonate(&[
        "clusters", "--disp", "rossby3", "--mode", "no-axes", "--D", "50",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["tag"], "triangle");
    assert_eq!(v[0]["multiplicity"], 46);
    let o = resonate(&[
        "clusters", "--disp", "rossby3", "--mode", "no-axes", "--D", "50", "--format", "dot",
        "--class", "2",
    ]);
    assert!(stdout(&o).starts_with("graph"));
    let o = resonate(&["clusters", "--D", "2", "--format", "graphml"]);
    assert!(stdout(&o).contains("<graphml"));
    assert_eq!(
        resonate(&["clusters", "--D", "2", "--format", "svg"])
            .status
            .code(),
        Some(2)
    );

    let o = resonate(&[
        "gensys",
        "--disp",
        "rossby3",
        "--mode",
        "no-axes",
        "--D",
        "50",
        "--classes",
        "--coefs",
        "per-term",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with(
        "# class 1 triangle x46\ndA1/dt = a1*A2*A3\ndA2/dt = a2*A1*A3\ndA3/dt = a3*A1*A2\n"
    ));
    let o = resonate(&[
        "gensys", "--disp", "rossby3", "--mode", "no-axes", "--D", "20", "--format", "latex",
    ]);
    assert!(stdout(&o).contains("\\dot{A}_1 = \\alpha_1 A_2A_3"));
    let o = resonate(&[
        "gensys", "--disp", "rossby3", "--mode", "no-axes", "--D", "20", "--format", "json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v[0]["system"]["eqs"][0]["terms"][0]["factors"].is_array());
    assert_eq!(resonate(&["gensys", "--D", "3"]).status.code(), Some(2));
}

#[test]
fn verify_capillary() {
    let o = resonate(&["verify", "--disp", "capillary3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS  capillary3 empty D=128"));
    assert!(!text.contains("gravity4"));
}
