//! End-to-end runs of the binary. Golden reports live in `data/golden/`;
//! regenerate them with `PICARDKIT_BLESS=1 cargo test -p picardkit --test cli`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_picardkit");

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn picardkit(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.current_dir(manifest()).arg("--no-timing").args(args).env_remove("PICARDKIT_CACHE");
    if let Some(dir) = cache {
        cmd.env("PICARDKIT_CACHE", dir);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stderr(o)))
}

/// The CLI examples of the README, paths relative to this crate.
const GOLDEN: &[(&str, &str)] = &[
    ("p2_zeta", "zeta data/p2_f2.json"),
    ("quadric_counts", "count -n 4 data/quadric_split_f3.json"),
    ("elliptic_betti", "betti data/elliptic_f5_a.json"),
    ("cubic_tate", "tate-bound data/fermat_cubic_f2.json -p 1"),
    ("norm_quadric_rank", "rank --zeta data/quadric_norm_f2.json --cycles data/quadric_norm_f2_lines.json"),
    ("cubic_rank", "rank --zeta data/fermat_cubic_f2.json --cycles data/fermat_cubic_f2_lines.json"),
    ("enriques_torsion", "torsion data/enriques_sizes.json"),
    ("unipotent_rank", "galois-rank data/unipotent_family.json"),
    ("dovetail_demo", "dovetail --demo --tasks 8 --quanta 5000"),
];

#[test]
fn golden_reports() {
    let bless = std::env::var_os("PICARDKIT_BLESS").is_some();
    let dir = manifest().join("data/golden");
    for (name, cmd) in GOLDEN {
        let args: Vec<&str> = cmd.split_whitespace().collect();
        let out = picardkit(&args, None);
        assert!(out.status.success(), "{cmd}: {}", stderr(&out));
        let path = dir.join(format!("{name}.json"));
        if bless {
            fs::create_dir_all(&dir).unwrap();
            fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let want = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(stdout(&out), want, "{cmd}");
        // and again, byte for byte
        assert_eq!(picardkit(&args, None).stdout, out.stdout, "{cmd} is not deterministic");
    }
}

#[test]
fn readme_examples_are_golden_cases() {
    let readme = fs::read_to_string(manifest().join("../../README.md")).unwrap();
    let mut in_block = false;
    let mut seen = Vec::new();
    for line in readme.lines() {
        if line.trim_start().starts_with("```") {
            in_block = !in_block;
            continue;
        }
        let line = line.trim();
        if in_block && line.starts_with("picardkit ") && !line.starts_with("picardkit --help") {
            let cmd = line.trim_start_matches("picardkit ").replace("crates/picardkit/", "");
            assert!(GOLDEN.iter().any(|(_, c)| *c == cmd), "README example without a golden test: {line}");
            seen.push(cmd);
        }
    }
    for (_, c) in GOLDEN {
        assert!(seen.iter().any(|s| s == c), "golden case missing from the README: {c}");
    }
}

#[test]
fn report_fields() {
    let r = report(&picardkit(&["zeta", "data/fermat_cubic_f2.json"], None));
    assert_eq!(r["schema"], "picardkit.report/1");
    assert_eq!(r["counts"]["values"], serde_json::json!([7, 45, 73, 369]));
    assert_eq!(r["zeta"]["method"], "surface");
    assert_eq!(r["zeta"]["functionalEquation"]["holds"], true);
    assert_eq!(r["variety"]["smooth"], true);
    assert!(r.get("timing").is_none());

    let r = report(&picardkit(&["rank", "--zeta", "data/quadric_split_f2.json", "--cycles", "data/quadric_split_f2_lines.json"], None));
    assert_eq!(r["rank"]["status"], "halted");
    assert_eq!(r["rank"]["invariantsRank"], 2);
    assert_eq!(r["tate"][0]["vMu"], 2);

    let r = report(&picardkit(&["betti", "data/p2_f2.json"], None));
    assert_eq!(r["betti"]["betti"], serde_json::json!([1, 0, 1, 0, 1]));
    assert_eq!(r["betti"]["eulerCharacteristic"], 3);

    // a zeta file or an earlier report works in place of a spec
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("zeta.json");
    fs::write(&saved, picardkit(&["zeta", "data/fermat_cubic_f2.json"], None).stdout).unwrap();
    let r = report(&picardkit(&["tate-bound", saved.to_str().unwrap()], None));
    let v: Vec<u64> = r["tate"].as_array().unwrap().iter().map(|t| t["vMu"].as_u64().unwrap()).collect();
    assert_eq!(v, vec![1, 7, 1]);
}

#[test]
fn timing_is_reported_unless_disabled() {
    let out = Command::new(BIN)
        .current_dir(manifest())
        .args(["zeta", "data/p2_f2.json"])
        .env_remove("PICARDKIT_CACHE")
        .output()
        .unwrap();
    assert!(report(&out)["timing"]["elapsedMs"].is_u64());
}

#[test]
fn thread_count_does_not_change_results() {
    let spec = "data/elliptic_f5_c.json";
    let one = picardkit(&["--threads", "1", "count", "-n", "6", spec], None);
    let four = picardkit(&["--threads", "4", "count", "-n", "6", spec], None);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let spec = "data/elliptic_f5_b.json";
    let cold = report(&picardkit(&["zeta", spec], None));
    let first = report(&picardkit(&["zeta", spec], Some(dir.path())));
    let second = report(&picardkit(&["zeta", spec], Some(dir.path())));
    let n = cold["counts"]["values"].as_array().unwrap().len() as u64;
    assert_eq!(first["counts"]["fromCache"], 0);
    assert_eq!(second["counts"]["fromCache"], n);
    let strip = |mut r: Value| {
        r["counts"]["fromCache"] = Value::Null;
        r
    };
    assert_eq!(strip(cold.clone()), strip(first));
    assert_eq!(strip(cold), strip(second.clone()));

    // a torn final line is skipped, the rest is still used
    let log = dir.path().join("counts.ndjson");
    let mut text = fs::read_to_string(&log).unwrap();
    text.push_str("{\"hash\":\"abc\",\"n\":");
    fs::write(&log, text).unwrap();
    let third = report(&picardkit(&["zeta", spec], Some(dir.path())));
    assert_eq!(third, second);

    // --cache-dir works too, and the environment wins over it
    let other = tempfile::tempdir().unwrap();
    let flag = report(&picardkit(&["--cache-dir", other.path().to_str().unwrap(), "zeta", spec], Some(dir.path())));
    assert_eq!(flag["counts"]["fromCache"], n);
    assert!(!other.path().join("counts.ndjson").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let code = |o: &Output| o.status.code().unwrap();

    // invalid input
    for text in [
        "{",
        r#"{"field":{"p":4,"e":1},"ambientDim":2,"generators":[]}"#,
        r#"{"field":{"p":2,"e":1},"ambientDim":2,"generators":["x0 + x7"]}"#,
        r#"{"field":{"p":2,"e":1},"ambientDim":2,"generators":[],"colour":1}"#,
        r#"{"field":{"p":2,"e":1},"ambientDim":2,"generators":["x0^2 + x1"]}"#,
    ] {
        let out = picardkit(&["zeta", &write("bad.json", text)], None);
        assert_eq!(code(&out), 2, "{text}: {}", stderr(&out));
        assert!(out.stdout.is_empty());
        assert!(stderr(&out).starts_with("picardkit: "));
    }
    assert_eq!(code(&picardkit(&["zeta", "data/missing.json"], None)), 2);

    // budget
    let out = picardkit(&["--budget", "10", "zeta", "data/elliptic_f5_a.json"], None);
    assert_eq!(code(&out), 3, "{}", stderr(&out));

    // undecided: one line gives a lower bound of 1 against V_mu = 7
    let mut cyc: Value = serde_json::from_str(&fs::read_to_string(manifest().join("data/fermat_cubic_f2_lines.json")).unwrap()).unwrap();
    cyc["pairings"].as_array_mut().unwrap().truncate(1);
    cyc["cycleNames"].as_array_mut().unwrap().truncate(1);
    let one = write("one.json", &cyc.to_string());
    let out = picardkit(&["rank", "--zeta", "data/fermat_cubic_f2.json", "--cycles", &one], None);
    assert_eq!(code(&out), 4);
    let r = report(&out);
    assert_eq!(r["rank"]["status"], "running");
    assert_eq!(r["rank"]["lower"], 1);
    assert_eq!(r["rank"]["upper"], 7);

    // cache directory that cannot be created
    let file = write("plain", "");
    let out = picardkit(&["--cache-dir", &format!("{file}/sub"), "zeta", "data/p2_f2.json"], None);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
}

#[test]
fn checkpoint_resume() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("rank.json");
    let ck_s = ck.to_str().unwrap();
    let args = ["--checkpoint", ck_s, "rank", "--zeta", "data/fermat_cubic_f2.json", "--cycles", "data/fermat_cubic_f2_lines.json"];
    let first = picardkit(&args, None);
    assert!(first.status.success());
    let saved: Value = serde_json::from_str(&fs::read_to_string(&ck).unwrap()).unwrap();
    assert_eq!(saved["schema"], "picardkit.algorithm-b/1");
    assert_eq!(saved["lower"], 7);
    let again = picardkit(&args, None);
    assert_eq!(again.stdout, first.stdout);

    // other inputs refuse the checkpoint
    let other = ["--checkpoint", ck_s, "rank", "--zeta", "data/quadric_split_f2.json", "--cycles", "data/quadric_split_f2_lines.json"];
    assert_eq!(picardkit(&other, None).status.code(), Some(2));

    // a tampered certificate is rejected
    let mut bad = saved.clone();
    bad["best"]["matrix"][0][0] = Value::from(5);
    fs::write(&ck, bad.to_string()).unwrap();
    let out = picardkit(&args, None);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn dovetail_demo_trace_and_failure() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.ndjson");
    let out = picardkit(
        &["dovetail", "--demo", "--tasks", "12", "--quanta", "4000", "--inject-panic", "4", "--trace", trace.to_str().unwrap()],
        None,
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).is_empty());
    let r = report(&out);
    let d = &r["dovetail"];
    assert_eq!(d["failures"][0]["taskId"], 4);
    let lines: Vec<Value> =
        fs::read_to_string(&trace).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len() as u64, d["totalQuanta"].as_u64().unwrap());
    assert_eq!(lines.iter().filter(|l| l["status"] == "failed").count(), 1);
    // task 11 is not a square mod 1009 and never halts; the others do
    let halted: Vec<u64> = d["halts"].as_array().unwrap().iter().map(|h| h["taskId"].as_u64().unwrap()).collect();
    assert!(!halted.contains(&11) && !halted.contains(&4));
    for h in d["halts"].as_array().unwrap() {
        let (i, v) = (h["taskId"].as_u64().unwrap(), h["value"].as_u64().unwrap());
        assert_eq!(v * v % 1009, i);
        let line = &lines[h["atQuantum"].as_u64().unwrap() as usize - 1];
        assert_eq!(line["status"], "halted");
        assert_eq!(line["taskId"], i);
    }
    let rm: Vec<u64> = d["runningMax"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert!(rm.windows(2).all(|w| w[0] <= w[1]));
}
