use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

fn gabring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gabring")).args(args).output().expect("binary runs")
}

fn code_status(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_config(dir: &TempDir, name: &str, params: [&str; 5]) -> PathBuf {
    let path = dir.path().join(name);
    let [p, r, m, n, k] = params;
    let out = gabring(&["params", "--p", p, "--r", r, "--m", m, "--n", n, "--k", k, "-o", path_str(&path)]);
    assert_eq!(code_status(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn params_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = write_config(&dir, "a.json", ["2", "2", "4", "4", "2"]);
    let b = write_config(&dir, "b.json", ["2", "2", "4", "4", "2"]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let config: Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    assert_eq!(config["params"]["modulus_R"], serde_json::json!([0, 1]));
    assert_eq!(config["g"].as_array().unwrap().len(), 4);
}

#[test]
fn params_reject_long_support() {
    let out = gabring(&["params", "--p", "2", "--r", "2", "--m", "4", "--n", "5", "--k", "2"]);
    assert_eq!(code_status(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code_status(&gabring(&["frobnicate"])), 1);
    assert_eq!(code_status(&gabring(&["decode"])), 1);
    assert_eq!(code_status(&gabring(&["--help"])), 0);
}

#[test]
fn encode_decode_round_trip() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", ["2", "2", "4", "4", "2"]);
    let msg = dir.path().join("msg.json");
    let word = dir.path().join("word.json");
    let back = dir.path().join("back.json");
    fs::write(&msg, "[[[1],[2],[3],[0]],[[0],[0],[0],[1]]]\n").unwrap();
    let c = path_str(&config);
    assert_eq!(code_status(&gabring(&["encode", "--config", c, "-i", path_str(&msg), "-o", path_str(&word)])), 0);
    assert_eq!(code_status(&gabring(&["decode", "--config", c, "-i", path_str(&word), "-o", path_str(&back)])), 0);
    assert_eq!(fs::read(&msg).unwrap(), fs::read(&back).unwrap());
    let wb = gabring(&["decode", "--config", c, "-i", path_str(&word), "--decoder", "wb"]);
    assert_eq!(wb.stdout, fs::read(&msg).unwrap());
}

#[test]
fn raw_round_trip() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", ["2", "2", "16", "16", "8"]);
    let c = path_str(&config);
    let payload = dir.path().join("payload.bin");
    let word = dir.path().join("word.json");
    fs::write(&payload, b"rank metric").unwrap();
    let out = gabring(&["encode", "--config", c, "--raw", "-i", path_str(&payload), "-o", path_str(&word)]);
    assert_eq!(code_status(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = gabring(&["decode", "--config", c, "--raw", "-i", path_str(&word)]);
    assert_eq!(out.stdout, b"rank metric");
}

#[test]
fn corrupted_word_within_radius_decodes() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", ["2", "2", "4", "4", "2"]);
    let c = path_str(&config);
    let msg = dir.path().join("msg.json");
    let word = dir.path().join("word.json");
    fs::write(&msg, "[[[3],[1],[0],[2]],[[1],[1],[0],[0]]]\n").unwrap();
    gabring(&["encode", "--config", c, "-i", path_str(&msg), "-o", path_str(&word)]);
    // Adding the same element to every coordinate is an error of rank one.
    let mut w: Value = serde_json::from_slice(&fs::read(&word).unwrap()).unwrap();
    for x in w.as_array_mut().unwrap() {
        let first = &mut x[1][0];
        *first = Value::from((first.as_u64().unwrap() + 1) % 4);
    }
    fs::write(&word, w.to_string()).unwrap();
    let out = gabring(&["decode", "--config", c, "-i", path_str(&word), "--trace"]);
    assert_eq!(code_status(&out), 0);
    assert_eq!(out.stdout, fs::read(&msg).unwrap());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("error rank: 1"));
    assert!(stderr.contains("k=1 lambda="));
}

#[test]
fn random_noise_usually_fails() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", ["2", "2", "8", "8", "4"]);
    let c = path_str(&config);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let word = dir.path().join("noise.json");
    let mut failures = 0;
    for _ in 0..20 {
        let noise: Vec<Vec<Vec<u64>>> = (0..8).map(|_| (0..8).map(|_| vec![rng.gen_range(0..4)]).collect()).collect();
        fs::write(&word, serde_json::to_string(&noise).unwrap()).unwrap();
        let status = code_status(&gabring(&["decode", "--config", c, "-i", path_str(&word)]));
        assert!(status == 0 || status == 2);
        failures += usize::from(status == 2);
    }
    assert!(failures >= 15, "only {failures} of 20 noise words failed");
}

#[test]
fn malformed_word_exits_one() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", ["2", "2", "4", "4", "2"]);
    let word = dir.path().join("w.json");
    fs::write(&word, "[[[1],[2]]]").unwrap();
    assert_eq!(code_status(&gabring(&["decode", "--config", path_str(&config), "-i", path_str(&word)])), 1);
}

#[test]
fn simulate_is_seeded_and_succeeds_within_radius() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", ["2", "2", "8", "8", "4"]);
    let c = path_str(&config);
    let run = |extra: &[&str]| {
        let mut args = vec!["simulate", "--config", c, "--seed", "5", "--no-timing"];
        args.extend_from_slice(extra);
        gabring(&args)
    };
    let a = run(&["--trials", "50", "--rank", "2", "--decoder", "both"]);
    let b = run(&["--trials", "50", "--rank", "2", "--decoder", "both"]);
    assert_eq!(code_status(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).starts_with("trial,rank,profile,success,decoder,wall_time\n"));
    let rows = csv_rows(&a);
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r[1] == "2" && r[3] == "true"));
    let profiles: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    assert!(profiles.len() > 1);

    let zero = run(&["--trials", "10", "--profile", "0"]);
    assert!(csv_rows(&zero).iter().all(|r| r[1] == "0" && r[3] == "true"));

    let timed = gabring(&["simulate", "--config", c, "--trials", "3", "--rank", "1"]);
    assert!(csv_rows(&timed).iter().all(|r| r[5].parse::<f64>().is_ok()));
}

#[test]
fn simulate_rejects_unrealizable_profiles() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", ["2", "2", "4", "4", "2"]);
    let c = path_str(&config);
    assert_eq!(code_status(&gabring(&["simulate", "--config", c, "--profile", "5"])), 1);
    assert_eq!(code_status(&gabring(&["simulate", "--config", c, "--profile", "x^2"])), 1);
    assert_eq!(code_status(&gabring(&["simulate", "--config", c, "--rank", "1", "--trials", "0"])), 1);
}

#[test]
fn bench_reports_quadratic_growth() {
    let out = gabring(&["bench", "--n-grid", "16,32", "--trials", "1", "--decoder", "both", "--no-timing"]);
    assert_eq!(code_status(&out), 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 4);
    let ops = |n: &str, d: &str| -> f64 {
        rows.iter().find(|r| r[0] == n && r[1] == d).unwrap()[3].parse().unwrap()
    };
    let fast = ops("32", "fast") / ops("16", "fast");
    let wb = ops("32", "wb") / ops("16", "wb");
    assert!((3.2..=5.0).contains(&fast), "decode ratio {fast}");
    assert!(wb > fast, "reference ratio {wb} vs {fast}");

    let single = gabring(&["bench", "--n-grid", "8", "--trials", "1"]);
    assert_eq!(csv_rows(&single).len(), 1);
}
